//! Density of states at finite volume: eigenvalue-counting curves under the
//! three boundary conditions, the finite-volume trace-convergence probe,
//! Wegner and two-cube resonance experiments, and the Lifshitz-tail
//! ingredients (Neumann gap, tent function, small-cube ground-state tails).

use crate::disorder::{Distribution, Potential};
use crate::error::{Error, Result};
use crate::lattice::Cube;
use crate::operator::{build_h, BoundaryKind};
use crate::spectral::eigen;
use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

/// Monte-Carlo estimate with a 95% normal-approximation interval.
#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    pub trials: u64,
    pub mean: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub base_seed: u64,
}

impl McEstimate {
    pub fn from_samples(values: &[f64], base_seed: u64) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n.max(1.0);
        let half = 1.96 * (var / n).sqrt();
        McEstimate {
            trials: values.len() as u64,
            mean,
            ci_lo: mean - half,
            ci_hi: mean + half,
            base_seed,
        }
    }

    /// Wilson score interval (does not degenerate at 0 or n successes).
    pub fn from_bernoulli(trials: u64, successes: u64, base_seed: u64) -> Self {
        let n = trials as f64;
        let p = successes as f64 / n;
        let z = 1.96f64;
        let z2 = z * z;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        McEstimate {
            trials,
            mean: p,
            ci_lo: (center - half).max(0.0),
            ci_hi: (center + half).min(1.0),
            base_seed,
        }
    }
}

/// Eigenvalues of `H_Λ^X(V_r)` for realization `r`.
fn realization_eigenvalues(
    cube: &Cube,
    bc: BoundaryKind,
    dist: &Distribution,
    seed: u64,
    realization: u64,
) -> Result<Vec<f64>> {
    let pot = Potential::sample(cube, dist, seed, realization)?;
    let h = build_h(cube, bc, Some(&pot))?;
    Ok(eigen(&h, false)?.eigenvalues)
}

/// Finite-volume IDS estimate `E_V [ N(H_Λ^X, E) / |Λ| ]` at one energy.
pub fn ids_estimate(
    energy: f64,
    radius: i64,
    d: usize,
    bc: BoundaryKind,
    dist: &Distribution,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    let cube = Cube::centered(d, radius)?;
    let vol = cube.volume() as f64;
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|r| {
            let evs = realization_eigenvalues(&cube, bc, dist, seed, r)?;
            Ok(evs.iter().filter(|&&l| l < energy).count() as f64 / vol)
        })
        .collect::<Result<_>>()?;
    Ok(McEstimate::from_samples(&values, seed))
}

/// A finite-volume IDS curve on an ascending energy grid.
#[derive(Debug, Clone, Serialize)]
pub struct IdsCurve {
    pub energies: Vec<f64>,
    pub values: Vec<f64>,
    pub ci_lo: Vec<f64>,
    pub ci_hi: Vec<f64>,
    pub radius: i64,
    pub bc: BoundaryKind,
    pub trials: u64,
    pub seed: u64,
}

pub fn ids_curve(
    energies: &[f64],
    radius: i64,
    d: usize,
    bc: BoundaryKind,
    dist: &Distribution,
    trials: u64,
    seed: u64,
) -> Result<IdsCurve> {
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    if energies.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("energy grid must ascend".into()));
    }
    let cube = Cube::centered(d, radius)?;
    let vol = cube.volume() as f64;
    let per_real: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|r| {
            let evs = realization_eigenvalues(&cube, bc, dist, seed, r)?;
            Ok(energies
                .iter()
                .map(|&e| evs.iter().filter(|&&l| l < e).count() as f64 / vol)
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(energies.len());
    let mut ci_lo = Vec::with_capacity(energies.len());
    let mut ci_hi = Vec::with_capacity(energies.len());
    for j in 0..energies.len() {
        let col: Vec<f64> = per_real.iter().map(|row| row[j]).collect();
        let est = McEstimate::from_samples(&col, seed);
        values.push(est.mean);
        ci_lo.push(est.ci_lo);
        ci_hi.push(est.ci_hi);
    }
    Ok(IdsCurve {
        energies: energies.to_vec(),
        values,
        ci_lo,
        ci_hi,
        radius,
        bc,
        trials,
        seed,
    })
}

/// Frozen envelope constant for the trace-convergence probe: the per-site
/// trace difference obeys `|trace gap| <= C' / ((Im z)^2 L)`. Measured on the
/// free system and seeded disorder at d=1, L in {10,20,40}, Im z in {1,2,4}
/// (implied constants 0.12..0.21), then tripled; regression-locked by the
/// unit tests.
pub const TRACE_PROBE_ENVELOPE: f64 = 0.62;

#[derive(Debug, Clone, Serialize)]
pub struct TraceProbe {
    pub radius: i64,
    pub buffer: i64,
    pub im_z: f64,
    /// `| tr_site (H_Λ - z)^{-1} - tr_site χ_Λ (H_Λ₊B - z)^{-1} |`
    pub difference: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Per-site trace of the small-cube resolvent against the restriction of a
/// buffered cube's resolvent; the gap is a boundary effect of order `L^{d-1}`.
pub fn ids_convergence_probe(
    z: Complex<f64>,
    radius: i64,
    buffer: i64,
    d: usize,
    potential: Option<(&Distribution, u64, u64)>,
) -> Result<TraceProbe> {
    if z.im == 0.0 {
        return Err(Error::Domain("probe needs Im z != 0".into()));
    }
    let small = Cube::centered(d, radius)?;
    let big = Cube::centered(d, radius + buffer)?;
    let pot_big = match potential {
        Some((dist, seed, real)) => Potential::sample(&big, dist, seed, real)?,
        None => Potential::zero(&big.region()),
    };
    let pot_small = pot_big.restrict(&small.region())?;
    let diag_sum = |cube: &Cube, pot: &Potential, over: &Cube| -> Result<Complex<f64>> {
        let h = build_h(cube, BoundaryKind::Simple, Some(pot))?;
        let spec = eigen(&h, true)?;
        let v = spec.eigenvectors.as_ref().unwrap();
        let region = cube.region();
        let mut acc = Complex::new(0.0, 0.0);
        for (i, s) in region.sites().iter().enumerate() {
            if !over.contains(s) {
                continue;
            }
            for k in 0..region.len() {
                let w = v[(i, k)] * v[(i, k)];
                acc += w / (Complex::new(spec.eigenvalues[k], 0.0) - z);
            }
        }
        Ok(acc)
    };
    let vol = small.volume() as f64;
    let t_small = diag_sum(&small, &pot_small, &small)? / vol;
    let t_big = diag_sum(&big, &pot_big, &small)? / vol;
    let difference = (t_small - t_big).norm();
    let bound = TRACE_PROBE_ENVELOPE / (z.im * z.im * radius as f64);
    Ok(TraceProbe {
        radius,
        buffer,
        im_z: z.im,
        difference,
        bound,
        pass: difference <= bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WegnerReport {
    /// Mean count of eigenvalues in `(E-ε, E+ε]` per realization.
    pub estimate: McEstimate,
    /// `4 |g|_inf |Λ| ε`
    pub bound: f64,
    pub pass: bool,
    pub energy: f64,
    pub eps: f64,
    pub volume: usize,
}

/// Expected eigenvalue count in an ε-window against the explicit Wegner
/// bound `4 |g|_inf |Λ| ε`; refuses ensembles without a density.
pub fn wegner_experiment(
    energy: f64,
    eps: f64,
    cube: &Cube,
    dist: &Distribution,
    trials: u64,
    seed: u64,
) -> Result<WegnerReport> {
    let g = dist
        .density_bound()
        .ok_or_else(|| Error::NoDensity("Wegner hypothesis needs a bounded density".into()))?;
    if eps <= 0.0 {
        return Err(Error::Domain("eps must be positive".into()));
    }
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    let counts: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|r| {
            let evs = realization_eigenvalues(cube, BoundaryKind::Simple, dist, seed, r)?;
            Ok(evs
                .iter()
                .filter(|&&l| l > energy - eps && l <= energy + eps)
                .count() as f64)
        })
        .collect::<Result<_>>()?;
    let estimate = McEstimate::from_samples(&counts, seed);
    let bound = 4.0 * g * cube.volume() as f64 * eps;
    Ok(WegnerReport {
        pass: estimate.ci_hi <= bound,
        estimate,
        bound,
        energy,
        eps,
        volume: cube.volume(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoCubeReport {
    /// Probability that the spectra come ε-close.
    pub estimate: McEstimate,
    /// `8 |g|_inf ε |Λ₁| |Λ₂|`
    pub bound: f64,
    pub pass: bool,
    pub eps: f64,
}

/// Probability that two disjoint cubes have ε-close spectra, against the
/// uniform two-cube Wegner bound `8 |g|_inf ε |Λ₁||Λ₂|`.
pub fn two_cube_resonance_experiment(
    cube1: &Cube,
    cube2: &Cube,
    eps: f64,
    dist: &Distribution,
    trials: u64,
    seed: u64,
) -> Result<TwoCubeReport> {
    let g = dist
        .density_bound()
        .ok_or_else(|| Error::NoDensity("two-cube Wegner needs a bounded density".into()))?;
    if !cube1.disjoint(cube2) {
        return Err(Error::Domain(
            "cubes must be disjoint for independent potentials".into(),
        ));
    }
    if eps < 0.0 || trials == 0 {
        return Err(Error::Domain("need eps >= 0 and trials >= 1".into()));
    }
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|r| {
            let e1 = realization_eigenvalues(cube1, BoundaryKind::Simple, dist, seed, r)?;
            let e2 = realization_eigenvalues(cube2, BoundaryKind::Simple, dist, seed, r)?;
            Ok(u64::from(sorted_min_gap(&e1, &e2) < eps))
        })
        .collect::<Result<Vec<u64>>>()?
        .iter()
        .sum();
    let estimate = McEstimate::from_bernoulli(trials, hits, seed);
    let bound = 8.0 * g * eps * cube1.volume() as f64 * cube2.volume() as f64;
    Ok(TwoCubeReport {
        pass: estimate.ci_hi <= bound,
        estimate,
        bound,
        eps,
    })
}

/// Minimum distance between two ascending lists (two-pointer merge).
pub fn sorted_min_gap(a: &[f64], b: &[f64]) -> f64 {
    let (mut i, mut j) = (0usize, 0usize);
    let mut best = f64::INFINITY;
    while i < a.len() && j < b.len() {
        best = best.min((a[i] - b[j]).abs());
        if a[i] < b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    best
}

/// Frozen threshold constant for the small-cube ground-state tail probe:
/// the event is `E_0(H^N_{Λ_ℓ}) < 1/(β ℓ²)`. β is calibrated once so the
/// probability stays measurable at desk scale for d=1 Uniform(0,1)
/// (0.59 at ℓ=3 down to 1.5e-4 at ℓ=6 over 1e5 trials) and then locked.
pub const TAIL_BETA: f64 = 0.25;

#[derive(Debug, Clone, Serialize)]
pub struct LifshitzReport {
    pub radii: Vec<i64>,
    /// `L² E₁((H₀)^N_{Λ_L})` per radius (the Neumann gap constant).
    pub neumann_gap_scaled: Vec<f64>,
    /// Tent-function Rayleigh quotients times `L²` (the constant c₀).
    pub tent_scaled: Vec<f64>,
    /// Small-cube tail estimates `P(E₀(H^N) < 1/(β ℓ²))` per probe radius.
    pub tail_radii: Vec<i64>,
    pub tail_estimates: Vec<McEstimate>,
    /// Double-log slope `Δ ln|ln N| / Δ ln E` from small-energy IDS data
    /// (diagnostic only; no pass threshold).
    pub double_log_slope: Option<f64>,
}

/// Free Neumann gap `E₁((H₀)^N_{Λ_L})` (exact oracle: `4 sin²(π/(2(2L+1)))`
/// per axis in d=1; computed here by the eigensolver).
pub fn free_neumann_gap(d: usize, radius: i64) -> Result<f64> {
    let cube = Cube::centered(d, radius)?;
    let h = build_h(&cube, BoundaryKind::Neumann, None)?;
    Ok(eigen(&h, false)?.eigenvalues[1])
}

/// Rayleigh quotient of the tent function `ψ(n) = L - |n|_inf` on the free
/// Dirichlet Laplacian.
pub fn tent_rayleigh_quotient(d: usize, radius: i64) -> Result<f64> {
    let cube = Cube::centered(d, radius)?;
    let region = cube.region();
    let h = build_h(&cube, BoundaryKind::Dirichlet, None)?;
    let psi: Vec<f64> = region
        .sites()
        .iter()
        .map(|s| (radius - s.dist_inf(cube.center())) as f64)
        .collect();
    let mut hpsi = vec![0.0; region.len()];
    h.matvec(&psi, &mut hpsi);
    let num: f64 = psi.iter().zip(&hpsi).map(|(a, b)| a * b).sum();
    let den: f64 = psi.iter().map(|x| x * x).sum();
    Ok(num / den)
}

/// Tail probability `P(E₀(H^N_{Λ_ℓ}) < 1/(β ℓ²))` by Monte Carlo.
pub fn neumann_tail_probability(
    d: usize,
    radius: i64,
    dist: &Distribution,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    let cube = Cube::centered(d, radius)?;
    let threshold = 1.0 / (TAIL_BETA * (radius * radius) as f64);
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|r| {
            let evs = realization_eigenvalues(&cube, BoundaryKind::Neumann, dist, seed, r)?;
            Ok(u64::from(evs[0] < threshold))
        })
        .collect::<Result<Vec<u64>>>()?
        .iter()
        .sum();
    Ok(McEstimate::from_bernoulli(trials, hits, seed))
}

/// The Lifshitz-tail ingredient probes, bundled.
pub fn lifshitz_probes(
    d: usize,
    radii: &[i64],
    dist: &Distribution,
    tail_radii: &[i64],
    tail_trials: u64,
    seed: u64,
) -> Result<LifshitzReport> {
    if radii.iter().any(|&l| l < 2) {
        return Err(Error::Domain("probe radii must be >= 2".into()));
    }
    let mut neumann_gap_scaled = Vec::new();
    let mut tent_scaled = Vec::new();
    for &l in radii {
        neumann_gap_scaled.push((l * l) as f64 * free_neumann_gap(d, l)?);
        tent_scaled.push((l * l) as f64 * tent_rayleigh_quotient(d, l)?);
    }
    let mut tail_estimates = Vec::new();
    for &l in tail_radii {
        tail_estimates.push(neumann_tail_probability(d, l, dist, tail_trials, seed)?);
    }
    // double-log diagnostic from a small-energy IDS curve
    let (lo, _hi) = dist.support();
    let radius = *radii.last().unwrap();
    let grid: Vec<f64> = (1..=8).map(|i| lo + 0.05 * i as f64).collect();
    let curve = ids_curve(&grid, radius, d, BoundaryKind::Simple, dist, 200.min(tail_trials.max(1)), seed)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (e, v) in curve.energies.iter().zip(&curve.values) {
        if *v > 0.0 && *v < 1.0 && *e > lo {
            xs.push((e - lo).ln());
            ys.push((-(v.ln())).ln());
        }
    }
    let double_log_slope = if xs.len() >= 3 {
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        Some(sxy / sxx)
    } else {
        None
    };
    Ok(LifshitzReport {
        radii: radii.to_vec(),
        neumann_gap_scaled,
        tent_scaled,
        tail_radii: tail_radii.to_vec(),
        tail_estimates,
        double_log_slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIFORM01: Distribution = Distribution::Uniform { a: 0.0, b: 1.0 };

    #[test]
    fn ids_extremes() {
        // below the support with V >= 0 the Neumann count at E <= 0 is 0
        let est = ids_estimate(0.0, 5, 1, BoundaryKind::Neumann, &UNIFORM01, 20, 1).unwrap();
        assert_eq!(est.mean, 0.0);
        // above b0 + 4d everything is counted
        let est = ids_estimate(1.0 + 4.0 + 0.01, 5, 1, BoundaryKind::Simple, &UNIFORM01, 20, 1)
            .unwrap();
        assert_eq!(est.mean, 1.0);
    }

    #[test]
    fn ids_bc_agreement_within_boundary_rank() {
        // boundary perturbation has rank <= 2 in d=1, so the three
        // counting functions differ by at most ~3 states out of 2L+1
        let l = 20i64;
        let e = 2.5;
        let s = ids_estimate(e, l, 1, BoundaryKind::Simple, &UNIFORM01, 50, 2).unwrap();
        let n = ids_estimate(e, l, 1, BoundaryKind::Neumann, &UNIFORM01, 50, 2).unwrap();
        let dd = ids_estimate(e, l, 1, BoundaryKind::Dirichlet, &UNIFORM01, 50, 2).unwrap();
        let tol = 3.0 / (2.0 * l as f64 + 1.0) + 0.05;
        assert!((s.mean - n.mean).abs() <= tol);
        assert!((s.mean - dd.mean).abs() <= tol);
        // pointwise ordering N^D <= N^simple <= N^N per realization
        // (bracketing transported through the counting function)
        let cube = Cube::centered(1, 6).unwrap();
        for r in 0..20u64 {
            let count = |bc| {
                realization_eigenvalues(&cube, bc, &UNIFORM01, 2, r)
                    .unwrap()
                    .iter()
                    .filter(|&&x| x < e)
                    .count()
            };
            let (cn, cs, cd) = (
                count(BoundaryKind::Neumann),
                count(BoundaryKind::Simple),
                count(BoundaryKind::Dirichlet),
            );
            assert!(cd <= cs && cs <= cn, "r={r}: {cd} {cs} {cn}");
        }
    }

    #[test]
    fn ids_curve_monotone_in_unit_interval() {
        let grid: Vec<f64> = (0..20).map(|i| -0.5 + 0.3 * i as f64).collect();
        let c = ids_curve(&grid, 8, 1, BoundaryKind::Simple, &UNIFORM01, 30, 3).unwrap();
        assert!(c.values.windows(2).all(|w| w[0] <= w[1] + 1e-15));
        assert!(c.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn self_averaging_variance_decreases() {
        let e = 2.0;
        let spread = |l: i64| {
            let cube = Cube::centered(1, l).unwrap();
            let vol = cube.volume() as f64;
            let vals: Vec<f64> = (0..60u64)
                .map(|r| {
                    let evs =
                        realization_eigenvalues(&cube, BoundaryKind::Simple, &UNIFORM01, 4, r)
                            .unwrap();
                    evs.iter().filter(|&&x| x < e).count() as f64 / vol
                })
                .collect();
            let m = vals.iter().sum::<f64>() / vals.len() as f64;
            vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / vals.len() as f64
        };
        assert!(spread(24) < spread(6));
    }

    #[test]
    fn trace_probe_decays_in_radius_and_im_z() {
        let diffs: Vec<f64> = [10i64, 20, 40]
            .iter()
            .map(|&l| {
                ids_convergence_probe(Complex::new(2.0, 1.0), l, l, 1, None)
                    .unwrap()
                    .difference
            })
            .collect();
        // halves (within a generous band) per doubling
        assert!(diffs[1] / diffs[0] < 0.8);
        assert!(diffs[2] / diffs[1] < 0.8);
        let probes: Vec<TraceProbe> = [1.0, 2.0, 4.0]
            .iter()
            .map(|&im| ids_convergence_probe(Complex::new(2.0, im), 10, 10, 1, None).unwrap())
            .collect();
        assert!(probes.iter().all(|p| p.pass));
        // (Im z)^-2 scaling within a factor 3
        let r1 = probes[1].difference / probes[0].difference;
        let r2 = probes[2].difference / probes[1].difference;
        assert!(r1 < 0.25 * 3.0 && r2 < 0.25 * 3.0, "r1={r1} r2={r2}");
    }

    #[test]
    fn trace_probe_disordered_within_envelope() {
        for r in 0..5u64 {
            let p = ids_convergence_probe(
                Complex::new(2.0, 1.0),
                12,
                12,
                1,
                Some((&UNIFORM01, 9, r)),
            )
            .unwrap();
            assert!(p.pass, "difference {} bound {}", p.difference, p.bound);
        }
    }

    #[test]
    fn wegner_bound_and_linearity() {
        let cube = Cube::centered(1, 2).unwrap();
        let w1 = wegner_experiment(2.5, 0.05, &cube, &UNIFORM01, 4000, 5).unwrap();
        assert!(w1.pass, "mean {} bound {}", w1.estimate.mean, w1.bound);
        assert!((w1.bound - 1.0).abs() < 1e-12); // 4 * 1 * 5 * 0.05
        let w2 = wegner_experiment(2.5, 0.025, &cube, &UNIFORM01, 4000, 5).unwrap();
        let ratio = w2.estimate.mean / w1.estimate.mean;
        assert!((0.3..=0.7).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn wegner_counts_fit_a_line_through_the_origin() {
        let cube = Cube::centered(1, 2).unwrap();
        let eps0 = 0.05;
        let epsilons = [eps0, eps0 / 2.0, eps0 / 4.0];
        let means: Vec<f64> = epsilons
            .iter()
            .map(|&e| {
                wegner_experiment(2.5, e, &cube, &UNIFORM01, 10_000, 55)
                    .unwrap()
                    .estimate
                    .mean
            })
            .collect();
        // least squares through the origin: slope = Σxy / Σx², then R²
        let sxy: f64 = epsilons.iter().zip(&means).map(|(x, y)| x * y).sum();
        let sxx: f64 = epsilons.iter().map(|x| x * x).sum();
        let slope = sxy / sxx;
        let my = means.iter().sum::<f64>() / means.len() as f64;
        let ss_res: f64 = epsilons
            .iter()
            .zip(&means)
            .map(|(x, y)| (y - slope * x).powi(2))
            .sum();
        let ss_tot: f64 = means.iter().map(|y| (y - my).powi(2)).sum();
        let r2 = 1.0 - ss_res / ss_tot;
        assert!(r2 >= 0.9, "R² = {r2} for means {means:?}");
    }

    #[test]
    fn wegner_refuses_bernoulli() {
        let cube = Cube::centered(1, 2).unwrap();
        let b = Distribution::Bernoulli { p: 0.5, v0: 0.0, v1: 1.0 };
        assert!(matches!(
            wegner_experiment(0.5, 0.05, &cube, &b, 10, 1),
            Err(Error::NoDensity(_))
        ));
    }

    #[test]
    fn two_cube_scaling_and_zero_eps() {
        let c1 = Cube::centered(1, 2).unwrap();
        let c2 = Cube::new(crate::lattice::site(&[10]), 2).unwrap();
        let z = two_cube_resonance_experiment(&c1, &c2, 0.0, &UNIFORM01, 500, 6).unwrap();
        assert_eq!(z.estimate.mean, 0.0);
        let a = two_cube_resonance_experiment(&c1, &c2, 0.02, &UNIFORM01, 4000, 6).unwrap();
        let b = two_cube_resonance_experiment(&c1, &c2, 0.04, &UNIFORM01, 4000, 6).unwrap();
        assert!(a.pass && b.pass);
        let ratio = b.estimate.mean / a.estimate.mean;
        assert!((1.4..=2.6).contains(&ratio), "ratio {ratio}");
        // overlap refused
        let c3 = Cube::new(crate::lattice::site(&[3]), 2).unwrap();
        assert!(two_cube_resonance_experiment(&c1, &c3, 0.02, &UNIFORM01, 10, 6).is_err());
    }

    #[test]
    fn neumann_gap_matches_closed_form() {
        for l in [8i64, 16, 32] {
            let gap = free_neumann_gap(1, l).unwrap();
            let n = (2 * l + 1) as f64;
            let oracle = 4.0 * (std::f64::consts::PI / (2.0 * n)).sin().powi(2);
            assert!((gap - oracle).abs() <= 1e-10, "L={l}");
            let scaled = (l * l) as f64 * gap;
            assert!((1.0..=15.0).contains(&scaled), "L²E₁ = {scaled}");
        }
    }

    #[test]
    fn tent_quotient_is_order_l_minus_two() {
        let mut scaled = Vec::new();
        for l in [8i64, 16, 32] {
            let q = tent_rayleigh_quotient(1, l).unwrap();
            scaled.push((l * l) as f64 * q);
        }
        assert!(scaled.iter().all(|&c| c <= 30.0), "{scaled:?}");
        // L-independence of the constant: spread within a factor 2
        let max = scaled.iter().cloned().fold(f64::MIN, f64::max);
        let min = scaled.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min < 2.0, "{scaled:?}");
    }

    #[test]
    fn sorted_min_gap_matches_brute_force() {
        let a: Vec<f64> = vec![0.1, 0.5, 2.0];
        let b = vec![-1.0, 0.45, 3.0];
        let mut brute = f64::INFINITY;
        for x in &a {
            for y in &b {
                brute = brute.min((x - y).abs());
            }
        }
        assert_eq!(sorted_min_gap(&a, &b), brute);
    }
}
