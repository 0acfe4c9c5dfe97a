//! Time evolution on finite cubes and the RAGE-type diagnostics: survival
//! profiles, Wiener time-averages, and transport moments.

use crate::error::{Error, Result};
use crate::lattice::Region;
use crate::operator::HamMatrix;
use crate::spectral::eigen;
use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Serialize;

/// Eigendecomposition plus the spectral coefficients of the initial state.
pub struct EvolutionPlan {
    region: Region,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    /// `c_j = <φ_j, ψ₀>`
    coeffs: Vec<f64>,
}

impl EvolutionPlan {
    pub fn new(h: &HamMatrix, psi0: &[f64]) -> Result<Self> {
        let n = h.n();
        if psi0.len() != n {
            return Err(Error::Domain("initial state length mismatch".into()));
        }
        let norm: f64 = psi0.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("initial state norm {norm} != 1")));
        }
        let spec = eigen(h, true)?;
        let v = spec.eigenvectors.as_ref().unwrap();
        let coeffs: Vec<f64> = (0..n)
            .map(|k| (0..n).map(|i| v[(i, k)] * psi0[i]).sum())
            .collect();
        Ok(EvolutionPlan {
            region: h.region().clone(),
            eigenvalues: spec.eigenvalues,
            eigenvectors: spec.eigenvectors.unwrap(),
            coeffs,
        })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Spectral weights `|<φ_j, ψ₀>|²` (a probability vector).
    pub fn weights(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c * c).collect()
    }

    /// Time step that resolves the fastest relative phase.
    pub fn quadrature_step(&self) -> f64 {
        let radius = self
            .eigenvalues
            .iter()
            .fold(0.0f64, |acc, e| acc.max(e.abs()));
        std::f64::consts::PI / (4.0 * radius.max(1e-9))
    }

    /// `ψ(t) = Σ_j e^{-i t E_j} <φ_j, ψ₀> φ_j`
    pub fn evolve(&self, t: f64) -> Vec<Complex<f64>> {
        let n = self.eigenvalues.len();
        let phases: Vec<Complex<f64>> = self
            .eigenvalues
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| Complex::from_polar(*c, -t * e))
            .collect();
        let mut out = vec![Complex::new(0.0, 0.0); n];
        for k in 0..n {
            let p = phases[k];
            if p.norm_sqr() > 0.0 {
                for i in 0..n {
                    out[i] += self.eigenvectors[(i, k)] * p;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurvivalProfile {
    pub radii: Vec<i64>,
    /// Time-averaged probability mass inside each radius over [0, T].
    pub inside: Vec<f64>,
    pub outside: Vec<f64>,
    pub t_max: f64,
    pub samples: usize,
    /// Worst deviation of total mass from 1 over the grid (unitarity audit).
    pub mass_defect: f64,
}

/// Time-averaged inside/outside masses for a list of inner radii.
pub fn survival_profile(plan: &EvolutionPlan, radii: &[i64], t_max: f64) -> Result<SurvivalProfile> {
    let center = plan
        .region
        .sites()
        .iter()
        .min_by_key(|s| s.norm_inf())
        .unwrap()
        .clone();
    let max_radius = plan
        .region
        .sites()
        .iter()
        .map(|s| s.dist_inf(&center))
        .max()
        .unwrap();
    if radii.iter().any(|&r| r > max_radius) {
        return Err(Error::Domain("inner radius exceeds the cube".into()));
    }
    let step = plan.quadrature_step().min(t_max / 8.0);
    let samples = (t_max / step).ceil() as usize + 1;
    let dt = t_max / (samples - 1) as f64;
    let mut inside_acc = vec![0.0f64; radii.len()];
    let mut mass_defect = 0.0f64;
    for s in 0..samples {
        let t = s as f64 * dt;
        let psi = plan.evolve(t);
        let weight = if s == 0 || s == samples - 1 { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for (i, site) in plan.region.sites().iter().enumerate() {
            let m = psi[i].norm_sqr();
            total += m;
            for (ri, &r) in radii.iter().enumerate() {
                if site.dist_inf(&center) <= r {
                    inside_acc[ri] += weight * m;
                }
            }
        }
        mass_defect = mass_defect.max((total - 1.0).abs());
    }
    let denom = (samples - 1) as f64;
    let inside: Vec<f64> = inside_acc.iter().map(|v| v / denom).collect();
    let outside: Vec<f64> = inside.iter().map(|v| 1.0 - v).collect();
    Ok(SurvivalProfile {
        radii: radii.to_vec(),
        inside,
        outside,
        t_max,
        samples,
        mass_defect,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WienerAverage {
    /// `(1/T) ∫₀ᵀ |μ̂(t)|² dt` by trapezoidal quadrature.
    pub numeric: f64,
    /// `Σ_atoms (grouped weight)²` — the exact limit.
    pub atomic_sum: f64,
    pub t_max: f64,
}

/// Wiener's time-average of the spectral measure `μ = Σ w_j δ_{E_j}`.
/// Degenerate energies are grouped (tolerance 1e-9) before squaring.
pub fn wiener_average(weights: &[f64], energies: &[f64], t_max: f64) -> Result<WienerAverage> {
    if weights.len() != energies.len() {
        return Err(Error::Domain("weights/energies length mismatch".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::Domain(format!("weights sum to {total}, not 1")));
    }
    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&a, &b| energies[a].partial_cmp(&energies[b]).unwrap());
    let mut atomic_sum = 0.0;
    let mut group_w = 0.0;
    let mut group_e = f64::NEG_INFINITY;
    for &i in &order {
        if (energies[i] - group_e).abs() <= 1e-9 {
            group_w += weights[i];
        } else {
            atomic_sum += group_w * group_w;
            group_w = weights[i];
            group_e = energies[i];
        }
    }
    atomic_sum += group_w * group_w;

    let radius = energies.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    let step = (std::f64::consts::PI / (4.0 * radius.max(1e-9))).min(t_max / 8.0);
    let samples = (t_max / step).ceil() as usize + 1;
    let dt = t_max / (samples - 1) as f64;
    let mut acc = 0.0;
    for s in 0..samples {
        let t = s as f64 * dt;
        let mut mu_hat = Complex::new(0.0, 0.0);
        for (w, e) in weights.iter().zip(energies) {
            mu_hat += Complex::from_polar(*w, -t * e);
        }
        let weight = if s == 0 || s == samples - 1 { 0.5 } else { 1.0 };
        acc += weight * mu_hat.norm_sqr();
    }
    Ok(WienerAverage {
        numeric: acc / (samples - 1) as f64,
        atomic_sum,
        t_max,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentProfile {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub max: f64,
}

/// `|((|X|)^p ψ(t))|` over a time grid, with `|X|ψ(n) = |n|_inf ψ(n)`,
/// optionally after a spectral filter onto eigenpairs with `E_j` in a window.
pub fn transport_moment(
    plan: &EvolutionPlan,
    p: f64,
    times: &[f64],
    filter: Option<(f64, f64)>,
) -> Result<MomentProfile> {
    if p < 0.0 {
        return Err(Error::Domain("moment order p must be >= 0".into()));
    }
    let n = plan.eigenvalues.len();
    let mask: Vec<bool> = plan
        .eigenvalues
        .iter()
        .map(|e| filter.map_or(true, |(lo, hi)| *e >= lo && *e <= hi))
        .collect();
    let site_weight: Vec<f64> = plan
        .region
        .sites()
        .iter()
        .map(|s| (s.norm_inf() as f64).powf(p))
        .collect();
    let mut values = Vec::with_capacity(times.len());
    let mut max = 0.0f64;
    for &t in times {
        // filtered evolution
        let mut psi = vec![Complex::new(0.0, 0.0); n];
        for k in 0..n {
            if !mask[k] {
                continue;
            }
            let phase = Complex::from_polar(plan.coeffs[k], -t * plan.eigenvalues[k]);
            if phase.norm_sqr() > 0.0 {
                for i in 0..n {
                    psi[i] += plan.eigenvectors[(i, k)] * phase;
                }
            }
        }
        let v: f64 = psi
            .iter()
            .zip(&site_weight)
            .map(|(a, w)| (w * w) * a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        values.push(v);
        max = max.max(v);
    }
    Ok(MomentProfile {
        times: times.to_vec(),
        values,
        max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disorder::{Distribution, Potential};
    use crate::lattice::Cube;
    use crate::operator::{build_h, BoundaryKind};

    fn delta_at_origin(cube: &Cube) -> Vec<f64> {
        let region = cube.region();
        let mut psi = vec![0.0; region.len()];
        let idx = region
            .index_of(&crate::lattice::Site::origin(cube.dim()))
            .unwrap();
        psi[idx] = 1.0;
        psi
    }

    #[test]
    fn evolve_identity_at_t0_and_unitarity() {
        let cube = Cube::centered(1, 4).unwrap();
        let dist = Distribution::Uniform { a: 0.0, b: 2.0 };
        let pot = Potential::sample(&cube, &dist, 2, 0).unwrap();
        let h = build_h(&cube, BoundaryKind::Simple, Some(&pot)).unwrap();
        let psi0 = delta_at_origin(&cube);
        let plan = EvolutionPlan::new(&h, &psi0).unwrap();
        let at0 = plan.evolve(0.0);
        for (a, b) in at0.iter().zip(&psi0) {
            assert!((a.re - b).abs() < 1e-10 && a.im.abs() < 1e-10);
        }
        for t in [0.5, 3.0, 17.0, 120.0] {
            let psi = plan.evolve(t);
            let mass: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
            assert!((mass - 1.0).abs() <= 1e-10, "t={t} mass={mass}");
        }
    }

    #[test]
    fn eigenstate_is_stationary() {
        let cube = Cube::centered(1, 3).unwrap();
        let h = build_h(&cube, BoundaryKind::Simple, None).unwrap();
        let spec = eigen(&h, true).unwrap();
        let v = spec.eigenvectors.as_ref().unwrap();
        let psi0: Vec<f64> = (0..h.n()).map(|i| v[(i, 2)]).collect();
        let plan = EvolutionPlan::new(&h, &psi0).unwrap();
        let p1 = plan.evolve(7.3);
        for (a, b) in p1.iter().zip(&psi0) {
            assert!((a.norm_sqr() - b * b).abs() < 1e-10);
        }
    }

    #[test]
    fn two_level_survival_is_cosine() {
        // 2-site free Hamiltonian: eigenvalues 1, 3; |<δ0, ψ(t)>|² = cos²(t)
        let sites = vec![crate::lattice::site(&[0]), crate::lattice::site(&[1])];
        let region = crate::lattice::Region::from_sites(sites).unwrap();
        let h = crate::operator::build_h_on(&region, BoundaryKind::Simple, None, usize::MAX)
            .unwrap();
        let plan = EvolutionPlan::new(&h, &[1.0, 0.0]).unwrap();
        for t in [0.3, 1.1, 2.7] {
            let psi = plan.evolve(t);
            assert!((psi[0].norm_sqr() - t.cos().powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn time_reversal_is_conjugation() {
        let cube = Cube::centered(1, 3).unwrap();
        let dist = Distribution::Uniform { a: 0.0, b: 1.5 };
        let pot = Potential::sample(&cube, &dist, 8, 0).unwrap();
        let h = build_h(&cube, BoundaryKind::Simple, Some(&pot)).unwrap();
        let plan = EvolutionPlan::new(&h, &delta_at_origin(&cube)).unwrap();
        let fwd = plan.evolve(2.5);
        let bwd = plan.evolve(-2.5);
        for (a, b) in fwd.iter().zip(&bwd) {
            assert!((a - b.conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn survival_whole_cube_is_total_mass() {
        let cube = Cube::centered(1, 4).unwrap();
        let h = build_h(&cube, BoundaryKind::Simple, None).unwrap();
        let plan = EvolutionPlan::new(&h, &delta_at_origin(&cube)).unwrap();
        let prof = survival_profile(&plan, &[4], 30.0).unwrap();
        assert!((prof.inside[0] - 1.0).abs() <= 1e-10);
        assert!(prof.mass_defect <= 1e-10);
    }

    #[test]
    fn disorder_confines_better_than_free() {
        let cube = Cube::centered(1, 10).unwrap();
        let free = build_h(&cube, BoundaryKind::Simple, None).unwrap();
        let dist = Distribution::ScaledUniform { lambda: 50.0 };
        let pot = Potential::sample(&cube, &dist, 3, 0).unwrap();
        let dis = build_h(&cube, BoundaryKind::Simple, Some(&pot)).unwrap();
        let psi0 = delta_at_origin(&cube);
        let t = 40.0;
        let free_out = survival_profile(&EvolutionPlan::new(&free, &psi0).unwrap(), &[5], t)
            .unwrap()
            .outside[0];
        let dis_out = survival_profile(&EvolutionPlan::new(&dis, &psi0).unwrap(), &[5], t)
            .unwrap()
            .outside[0];
        assert!(dis_out < free_out, "dis {dis_out} free {free_out}");
    }

    #[test]
    fn wiener_two_level_and_grouping() {
        // single atom
        let w = wiener_average(&[1.0], &[0.7], 100.0).unwrap();
        assert!((w.numeric - 1.0).abs() < 1e-12);
        assert!((w.atomic_sum - 1.0).abs() < 1e-15);
        // 2-site free Hamiltonian from δ0: weights 1/2 at E=1, 3
        let w = wiener_average(&[0.5, 0.5], &[1.0, 3.0], 200.0).unwrap();
        assert!((w.atomic_sum - 0.5).abs() < 1e-15);
        assert!((w.numeric - 0.5).abs() < 0.02, "numeric {}", w.numeric);
        // degenerate energies merge before squaring
        let w = wiener_average(&[0.25, 0.25, 0.5], &[1.0, 1.0 + 1e-12, 3.0], 200.0).unwrap();
        assert!((w.atomic_sum - 0.5).abs() < 1e-12);
    }

    #[test]
    fn wiener_consistency_two_routes() {
        // |μ̂(t)|² as squared modulus vs the double sum over pairs
        let weights: [f64; 3] = [0.3, 0.45, 0.25];
        let energies: [f64; 3] = [0.3, 1.9, 2.4];
        for t in [0.7, 5.0, 31.0] {
            let mut mu_hat = Complex::new(0.0, 0.0);
            for (w, e) in weights.iter().zip(&energies) {
                mu_hat += Complex::from_polar(*w, -t * e);
            }
            let direct: f64 = weights
                .iter()
                .zip(&energies)
                .flat_map(|(wi, ei)| {
                    weights
                        .iter()
                        .zip(&energies)
                        .map(move |(wj, ej)| wi * wj * ((ei - ej) * t).cos())
                })
                .sum();
            assert!((mu_hat.norm_sqr() - direct).abs() <= 1e-10);
        }
    }

    #[test]
    fn moments_ballistic_vs_plateau() {
        let cube = Cube::centered(1, 12).unwrap();
        let psi0 = delta_at_origin(&cube);
        // free spreading grows
        let free = build_h(&cube, BoundaryKind::Simple, None).unwrap();
        let plan = EvolutionPlan::new(&free, &psi0).unwrap();
        let prof = transport_moment(&plan, 2.0, &[0.0, 1.0, 10.0], None).unwrap();
        assert!(prof.values[0] <= 1e-10); // eigenbasis round-trip fuzz only
        assert!(prof.values[2] > prof.values[1]);
        // strong disorder plateaus
        let dist = Distribution::ScaledUniform { lambda: 50.0 };
        let pot = Potential::sample(&cube, &dist, 11, 0).unwrap();
        let dis = build_h(&cube, BoundaryKind::Simple, Some(&pot)).unwrap();
        let plan = EvolutionPlan::new(&dis, &psi0).unwrap();
        let late: Vec<f64> = (0..26).map(|i| 50.0 + 2.0 * i as f64).collect();
        let prof = transport_moment(&plan, 2.0, &late, None).unwrap();
        let mut sorted = prof.values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = sorted[sorted.len() / 2];
        assert!(prof.max / median <= 1.5, "max/median {}", prof.max / median);
    }

    #[test]
    fn rage_estimator_converges_to_total_mass() {
        // finite volume: everything is pure point, the inside average -> 1
        let cube = Cube::centered(1, 6).unwrap();
        let dist = Distribution::Uniform { a: 0.0, b: 1.0 };
        let pot = Potential::sample(&cube, &dist, 19, 0).unwrap();
        let h = build_h(&cube, BoundaryKind::Simple, Some(&pot)).unwrap();
        let plan = EvolutionPlan::new(&h, &delta_at_origin(&cube)).unwrap();
        let prof = survival_profile(&plan, &[6], 500.0).unwrap();
        assert!((prof.inside[0] - 1.0).abs() <= 0.01);
        assert!(prof.outside[0].abs() <= 0.01);
    }
}
