//! Green's functions on cubes, the geometric resolvent identity, good and
//! resonant cube classification, the Combes-Thomas bound, and the decay
//! certifier that mirrors the analytic induction step of multiscale analysis.

use crate::disorder::Potential;
use crate::error::{Error, Result};
use crate::lattice::{boundary, merge_bad_regions, subcubes, Cube, Site};
use crate::operator::{build_h, BoundaryKind, HamMatrix};
use crate::spectral::eigen;
use nalgebra::{DVector, Dyn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Factored access to `(H_Λ - E)^{-1}`: the spectral distance comes from an
/// eigenvalue solve, the columns from one LU factorization.
pub struct GreenTable {
    h: HamMatrix,
    lu: nalgebra::linalg::LU<f64, Dyn, Dyn>,
    pub energy: f64,
    pub dist: f64,
}

impl GreenTable {
    pub fn new(h: HamMatrix, energy: f64) -> Result<Self> {
        let spectrum = eigen(&h, false)?;
        let dist = spectrum.dist_to(energy);
        Self::with_dist(h, energy, dist)
    }

    /// Skips the eigensolve when the caller already knows `dist(E, σ)`.
    fn with_dist(h: HamMatrix, energy: f64, dist: f64) -> Result<Self> {
        if dist <= 1e-12 {
            return Err(Error::NearSingular { dist });
        }
        let mut shifted = h.dense()?.clone();
        for i in 0..h.n() {
            shifted[(i, i)] -= energy;
        }
        let lu = shifted.lu();
        Ok(GreenTable {
            h,
            lu,
            energy,
            dist,
        })
    }

    pub fn h(&self) -> &HamMatrix {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    /// Column `(H - E)^{-1} δ_m`.
    pub fn column(&self, m: usize) -> Vec<f64> {
        let n = self.n();
        let mut e = DVector::zeros(n);
        e[m] = 1.0;
        let sol = self.lu.solve(&e).expect("dist gate keeps H - E invertible");
        sol.iter().copied().collect()
    }

    /// Max-norm residual of `(H - E) col - δ_m`, relative to the column scale.
    pub fn column_residual(&self, m: usize, col: &[f64]) -> f64 {
        let n = self.n();
        let mut hc = vec![0.0; n];
        self.h.matvec(col, &mut hc);
        let mut resid = 0.0f64;
        let mut scale = 1.0f64;
        for i in 0..n {
            let want = if i == m { 1.0 } else { 0.0 };
            resid = resid.max((hc[i] - self.energy * col[i] - want).abs());
            scale = scale.max(col[i].abs());
        }
        resid / scale
    }
}

/// One column of the Green's function with its provenance and residual.
#[derive(Debug, Clone)]
pub struct GreenColumn {
    pub source: Site,
    pub energy: f64,
    pub values: Vec<f64>,
    pub residual: f64,
}

/// `(H_Λ - E)^{-1} δ_m` as a site-indexed column.
pub fn green_column(h: &HamMatrix, energy: f64, m: &Site) -> Result<GreenColumn> {
    let idx = h
        .region()
        .index_of(m)
        .ok_or_else(|| Error::Domain(format!("source {:?} not in region", m.coords())))?;
    let table = GreenTable::new(h.clone(), energy)?;
    let values = table.column(idx);
    let residual = table.column_residual(idx, &values);
    Ok(GreenColumn {
        source: m.clone(),
        energy,
        values,
        residual,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct GreResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
}

/// Geometric resolvent identity
/// `G^{Λ₂}(n,m) = Σ_{(k,k') in ∂Λ₁, k in Λ₁} G^{Λ₁}(n,k) G^{Λ₂}(k',m)`
/// for `n in Λ₁` and `m in Λ₂ \ Λ₁`, both sides computed independently.
pub fn geometric_resolvent_check(
    inner: &Cube,
    ambient: &Cube,
    potential: &Potential,
    energy: f64,
    n: &Site,
    m: &Site,
) -> Result<GreResidual> {
    if !inner.subset_of(ambient) {
        return Err(Error::Domain("inner cube not inside ambient".into()));
    }
    if !inner.contains(n) {
        return Err(Error::Domain("source n must lie in the inner cube".into()));
    }
    if inner.contains(m) || !ambient.contains(m) {
        return Err(Error::Domain(
            "target m must lie in ambient minus inner".into(),
        ));
    }
    let pot_inner = potential.restrict(&inner.region())?;
    let h_inner = build_h(inner, BoundaryKind::Simple, Some(&pot_inner))?;
    let h_amb = build_h(ambient, BoundaryKind::Simple, Some(potential))?;
    let t_inner = GreenTable::new(h_inner, energy)?;
    let t_amb = GreenTable::new(h_amb, energy)?;

    let col_n = t_inner.column(t_inner.h().region().index_of(n).unwrap());
    let col_m = t_amb.column(t_amb.h().region().index_of(m).unwrap());

    let lhs = col_m[t_amb.h().region().index_of(n).unwrap()];
    let b = boundary(&inner.region(), Some(ambient))?;
    let mut rhs = 0.0;
    for (k, kp) in &b.edges {
        let gk = col_n[t_inner.h().region().index_of(k).unwrap()];
        let gkp = col_m[t_amb.h().region().index_of(kp).unwrap()];
        rhs += gk * gkp;
    }
    let tolerance = 1e-8 * lhs.abs() + 1e-12;
    Ok(GreResidual {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        tolerance,
    })
}

/// Classification of a cube at an energy.
#[derive(Debug, Clone, Serialize)]
pub struct CubeVerdict {
    pub center: Vec<i64>,
    pub radius: i64,
    pub energy: f64,
    pub good: bool,
    /// min over required (n, m) pairs of `-ln|G(n,m)| / L`; None on spectrum.
    pub rate_measured: Option<f64>,
    pub resonant: bool,
    pub dist_to_spectrum: f64,
}

impl CubeVerdict {
    pub fn center_site(&self) -> Site {
        Site::new(self.center.clone())
    }
}

/// Good/resonant classification: good iff `E` is off the spectrum and
/// `|G_E(n,m)| <= e^{-γL}` for every source `n` in the inner `⌊√L⌋`-cube and
/// every `m` on the inner boundary layer; resonant iff
/// `dist(E, σ(H_Λ)) < e^{-√L}` with `L` the radius.
pub fn classify_cube(
    cube: &Cube,
    potential: &Potential,
    energy: f64,
    gamma: f64,
) -> Result<CubeVerdict> {
    let l = cube.radius();
    if l < 1 {
        return Err(Error::Domain("classification needs radius >= 1".into()));
    }
    let pot = potential.restrict(&cube.region())?;
    let h = build_h(cube, BoundaryKind::Simple, Some(&pot))?;
    let spectrum = eigen(&h, false)?;
    let dist = spectrum.dist_to(energy);
    let resonant = dist < (-(l as f64).sqrt()).exp();
    if dist <= 1e-12 {
        return Ok(CubeVerdict {
            center: cube.center().coords().to_vec(),
            radius: l,
            energy,
            good: false,
            rate_measured: None,
            resonant,
            dist_to_spectrum: dist,
        });
    }
    let table = GreenTable::with_dist(h, energy, dist)?;
    let sqrt_radius = (l as f64).sqrt().floor() as i64;
    let sources = Cube::new(cube.center().clone(), sqrt_radius)?;
    let targets: Vec<usize> = cube
        .inner_boundary_sites()
        .iter()
        .map(|s| table.h().region().index_of(s).unwrap())
        .collect();
    let threshold = (-gamma * l as f64).exp();
    let mut good = true;
    let mut min_rate = f64::INFINITY;
    for src in sources.sites() {
        let col = table.column(table.h().region().index_of(&src).unwrap());
        for &t in &targets {
            let g = col[t].abs();
            if g > threshold {
                good = false;
            }
            let rate = if g > 0.0 {
                -g.ln() / l as f64
            } else {
                f64::INFINITY
            };
            min_rate = min_rate.min(rate);
        }
    }
    Ok(CubeVerdict {
        center: cube.center().coords().to_vec(),
        radius: l,
        energy,
        good,
        rate_measured: Some(min_rate),
        resonant,
        dist_to_spectrum: dist,
    })
}

/// Combes-Thomas audit report.
#[derive(Debug, Clone, Serialize)]
pub struct CtReport {
    pub delta: f64,
    /// max over site pairs of `|G(n,m)| / ((2/δ) e^{-δ|n-m|_1/(12d)})`
    pub max_ratio: f64,
    pub commutator_norm: f64,
    pub commutator_bound: f64,
    /// hypothesis `δ <= 1` of the stated bound
    pub in_range: bool,
    pub pass: bool,
}

/// Off-diagonal resolvent decay `|G(n,m)| <= (2/δ) e^{-δ|n-m|_1/(12d)}`
/// at spectral distance `δ <= 1`, plus the weighted-commutator bound
/// `|F^{-1} H F - H| <= 2dμe^μ` at `μ = δ/(12d)`.
pub fn combes_thomas_check(h: &HamMatrix, energy: f64) -> Result<CtReport> {
    let d = h.region().dim();
    let table = GreenTable::new(h.clone(), energy)?;
    let delta = table.dist;
    let in_range = delta <= 1.0;
    let mu = delta / (12.0 * d as f64);
    let sites = table.h().region().sites().to_vec();
    let n = sites.len();
    let mut max_ratio = 0.0f64;
    for j in 0..n {
        let col = table.column(j);
        for i in 0..n {
            let dist1 = sites[i].dist_l1(&sites[j]);
            let bound = (2.0 / delta) * (-mu * dist1 as f64).exp();
            max_ratio = max_ratio.max(col[i].abs() / bound);
        }
    }
    // weighted commutator F^{-1} H F - H around the cube center
    let origin = h
        .cube()
        .map(|c| c.center().clone())
        .unwrap_or_else(|| sites[0].clone());
    let m = h.to_dense();
    let weight: Vec<f64> = sites
        .iter()
        .map(|s| (mu * s.dist_l1(&origin) as f64).exp())
        .collect();
    let mut diff = m.clone();
    for i in 0..n {
        for j in 0..n {
            diff[(i, j)] = m[(i, j)] * weight[j] / weight[i] - m[(i, j)];
        }
    }
    let gram = diff.transpose() * &diff;
    let top = crate::spectral::eigen_dense(&gram, false)
        .eigenvalues
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(0.0);
    let commutator_norm = top.sqrt();
    let commutator_bound = 2.0 * d as f64 * mu * mu.exp();
    let pass = in_range
        && max_ratio <= 1.0 + 1e-12
        && commutator_norm <= commutator_bound + 1e-12;
    Ok(CtReport {
        delta,
        max_ratio,
        commutator_norm,
        commutator_bound,
        in_range,
        pass,
    })
}

/// Which induction path gates the certifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MsaPath {
    /// at most one bad sub-cube, rate floor `γ >= 2/√l`
    Weak,
    /// at most three bad sub-cubes, rate floor `γ >= 12/√l`
    Strong,
}

impl MsaPath {
    pub fn rate_floor(self, l: i64) -> f64 {
        match self {
            MsaPath::Weak => 2.0 / (l as f64).sqrt(),
            MsaPath::Strong => 12.0 / (l as f64).sqrt(),
        }
    }

    pub fn max_disjoint_bad(self) -> usize {
        match self {
            MsaPath::Weak => 1,
            MsaPath::Strong => 3,
        }
    }
}

/// One step of the reconstructed worst-case walk.
#[derive(Debug, Clone, Serialize)]
pub struct WalkStep {
    pub site: Vec<i64>,
    pub kind: &'static str,
    pub factor: f64,
    pub bound: f64,
}

/// Certificate (or refusal) for the decay induction step.
#[derive(Debug, Clone, Serialize)]
pub struct DecayCertificate {
    pub cube: Vec<i64>,
    pub radius: i64,
    pub sub_radius: i64,
    #[serde(rename = "E")]
    pub energy: f64,
    pub path: MsaPath,
    pub gamma_in: f64,
    /// Certified output rate when issued.
    pub gamma_out: Option<f64>,
    /// The rate-recursion arithmetic value `γ(1 - 4/l^{α-1}) - 2/l^{α/2}`.
    pub gamma_formula: f64,
    /// The asymptotic recursion value is nonpositive at this scale; the
    /// certificate, if issued, carries the exact walk rate instead.
    pub formula_vacuous: bool,
    /// `-ln(walk bound)/L` from the worst-case walk audit.
    pub gamma_walk: Option<f64>,
    pub rate_floor: f64,
    pub bad_centers: Vec<Vec<i64>>,
    pub merged_regions: Vec<(Vec<i64>, i64)>,
    /// Detour factor ρ per merged region; each must be <= 1.
    pub rho: Vec<f64>,
    pub dist_big: f64,
    pub dist_merged: Vec<f64>,
    pub steps: usize,
    pub detours: usize,
    pub factors: Vec<WalkStep>,
    pub pass: bool,
    pub reason: String,
}

fn refuse(
    big: &Cube,
    l: i64,
    energy: f64,
    params: (f64, f64, MsaPath),
    reason: String,
) -> DecayCertificate {
    let (gamma, alpha, path) = params;
    let lf = l as f64;
    let gamma_formula = gamma * (1.0 - 4.0 / lf.powf(alpha - 1.0)) - 2.0 / lf.powf(alpha / 2.0);
    DecayCertificate {
        cube: big.center().coords().to_vec(),
        radius: big.radius(),
        sub_radius: l,
        energy,
        path,
        gamma_in: gamma,
        gamma_out: None,
        gamma_formula,
        formula_vacuous: gamma_formula <= 0.0,
        gamma_walk: None,
        rate_floor: path.rate_floor(l),
        bad_centers: Vec::new(),
        merged_regions: Vec::new(),
        rho: Vec::new(),
        dist_big: f64::NAN,
        dist_merged: Vec::new(),
        steps: 0,
        detours: 0,
        factors: Vec::new(),
        pass: false,
        reason,
    }
}

/// Classify every cube of `C_l(big)` at one energy (parallel over centers).
pub fn classify_all_subcubes(
    big: &Cube,
    potential: &Potential,
    energy: f64,
    gamma: f64,
    l: i64,
) -> Result<Vec<CubeVerdict>> {
    let cubes = subcubes(big, l)?;
    cubes
        .par_iter()
        .map(|c| classify_cube(c, potential, energy, gamma))
        .collect()
}

/// The analytic induction step as an auditable certificate.
///
/// Gates, in order: the disjoint-bad-cube count for the chosen path, the
/// rate floor, geometry (merged regions must stay well inside), resonance of
/// the big cube and of every merged region, and the detour factor ρ <= 1.
/// When all gates pass, a worst-case walk bound on `|G^{Λ_L}(m, n)|` is
/// computed by value iteration over sites (exponential step outside the
/// merged regions, Wegner detour inside, a priori bound near the boundary);
/// the certificate is issued at the recursion rate only if the audited walk
/// bound confirms it.
pub fn certify_decay(
    big: &Cube,
    potential: &Potential,
    energy: f64,
    gamma: f64,
    alpha: f64,
    path: MsaPath,
    sub_verdicts: &[CubeVerdict],
) -> Result<DecayCertificate> {
    if sub_verdicts.is_empty() {
        return Err(Error::Domain("no sub-cube verdicts supplied".into()));
    }
    let l = sub_verdicts[0].radius;
    let big_l = big.radius();
    let d = big.dim();
    let params = (gamma, alpha, path);
    let expected = subcubes(big, l)?;
    if sub_verdicts.len() != expected.len() || sub_verdicts.iter().any(|v| v.radius != l) {
        return Err(Error::Domain(
            "sub-cube verdicts must cover C_l(big) at one scale".into(),
        ));
    }

    // greedy disjoint selection of bad cubes
    let bad: Vec<Site> = sub_verdicts
        .iter()
        .filter(|v| !v.good)
        .map(|v| v.center_site())
        .collect();
    let mut picked: Vec<Site> = Vec::new();
    for b in &bad {
        if picked.iter().all(|p| p.dist_inf(b) > 2 * l) {
            picked.push(b.clone());
        }
    }
    if picked.len() > path.max_disjoint_bad() {
        return Ok(refuse(
            big,
            l,
            energy,
            params,
            format!(
                "{} disjoint bad sub-cubes exceed the {:?}-path gate of {}",
                picked.len(),
                path,
                path.max_disjoint_bad()
            ),
        ));
    }
    let rate_floor = path.rate_floor(l);
    if gamma < rate_floor {
        return Ok(refuse(
            big,
            l,
            energy,
            params,
            format!("input rate {gamma:.4} below the floor {rate_floor:.4}"),
        ));
    }
    let lf = l as f64;
    // The asymptotic recursion value; at desk scales 4/l^{α-1} often exceeds
    // 1 and the formula is vacuous, in which case the exact walk rate below
    // carries the certificate.
    let gamma_formula = gamma * (1.0 - 4.0 / lf.powf(alpha - 1.0)) - 2.0 / lf.powf(alpha / 2.0);
    let formula_vacuous = gamma_formula <= 0.0;

    let merged: Vec<Cube> = if picked.is_empty() {
        Vec::new()
    } else {
        merge_bad_regions(&picked, l)?
    };
    for m in &merged {
        if !m.well_inside(big) {
            return Ok(refuse(
                big,
                l,
                energy,
                params,
                "a merged bad region is not well inside the big cube".into(),
            ));
        }
    }
    // every bad center must be covered by a merged region
    for b in &bad {
        if !merged.iter().any(|m| m.contains(b)) {
            return Ok(refuse(
                big,
                l,
                energy,
                params,
                "bad sub-cube escaped the merged regions".into(),
            ));
        }
    }

    // resonance gates
    let pot_big = potential.restrict(&big.region())?;
    let h_big = build_h(big, BoundaryKind::Simple, Some(&pot_big))?;
    let spec_big = eigen(&h_big, false)?;
    let dist_big = spec_big.dist_to(energy);
    if dist_big < (-(big_l as f64).sqrt()).exp() {
        let mut c = refuse(big, l, energy, params, "big cube is resonant".into());
        c.dist_big = dist_big;
        return Ok(c);
    }
    let mut dist_merged = Vec::new();
    for m in &merged {
        let pm = potential.restrict(&m.region())?;
        let hm = build_h(m, BoundaryKind::Simple, Some(&pm))?;
        let dm = eigen(&hm, false)?.dist_to(energy);
        if dm < (-(m.radius() as f64).sqrt()).exp() {
            let mut c = refuse(
                big,
                l,
                energy,
                params,
                format!("merged region of radius {} is resonant", m.radius()),
            );
            c.dist_big = dist_big;
            return Ok(c);
        }
        dist_merged.push(dm);
    }

    // detour factor per merged region
    let edge_count = |r: i64| 2.0 * d as f64 * (2.0 * r as f64 + 1.0).powi(d as i32 - 1);
    let f_exp = edge_count(l) * (-gamma * lf).exp();
    let mut rho = Vec::new();
    for m in &merged {
        let r = m.radius() as f64;
        let w = edge_count(m.radius()) * r.sqrt().exp();
        let rho_m = w * f_exp;
        if rho_m > 1.0 {
            let mut c = refuse(
                big,
                l,
                energy,
                params,
                format!("detour factor {rho_m:.3e} exceeds 1 (rate too small)"),
            );
            c.dist_big = dist_big;
            c.rho = rho;
            return Ok(c);
        }
        rho.push(rho_m);
    }

    // worst-case walk bound by value iteration over the big cube's sites
    let region = big.region();
    let n_sites = region.len();
    let b0 = 1.0 / dist_big;
    let mut phi = vec![b0; n_sites];
    let site_list = region.sites().to_vec();
    let verdict_good: std::collections::HashMap<Site, bool> = sub_verdicts
        .iter()
        .map(|v| (v.center_site(), v.good))
        .collect();
    let merged_of: Vec<Option<usize>> = site_list
        .iter()
        .map(|s| merged.iter().position(|m| m.contains(s)))
        .collect();
    let outer_ring = |c: &Site, r: i64| -> Vec<usize> {
        Cube::new(c.clone(), r + 1)
            .unwrap()
            .inner_boundary_sites()
            .iter()
            .filter_map(|s| region.index_of(s))
            .collect()
    };
    let mut rules: Vec<Option<(f64, Vec<usize>)>> = Vec::with_capacity(n_sites);
    for (xi, x) in site_list.iter().enumerate() {
        if let Some(mi) = merged_of[xi] {
            let m = &merged[mi];
            let w = edge_count(m.radius()) * (m.radius() as f64).sqrt().exp();
            rules.push(Some((w, outer_ring(m.center(), m.radius()))));
        } else if x.dist_inf(big.center()) <= big_l - l - 1 {
            match verdict_good.get(x) {
                Some(true) => rules.push(Some((f_exp, outer_ring(x, l)))),
                _ => {
                    return Ok(refuse(
                        big,
                        l,
                        energy,
                        params,
                        "bad sub-cube center outside every merged region".into(),
                    ))
                }
            }
        } else {
            rules.push(None);
        }
    }
    for _sweep in 0..(4 * n_sites) {
        let mut changed = false;
        for xi in 0..n_sites {
            if let Some((factor, ring)) = &rules[xi] {
                let worst = ring.iter().map(|&y| phi[y]).fold(0.0f64, f64::max);
                let cand = factor * worst;
                if cand < phi[xi] * (1.0 - 1e-14) {
                    phi[xi] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let sqrt_big = (big_l as f64).sqrt().floor() as i64;
    let sources = Cube::new(big.center().clone(), sqrt_big)?;
    let (mut phi_max, mut worst_src) = (0.0f64, 0usize);
    for s in sources.sites() {
        let i = region.index_of(&s).unwrap();
        if phi[i] > phi_max {
            phi_max = phi[i];
            worst_src = i;
        }
    }
    let gamma_walk = -phi_max.ln() / big_l as f64;

    // reconstruct the worst-case walk for the audit trail
    let mut factors = Vec::new();
    let (mut steps, mut detours) = (0usize, 0usize);
    let mut cur = worst_src;
    loop {
        let Some((factor, ring)) = &rules[cur] else {
            break;
        };
        let worst = ring
            .iter()
            .copied()
            .max_by(|&a, &b| phi[a].partial_cmp(&phi[b]).unwrap())
            .unwrap();
        if (factor * phi[worst] - phi[cur]).abs() > 1e-9 * phi[cur] {
            break; // rule not tight here (a priori bound already better)
        }
        let kind = if merged_of[cur].is_some() {
            detours += 1;
            "wegner_detour"
        } else {
            steps += 1;
            "exponential"
        };
        factors.push(WalkStep {
            site: site_list[cur].coords().to_vec(),
            kind,
            factor: *factor,
            bound: phi[cur],
        });
        if phi[worst] >= b0 * (1.0 - 1e-14) {
            break;
        }
        cur = worst;
    }

    // Issue at the recursion rate when the audit confirms it; at desk
    // scales where the asymptotic formula is vacuous, issue at the exact
    // audited walk rate instead (it is a rigorous bound on its own). The
    // walk rate is shaved by a relative 1e-9 so the certified threshold
    // strictly dominates the float-computed bound.
    let gamma_out = if formula_vacuous {
        -(phi_max * (1.0 + 1e-9)).ln() / big_l as f64
    } else {
        gamma_formula
    };
    let confirmed = gamma_out > 0.0 && phi_max <= (-gamma_out * big_l as f64).exp() * (1.0 + 1e-12);
    if !confirmed {
        let mut c = refuse(
            big,
            l,
            energy,
            params,
            format!(
                "walk audit rate {gamma_walk:.4} cannot support a certificate \
                 (recursion rate {gamma_formula:.4})"
            ),
        );
        c.dist_big = dist_big;
        c.dist_merged = dist_merged;
        c.rho = rho;
        c.gamma_walk = Some(gamma_walk);
        c.bad_centers = bad.iter().map(|s| s.coords().to_vec()).collect();
        c.merged_regions = merged
            .iter()
            .map(|m| (m.center().coords().to_vec(), m.radius()))
            .collect();
        return Ok(c);
    }

    Ok(DecayCertificate {
        cube: big.center().coords().to_vec(),
        radius: big_l,
        sub_radius: l,
        energy,
        path,
        gamma_in: gamma,
        gamma_out: Some(gamma_out),
        gamma_formula,
        formula_vacuous,
        gamma_walk: Some(gamma_walk),
        rate_floor,
        bad_centers: bad.iter().map(|s| s.coords().to_vec()).collect(),
        merged_regions: merged
            .iter()
            .map(|m| (m.center().coords().to_vec(), m.radius()))
            .collect(),
        rho,
        dist_big,
        dist_merged,
        steps,
        detours,
        factors,
        pass: true,
        reason: "certified".into(),
    })
}

/// Entrywise Lipschitz bound in the energy from the first resolvent identity:
/// `|G_E(n,m) - G_{E'}(n,m)| <= |E - E'| / (dist_E dist_{E'})`.
pub fn resolvent_energy_lipschitz(dist_e: f64, dist_ep: f64, de: f64) -> f64 {
    de.abs() / (dist_e * dist_ep)
}

/// Eigenfunction iteration report: for an eigenpair `(E, ψ)` of `H_A` whose
/// energy makes every cube of `C_M(A)` good, the decay
/// `|ψ(n₀)| <= e^{-γ' k M} sup_{m: dist(m, ∂⁻A) <= M} |ψ(m)|` must hold with
/// `γ' = γ - ln(2d (2M+1)^{d-1})/M` and `k = ⌊dist(n₀, ∂⁻A)/(M+1)⌋`.
#[derive(Debug, Clone)]
pub struct EigenfunctionDecayReport {
    pub checked_sites: usize,
    pub max_excess: f64,
    pub all_good: bool,
    pub pass: bool,
}

pub fn eigenfunction_iteration_check(
    big: &Cube,
    potential: &Potential,
    eigen_index: usize,
    gamma: f64,
    m_scale: i64,
) -> Result<EigenfunctionDecayReport> {
    let d = big.dim();
    let pot = potential.restrict(&big.region())?;
    let h = build_h(big, BoundaryKind::Simple, Some(&pot))?;
    let spec = eigen(&h, true)?;
    let energy = spec.eigenvalues[eigen_index];
    let verdicts = classify_all_subcubes(big, potential, energy, gamma, m_scale)?;
    let all_good = verdicts.iter().all(|v| v.good);
    if !all_good {
        return Ok(EigenfunctionDecayReport {
            checked_sites: 0,
            max_excess: 0.0,
            all_good,
            pass: true, // hypothesis empty
        });
    }
    let v = spec.eigenvectors.as_ref().unwrap();
    let region = big.region();
    let psi: Vec<f64> = (0..region.len()).map(|i| v[(i, eigen_index)]).collect();
    let gamma_prime = gamma
        - ((2.0 * d as f64) * (2.0 * m_scale as f64 + 1.0).powi(d as i32 - 1)).ln()
            / m_scale as f64;
    let mut collar_sup = 0.0f64;
    for (i, s) in region.sites().iter().enumerate() {
        let dist_to_boundary = big.radius() - s.dist_inf(big.center());
        if dist_to_boundary <= m_scale {
            collar_sup = collar_sup.max(psi[i].abs());
        }
    }
    let mut checked = 0usize;
    let mut max_excess = f64::NEG_INFINITY;
    for (i, s) in region.sites().iter().enumerate() {
        let dist_to_boundary = big.radius() - s.dist_inf(big.center());
        let k = dist_to_boundary / (m_scale + 1);
        if k >= 1 {
            let bound = (-gamma_prime * (k * m_scale) as f64).exp() * collar_sup;
            max_excess = max_excess.max(psi[i].abs() - bound);
            checked += 1;
        }
    }
    Ok(EigenfunctionDecayReport {
        checked_sites: checked,
        max_excess,
        all_good,
        pass: checked == 0 || max_excess <= 1e-12,
    })
}
