//! Config-driven experiment runner: validation, dispatch to the owning
//! module, deterministic worker pools, and bit-exact CSV/JSON emission.
//!
//! One experiment per invocation. Every run is a pure function of the
//! config; re-running with the same config yields byte-identical files
//! regardless of the worker count.

use crate::disorder::Distribution;
use crate::error::{Error, Result};
use crate::green::MsaPath;
use crate::lattice::{Cube, Site};
use crate::operator::BoundaryKind;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Dos,
    Wegner,
    TwoCubeWegner,
    Lifshitz,
    GreenCheck,
    CtCheck,
    MsaSingle,
    MsaTwoCube,
    MsaSchedule,
    InitialScale,
    Dynamics,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Dos => "dos",
            ExperimentKind::Wegner => "wegner",
            ExperimentKind::TwoCubeWegner => "two_cube_wegner",
            ExperimentKind::Lifshitz => "lifshitz",
            ExperimentKind::GreenCheck => "green_check",
            ExperimentKind::CtCheck => "ct_check",
            ExperimentKind::MsaSingle => "msa_single",
            ExperimentKind::MsaTwoCube => "msa_two_cube",
            ExperimentKind::MsaSchedule => "msa_schedule",
            ExperimentKind::InitialScale => "initial_scale",
            ExperimentKind::Dynamics => "dynamics",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "dos" => ExperimentKind::Dos,
            "wegner" => ExperimentKind::Wegner,
            "two_cube_wegner" => ExperimentKind::TwoCubeWegner,
            "lifshitz" => ExperimentKind::Lifshitz,
            "green_check" => ExperimentKind::GreenCheck,
            "ct_check" => ExperimentKind::CtCheck,
            "msa_single" => ExperimentKind::MsaSingle,
            "msa_two_cube" => ExperimentKind::MsaTwoCube,
            "msa_schedule" => ExperimentKind::MsaSchedule,
            "initial_scale" => ExperimentKind::InitialScale,
            "dynamics" => ExperimentKind::Dynamics,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

fn default_dist() -> Distribution {
    Distribution::Uniform { a: 0.0, b: 1.0 }
}
fn default_trials() -> u64 {
    1000
}
fn default_seed() -> u64 {
    1
}
fn default_d() -> usize {
    1
}
fn default_format() -> OutputFormat {
    OutputFormat::Csv
}

/// Flat experiment configuration; per-kind validation picks the fields it
/// needs and rejects inconsistent ones.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default)]
    pub radius: i64,
    #[serde(default = "default_dist")]
    pub dist: Distribution,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub base_seed: u64,
    /// 0 = library default thread count.
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
    #[serde(default)]
    pub out_dir: Option<String>,

    // energy specification: single point and/or grid
    #[serde(default)]
    pub energy: Option<f64>,
    #[serde(default)]
    pub energy_lo: Option<f64>,
    #[serde(default)]
    pub energy_hi: Option<f64>,
    #[serde(default)]
    pub energy_step: Option<f64>,

    #[serde(default)]
    pub bc: Option<BoundaryKind>,
    #[serde(default)]
    pub eps: Option<f64>,
    /// Center offset of the second cube along the first axis.
    #[serde(default)]
    pub offset: Option<i64>,
    /// Buffer for the DOS trace probe.
    #[serde(default)]
    pub buffer: Option<i64>,
    #[serde(default)]
    pub im_z: Option<f64>,

    // multiscale fields
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub p_exponent: Option<f64>,
    #[serde(default)]
    pub l0: Option<i64>,
    #[serde(default)]
    pub k_max: Option<usize>,
    #[serde(default)]
    pub path: Option<MsaPath>,
    #[serde(default)]
    pub sub_radius: Option<i64>,
    #[serde(default)]
    pub ell0: Option<i64>,
    #[serde(default)]
    pub tiles_per_axis: Option<i64>,

    // lifshitz / dynamics fields
    #[serde(default)]
    pub radii: Option<Vec<i64>>,
    #[serde(default)]
    pub tail_radii: Option<Vec<i64>>,
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub moment_order: Option<f64>,
}

impl ExperimentConfig {
    /// Structured validation: every violated constraint is reported.
    pub fn validate(&self) -> Result<()> {
        let mut v: Vec<String> = Vec::new();
        if self.d == 0 || self.d > 3 {
            v.push(format!("d = {} outside the supported range 1..=3", self.d));
        }
        if let Err(e) = self.dist.validate() {
            v.push(e.to_string());
        }
        if self.trials == 0 {
            v.push("trials must be >= 1".into());
        }
        let need_radius = !matches!(
            self.experiment,
            ExperimentKind::MsaSchedule | ExperimentKind::InitialScale | ExperimentKind::Lifshitz
        );
        if need_radius && self.radius < 1 {
            v.push("radius must be >= 1".into());
        }
        match self.experiment {
            ExperimentKind::Wegner | ExperimentKind::TwoCubeWegner => {
                if self.eps.unwrap_or(0.0) <= 0.0 {
                    v.push("eps must be positive".into());
                }
                if self.dist.density_bound().is_none() {
                    v.push("Wegner experiments need a distribution with a density".into());
                }
                if self.experiment == ExperimentKind::TwoCubeWegner
                    && self.offset.unwrap_or(0) <= 2 * self.radius
                {
                    v.push("offset must exceed 2*radius for disjoint cubes".into());
                }
            }
            ExperimentKind::Dos => {
                if self.energy.is_none() && self.energy_lo.is_none() {
                    v.push("dos needs energy or an energy grid".into());
                }
            }
            ExperimentKind::GreenCheck | ExperimentKind::CtCheck => {
                if self.energy.is_none() {
                    v.push("energy is required".into());
                }
            }
            ExperimentKind::MsaSingle => {
                if self.energy.is_none() || self.gamma.is_none() {
                    v.push("msa_single needs energy and gamma".into());
                }
            }
            ExperimentKind::MsaTwoCube => {
                if self.energy_lo.is_none() || self.energy_hi.is_none() {
                    v.push("msa_two_cube needs an energy interval".into());
                }
                if self.gamma.is_none() {
                    v.push("msa_two_cube needs gamma".into());
                }
            }
            ExperimentKind::MsaSchedule => {
                let d = self.d as f64;
                let p = self.p_exponent.unwrap_or(2.0 * d + 2.0);
                if let Some(alpha) = self.alpha {
                    let limit = 2.0 * p / (p + 2.0 * d);
                    if !(alpha > 1.0 && alpha < limit) {
                        v.push(format!(
                            "alpha = {alpha} violates 1 < alpha < 2p/(p+2d) = {limit:.4}"
                        ));
                    }
                }
                if self.l0.unwrap_or(0) < 2 {
                    v.push("msa_schedule needs l0 >= 2".into());
                }
            }
            ExperimentKind::InitialScale => {
                if self.gamma.is_none() || self.l0.is_none() {
                    v.push("initial_scale needs gamma and l0".into());
                }
                if let Some(r) = self.tiles_per_axis {
                    if r % 2 == 0 {
                        v.push("tiles_per_axis must be odd".into());
                    }
                }
            }
            ExperimentKind::Dynamics | ExperimentKind::Lifshitz => {}
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v))
        }
    }

    /// Digest over the semantic fields (output path/format and workers are
    /// excluded: they never change the numbers).
    pub fn digest(&self) -> String {
        let mut semantic = self.clone();
        semantic.workers = 0;
        semantic.format = OutputFormat::Csv;
        semantic.out_dir = None;
        let json = serde_json::to_string(&semantic).expect("config serializes");
        format!("{:016x}", fnv1a(json.as_bytes()))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// One output row: named numeric columns plus provenance.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub experiment: String,
    pub config_digest: String,
    pub columns: Vec<(String, f64)>,
}

impl ResultRecord {
    fn new(kind: ExperimentKind, digest: &str, columns: Vec<(&str, f64)>) -> Self {
        ResultRecord {
            experiment: kind.name().to_string(),
            config_digest: digest.to_string(),
            columns: columns
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }

    pub fn column(&self, name: &str) -> Option<f64> {
        self.columns
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| *v)
    }

    /// Digest of the config digest plus the payload bit patterns.
    pub fn record_digest(&self) -> String {
        let mut bytes = self.config_digest.as_bytes().to_vec();
        for (k, v) in &self.columns {
            bytes.extend_from_slice(k.as_bytes());
            bytes.extend_from_slice(&v.to_bits().to_le_bytes());
        }
        format!("{:016x}", fnv1a(&bytes))
    }
}

fn bc_code(bc: BoundaryKind) -> f64 {
    match bc {
        BoundaryKind::Simple => 0.0,
        BoundaryKind::Neumann => 1.0,
        BoundaryKind::Dirichlet => 2.0,
    }
}

fn energy_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    match (cfg.energy_lo, cfg.energy_hi, cfg.energy_step) {
        (Some(lo), Some(hi), step) => {
            let step = step.unwrap_or((hi - lo) / 20.0).max(1e-12);
            let n = ((hi - lo) / step).round() as usize + 1;
            (0..n).map(|i| lo + i as f64 * step).collect()
        }
        _ => vec![cfg.energy.unwrap_or(0.0)],
    }
}

/// Run one experiment; deterministic for a fixed config.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    pool.install(|| dispatch(cfg))
}

fn dispatch(cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let digest = cfg.digest();
    let k = cfg.experiment;
    let mut records = Vec::new();
    match k {
        ExperimentKind::Dos => {
            let bc = cfg.bc.unwrap_or(BoundaryKind::Simple);
            let grid = energy_grid(cfg);
            let curve = crate::dos::ids_curve(
                &grid,
                cfg.radius,
                cfg.d,
                bc,
                &cfg.dist,
                cfg.trials,
                cfg.base_seed,
            )?;
            for i in 0..curve.energies.len() {
                records.push(ResultRecord::new(
                    k,
                    &digest,
                    vec![
                        ("E", curve.energies[i]),
                        ("value", curve.values[i]),
                        ("ci_lo", curve.ci_lo[i]),
                        ("ci_hi", curve.ci_hi[i]),
                        ("L", cfg.radius as f64),
                        ("bc", bc_code(bc)),
                        ("trials", cfg.trials as f64),
                        ("seed", cfg.base_seed as f64),
                    ],
                ));
            }
            if let (Some(buffer), Some(im_z)) = (cfg.buffer, cfg.im_z) {
                let probe = crate::dos::ids_convergence_probe(
                    Complex::new(cfg.energy.unwrap_or(2.0), im_z),
                    cfg.radius,
                    buffer,
                    cfg.d,
                    Some((&cfg.dist, cfg.base_seed, 0)),
                )?;
                records.push(ResultRecord::new(
                    k,
                    &digest,
                    vec![
                        ("E", cfg.energy.unwrap_or(2.0)),
                        ("trace_gap", probe.difference),
                        ("trace_bound", probe.bound),
                        ("pass", f64::from(probe.pass)),
                        ("L", cfg.radius as f64),
                        ("bc", bc_code(BoundaryKind::Simple)),
                        ("trials", 1.0),
                        ("seed", cfg.base_seed as f64),
                    ],
                ));
            }
        }
        ExperimentKind::Wegner => {
            let cube = Cube::centered(cfg.d, cfg.radius)?;
            let rep = crate::dos::wegner_experiment(
                cfg.energy.unwrap_or(2.5),
                cfg.eps.unwrap(),
                &cube,
                &cfg.dist,
                cfg.trials,
                cfg.base_seed,
            )?;
            records.push(ResultRecord::new(
                k,
                &digest,
                vec![
                    ("E", rep.energy),
                    ("eps", rep.eps),
                    ("mean", rep.estimate.mean),
                    ("ci_lo", rep.estimate.ci_lo),
                    ("ci_hi", rep.estimate.ci_hi),
                    ("bound", rep.bound),
                    ("pass", f64::from(rep.pass)),
                    ("volume", rep.volume as f64),
                    ("trials", cfg.trials as f64),
                    ("seed", cfg.base_seed as f64),
                ],
            ));
        }
        ExperimentKind::TwoCubeWegner => {
            let c1 = Cube::centered(cfg.d, cfg.radius)?;
            let mut off = vec![0i64; cfg.d];
            off[0] = cfg.offset.unwrap();
            let c2 = Cube::new(Site::new(off), cfg.radius)?;
            let rep = crate::dos::two_cube_resonance_experiment(
                &c1,
                &c2,
                cfg.eps.unwrap(),
                &cfg.dist,
                cfg.trials,
                cfg.base_seed,
            )?;
            records.push(ResultRecord::new(
                k,
                &digest,
                vec![
                    ("eps", rep.eps),
                    ("probability", rep.estimate.mean),
                    ("ci_lo", rep.estimate.ci_lo),
                    ("ci_hi", rep.estimate.ci_hi),
                    ("bound", rep.bound),
                    ("pass", f64::from(rep.pass)),
                    ("trials", cfg.trials as f64),
                    ("seed", cfg.base_seed as f64),
                ],
            ));
        }
        ExperimentKind::Lifshitz => {
            let radii = cfg.radii.clone().unwrap_or_else(|| vec![8, 16, 32]);
            let tails = cfg.tail_radii.clone().unwrap_or_else(|| vec![4, 6]);
            let rep = crate::dos::lifshitz_probes(
                cfg.d,
                &radii,
                &cfg.dist,
                &tails,
                cfg.trials,
                cfg.base_seed,
            )?;
            for (i, &l) in rep.radii.iter().enumerate() {
                records.push(ResultRecord::new(
                    k,
                    &digest,
                    vec![
                        ("L", l as f64),
                        ("neumann_gap_scaled", rep.neumann_gap_scaled[i]),
                        ("tent_scaled", rep.tent_scaled[i]),
                        ("tail_L", f64::NAN),
                        ("tail_probability", f64::NAN),
                        ("double_log_slope", rep.double_log_slope.unwrap_or(f64::NAN)),
                        ("trials", cfg.trials as f64),
                        ("seed", cfg.base_seed as f64),
                    ],
                ));
            }
            for (i, &l) in rep.tail_radii.iter().enumerate() {
                records.push(ResultRecord::new(
                    k,
                    &digest,
                    vec![
                        ("L", f64::NAN),
                        ("neumann_gap_scaled", f64::NAN),
                        ("tent_scaled", f64::NAN),
                        ("tail_L", l as f64),
                        ("tail_probability", rep.tail_estimates[i].mean),
                        ("double_log_slope", f64::NAN),
                        ("trials", cfg.trials as f64),
                        ("seed", cfg.base_seed as f64),
                    ],
                ));
            }
        }
        ExperimentKind::GreenCheck => {
            let ambient = Cube::centered(cfg.d, cfg.radius)?;
            let inner_radius = cfg.sub_radius.unwrap_or(cfg.radius / 3).max(1);
            let inner = Cube::centered(cfg.d, inner_radius)?;
            let energy = cfg.energy.unwrap();
            let mut worst = 0.0f64;
            let mut checked = 0u64;
            for r in 0..cfg.trials {
                let pot = crate::disorder::Potential::sample(&ambient, &cfg.dist, cfg.base_seed, r)?;
                let n = Site::origin(cfg.d);
                let mut mc = vec![0i64; cfg.d];
                mc[0] = cfg.radius;
                let m = Site::new(mc);
                match crate::green::geometric_resolvent_check(&inner, &ambient, &pot, energy, &n, &m)
                {
                    Ok(res) => {
                        worst = worst.max(res.residual / res.tolerance.max(1e-300));
                        checked += 1;
                    }
                    Err(Error::NearSingular { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
            records.push(ResultRecord::new(
                k,
                &digest,
                vec![
                    ("E", energy),
                    ("instances", checked as f64),
                    ("worst_residual_over_tol", worst),
                    ("pass", f64::from(worst <= 1.0 && checked > 0)),
                    ("trials", cfg.trials as f64),
                    ("seed", cfg.base_seed as f64),
                ],
            ));
        }
        ExperimentKind::CtCheck => {
            let cube = Cube::centered(cfg.d, cfg.radius)?;
            let energy = cfg.energy.unwrap();
            let mut worst_ratio = 0.0f64;
            let mut worst_comm = 0.0f64;
            let mut checked = 0u64;
            for r in 0..cfg.trials {
                let pot = crate::disorder::Potential::sample(&cube, &cfg.dist, cfg.base_seed, r)?;
                let h = crate::operator::build_h(&cube, BoundaryKind::Simple, Some(&pot))?;
                match crate::green::combes_thomas_check(&h, energy) {
                    Ok(rep) if rep.in_range => {
                        worst_ratio = worst_ratio.max(rep.max_ratio);
                        worst_comm = worst_comm.max(rep.commutator_norm / rep.commutator_bound);
                        checked += 1;
                    }
                    Ok(_) => continue,
                    Err(Error::NearSingular { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
            records.push(ResultRecord::new(
                k,
                &digest,
                vec![
                    ("E", energy),
                    ("instances", checked as f64),
                    ("worst_ratio", worst_ratio),
                    ("worst_commutator_ratio", worst_comm),
                    (
                        "pass",
                        f64::from(worst_ratio <= 1.0 + 1e-12 && worst_comm <= 1.0 + 1e-12),
                    ),
                    ("trials", cfg.trials as f64),
                    ("seed", cfg.base_seed as f64),
                ],
            ));
        }
        ExperimentKind::MsaSingle => {
            let p = cfg.p_exponent.unwrap_or(2.0 * cfg.d as f64 + 2.0);
            let rep = crate::msa::single_scale_probability(
                cfg.radius,
                cfg.d,
                cfg.energy.unwrap(),
                cfg.gamma.unwrap(),
                p,
                &cfg.dist,
                cfg.trials,
                cfg.base_seed,
            )?;
            records.push(ResultRecord::new(
                k,
                &digest,
                vec![
                    ("E", cfg.energy.unwrap()),
                    ("gamma", cfg.gamma.unwrap()),
                    ("probability", rep.estimate.mean),
                    ("ci_hi", rep.estimate.ci_hi),
                    ("target", rep.target),
                    ("within_budget", f64::from(rep.within_budget)),
                    ("trials", cfg.trials as f64),
                    ("seed", cfg.base_seed as f64),
                ],
            ));
        }
        ExperimentKind::MsaTwoCube => {
            let p = cfg.p_exponent.unwrap_or(2.0 * cfg.d as f64 + 2.0);
            let rep = crate::msa::two_cube_probability(
                cfg.radius,
                cfg.d,
                (cfg.energy_lo.unwrap(), cfg.energy_hi.unwrap()),
                cfg.energy_step.unwrap_or(0.05),
                cfg.gamma.unwrap(),
                p,
                &cfg.dist,
                cfg.trials,
                cfg.base_seed,
                cfg.offset.unwrap_or(4 * cfg.radius),
            )?;
            records.push(ResultRecord::new(
                k,
                &digest,
                vec![
                    ("probability", rep.estimate.mean),
                    ("ci_hi", rep.estimate.ci_hi),
                    ("target", rep.target),
                    ("within_budget", f64::from(rep.within_budget)),
                    ("lipschitz_margin", rep.lipschitz_margin),
                    ("grid_points", rep.grid_points as f64),
                    ("trials", cfg.trials as f64),
                    ("seed", cfg.base_seed as f64),
                ],
            ));
        }
        ExperimentKind::MsaSchedule => {
            let d = cfg.d;
            let p = cfg.p_exponent.unwrap_or(2.0 * d as f64 + 2.0);
            let params = crate::msa::MsaParams {
                d,
                alpha: cfg.alpha.unwrap_or_else(|| {
                    let limit = 2.0 * p / (p + 2.0 * d as f64);
                    0.5 * (1.0 + limit)
                }),
                p,
                gamma0: cfg.gamma.unwrap_or(1.0),
                l0: cfg.l0.unwrap(),
                dist: cfg.dist.clone(),
            };
            let sched = crate::msa::build_schedule(&params, cfg.k_max.unwrap_or(20))?;
            // gate rows carry flagged-vs-pass status; they are reports, not
            // asserted bounds, so the column is `status`, not `pass`
            for (i, g) in sched.gates.iter().enumerate() {
                records.push(ResultRecord::new(
                    k,
                    &digest,
                    vec![
                        ("row_kind", 0.0),
                        ("k", i as f64),
                        ("value", g.lhs),
                        ("threshold", g.rhs),
                        ("status", f64::from(g.pass)),
                    ],
                ));
            }
            for (i, (l, g)) in sched.scales.iter().zip(&sched.gammas).enumerate() {
                let budget = sched.budgets.get(i).map_or(f64::NAN, |b| b.budget);
                records.push(ResultRecord::new(
                    k,
                    &digest,
                    vec![
                        ("row_kind", 1.0),
                        ("k", i as f64),
                        ("value", *l),
                        ("threshold", *g),
                        ("status", budget),
                    ],
                ));
            }
        }
        ExperimentKind::InitialScale => {
            let p = cfg.p_exponent.unwrap_or(2.0 * cfg.d as f64 + 2.0);
            let rep = crate::msa::initial_scale_large_disorder(
                cfg.l0.unwrap(),
                cfg.d,
                cfg.gamma.unwrap(),
                p,
                &cfg.dist,
                0,
                cfg.base_seed,
            )?;
            records.push(ResultRecord::new(
                k,
                &digest,
                vec![
                    ("row_kind", 0.0),
                    ("bound", rep.bound),
                    ("target", rep.target),
                    ("density_threshold", rep.density_threshold),
                    ("pass", f64::from(rep.analytic_pass)),
                    ("seed", cfg.base_seed as f64),
                ],
            ));
            if let (Some(ell0), Some(r)) = (cfg.ell0, cfg.tiles_per_axis) {
                let low = crate::msa::initial_scale_low_energy(
                    ell0,
                    r,
                    cfg.d,
                    &cfg.dist,
                    cfg.trials,
                    cfg.base_seed,
                )?;
                records.push(ResultRecord::new(
                    k,
                    &digest,
                    vec![
                        ("row_kind", 1.0),
                        ("bound", low.union_bound),
                        ("target", low.tail_small.mean),
                        ("density_threshold", low.tail_large.mean),
                        (
                            "pass",
                            f64::from(low.volume_identity && low.max_tiling_violation <= 1e-10),
                        ),
                        ("seed", cfg.base_seed as f64),
                    ],
                ));
            }
        }
        ExperimentKind::Dynamics => {
            let cube = Cube::centered(cfg.d, cfg.radius)?;
            let pot = crate::disorder::Potential::sample(&cube, &cfg.dist, cfg.base_seed, 0)?;
            let h = crate::operator::build_h(&cube, BoundaryKind::Simple, Some(&pot))?;
            let region = cube.region();
            let mut psi0 = vec![0.0; region.len()];
            psi0[region.index_of(&Site::origin(cfg.d)).unwrap()] = 1.0;
            let plan = crate::dynamics::EvolutionPlan::new(&h, &psi0)?;
            let t_max = cfg.t_max.unwrap_or(100.0);
            let radii = cfg.radii.clone().unwrap_or_else(|| vec![cfg.radius / 2, cfg.radius]);
            let prof = crate::dynamics::survival_profile(&plan, &radii, t_max)?;
            let wiener =
                crate::dynamics::wiener_average(&plan.weights(), plan.eigenvalues(), t_max)?;
            let times: Vec<f64> = (0..=20).map(|i| t_max * i as f64 / 20.0).collect();
            let moment = crate::dynamics::transport_moment(
                &plan,
                cfg.moment_order.unwrap_or(2.0),
                &times,
                None,
            )?;
            for (i, &r) in prof.radii.iter().enumerate() {
                records.push(ResultRecord::new(
                    k,
                    &digest,
                    vec![
                        ("radius", r as f64),
                        ("inside_mass", prof.inside[i]),
                        ("outside_mass", prof.outside[i]),
                        ("mass_defect", prof.mass_defect),
                        ("wiener_numeric", wiener.numeric),
                        ("wiener_atomic", wiener.atomic_sum),
                        ("moment_max", moment.max),
                        ("t_max", t_max),
                        ("seed", cfg.base_seed as f64),
                    ],
                ));
            }
        }
    }
    Ok(records)
}

/// 17-significant-digit decimal used in all CSV output.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') || field.contains('\r') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Render records as CSV (header row, RFC-4180 quoting).
pub fn to_csv(records: &[ResultRecord]) -> Result<String> {
    let first = records
        .first()
        .ok_or_else(|| Error::Domain("no records to emit".into()))?;
    let mut out = String::new();
    out.push_str("experiment,config_digest");
    for (name, _) in &first.columns {
        out.push(',');
        out.push_str(&csv_quote(name));
    }
    out.push('\n');
    for r in records {
        if r.columns.len() != first.columns.len()
            || r.columns.iter().zip(&first.columns).any(|(a, b)| a.0 != b.0)
        {
            return Err(Error::Domain("heterogeneous record columns".into()));
        }
        out.push_str(&csv_quote(&r.experiment));
        out.push(',');
        out.push_str(&r.config_digest);
        for (_, v) in &r.columns {
            out.push(',');
            out.push_str(&format_f64(*v));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Render records as JSON (one object per record, stable field order).
pub fn to_json(records: &[ResultRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::Domain("no records to emit".into()));
    }
    let mut rows = Vec::with_capacity(records.len());
    for r in records {
        let mut map = serde_json::Map::new();
        map.insert("experiment".into(), serde_json::Value::String(r.experiment.clone()));
        map.insert(
            "config_digest".into(),
            serde_json::Value::String(r.config_digest.clone()),
        );
        let mut cols = serde_json::Map::new();
        for (k, v) in &r.columns {
            cols.insert(
                k.clone(),
                serde_json::Number::from_f64(*v)
                    .map(serde_json::Value::Number)
                    .unwrap_or(serde_json::Value::Null),
            );
        }
        map.insert("columns".into(), serde_json::Value::Object(cols));
        rows.push(serde_json::Value::Object(map));
    }
    serde_json::to_string_pretty(&rows).map_err(|e| Error::Io(e.to_string()))
}

/// Write records to `<out_dir>/<experiment>.<ext>`; returns the path.
pub fn emit(records: &[ResultRecord], format: OutputFormat, out_dir: &Path) -> Result<PathBuf> {
    let first = records
        .first()
        .ok_or_else(|| Error::Domain("no records to emit".into()))?;
    std::fs::create_dir_all(out_dir)?;
    let (ext, body) = match format {
        OutputFormat::Csv => ("csv", to_csv(records)?),
        OutputFormat::Json => ("json", to_json(records)?),
    };
    let path = out_dir.join(format!("{}.{}", first.experiment, ext));
    let mut f = std::fs::File::create(&path)?;
    f.write_all(body.as_bytes())?;
    Ok(path)
}

/// True when every record that carries a `pass`/`within_budget` column
/// asserts it.
pub fn all_bounds_pass(records: &[ResultRecord]) -> bool {
    records.iter().all(|r| {
        r.column("pass").map_or(true, |v| v == 1.0)
            && r.column("within_budget").map_or(true, |v| v == 1.0)
    })
}
