//! Random site potentials: i.i.d. ensembles with declared density bound and
//! support, sampled from counter-based streams.
//!
//! The value at a site is a pure function of `(base_seed, realization,
//! coords)`. Overlapping cubes of the same realization therefore agree on
//! shared sites, disjoint cubes carry independent values, and Monte Carlo
//! loops parallelize with no stream coordination.

use crate::error::{Error, Result};
use crate::lattice::{Cube, Region, Site};
use serde::{Deserialize, Serialize};

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// splitmix64 finalizer; decorrelates consecutive keys.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn absorb(state: u64, v: u64) -> u64 {
    mix64(state.wrapping_add(GAMMA).wrapping_add(v))
}

/// Uniform draw in [0,1) keyed purely by `(base_seed, realization, coords)`.
pub fn site_uniform(base_seed: u64, realization: u64, coords: &[i64]) -> f64 {
    let mut state = mix64(base_seed ^ GAMMA);
    state = absorb(state, realization);
    state = absorb(state, coords.len() as u64);
    for &c in coords {
        state = absorb(state, c as u64);
    }
    // 53 high bits to a double in [0,1)
    (state >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// Generic keyed stream for non-site randomness (e.g. test vectors).
/// Same mixing as the site stream, keyed by an arbitrary index list.
pub fn keyed_uniform(base_seed: u64, keys: &[u64]) -> f64 {
    let mut state = mix64(base_seed ^ GAMMA);
    for &k in keys {
        state = absorb(state, k);
    }
    (state >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// Single-site distributions with compact support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distribution {
    /// Uniform on [a, b]; density 1/(b-a).
    Uniform { a: f64, b: f64 },
    /// `lambda * Uniform(0,1)`; density 1/lambda on [0, lambda].
    ScaledUniform { lambda: f64 },
    /// Two-point measure: value `v1` with probability `p`, else `v0`.
    /// No density exists; Wegner-based operations refuse this ensemble.
    Bernoulli { p: f64, v0: f64, v1: f64 },
}

impl Distribution {
    pub fn validate(&self) -> Result<()> {
        match self {
            Distribution::Uniform { a, b } => {
                if !(b > a) || !a.is_finite() || !b.is_finite() {
                    return Err(Error::Domain(format!("uniform needs a < b, got [{a}, {b}]")));
                }
            }
            Distribution::ScaledUniform { lambda } => {
                if !(*lambda > 0.0) || !lambda.is_finite() {
                    return Err(Error::Domain(format!("scaled uniform needs lambda > 0, got {lambda}")));
                }
            }
            Distribution::Bernoulli { p, v0, v1 } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::Domain(format!("bernoulli needs p in [0,1], got {p}")));
                }
                if !v0.is_finite() || !v1.is_finite() {
                    return Err(Error::Domain("bernoulli values must be finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Sup norm of the density, if a density exists.
    pub fn density_bound(&self) -> Option<f64> {
        match self {
            Distribution::Uniform { a, b } => Some(1.0 / (b - a)),
            Distribution::ScaledUniform { lambda } => Some(1.0 / lambda),
            Distribution::Bernoulli { .. } => None,
        }
    }

    /// Support interval [a0, b0].
    pub fn support(&self) -> (f64, f64) {
        match self {
            Distribution::Uniform { a, b } => (*a, *b),
            Distribution::ScaledUniform { lambda } => (0.0, *lambda),
            Distribution::Bernoulli { v0, v1, .. } => (v0.min(*v1), v0.max(*v1)),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Distribution::Uniform { a, b } => 0.5 * (a + b),
            Distribution::ScaledUniform { lambda } => 0.5 * lambda,
            Distribution::Bernoulli { p, v0, v1 } => (1.0 - p) * v0 + p * v1,
        }
    }

    fn value_from_uniform(&self, u: f64) -> f64 {
        match self {
            Distribution::Uniform { a, b } => a + (b - a) * u,
            Distribution::ScaledUniform { lambda } => lambda * u,
            Distribution::Bernoulli { p, v0, v1 } => {
                if u < *p {
                    *v1
                } else {
                    *v0
                }
            }
        }
    }

    /// The value at a site for a given realization of the ensemble.
    pub fn value_at(&self, base_seed: u64, realization: u64, s: &Site) -> f64 {
        self.value_from_uniform(site_uniform(base_seed, realization, s.coords()))
    }
}

/// Disorder parameter `delta(g) = 1/|g|_inf`; large means strong disorder.
pub fn disorder_parameter(dist: &Distribution) -> Result<f64> {
    dist.density_bound()
        .map(|b| 1.0 / b)
        .ok_or_else(|| Error::NoDensity("distribution has no density".into()))
}

/// Seed provenance of a sampled potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedInfo {
    pub base_seed: u64,
    pub realization: u64,
}

/// A potential materialized on a region.
#[derive(Debug, Clone)]
pub struct Potential {
    region: Region,
    values: Vec<f64>,
    pub seed_info: Option<SeedInfo>,
    /// Provenance tag: how the values were produced.
    pub provenance: String,
}

impl Potential {
    /// One i.i.d. draw per site of `region`.
    pub fn sample_on(
        region: &Region,
        dist: &Distribution,
        base_seed: u64,
        realization: u64,
    ) -> Result<Potential> {
        dist.validate()?;
        let values = region
            .sites()
            .iter()
            .map(|s| dist.value_at(base_seed, realization, s))
            .collect();
        Ok(Potential {
            region: region.clone(),
            values,
            seed_info: Some(SeedInfo {
                base_seed,
                realization,
            }),
            provenance: format!("{dist:?}"),
        })
    }

    pub fn sample(cube: &Cube, dist: &Distribution, base_seed: u64, realization: u64) -> Result<Potential> {
        Self::sample_on(&cube.region(), dist, base_seed, realization)
    }

    /// Identically zero potential (the free Hamiltonian).
    pub fn zero(region: &Region) -> Potential {
        Potential {
            region: region.clone(),
            values: vec![0.0; region.len()],
            seed_info: None,
            provenance: "zero".into(),
        }
    }

    pub fn from_values(region: &Region, values: Vec<f64>) -> Result<Potential> {
        if values.len() != region.len() {
            return Err(Error::Domain(format!(
                "{} values for {} sites",
                values.len(),
                region.len()
            )));
        }
        Ok(Potential {
            region: region.clone(),
            values,
            seed_info: None,
            provenance: "explicit".into(),
        })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, s: &Site) -> Result<f64> {
        self.region
            .index_of(s)
            .map(|i| self.values[i])
            .ok_or_else(|| Error::Domain(format!("potential undefined at {:?}", s.coords())))
    }

    /// Restriction to a sub-region (errors if a site is missing).
    pub fn restrict(&self, sub: &Region) -> Result<Potential> {
        let values = sub
            .sites()
            .iter()
            .map(|s| self.value_at(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Potential {
            region: sub.clone(),
            values,
            seed_info: self.seed_info,
            provenance: self.provenance.clone(),
        })
    }

    /// Pointwise `min(V(i), cap)`; provenance records the cap.
    pub fn truncate(&self, cap: f64) -> Result<Potential> {
        if !(cap >= 0.0) {
            return Err(Error::Domain(format!("truncation cap {cap} < 0")));
        }
        Ok(Potential {
            region: self.region.clone(),
            values: self.values.iter().map(|v| v.min(cap)).collect(),
            seed_info: self.seed_info,
            provenance: format!("{} | truncated(cap={cap})", self.provenance),
        })
    }

    /// Translate the whole potential by `-shift` (values move with the sites).
    pub fn shifted_to_origin(&self, shift: &Site) -> Result<Potential> {
        let neg: Vec<i64> = shift.coords().iter().map(|c| -c).collect();
        let sites: Vec<Site> = self.region.sites().iter().map(|s| s.translated(&neg)).collect();
        let region = Region::from_sites(sites)?;
        Ok(Potential {
            region,
            values: self.values.clone(),
            seed_info: self.seed_info,
            provenance: format!("{} | shifted", self.provenance),
        })
    }
}
