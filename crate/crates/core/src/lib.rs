//! Numerical laboratory for the discrete Anderson model `H = H_0 + V` on `Z^d`.
//!
//! The crate builds restricted Hamiltonians on lattice cubes under three
//! boundary conditions (simple, Neumann, Dirichlet), samples i.i.d. random
//! potentials from counter-based streams, and checks the quantitative
//! machinery of localization theory at desk scale: exact splitting and
//! shift-covariance identities, the geometric resolvent equation, eigenvalue
//! counting and the integrated density of states, Wegner and two-cube
//! resonance estimates, Lifshitz-tail ingredients, good/resonant cube
//! classification with a multiscale decay certifier, Combes-Thomas bounds,
//! and RAGE-type dynamical diagnostics.
//!
//! Every Monte Carlo run is a pure function of `(base_seed, realization,
//! site)`, so results are bit-identical across reruns and worker counts.
//!
//! Start with the runnable examples, one per capability:
//!
//! ```text
//! cargo run --example boundary_conditions   # H_Λ^X assembly, splitting, bracketing
//! cargo run --example dos_curve             # IDS curves and the finite-volume trace probe
//! cargo run --example wegner                # Wegner and two-cube resonance experiments
//! cargo run --example lifshitz              # Neumann gap, tent function, small-cube tails
//! cargo run --example green_decay           # geometric resolvent, cube classification, certifier
//! cargo run --example combes_thomas         # off-diagonal resolvent decay bound
//! cargo run --example msa_schedule          # length/rate schedules, gates, budgets
//! cargo run --example msa_probabilities     # single- and two-cube scale probabilities
//! cargo run --example initial_scale         # large-disorder and low-energy initial estimates
//! cargo run --example dynamics_rage         # time evolution, Wiener averages, transport moments
//! ```
//!
//! The thin `anderson-lab` binary runs the same experiments from a JSON
//! config and emits CSV/JSON records; see the `cli` module.

pub mod cli;
pub mod disorder;
pub mod dos;
pub mod dynamics;
pub mod error;
pub mod green;
pub mod lattice;
pub mod msa;
pub mod operator;
pub mod spectral;
pub mod validation;

pub use error::{Error, Result};
