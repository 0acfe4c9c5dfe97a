//! Wegner's eigenvalue-counting estimate with its explicit constant, the
//! linearity of window counts in the window width, and the two-cube
//! resonance version that powers the energy-uniform multiscale step.
//!
//! Run with: cargo run --example wegner

use anderson_lab::disorder::Distribution;
use anderson_lab::dos::{two_cube_resonance_experiment, wegner_experiment};
use anderson_lab::lattice::{site, Cube};
use anderson_lab::validation::ValidationHarness;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut harness = ValidationHarness::new("wegner");
    let uniform = Distribution::Uniform { a: 0.0, b: 1.0 };
    let cube = Cube::centered(1, 2).unwrap();

    println!("[1] window counts vs the bound 4 |g| |Λ| ε  (|Λ|=5, 10^4 trials)");
    let w1 = wegner_experiment(2.5, 0.05, &cube, &uniform, 10_000, 21).unwrap();
    let w2 = wegner_experiment(2.5, 0.025, &cube, &uniform, 10_000, 21).unwrap();
    for w in [&w1, &w2] {
        println!(
            "  eps={:>6.3}: mean count = {:.4} (95% up to {:.4}), bound = {:.2}",
            w.eps, w.estimate.mean, w.estimate.ci_hi, w.bound
        );
        harness.check_upper(
            &format!("upper CI within the bound at eps={}", w.eps),
            w.estimate.ci_hi,
            w.bound,
        );
    }
    let ratio = w2.estimate.mean / w1.estimate.mean;
    println!("  halving eps scales the mean by {ratio:.3}");
    harness.check_bool("linearity: ratio in [0.3, 0.7]", (0.3..=0.7).contains(&ratio));

    println!("\n[2] two-cube resonance probability vs 8 |g| ε |Λ₁||Λ₂|");
    let c2 = Cube::new(site(&[10]), 2).unwrap();
    let t1 = two_cube_resonance_experiment(&cube, &c2, 0.01, &uniform, 10_000, 22).unwrap();
    let t2 = two_cube_resonance_experiment(&cube, &c2, 0.02, &uniform, 10_000, 22).unwrap();
    for t in [&t1, &t2] {
        println!(
            "  eps={:>5.3}: P(spectra {}-close) = {:.4}, bound = {:.2}",
            t.eps, t.eps, t.estimate.mean, t.bound
        );
        harness.check_upper(
            &format!("two-cube bound at eps={}", t.eps),
            t.estimate.ci_hi,
            t.bound,
        );
    }
    let scaling = t2.estimate.mean / t1.estimate.mean;
    println!("  doubling eps scales the probability by {scaling:.2}");
    harness.check_bool("roughly linear in eps: ratio in [1.4, 2.6]", (1.4..=2.6).contains(&scaling));

    println!("\n[3] hypothesis control: Bernoulli potential has no density");
    let bern = Distribution::Bernoulli { p: 0.5, v0: 0.0, v1: 1.0 };
    let refused = wegner_experiment(0.5, 0.05, &cube, &bern, 100, 1).is_err();
    harness.check_bool("Wegner experiment refuses the Bernoulli ensemble", refused);

    println!();
    ExitCode::from(harness.finish() as u8)
}
