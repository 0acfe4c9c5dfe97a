//! Monte-Carlo estimates of the multiscale probabilities: the single-cube
//! event "Λ_L is not (γ,E)-good" against 1/L^p, and the energy-uniform
//! two-cube event over an interval with its grid-to-continuum margin.
//!
//! Run with: cargo run --example msa_probabilities

use anderson_lab::disorder::Distribution;
use anderson_lab::msa::{single_scale_probability, two_cube_probability};
use anderson_lab::validation::ValidationHarness;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut harness = ValidationHarness::new("msa_probabilities");
    let strong = Distribution::ScaledUniform { lambda: 100.0 };

    println!("[1] single-cube failure probability at large disorder (λ=100)");
    let r = single_scale_probability(8, 1, 0.5, 0.5, 3.0, &strong, 20_000, 77).unwrap();
    println!(
        "  P(Λ_8 not (0.5, E)-good) = {:.2e} (95% up to {:.2e}), target 1/L^p = {:.2e}",
        r.estimate.mean, r.estimate.ci_hi, r.target
    );
    harness.check_bool("estimate within the L^-p budget", r.within_budget);

    println!("\n[2] the same event in a near-free system fails almost surely");
    let weak = Distribution::Uniform { a: 0.0, b: 1e-6 };
    let r2 = single_scale_probability(8, 1, 2.0, 0.5, 4.0, &weak, 200, 77).unwrap();
    println!("  P(not good) = {:.3} at mid band with V ~ 0", r2.estimate.mean);
    harness.check_bool("free system almost never good", r2.estimate.mean > 0.95);

    println!("\n[3] two-cube uniform event over I = [0, 1], grid step 0.05");
    let t = two_cube_probability(8, 1, (0.0, 1.0), 0.05, 0.5, 4.0, &strong, 400, 78, 32).unwrap();
    println!(
        "  P(some E in I: both cubes not good) = {:.4}, target 1/L^(2p) = {:.2e}",
        t.estimate.mean, t.target
    );
    println!(
        "  grid: {} points, worst Lipschitz margin {:.3e}",
        t.grid_points, t.lipschitz_margin
    );
    harness.check_bool("two-cube estimate recorded with CI", t.estimate.trials == 400);

    println!("\n[4] degenerate interval reduces to a product-like bound");
    let single = two_cube_probability(8, 1, (0.5, 0.5), 0.05, 0.5, 4.0, &strong, 400, 78, 32).unwrap();
    let one = single_scale_probability(8, 1, 0.5, 0.5, 4.0, &strong, 400, 78).unwrap();
    let product_like = one.estimate.mean * one.estimate.mean
        + 3.0 * (one.estimate.ci_hi - one.estimate.mean);
    println!(
        "  point interval: {:.4} vs squared single-cube + 3 CI = {:.4}",
        single.estimate.mean, product_like
    );
    harness.check_upper(
        "point-interval probability within the product-like bound",
        single.estimate.mean,
        product_like.max(1.0 / 400.0),
    );

    println!();
    ExitCode::from(harness.finish() as u8)
}
