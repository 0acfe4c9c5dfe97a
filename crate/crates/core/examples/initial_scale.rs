//! The two initial-scale estimates that seed the multiscale induction:
//! large disorder (inverting the explicit two-cube Wegner bound for the
//! admissible density) and low energy (tiling a big cube with small
//! Neumann blocks and trading probability for rate).
//!
//! Run with: cargo run --example initial_scale

use anderson_lab::disorder::Distribution;
use anderson_lab::msa::{initial_scale_large_disorder, initial_scale_low_energy};
use anderson_lab::validation::ValidationHarness;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut harness = ValidationHarness::new("initial_scale");

    println!("[1] large disorder: bound 8|g| e^(γ L0) (2L0+1)^(2d) vs L0^(-2p)");
    let strong = Distribution::ScaledUniform { lambda: 100.0 };
    let rep = initial_scale_large_disorder(5, 1, 0.5, 3.0, &strong, 2000, 41).unwrap();
    println!(
        "  |g| = 0.01: bound = {:.3e}, target = {:.3e}, admissible |g| <= {:.3e}",
        rep.bound, rep.target, rep.density_threshold
    );
    harness.check_bool(
        "threshold inverts the bound",
        (8.0 * rep.density_threshold * (0.5f64 * 5.0).exp() * 11f64.powi(2) - rep.target).abs()
            <= 1e-12 * rep.target,
    );
    if let (Some(mc), Some(ok)) = (&rep.mc, rep.mc_within_bound) {
        println!("  MC two-cube resonance frequency = {:.4} (within bound: {ok})", mc.mean);
        harness.check_bool("MC frequency consistent with the analytic bound", ok);
    }
    let vanishing = Distribution::ScaledUniform { lambda: 1e9 };
    let rep0 = initial_scale_large_disorder(5, 1, 0.5, 3.0, &vanishing, 0, 41).unwrap();
    harness.check_bool("|g| -> 0 always passes", rep0.analytic_pass);

    println!("\n[2] low energy: tile Λ_L0 with r^d Neumann blocks");
    let uniform = Distribution::Uniform { a: 0.0, b: 1.0 };
    let low = initial_scale_low_energy(2, 3, 1, &uniform, 5000, 42).unwrap();
    println!(
        "  ℓ0=2, r=3: L0 = {}, tiles = {}, |Λ_7| = 15 = 3·5: {}",
        low.big_l, low.tile_count, low.volume_identity
    );
    harness.check_bool("tiling volume identity", low.volume_identity);
    harness.check_upper(
        "E0(big) >= min_j E0(tile_j) per realization",
        low.max_tiling_violation,
        1e-10,
    );

    println!("\n[3] small-cube tails decay superlinearly in the volume");
    let t3 = initial_scale_low_energy(3, 3, 1, &uniform, 100_000, 43).unwrap();
    let (p3, p5) = (t3.tail_small.mean, t3.tail_large.mean);
    println!(
        "  P(E0 < thr) at ℓ0=3: {p3:.4e}, at ℓ0=5: {p5:.4e} (thr scales as 1/(βℓ0²))"
    );
    harness.check_bool("tail decreases from ℓ0=3 to ℓ0=5", p5 < p3);
    println!(
        "  union bound r^d · p(ℓ0) = {:.3e} at the initial scale L0 = {}",
        t3.union_bound, t3.big_l
    );

    println!();
    ExitCode::from(harness.finish() as u8)
}
