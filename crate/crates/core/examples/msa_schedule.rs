//! Multiscale length and rate schedules: `L_{k+1} = ⌈L_k^α⌉`, the rate
//! recursion with its gates and floors, the scale-sum bound, and the three
//! probabilistic budget terms of the induction step.
//!
//! Run with: cargo run --example msa_schedule

use anderson_lab::disorder::Distribution;
use anderson_lab::msa::{
    build_schedule, induction_budget_check, induction_budget_scan, scale_sum, MsaParams,
    MsaRunReport,
};
use anderson_lab::validation::ValidationHarness;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut harness = ValidationHarness::new("msa_schedule");
    let dist = Distribution::Uniform { a: 0.0, b: 1.0 };

    println!("[1] a gate-satisfying schedule: L0=2048, alpha=1.5, p=8");
    let good = MsaParams {
        d: 1,
        alpha: 1.5,
        p: 8.0,
        gamma0: 16.0 / (2048f64).powf(0.75),
        l0: 2048,
        dist: dist.clone(),
    };
    let sched = build_schedule(&good, 20).unwrap();
    for g in &sched.gates {
        println!("  gate {:<22} {:>10.4} vs {:>8.4}  {}", g.name, g.lhs, g.rhs, if g.pass { "pass" } else { "FLAGGED" });
    }
    let min_gamma = sched.gammas.iter().cloned().fold(f64::INFINITY, f64::min);
    println!("  min_k gamma_k = {:.5} vs gamma0/2 = {:.5}", min_gamma, good.gamma0 / 2.0);
    harness.check_bool("rate never drops below gamma0/2", sched.rate_half_floor);
    harness.check_bool("rate keeps the 2/sqrt(L) floor", sched.rate_sqrt_floor);

    println!("\n[2] a small-L0 schedule is emitted with flagged gates, not refused");
    let small = MsaParams {
        d: 1,
        alpha: 1.5,
        p: 8.0,
        gamma0: 1.0,
        l0: 10,
        dist: dist.clone(),
    };
    let s = build_schedule(&small, 2).unwrap();
    println!("  scales: {:?}", s.scales);
    harness.check_bool("L1 = 32 and L2 = 182 from ceil powers", s.scales == vec![10.0, 32.0, 182.0]);
    harness.check_bool("the 32-gate is flagged at L0=10", !s.gates[0].pass);

    println!("\n[3] scale sums: sum 1/L_k^beta <= 2/L0^beta when L0^(beta(alpha-1)) >= 2");
    for (l0, alpha, beta) in [(4i64, 1.5, 1.0), (2048, 1.5, 0.5), (2048, 1.5, 0.75)] {
        let (sum, bound, hyp) = scale_sum(l0, alpha, beta, 40);
        println!("  L0={l0:>4} beta={beta}: sum={sum:.5} bound={bound:.5} hypothesis={hyp}");
        if hyp {
            harness.check_upper(&format!("partial sum bounded (L0={l0}, beta={beta})"), sum, bound);
        }
    }

    println!("\n[4] induction budget terms and the smallest passing scale");
    let (p, d) = (3.0, 1usize);
    // alpha = 1.2 sits exactly at the limit 2p/(p+2d) for p=3, d=1: the
    // pair term only matches the target rate and never beats its constant
    let marginal = induction_budget_check(50, p, 1.2, d);
    println!(
        "  marginal alpha=1.2, l=50: resonance {:.2e} | sub-resonance {:.2e} | pairs {:.2e} vs {:.2e}",
        marginal.resonance_term.0,
        marginal.subresonance_term.0,
        marginal.pair_term.0,
        marginal.pair_term.1
    );
    harness.check_bool(
        "pair term flagged at the alpha limit",
        !marginal.pair_term.2,
    );
    let alpha = 1.1;
    if let Some(l_min) = induction_budget_scan(p, alpha, d, 2, 20_000) {
        println!("  p={p} alpha={alpha}: all three terms pass from l = {l_min}");
        let b = induction_budget_check(l_min, p, alpha, d);
        println!(
            "    resonance {:.2e} | sub-resonance {:.2e} | pairs {:.2e}  vs target {:.2e}",
            b.resonance_term.0, b.subresonance_term.0, b.pair_term.0, b.pair_term.1
        );
        harness.check_bool("scan result really passes", b.all_pass);
        harness.check_bool(
            "the scale just below fails at least one term",
            !induction_budget_check(l_min - 1, p, alpha, d).all_pass,
        );
    } else {
        harness.check_bool("budget scan found a passing scale", false);
    }

    println!("\n[5] JSON run report (head)");
    let report = MsaRunReport {
        params: good,
        schedule: sched,
        mc_estimates: vec![],
    };
    for line in report.to_json().lines().take(10) {
        println!("  {line}");
    }
    println!("  ...");

    println!();
    ExitCode::from(harness.finish() as u8)
}
