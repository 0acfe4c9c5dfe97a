//! Time evolution and the RAGE-type diagnostics: unitarity, survival
//! profiles under free vs strong disorder, Wiener time-averages against the
//! atomic sum, and transport-moment profiles.
//!
//! Run with: cargo run --example dynamics_rage

use anderson_lab::disorder::{Distribution, Potential};
use anderson_lab::dynamics::{survival_profile, transport_moment, wiener_average, EvolutionPlan};
use anderson_lab::lattice::{Cube, Site};
use anderson_lab::operator::{build_h, BoundaryKind};
use anderson_lab::validation::ValidationHarness;
use std::process::ExitCode;

fn delta0(cube: &Cube) -> Vec<f64> {
    let region = cube.region();
    let mut psi = vec![0.0; region.len()];
    psi[region.index_of(&Site::origin(cube.dim())).unwrap()] = 1.0;
    psi
}

fn main() -> ExitCode {
    let mut harness = ValidationHarness::new("dynamics_rage");

    println!("[1] two-level benchmark: survival |<δ0, ψ(t)>|² = cos²(t)");
    let sites = vec![anderson_lab::lattice::site(&[0]), anderson_lab::lattice::site(&[1])];
    let region = anderson_lab::lattice::Region::from_sites(sites).unwrap();
    let h2 = anderson_lab::operator::build_h_on(&region, BoundaryKind::Simple, None, usize::MAX)
        .unwrap();
    let plan2 = EvolutionPlan::new(&h2, &[1.0, 0.0]).unwrap();
    let worst = [0.4, 1.3, 2.9]
        .iter()
        .map(|&t| (plan2.evolve(t)[0].norm_sqr() - t.cos().powi(2)).abs())
        .fold(0.0f64, f64::max);
    harness.check_upper("matches the closed form", worst, 1e-10);

    println!("\n[2] Wiener average vs the atomic sum (T = 200)");
    let w = wiener_average(&plan2.weights(), plan2.eigenvalues(), 200.0).unwrap();
    println!("  numeric {:.4} vs atomic {:.4}", w.numeric, w.atomic_sum);
    harness.check_upper("within 0.02 at T=200", (w.numeric - w.atomic_sum).abs(), 0.02);

    println!("\n[3] free vs strongly disordered spreading (L=12, T=60)");
    let cube = Cube::centered(1, 12).unwrap();
    let psi0 = delta0(&cube);
    let free = build_h(&cube, BoundaryKind::Simple, None).unwrap();
    let plan_free = EvolutionPlan::new(&free, &psi0).unwrap();
    let strong = Distribution::ScaledUniform { lambda: 50.0 };
    let pot = Potential::sample(&cube, &strong, 17, 0).unwrap();
    let dis = build_h(&cube, BoundaryKind::Simple, Some(&pot)).unwrap();
    let plan_dis = EvolutionPlan::new(&dis, &psi0).unwrap();
    let pf = survival_profile(&plan_free, &[6], 60.0).unwrap();
    let pd = survival_profile(&plan_dis, &[6], 60.0).unwrap();
    println!(
        "  time-averaged mass outside Λ_6:  free {:.3}  |  λ=50 {:.3e}",
        pf.outside[0], pd.outside[0]
    );
    harness.check_bool("disorder confines the packet", pd.outside[0] < pf.outside[0]);
    harness.check_upper("unitarity at every sample", pf.mass_defect.max(pd.mass_defect), 1e-10);

    println!("\n[4] transport moments: ballistic growth vs localized plateau");
    let early: Vec<f64> = vec![0.0, 1.0, 10.0];
    let mf = transport_moment(&plan_free, 2.0, &early, None).unwrap();
    println!(
        "  free |X|²-moment at t = 0, 1, 10: {:.2}, {:.2}, {:.2}",
        mf.values[0], mf.values[1], mf.values[2]
    );
    harness.check_bool("free moment grows", mf.values[2] > mf.values[1]);
    let late: Vec<f64> = (0..26).map(|i| 50.0 + 2.0 * i as f64).collect();
    let md = transport_moment(&plan_dis, 2.0, &late, None).unwrap();
    let mut sorted = md.values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ratio = md.max / sorted[sorted.len() / 2];
    println!("  disordered late-time max/median = {ratio:.3} (plateau statistic)");
    harness.check_upper("plateau: max/median <= 1.5", ratio, 1.5);

    println!("\n[5] finite-volume RAGE estimator at T = 500");
    let prof = survival_profile(&plan_dis, &[12], 500.0).unwrap();
    println!(
        "  inside-average {:.4} -> 1 (pure point), outside {:.1e} -> 0",
        prof.inside[0], prof.outside[0]
    );
    harness.check_upper("inside average within 0.01 of total mass", (prof.inside[0] - 1.0).abs(), 0.01);

    println!();
    ExitCode::from(harness.finish() as u8)
}
