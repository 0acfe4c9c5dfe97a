//! Restricted Hamiltonians under the three boundary conditions, the exact
//! splitting identity `H_Λ₂ = H_Λ₁ ⊕ H_{Λ₂\Λ₁} + Γ`, eigenvalue bracketing,
//! and shift covariance of the spectra.
//!
//! Run with: cargo run --example boundary_conditions

use anderson_lab::disorder::{Distribution, Potential};
use anderson_lab::lattice::{site, Cube};
use anderson_lab::operator::{
    build_h, gamma, shift_covariance_check, verify_splitting, BoundaryKind,
};
use anderson_lab::spectral::eigen;
use anderson_lab::validation::ValidationHarness;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut harness = ValidationHarness::new("boundary_conditions");
    let dist = Distribution::Uniform { a: 0.0, b: 1.0 };

    println!("[1] matrix rules on the 3-site segment");
    let seg = Cube::centered(1, 1).unwrap();
    for bc in BoundaryKind::ALL {
        let h = build_h(&seg, bc, None).unwrap();
        let m = h.dense().unwrap();
        println!(
            "  {bc:?}: diag = ({}, {}, {}), off-diag = {}",
            m[(0, 0)],
            m[(1, 1)],
            m[(2, 2)],
            m[(0, 1)]
        );
    }
    let hn = build_h(&seg, BoundaryKind::Neumann, None).unwrap();
    let e0 = eigen(&hn, false).unwrap().eigenvalues[0];
    harness.check_upper("Neumann kernel: lowest free eigenvalue is 0", e0.abs(), 1e-12);

    println!("\n[2] splitting residual is exactly zero (integer + float assembly)");
    let mut worst: f64 = 0.0;
    for d in [1usize, 2, 3] {
        let ambient = Cube::centered(d, if d == 3 { 2 } else { 3 }).unwrap();
        let inner = Cube::centered(d, 1).unwrap();
        for (i, bc) in BoundaryKind::ALL.into_iter().enumerate() {
            let pot = Potential::sample(&ambient, &dist, 41, i as u64).unwrap();
            let r = verify_splitting(&inner, &ambient, bc, Some(&pot)).unwrap();
            worst = worst.max(r);
            println!("  d={d} {bc:?}: residual = {r:.1e}");
        }
    }
    harness.check_bool("all splitting residuals exactly 0", worst == 0.0);

    println!("\n[3] boundary operator signs");
    let inner = Cube::centered(1, 1).unwrap().region();
    let ambient = Cube::centered(1, 2).unwrap().region();
    let gn = gamma(&inner, &ambient, BoundaryKind::Neumann).unwrap();
    let gd = gamma(&inner, &ambient, BoundaryKind::Dirichlet).unwrap();
    let min_n = gn.symmetric_eigenvalues().iter().cloned().fold(f64::MAX, f64::min);
    let max_d = gd.symmetric_eigenvalues().iter().cloned().fold(f64::MIN, f64::max);
    harness.check_bool("Neumann Γ is positive semidefinite", min_n >= -1e-12);
    harness.check_bool("Dirichlet Γ is negative semidefinite", max_d <= 1e-12);

    println!("\n[4] eigenvalue bracketing N <= simple <= D on random potentials");
    let cube = Cube::centered(2, 2).unwrap();
    let mut ok = true;
    for r in 0..50u64 {
        let pot = Potential::sample(&cube, &dist, 7, r).unwrap();
        let en = eigen(&build_h(&cube, BoundaryKind::Neumann, Some(&pot)).unwrap(), false)
            .unwrap()
            .eigenvalues;
        let es = eigen(&build_h(&cube, BoundaryKind::Simple, Some(&pot)).unwrap(), false)
            .unwrap()
            .eigenvalues;
        let ed = eigen(&build_h(&cube, BoundaryKind::Dirichlet, Some(&pot)).unwrap(), false)
            .unwrap()
            .eigenvalues;
        ok &= (0..en.len()).all(|k| en[k] <= es[k] + 1e-10 && es[k] <= ed[k] + 1e-10);
    }
    harness.check_bool("bracketing holds for every index on 50 draws", ok);

    println!("\n[5] shift covariance of the spectrum");
    let j = site(&[5]);
    let pot = Potential::sample(&Cube::new(j.clone(), 2).unwrap(), &dist, 3, 1).unwrap();
    let diff = shift_covariance_check(2, &j, &pot).unwrap();
    harness.check_upper("translated cube has identical spectrum", diff, 1e-12);

    println!("\n[6] coordinate-list dump of H (first lines)");
    let h = build_h(&seg, BoundaryKind::Simple, None).unwrap();
    let mut buf = Vec::new();
    h.dump_coordinates(&mut buf).unwrap();
    for line in String::from_utf8(buf).unwrap().lines().take(4) {
        println!("  {line}");
    }

    println!();
    ExitCode::from(harness.finish() as u8)
}
