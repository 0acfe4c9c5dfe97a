//! Green's functions on cubes: the geometric resolvent identity, good and
//! resonant cube classification, and the decay certifier that promotes
//! verdicts at one scale to a certificate at the next.
//!
//! Run with: cargo run --example green_decay

use anderson_lab::disorder::{Distribution, Potential};
use anderson_lab::green::{
    certify_decay, classify_all_subcubes, classify_cube, geometric_resolvent_check, green_column,
    MsaPath,
};
use anderson_lab::lattice::{site, Cube};
use anderson_lab::operator::{build_h, BoundaryKind};
use anderson_lab::validation::ValidationHarness;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut harness = ValidationHarness::new("green_decay");

    println!("[1] a single Green column and its defining residual");
    let cube = Cube::centered(1, 0).unwrap();
    let pot = Potential::from_values(&cube.region(), vec![0.5]).unwrap();
    let h = build_h(&cube, BoundaryKind::Simple, Some(&pot)).unwrap();
    let col = green_column(&h, 1.0, &site(&[0])).unwrap();
    println!("  single site, V=0.5, E=1: G(0,0) = {:.4} (= 1/1.5)", col.values[0]);
    harness.check_upper("column residual", col.residual, 1e-8);

    println!("\n[2] geometric resolvent identity on random instances");
    let dist = Distribution::Uniform { a: 0.0, b: 1.0 };
    let mut worst: f64 = 0.0;
    for d in [1usize, 2] {
        let ambient = Cube::centered(d, 3).unwrap();
        let inner = Cube::centered(d, 1).unwrap();
        for r in 0..20u64 {
            let pot = Potential::sample(&ambient, &dist, 100 + r, 0).unwrap();
            let mut mc = vec![0i64; d];
            mc[0] = 3;
            match geometric_resolvent_check(&inner, &ambient, &pot, -1.0, &site(&vec![0; d]), &site(&mc))
            {
                Ok(res) => worst = worst.max(res.residual / res.tolerance),
                Err(_) => continue,
            }
        }
    }
    println!("  worst residual / tolerance over 40 instances: {worst:.3e}");
    harness.check_upper("identity holds within tolerance", worst, 1.0);

    println!("\n[3] classification at strong vs vanishing disorder");
    let big = Cube::centered(1, 10).unwrap();
    let strong = Distribution::ScaledUniform { lambda: 30.0 };
    let ps = Potential::sample(&big, &strong, 5, 0).unwrap();
    let vs = classify_cube(&big, &ps, 0.5, 1.0).unwrap();
    println!(
        "  λ=30:  good={} resonant={} measured rate={:.3}",
        vs.good,
        vs.resonant,
        vs.rate_measured.unwrap_or(f64::NAN)
    );
    let free = Potential::zero(&big.region());
    let vf = classify_cube(&big, &free, 2.0, 1.0).unwrap();
    println!(
        "  V≡0 at mid band: good={} measured rate={:.3}",
        vf.good,
        vf.rate_measured.unwrap_or(f64::NAN)
    );
    harness.check_bool("strong disorder gives a good cube", vs.good);
    harness.check_bool("free system at mid band is not good", !vf.good);

    println!("\n[4] decay certifier: classify sub-cubes, certify the big cube, confirm");
    let l = 8i64;
    let alpha = 1.5f64;
    let big_l = (l as f64).powf(alpha).ceil() as i64;
    let big = Cube::centered(1, big_l).unwrap();
    let mut issued = 0u32;
    let mut confirmed = 0u32;
    let mut refused = 0u32;
    let mut sample_cert = None;
    for r in 0..40u64 {
        let pot = Potential::sample(&big, &strong, 700 + r, 0).unwrap();
        let verdicts = classify_all_subcubes(&big, &pot, 0.5, 1.0, l).unwrap();
        let cert = certify_decay(&big, &pot, 0.5, 1.0, alpha, MsaPath::Weak, &verdicts).unwrap();
        if cert.pass {
            issued += 1;
            let direct = classify_cube(&big, &pot, 0.5, cert.gamma_out.unwrap()).unwrap();
            if direct.good {
                confirmed += 1;
            }
            if sample_cert.is_none() {
                sample_cert = Some(cert);
            }
        } else {
            refused += 1;
        }
    }
    println!("  issued {issued}, refused {refused}, confirmed {confirmed} (L={big_l}, l={l})");
    harness.check_bool("certificates were issued", issued > 0);
    harness.check_bool("every issued certificate confirmed by direct check", confirmed == issued);

    if let Some(cert) = sample_cert {
        println!("\n[5] one certificate as JSON (truncated)");
        let json = serde_json::to_string_pretty(&cert).unwrap();
        for line in json.lines().take(16) {
            println!("  {line}");
        }
        println!("  ...");
    }

    println!();
    ExitCode::from(harness.finish() as u8)
}
