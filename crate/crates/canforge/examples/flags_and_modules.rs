//! Enumerate flags, assemble the flag modules, and verify every matrix
//! factorization identity phi*psi = psi*phi = (uv - f)*Id exactly.
//!
//! Run: cargo run --example flags_and_modules

use canforge::can::build_flag_module;
use canforge::field::Field;
use canforge::flags::enumerate_flags;
use canforge::mf::{verify_mf, FactorSystem};

fn main() {
    let q = Field::rationals();
    let sys = FactorSystem::parse(&q, &["x", "y", "x+y"]).unwrap();
    let all = enumerate_flags(sys.n(), false).unwrap();
    let maximal = enumerate_flags(sys.n(), true).unwrap();
    println!(
        "n = {}: {} flags in total, {} maximal",
        sys.n(),
        all.len(),
        maximal.len()
    );
    for flag in &maximal {
        let module = build_flag_module(&sys, flag).unwrap();
        print!("flag {}: summands", flag.describe());
        for (mf, label) in module.summands.iter().zip(&module.labels) {
            assert!(verify_mf(mf), "matrix factorization identity failed");
            print!(" {label}");
            if !mf.is_free() {
                assert!(mf.is_reduced());
            }
        }
        println!("  (all factorizations verified)");
    }
    // the 2x2 blocks themselves
    let t13 = canforge::mf::flag_ideal_mf(&sys, &[1, 3]).unwrap();
    println!("\nphi of T_{{1,3}}:");
    for row in &t13.phi {
        println!(
            "  [{}]",
            row.iter()
                .map(|p| p.to_string_grlex())
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
}
