//! Classify base singularities uv = f1...fn from their factor lists.
//!
//! Run: cargo run --example classify

use canforge::can::classify_base;
use canforge::field::Field;
use canforge::mf::FactorSystem;

fn main() {
    let q = Field::rationals();
    for factors in [
        vec!["x^2+y^3"],
        vec!["x", "y"],
        vec!["x", "x"],
        vec!["x", "y", "x+y"],
        vec!["x", "y", "x^2+y^3"],
    ] {
        let sys = FactorSystem::parse(&q, &factors).unwrap();
        let report = classify_base(&sys);
        println!("uv = {}", sys.product().to_string_grlex());
        println!("  factors: {factors:?}");
        println!(
            "  smooth: {}  isolated: {}  q-factorial: {}  crepant-resolution criterion: {}",
            report.smooth, report.isolated, report.q_factorial, report.ct
        );
        println!("  {}", report.terminal_note);
        println!();
    }
}
