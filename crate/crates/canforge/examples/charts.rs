//! The blowup chart tower of a flag: per-level charts, singular origins,
//! and contraction types.
//!
//! Run: cargo run --example charts

use canforge::can::contractions_display;
use canforge::charts::{blowup_charts, singular_points};
use canforge::field::Field;
use canforge::flags::flag_of_permutation;
use canforge::mf::FactorSystem;

fn main() {
    let q = Field::rationals();
    // a four-factor tower with a repeated middle factor
    let sys = FactorSystem::parse(&q, &["x", "y", "y", "x+y"]).unwrap();
    let flag = flag_of_permutation(&[1, 2, 3, 4]).unwrap();
    println!(
        "uv = {}   flag {}",
        sys.product().to_string_grlex(),
        flag.describe()
    );

    let tower = blowup_charts(&sys, &flag);
    let points = singular_points(&sys, &flag);
    for (level, reports) in tower.levels.iter().zip(&points) {
        println!("level {}:", level.level);
        for (chart, report) in level.charts.iter().zip(reports) {
            let status = if report.smooth {
                "smooth".to_string()
            } else {
                format!(
                    "singular (isolated: {}, single-factor: {})",
                    report.isolated, report.q_factorial
                )
            };
            println!(
                "  chart {}: {}*{} = {}   origin {}",
                chart.index, chart.lhs.0, chart.lhs.1, chart.rhs, status
            );
        }
    }
    println!("contractions: {:?}", contractions_display(&sys, &flag));
}
