//! Gabriel quivers of flag-module endomorphism algebras, with DOT output.
//!
//! Run: cargo run --example quiver

use canforge::can::{gabriel_quiver, required_tower_order};
use canforge::field::Field;
use canforge::flags::Flag;
use canforge::homology::TruncTower;
use canforge::mf::FactorSystem;
use canforge::report::render_dot;

fn main() {
    let q = Field::rationals();
    let sys = FactorSystem::parse(&q, &["x", "y"]).unwrap();
    let flag = Flag::new(2, vec![vec![1]]).unwrap();
    let orders = [4u32, 5];
    let tower = TruncTower::new(&sys.hypersurface(), required_tower_order(&sys, &orders));
    let report = gabriel_quiver(&sys, &flag, &tower, &orders).unwrap();
    println!(
        "vertices {:?}, arrows {:?}, loops {:?}, orders {:?} agreed: {}",
        report.vertices, report.arrows, report.loops, report.orders_checked, report.agreed
    );
    println!("\n{}", render_dot(&report));
}
