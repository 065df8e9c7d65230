//! The corner reduction sends a flag ideal over uv - f to a 1x1 pair over f
//! in two variables; Ext verdicts computed in the two models must agree.
//!
//! Run: cargo run --example knorrer_crosscheck

use canforge::can::required_tower_order;
use canforge::field::Field;
use canforge::homology::{ext_dim, TruncTower};
use canforge::mf::{flag_ideal_mf, knorrer_reduce, FactorSystem};

fn main() {
    let q = Field::rationals();
    let orders = [4u32, 5, 6];
    let sys = FactorSystem::parse(&q, &["x", "y", "x+y"]).unwrap();
    let tower4 = TruncTower::new(&sys.hypersurface(), required_tower_order(&sys, &orders));
    let tower2 = TruncTower::new(
        &sys.plane_hypersurface(),
        required_tower_order(&sys, &orders),
    );
    for subset in [vec![1], vec![2], vec![1, 3]] {
        let four = flag_ideal_mf(&sys, &subset).unwrap();
        let two = knorrer_reduce(&four).unwrap();
        println!(
            "{}  ->  plane pair ({}, {})",
            four.label.clone().unwrap(),
            two.phi[0][0].to_string_grlex(),
            two.psi[0][0].to_string_grlex()
        );
        for degree in [1u8, 2] {
            let e4 = ext_dim(&tower4, &four, &four, degree, &orders).unwrap();
            let e2 = ext_dim(&tower2, &two, &two, degree, &orders).unwrap();
            println!(
                "  Ext^{degree}: fourfold {:?} vs plane {:?}  (agree: {})",
                e4.verdict,
                e2.verdict,
                e4.verdict == e2.verdict
            );
        }
    }
}
