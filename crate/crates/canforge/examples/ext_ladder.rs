//! Ext dimension ladders with stabilization verdicts, on an isolated and a
//! non-isolated example.
//!
//! Run: cargo run --example ext_ladder

use canforge::can::required_tower_order;
use canforge::field::Field;
use canforge::homology::{ext_dim, fl_torsion_dim, TruncTower};
use canforge::mf::{flag_ideal_mf, FactorSystem};

fn main() {
    let q = Field::rationals();
    let orders = [4u32, 5, 6, 7];

    // isolated: uv = xy
    let sys = FactorSystem::parse(&q, &["x", "y"]).unwrap();
    let tower = TruncTower::new(&sys.hypersurface(), required_tower_order(&sys, &orders));
    let t1 = flag_ideal_mf(&sys, &[1]).unwrap();
    for degree in [1u8, 2] {
        let e = ext_dim(&tower, &t1, &t1, degree, &orders).unwrap();
        println!(
            "uv = x*y: Ext^{degree}(T1, T1) dims {:?} -> {:?}",
            e.dims, e.verdict
        );
    }

    // non-isolated: uv = x^2 with a repeated factor
    let sys2 = FactorSystem::parse(&q, &["x", "x"]).unwrap();
    let tower2 = TruncTower::new(&sys2.hypersurface(), required_tower_order(&sys2, &orders));
    let s1 = flag_ideal_mf(&sys2, &[1]).unwrap();
    let e = ext_dim(&tower2, &s1, &s1, 1, &orders).unwrap();
    println!(
        "uv = x^2: Ext^1(T1, T1) dims {:?} -> {:?}",
        e.dims, e.verdict
    );
    let fl = fl_torsion_dim(&tower2, &s1, &s1, 1, &orders).unwrap();
    println!("uv = x^2: finite-length torsion estimate (experimental): {fl:?}");
}
