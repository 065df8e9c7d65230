use canforge::can::{gabriel_quiver, required_tower_order};
use canforge::field::{rat_int, Field};
use canforge::flags::flag_of_permutation;
use canforge::homology::TruncTower;
use canforge::mf::FactorSystem;

fn main() {
    // different flag order on the repeated-factor system: gaps y, y, x | x+y
    let q = Field::rationals();
    let s = FactorSystem::parse(&q, &["x", "y", "y", "x+y"]).unwrap();
    let f = flag_of_permutation(&[2, 3, 1, 4]).unwrap();
    let orders = [4u32, 5];
    let tower = TruncTower::new(&s.hypersurface(), required_tower_order(&s, &orders));
    let qv = gabriel_quiver(&s, &f, &tower, &orders).unwrap();
    println!("perm [2,3,1,4]: vertices {:?}", qv.vertices);
    println!("  arrows {:?}", qv.arrows);
    println!("  loops {:?} agreed {}", qv.loops, qv.agreed);

    // conifold over Q(i): identical quiver, extension arithmetic end to end
    let qi = Field::extension("i", vec![rat_int(1), rat_int(0)]).unwrap();
    let si = FactorSystem::parse(&qi, &["x", "y"]).unwrap();
    let fi = canforge::flags::Flag::new(2, vec![vec![1]]).unwrap();
    let ti = TruncTower::new(&si.hypersurface(), required_tower_order(&si, &orders));
    let qvi = gabriel_quiver(&si, &fi, &ti, &orders).unwrap();
    println!(
        "conifold over Q(i): arrows {:?} loops {:?}",
        qvi.arrows, qvi.loops
    );
}
