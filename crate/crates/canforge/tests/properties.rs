//! Property tests for the arithmetic core and matrix-factorization layer.

use proptest::prelude::*;

use canforge::factor::{formal_factor_quadratic, verify_factorization, QuadraticSplit};
use canforge::field::{rat_int, Field};
use canforge::mf::{flag_ideal_mf, knorrer_reduce, verify_mf, FactorSystem};
use canforge::parse::parse_poly;
use canforge::poly::{Mono, Poly, Vars};

fn q() -> Field {
    Field::rationals()
}

/// Random sparse polynomial in x, y with small integer coefficients.
fn arb_poly(max_deg: u16, max_terms: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec(((0..=max_deg, 0..=max_deg), -4i64..=4), 1..=max_terms).prop_map(
        move |terms| {
            let field = q();
            let vars = Vars::xy();
            let mut p = Poly::zero(vars, field.clone());
            for ((a, b), c) in terms {
                if a + b > max_deg || c == 0 {
                    continue;
                }
                let m = Mono([a, b, 0, 0]);
                let k = field.from_int(c);
                let cur = p.terms.get(&m).map(|x| field.add(x, &k)).unwrap_or(k);
                if field.is_zero(&cur) {
                    p.terms.remove(&m);
                } else {
                    p.terms.insert(m, cur);
                }
            }
            p
        },
    )
}

fn arb_unit(max_deg: u16) -> impl Strategy<Value = Poly> {
    (arb_poly(max_deg, 6), 1i64..=5).prop_map(|(p, c)| {
        let field = q();
        let mut u = p;
        // force a nonzero constant term
        u.terms.insert(Mono::one(), field.from_int(c));
        u
    })
}

fn arb_in_m(max_deg: u16) -> impl Strategy<Value = Poly> {
    arb_poly(max_deg, 6).prop_map(|mut p| {
        p.terms.remove(&Mono::one());
        if p.is_zero() {
            // fall back to x
            p.terms.insert(Mono([1, 0, 0, 0]), q().one());
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_distributivity((a, b, c) in (arb_poly(4, 5), arb_poly(4, 5), arb_poly(4, 5))) {
        let left = a.add(&b).mul(&c);
        let right = a.mul(&c).add(&b.mul(&c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn ord_is_additive((a, b) in (arb_poly(4, 5), arb_poly(4, 5))) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let prod = a.mul(&b);
        prop_assert_eq!(prod.ord(), Some(a.ord().unwrap() + b.ord().unwrap()));
    }

    #[test]
    fn series_inverse_roundtrip((u, n) in (arb_unit(3), 1u32..=8)) {
        let inv = u.series_inverse(n).unwrap();
        let one = Poly::one(u.vars.clone(), u.field.clone());
        prop_assert_eq!(u.mul_trunc(&inv, n), one.truncate(n));
    }

    #[test]
    fn series_sqrt_roundtrip((u, n, scale) in (arb_unit(3), 1u32..=8, 1i64..=4)) {
        // force a square constant term by squaring the unit's constant
        let field = u.field.clone();
        let c0 = u.constant_term();
        let shifted = u.add(&Poly::constant(
            u.vars.clone(),
            field.clone(),
            field.sub(&field.mul(&field.mul(&c0, &c0), &field.from_int(scale * scale)), &c0),
        ));
        let s = shifted.series_sqrt(n).unwrap();
        prop_assert_eq!(s.mul_trunc(&s, n), shifted.truncate(n));
    }

    #[test]
    fn associate_is_reflexive_and_symmetric((f, g, c) in (arb_in_m(3), arb_in_m(3), 1i64..=3)) {
        prop_assert!(f.is_associate_default(&f).unwrap());
        // scalar multiples are associates
        let fc = f.scale(&q().from_int(c));
        prop_assert!(f.is_associate_default(&fc).unwrap());
        // symmetry on arbitrary pairs
        let fg = f.is_associate_default(&g).unwrap();
        let gf = g.is_associate_default(&f).unwrap();
        prop_assert_eq!(fg, gf);
    }

    #[test]
    fn associate_transitivity_on_unit_multiples((f, u1, u2, n) in (arb_in_m(2), arb_unit(2), arb_unit(2), 3u32..=6)) {
        // f ~ f*u1 and f*u1 ~ f*u1*u2 imply f ~ f*u1*u2; all three hold by
        // construction, so check the composite claim directly.
        let g = f.mul_trunc(&u1, n + 4);
        let h = g.mul_trunc(&u2, n + 4);
        let big = (f.total_degree().unwrap_or(0) + h.total_degree().unwrap_or(0) + 2).max(8);
        prop_assert!(f.is_associate(&g, big).unwrap());
        prop_assert!(g.is_associate(&h, big).unwrap());
        prop_assert!(f.is_associate(&h, big).unwrap());
    }

    #[test]
    fn shear_preserves_ord((f, c) in (arb_in_m(4), 0i64..=4)) {
        let sheared = f.shear_x_by_y(&q().from_int(c));
        prop_assert_eq!(sheared.ord(), f.ord());
    }

    #[test]
    fn flag_ideal_factorizations_verify(sel in proptest::sample::select(vec![
        (vec!["x", "y"], vec![1usize]),
        (vec!["x", "y"], vec![2]),
        (vec!["x", "x"], vec![1]),
        (vec!["x", "y", "x+y"], vec![1]),
        (vec!["x", "y", "x+y"], vec![1, 3]),
        (vec!["x", "y", "x+y"], vec![2, 3]),
        (vec!["x", "x+y^2", "y"], vec![2]),
        (vec!["x", "y", "y", "x+y"], vec![1, 2]),
        (vec!["x", "y", "y", "x+y"], vec![1, 2, 3]),
        (vec!["x^2+y^3", "x", "y"], vec![1, 2]),
    ])) {
        let (factors, subset) = sel;
        let sys = FactorSystem::parse(&q(), &factors).unwrap();
        let mf = flag_ideal_mf(&sys, &subset).unwrap();
        prop_assert!(verify_mf(&mf));
        prop_assert!(mf.is_reduced());
        // shift preserves verification; double shift restores the pair
        let sh = mf.shift();
        prop_assert!(verify_mf(&sh));
        prop_assert_eq!(sh.shift().phi, mf.phi.clone());
        // the plane reduction multiplies back to f
        let red = knorrer_reduce(&mf).unwrap();
        prop_assert!(verify_mf(&red));
        let back = red.phi[0][0].mul(&red.psi[0][0]);
        prop_assert_eq!(back, sys.product());
    }

    #[test]
    fn quadratic_split_roundtrip((a, b, uc) in (1i64..=3, -3i64..=3, 1i64..=2)) {
        // f = unit * (y - a*x)(y - b*x) must split and re-verify
        let vars = Vars::xy();
        let f0 = parse_poly(&format!("(y - {a}*x)*(y - ({b})*x)"), &vars, &q()).unwrap();
        let unit = parse_poly(&format!("{uc} + x"), &vars, &q()).unwrap();
        let f = f0.mul(&unit);
        match formal_factor_quadratic(&f, 8, &q()).unwrap() {
            QuadraticSplit::Split(fac) => prop_assert!(verify_factorization(&f, &fac)),
            other => prop_assert!(false, "expected split, got {:?}", other),
        }
    }
}

/// Field monotonicity: splits over the rationals persist over extensions,
/// with factors mapping to associates.
#[test]
fn split_field_monotonicity() {
    let qi = Field::extension("i", vec![rat_int(1), rat_int(0)]).unwrap();
    for text in ["y^2 - x^2", "y^2 - 4*x^2"] {
        let f_q = parse_poly(text, &Vars::xy(), &q()).unwrap();
        let f_i = parse_poly(text, &Vars::xy(), &qi).unwrap();
        let sq = match formal_factor_quadratic(&f_q, 8, &q()).unwrap() {
            QuadraticSplit::Split(fac) => fac,
            other => panic!("expected split over Q, got {other:?}"),
        };
        let si = match formal_factor_quadratic(&f_i, 8, &qi).unwrap() {
            QuadraticSplit::Split(fac) => fac,
            other => panic!("expected split over Q(i), got {other:?}"),
        };
        // each rational factor is an associate of one extension factor
        for g in &sq.factors {
            let g_lift = parse_poly(&g.to_string_grlex(), &Vars::xy(), &qi).unwrap();
            let matched = si
                .factors
                .iter()
                .any(|h| g_lift.is_associate_default(h).unwrap());
            assert!(matched, "{text}: factor {} unmatched", g.to_string_grlex());
        }
    }
}
