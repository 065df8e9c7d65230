//! Formal (complete-local) factorization in two variables: Weierstrass
//! regularity via shears, Weierstrass division and preparation by successive
//! approximation, and the quadratic split through the discriminant.
//!
//! Only the y-degree-2 split is implemented; that is exactly what the
//! supported chart analyses need. Higher regularity degrees come back as a
//! documented `Unsupported` outcome, never as a wrong answer. Every produced
//! factorization is re-verified by exact truncated multiplication and carries
//! its certification modulus.

use serde::Serialize;

use crate::error::Error;
use crate::field::{Field, K};
use crate::poly::Poly;

/// Result of making f y-regular: the shear applied and the regularity degree.
#[derive(Clone, Debug)]
pub struct WeierstrassData {
    pub original: Poly,
    /// Shear coefficient c in x -> x + c*y; zero means no shear.
    pub shear: K,
    /// Order of f(0, y) after the shear (lowest y-exponent).
    pub y_degree: u32,
    /// Truncation of the sheared polynomial used downstream.
    pub sheared: Poly,
}

/// A certified truncated factorization: product of `factors` agrees with the
/// original modulo m^{order+1}.
#[derive(Clone, Debug)]
pub struct FormalFactorization {
    pub factors: Vec<Poly>,
    pub order: u32,
    pub field: Field,
}

/// Outcome of the quadratic split attempt.
#[derive(Clone, Debug)]
pub enum QuadraticSplit {
    Split(FormalFactorization),
    /// The discriminant has no square root over the configured field. Carries
    /// the obstruction: the unit part of the discriminant whose constant term
    /// is not a square (or a note about odd valuation).
    IrreducibleOverField {
        obstruction: Obstruction,
    },
    /// y-regularity degree is not 2; the split machinery does not apply.
    Unsupported {
        y_degree: u32,
    },
}

#[derive(Clone, Debug, Serialize)]
pub enum Obstruction {
    /// disc = x^e * unit with e odd: no formal square root in any field.
    OddValuation { valuation: u32 },
    /// disc = x^e * unit, e even, but unit(0) is not a square in the field.
    NonSquareConstant { constant: String, unit_part: String },
}

/// Find the smallest shear coefficient c in {0, 1, 2, ...} making f
/// y-regular (f(0, y) != 0 after x -> x + c*y), and report the regularity
/// degree. Always succeeds for nonzero f in characteristic zero.
pub fn weierstrass_prepare(f: &Poly, _order: u32) -> Result<WeierstrassData, Error> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    if f.ord() == Some(0) {
        return Err(Error::UnitInput);
    }
    let field = f.field.clone();
    let dmax = f.total_degree().unwrap_or(0);
    for c in 0..=(dmax as i64 + 1) {
        let ck = field.from_int(c);
        let sheared = if c == 0 {
            f.clone()
        } else {
            f.shear_x_by_y(&ck)
        };
        let restricted = sheared.at_x_zero();
        if let Some(yd) = restricted.ord() {
            return Ok(WeierstrassData {
                original: f.clone(),
                shear: ck,
                y_degree: yd,
                sheared,
            });
        }
    }
    // A polynomial of total degree d has at most d bad shear values.
    Err(Error::WeierstrassDiverged(dmax as usize))
}

/// Weierstrass division: g = q*w + r with w = y^2 + b(x) y + c(x) and
/// deg_y r < 2, everything truncated above total degree `n`. Terminates by
/// y-degree descent.
fn divide_by_quadratic(g: &Poly, b: &Poly, c: &Poly, n: u32) -> (Poly, Poly) {
    let vars = g.vars.clone();
    let field = g.field.clone();
    let mut q = Poly::zero(vars.clone(), field.clone());
    let mut r = Poly::zero(vars.clone(), field.clone());
    let mut work = g.truncate(n);
    let y = Poly::var(vars.clone(), field.clone(), 1);
    let by_plus_c = y.mul(b).add(c);
    // Each round strictly lowers the y-degree of `work`, so this terminates.
    while !work.is_zero() {
        let mut a = Poly::zero(vars.clone(), field.clone());
        let mut low = Poly::zero(vars.clone(), field.clone());
        for (m, coef) in &work.terms {
            if m.0[1] >= 2 {
                let mut shifted = *m;
                shifted.0[1] -= 2;
                a.terms.insert(shifted, coef.clone());
            } else {
                low.terms.insert(*m, coef.clone());
            }
        }
        q = q.add(&a).truncate(n);
        r = r.add(&low).truncate(n);
        if a.is_zero() {
            break;
        }
        // a*(y^2 + by + c) was consumed as a*y^2; push back the correction.
        work = a.mul(&by_plus_c).truncate(n).neg();
    }
    (q, r)
}

/// Weierstrass preparation for y-regularity degree 2: find b(x), c(x) and a
/// unit q with f = q * (y^2 + b y + c) modulo m^{n+1}. The approximation is
/// verified exactly before returning.
fn prepare_quadratic(f: &Poly, n: u32) -> Result<(Poly, Poly, Poly), Error> {
    let vars = f.vars.clone();
    let field = f.field.clone();
    let mut b = Poly::zero(vars.clone(), field.clone());
    let mut c = Poly::zero(vars.clone(), field.clone());
    let max_rounds = (n as usize + 2) * 2;
    for _ in 0..max_rounds {
        let (q, r) = divide_by_quadratic(f, &b, &c, n);
        if r.is_zero() {
            return Ok((q, b, c));
        }
        // r = r1(x) y + r0(x); fold the remainder into (b, c) after dividing
        // by the unit part q(x, 0).
        let q0 = q.coeff_of_y_power(0);
        let q0_inv = q0.series_inverse(n)?;
        let r1 = r.coeff_of_y_power(1);
        let r0 = r.coeff_of_y_power(0);
        let db = r1.mul_trunc(&q0_inv, n);
        let dc = r0.mul_trunc(&q0_inv, n);
        if db.is_zero() && dc.is_zero() {
            break;
        }
        b = b.add(&db).truncate(n);
        c = c.add(&dc).truncate(n);
    }
    // Final check: accept only a certified division.
    let (q, r) = divide_by_quadratic(f, &b, &c, n);
    if r.is_zero() {
        Ok((q, b, c))
    } else {
        Err(Error::WeierstrassDiverged(n as usize))
    }
}

/// Attempt the formal quadratic split of f over the configured field,
/// truncated at order `n` (all claims are modulo m^{n+1}).
///
/// Pipeline: shear to y-regularity, require regularity degree 2, prepare
/// f = unit * (y^2 + b y + c), then apply the quadratic formula: the roots
/// are (-b ± sqrt(disc))/2 with disc = b^2 - 4c in `K[[x]]`. The square root
/// exists over the field iff disc = x^{2k} * w with w(0) a square; otherwise
/// the obstruction is reported. Factors are unsheared back to the original
/// coordinates and the product is verified exactly.
pub fn formal_factor_quadratic(f: &Poly, n: u32, field: &Field) -> Result<QuadraticSplit, Error> {
    if f.field != *field {
        // The caller selects the field by parsing f over it.
        return Err(Error::Field(
            "polynomial was parsed over a different field".into(),
        ));
    }
    let prep = weierstrass_prepare(f, n)?;
    if prep.y_degree != 2 {
        return Ok(QuadraticSplit::Unsupported {
            y_degree: prep.y_degree,
        });
    }
    let work_order = n + 2;
    let (unit, b, c) = prepare_quadratic(&prep.sheared, work_order)?;
    // disc = b^2 - 4c, a univariate series in x.
    let four = field.from_int(4);
    let disc = b.mul_trunc(&b, work_order).sub(&c.scale(&four));
    if disc.is_zero() {
        // Double root -b/2: f = unit * (y + b/2)^2.
        let minus_half = field.from_rat(crate::field::rat(-1, 2));
        let root = b.scale(&minus_half);
        return finish_split(f, &prep, &unit, &root, &root, n);
    }
    let e = disc.ord().unwrap();
    if e % 2 != 0 {
        return Ok(QuadraticSplit::IrreducibleOverField {
            obstruction: Obstruction::OddValuation { valuation: e },
        });
    }
    // disc = x^e * w. The shear made everything y-regular, but disc lives in
    // K[[x]] only; factor out the monomial exactly.
    let mut w = Poly::zero(f.vars.clone(), field.clone());
    for (m, coef) in &disc.terms {
        debug_assert_eq!(m.0[1], 0, "discriminant must be univariate in x");
        let mut shifted = *m;
        if (shifted.0[0] as u32) < e {
            // part of the truncation tail; ignore below the valuation
            continue;
        }
        shifted.0[0] -= e as u16;
        w.terms.insert(shifted, coef.clone());
    }
    let w0 = w.constant_term();
    let sqrt_w = match w.series_sqrt(work_order) {
        Ok(s) => s,
        Err(Error::NotASquare(_)) => {
            return Ok(QuadraticSplit::IrreducibleOverField {
                obstruction: Obstruction::NonSquareConstant {
                    constant: field.fmt_elem(&w0),
                    unit_part: w.truncate(3).to_string_grlex(),
                },
            })
        }
        Err(e) => return Err(e),
    };
    // sqrt(disc) = x^{e/2} * sqrt(w)
    let half_e = (e / 2) as u16;
    let xpow = Poly::monomial(
        f.vars.clone(),
        field.clone(),
        crate::poly::Mono([half_e, 0, 0, 0]),
        field.one(),
    );
    let sqrt_disc = xpow.mul_trunc(&sqrt_w, work_order);
    let half = field.from_rat(crate::field::rat(1, 2));
    let r_plus = b.neg().add(&sqrt_disc).scale(&half);
    let r_minus = b.neg().sub(&sqrt_disc).scale(&half);
    finish_split(f, &prep, &unit, &r_plus, &r_minus, n)
}

fn finish_split(
    f: &Poly,
    prep: &WeierstrassData,
    unit: &Poly,
    root_a: &Poly,
    root_b: &Poly,
    n: u32,
) -> Result<QuadraticSplit, Error> {
    let vars = f.vars.clone();
    let field = f.field.clone();
    let y = Poly::var(vars, field.clone(), 1);
    // Factors in sheared coordinates; fold the unit into the first one.
    let f1 = unit.mul_trunc(&y.sub(root_a), n + 1).truncate(n);
    let f2 = y.sub(root_b).truncate(n);
    // Undo the shear x -> x - c*y.
    let unshear = |p: &Poly| -> Poly {
        if field.is_zero(&prep.shear) {
            p.clone()
        } else {
            p.shear_x_by_y(&field.neg(&prep.shear)).truncate(n)
        }
    };
    let g1 = unshear(&f1);
    let g2 = unshear(&f2);
    let fac = FormalFactorization {
        factors: vec![g1, g2],
        order: n,
        field,
    };
    if !verify_factorization(f, &fac) {
        return Err(Error::WeierstrassDiverged(n as usize));
    }
    Ok(QuadraticSplit::Split(fac))
}

/// Exact check: the product of the factors agrees with f modulo m^{order+1}.
pub fn verify_factorization(f: &Poly, fac: &FormalFactorization) -> bool {
    let n = fac.order;
    let mut prod = Poly::one(f.vars.clone(), f.field.clone());
    for factor in &fac.factors {
        prod = prod.mul_trunc(factor, n);
    }
    prod == f.truncate(n)
}
