//! Sparse multivariate polynomials over an exact field, together with the
//! truncated power-series operations used throughout: order (minimal total
//! degree), truncation, series inverse and square root, and the associate
//! test in two variables.
//!
//! A polynomial carries its ambient ordered variable list. The two ambient
//! rings that matter computationally are `x, y` and `u, v, x, y`; chart
//! coordinates only ever appear in printed equations.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::field::{Field, Rat, K};

pub const MAX_VARS: usize = 4;

/// Exponent vector, fixed width; unused slots stay zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Mono(pub [u16; MAX_VARS]);

impl Mono {
    pub fn one() -> Mono {
        Mono([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Mono {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Mono(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&i| self.0[i] as u32).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut e = [0; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.0[i] + other.0[i];
        }
        Mono(e)
    }

    /// Graded order with earlier variables smaller (u < v < x < y): compare
    /// total degree, then exponents of the later variables first. Used for
    /// printing and for deterministic basis enumeration.
    pub fn grlex(&self, other: &Mono) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let a: [u16; MAX_VARS] = {
                    let mut t = self.0;
                    t.reverse();
                    t
                };
                let b: [u16; MAX_VARS] = {
                    let mut t = other.0;
                    t.reverse();
                    t
                };
                a.cmp(&b)
            })
    }
}

/// Ordered ambient variable list. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Vars(Arc<Vec<String>>);

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Vars {}

impl Vars {
    pub fn new(names: &[&str]) -> Vars {
        assert!(names.len() <= MAX_VARS);
        Vars(Arc::new(names.iter().map(|s| s.to_string()).collect()))
    }

    /// The plane ring variables x, y.
    pub fn xy() -> Vars {
        Vars::new(&["x", "y"])
    }

    /// The ambient fourfold variables u, v, x, y.
    pub fn uvxy() -> Vars {
        Vars::new(&["u", "v", "x", "y"])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(","))
    }
}

/// A distinguished maximal-ideal generator set: a nonempty subset of the
/// ambient variables, e.g. (x, y) inside the plane ring or (u, v, x, y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MIdeal {
    pub vars: Vars,
    pub positions: Vec<usize>,
}

impl MIdeal {
    pub fn new(vars: &Vars, names: &[&str]) -> Result<MIdeal, Error> {
        if names.is_empty() {
            return Err(Error::InvalidSubset(
                "maximal ideal needs generators".into(),
            ));
        }
        let mut positions = Vec::with_capacity(names.len());
        for n in names {
            positions.push(
                vars.index_of(n)
                    .ok_or_else(|| Error::UnknownVariable(n.to_string()))?,
            );
        }
        positions.sort_unstable();
        positions.dedup();
        Ok(MIdeal {
            vars: vars.clone(),
            positions,
        })
    }

    /// All ambient variables.
    pub fn full(vars: &Vars) -> MIdeal {
        MIdeal {
            vars: vars.clone(),
            positions: (0..vars.len()).collect(),
        }
    }
}

/// Minimal total degree of f counted along the ideal's variables; None is
/// infinity (the zero polynomial).
pub fn ord_along(f: &Poly, m: &MIdeal) -> Option<u32> {
    debug_assert_eq!(f.vars, m.vars);
    f.ord_in(&m.positions)
}

/// Sparse polynomial: exponent vector -> nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub vars: Vars,
    pub field: Field,
    pub terms: BTreeMap<Mono, K>,
}

impl Poly {
    pub fn zero(vars: Vars, field: Field) -> Poly {
        Poly {
            vars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vars, field: Field, c: K) -> Poly {
        let mut p = Poly::zero(vars, field);
        p.insert(Mono::one(), c);
        p
    }

    pub fn one(vars: Vars, field: Field) -> Poly {
        let c = field.one();
        Poly::constant(vars, field, c)
    }

    pub fn var(vars: Vars, field: Field, i: usize) -> Poly {
        let c = field.one();
        let mut p = Poly::zero(vars, field);
        p.insert(Mono::var(i), c);
        p
    }

    pub fn var_named(vars: &Vars, field: &Field, name: &str) -> Result<Poly, Error> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Poly::var(vars.clone(), field.clone(), i))
    }

    pub fn monomial(vars: Vars, field: Field, m: Mono, c: K) -> Poly {
        let mut p = Poly::zero(vars, field);
        p.insert(m, c);
        p
    }

    fn insert(&mut self, m: Mono, c: K) {
        if !self.field.is_zero(&c) {
            self.terms.insert(m, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_term(&self) -> K {
        self.terms
            .get(&Mono::one())
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    fn same_context(&self, other: &Poly) -> bool {
        self.vars == other.vars && self.field == other.field
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert!(self.same_context(other));
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let cur = out
                .terms
                .get(m)
                .map(|x| self.field.add(x, c))
                .unwrap_or_else(|| c.clone());
            if self.field.is_zero(&cur) {
                out.terms.remove(m);
            } else {
                out.terms.insert(*m, cur);
            }
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(c);
        }
        out
    }

    pub fn scale(&self, c: &K) -> Poly {
        if self.field.is_zero(c) {
            return Poly::zero(self.vars.clone(), self.field.clone());
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.field.mul(v, c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert!(self.same_context(other));
        let mut acc: BTreeMap<Mono, K> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = self.field.mul(c1, c2);
                match acc.get_mut(&m) {
                    Some(cur) => self.field.add_assign(cur, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !self.field.is_zero(c));
        Poly {
            vars: self.vars.clone(),
            field: self.field.clone(),
            terms: acc,
        }
    }

    /// Multiply, truncating above total degree `n`.
    pub fn mul_trunc(&self, other: &Poly, n: u32) -> Poly {
        self.mul(other).truncate(n)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.vars.clone(), self.field.clone());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn pow_trunc(&self, e: u32, n: u32) -> Poly {
        let mut out = Poly::one(self.vars.clone(), self.field.clone());
        for _ in 0..e {
            out = out.mul_trunc(self, n);
        }
        out
    }

    /// Drop all terms of total degree > n.
    pub fn truncate(&self, n: u32) -> Poly {
        let mut out = self.clone();
        out.terms.retain(|m, _| m.total_degree() <= n);
        out
    }

    /// Minimal total degree of a term; None encodes infinity (the zero polynomial).
    pub fn ord(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).min()
    }

    /// Minimal degree counting only the listed variable positions.
    pub fn ord_in(&self, var_positions: &[usize]) -> Option<u32> {
        self.terms.keys().map(|m| m.degree_in(var_positions)).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Is the polynomial contained in m^2 = (square of the maximal ideal)?
    /// Requires positive order; errors on units.
    pub fn in_m_squared(&self) -> Result<bool, Error> {
        match self.ord() {
            None => Ok(true),
            Some(0) => Err(Error::UnitInput),
            Some(o) => Ok(o >= 2),
        }
    }

    /// Homogeneous component of total degree d.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        let mut out = Poly::zero(self.vars.clone(), self.field.clone());
        for (m, c) in &self.terms {
            if m.total_degree() == d {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }

    /// Substitute variable `i` by the given polynomial (same ambient ring).
    pub fn substitute(&self, i: usize, by: &Poly) -> Poly {
        let mut out = Poly::zero(self.vars.clone(), self.field.clone());
        for (m, c) in &self.terms {
            let mut rest = *m;
            let e = rest.0[i];
            rest.0[i] = 0;
            let mut term = Poly::monomial(self.vars.clone(), self.field.clone(), rest, c.clone());
            if e > 0 {
                term = term.mul(&by.pow(e as u32));
            }
            out = out.add(&term);
        }
        out
    }

    /// Apply the shear x -> x + c*y (positions 0 and 1 of a two-variable ring).
    pub fn shear_x_by_y(&self, c: &K) -> Poly {
        let x = Poly::var(self.vars.clone(), self.field.clone(), 0);
        let y = Poly::var(self.vars.clone(), self.field.clone(), 1);
        let repl = x.add(&y.scale(c));
        self.substitute(0, &repl)
    }

    /// Restrict to x = 0 (position 0), leaving a polynomial in the remaining variables.
    pub fn at_x_zero(&self) -> Poly {
        let mut out = Poly::zero(self.vars.clone(), self.field.clone());
        for (m, c) in &self.terms {
            if m.0[0] == 0 {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }

    /// Coefficient of y^k (position 1) as a polynomial in the other variables.
    pub fn coeff_of_y_power(&self, k: u16) -> Poly {
        let mut out = Poly::zero(self.vars.clone(), self.field.clone());
        for (m, c) in &self.terms {
            if m.0[1] == k {
                let mut rest = *m;
                rest.0[1] = 0;
                out.insert(rest, c.clone());
            }
        }
        out
    }

    /// Series inverse g with f*g = 1 modulo total degree > n. Errors unless
    /// the constant term is nonzero.
    pub fn series_inverse(&self, n: u32) -> Result<Poly, Error> {
        let c0 = self.constant_term();
        if self.field.is_zero(&c0) {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let c0_inv = self.inv_k(&c0)?;
        let mut g = Poly::constant(self.vars.clone(), self.field.clone(), c0_inv.clone());
        // Level-by-level: g_k = -c0^{-1} * sum_{j<k} g_j * f_{k-j}.
        for k in 1..=n {
            let mut acc = Poly::zero(self.vars.clone(), self.field.clone());
            for j in 0..k {
                let gj = g.homogeneous_part(j);
                if gj.is_zero() {
                    continue;
                }
                let fk = self.homogeneous_part(k - j);
                if fk.is_zero() {
                    continue;
                }
                acc = acc.add(&gj.mul(&fk).homogeneous_part(k));
            }
            let level = acc.scale(&self.field.neg(&c0_inv));
            g = g.add(&level);
        }
        Ok(g)
    }

    fn inv_k(&self, c: &K) -> Result<K, Error> {
        self.field.inv(c)
    }

    /// Series square root g with g^2 = f modulo total degree > n. Errors when
    /// the constant term is not a square in the configured field.
    pub fn series_sqrt(&self, n: u32) -> Result<Poly, Error> {
        let c0 = self.constant_term();
        if self.field.is_zero(&c0) {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let s0 = self
            .field
            .sqrt(&c0)?
            .ok_or_else(|| Error::NotASquare(self.field.fmt_elem(&c0)))?;
        let two_s0_inv = self.field.inv(&self.field.add(&s0, &s0))?;
        let mut g = Poly::constant(self.vars.clone(), self.field.clone(), s0);
        // 2*s0*g_k = f_k - (sum_{0<j<k} g_j g_{k-j}).
        for k in 1..=n {
            let mut acc = self.homogeneous_part(k);
            for j in 1..k {
                let gj = g.homogeneous_part(j);
                let gk = g.homogeneous_part(k - j);
                if gj.is_zero() || gk.is_zero() {
                    continue;
                }
                acc = acc.sub(&gj.mul(&gk).homogeneous_part(k));
            }
            g = g.add(&acc.scale(&two_s0_inv));
        }
        Ok(g)
    }

    /// Decide whether f and g generate the same ideal of the formal power
    /// series ring (f = unit * g), by matching orders, then solving the
    /// truncated division f = h*g level by level up to total degree `n` and
    /// requiring h to be a unit. `n` defaults (at call sites) to
    /// deg f + deg g + 2.
    pub fn is_associate(&self, other: &Poly, n: u32) -> Result<bool, Error> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroInput);
        }
        let d1 = self.ord().unwrap();
        let d2 = other.ord().unwrap();
        if d1 != d2 {
            return Ok(false);
        }
        // Solve (sum h_j)(sum g_{d+i}) = f levelwise: unknown h of order 0.
        let gd = other.homogeneous_part(d2);
        let mut h = Poly::zero(self.vars.clone(), self.field.clone());
        for k in 0..=n.saturating_sub(d1) {
            // f_{d+k} - sum_{j<k} h_j * g_{d+k-j} must be divisible by g_d.
            let mut target = self.homogeneous_part(d1 + k);
            for j in 0..k {
                let hj = h.homogeneous_part(j);
                if hj.is_zero() {
                    continue;
                }
                let gpart = other.homogeneous_part(d1 + k - j);
                if gpart.is_zero() {
                    continue;
                }
                target = target.sub(&hj.mul(&gpart).homogeneous_part(d1 + k));
            }
            match divide_homogeneous(&target, &gd, k) {
                Some(hk) => h = h.add(&hk),
                None => return Ok(false),
            }
        }
        Ok(!self.field.is_zero(&h.constant_term()))
    }

    /// Default associate-test order: deg f + deg g + 2.
    pub fn is_associate_default(&self, other: &Poly) -> Result<bool, Error> {
        let n = self.total_degree().unwrap_or(0) + other.total_degree().unwrap_or(0) + 2;
        self.is_associate(other, n)
    }

    pub fn to_string_grlex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut monos: Vec<&Mono> = self.terms.keys().collect();
        monos.sort_by(|a, b| a.grlex(b));
        let mut out = String::new();
        for (idx, m) in monos.iter().enumerate() {
            let c = &self.terms[m];
            let cs = self.field.fmt_elem(c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, cs),
            };
            let needs_parens = mag.contains(['+', '-']) || (neg && mag.contains(['+', '-']));
            let mut body = String::new();
            let mut mono_str = String::new();
            for (i, name) in self.vars.names().iter().enumerate() {
                let e = m.0[i];
                if e == 0 {
                    continue;
                }
                if !mono_str.is_empty() {
                    mono_str.push('*');
                }
                if e == 1 {
                    mono_str.push_str(name);
                } else {
                    mono_str.push_str(&format!("{name}^{e}"));
                }
            }
            let coeff_one = mag == "1" && !needs_parens;
            if mono_str.is_empty() {
                body.push_str(&mag);
            } else if coeff_one {
                body.push_str(&mono_str);
            } else if needs_parens {
                body.push_str(&format!("({mag})*{mono_str}"));
            } else {
                body.push_str(&format!("{mag}*{mono_str}"));
            }
            if idx == 0 {
                if neg {
                    out.push('-');
                }
                out.push_str(&body);
            } else if neg {
                out.push_str(" - ");
                out.push_str(&body);
            } else {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_grlex())
    }
}

/// Exact division of a homogeneous form `target` (degree d + k) by a nonzero
/// homogeneous form `gd` (degree d), producing the homogeneous quotient of
/// degree `k` if the division is exact. Works in at most 4 variables by
/// solving the small linear system of coefficient constraints.
fn divide_homogeneous(target: &Poly, gd: &Poly, k: u32) -> Option<Poly> {
    let field = &target.field;
    if target.is_zero() {
        return Some(Poly::zero(target.vars.clone(), field.clone()));
    }
    let nv = target.vars.len();
    // Enumerate candidate quotient monomials of total degree k.
    let mut qmonos: Vec<Mono> = Vec::new();
    enumerate_degree(nv, k as u16, &mut [0u16; MAX_VARS], 0, &mut qmonos);
    // Build the linear system: sum_q coeff_q * (q * gd) = target.
    // Unknown coefficients live in the field; solve by elimination over
    // the monomials of degree d + k.
    let mut rows: BTreeMap<Mono, Vec<K>> = BTreeMap::new();
    for (qi, q) in qmonos.iter().enumerate() {
        for (gm, gc) in &gd.terms {
            let m = q.mul(gm);
            let row = rows
                .entry(m)
                .or_insert_with(|| vec![field.zero(); qmonos.len()]);
            field.add_assign(&mut row[qi], gc);
        }
    }
    let mut mat: Vec<Vec<K>> = Vec::new();
    let mut rhs: Vec<K> = Vec::new();
    let mut seen: std::collections::BTreeSet<Mono> = rows.keys().cloned().collect();
    for (m, _) in &target.terms {
        seen.insert(*m);
    }
    for m in seen {
        let row = rows
            .get(&m)
            .cloned()
            .unwrap_or_else(|| vec![field.zero(); qmonos.len()]);
        mat.push(row);
        rhs.push(
            target
                .terms
                .get(&m)
                .cloned()
                .unwrap_or_else(|| field.zero()),
        );
    }
    // Gaussian elimination with partial (first nonzero) pivoting.
    let ncols = qmonos.len();
    let nrows = mat.len();
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| !field.is_zero(&mat[i][c])) else {
            continue;
        };
        mat.swap(r, pr);
        rhs.swap(r, pr);
        let inv = field.inv(&mat[r][c]).ok()?;
        for v in mat[r].iter_mut() {
            *v = field.mul(v, &inv);
        }
        rhs[r] = field.mul(&rhs[r], &inv);
        for i in 0..nrows {
            if i != r && !field.is_zero(&mat[i][c]) {
                let f = mat[i][c].clone();
                for cc in 0..ncols {
                    let t = field.mul(&mat[r][cc], &f);
                    mat[i][cc] = field.sub(&mat[i][cc], &t);
                }
                let t = field.mul(&rhs[r], &f);
                rhs[i] = field.sub(&rhs[i], &t);
            }
        }
        pivot_of_col[c] = r;
        r += 1;
        if r == nrows {
            break;
        }
    }
    // Inconsistent rows mean the division is not exact.
    for i in r..nrows {
        if !field.is_zero(&rhs[i]) {
            return None;
        }
    }
    let mut qpoly = Poly::zero(target.vars.clone(), field.clone());
    for (c, m) in qmonos.iter().enumerate() {
        if pivot_of_col[c] != usize::MAX {
            let val = rhs[pivot_of_col[c]].clone();
            qpoly.insert(*m, val);
        }
    }
    // Verify (free variables default to zero; verification catches underdetermined misses).
    let check = qpoly.mul(gd);
    if check == *target {
        Some(qpoly)
    } else {
        None
    }
}

pub fn enumerate_degree(
    nv: usize,
    remaining: u16,
    cur: &mut [u16; MAX_VARS],
    pos: usize,
    out: &mut Vec<Mono>,
) {
    if pos == nv - 1 {
        cur[pos] = remaining;
        out.push(Mono(*cur));
        cur[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e;
        enumerate_degree(nv, remaining - e, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

/// All monomials in `nv` variables of total degree <= n, graded order.
pub fn monomials_up_to(nv: usize, n: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for d in 0..=n {
        let mut level = Vec::new();
        enumerate_degree(nv, d as u16, &mut [0u16; MAX_VARS], 0, &mut level);
        level.sort_by(|a, b| a.grlex(b));
        out.extend(level);
    }
    out
}

/// Convenience: rational-coefficient polynomial from (numerator, exponents) data.
pub fn poly_from_terms(vars: &Vars, field: &Field, terms: &[(i64, [u16; MAX_VARS])]) -> Poly {
    let mut p = Poly::zero(vars.clone(), field.clone());
    for (c, e) in terms {
        let k = field.from_rat(Rat::from(num_bigint::BigInt::from(*c)));
        let cur = p
            .terms
            .get(&Mono(*e))
            .map(|x| field.add(x, &k))
            .unwrap_or(k);
        if field.is_zero(&cur) {
            p.terms.remove(&Mono(*e));
        } else {
            p.terms.insert(Mono(*e), cur);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;

    fn q() -> Field {
        Field::rationals()
    }

    fn xy(p: &str) -> Poly {
        crate::parse::parse_poly(p, &Vars::xy(), &q()).unwrap()
    }

    #[test]
    fn ord_and_m_squared() {
        assert_eq!(xy("x^2 + y^3").ord(), Some(2));
        assert_eq!(xy("0").ord(), None);
        assert_eq!(xy("x + y^5").ord(), Some(1));
        assert!(xy("x^2+y^3").in_m_squared().unwrap());
        assert!(!xy("x").in_m_squared().unwrap());
        assert!(!xy("x + y^5").in_m_squared().unwrap());
        assert!(matches!(xy("1+x").in_m_squared(), Err(Error::UnitInput)));
    }

    #[test]
    fn series_inverse_examples() {
        // (1+x)^{-1} = 1 - x + x^2 mod m^3
        let f = xy("1+x");
        let g = f.series_inverse(2).unwrap();
        assert_eq!(g, xy("1 - x + x^2"));
        // constant 2 inverts to 1/2
        let two = xy("2");
        assert_eq!(
            two.series_inverse(5).unwrap().constant_term(),
            q().from_rat(crate::field::rat(1, 2))
        );
        // (1+x+y)^{-1} = 1 - x - y mod m^2
        assert_eq!(xy("1+x+y").series_inverse(1).unwrap(), xy("1-x-y"));
        // non-unit rejected
        assert!(xy("x").series_inverse(3).is_err());
    }

    #[test]
    fn series_sqrt_examples() {
        // sqrt(1+x) = 1 + x/2 - x^2/8 mod m^3
        let s = xy("1+x").series_sqrt(2).unwrap();
        let expected = {
            let mut p = Poly::zero(Vars::xy(), q());
            p.terms.insert(Mono::one(), q().one());
            p.terms
                .insert(Mono::var(0), q().from_rat(crate::field::rat(1, 2)));
            p.terms
                .insert(Mono([2, 0, 0, 0]), q().from_rat(crate::field::rat(-1, 8)));
            p
        };
        assert_eq!(s, expected);
        // sqrt(1) = 1 at any order
        assert_eq!(xy("1").series_sqrt(7).unwrap(), xy("1"));
        // sqrt(4+4x) = 2 + x mod m^2
        assert_eq!(xy("4+4*x").series_sqrt(1).unwrap(), xy("2+x"));
        // -1 has no rational square root
        assert!(matches!(
            xy("-1+x").series_sqrt(3),
            Err(Error::NotASquare(_))
        ));
    }

    #[test]
    fn sqrt_squares_back() {
        for (f, n) in [("1+x", 6u32), ("4+4*x", 5), ("1+x+y^2", 6), ("9+x*y", 4)] {
            let p = xy(f);
            let s = p.series_sqrt(n).unwrap();
            assert_eq!(s.mul(&s).truncate(n), p.truncate(n), "sqrt failed for {f}");
        }
    }

    #[test]
    fn associates() {
        assert!(xy("x").is_associate_default(&xy("2*x")).unwrap());
        assert!(xy("x").is_associate_default(&xy("x + x^2")).unwrap());
        assert!(!xy("x").is_associate_default(&xy("y")).unwrap());
        assert!(!xy("x").is_associate_default(&xy("x^2")).unwrap());
        assert!(xy("x*y + x^2*y").is_associate_default(&xy("x*y")).unwrap());
        assert!(!xy("x^2+y^2").is_associate_default(&xy("x^2-y^2")).unwrap());
        assert!(matches!(
            xy("0").is_associate_default(&xy("x")),
            Err(Error::ZeroInput)
        ));
    }

    #[test]
    fn ord_is_additive() {
        let samples = ["x", "y^2", "x+y^5", "x^2+x^3+y^2", "3*x*y"];
        for a in samples {
            for b in samples {
                let (pa, pb) = (xy(a), xy(b));
                assert_eq!(
                    pa.mul(&pb).ord(),
                    Some(pa.ord().unwrap() + pb.ord().unwrap())
                );
            }
        }
    }

    #[test]
    fn shear_preserves_order() {
        for f in ["x^2+y^3", "x*y", "x^3 - y^3", "x + y^5"] {
            let p = xy(f);
            for c in 0..4i64 {
                let sheared = p.shear_x_by_y(&q().from_int(c));
                assert_eq!(sheared.ord(), p.ord(), "shear changed ord of {f}");
            }
        }
    }

    #[test]
    fn display_is_grlex_with_uvxy_order() {
        let f = Field::rationals();
        let vars = Vars::uvxy();
        let p = crate::parse::parse_poly("y + u*v + x^2 + u", &vars, &f).unwrap();
        assert_eq!(p.to_string(), "u + y + u*v + x^2");
    }

    #[test]
    fn m_ideal_ord() {
        let vars = Vars::uvxy();
        let f = Field::rationals();
        let m_xy = MIdeal::new(&vars, &["x", "y"]).unwrap();
        let p = crate::parse::parse_poly("u*x^2 + v*y^3 + u^4", &vars, &f).unwrap();
        assert_eq!(ord_along(&p, &m_xy), Some(0)); // u^4 has no x, y part
        let q = crate::parse::parse_poly("u*x^2 + v*y^3", &vars, &f).unwrap();
        assert_eq!(ord_along(&q, &m_xy), Some(2));
        assert_eq!(ord_along(&q, &MIdeal::full(&vars)), Some(3));
        assert!(MIdeal::new(&vars, &["z"]).is_err());
        assert!(MIdeal::new(&vars, &[]).is_err());
    }

    #[test]
    fn homogeneous_division() {
        let gd = xy("x+y");
        let target = xy("x^2 - y^2").homogeneous_part(2);
        let qout = divide_homogeneous(&target, &gd, 1).unwrap();
        assert_eq!(qout, xy("x - y"));
        assert!(divide_homogeneous(&xy("x^2+y^2"), &gd, 1).is_none());
        let _ = rat_int(0);
    }
}
