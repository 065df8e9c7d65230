//! Finite-dimensional truncations of the local rings in play.
//!
//! Two constructors:
//!
//! - [`TruncatedRing::uv_hypersurface`]: the fourfold ring
//!   `K[[u,v,x,y]]/(uv - f(x,y))` modulo m^{N+1}. Normal forms are the
//!   monomials u^a v^b x^c y^d with min(a,b) = 0 and total degree <= N; the
//!   single rewrite uv -> f(x,y) is confluent because f involves only x, y.
//! - [`TruncatedRing::plane_quotient`]: `K[[x,y]]/(f)` modulo m^{N+1}, with the
//!   ideal subspace eliminated by exact linear algebra and normal forms read
//!   off the complement basis.
//!
//! Ring elements are sparse coordinate vectors over the normal-form basis;
//! all arithmetic is exact over the configured coefficient field.

use std::collections::BTreeMap;

use crate::field::{Field, K};
use crate::linalg::SparseVec;
use crate::poly::{monomials_up_to, Mono, Poly, Vars};

#[derive(Debug)]
enum Normalizer {
    /// uv -> f rewrite; `f_powers[k]` is f^k truncated at total degree N.
    UvRewrite { f_powers: Vec<Poly> },
    /// monomial -> normal form coordinates for every monomial of degree <= N.
    Table { reduce: BTreeMap<Mono, SparseVec> },
}

/// A truncation R/m^{N+1} with a distinguished monomial normal-form basis.
#[derive(Debug)]
pub struct TruncatedRing {
    pub vars: Vars,
    pub field: Field,
    pub order: u32,
    pub basis: Vec<Mono>,
    pub index: BTreeMap<Mono, u32>,
    normalizer: Normalizer,
}

impl TruncatedRing {
    /// The fourfold hypersurface truncation. `f` is the plane polynomial
    /// f(x,y) (positions 2 and 3 of the uvxy ambient ring).
    pub fn uv_hypersurface(f_xy: &Poly, order: u32, field: &Field) -> TruncatedRing {
        let vars = Vars::uvxy();
        // Lift f from (x, y) coordinates into uvxy positions 2, 3.
        let f = lift_xy_to_uvxy(f_xy, &vars, field);
        let mut basis: Vec<Mono> = monomials_up_to(4, order)
            .into_iter()
            .filter(|m| m.0[0] == 0 || m.0[1] == 0)
            .collect();
        basis.sort_by(|a, b| a.grlex(b));
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (*m, i as u32))
            .collect();
        // Precompute truncated powers of f up to the largest useful exponent.
        let ford = f.ord().unwrap_or(1).max(1);
        let max_pow = order / ford + 1;
        let mut f_powers = Vec::with_capacity(max_pow as usize + 1);
        f_powers.push(Poly::one(vars.clone(), field.clone()));
        for k in 1..=max_pow {
            let prev = f_powers[(k - 1) as usize].clone();
            f_powers.push(prev.mul_trunc(&f, order));
        }
        TruncatedRing {
            vars,
            field: field.clone(),
            order,
            basis,
            index,
            normalizer: Normalizer::UvRewrite { f_powers },
        }
    }

    /// The plane quotient truncation `K[x,y]/((f) + m^{N+1})`.
    pub fn plane_quotient(f: &Poly, order: u32, field: &Field) -> TruncatedRing {
        let vars = Vars::xy();
        let all: Vec<Mono> = monomials_up_to(2, order);
        let pos: BTreeMap<Mono, usize> = all.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        // Ideal subspace: truncations of g*f over monomials g. Echelonize with
        // the pivot on the grlex-largest monomial so normal forms live on the
        // grlex-smallest ones.
        let ford = f.ord().unwrap_or(0);
        let mut echelon: BTreeMap<usize, Vec<K>> = BTreeMap::new(); // pivot (desc index) -> dense row
        let gens = monomials_up_to(2, order.saturating_sub(ford));
        for g in gens {
            let prod = Poly::monomial(vars.clone(), field.clone(), g, field.one())
                .mul(f)
                .truncate(order);
            let mut dense = vec![field.zero(); all.len()];
            for (m, c) in &prod.terms {
                dense[pos[m]] = c.clone();
            }
            insert_desc(&mut echelon, dense, &field.clone());
        }
        let pivot_set: std::collections::BTreeSet<usize> = echelon.keys().cloned().collect();
        let mut basis: Vec<Mono> = all
            .iter()
            .enumerate()
            .filter(|(i, _)| !pivot_set.contains(i))
            .map(|(_, m)| *m)
            .collect();
        basis.sort_by(|a, b| a.grlex(b));
        let index: BTreeMap<Mono, u32> = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (*m, i as u32))
            .collect();
        // Reduction table for every ambient monomial.
        let mut reduce = BTreeMap::new();
        for (i, m) in all.iter().enumerate() {
            let mut dense = vec![field.zero(); all.len()];
            dense[i] = field.one();
            reduce_desc(&echelon, &mut dense, &field.clone());
            let mut sv: SparseVec = Vec::new();
            for (j, c) in dense.iter().enumerate() {
                if !field.is_zero(c) {
                    sv.push((index[&all[j]], c.clone()));
                }
            }
            sv.sort_by_key(|(i, _)| *i);
            reduce.insert(*m, sv);
        }
        TruncatedRing {
            vars,
            field: field.clone(),
            order,
            basis,
            index,
            normalizer: Normalizer::Table { reduce },
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn zero(&self) -> SparseVec {
        Vec::new()
    }

    pub fn one(&self) -> SparseVec {
        vec![(self.index[&Mono::one()], self.field.one())]
    }

    /// The class of a single ambient monomial.
    pub fn monomial_class(&self, m: Mono) -> SparseVec {
        if m.total_degree() > self.order {
            return Vec::new();
        }
        match &self.normalizer {
            Normalizer::UvRewrite { f_powers } => {
                let k = m.0[0].min(m.0[1]);
                if k == 0 {
                    return vec![(self.index[&m], self.field.one())];
                }
                let mut rest = m;
                rest.0[0] -= k;
                rest.0[1] -= k;
                let fp = &f_powers[k as usize];
                let mut out: SparseVec = Vec::new();
                for (fm, c) in &fp.terms {
                    let whole = rest.mul(fm);
                    if whole.total_degree() > self.order {
                        continue;
                    }
                    debug_assert!(whole.0[0] == 0 || whole.0[1] == 0);
                    out.push((self.index[&whole], c.clone()));
                }
                out.sort_by_key(|(i, _)| *i);
                out
            }
            Normalizer::Table { reduce } => reduce.get(&m).cloned().unwrap_or_default(),
        }
    }

    /// Reduce an arbitrary ambient polynomial to its class.
    pub fn class_of_poly(&self, p: &Poly) -> SparseVec {
        let mut acc: BTreeMap<u32, K> = BTreeMap::new();
        for (m, c) in &p.terms {
            if m.total_degree() > self.order {
                continue;
            }
            for (i, b) in self.monomial_class(*m) {
                let add = self.field.mul(&b, c);
                match acc.get_mut(&i) {
                    Some(cur) => self.field.add_assign(cur, &add),
                    None => {
                        acc.insert(i, add);
                    }
                }
            }
        }
        acc.into_iter()
            .filter(|(_, c)| !self.field.is_zero(c))
            .collect()
    }

    /// Multiply two classes.
    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<u32, K> = BTreeMap::new();
        for (ia, ca) in a {
            let ma = self.basis[*ia as usize];
            for (ib, cb) in b {
                let mb = self.basis[*ib as usize];
                let prod = ma.mul(&mb);
                if prod.total_degree() > self.order {
                    continue;
                }
                let coeff = self.field.mul(ca, cb);
                for (i, c) in self.monomial_class(prod) {
                    let add = self.field.mul(&c, &coeff);
                    match acc.get_mut(&i) {
                        Some(cur) => self.field.add_assign(cur, &add),
                        None => {
                            acc.insert(i, add);
                        }
                    }
                }
            }
        }
        acc.into_iter()
            .filter(|(_, c)| !self.field.is_zero(c))
            .collect()
    }

    pub fn add(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        crate::linalg::sv_add(&self.field, a, b)
    }

    /// Truncate a class from a one-higher-order ring down to this ring.
    /// Well-defined because both rings share the monomial normal forms up to
    /// this ring's order.
    pub fn project_from(&self, higher: &TruncatedRing, a: &SparseVec) -> SparseVec {
        let mut out: SparseVec = Vec::new();
        for (i, c) in a {
            let m = higher.basis[*i as usize];
            if m.total_degree() <= self.order {
                if let Some(j) = self.index.get(&m) {
                    out.push((*j, c.clone()));
                } else {
                    // Plane-quotient normal forms can differ near the top
                    // degree; re-reduce through the table.
                    for (j, b) in self.monomial_class(m) {
                        out.push((j, self.field.mul(&b, c)));
                    }
                }
            }
        }
        out.sort_by_key(|(i, _)| *i);
        // merge duplicates
        let mut merged: SparseVec = Vec::with_capacity(out.len());
        for (i, c) in out {
            match merged.last_mut() {
                Some((j, cur)) if *j == i => self.field.add_assign(cur, &c),
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|(_, c)| !self.field.is_zero(c));
        merged
    }

    /// Classes of the ambient variables (the maximal-ideal generators).
    pub fn variable_classes(&self) -> Vec<SparseVec> {
        (0..self.vars.len())
            .map(|i| self.monomial_class(Mono::var(i)))
            .collect()
    }

    pub fn fmt_class(&self, a: &SparseVec) -> String {
        let mut p = Poly::zero(self.vars.clone(), self.field.clone());
        for (i, c) in a {
            p.terms.insert(self.basis[*i as usize], c.clone());
        }
        p.to_string_grlex()
    }
}

fn lift_xy_to_uvxy(f_xy: &Poly, uvxy: &Vars, field: &Field) -> Poly {
    let mut out = Poly::zero(uvxy.clone(), field.clone());
    for (m, c) in &f_xy.terms {
        let lifted = Mono([0, 0, m.0[0], m.0[1]]);
        out.terms.insert(lifted, c.clone());
    }
    out
}

/// Echelon helpers over dense rows with descending pivot choice (largest
/// index first); used only at construction time for the plane quotient.
fn insert_desc(echelon: &mut BTreeMap<usize, Vec<K>>, mut row: Vec<K>, field: &Field) {
    loop {
        let Some(p) = row.iter().rposition(|c| !field.is_zero(c)) else {
            return;
        };
        if let Some(existing) = echelon.get(&p) {
            let factor = row[p].clone();
            for (r, e) in row.iter_mut().zip(existing) {
                let t = field.mul(e, &factor);
                *r = field.sub(r, &t);
            }
        } else {
            let inv = field.inv(&row[p]).expect("nonzero pivot");
            for c in row.iter_mut() {
                *c = field.mul(c, &inv);
            }
            echelon.insert(p, row);
            return;
        }
    }
}

fn reduce_desc(echelon: &BTreeMap<usize, Vec<K>>, row: &mut Vec<K>, field: &Field) {
    // Iterate pivots from the largest index down so each elimination is final.
    for (p, erow) in echelon.iter().rev() {
        if field.is_zero(&row[*p]) {
            continue;
        }
        let factor = row[*p].clone();
        for (r, e) in row.iter_mut().zip(erow) {
            let t = field.mul(e, &factor);
            *r = field.sub(r, &t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn q() -> Field {
        Field::rationals()
    }

    fn xy(p: &str) -> Poly {
        parse_poly(p, &Vars::xy(), &q()).unwrap()
    }

    fn count_uv_basis(n: u32) -> usize {
        monomials_up_to(4, n)
            .into_iter()
            .filter(|m| m.0[0] == 0 || m.0[1] == 0)
            .count()
    }

    #[test]
    fn uv_basis_is_the_min_zero_monomials() {
        let t = TruncatedRing::uv_hypersurface(&xy("x*y"), 4, &q());
        assert_eq!(t.dim(), count_uv_basis(4));
        assert!(t.basis.iter().all(|m| m.0[0] == 0 || m.0[1] == 0));
        assert!(t.basis.iter().all(|m| m.total_degree() <= 4));
    }

    #[test]
    fn uv_rewrites_to_f() {
        let t = TruncatedRing::uv_hypersurface(&xy("x*y"), 5, &q());
        let u = t.monomial_class(Mono::var(0));
        let v = t.monomial_class(Mono::var(1));
        let uv = t.mul(&u, &v);
        let expected = t.monomial_class(Mono([0, 0, 1, 1]));
        assert_eq!(uv, expected);
        // u^2 v -> u*x*y
        let u2 = t.mul(&u, &u);
        let u2v = t.mul(&u2, &v);
        assert_eq!(u2v, t.monomial_class(Mono([1, 0, 1, 1])));
    }

    #[test]
    fn uv_rewrite_with_order_one_f() {
        // uv = x: u*v rewrites down to a degree-1 monomial.
        let t = TruncatedRing::uv_hypersurface(&xy("x"), 3, &q());
        let u = t.monomial_class(Mono::var(0));
        let v = t.monomial_class(Mono::var(1));
        assert_eq!(t.mul(&u, &v), t.monomial_class(Mono([0, 0, 1, 0])));
    }

    #[test]
    fn multiplication_is_commutative_and_associative_on_basis_samples() {
        let t = TruncatedRing::uv_hypersurface(&xy("x*y*(x+y)"), 3, &q());
        let n = t.dim();
        for i in (0..n).step_by(3) {
            for j in (0..n).step_by(4) {
                let a = vec![(i as u32, q().one())];
                let b = vec![(j as u32, q().one())];
                assert_eq!(t.mul(&a, &b), t.mul(&b, &a));
                for l in (0..n).step_by(7) {
                    let c = vec![(l as u32, q().one())];
                    let ab_c = t.mul(&t.mul(&a, &b), &c);
                    let a_bc = t.mul(&a, &t.mul(&b, &c));
                    assert_eq!(ab_c, a_bc);
                }
            }
        }
    }

    #[test]
    fn plane_quotient_node() {
        // K[x,y]/(xy, m^{N+1}) has basis 1, x..x^N, y..y^N.
        let t = TruncatedRing::plane_quotient(&xy("x*y"), 4, &q());
        assert_eq!(t.dim(), 9);
        let x = t.monomial_class(Mono::var(0));
        let y = t.monomial_class(Mono::var(1));
        assert!(t.mul(&x, &y).is_empty());
        let x2 = t.mul(&x, &x);
        assert_eq!(x2, t.monomial_class(Mono([2, 0, 0, 0])));
    }

    #[test]
    fn plane_quotient_general_f() {
        // K[x,y]/(x^2 - y^3): x^2 reduces to y^3.
        let t = TruncatedRing::plane_quotient(&xy("x^2 - y^3"), 5, &q());
        let x = t.monomial_class(Mono::var(0));
        let x2 = t.mul(&x, &x);
        assert_eq!(x2, t.monomial_class(Mono([0, 3, 0, 0])));
    }

    #[test]
    fn projection_commutes_with_multiplication() {
        let f = xy("x*y*y");
        let t5 = TruncatedRing::uv_hypersurface(&f, 5, &q());
        let t4 = TruncatedRing::uv_hypersurface(&f, 4, &q());
        for (i, m) in t5.basis.iter().enumerate().step_by(5) {
            for (j, m2) in t5.basis.iter().enumerate().step_by(7) {
                let a = vec![(i as u32, q().one())];
                let b = vec![(j as u32, q().one())];
                let down = t4.project_from(&t5, &t5.mul(&a, &b));
                let pa = t4.class_of_poly(&Poly::monomial(t5.vars.clone(), q(), *m, q().one()));
                let pb = t4.class_of_poly(&Poly::monomial(t5.vars.clone(), q(), *m2, q().one()));
                assert_eq!(down, t4.mul(&pa, &pb));
            }
        }
    }
}
