//! Matrix factorizations of hypersurface equations, factor systems, and the
//! flag ideals (u, f_I) as explicit 2x2 factorizations.
//!
//! Conventions: a factorization is a pair of square matrices (phi, psi) over
//! the ambient regular ring with phi * psi = psi * phi = h * Id, exactly.
//! Modules are cokernels of phi acting on column vectors, psi is the
//! adjugate partner, and the suspension swaps the pair. Free summands are a
//! distinguished rank-one object carried by the pair ((h), (1)) so that the
//! stable-category machinery can treat them uniformly and drop them cleanly.

use crate::error::Error;
use crate::field::Field;
use crate::linalg::SparseVec;
use crate::parse::parse_poly;
use crate::poly::{Mono, Poly, Vars};
use crate::trunc::TruncatedRing;

/// The ambient hypersurface: h inside the power-series ring on `vars`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypersurface {
    pub vars: Vars,
    pub field: Field,
    pub h: Poly,
}

impl Hypersurface {
    /// uv - f(x, y) in the fourfold ambient ring.
    pub fn uv_minus_f(f_xy: &Poly, field: &Field) -> Hypersurface {
        let vars = Vars::uvxy();
        let mut h = Poly::zero(vars.clone(), field.clone());
        h.terms.insert(Mono([1, 1, 0, 0]), field.one());
        for (m, c) in &f_xy.terms {
            let lifted = Mono([0, 0, m.0[0], m.0[1]]);
            let cur = h
                .terms
                .get(&lifted)
                .map(|x| field.sub(x, c))
                .unwrap_or_else(|| field.neg(c));
            if field.is_zero(&cur) {
                h.terms.remove(&lifted);
            } else {
                h.terms.insert(lifted, cur);
            }
        }
        Hypersurface {
            vars,
            field: field.clone(),
            h,
        }
    }

    /// f itself in the plane ring (the two-variable side).
    pub fn plane(f_xy: &Poly, field: &Field) -> Hypersurface {
        Hypersurface {
            vars: Vars::xy(),
            field: field.clone(),
            h: f_xy.clone(),
        }
    }

    pub fn truncation(&self, order: u32) -> TruncatedRing {
        if self.vars == Vars::uvxy() {
            // recover f = uv - h restricted: h = uv - f
            let mut f = Poly::zero(Vars::xy(), self.field.clone());
            for (m, c) in &self.h.terms {
                if m.0[0] == 1 && m.0[1] == 1 && m.0[2] == 0 && m.0[3] == 0 {
                    continue;
                }
                debug_assert!(m.0[0] == 0 && m.0[1] == 0, "h must be uv - f(x,y)");
                f.terms
                    .insert(Mono([m.0[2], m.0[3], 0, 0]), self.field.neg(c));
            }
            TruncatedRing::uv_hypersurface(&f, order, &self.field)
        } else {
            TruncatedRing::plane_quotient(&self.h, order, &self.field)
        }
    }
}

/// A matrix factorization (phi, psi) of `hyp.h`, with the module taken to be
/// coker(phi). `free_rank` marks the distinguished free objects.
#[derive(Clone, Debug)]
pub struct MatrixFactorization {
    pub hyp: Hypersurface,
    pub k: usize,
    pub phi: Vec<Vec<Poly>>,
    pub psi: Vec<Vec<Poly>>,
    pub label: Option<String>,
    pub free_rank: Option<usize>,
}

impl MatrixFactorization {
    pub fn new(
        hyp: Hypersurface,
        phi: Vec<Vec<Poly>>,
        psi: Vec<Vec<Poly>>,
        label: Option<String>,
    ) -> MatrixFactorization {
        let k = phi.len();
        MatrixFactorization {
            hyp,
            k,
            phi,
            psi,
            label,
            free_rank: None,
        }
    }

    /// The rank-one free module R as the pair ((h), (1)). Uniform under all
    /// Hom/Ext machinery: coker(phi) = R, and both higher Ext groups vanish
    /// because psi acts invertibly.
    pub fn free_rank_one(hyp: Hypersurface) -> MatrixFactorization {
        let one = Poly::one(hyp.vars.clone(), hyp.field.clone());
        let h = hyp.h.clone();
        MatrixFactorization {
            k: 1,
            phi: vec![vec![h]],
            psi: vec![vec![one]],
            label: Some("R".into()),
            free_rank: Some(1),
            hyp,
        }
    }

    pub fn is_free(&self) -> bool {
        self.free_rank.is_some()
    }

    /// All entries of phi and psi in the maximal ideal?
    pub fn is_reduced(&self) -> bool {
        self.phi
            .iter()
            .chain(self.psi.iter())
            .flatten()
            .all(|p| p.ord().map(|o| o >= 1).unwrap_or(true))
    }

    /// The suspension: swap phi and psi.
    pub fn shift(&self) -> MatrixFactorization {
        MatrixFactorization {
            hyp: self.hyp.clone(),
            k: self.k,
            phi: self.psi.clone(),
            psi: self.phi.clone(),
            label: self.label.as_ref().map(|l| format!("{l}[1]")),
            free_rank: None,
        }
    }

    /// Block-diagonal direct sum. Errors on hypersurface mismatch.
    pub fn direct_sum(&self, other: &MatrixFactorization) -> Result<MatrixFactorization, Error> {
        if self.hyp != other.hyp {
            return Err(Error::HypersurfaceMismatch);
        }
        let n = self.k + other.k;
        let zero = Poly::zero(self.hyp.vars.clone(), self.hyp.field.clone());
        let mut phi = vec![vec![zero.clone(); n]; n];
        let mut psi = vec![vec![zero; n]; n];
        for i in 0..self.k {
            for j in 0..self.k {
                phi[i][j] = self.phi[i][j].clone();
                psi[i][j] = self.psi[i][j].clone();
            }
        }
        for i in 0..other.k {
            for j in 0..other.k {
                phi[self.k + i][self.k + j] = other.phi[i][j].clone();
                psi[self.k + i][self.k + j] = other.psi[i][j].clone();
            }
        }
        Ok(MatrixFactorization {
            hyp: self.hyp.clone(),
            k: n,
            phi,
            psi,
            label: None,
            free_rank: None,
        })
    }

    /// Entries of phi reduced into a truncated ring, column-major access.
    pub fn phi_classes(&self, ring: &TruncatedRing) -> Vec<Vec<SparseVec>> {
        self.phi
            .iter()
            .map(|row| row.iter().map(|p| ring.class_of_poly(p)).collect())
            .collect()
    }

    pub fn psi_classes(&self, ring: &TruncatedRing) -> Vec<Vec<SparseVec>> {
        self.psi
            .iter()
            .map(|row| row.iter().map(|p| ring.class_of_poly(p)).collect())
            .collect()
    }
}

/// Exact check phi * psi = psi * phi = h * Id.
pub fn verify_mf(mf: &MatrixFactorization) -> bool {
    let h = &mf.hyp.h;
    let zero = Poly::zero(mf.hyp.vars.clone(), mf.hyp.field.clone());
    for (a, b) in [(&mf.phi, &mf.psi), (&mf.psi, &mf.phi)] {
        for i in 0..mf.k {
            for j in 0..mf.k {
                let mut acc = zero.clone();
                for l in 0..mf.k {
                    acc = acc.add(&a[i][l].mul(&b[l][j]));
                }
                let expected = if i == j { h.clone() } else { zero.clone() };
                if acc != expected {
                    return false;
                }
            }
        }
    }
    true
}

impl serde::Serialize for MatrixFactorization {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let text_matrix = |m: &Vec<Vec<Poly>>| -> Vec<Vec<String>> {
            m.iter()
                .map(|row| row.iter().map(|p| p.to_string_grlex()).collect())
                .collect()
        };
        let mut st = serializer.serialize_struct("MatrixFactorization", 4)?;
        st.serialize_field("h", &self.hyp.h.to_string_grlex())?;
        st.serialize_field("phi", &text_matrix(&self.phi))?;
        st.serialize_field("psi", &text_matrix(&self.psi))?;
        st.serialize_field("label", &self.label)?;
        st.end()
    }
}

/// Trust level attached to an irreducibility claim about a factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum IrreducibilityCertificate {
    /// Order-one power series are prime.
    OrderOne,
    /// Quadratic form with non-square discriminant over the configured field.
    QuadraticDiscriminant,
    /// Supplied by the caller; recorded, not checked.
    Asserted,
}

/// The ordered factor list f_1, ..., f_n defining uv = f_1 ... f_n, with
/// associate classes decided by the truncated division test.
#[derive(Clone, Debug)]
pub struct FactorSystem {
    pub field: Field,
    pub factors: Vec<Poly>,
    pub certificates: Vec<IrreducibilityCertificate>,
    /// `associate_classes[i]` = class id of factor i (ids are first-occurrence indices).
    pub associate_classes: Vec<usize>,
}

impl FactorSystem {
    pub fn new(field: &Field, factors: Vec<Poly>) -> Result<FactorSystem, Error> {
        if factors.is_empty() || factors.len() > 8 {
            return Err(Error::FactorCountOutOfRange(factors.len()));
        }
        let mut certificates = Vec::with_capacity(factors.len());
        for f in &factors {
            let ord = f.ord().ok_or(Error::ZeroInput)?;
            if ord == 0 {
                return Err(Error::UnitInput);
            }
            let cert = if ord == 1 {
                IrreducibilityCertificate::OrderOne
            } else if certify_quadratic_irreducible(f, field) {
                IrreducibilityCertificate::QuadraticDiscriminant
            } else {
                IrreducibilityCertificate::Asserted
            };
            certificates.push(cert);
        }
        let mut associate_classes = vec![0usize; factors.len()];
        for i in 0..factors.len() {
            let mut class = i;
            for j in 0..i {
                if associate_classes[j] == j && factors[i].is_associate_default(&factors[j])? {
                    class = j;
                    break;
                }
            }
            associate_classes[i] = class;
        }
        Ok(FactorSystem {
            field: field.clone(),
            factors,
            certificates,
            associate_classes,
        })
    }

    pub fn parse(field: &Field, texts: &[&str]) -> Result<FactorSystem, Error> {
        let vars = Vars::xy();
        let factors = texts
            .iter()
            .map(|t| parse_poly(t, &vars, field))
            .collect::<Result<Vec<_>, _>>()?;
        FactorSystem::new(field, factors)
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    /// Product of all factors.
    pub fn product(&self) -> Poly {
        let mut p = Poly::one(Vars::xy(), self.field.clone());
        for f in &self.factors {
            p = p.mul(f);
        }
        p
    }

    /// Product over a subset of 1-based indices.
    pub fn product_over(&self, indices: &[usize]) -> Poly {
        let mut p = Poly::one(Vars::xy(), self.field.clone());
        for &i in indices {
            p = p.mul(&self.factors[i - 1]);
        }
        p
    }

    /// Complement of a 1-based index subset.
    pub fn complement(&self, indices: &[usize]) -> Vec<usize> {
        (1..=self.n()).filter(|i| !indices.contains(i)).collect()
    }

    /// Pairwise non-associate factors?
    pub fn is_isolated(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.associate_classes.iter().all(|c| seen.insert(*c))
    }

    pub fn hypersurface(&self) -> Hypersurface {
        Hypersurface::uv_minus_f(&self.product(), &self.field)
    }

    pub fn plane_hypersurface(&self) -> Hypersurface {
        Hypersurface::plane(&self.product(), &self.field)
    }

    /// Associate classes as grouped 1-based index lists, ordered.
    pub fn classes_grouped(&self) -> Vec<Vec<usize>> {
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (i, c) in self.associate_classes.iter().enumerate() {
            groups.entry(*c).or_default().push(i + 1);
        }
        groups.into_values().collect()
    }
}

/// Degree-two forms are certified irreducible by the discriminant of their
/// order-two part (no linear splitting over the field and no lower-order
/// term means no power-series factorization into two order-one pieces).
fn certify_quadratic_irreducible(f: &Poly, field: &Field) -> bool {
    if f.ord() != Some(2) || f.total_degree() != Some(2) {
        return false;
    }
    // f = a x^2 + b xy + c y^2: reducible over the field iff b^2 - 4ac is a square.
    let a = f
        .terms
        .get(&Mono([2, 0, 0, 0]))
        .cloned()
        .unwrap_or_else(|| field.zero());
    let b = f
        .terms
        .get(&Mono([1, 1, 0, 0]))
        .cloned()
        .unwrap_or_else(|| field.zero());
    let c = f
        .terms
        .get(&Mono([0, 2, 0, 0]))
        .cloned()
        .unwrap_or_else(|| field.zero());
    let disc = field.sub(
        &field.mul(&b, &b),
        &field.mul(&field.from_int(4), &field.mul(&a, &c)),
    );
    matches!(field.sqrt(&disc), Ok(None))
}

/// The flag ideal (u, f_I) as a 2x2 matrix factorization of uv - f:
/// phi = [[u, f_I], [f_{I^c}, v]], psi the adjugate. For empty or full I the
/// ideal is free and the distinguished free object is returned instead.
pub fn flag_ideal_mf(sys: &FactorSystem, subset: &[usize]) -> Result<MatrixFactorization, Error> {
    let n = sys.n();
    for &i in subset {
        if i == 0 || i > n {
            return Err(Error::InvalidSubset(format!(
                "index {i} out of range 1..={n}"
            )));
        }
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != subset.len() {
        return Err(Error::InvalidSubset("repeated index".into()));
    }
    let hyp = sys.hypersurface();
    if sorted.is_empty() || sorted.len() == n {
        let mut free = MatrixFactorization::free_rank_one(hyp);
        free.label = Some(if sorted.is_empty() {
            "R".to_string()
        } else {
            "R (full flag ideal is free up to associates)".to_string()
        });
        return Ok(free);
    }
    let field = &sys.field;
    let vars = hyp.vars.clone();
    let lift = |p: &Poly| -> Poly {
        let mut out = Poly::zero(vars.clone(), field.clone());
        for (m, c) in &p.terms {
            out.terms.insert(Mono([0, 0, m.0[0], m.0[1]]), c.clone());
        }
        out
    };
    let f_i = lift(&sys.product_over(&sorted));
    let f_c = lift(&sys.product_over(&sys.complement(&sorted)));
    let u = Poly::var(vars.clone(), field.clone(), 0);
    let v = Poly::var(vars.clone(), field.clone(), 1);
    let phi = vec![vec![u.clone(), f_i.clone()], vec![f_c.clone(), v.clone()]];
    let psi = vec![vec![v, f_i.neg()], vec![f_c.neg(), u]];
    let label = format!(
        "T_{{{}}}",
        sorted
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(MatrixFactorization::new(hyp, phi, psi, Some(label)))
}

/// Reduce a flag-ideal factorization over uv - f to the 1x1 pair
/// (f_I, f_{I^c}) over the plane hypersurface f. Implemented exactly for the
/// flag family (2x2 with the u, v corner structure); anything else is a
/// documented failure, never a silent wrong answer.
pub fn knorrer_reduce(mf: &MatrixFactorization) -> Result<MatrixFactorization, Error> {
    if mf.is_free() {
        return Err(Error::FreeHasNoReducedFactorization);
    }
    if mf.k != 2 || mf.hyp.vars != Vars::uvxy() {
        return Err(Error::UnsupportedShape(
            "reduction is implemented for 2x2 flag-ideal factorizations".into(),
        ));
    }
    let field = &mf.hyp.field;
    let u = Poly::var(mf.hyp.vars.clone(), field.clone(), 0);
    let v = Poly::var(mf.hyp.vars.clone(), field.clone(), 1);
    if mf.phi[0][0] != u || mf.phi[1][1] != v {
        return Err(Error::UnsupportedShape(
            "expected phi = [[u, f_I], [f_c, v]]".into(),
        ));
    }
    let drop_to_xy = |p: &Poly| -> Result<Poly, Error> {
        let mut out = Poly::zero(Vars::xy(), field.clone());
        for (m, c) in &p.terms {
            if m.0[0] != 0 || m.0[1] != 0 {
                return Err(Error::UnsupportedShape(
                    "off-diagonal entries must avoid u, v".into(),
                ));
            }
            out.terms.insert(Mono([m.0[2], m.0[3], 0, 0]), c.clone());
        }
        Ok(out)
    };
    let f_i = drop_to_xy(&mf.phi[0][1])?;
    let f_c = drop_to_xy(&mf.phi[1][0])?;
    let plane = Hypersurface::plane(&f_i.mul(&f_c), field);
    Ok(MatrixFactorization::new(
        plane,
        vec![vec![f_i]],
        vec![vec![f_c]],
        mf.label.as_ref().map(|l| format!("{l} (plane)")),
    ))
}

/// Certify at truncation order N that coker(psi) presents the ideal
/// (u, f_I): the row (u, f_I) annihilates the columns of psi exactly, the
/// ideal needs exactly two minimal generators at orders N and N+1, and every
/// syzygy at order N that lifts to order N+1 is a combination of psi's
/// columns.
pub fn certify_flag_presentation(
    sys: &FactorSystem,
    subset: &[usize],
    order: u32,
) -> Result<bool, Error> {
    let mf = flag_ideal_mf(sys, subset)?;
    if mf.is_free() {
        return Ok(true);
    }
    let hyp = &mf.hyp;
    let vars = hyp.vars.clone();
    let field = hyp.field.clone();
    let u = Poly::var(vars.clone(), field.clone(), 0);
    let f_i = mf.phi[0][1].clone();
    // (u, f_I) * psi = 0 exactly over R: check both columns as polynomials
    // modulo h (multiples of h are zero in R).
    for col in 0..2 {
        let val = u.mul(&mf.psi[0][col]).add(&f_i.mul(&mf.psi[1][col]));
        if !val.is_zero() && !is_multiple_of(&val, &hyp.h) {
            return Ok(false);
        }
    }
    // Rings up to order + depth, where junk syzygies (top-degree classes
    // killed by multiplication into the truncation tail) are certain to die
    // under projection once the depth passes the generator degrees.
    let depth = f_i.total_degree().unwrap_or(1).max(1) + 2;
    let rings: Vec<TruncatedRing> = (0..=(order + 1 + depth))
        .map(|n| hyp.truncation(n))
        .collect();
    for n in [order, order + 1] {
        let ring_n = &rings[n as usize];
        // Ideal (u, f_I) over the truncation: minimal generator count is two.
        let gens = [ring_n.class_of_poly(&u), ring_n.class_of_poly(&f_i)];
        let mut with_m = crate::linalg::Echelon::new(&field);
        for g in &gens {
            for var in ring_n.variable_classes() {
                with_m.insert(ring_n.mul(g, &var), None);
            }
        }
        let mut mingen_count = 0;
        for g in &gens {
            if with_m.insert(g.clone(), None) {
                mingen_count += 1;
            }
        }
        if mingen_count != 2 {
            return Ok(false);
        }
        // Stable syzygies of (u, f_I) at order n: projections of syzygies
        // from higher orders, deepened until the span stops shrinking.
        let project_stack = |vecs: &[SparseVec], from: u32, to: u32| -> Vec<SparseVec> {
            let mut cur = vecs.to_vec();
            for step in ((to + 1)..=from).rev() {
                let hi_ring = &rings[step as usize];
                let lo_ring = &rings[(step - 1) as usize];
                let dhi = hi_ring.dim() as u32;
                let dlo = lo_ring.dim() as u32;
                cur = cur
                    .iter()
                    .map(|v| {
                        let mut out: SparseVec = Vec::new();
                        for part in 0..2u32 {
                            let chunk: SparseVec = v
                                .iter()
                                .filter(|(i, _)| i / dhi == part)
                                .map(|(i, c)| (i % dhi, c.clone()))
                                .collect();
                            for (i, c) in lo_ring.project_from(hi_ring, &chunk) {
                                out.push((part * dlo + i, c));
                            }
                        }
                        out.sort_by_key(|(i, _)| *i);
                        out
                    })
                    .collect();
            }
            cur
        };
        let mut stable: Option<crate::linalg::Echelon> = None;
        for d in 1..=depth {
            let from = n + d;
            let ring_hi = &rings[from as usize];
            let gens_hi = [ring_hi.class_of_poly(&u), ring_hi.class_of_poly(&f_i)];
            let syz_hi = syzygy_kernel(ring_hi, &gens_hi);
            let down = project_stack(&syz_hi, from, n);
            let mut ech = crate::linalg::Echelon::new(&field);
            for v in down {
                ech.insert(v, None);
            }
            match &stable {
                Some(prev) if prev.dim() == ech.dim() => {
                    stable = Some(ech);
                    break;
                }
                _ => stable = Some(ech),
            }
        }
        let stable = stable.unwrap();
        // Span of psi's columns over the order-n ring.
        let mut psi_span = crate::linalg::Echelon::new(&field);
        let dim_n = ring_n.dim();
        for col in 0..2 {
            for b in 0..dim_n {
                let belem = vec![(b as u32, field.one())];
                let mut vecs: SparseVec = Vec::new();
                for rowi in 0..2 {
                    let entry = ring_n.class_of_poly(&mf.psi[rowi][col]);
                    let prod = ring_n.mul(&entry, &belem);
                    for (i, c) in prod {
                        vecs.push((rowi as u32 * dim_n as u32 + i, c));
                    }
                }
                vecs.sort_by_key(|(i, _)| *i);
                psi_span.insert(vecs, None);
            }
        }
        for s in stable.basis() {
            if !psi_span.contains(s) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Kernel vectors of (a, b) -> a*g0 + b*g1 over the truncation, as vectors in
/// two stacked copies of the ring.
fn syzygy_kernel(ring: &TruncatedRing, gens: &[SparseVec; 2]) -> Vec<SparseVec> {
    let field = ring.field.clone();
    let dim = ring.dim();
    let mut images = Vec::with_capacity(2 * dim);
    for g in gens {
        for b in 0..dim {
            let belem = vec![(b as u32, field.one())];
            images.push(ring.mul(g, &belem));
        }
    }
    let (_rank, kernel) = crate::linalg::kernel_of_images(&field, &images);
    // kernel vectors live over source indices (gen, basis) = gen*dim + b,
    // matching the stacked layout used by the caller.
    kernel
}

/// Is p an exact polynomial multiple of h? (Polynomial division by the
/// distinguished uv-term or plane leading structure is avoided: solve the
/// linear system p = q*h over candidate monomials of q.)
fn is_multiple_of(p: &Poly, h: &Poly) -> bool {
    if p.is_zero() {
        return true;
    }
    let (Some(dp), Some(dh)) = (p.total_degree(), h.total_degree()) else {
        return false;
    };
    if dp < h.ord().unwrap_or(0) {
        return false;
    }
    // q has total degree at most dp (loose bound; h may have ord below deg).
    let qdeg = dp.saturating_sub(h.ord().unwrap_or(0));
    let _ = dh;
    let field = &p.field;
    let mut qmonos = crate::poly::monomials_up_to(p.vars.len(), qdeg);
    qmonos.sort_by(|a, b| a.grlex(b));
    let mut ech = crate::linalg::Echelon::with_witnesses(field);
    let all: Vec<Mono> = crate::poly::monomials_up_to(p.vars.len(), dp + 1);
    let pos: std::collections::BTreeMap<Mono, u32> = all
        .iter()
        .enumerate()
        .map(|(i, m)| (*m, i as u32))
        .collect();
    for q in &qmonos {
        let prod = Poly::monomial(p.vars.clone(), field.clone(), *q, field.one()).mul(h);
        let mut vec: SparseVec = prod
            .terms
            .iter()
            .filter_map(|(m, c)| pos.get(m).map(|i| (*i, c.clone())))
            .collect();
        vec.sort_by_key(|(i, _)| *i);
        ech.insert(vec, None);
    }
    let mut pvec: SparseVec = p
        .terms
        .iter()
        .filter_map(|(m, c)| pos.get(m).map(|i| (*i, c.clone())))
        .collect();
    pvec.sort_by_key(|(i, _)| *i);
    ech.contains(&pvec)
}
