//! Exact sparse linear algebra over the coefficient field.
//!
//! Vectors are sorted `(index, coefficient)` lists. Subspaces are kept in
//! reduced row echelon form with lowest-index pivots; RREF is unique for a
//! given subspace, so canonical coset representatives (and therefore every
//! downstream dimension and report byte) are independent of insertion order
//! and worker count. Rows are normalized to unit pivots; all arithmetic is
//! exact.

use std::collections::BTreeMap;

use crate::field::{Field, K};

pub type SparseVec = Vec<(u32, K)>;

pub fn sv_is_zero(v: &SparseVec) -> bool {
    v.is_empty()
}

pub fn sv_scale(field: &Field, v: &SparseVec, c: &K) -> SparseVec {
    if field.is_zero(c) {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, field.mul(x, c))).collect()
}

/// a + b over sorted sparse vectors.
pub fn sv_add(field: &Field, a: &SparseVec, b: &SparseVec) -> SparseVec {
    sv_add_scaled(field, a, b, &field.one())
}

/// a + c*b over sorted sparse vectors.
pub fn sv_add_scaled(field: &Field, a: &SparseVec, b: &SparseVec, c: &K) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let val = field.mul(&b[j].1, c);
                if !field.is_zero(&val) {
                    out.push((b[j].0, val));
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let val = field.add(&a[i].1, &field.mul(&b[j].1, c));
                if !field.is_zero(&val) {
                    out.push((a[i].0, val));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (idx, val) in &b[j..] {
        let v = field.mul(val, c);
        if !field.is_zero(&v) {
            out.push((*idx, v));
        }
    }
    out
}

pub fn sv_neg(field: &Field, a: &SparseVec) -> SparseVec {
    a.iter().map(|(i, c)| (*i, field.neg(c))).collect()
}

/// A subspace in reduced row echelon form. Optionally tracks, for each stored
/// row, the combination of originally inserted vectors that produced it
/// (witnesses live in a separate index space).
pub struct Echelon {
    field: Field,
    /// pivot index -> row position in `rows`
    pivots: BTreeMap<u32, usize>,
    rows: Vec<SparseVec>,
    witnesses: Option<Vec<SparseVec>>,
    inserted: u32,
}

impl Echelon {
    pub fn new(field: &Field) -> Echelon {
        Echelon {
            field: field.clone(),
            pivots: BTreeMap::new(),
            rows: Vec::new(),
            witnesses: None,
            inserted: 0,
        }
    }

    pub fn with_witnesses(field: &Field) -> Echelon {
        let mut e = Echelon::new(field);
        e.witnesses = Some(Vec::new());
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the echelon: returns the canonical residue.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_tracked(v).0
    }

    /// Reduce and also return the combination of stored rows that was
    /// subtracted, expressed over witness space when tracking is on.
    pub fn reduce_tracked(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut cur = v.clone();
        let mut combo: SparseVec = Vec::new();
        loop {
            let Some(&(idx, ref coef)) = cur.iter().find(|(i, _)| self.pivots.contains_key(i))
            else {
                return (cur, combo);
            };
            let row_pos = self.pivots[&idx];
            let c = coef.clone();
            cur = sv_add_scaled(&self.field, &cur, &self.rows[row_pos], &self.field.neg(&c));
            if let Some(ws) = &self.witnesses {
                combo = sv_add_scaled(&self.field, &combo, &ws[row_pos], &c);
            }
        }
    }

    /// Insert a vector; returns true when the subspace grew. `witness` is the
    /// vector's name in witness space (ignored unless tracking).
    pub fn insert(&mut self, v: SparseVec, witness: Option<SparseVec>) -> bool {
        let (mut residue, combo) = self.reduce_tracked(&v);
        if residue.is_empty() {
            self.inserted += 1;
            return false;
        }
        // Pivot on the lowest index of the residue; normalize to pivot 1.
        let (pidx, pval) = residue[0].clone();
        let inv = self.field.inv(&pval).expect("nonzero pivot");
        residue = sv_scale(&self.field, &residue, &inv);
        let mut wit_row: SparseVec = Vec::new();
        if self.witnesses.is_some() {
            let own = witness.unwrap_or_else(|| vec![(self.inserted, self.field.one())]);
            // new_row = (v - combo·rows)/pval, so witness = (own - combo·wits)/pval
            let mut w = own;
            w = sv_add_scaled(&self.field, &w, &combo, &self.field.from_int(-1));
            wit_row = sv_scale(&self.field, &w, &inv);
        }
        // Back-substitute into existing rows to keep RREF.
        let new_pos = self.rows.len();
        let row_positions: Vec<usize> = self.pivots.values().cloned().collect();
        for pos in row_positions {
            if let Some(&(_, ref c)) = self.rows[pos].iter().find(|(i, _)| *i == pidx) {
                let c = c.clone();
                let neg = self.field.neg(&c);
                self.rows[pos] = sv_add_scaled(&self.field, &self.rows[pos], &residue, &neg);
                if let Some(ws) = &mut self.witnesses {
                    let adj = sv_scale(&self.field, &wit_row, &neg);
                    ws[pos] = sv_add(&self.field, &ws[pos], &adj);
                }
            }
        }
        self.pivots.insert(pidx, new_pos);
        self.rows.push(residue);
        if let Some(ws) = &mut self.witnesses {
            ws.push(wit_row);
        }
        self.inserted += 1;
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Rows in deterministic order (by pivot index).
    pub fn basis(&self) -> Vec<&SparseVec> {
        self.pivots.values().map(|&p| &self.rows[p]).collect()
    }

    pub fn pivot_indices(&self) -> Vec<u32> {
        self.pivots.keys().cloned().collect()
    }
}

/// Kernel of a linear map given by the images of the source basis vectors,
/// processed in order. Returns (rank, kernel basis over source coordinates).
/// The kernel basis is in reduced echelon form over source indices and is
/// deterministic.
pub fn kernel_of_images(field: &Field, images: &[SparseVec]) -> (usize, Vec<SparseVec>) {
    let mut ech = Echelon::with_witnesses(field);
    let mut kernel: Vec<SparseVec> = Vec::new();
    for (src, img) in images.iter().enumerate() {
        let (residue, combo) = ech.reduce_tracked(img);
        if residue.is_empty() {
            // src-th source vector maps into the span: kernel element
            // e_src - combo (witnesses name earlier source vectors).
            let mut k: SparseVec = vec![(src as u32, field.one())];
            k = sv_add_scaled(field, &k, &combo, &field.from_int(-1));
            kernel.push(k);
            // still count the insertion so witness numbering matches src
            ech.insert(img.clone(), Some(vec![(src as u32, field.one())]));
        } else {
            ech.insert(img.clone(), Some(vec![(src as u32, field.one())]));
        }
    }
    (ech.dim(), kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn q() -> Field {
        Field::rationals()
    }

    fn sv(entries: &[(u32, i64)]) -> SparseVec {
        entries
            .iter()
            .map(|(i, c)| (*i, q().from_int(*c)))
            .collect()
    }

    #[test]
    fn echelon_reduction_is_canonical() {
        let f = q();
        let mut e = Echelon::new(&f);
        e.insert(sv(&[(0, 1), (2, 2)]), None);
        e.insert(sv(&[(1, 1), (2, -1)]), None);
        assert_eq!(e.dim(), 2);
        // (1, 1, 1) - row0 - row1 = (0, 0, 1 - 2 + 1) = (0, 0, 0)
        let r = e.reduce(&sv(&[(0, 1), (1, 1), (2, 1)]));
        assert_eq!(
            r,
            sv(&[(2, 0)])
                .into_iter()
                .filter(|(_, c)| !f.is_zero(c))
                .collect::<Vec<_>>()
        );
        assert!(e.contains(&sv(&[(0, 1), (1, 1), (2, 1)])));
        assert!(!e.contains(&sv(&[(2, 1)])));
    }

    #[test]
    fn kernel_of_images_finds_relations() {
        let f = q();
        // images: e0 -> (1,0), e1 -> (0,1), e2 -> (1,1): kernel = e2 - e1 - e0
        let images = vec![sv(&[(0, 1)]), sv(&[(1, 1)]), sv(&[(0, 1), (1, 1)])];
        let (rank, ker) = kernel_of_images(&f, &images);
        assert_eq!(rank, 2);
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0], sv(&[(0, -1), (1, -1), (2, 1)]));
    }

    #[test]
    fn insert_same_subspace_any_order_same_rref() {
        let f = q();
        let vs = [
            sv(&[(0, 2), (1, 4)]),
            sv(&[(1, 3), (2, 6)]),
            sv(&[(0, 1), (2, -1)]),
        ];
        let mut e1 = Echelon::new(&f);
        for v in vs.iter() {
            e1.insert(v.clone(), None);
        }
        let mut e2 = Echelon::new(&f);
        for v in vs.iter().rev() {
            e2.insert(v.clone(), None);
        }
        assert_eq!(e1.dim(), e2.dim());
        let b1: Vec<_> = e1.basis().into_iter().cloned().collect();
        let b2: Vec<_> = e2.basis().into_iter().cloned().collect();
        assert_eq!(b1, b2);
        // canonical residues agree
        let probe = sv(&[(0, 5), (1, 1), (2, 7)]);
        assert_eq!(e1.reduce(&probe), e2.reduce(&probe));
    }
}
