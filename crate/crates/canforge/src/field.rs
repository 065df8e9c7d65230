//! Exact coefficient fields: the rationals, or a simple extension `Q[t]/(p)`
//! with a monic minimal polynomial of degree at most 4.
//!
//! Elements are coefficient vectors over the power basis 1, t, ..., t^{d-1}.
//! All arithmetic is exact big-rational arithmetic; there is no floating
//! point anywhere in this crate.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &sn * &sn == *n && &sd * &sd == *d {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

#[derive(Debug, PartialEq, Eq)]
enum FieldRepr {
    Rationals,
    /// Q[t]/(p) with p monic irreducible, deg p in 2..=4. `minpoly` holds the
    /// coefficients of p below the leading term: p = t^d + minpoly[d-1] t^{d-1} + ... + minpoly[0].
    Extension {
        symbol: String,
        minpoly: Vec<Rat>,
        /// Reductions of t^d, t^{d+1}, ..., t^{2d-2} over the power basis.
        high_powers: Vec<Vec<Rat>>,
    },
}

/// A coefficient field handle. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Field {
    repr: Arc<FieldRepr>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.repr, &other.repr) || self.repr == other.repr
    }
}
impl Eq for Field {}

/// A field element: coefficients over the power basis, length = field degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K(pub Vec<Rat>);

impl Field {
    pub fn rationals() -> Field {
        Field {
            repr: Arc::new(FieldRepr::Rationals),
        }
    }

    /// Build `Q[t]/(p)`. `minpoly_low` are the coefficients of p below the
    /// monic leading term, constant first. Rejects polynomials that are not
    /// irreducible over the rationals (decided exactly for degree <= 4).
    pub fn extension(symbol: &str, minpoly_low: Vec<Rat>) -> Result<Field, Error> {
        let d = minpoly_low.len();
        if d == 0 {
            return Err(Error::Field(
                "minimal polynomial must be nonconstant".into(),
            ));
        }
        if d > 4 {
            return Err(Error::Field(format!(
                "extension degree {d} exceeds the supported maximum of 4"
            )));
        }
        if !irreducible_over_q(&minpoly_low)? {
            return Err(Error::Field(
                "minimal polynomial is reducible over the rationals".into(),
            ));
        }
        // t^d = -minpoly_low; higher powers by repeated multiplication by t.
        let mut high_powers = Vec::new();
        let mut cur: Vec<Rat> = minpoly_low.iter().map(|c| -c.clone()).collect();
        high_powers.push(cur.clone());
        for _ in 0..d.saturating_sub(2) {
            let mut next = vec![Rat::zero(); d];
            let top = cur[d - 1].clone();
            for i in (1..d).rev() {
                next[i] = cur[i - 1].clone();
            }
            for (i, c) in minpoly_low.iter().enumerate() {
                next[i] -= &top * c;
            }
            cur = next;
            high_powers.push(cur.clone());
        }
        Ok(Field {
            repr: Arc::new(FieldRepr::Extension {
                symbol: symbol.to_string(),
                minpoly: minpoly_low,
                high_powers,
            }),
        })
    }

    pub fn degree(&self) -> usize {
        match &*self.repr {
            FieldRepr::Rationals => 1,
            FieldRepr::Extension { minpoly, .. } => minpoly.len(),
        }
    }

    pub fn symbol(&self) -> Option<&str> {
        match &*self.repr {
            FieldRepr::Rationals => None,
            FieldRepr::Extension { symbol, .. } => Some(symbol),
        }
    }

    /// Printable descriptor, e.g. `Q` or `Q(i): t^2 + 1`.
    pub fn descriptor(&self) -> String {
        match &*self.repr {
            FieldRepr::Rationals => "Q".into(),
            FieldRepr::Extension {
                symbol, minpoly, ..
            } => {
                let d = minpoly.len();
                let mut s = format!("Q({symbol}): t^{d}");
                for i in (0..d).rev() {
                    let c = &minpoly[i];
                    if c.is_zero() {
                        continue;
                    }
                    let (sign, mag) = if c.is_negative() {
                        ("-", -c.clone())
                    } else {
                        ("+", c.clone())
                    };
                    if i == 0 {
                        s.push_str(&format!(" {sign} {mag}"));
                    } else if i == 1 {
                        if mag.is_one() {
                            s.push_str(&format!(" {sign} t"));
                        } else {
                            s.push_str(&format!(" {sign} {mag}*t"));
                        }
                    } else if mag.is_one() {
                        s.push_str(&format!(" {sign} t^{i}"));
                    } else {
                        s.push_str(&format!(" {sign} {mag}*t^{i}"));
                    }
                }
                s
            }
        }
    }

    pub fn zero(&self) -> K {
        K(vec![Rat::zero(); self.degree()])
    }

    pub fn one(&self) -> K {
        self.from_rat(Rat::one())
    }

    pub fn from_rat(&self, r: Rat) -> K {
        let mut v = vec![Rat::zero(); self.degree()];
        v[0] = r;
        K(v)
    }

    pub fn from_int(&self, n: i64) -> K {
        self.from_rat(rat_int(n))
    }

    /// The extension generator t, when there is one.
    pub fn generator(&self) -> Option<K> {
        if self.degree() < 2 {
            return None;
        }
        let mut v = vec![Rat::zero(); self.degree()];
        v[1] = Rat::one();
        Some(K(v))
    }

    pub fn is_zero(&self, a: &K) -> bool {
        a.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, a: &K, b: &K) -> K {
        K(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &K, b: &K) -> K {
        K(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &K) -> K {
        K(a.0.iter().map(|x| -x).collect())
    }

    pub fn add_assign(&self, a: &mut K, b: &K) {
        for (x, y) in a.0.iter_mut().zip(&b.0) {
            *x += y;
        }
    }

    pub fn mul(&self, a: &K, b: &K) -> K {
        let d = self.degree();
        if d == 1 {
            return K(vec![&a.0[0] * &b.0[0]]);
        }
        let mut prod = vec![Rat::zero(); 2 * d - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] += x * y;
            }
        }
        let FieldRepr::Extension { high_powers, .. } = &*self.repr else {
            unreachable!()
        };
        let mut out: Vec<Rat> = prod[..d].to_vec();
        for (e, c) in prod[d..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, r) in high_powers[e].iter().enumerate() {
                out[i] += c * r;
            }
        }
        K(out)
    }

    pub fn mul_rat(&self, a: &K, r: &Rat) -> K {
        K(a.0.iter().map(|x| x * r).collect())
    }

    /// Exact inverse. Errors on zero.
    pub fn inv(&self, a: &K) -> Result<K, Error> {
        if self.is_zero(a) {
            return Err(Error::Field("division by zero".into()));
        }
        let d = self.degree();
        if d == 1 {
            return Ok(K(vec![a.0[0].recip()]));
        }
        // Solve a * x = 1 as a d x d rational linear system over the power basis.
        let mut cols: Vec<K> = Vec::with_capacity(d);
        for j in 0..d {
            let mut basis = vec![Rat::zero(); d];
            basis[j] = Rat::one();
            cols.push(self.mul(a, &K(basis)));
        }
        let mut m = vec![vec![Rat::zero(); d + 1]; d];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..d {
                m[i][j] = col.0[i].clone();
            }
        }
        m[0][d] = Rat::one();
        // Plain Gaussian elimination at size <= 4.
        for col in 0..d {
            let pivot = (col..d).find(|&r| !m[r][col].is_zero()).ok_or_else(|| {
                Error::Field("singular multiplication operator; not a field".into())
            })?;
            m.swap(col, pivot);
            let p = m[col][col].clone();
            for v in m[col].iter_mut() {
                *v /= &p;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..=d {
                        let sub = &m[col][c] * &f;
                        m[r][c] -= sub;
                    }
                }
            }
        }
        Ok(K((0..d).map(|i| m[i][d].clone()).collect()))
    }

    pub fn div(&self, a: &K, b: &K) -> Result<K, Error> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Is `a` a rational (lies in the prime field)?
    pub fn as_rat(&self, a: &K) -> Option<Rat> {
        if a.0[1..].iter().all(|c| c.is_zero()) {
            Some(a.0[0].clone())
        } else {
            None
        }
    }

    /// Exact square root inside the field, if one exists.
    ///
    /// Complete for the rationals and for quadratic extensions. Over cubic
    /// and quartic extensions only rational square classes and pure powers
    /// of the generator are recognised; anything else reports `Undecided`
    /// rather than guessing.
    pub fn sqrt(&self, a: &K) -> Result<Option<K>, Error> {
        if self.is_zero(a) {
            return Ok(Some(self.zero()));
        }
        let d = self.degree();
        if let Some(r) = self.as_rat(a) {
            if let Some(s) = rat_sqrt(&r) {
                return Ok(Some(self.from_rat(s)));
            }
            if d == 1 {
                return Ok(None);
            }
        }
        match &*self.repr {
            FieldRepr::Rationals => Ok(None),
            FieldRepr::Extension { minpoly, .. } => {
                if d == 2 {
                    return Ok(self.sqrt_quadratic(a, minpoly));
                }
                // Degree 3 or 4: try s = r * t^k exactly.
                for k in 1..d {
                    let mut pow = vec![Rat::zero(); d];
                    pow[k] = Rat::one();
                    let tk = K(pow);
                    let sq = self.mul(&tk, &tk);
                    // a = r^2 * sq requires a proportional to sq with square ratio.
                    if let Some(ratio) = proportional_ratio(&a.0, &sq.0) {
                        if let Some(r) = rat_sqrt(&ratio) {
                            return Ok(Some(self.mul_rat(&tk, &r)));
                        }
                    }
                }
                Err(Error::SqrtUndecided(self.descriptor()))
            }
        }
    }

    /// Square roots in Q[t]/(t^2 + p1 t + p0): solve (a + b t)^2 = c exactly.
    fn sqrt_quadratic(&self, c: &K, minpoly: &[Rat]) -> Option<K> {
        let p0 = &minpoly[0];
        let p1 = &minpoly[1];
        let c0 = &c.0[0];
        let c1 = &c.0[1];
        // t^2 = -p1 t - p0, so (a+bt)^2 = (a^2 - p0 b^2) + (2ab - p1 b^2) t.
        if c1.is_zero() {
            if let Some(s) = rat_sqrt(c0) {
                return Some(self.from_rat(s));
            }
            // b != 0 branch: a = p1 b / 2, b^2 = c0 / (p1^2/4 - p0).
            let denom = p1 * p1 / rat_int(4) - p0;
            if denom.is_zero() {
                return None;
            }
            let b2 = c0 / denom;
            let b = rat_sqrt(&b2)?;
            let a = p1 * &b / rat_int(2);
            return Some(K(vec![a, b]));
        }
        // b != 0; eliminate a = (c1 + p1 b^2) / (2b) and solve the quadratic
        // (p1^2 - 4 p0) z^2 + (2 p1 c1 - 4 c0) z + c1^2 = 0 for z = b^2.
        let qa = p1 * p1 - rat_int(4) * p0;
        let qb = rat_int(2) * p1 * c1 - rat_int(4) * c0;
        let qc = c1 * c1;
        let candidates: Vec<Rat> = if qa.is_zero() {
            if qb.is_zero() {
                return None;
            }
            vec![-&qc / &qb]
        } else {
            let disc = &qb * &qb - rat_int(4) * &qa * &qc;
            let sd = rat_sqrt(&disc)?;
            vec![
                (-&qb + &sd) / (rat_int(2) * &qa),
                (-&qb - &sd) / (rat_int(2) * &qa),
            ]
        };
        for z in candidates {
            if z.is_negative() || z.is_zero() {
                continue;
            }
            if let Some(b) = rat_sqrt(&z) {
                let a = (c1 + p1 * (&b * &b)) / (rat_int(2) * &b);
                let s = K(vec![a, b]);
                if self.sub(&self.mul(&s, &s), c) == self.zero()
                    || self.is_zero(&self.sub(&self.mul(&s, &s), c))
                {
                    return Some(s);
                }
            }
        }
        None
    }

    pub fn fmt_elem(&self, a: &K) -> String {
        if self.is_zero(a) {
            return "0".into();
        }
        let sym = self.symbol().unwrap_or("t");
        let mut parts = Vec::new();
        for (i, c) in a.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = match i {
                0 => format!("{c}"),
                1 if c.is_one() => sym.to_string(),
                1 if (-c).is_one() => format!("-{sym}"),
                1 => format!("{c}*{sym}"),
                _ if c.is_one() => format!("{sym}^{i}"),
                _ if (-c).is_one() => format!("-{sym}^{i}"),
                _ => format!("{c}*{sym}^{i}"),
            };
            parts.push(body);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

/// If u = r * v componentwise for a single rational r, return r.
fn proportional_ratio(u: &[Rat], v: &[Rat]) -> Option<Rat> {
    let mut ratio: Option<Rat> = None;
    for (a, b) in u.iter().zip(v) {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => {}
            (false, true) | (true, false) => return None,
            (false, false) => {
                let r = a / b;
                match &ratio {
                    None => ratio = Some(r),
                    Some(prev) if *prev == r => {}
                    _ => return None,
                }
            }
        }
    }
    ratio
}

// ---- irreducibility over Q for degree <= 4 ----

/// Decide irreducibility over Q of the monic polynomial
/// t^d + low[d-1] t^{d-1} + ... + low[0], for d <= 4.
fn irreducible_over_q(low: &[Rat]) -> Result<bool, Error> {
    let d = low.len();
    match d {
        1 => Ok(true),
        2 => {
            // t^2 + b t + c reducible iff b^2 - 4c is a rational square.
            let disc = &low[1] * &low[1] - rat_int(4) * &low[0];
            Ok(rat_sqrt(&disc).is_none())
        }
        3 => Ok(rational_roots_monic(low)?.is_empty()),
        4 => {
            if !rational_roots_monic(low)?.is_empty() {
                return Ok(false);
            }
            Ok(!quartic_splits_into_quadratics(low)?)
        }
        _ => Err(Error::Field("unsupported extension degree".into())),
    }
}

/// Rational roots of the monic polynomial with the given low coefficients.
fn rational_roots_monic(low: &[Rat]) -> Result<Vec<Rat>, Error> {
    // Clear denominators: P(t) = a_d t^d + ... + a_0 with integer a_i.
    let d = low.len();
    let mut lcm = BigInt::one();
    for c in low {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(d + 1);
    for c in low {
        coeffs.push((c * Rat::from(lcm.clone())).to_integer());
    }
    coeffs.push(lcm.clone()); // leading
                              // Strip t | P.
    let mut shift = 0usize;
    while shift < d && coeffs[shift].is_zero() {
        shift += 1;
    }
    let mut roots = Vec::new();
    if shift > 0 {
        roots.push(Rat::zero());
    }
    let coeffs = &coeffs[shift..];
    if coeffs.len() <= 1 {
        return Ok(roots);
    }
    let a0 = coeffs[0].abs();
    let an = coeffs.last().unwrap().abs();
    let eval = |r: &Rat| -> bool {
        let mut acc = Rat::zero();
        for c in coeffs.iter().rev() {
            acc = acc * r + Rat::from(c.clone());
        }
        acc.is_zero()
    };
    for p in divisors(&a0)? {
        for q in divisors(&an)? {
            for sign in [1i64, -1] {
                let cand = Rat::new(BigInt::from(sign) * &p, q.clone());
                if eval(&cand) && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    Ok(roots)
}

/// Does the monic quartic split into two rational monic quadratics?
fn quartic_splits_into_quadratics(low: &[Rat]) -> Result<bool, Error> {
    let (a, b, c, dd) = (
        low[3].clone(),
        low[2].clone(),
        low[1].clone(),
        low[0].clone(),
    );
    // Depress: t = s - a/4 gives s^4 + p s^2 + q s + r.
    let a2 = &a * &a;
    let p = &b - &a2 * rat(3, 8);
    let q = &c - &a * &b / rat_int(2) + &a2 * &a / rat_int(8);
    let r = &dd - &a * &c / rat_int(4) + &a2 * &b / rat_int(16) - &a2 * &a2 * rat(3, 256);
    // s = 0 case: (s^2 + m)(s^2 + w) with m + w = p, m w = r.
    if q.is_zero() {
        let disc = &p * &p - rat_int(4) * &r;
        if rat_sqrt(&disc).is_some() {
            return Ok(true);
        }
    }
    // s != 0: z = s^2 satisfies z^3 + 2p z^2 + (p^2 - 4r) z - q^2 = 0, z a nonzero square.
    let rl = vec![-(&q * &q), &p * &p - rat_int(4) * &r, rat_int(2) * &p];
    for z in rational_roots_monic(&rl)? {
        if z.is_zero() {
            continue;
        }
        if rat_sqrt(&z).is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All positive divisors of |n|, with a hard bound protecting against
/// absurdly large certificate inputs.
fn divisors(n: &BigInt) -> Result<Vec<BigInt>, Error> {
    if n.is_zero() {
        return Ok(vec![BigInt::one()]);
    }
    let n = n.abs();
    let limit = BigInt::from(u64::MAX);
    if n > limit {
        return Err(Error::Field(
            "minimal-polynomial coefficients too large to certify irreducibility".into(),
        ));
    }
    let mut m: u64 = n
        .to_string()
        .parse()
        .map_err(|_| Error::Field("minimal-polynomial coefficient conversion failed".into()))?;
    let mut primes: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, primes: &mut Vec<(u64, u32)>, m: &mut u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            primes.push((p, e));
        }
    };
    push(2, &mut primes, &mut m);
    let mut p = 3u64;
    while p.saturating_mul(p) <= m {
        push(p, &mut primes, &mut m);
        p += 2;
    }
    if m > 1 {
        primes.push((m, 1));
    }
    let mut divs = vec![1u64];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = 1u64;
            for _ in 0..=e {
                if let Some(v) = d.checked_mul(pk) {
                    next.push(v);
                }
                pk = match pk.checked_mul(p) {
                    Some(v) => v,
                    None => break,
                };
            }
        }
        next.sort_unstable();
        next.dedup();
        divs = next;
    }
    Ok(divs.into_iter().map(BigInt::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi() -> Field {
        Field::extension("i", vec![rat_int(1), rat_int(0)]).unwrap()
    }

    #[test]
    fn rationals_arithmetic_is_exact() {
        let f = Field::rationals();
        let a = f.from_rat(rat(3, 7));
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.one());
        assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
    }

    #[test]
    fn quadratic_extension_i() {
        let f = qi();
        let i = f.generator().unwrap();
        let i2 = f.mul(&i, &i);
        assert_eq!(i2, f.from_int(-1));
        let inv = f.inv(&i).unwrap();
        assert_eq!(f.mul(&i, &inv), f.one());
        assert_eq!(inv, f.neg(&i));
    }

    #[test]
    fn sqrt_in_extension() {
        let f = qi();
        // sqrt(-4) = 2i
        let s = f.sqrt(&f.from_int(-4)).unwrap().unwrap();
        assert_eq!(f.mul(&s, &s), f.from_int(-4));
        // sqrt(-1) exists
        assert!(f.sqrt(&f.from_int(-1)).unwrap().is_some());
        // 2 is not a square in Q(i)
        assert!(f.sqrt(&f.from_int(2)).unwrap().is_none());
        // over Q: 9/4 is a square, 2 is not
        let q = Field::rationals();
        assert_eq!(
            q.sqrt(&q.from_rat(rat(9, 4))).unwrap().unwrap(),
            q.from_rat(rat(3, 2))
        );
        assert!(q.sqrt(&q.from_int(2)).unwrap().is_none());
    }

    #[test]
    fn sqrt_of_two_in_sqrt2_field() {
        let f = Field::extension("r", vec![rat_int(-2), rat_int(0)]).unwrap();
        let s = f.sqrt(&f.from_int(2)).unwrap().unwrap();
        assert_eq!(f.mul(&s, &s), f.from_int(2));
    }

    #[test]
    fn irreducibility_checks() {
        // t^2 + 1 irreducible, t^2 - 1 not.
        assert!(Field::extension("i", vec![rat_int(1), rat_int(0)]).is_ok());
        assert!(Field::extension("e", vec![rat_int(-1), rat_int(0)]).is_err());
        // t^3 - 2 irreducible; t^3 - 1 has root 1.
        assert!(Field::extension("c", vec![rat_int(-2), rat_int(0), rat_int(0)]).is_ok());
        assert!(Field::extension("w", vec![rat_int(-1), rat_int(0), rat_int(0)]).is_err());
        // t^4 + 1 irreducible; t^4 + 4 = (t^2+2t+2)(t^2-2t+2) reducible;
        // t^4 - 5t^2 + 6 = (t^2-2)(t^2-3) reducible.
        assert!(
            Field::extension("z", vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)]).is_ok()
        );
        assert!(
            Field::extension("z", vec![rat_int(4), rat_int(0), rat_int(0), rat_int(0)]).is_err()
        );
        assert!(
            Field::extension("z", vec![rat_int(6), rat_int(0), rat_int(-5), rat_int(0)]).is_err()
        );
        // degree-1 "extension" is allowed and trivial
        assert!(Field::extension("a", vec![rat_int(-3)]).is_ok());
    }

    #[test]
    fn quartic_generator_square_root() {
        // Q[t]/(t^4 - 2): sqrt(2) = t^2.
        let f =
            Field::extension("s", vec![rat_int(-2), rat_int(0), rat_int(0), rat_int(0)]).unwrap();
        let s = f.sqrt(&f.from_int(2)).unwrap().unwrap();
        assert_eq!(f.mul(&s, &s), f.from_int(2));
    }

    #[test]
    fn cubic_sqrt_undecided_is_an_error_not_a_verdict() {
        let f = Field::extension("c", vec![rat_int(-2), rat_int(0), rat_int(0)]).unwrap();
        // 1 + t is not covered by the pattern search; must refuse to decide.
        let g = f.generator().unwrap();
        let a = f.add(&f.one(), &g);
        assert!(matches!(f.sqrt(&a), Err(Error::SqrtUndecided(_))));
    }
}
