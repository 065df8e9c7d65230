//! Flags in {1, ..., n}: strictly increasing chains of proper nonempty
//! subsets. Maximal flags (length n-1) are identified with permutations.

use serde::Serialize;

use crate::error::Error;

/// A chain I_1 ⊊ I_2 ⊊ ... ⊊ I_m of proper nonempty subsets of {1..n},
/// possibly empty (m = 0). Subsets are sorted 1-based index lists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Flag {
    pub n: usize,
    pub chain: Vec<Vec<usize>>,
}

impl Flag {
    pub fn new(n: usize, chain: Vec<Vec<usize>>) -> Result<Flag, Error> {
        if n == 0 || n > 8 {
            return Err(Error::FactorCountOutOfRange(n));
        }
        let mut normalized = Vec::with_capacity(chain.len());
        for subset in &chain {
            let mut s = subset.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != subset.len() {
                return Err(Error::InvalidFlag("repeated index inside a subset".into()));
            }
            if s.is_empty() || s.len() >= n {
                return Err(Error::InvalidFlag(
                    "subsets must be proper and nonempty".into(),
                ));
            }
            if s.iter().any(|&i| i == 0 || i > n) {
                return Err(Error::InvalidFlag(format!(
                    "index out of range 1..={n} in {s:?}"
                )));
            }
            normalized.push(s);
        }
        for w in normalized.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.len() >= b.len() || !a.iter().all(|i| b.contains(i)) {
                return Err(Error::InvalidFlag(format!(
                    "chain must be strictly increasing: {a:?} then {b:?}"
                )));
            }
        }
        Ok(Flag {
            n,
            chain: normalized,
        })
    }

    pub fn empty(n: usize) -> Flag {
        Flag {
            n,
            chain: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn is_maximal(&self) -> bool {
        self.len() + 1 == self.n
    }

    /// New indices at each level: gap(j) = I_j minus I_{j-1} (I_0 empty),
    /// plus the final complement {1..n} minus I_m.
    pub fn gaps_with_tail(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut prev: Vec<usize> = Vec::new();
        for subset in &self.chain {
            out.push(
                subset
                    .iter()
                    .filter(|i| !prev.contains(i))
                    .cloned()
                    .collect(),
            );
            prev = subset.clone();
        }
        out.push((1..=self.n).filter(|i| !prev.contains(i)).collect());
        out
    }

    pub fn describe(&self) -> String {
        if self.chain.is_empty() {
            return "()".into();
        }
        self.chain
            .iter()
            .map(|s| {
                format!(
                    "{{{}}}",
                    s.iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect::<Vec<_>>()
            .join(" < ")
    }
}

/// The maximal flag {w(1)} ⊂ {w(1), w(2)} ⊂ ... ⊂ {w(1), ..., w(n-1)}.
pub fn flag_of_permutation(perm: &[usize]) -> Result<Flag, Error> {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    for &p in perm {
        if p == 0 || p > n || seen[p] {
            return Err(Error::InvalidPermutation(format!("{perm:?}")));
        }
        seen[p] = true;
    }
    if n == 1 {
        return Flag::new(1, vec![]);
    }
    let mut chain = Vec::with_capacity(n - 1);
    let mut cur: Vec<usize> = Vec::new();
    for &p in &perm[..n - 1] {
        cur.push(p);
        let mut s = cur.clone();
        s.sort_unstable();
        chain.push(s);
    }
    Flag::new(n, chain)
}

/// All flags (or only maximal ones) in deterministic order: by chain length,
/// then lexicographically on the sorted-subset chains.
pub fn enumerate_flags(n: usize, maximal_only: bool) -> Result<Vec<Flag>, Error> {
    if n == 0 || n > 8 {
        return Err(Error::FactorCountOutOfRange(n));
    }
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    if n >= 2 {
        for mask in 1u32..(1 << n) - 1 {
            let s: Vec<usize> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| i + 1)
                .collect();
            subsets.push(s);
        }
    }
    fn extend(
        n: usize,
        subsets: &[Vec<usize>],
        chain: &mut Vec<Vec<usize>>,
        flags: &mut Vec<Flag>,
    ) {
        flags.push(Flag {
            n,
            chain: chain.clone(),
        });
        let last = chain.last().cloned();
        for s in subsets {
            let ok = match &last {
                None => true,
                Some(prev) => prev.len() < s.len() && prev.iter().all(|i| s.contains(i)),
            };
            if ok {
                chain.push(s.clone());
                extend(n, subsets, chain, flags);
                chain.pop();
            }
        }
    }
    let mut flags: Vec<Flag> = Vec::new();
    let mut chain = Vec::new();
    extend(n, &subsets, &mut chain, &mut flags);
    if maximal_only {
        flags.retain(|f| f.is_maximal());
    }
    flags.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.chain.cmp(&b.chain)));
    Ok(flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_small_n() {
        assert_eq!(enumerate_flags(2, true).unwrap().len(), 2);
        assert_eq!(enumerate_flags(2, false).unwrap().len(), 3);
        assert_eq!(enumerate_flags(3, true).unwrap().len(), 6);
        assert_eq!(enumerate_flags(3, false).unwrap().len(), 13);
        assert_eq!(enumerate_flags(1, false).unwrap().len(), 1);
        assert_eq!(enumerate_flags(1, true).unwrap().len(), 1);
        assert!(enumerate_flags(0, false).is_err());
        assert!(enumerate_flags(9, false).is_err());
    }

    #[test]
    fn counts_match_bruteforce_recursion() {
        // Independent count: chains in the boolean lattice of proper nonempty
        // subsets, counted by memoized recursion over bitmasks.
        fn brute(n: usize) -> usize {
            let full = (1usize << n) - 1;
            fn chains_from(
                s: usize,
                full: usize,
                memo: &mut std::collections::HashMap<usize, usize>,
            ) -> usize {
                if let Some(&v) = memo.get(&s) {
                    return v;
                }
                let mut total = 1;
                for t in (s + 1)..full {
                    if t & s == s && t != s {
                        total += chains_from(t, full, memo);
                    }
                }
                memo.insert(s, total);
                total
            }
            let mut memo = std::collections::HashMap::new();
            1 + (1..full)
                .map(|s| chains_from(s, full, &mut memo))
                .sum::<usize>()
        }
        fn fact(n: usize) -> usize {
            (1..=n).product()
        }
        for n in 1..=5 {
            assert_eq!(enumerate_flags(n, false).unwrap().len(), brute(n), "n={n}");
            assert_eq!(enumerate_flags(n, true).unwrap().len(), fact(n), "n={n}");
        }
    }

    #[test]
    fn permutation_flags() {
        let f = flag_of_permutation(&[1, 2, 3]).unwrap();
        assert_eq!(f.chain, vec![vec![1], vec![1, 2]]);
        let f = flag_of_permutation(&[2, 1]).unwrap();
        assert_eq!(f.chain, vec![vec![2]]);
        let f = flag_of_permutation(&[3, 1, 2]).unwrap();
        assert_eq!(f.chain, vec![vec![3], vec![1, 3]]);
        assert!(flag_of_permutation(&[1, 1]).is_err());
        let all = enumerate_flags(3, true).unwrap();
        for perm in [
            [1, 2, 3],
            [1, 3, 2],
            [2, 1, 3],
            [2, 3, 1],
            [3, 1, 2],
            [3, 2, 1],
        ] {
            let f = flag_of_permutation(&perm).unwrap();
            assert!(all.contains(&f), "{perm:?} missing");
        }
    }

    #[test]
    fn gaps_partition_the_index_set() {
        let f = Flag::new(4, vec![vec![1], vec![1, 2], vec![1, 2, 3]]).unwrap();
        assert_eq!(f.gaps_with_tail(), vec![vec![1], vec![2], vec![3], vec![4]]);
        let g = Flag::new(4, vec![vec![2, 4]]).unwrap();
        assert_eq!(g.gaps_with_tail(), vec![vec![2, 4], vec![1, 3]]);
        let e = Flag::empty(3);
        assert_eq!(e.gaps_with_tail(), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn invalid_flags_rejected() {
        assert!(Flag::new(3, vec![vec![1, 2, 3]]).is_err()); // not proper
        assert!(Flag::new(3, vec![vec![2], vec![1]]).is_err()); // not increasing
        assert!(Flag::new(3, vec![vec![1], vec![2, 3]]).is_err()); // not nested
        assert!(Flag::new(3, vec![vec![0]]).is_err()); // out of range
    }
}
