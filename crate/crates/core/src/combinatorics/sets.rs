use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;

/// A subset of {1..n}, n <= 64, stored as a bitmask (bit k-1 for element k).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    n: u8,
    mask: u64,
}

impl IndexSet {
    pub const MAX_N: usize = 64;

    pub fn new(n: usize, elems: &[usize]) -> Result<Self> {
        if n > Self::MAX_N {
            return Err(Error::Capacity(format!("index sets need n <= {}", Self::MAX_N)));
        }
        let mut mask = 0u64;
        for &k in elems {
            if k == 0 || k > n {
                return Err(Error::Range(format!("element {k} outside 1..{n}")));
            }
            mask |= 1 << (k - 1);
        }
        Ok(IndexSet { n: n as u8, mask })
    }

    pub fn empty(n: usize) -> Self {
        debug_assert!(n <= Self::MAX_N);
        IndexSet { n: n as u8, mask: 0 }
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= Self::MAX_N);
        debug_assert!(n == 64 || mask >> n == 0);
        IndexSet { n: n as u8, mask }
    }

    /// {lo..hi}; empty when lo > hi.
    pub fn interval(n: usize, lo: usize, hi: usize) -> Self {
        let hi = hi.min(n);
        if lo == 0 || lo > hi {
            return Self::empty(n);
        }
        let width = hi - lo + 1;
        let bits = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        IndexSet { n: n as u8, mask: bits << (lo - 1) }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, k: usize) -> bool {
        k >= 1 && k <= self.n() && self.mask >> (k - 1) & 1 == 1
    }

    pub fn with(self, k: usize) -> Self {
        debug_assert!(k >= 1 && k <= self.n());
        IndexSet { n: self.n, mask: self.mask | 1 << (k - 1) }
    }

    pub fn without(self, k: usize) -> Self {
        debug_assert!(k >= 1 && k <= self.n());
        IndexSet { n: self.n, mask: self.mask & !(1 << (k - 1)) }
    }

    pub fn union(self, o: Self) -> Self {
        IndexSet { n: self.n, mask: self.mask | o.mask }
    }

    pub fn intersection(self, o: Self) -> Self {
        IndexSet { n: self.n, mask: self.mask & o.mask }
    }

    pub fn difference(self, o: Self) -> Self {
        IndexSet { n: self.n, mask: self.mask & !o.mask }
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.mask & !o.mask == 0
    }

    /// The element of a one-element set.
    pub fn single(&self) -> Option<usize> {
        (self.mask.count_ones() == 1).then(|| self.mask.trailing_zeros() as usize + 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let mut m = self.mask;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let k = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(k + 1)
        })
    }

    pub fn elements(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Number of elements strictly greater than `k`.
    pub fn count_above(&self, k: usize) -> usize {
        if k >= 64 {
            0
        } else {
            (self.mask >> k).count_ones() as usize
        }
    }

    /// All k-subsets of {1..n} in increasing mask order.
    pub fn subsets_of_size(n: usize, k: usize) -> Vec<IndexSet> {
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        if k == 0 {
            return vec![Self::empty(n)];
        }
        let mut m: u64 = (1u64 << k) - 1;
        let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        loop {
            out.push(IndexSet { n: n as u8, mask: m });
            // next mask with the same popcount
            let c = m & m.wrapping_neg();
            let r = m.wrapping_add(c);
            if r == 0 {
                break;
            }
            m = (((r ^ m) >> 2) / c) | r;
            if m > limit || m.count_ones() as usize != k {
                break;
            }
        }
        out
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for IndexSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let s = IndexSet::new(5, &[1, 3, 5]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.elements(), vec![1, 3, 5]);
        assert_eq!(s.to_string(), "(1,3,5)");
        assert!(s.contains(3) && !s.contains(2) && !s.contains(6));
        assert_eq!(s.without(3).with(2).elements(), vec![1, 2, 5]);
        assert_eq!(s.count_above(2), 2);
        assert_eq!(IndexSet::interval(5, 2, 4).elements(), vec![2, 3, 4]);
        assert!(IndexSet::interval(5, 3, 2).is_empty());
        assert_eq!(IndexSet::new(3, &[2]).unwrap().single(), Some(2));
        assert_eq!(s.single(), None);
        assert!(IndexSet::new(3, &[4]).is_err());
    }

    #[test]
    fn subsets_of_size_counts() {
        for n in 1..=8 {
            for k in 0..=n {
                let v = IndexSet::subsets_of_size(n, k);
                let binom = (0..k).fold(1u64, |acc, t| acc * (n - t) as u64 / (t + 1) as u64);
                assert_eq!(v.len() as u64, binom, "n={n} k={k}");
                assert!(v.windows(2).all(|w| w[0].mask() < w[1].mask()));
                assert!(v.iter().all(|s| s.len() == k));
            }
        }
    }
}
