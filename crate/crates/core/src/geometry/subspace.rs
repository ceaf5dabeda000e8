use crate::combinatorics::IndexSet;
use crate::linalg::{fmt_q, Matrix, Q};
use num_traits::Zero;
use serde::{Serialize, Serializer};
use std::fmt;

/// A subspace of W = span(w_1..w_n), stored as the reduced row echelon
/// form of a basis, so equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    n: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { n, basis: Matrix::zeros(0, n), pivots: vec![] }
    }

    pub fn from_matrix(mut m: Matrix) -> Self {
        let n = m.ncols();
        let pivots = m.rref();
        Subspace { n, basis: m, pivots }
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<Q>>) -> Self {
        Self::from_matrix(Matrix::from_rows(n, rows))
    }

    /// span{w_s : s in S}.
    pub fn coordinate(s: IndexSet) -> Self {
        let n = s.n();
        let rows = s
            .iter()
            .map(|k| {
                let mut v = vec![Q::zero(); n];
                v[k - 1] = crate::linalg::q(1);
                v
            })
            .collect();
        Self::from_rows(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn rows(&self) -> Vec<Vec<Q>> {
        self.basis.rows_vec()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after reduction by the echelon basis.
    fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut v = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, y) in v.iter_mut().zip(self.basis.row(r)) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, o: &Subspace) -> bool {
        (0..o.dim()).all(|r| self.contains_vector(o.basis.row(r)))
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        let mut rows = self.rows();
        rows.extend(o.rows());
        Self::from_rows(self.n, rows)
    }

    pub fn with_vector(&self, v: Vec<Q>) -> Subspace {
        let mut rows = self.rows();
        rows.push(v);
        Self::from_rows(self.n, rows)
    }

    /// The annihilator under the standard pairing, as a subspace of W.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Self::coordinate(IndexSet::interval(self.n, 1, self.n));
        }
        Self::from_rows(self.n, self.basis.kernel())
    }

    pub fn intersection(&self, o: &Subspace) -> Subspace {
        self.annihilator().sum(&o.annihilator()).annihilator()
    }

    /// Image under the projection killing the coordinates in `kill`.
    pub fn kill(&self, kill: IndexSet) -> Subspace {
        let rows = self
            .rows()
            .into_iter()
            .map(|mut v| {
                for k in kill.iter() {
                    v[k - 1] = Q::zero();
                }
                v
            })
            .collect();
        Self::from_rows(self.n, rows)
    }

    /// Every basis vector is supported on `support`.
    pub fn is_within(&self, support: IndexSet) -> bool {
        (0..self.dim()).all(|r| self.basis.row(r).iter().enumerate().all(|(c, x)| x.is_zero() || support.contains(c + 1)))
    }

    /// The first unit vector w_m (in increasing m) lying in self but not in `o`.
    pub fn first_unit_vector_outside(&self, o: &Subspace) -> Option<usize> {
        (1..=self.n).find(|&m| {
            let mut v = vec![Q::zero(); self.n];
            v[m - 1] = crate::linalg::q(1);
            self.contains_vector(&v) && !o.contains_vector(&v)
        })
    }

    /// Pivot set of the echelon form computed in the given column order (1-based coordinates).
    pub fn pivots_in_order(&self, order: &[usize]) -> IndexSet {
        let mut m = self.basis.clone();
        let cols: Vec<usize> = order.iter().map(|k| k - 1).collect();
        let piv = m.rref_in_order(&cols);
        IndexSet::from_mask(self.n, piv.iter().fold(0u64, |acc, c| acc | 1 << c))
    }

    /// Coordinate subspace test: returns S when self = span{w_s : s in S}.
    pub fn as_coordinate(&self) -> Option<IndexSet> {
        let s = IndexSet::from_mask(self.n, self.pivots.iter().fold(0u64, |acc, c| acc | 1 << c));
        (Self::coordinate(s) == *self).then_some(s)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.dim())
            .map(|r| {
                let v: Vec<String> = self.basis.row(r).iter().map(|x| x.to_string()).collect();
                format!("[{}]", v.join(" "))
            })
            .collect();
        write!(f, "<{}>", rows.join(", "))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rows of `p/q` strings.
pub fn matrix_json(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.nrows()).map(|r| m.row(r).iter().map(fmt_q).collect()).collect()
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_json(&self.basis).serialize(s)
    }
}
