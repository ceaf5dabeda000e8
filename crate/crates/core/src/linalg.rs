//! Dense matrices over `BigRational` with Gauss-Jordan elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p`, `p/q` or `-p/q`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Q::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = Q::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "row length mismatch");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Q] {
        let c = self.cols;
        &mut self.data[r * c..(r + 1) * c]
    }

    pub fn rows_vec(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn push_row(&mut self, row: Vec<Q>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form in place, scanning columns in the given order.
    /// Zero rows are dropped. Returns the pivot columns, one per surviving row.
    pub fn rref_in_order(&mut self, order: &[usize]) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in order {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&k| !self[(k, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for x in self.row_mut(r) {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            let pivot_row = self.row(r).to_vec();
            for k in 0..self.rows {
                if k == r || self[(k, c)].is_zero() {
                    continue;
                }
                let factor = self[(k, c)].clone();
                for (x, y) in self.row_mut(k).iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &factor * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.data.truncate(r * self.cols);
        self.rows = r;
        pivots
    }

    pub fn rref(&mut self) -> Vec<usize> {
        let order: Vec<usize> = (0..self.cols).collect();
        self.rref_in_order(&order)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate along the smaller side
        let mut m = if self.rows > self.cols { self.transpose() } else { self.clone() };
        m.rref().len()
    }

    /// Basis of the right kernel `{x : self * x = 0}` as row vectors.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `x * self = b` for a row vector `x`, if a solution exists.
    pub fn solve_left(&self, b: &[Q]) -> Option<Vec<Q>> {
        // x A = b  <=>  A^T x^T = b^T
        let at = self.transpose();
        let mut aug = Matrix::zeros(at.rows, at.cols + 1);
        for r in 0..at.rows {
            for c in 0..at.cols {
                aug[(r, c)] = at[(r, c)].clone();
            }
            aug[(r, at.cols)] = b[r].clone();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&at.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); at.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, at.cols)].clone();
        }
        Some(x)
    }

    pub fn max_abs_height(&self) -> Q {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(Matrix::from_i64(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(Matrix::from_i64(&[vec![1, 2, 3], vec![0, 1, 1], vec![1, 3, 4]]).rank(), 2);
        assert_eq!(Matrix::identity(4).rank(), 4);
        assert_eq!(Matrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn rref_is_canonical() {
        let mut a = Matrix::from_i64(&[vec![2, 4, 0], vec![1, 2, 1]]);
        let p = a.rref();
        assert_eq!(p, vec![0, 2]);
        assert_eq!(a, Matrix::from_i64(&[vec![1, 2, 0], vec![0, 0, 1]]));
    }

    #[test]
    fn rref_custom_order() {
        let mut a = Matrix::from_i64(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let p = a.rref_in_order(&[2, 1, 0]);
        assert_eq!(p, vec![2, 1]);
        // pivot on column 2 first: (0,1,1), then (1,1,0) clears column 1 above it
        assert_eq!(a.row(0), &[q(-1), q(0), q(1)][..]);
        assert_eq!(a.row(1), &[q(1), q(1), q(0)][..]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = Matrix::from_i64(&[vec![1, 2, 3, 4], vec![2, 4, 7, 9]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            let col = Matrix::from_rows(1, v.into_iter().map(|x| vec![x]).collect());
            assert!(a.mul(&col).is_zero());
        }
    }

    #[test]
    fn solve_left_roundtrip() {
        let a = Matrix::from_i64(&[vec![1, 0, 2], vec![0, 1, 1]]);
        let x = a.solve_left(&[q(3), q(-1), q(5)]).unwrap();
        assert_eq!(x, vec![q(3), q(-1)]);
        assert!(a.solve_left(&[q(0), q(0), q(1)]).is_none());
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(fmt_q(&qf(-6, 4)), "-3/2");
        assert_eq!(fmt_q(&q(5)), "5/1");
        assert_eq!(parse_q("-3/2"), Some(qf(-3, 2)));
        assert_eq!(parse_q("7"), Some(q(7)));
        assert_eq!(parse_q("1/0"), None);
    }
}
