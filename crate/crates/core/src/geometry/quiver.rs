use super::{is_degenerate_flag, killed, matrix_json, random_generic_r_point, random_rational, FlagPoint};
use crate::combinatorics::{num_roots, ParabolicShape};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Q};
use num_traits::Zero;
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Maps A_l: C^{d_l} -> W and B_l: C^{d_l} -> C^{d_{l+1}}.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverPoint {
    pub n: usize,
    pub dims: Vec<usize>,
    pub a: Vec<Matrix>,
    pub b: Vec<Matrix>,
}

impl QuiverPoint {
    fn check_shapes(&self) -> Result<()> {
        let k = self.dims.len();
        if self.a.len() != k || self.b.len() + 1 != k.max(1) {
            return Err(Error::Precondition(format!("need {k} maps A and {} maps B", k.saturating_sub(1))));
        }
        for (l, (a, &d)) in self.a.iter().zip(&self.dims).enumerate() {
            if a.nrows() != self.n || a.ncols() != d {
                return Err(Error::Precondition(format!("A_{} must be {}x{d}", l + 1, self.n)));
            }
        }
        for (l, b) in self.b.iter().enumerate() {
            if b.nrows() != self.dims[l + 1] || b.ncols() != self.dims[l] {
                return Err(Error::Precondition(format!("B_{} must be {}x{}", l + 1, self.dims[l + 1], self.dims[l])));
            }
        }
        Ok(())
    }

    /// pr_{d_l+1} ... pr_{d_{l+1}} as a diagonal 0/1 vector.
    fn projector(&self, l: usize) -> Vec<bool> {
        let kill = killed(self.n, self.dims[l] + 1, self.dims[l + 1]);
        (1..=self.n).map(|k| !kill.contains(k)).collect()
    }

    /// All A_l injective, i.e. the point lies in the open part.
    pub fn is_open(&self) -> bool {
        self.a.iter().all(|a| a.rank() == a.ncols())
    }
}

impl Serialize for QuiverPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QuiverPoint", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("dims", &self.dims)?;
        st.serialize_field("a", &self.a.iter().map(matrix_json).collect::<Vec<_>>())?;
        st.serialize_field("b", &self.b.iter().map(matrix_json).collect::<Vec<_>>())?;
        st.end()
    }
}

/// A_{l+1} B_l = pr_{d_l+1} ... pr_{d_{l+1}} A_l for every l.
pub fn is_quiver_point(p: &QuiverPoint) -> Result<bool> {
    p.check_shapes()?;
    for l in 0..p.b.len() {
        let lhs = p.a[l + 1].mul(&p.b[l]);
        let keep = p.projector(l);
        let mut rhs = p.a[l].clone();
        for (r, &kp) in keep.iter().enumerate() {
            if !kp {
                for x in rhs.row_mut(r) {
                    *x = Q::zero();
                }
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A_l has the echelon basis of V_{d_l} as columns (times `gauge[l]` when given),
/// and B_l is the unique solution of A_{l+1} B_l = pr A_l.
fn quiver_from_flag_gauged(x: &FlagPoint, gauge: Option<&[Matrix]>) -> Result<QuiverPoint> {
    if !is_degenerate_flag(x)? {
        return Err(Error::Precondition("input is not a degenerate flag".into()));
    }
    let mut a: Vec<Matrix> = x.spaces.iter().map(|v| v.basis().transpose()).collect();
    if let Some(g) = gauge {
        a = a.iter().zip(g).map(|(m, g)| m.mul(g)).collect();
    }
    let mut p = QuiverPoint { n: x.n, dims: x.dims.clone(), a, b: vec![] };
    for l in 0..x.dims.len().saturating_sub(1) {
        let keep = p.projector(l);
        let target = p.a[l + 1].transpose();
        let mut cols = Vec::with_capacity(x.dims[l]);
        for c in 0..x.dims[l] {
            let y: Vec<Q> = p.a[l].column(c).into_iter().zip(&keep).map(|(v, &k)| if k { v } else { Q::zero() }).collect();
            let sol = target
                .solve_left(&y)
                .ok_or_else(|| Error::Internal(format!("pr V_{} is not inside V_{}", x.dims[l], x.dims[l + 1])))?;
            cols.push(sol);
        }
        p.b.push(Matrix::from_rows(x.dims[l + 1], cols).transpose());
    }
    Ok(p)
}

pub fn quiver_from_flag(x: &FlagPoint) -> Result<QuiverPoint> {
    quiver_from_flag_gauged(x, None)
}

fn random_invertible<R: Rng>(d: usize, rng: &mut R) -> Matrix {
    loop {
        let rows = (0..d).map(|_| (0..d).map(|_| random_rational(rng)).collect()).collect();
        let m = Matrix::from_rows(d, rows);
        if m.rank() == d {
            return m;
        }
    }
}

/// A random point of the open part: a generic flag (the image of a point of
/// R_n off every divisor Z_l) with a random frame on each V_d.
pub fn random_quiver_point<R: Rng>(shape: &ParabolicShape, rng: &mut R) -> Result<QuiverPoint> {
    let p = random_generic_r_point(shape.n, rng)?;
    let spaces = shape.d.iter().map(|&d| p.at(d, d).cloned()).collect::<Result<Vec<_>>>()?;
    let x = FlagPoint::new(shape.n, shape.d.clone(), spaces)?;
    let gauge: Vec<Matrix> = shape.d.iter().map(|&d| random_invertible(d, rng)).collect();
    quiver_from_flag_gauged(&x, Some(&gauge))
}

/// Rank of the differential of (A, B) -> (A_{l+1} B_l - pr A_l)_l at p.
/// Variables: entries of A_1..A_k then B_1..B_{k-1}, row-major.
pub fn quiver_jacobian_rank(p: &QuiverPoint) -> Result<usize> {
    p.check_shapes()?;
    let n = p.n;
    let mut a_off = Vec::new();
    let mut off = 0;
    for &d in &p.dims {
        a_off.push(off);
        off += n * d;
    }
    let mut b_off = Vec::new();
    for l in 0..p.b.len() {
        b_off.push(off);
        off += p.dims[l + 1] * p.dims[l];
    }
    let nvars = off;
    let mut rows = Vec::new();
    for l in 0..p.b.len() {
        let (d0, d1) = (p.dims[l], p.dims[l + 1]);
        let keep = p.projector(l);
        for r in 0..n {
            for c in 0..d0 {
                let mut row = vec![Q::zero(); nvars];
                for k in 0..d1 {
                    // dA_{l+1}[r,k] B_l[k,c]
                    row[a_off[l + 1] + r * d1 + k] += &p.b[l][(k, c)];
                    // A_{l+1}[r,k] dB_l[k,c]
                    row[b_off[l] + k * d0 + c] += &p.a[l + 1][(r, k)];
                }
                if keep[r] {
                    row[a_off[l] + r * d0 + c] -= crate::linalg::q(1);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(Matrix::from_rows(nvars, rows).rank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuiverDimensionReport {
    pub n: usize,
    pub dims: Vec<usize>,
    pub ambient_dimension: usize,
    pub equations: usize,
    /// dim Fl^a_d + sum d_l^2.
    pub expected_dimension: usize,
    pub samples: usize,
    pub ranks: Vec<usize>,
    pub full_rank: bool,
    pub dimension: Option<usize>,
}

/// Jacobian ranks at random points of the open part.
pub fn quiver_dimension_check<R: Rng>(shape: &ParabolicShape, samples: usize, rng: &mut R) -> Result<QuiverDimensionReport> {
    let n = shape.n;
    let d = &shape.d;
    let ambient = d.iter().map(|&x| n * x).sum::<usize>() + d.windows(2).map(|w| w[0] * w[1]).sum::<usize>();
    let equations = d[..d.len() - 1].iter().map(|&x| n * x).sum::<usize>();
    let base = if shape.is_full() { num_roots(n) } else { shape.roots().len() };
    let expected = base + d.iter().map(|&x| x * x).sum::<usize>();
    let mut ranks = Vec::with_capacity(samples);
    for _ in 0..samples {
        let p = random_quiver_point(shape, rng)?;
        if !is_quiver_point(&p)? || !p.is_open() {
            return Err(Error::Internal("sampled point is not in the open part of Q".into()));
        }
        ranks.push(quiver_jacobian_rank(&p)?);
    }
    let full_rank = ranks.iter().all(|&r| r == equations);
    let dimension = full_rank.then_some(ambient - equations);
    Ok(QuiverDimensionReport {
        n,
        dims: d.clone(),
        ambient_dimension: ambient,
        equations,
        expected_dimension: expected,
        samples,
        ranks,
        full_rank,
        dimension,
    })
}
