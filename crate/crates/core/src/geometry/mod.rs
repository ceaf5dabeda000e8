//! Points of Fl^a_n, R_n, Y_d and the quiver scheme Q_n as exact rational
//! linear algebra.

mod flag;
mod quiver;
mod random;
mod rpoint;
mod section;
mod subspace;
mod tangent;
mod ypoint;

pub use flag::{is_degenerate_flag, is_degenerate_flag_parabolic, FlagPoint};
pub use quiver::{
    is_quiver_point, quiver_dimension_check, quiver_from_flag, quiver_jacobian_rank, random_quiver_point,
    QuiverDimensionReport, QuiverPoint,
};
pub use random::{random_flag, random_generic_r_point, random_r_point, random_r_point_parabolic, random_rational};
pub use rpoint::{cell_label, cell_labels, fixed_point, is_partial_r_point, is_r_point, lift, project_pi, RPoint};
pub use section::{fixed_point_divisors, section_s, section_value, z_divisor_membership, z_divisors};
pub use subspace::{matrix_json, Subspace};
pub use tangent::{tangent_dimensions, TangentDimensions};
pub use ypoint::{is_y_point, YPoint};

use crate::combinatorics::IndexSet;
use crate::error::{Error, Result};
use crate::linalg::{q, Matrix, Q};
use num_traits::Zero;

/// pr_d: deletes the coordinate of w_d.
pub fn projection_pr(n: usize, d: usize) -> Result<Matrix> {
    if d == 0 || d > n {
        return Err(Error::Range(format!("pr_{d} for n = {n}")));
    }
    projection_pr_range(n, d, d + 1)
}

/// pr_{p,q}: deletes the coordinates p..q-1.
pub fn projection_pr_range(n: usize, p: usize, q_: usize) -> Result<Matrix> {
    if p == 0 || p > q_ || q_ > n + 1 {
        return Err(Error::Range(format!("pr_{{{p},{q_}}} for n = {n}")));
    }
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        if k < p || k >= q_ {
            m[(k - 1, k - 1)] = q(1);
        }
    }
    Ok(m)
}

/// Applies a matrix to a column vector.
pub fn apply(m: &Matrix, v: &[Q]) -> Vec<Q> {
    (0..m.nrows())
        .map(|r| m.row(r).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).fold(Q::zero(), |s, x| s + x))
        .collect()
}

/// Coordinates deleted by pr_{a} pr_{a+1} ... pr_{b}, i.e. a..=b.
pub(crate) fn killed(n: usize, a: usize, b: usize) -> IndexSet {
    IndexSet::interval(n, a, b)
}

#[cfg(test)]
mod tests;
