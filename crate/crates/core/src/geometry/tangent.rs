use crate::combinatorics::{slot_support, Collection, ParabolicShape, RootIndex};
use crate::error::{Error, Result};
use crate::linalg::{q, Matrix, Q};
use num_traits::Zero;
use serde::Serialize;
use std::collections::HashMap;

/// Tangent space data at a fixed point p(S).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TangentDimensions {
    pub tangent: usize,
    /// Positive-weight part: the dimension of the cell through p(S).
    pub positive: usize,
    /// Positive part killed by the projection to the diagonal slots.
    pub relative: usize,
    pub base: usize,
}

/// Position of w_k in the order w_i, ..., w_1, w_n, ..., w_{i+1}.
fn key(k: usize, i: usize, n: usize) -> i64 {
    if k <= i {
        -(k as i64)
    } else {
        (n + 1 - k) as i64
    }
}

/// Tangent space of R_n (or R_d over the slots present in `c`) at p(S).
///
/// A chart at V_{i,j} = span{w_a : a in S_{i,j}} has coordinates x(a, c),
/// a in S_{i,j}, c in the support but outside S_{i,j}. The containments
/// pr_{j+1} V_{i,j} in V_{i,j+1} and V_{i,j+1} in V_{i+1,j+1} linearise to
/// x_V(a,c) [c not killed] = x_U(a,c) [a not killed].
pub fn tangent_dimensions(c: &Collection, shape: Option<&ParabolicShape>) -> Result<TangentDimensions> {
    let n = c.n();
    let diag: Vec<RootIndex> = match shape {
        Some(s) => s.d.iter().map(|&d| RootIndex::new(d, d)).collect(),
        None => (1..n).map(|i| RootIndex::new(i, i)).collect(),
    };
    let mut var: HashMap<(RootIndex, usize, usize), usize> = HashMap::new();
    let mut order = Vec::new();
    for (r, s) in c.slots() {
        for a in s.iter() {
            for b in slot_support(n, r.i, r.j).difference(s).iter() {
                var.insert((r, a, b), order.len());
                order.push((r, a, b));
            }
        }
    }
    let nv = order.len();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut cons = |v: RootIndex, u: RootIndex, kill: Option<usize>| -> Result<()> {
        let (Some(sv), Some(su)) = (c.get(v.i, v.j), c.get(u.i, u.j)) else { return Ok(()) };
        for a in sv.iter() {
            for b in slot_support(n, u.i, u.j).difference(su).iter() {
                let mut row = vec![Q::zero(); nv];
                if Some(b) != kill {
                    if let Some(&k) = var.get(&(v, a, b)) {
                        row[k] += q(1);
                    }
                }
                if Some(a) != kill {
                    if !su.contains(a) {
                        return Err(Error::Precondition(format!("not admissible at {u}")));
                    }
                    if let Some(&k) = var.get(&(u, a, b)) {
                        row[k] -= q(1);
                    }
                }
                rows.push(row);
            }
        }
        Ok(())
    };
    for i in 1..n {
        for j in i..n - 1 {
            cons(RootIndex::new(i, j), RootIndex::new(i, j + 1), Some(j + 1))?;
            cons(RootIndex::new(i, j + 1), RootIndex::new(i + 1, j + 1), None)?;
        }
    }
    let rank_on = |cols: &[usize]| -> usize {
        if cols.is_empty() || rows.is_empty() {
            return 0;
        }
        let sub: Vec<Vec<Q>> = rows.iter().map(|r| cols.iter().map(|&k| r[k].clone()).collect()).collect();
        Matrix::from_rows(cols.len(), sub).rank()
    };
    let all: Vec<usize> = (0..nv).collect();
    let pos: Vec<usize> =
        (0..nv).filter(|&k| { let (r, a, b) = order[k]; key(b, r.i, n) > key(a, r.i, n) }).collect();
    let off: Vec<usize> = pos.iter().copied().filter(|&k| !diag.contains(&order[k].0)).collect();
    let tangent = nv - rank_on(&all);
    let positive = pos.len() - rank_on(&pos);
    let relative = off.len() - rank_on(&off);
    Ok(TangentDimensions { tangent, positive, relative, base: positive - relative })
}
