use super::{RPoint, Subspace};
use crate::combinatorics::{beta_order, Collection, IndexSet, RootIndex};
use crate::error::{Error, Result};

/// The value of s_l at slot beta_l = (i,j):
/// span(w_{j+1}) for i = 1, span(w_n, w_{i-1}, ..., w_1) for j = n-1,
/// and V_{i-1,j+1} + span(w_{j+1}) otherwise.
pub fn section_value(p: &RPoint, slot: RootIndex) -> Result<Subspace> {
    let n = p.n;
    let (i, j) = (slot.i, slot.j);
    let w = |k: usize| Subspace::coordinate(IndexSet::new(n, &[k]).expect("coordinate in range"));
    if i == 1 {
        Ok(w(j + 1))
    } else if j == n - 1 {
        Ok(Subspace::coordinate(IndexSet::interval(n, 1, i - 1).with(n)))
    } else {
        Ok(p.at(i - 1, j + 1)?.sum(&w(j + 1)))
    }
}

/// Extends a point defined on beta_1..beta_{l-1} by the section value at beta_l.
pub fn section_s(l: usize, p: &RPoint) -> Result<RPoint> {
    let order = beta_order(p.n)?.order;
    if l == 0 || l > order.len() {
        return Err(Error::Range(format!("section index {l} outside 1..{}", order.len())));
    }
    let have: Vec<RootIndex> = p.spaces.keys().copied().collect();
    let mut want = order[..l - 1].to_vec();
    want.sort();
    if have != want {
        return Err(Error::Precondition(format!("section s_{l} needs exactly the slots beta_1..beta_{}", l - 1)));
    }
    let slot = order[l - 1];
    let mut out = p.clone();
    out.set(slot.i, slot.j, section_value(p, slot)?);
    Ok(out)
}

/// V lies on Z_l, l the position of `slot` in beta order.
pub fn z_divisor_membership(p: &RPoint, slot: RootIndex) -> Result<bool> {
    Ok(*p.at(slot.i, slot.j)? == section_value(p, slot)?)
}

/// All slots whose divisor contains the point.
pub fn z_divisors(p: &RPoint) -> Result<Vec<RootIndex>> {
    let mut out = Vec::new();
    for r in beta_order(p.n)?.order {
        if z_divisor_membership(p, r)? {
            out.push(r);
        }
    }
    Ok(out)
}

/// Divisors through the fixed point p(S), read off the labels:
/// S_{1,j} = {j+1}, S_{i,n-1} = {1..i-1, n}, or S_{i,j} = S_{i-1,j+1} + {j+1}.
pub fn fixed_point_divisors(c: &Collection) -> Result<Vec<RootIndex>> {
    let n = c.n();
    let mut out = Vec::new();
    for r in beta_order(n)?.order {
        let (i, j) = (r.i, r.j);
        let s = c.at(i, j)?;
        let target = if i == 1 {
            IndexSet::new(n, &[j + 1])?
        } else if j == n - 1 {
            IndexSet::interval(n, 1, i - 1).with(n)
        } else {
            c.at(i - 1, j + 1)?.with(j + 1)
        };
        if s == target {
            out.push(r);
        }
    }
    Ok(out)
}
