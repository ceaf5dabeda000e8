use super::{killed, FlagPoint, Subspace};
use crate::combinatorics::{is_admissible, slot_support, Collection, IndexSet, RootIndex};
use crate::error::{check_rank, Error, Result};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

/// Subspaces V_{i,j} indexed by slots; possibly partial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RPoint {
    pub n: usize,
    pub spaces: BTreeMap<RootIndex, Subspace>,
}

impl RPoint {
    pub fn empty(n: usize) -> Self {
        RPoint { n, spaces: BTreeMap::new() }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Subspace> {
        self.spaces.get(&RootIndex::new(i, j))
    }

    pub fn at(&self, i: usize, j: usize) -> Result<&Subspace> {
        self.get(i, j).ok_or_else(|| Error::Malformed { i, j, reason: "slot missing".into() })
    }

    pub fn set(&mut self, i: usize, j: usize, v: Subspace) {
        self.spaces.insert(RootIndex::new(i, j), v);
    }

    pub fn forget(&self, slot: RootIndex) -> RPoint {
        let mut p = self.clone();
        p.spaces.remove(&slot);
        p
    }

    /// The sub-point on the given slots.
    pub fn restrict(&self, slots: &[RootIndex]) -> RPoint {
        RPoint { n: self.n, spaces: slots.iter().filter_map(|r| self.spaces.get(r).map(|v| (*r, v.clone()))).collect() }
    }

    pub fn is_complete(&self) -> bool {
        (1..self.n).all(|i| (i..self.n).all(|j| self.get(i, j).is_some()))
    }
}

impl Serialize for RPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.spaces.len()))?;
        for (r, v) in &self.spaces {
            m.serialize_entry(&format!("{},{}", r.i, r.j), v)?;
        }
        m.end()
    }
}

/// dim V_{i,j} = i, V_{i,j} in W_{i,j}, pr_{j+1} V_{i,j} in V_{i,j+1} and
/// V_{i,j} in V_{i+1,j}, each checked where the slots involved are present.
pub fn is_partial_r_point(p: &RPoint) -> bool {
    let n = p.n;
    p.spaces.iter().all(|(r, v)| {
        let (i, j) = (r.i, r.j);
        v.n() == n
            && v.dim() == i
            && v.is_within(slot_support(n, i, j))
            && p.get(i, j + 1).is_none_or(|u| u.contains(&v.kill(killed(n, j + 1, j + 1))))
            && p.get(i + 1, j).is_none_or(|u| u.contains(v))
    })
}

pub fn is_r_point(p: &RPoint) -> bool {
    p.is_complete() && p.spaces.len() == crate::combinatorics::num_roots(p.n) && is_partial_r_point(p)
}

/// The diagonal (V_{1,1}, ..., V_{n-1,n-1}).
pub fn project_pi(p: &RPoint) -> Result<FlagPoint> {
    let spaces = (1..p.n).map(|i| p.at(i, i).cloned()).collect::<Result<Vec<_>>>()?;
    FlagPoint::full(p.n, spaces)
}

/// Builds V_{i,j+1} from V_{i,j} and V_{i+1,j+1}, by increasing j - i.
///
/// With P = pr_{j+1} V_{i,j} and Q = V_{i+1,j+1} in W_{i,j+1}: take P when
/// it has dimension i, otherwise Q when it has dimension i, otherwise
/// P + w_m for the smallest m with w_m in Q but not in P.
pub fn lift(x: &FlagPoint) -> Result<RPoint> {
    let n = x.n;
    check_rank(n)?;
    if x.dims != (1..n).collect::<Vec<_>>() {
        return Err(Error::Precondition("lift needs a complete flag".into()));
    }
    if !super::is_degenerate_flag(x)? {
        return Err(Error::Precondition("input is not a degenerate flag".into()));
    }
    let mut p = RPoint::empty(n);
    for (k, v) in x.spaces.iter().enumerate() {
        p.set(k + 1, k + 1, v.clone());
    }
    for gap in 1..n - 1 {
        for i in 1..n - gap {
            let j = i + gap - 1;
            let pp = p.at(i, j)?.kill(killed(n, j + 1, j + 1));
            let u = if pp.dim() == i {
                pp
            } else {
                let qq = p.at(i + 1, j + 1)?.intersection(&Subspace::coordinate(slot_support(n, i, j + 1)));
                if qq.dim() == i {
                    qq
                } else if let Some(m) = qq.first_unit_vector_outside(&pp) {
                    pp.sum(&Subspace::coordinate(IndexSet::new(n, &[m])?))
                } else {
                    let row = qq
                        .rows()
                        .into_iter()
                        .find(|r| !pp.contains_vector(r))
                        .ok_or_else(|| Error::Internal(format!("lift stuck at slot ({i},{})", j + 1)))?;
                    pp.with_vector(row)
                }
            };
            p.set(i, j + 1, u);
        }
    }
    if !is_r_point(&p) {
        return Err(Error::Internal("lift produced an invalid point".into()));
    }
    Ok(p)
}

/// p(S): V_{i,j} = span{w_s : s in S_{i,j}}.
pub fn fixed_point(c: &Collection) -> Result<RPoint> {
    if !c.is_complete() || !is_admissible(c)? {
        return Err(Error::Precondition(format!("not an admissible collection: {c}")));
    }
    let mut p = RPoint::empty(c.n());
    for (r, s) in c.slots() {
        p.set(r.i, r.j, Subspace::coordinate(s));
    }
    Ok(p)
}

/// The cell of Gr(i, W_{i,j}) containing V: echelon pivots with the
/// coordinates ordered w_i, ..., w_1, w_n, ..., w_{i+1}.
pub fn cell_label(v: &Subspace, slot: RootIndex) -> IndexSet {
    let n = v.n();
    let order: Vec<usize> = (1..=slot.i).rev().chain((slot.i + 1..=n).rev()).collect();
    v.pivots_in_order(&order)
}

/// Slotwise cell labels of a point.
pub fn cell_labels(p: &RPoint) -> Collection {
    let mut c = Collection::empty(p.n);
    for (r, v) in &p.spaces {
        c.set(r.i, r.j, cell_label(v, *r));
    }
    c
}
