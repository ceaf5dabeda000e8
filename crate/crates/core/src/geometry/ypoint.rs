use super::{killed, Subspace};
use crate::combinatorics::{IndexSet, ParabolicShape};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Subspaces V_{d_a,d_b} for 1 <= a <= b <= k, keyed by (a, b).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YPoint {
    pub shape: ParabolicShape,
    pub spaces: BTreeMap<(usize, usize), Subspace>,
}

/// W_{p,q} = span(w_1..w_p, w_{q+1}..w_n).
fn ambient(n: usize, p: usize, q: usize) -> IndexSet {
    IndexSet::interval(n, 1, p).union(IndexSet::interval(n, q + 1, n))
}

/// V_{d_a,d_b} in V_{d_{a+1},d_b} and pr_{d_b+1} ... pr_{d_{b+1}} V_{d_a,d_b} in V_{d_a,d_{b+1}}.
pub fn is_y_point(p: &YPoint) -> Result<bool> {
    let n = p.shape.n;
    let d = &p.shape.d;
    let k = d.len();
    for a in 1..=k {
        for b in a..=k {
            let v = p.spaces.get(&(a, b)).ok_or_else(|| Error::Malformed {
                i: d[a - 1],
                j: d[b - 1],
                reason: "slot missing".into(),
            })?;
            if v.n() != n || v.dim() != d[a - 1] || !v.is_within(ambient(n, d[a - 1], d[b - 1])) {
                return Err(Error::Malformed {
                    i: d[a - 1],
                    j: d[b - 1],
                    reason: format!("needs an {}-dimensional subspace of W_{{{},{}}}", d[a - 1], d[a - 1], d[b - 1]),
                });
            }
        }
    }
    for a in 1..=k {
        for b in a..=k {
            let v = &p.spaces[&(a, b)];
            if a < b && !p.spaces[&(a + 1, b)].contains(v) {
                return Ok(false);
            }
            if b < k && !p.spaces[&(a, b + 1)].contains(&v.kill(killed(n, d[b - 1] + 1, d[b]))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
