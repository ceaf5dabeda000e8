use super::{killed, Subspace};
use crate::combinatorics::ParabolicShape;
use crate::error::{check_rank, Error, Result};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// Subspaces V_{d_1}, ..., V_{d_k} of W with dim V_d = d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagPoint {
    pub n: usize,
    pub dims: Vec<usize>,
    pub spaces: Vec<Subspace>,
}

impl FlagPoint {
    /// A complete flag V_1, ..., V_{n-1}.
    pub fn full(n: usize, spaces: Vec<Subspace>) -> Result<Self> {
        check_rank(n)?;
        Self::new(n, (1..n).collect(), spaces)
    }

    pub fn new(n: usize, dims: Vec<usize>, spaces: Vec<Subspace>) -> Result<Self> {
        if dims.len() != spaces.len() {
            return Err(Error::Precondition(format!("{} dimensions for {} subspaces", dims.len(), spaces.len())));
        }
        if let Some(s) = spaces.iter().find(|s| s.n() != n) {
            return Err(Error::Precondition(format!("subspace in dimension {} inside W of dimension {n}", s.n())));
        }
        Ok(FlagPoint { n, dims, spaces })
    }

    /// V_d = span(w_1..w_d) for every d.
    pub fn coordinate(n: usize, dims: Vec<usize>) -> Self {
        let spaces =
            dims.iter().map(|&d| Subspace::coordinate(crate::combinatorics::IndexSet::interval(n, 1, d))).collect();
        FlagPoint { n, dims, spaces }
    }

    pub fn space(&self, d: usize) -> Option<&Subspace> {
        self.dims.iter().position(|&x| x == d).map(|k| &self.spaces[k])
    }

    fn check_dims(&self) -> Result<()> {
        for (&d, s) in self.dims.iter().zip(&self.spaces) {
            if s.dim() != d {
                return Err(Error::Malformed { i: d, j: d, reason: format!("V_{d} has dimension {}", s.dim()) });
            }
        }
        if self.dims.windows(2).any(|w| w[0] >= w[1]) || self.dims.iter().any(|&d| d == 0 || d >= self.n) {
            return Err(Error::Precondition(format!("flag dimensions {:?} are not a shape", self.dims)));
        }
        Ok(())
    }
}

impl Serialize for FlagPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.dims.len()))?;
        for (d, v) in self.dims.iter().zip(&self.spaces) {
            m.serialize_entry(&d.to_string(), v)?;
        }
        m.end()
    }
}

/// pr_{d_i+1} ... pr_{d_{i+1}} V_{d_i} lies in V_{d_{i+1}} for consecutive dimensions.
pub fn is_degenerate_flag(p: &FlagPoint) -> Result<bool> {
    p.check_dims()?;
    Ok(p.dims.windows(2).zip(p.spaces.windows(2)).all(|(d, v)| v[1].contains(&v[0].kill(killed(p.n, d[0] + 1, d[1])))))
}

/// As `is_degenerate_flag`, additionally checking that the dimensions are d_1 < ... < d_k.
pub fn is_degenerate_flag_parabolic(p: &FlagPoint, shape: &ParabolicShape) -> Result<bool> {
    if p.n != shape.n || p.dims != shape.d {
        return Err(Error::Precondition(format!("flag dimensions {:?} do not match shape {:?}", p.dims, shape.d)));
    }
    is_degenerate_flag(p)
}
