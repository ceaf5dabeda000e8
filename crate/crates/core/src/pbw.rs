//! Brute-force PBW filtration of V_lambda, built as the cyclic span of the
//! highest weight vector inside a tensor product of fundamental wedges.

use crate::characters::{DominantWeight, LaurentMonomial, LaurentPolynomial, QCharacter};
use crate::combinatorics::{num_roots, IndexSet, RootIndex};
use crate::error::{check_rank, Error, Result};
use crate::linalg::{q, Matrix, Q};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, HashMap};

/// Default bound on dim V_lambda for the oracle.
pub const DEFAULT_DIM_CAP: u64 = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    F,
    E,
    H,
}

/// f_{i,j}, e_{i,j} or h_k (stored with index (k,k)).
#[derive(Clone, Debug, PartialEq)]
pub struct LieOperator {
    pub kind: OpKind,
    pub index: RootIndex,
    pub matrix: Matrix,
}

/// Weight of w_S in fundamental coordinates: [k in S] - [k+1 in S].
pub fn wedge_weight(n: usize, s: IndexSet) -> Vec<i32> {
    (1..n).map(|k| s.contains(k) as i32 - s.contains(k + 1) as i32).collect()
}

/// f_{i,j} w_S: replaces i by j+1 with the sign of moving past the elements in between.
fn f_on_wedge(s: IndexSet, r: RootIndex) -> Option<(IndexSet, i32)> {
    let (a, b) = (r.i, r.j + 1);
    if !s.contains(a) || s.contains(b) {
        return None;
    }
    let between = IndexSet::interval(s.n(), a + 1, b - 1).intersection(s).len();
    Some((s.without(a).with(b), if between.is_multiple_of(2) { 1 } else { -1 }))
}

fn e_on_wedge(s: IndexSet, r: RootIndex) -> Option<(IndexSet, i32)> {
    let (a, b) = (r.i, r.j + 1);
    if s.contains(a) || !s.contains(b) {
        return None;
    }
    let between = IndexSet::interval(s.n(), a + 1, b - 1).intersection(s).len();
    Some((s.without(b).with(a), if between.is_multiple_of(2) { 1 } else { -1 }))
}

/// All positive roots in lexicographic order.
pub fn positive_roots(n: usize) -> Vec<RootIndex> {
    let mut out = Vec::with_capacity(num_roots(n));
    for i in 1..n {
        for j in i..n {
            out.push(RootIndex::new(i, j));
        }
    }
    out
}

/// The d-th fundamental module as the wedge power of the vector representation.
#[derive(Clone, Debug)]
pub struct FundamentalModule {
    pub n: usize,
    pub d: usize,
    pub basis: Vec<IndexSet>,
    pub weights: Vec<Vec<i32>>,
    pub highest: usize,
    pub f: Vec<LieOperator>,
    pub e: Vec<LieOperator>,
    pub h: Vec<LieOperator>,
}

impl FundamentalModule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, s: IndexSet) -> Option<usize> {
        self.basis.iter().position(|&b| b == s)
    }
}

pub fn fundamental_module(n: usize, d: usize) -> Result<FundamentalModule> {
    check_rank(n)?;
    if d == 0 || d >= n {
        return Err(Error::Range(format!("fundamental module index {d} outside 1..{}", n - 1)));
    }
    let basis = IndexSet::subsets_of_size(n, d);
    let pos: HashMap<IndexSet, usize> = basis.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let dim = basis.len();
    let op = |kind: OpKind, r: RootIndex, act: &dyn Fn(IndexSet) -> Option<(IndexSet, i32)>| {
        let mut m = Matrix::zeros(dim, dim);
        for (col, &s) in basis.iter().enumerate() {
            if let Some((t, sign)) = act(s) {
                m[(pos[&t], col)] = q(sign as i64);
            }
        }
        LieOperator { kind, index: r, matrix: m }
    };
    let roots = positive_roots(n);
    let f = roots.iter().map(|&r| op(OpKind::F, r, &|s| f_on_wedge(s, r))).collect();
    let e = roots.iter().map(|&r| op(OpKind::E, r, &|s| e_on_wedge(s, r))).collect();
    let weights: Vec<Vec<i32>> = basis.iter().map(|&s| wedge_weight(n, s)).collect();
    let h = (1..n)
        .map(|k| {
            let mut m = Matrix::zeros(dim, dim);
            for (c, w) in weights.iter().enumerate() {
                m[(c, c)] = q(w[k - 1] as i64);
            }
            LieOperator { kind: OpKind::H, index: RootIndex::new(k, k), matrix: m }
        })
        .collect();
    let highest = pos[&IndexSet::interval(n, 1, d)];
    Ok(FundamentalModule { n, d, basis, weights, highest, f, e, h })
}

/// Weyl dimension formula: prod over i <= j of (sum_{k=i..j} (l_k + 1)) / (j - i + 1).
pub fn weyl_dimension(lam: &DominantWeight) -> BigInt {
    let n = lam.n();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for r in positive_roots(n) {
        let s: u64 = (r.i..=r.j).map(|k| lam.ell[k - 1] as u64 + 1).sum();
        num *= s;
        den *= (r.j - r.i + 1) as u64;
    }
    num / den
}

/// Weight multiplicities by PBW degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCharacter {
    pub n: usize,
    pub degrees: Vec<BTreeMap<Vec<i32>, u64>>,
}

impl GradedCharacter {
    pub fn to_polynomial(&self) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero(self.n - 1);
        for (k, ws) in self.degrees.iter().enumerate() {
            for (w, &c) in ws {
                p.add_term(LaurentMonomial::new(w.clone(), k as i32), q(c as i64));
            }
        }
        p
    }

    pub fn to_qcharacter(&self) -> QCharacter {
        QCharacter { polynomial: self.to_polynomial() }
    }

    pub fn graded_dimensions(&self) -> Vec<u64> {
        self.degrees.iter().map(|ws| ws.values().sum()).collect()
    }

    pub fn dimension(&self) -> u64 {
        self.graded_dimensions().iter().sum()
    }

    /// The ungraded weight multiset.
    pub fn at_q1(&self) -> BTreeMap<Vec<i32>, u64> {
        let mut out = BTreeMap::new();
        for ws in &self.degrees {
            for (w, &c) in ws {
                *out.entry(w.clone()).or_insert(0) += c;
            }
        }
        out
    }

    pub fn eval(&self, z: &[Q], qv: &Q) -> Q {
        self.to_polynomial().eval(z, qv)
    }
}

impl Serialize for GradedCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_polynomial().serialize(s)
    }
}

/// Basis of V^a_{omega_d} = wedge^d W^(d): w_S has degree #{s in S : s > d}.
pub fn degenerate_fundamental_wedge(n: usize, d: usize) -> Result<GradedCharacter> {
    check_rank(n)?;
    if d == 0 || d >= n {
        return Err(Error::Range(format!("fundamental module index {d} outside 1..{}", n - 1)));
    }
    let mut degrees: Vec<BTreeMap<Vec<i32>, u64>> = vec![BTreeMap::new(); d.min(n - d) + 1];
    for s in IndexSet::subsets_of_size(n, d) {
        *degrees[s.count_above(d)].entry(wedge_weight(n, s)).or_insert(0) += 1;
    }
    Ok(GradedCharacter { n, degrees })
}

/// Weight multiplicities of V_lambda from semistandard tableaux of the
/// associated partition, entries in 1..n.
pub fn schur_character(lam: &DominantWeight) -> BTreeMap<Vec<i32>, u64> {
    let n = lam.n();
    // row r has length l_r + ... + l_{n-1}
    let rows: Vec<usize> = (0..n - 1).map(|r| lam.ell[r..].iter().map(|&l| l as usize).sum()).collect();
    let cells: Vec<(usize, usize)> =
        rows.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
    let mut grid: Vec<Vec<usize>> = rows.iter().map(|&len| vec![0; len]).collect();
    let mut out = BTreeMap::new();
    fn fill(
        k: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        n: usize,
        out: &mut BTreeMap<Vec<i32>, u64>,
    ) {
        if k == cells.len() {
            let mut content = vec![0i32; n + 2];
            for row in grid.iter() {
                for &v in row {
                    content[v] += 1;
                }
            }
            let w: Vec<i32> = (1..n).map(|k| content[k] - content[k + 1]).collect();
            *out.entry(w).or_insert(0) += 1;
            return;
        }
        let (r, c) = cells[k];
        let lo_row = if c > 0 { grid[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        for v in lo_row.max(lo_col)..=n {
            grid[r][c] = v;
            fill(k + 1, cells, grid, n, out);
        }
        grid[r][c] = 0;
    }
    fill(0, &cells, &mut grid, n, &mut out);
    out
}

type SparseVec = Vec<(u32, Q)>;

/// V_lambda inside the tensor product of l_d copies of wedge^d, with its
/// PBW filtration.
#[derive(Clone, Debug)]
pub struct HighestWeightModule {
    pub n: usize,
    pub lambda: DominantWeight,
    pub ambient_dim: usize,
    /// Basis vectors in ambient coordinates, in order of discovery.
    pub basis: Vec<SparseVec>,
    pub weights: Vec<Vec<i32>>,
    pub degrees: Vec<usize>,
    /// dim F_0, dim F_1, ... up to stabilisation.
    pub filtration_dims: Vec<usize>,
}

impl HighestWeightModule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn graded_character(&self) -> GradedCharacter {
        let top = self.degrees.iter().copied().max().unwrap_or(0);
        let mut degrees = vec![BTreeMap::new(); top + 1];
        for (w, &k) in self.weights.iter().zip(&self.degrees) {
            *degrees[k].entry(w.clone()).or_insert(0) += 1;
        }
        GradedCharacter { n: self.n, degrees }
    }
}

struct Factor {
    subsets: Vec<IndexSet>,
    // per root: basis position -> (image position, sign)
    f: Vec<Vec<Option<(usize, i32)>>>,
}

struct Tensor {
    factors: Vec<Factor>,
    strides: Vec<usize>,
    dim: usize,
}

impl Tensor {
    fn new(n: usize, lam: &DominantWeight, roots: &[RootIndex]) -> Result<Self> {
        let mut factors = Vec::new();
        for d in 1..n {
            for _ in 0..lam.ell[d - 1] {
                let subsets = IndexSet::subsets_of_size(n, d);
                let pos: HashMap<IndexSet, usize> = subsets.iter().enumerate().map(|(k, &s)| (s, k)).collect();
                let f = roots
                    .iter()
                    .map(|&r| subsets.iter().map(|&s| f_on_wedge(s, r).map(|(t, sg)| (pos[&t], sg))).collect())
                    .collect();
                factors.push(Factor { subsets, f });
            }
        }
        let mut strides = Vec::with_capacity(factors.len());
        let mut dim: usize = 1;
        for fac in factors.iter().rev() {
            strides.push(dim);
            dim = dim
                .checked_mul(fac.subsets.len())
                .filter(|&d| d <= u32::MAX as usize)
                .ok_or_else(|| Error::Capacity("ambient tensor product too large".into()))?;
        }
        strides.reverse();
        Ok(Tensor { factors, strides, dim })
    }

    fn apply(&self, root: usize, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<u32, Q> = BTreeMap::new();
        for (idx, c) in v {
            let idx = *idx as usize;
            for (p, fac) in self.factors.iter().enumerate() {
                let digit = idx / self.strides[p] % fac.subsets.len();
                if let Some((t, sign)) = fac.f[root][digit] {
                    let j = (idx + t * self.strides[p] - digit * self.strides[p]) as u32;
                    let e = acc.entry(j).or_insert_with(Q::zero);
                    if sign > 0 {
                        *e += c;
                    } else {
                        *e -= c;
                    }
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

// Rows with distinct leading (smallest) indices, leads normalised to 1.
#[derive(Default)]
struct SemiEchelon {
    rows: HashMap<u32, SparseVec>,
}

impl SemiEchelon {
    /// Reduces `v` and inserts it if it is independent. Returns the reduced vector.
    fn insert(&mut self, v: SparseVec) -> Option<SparseVec> {
        let mut cur: BTreeMap<u32, Q> = v.into_iter().collect();
        while let Some((&lead, c)) = cur.first_key_value() {
            let Some(row) = self.rows.get(&lead) else { break };
            let c = c.clone();
            for (j, x) in row {
                let e = cur.entry(*j).or_insert_with(Q::zero);
                *e -= &c * x;
                if e.is_zero() {
                    cur.remove(j);
                }
            }
        }
        let (&lead, c) = cur.first_key_value()?;
        let inv = c.recip();
        let row: SparseVec = cur.into_iter().map(|(j, x)| (j, x * &inv)).collect();
        self.rows.insert(lead, row.clone());
        Some(row)
    }
}

pub fn highest_weight_module(lam: &DominantWeight) -> Result<HighestWeightModule> {
    highest_weight_module_capped(lam, DEFAULT_DIM_CAP)
}

/// F_k = F_{k-1} + sum_alpha f_alpha F_{k-1}: a PBW monomial of length k
/// is f_alpha times one of length k - 1, so only the vectors added at the
/// previous step need to be acted on.
pub fn highest_weight_module_capped(lam: &DominantWeight, cap: u64) -> Result<HighestWeightModule> {
    let n = lam.n();
    check_rank(n)?;
    let wd = weyl_dimension(lam);
    if wd > BigInt::from(cap) {
        return Err(Error::Capacity(format!("dim V_lambda = {wd} exceeds the oracle cap {cap}")));
    }
    let roots = positive_roots(n);
    let tensor = Tensor::new(n, lam, &roots)?;
    // highest weight vector: every factor at {1..d}
    let mut top = 0usize;
    for (p, fac) in tensor.factors.iter().enumerate() {
        let d = fac.subsets[0].len();
        let k = fac.subsets.iter().position(|&s| s == IndexSet::interval(n, 1, d)).unwrap_or(0);
        top += k * tensor.strides[p];
    }
    let lam_w: Vec<i32> = lam.ell.iter().map(|&l| l as i32).collect();
    let mut echelons: HashMap<Vec<i32>, SemiEchelon> = HashMap::new();
    let v0: SparseVec = vec![(top as u32, Q::one())];
    echelons.entry(lam_w.clone()).or_default().insert(v0.clone());
    let mut module = HighestWeightModule {
        n,
        lambda: lam.clone(),
        ambient_dim: tensor.dim,
        basis: vec![v0.clone()],
        weights: vec![lam_w.clone()],
        degrees: vec![0],
        filtration_dims: vec![1],
    };
    let mut frontier: Vec<(SparseVec, Vec<i32>)> = vec![(v0, lam_w)];
    let mut k = 0;
    while !frontier.is_empty() {
        k += 1;
        let mut next = Vec::new();
        for (v, w) in &frontier {
            for (ri, r) in roots.iter().enumerate() {
                let u = tensor.apply(ri, v);
                if u.is_empty() {
                    continue;
                }
                let mut wu = w.clone();
                for (t, x) in wu.iter_mut().enumerate() {
                    *x -= root_coord(r, t + 1);
                }
                if let Some(row) = echelons.entry(wu.clone()).or_default().insert(u) {
                    module.basis.push(row.clone());
                    module.weights.push(wu.clone());
                    module.degrees.push(k);
                    next.push((row, wu));
                }
            }
        }
        if module.basis.len() as u64 > cap {
            return Err(Error::Capacity(format!("module exceeded the oracle cap {cap}")));
        }
        if !next.is_empty() {
            module.filtration_dims.push(module.basis.len());
        }
        frontier = next;
    }
    if BigInt::from(module.dim()) != wd {
        return Err(Error::Internal(format!("cyclic span has dimension {}, expected {wd}", module.dim())));
    }
    Ok(module)
}

/// Coordinate k of alpha_{i,j} in the fundamental basis.
fn root_coord(r: &RootIndex, k: usize) -> i32 {
    let mut c = 0;
    if k >= r.i && k <= r.j {
        c += if k == r.i { 1 } else { 0 } + if k == r.j { 1 } else { 0 };
    }
    if k + 1 == r.i {
        c -= 1;
    }
    if k == r.j + 1 {
        c -= 1;
    }
    c
}

/// The PBW-graded character of V_lambda from the brute-force filtration.
pub fn graded_character(lam: &DominantWeight) -> Result<GradedCharacter> {
    Ok(highest_weight_module(lam)?.graded_character())
}

pub fn graded_character_capped(lam: &DominantWeight, cap: u64) -> Result<GradedCharacter> {
    Ok(highest_weight_module_capped(lam, cap)?.graded_character())
}

/// Integer pairing of a weight with the coroot of alpha_k.
pub fn coroot_pairing(w: &[i32], k: usize) -> i64 {
    w[k - 1] as i64
}

/// True when every entry of the matrix is an integer.
pub fn is_integral(m: &Matrix) -> bool {
    (0..m.nrows()).all(|r| m.row(r).iter().all(|x| x.is_integer() && x.to_integer().to_i64().is_some()))
}
