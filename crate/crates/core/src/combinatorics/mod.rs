//! Positive roots, the beta order, admissible collections S_{i,j} and the
//! cell-dimension rules for R_n and its parabolic analogues.

mod census;
mod sets;

pub use census::{
    base_cell_census, smallness_report, BaseCellRecord, SmallnessReport, Stratum, Verdict, Witness, CENSUS_MAX_N,
};
pub use sets::IndexSet;

use crate::error::{check_rank, Error, Result};
use serde::Serialize;
use std::fmt;

/// The positive root alpha_{i,j} = alpha_i + ... + alpha_j, stored as (i, j).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RootIndex {
    pub i: usize,
    pub j: usize,
}

impl RootIndex {
    pub fn new(i: usize, j: usize) -> Self {
        RootIndex { i, j }
    }

    pub fn is_diagonal(&self) -> bool {
        self.i == self.j
    }
}

impl fmt::Display for RootIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Number of positive roots of sl_n.
pub fn num_roots(n: usize) -> usize {
    n * (n - 1) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaOrder {
    pub n: usize,
    pub order: Vec<RootIndex>,
}

impl BetaOrder {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn position(&self, r: RootIndex) -> Option<usize> {
        self.order.iter().position(|&x| x == r)
    }
}

/// Antidiagonals j - i from n-2 down to 0, smaller i first inside each.
pub fn beta_order(n: usize) -> Result<BetaOrder> {
    check_rank(n)?;
    let mut order = Vec::with_capacity(num_roots(n));
    for k in (0..n - 1).rev() {
        for i in 1..n - k {
            order.push(RootIndex::new(i, i + k));
        }
    }
    Ok(BetaOrder { n, order })
}

/// Coordinates allowed at slot (i,j): {1..i} together with {j+1..n}.
pub fn slot_support(n: usize, i: usize, j: usize) -> IndexSet {
    IndexSet::interval(n, 1, i).union(IndexSet::interval(n, j + 1, n))
}

/// `wrap(x) = x` for positive x, `x + n` otherwise.
pub fn wrap(x: i64, n: usize) -> i64 {
    if x > 0 {
        x
    } else {
        x + n as i64
    }
}

/// A parabolic shape d_1 < ... < d_k inside {1..n-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ParabolicShape {
    pub n: usize,
    pub d: Vec<usize>,
}

impl ParabolicShape {
    pub fn new(n: usize, d: Vec<usize>) -> Result<Self> {
        check_rank(n)?;
        if d.is_empty() {
            return Err(Error::Range("empty parabolic shape".into()));
        }
        if d.iter().any(|&x| x == 0 || x >= n) {
            return Err(Error::Range(format!("shape entries must lie in 1..{}", n - 1)));
        }
        if d.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Range("shape must be strictly increasing".into()));
        }
        Ok(ParabolicShape { n, d })
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::new(n, (1..n).collect())
    }

    pub fn is_full(&self) -> bool {
        self.d.len() == self.n - 1
    }

    /// alpha_{i,j} pairs positively with some omega_{d_l}, i.e. i <= d_l <= j.
    pub fn contains_root(&self, r: RootIndex) -> bool {
        self.d.iter().any(|&x| r.i <= x && x <= r.j)
    }

    /// The roots of P_d in beta order.
    pub fn roots(&self) -> Vec<RootIndex> {
        beta_order(self.n)
            .expect("rank checked at construction")
            .order
            .into_iter()
            .filter(|&r| self.contains_root(r))
            .collect()
    }
}

/// A (possibly partial) assignment of index sets to slots (i,j), 1 <= i <= j <= n-1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Collection {
    n: usize,
    grid: Vec<Option<IndexSet>>,
}

pub type AdmissibleCollection = Collection;

impl Collection {
    pub fn empty(n: usize) -> Self {
        let w = n.saturating_sub(1);
        Collection { n, grid: vec![None; w * w] }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(1 <= i && i <= j && j < self.n);
        (i - 1) * (self.n - 1) + (j - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<IndexSet> {
        if i == 0 || i > j || j >= self.n {
            return None;
        }
        self.grid[self.idx(i, j)]
    }

    /// Like `get`, but a missing slot is a structural error.
    pub fn at(&self, i: usize, j: usize) -> Result<IndexSet> {
        self.get(i, j).ok_or_else(|| Error::Malformed { i, j, reason: "slot missing".into() })
    }

    pub fn set(&mut self, i: usize, j: usize, s: IndexSet) {
        let k = self.idx(i, j);
        self.grid[k] = Some(s);
    }

    pub fn clear(&mut self, i: usize, j: usize) {
        let k = self.idx(i, j);
        self.grid[k] = None;
    }

    /// Builds a collection from `(i, j, elements)` triples.
    pub fn from_slots(n: usize, slots: &[(usize, usize, &[usize])]) -> Result<Self> {
        check_rank(n)?;
        let mut c = Collection::empty(n);
        for &(i, j, el) in slots {
            if i == 0 || i > j || j >= n {
                return Err(Error::Range(format!("slot ({i},{j}) for n = {n}")));
            }
            c.set(i, j, IndexSet::new(n, el)?);
        }
        Ok(c)
    }

    /// Present slots in (i, j) lexicographic order.
    pub fn slots(&self) -> impl Iterator<Item = (RootIndex, IndexSet)> + '_ {
        (1..self.n).flat_map(move |i| {
            (i..self.n).filter_map(move |j| self.get(i, j).map(|s| (RootIndex::new(i, j), s)))
        })
    }

    pub fn is_complete(&self) -> bool {
        self.grid.len() == (self.n - 1) * (self.n - 1)
            && (1..self.n).all(|i| (i..self.n).all(|j| self.get(i, j).is_some()))
    }

    /// The diagonal S_{1,1}, ..., S_{n-1,n-1}.
    pub fn diagonal(&self) -> Result<BaseCellLabel> {
        let sets = (1..self.n).map(|i| self.at(i, i)).collect::<Result<Vec<_>>>()?;
        Ok(BaseCellLabel { n: self.n, sets })
    }
}

impl fmt::Display for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.slots().map(|(r, s)| format!("S{}{}={}", r.i, r.j, s)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Collection[n={}; {}]", self.n, self)
    }
}

impl Serialize for Collection {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = ser.serialize_map(None)?;
        for (r, s) in self.slots() {
            m.serialize_entry(&format!("{},{}", r.i, r.j), &s)?;
        }
        m.end()
    }
}

/// A chain S_1, ..., S_{n-1} labelling a cell of Fl^a_n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BaseCellLabel {
    pub n: usize,
    pub sets: Vec<IndexSet>,
}

impl BaseCellLabel {
    pub fn new(n: usize, sets: Vec<IndexSet>) -> Result<Self> {
        let l = BaseCellLabel { n, sets };
        l.validate()?;
        Ok(l)
    }

    pub fn from_elems(n: usize, sets: &[&[usize]]) -> Result<Self> {
        let sets = sets.iter().map(|s| IndexSet::new(n, s)).collect::<Result<Vec<_>>>()?;
        Self::new(n, sets)
    }

    pub fn validate(&self) -> Result<()> {
        check_rank(self.n)?;
        if self.sets.len() != self.n - 1 {
            return Err(Error::Precondition(format!("expected {} sets", self.n - 1)));
        }
        for (k, s) in self.sets.iter().enumerate() {
            let i = k + 1;
            if s.len() != i {
                return Err(Error::Malformed { i, j: i, reason: format!("size {} != {}", s.len(), i) });
            }
        }
        for k in 0..self.n.saturating_sub(2) {
            let i = k + 1;
            if !self.sets[k].is_subset(self.sets[k + 1].with(i + 1)) {
                return Err(Error::Precondition(format!("S_{i} not inside S_{} + {{{}}}", i + 1, i + 1)));
            }
        }
        Ok(())
    }
}

impl fmt::Display for BaseCellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sets.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The two candidates at a slot: `a` is the one chosen by the collection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ABPair {
    pub a: usize,
    pub b: usize,
}

/// Returns `(S_{i-1,j}, [c0, c1])` with c0 < c1 the two admissible new elements.
///
/// S_{0,j} is empty and at j = n-1 the upper bound is {1..i, n}.
pub fn candidates(c: &Collection, i: usize, j: usize) -> Result<(IndexSet, [usize; 2])> {
    let n = c.n();
    let prev = if i == 1 { IndexSet::empty(n) } else { c.at(i - 1, j)? };
    let upper = if j == n - 1 {
        IndexSet::interval(n, 1, i).with(n)
    } else {
        c.at(i, j + 1)?.with(j + 1)
    };
    if !prev.is_subset(upper) {
        return Err(Error::Malformed { i, j, reason: format!("{prev} not inside {upper}") });
    }
    let diff = upper.difference(prev);
    let el = diff.elements();
    if el.len() != 2 {
        return Err(Error::Malformed { i, j, reason: format!("candidate set {diff} is not a pair") });
    }
    Ok((prev, [el[0], el[1]]))
}

pub fn ab_pair(c: &Collection, slot: RootIndex) -> Result<ABPair> {
    let (i, j) = (slot.i, slot.j);
    let (prev, [c0, c1]) = candidates(c, i, j)?;
    let s = c.at(i, j)?;
    if s == prev.with(c0) {
        Ok(ABPair { a: c0, b: c1 })
    } else if s == prev.with(c1) {
        Ok(ABPair { a: c1, b: c0 })
    } else {
        Err(Error::Malformed { i, j, reason: format!("{s} matches neither candidate {c0} nor {c1}") })
    }
}

/// S'_{i,j} = (S_{i,j} \ {a}) u {b}.
pub fn swapped_set(c: &Collection, slot: RootIndex) -> Result<IndexSet> {
    let p = ab_pair(c, slot)?;
    Ok(c.at(slot.i, slot.j)?.without(p.a).with(p.b))
}

fn check_slot(c: &Collection, i: usize, j: usize, s: IndexSet) -> Result<()> {
    let n = c.n();
    if s.len() != i {
        return Err(Error::Malformed { i, j, reason: format!("|{s}| != {i}") });
    }
    if !s.is_subset(slot_support(n, i, j)) {
        return Err(Error::Malformed { i, j, reason: format!("{s} outside {{1..{i}}} u {{{}..{n}}}", j + 1) });
    }
    Ok(())
}

fn chain_holds(c: &Collection, i: usize, j: usize, s: IndexSet, present: impl Fn(usize, usize) -> bool) -> bool {
    let n = c.n();
    if i > 1 && present(i - 1, j) {
        if let Some(p) = c.get(i - 1, j) {
            if !p.is_subset(s) {
                return false;
            }
        }
    }
    if j < n - 1 && present(i, j + 1) {
        if let Some(u) = c.get(i, j + 1) {
            if !s.is_subset(u.with(j + 1)) {
                return false;
            }
        }
    }
    true
}

/// S_{i-1,j} in S_{i,j} in S_{i,j+1} u {j+1} at every slot.
///
/// Wrong sizes, supports or missing slots are reported as errors, not as `false`.
pub fn is_admissible(c: &Collection) -> Result<bool> {
    check_rank(c.n())?;
    let n = c.n();
    for i in 1..n {
        for j in i..n {
            check_slot(c, i, j, c.at(i, j)?)?;
        }
    }
    Ok(c.slots().all(|(r, s)| chain_holds(c, r.i, r.j, s, |_, _| true)))
}

/// Admissibility over the slots of P_d only. Slots outside P_d must be absent.
pub fn is_admissible_parabolic(c: &Collection, shape: &ParabolicShape) -> Result<bool> {
    if c.n() != shape.n {
        return Err(Error::Precondition("rank mismatch between collection and shape".into()));
    }
    for r in beta_order(shape.n)?.order {
        match (shape.contains_root(r), c.get(r.i, r.j)) {
            (true, Some(s)) => check_slot(c, r.i, r.j, s)?,
            (true, None) => return Err(Error::Malformed { i: r.i, j: r.j, reason: "slot missing".into() }),
            (false, Some(_)) => {
                return Err(Error::Malformed { i: r.i, j: r.j, reason: "slot outside P_d".into() })
            }
            (false, None) => {}
        }
    }
    let inside = |i, j| shape.contains_root(RootIndex::new(i, j));
    Ok(c.slots().all(|(r, s)| chain_holds(c, r.i, r.j, s, inside)))
}

/// Slot lists in beta order, for the full flag or a parabolic shape.
#[derive(Clone, Debug)]
pub struct SlotShape {
    pub n: usize,
    pub slots: Vec<RootIndex>,
}

impl SlotShape {
    pub fn full(n: usize) -> Result<Self> {
        Ok(SlotShape { n, slots: beta_order(n)?.order })
    }

    pub fn parabolic(shape: &ParabolicShape) -> Self {
        SlotShape { n: shape.n, slots: shape.roots() }
    }

    /// Number of binary choices, i.e. log2 of the number of collections.
    pub fn depth(&self) -> usize {
        self.slots.len()
    }

    /// The collection whose k-th choice (in beta order) is bit `depth-1-k` of `ord`.
    /// Bit 0 picks the smaller candidate.
    pub fn collection(&self, ord: u64) -> Collection {
        let m = self.depth();
        let mut c = Collection::empty(self.n);
        for (k, r) in self.slots.iter().enumerate() {
            let (prev, cand) = candidates(&c, r.i, r.j).expect("prefix built in beta order is admissible");
            let bit = ((ord >> (m - 1 - k)) & 1) as usize;
            c.set(r.i, r.j, prev.with(cand[bit]));
        }
        c
    }

    /// Inverse of `collection`.
    pub fn ordinal(&self, c: &Collection) -> Result<u64> {
        let mut ord = 0u64;
        for r in &self.slots {
            let p = ab_pair(c, *r)?;
            ord = (ord << 1) | u64::from(p.a > p.b);
        }
        Ok(ord)
    }

    pub fn iter(&self) -> CollectionIter {
        let end = if self.depth() == 0 { 1 } else { 1u64 << self.depth() };
        CollectionIter { shape: self.clone(), next: 0, end }
    }

    /// The sub-stream of collections whose first `prefix_len` choices spell `prefix`.
    pub fn chunk(&self, prefix_len: usize, prefix: u64) -> CollectionIter {
        let m = self.depth();
        let p = prefix_len.min(m);
        let lo = prefix << (m - p);
        CollectionIter { shape: self.clone(), next: lo, end: lo + (1u64 << (m - p)) }
    }
}

/// Depth-first stream over admissible collections, smaller candidate first.
pub struct CollectionIter {
    shape: SlotShape,
    next: u64,
    end: u64,
}

impl Iterator for CollectionIter {
    type Item = Collection;

    fn next(&mut self) -> Option<Collection> {
        if self.next >= self.end {
            return None;
        }
        let c = self.shape.collection(self.next);
        self.next += 1;
        Some(c)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = (self.end - self.next) as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for CollectionIter {}

pub fn enumerate_admissible(n: usize) -> Result<CollectionIter> {
    if n > 12 {
        return Err(Error::Capacity(format!("enumeration of 2^{} collections", num_roots(n))));
    }
    Ok(SlotShape::full(n)?.iter())
}

pub fn enumerate_admissible_parabolic(shape: &ParabolicShape) -> Result<CollectionIter> {
    let s = SlotShape::parabolic(shape);
    if s.depth() > 63 {
        return Err(Error::Capacity(format!("enumeration of 2^{} collections", s.depth())));
    }
    Ok(s.iter())
}

fn single(s: IndexSet, i: usize, j: usize) -> Result<usize> {
    s.single().ok_or_else(|| Error::Malformed { i, j, reason: format!("{s} is not a singleton") })
}

/// g_{i,j}: whether slot (i,j) contributes a coordinate to the cell C(S).
pub fn g_term(c: &Collection, i: usize, j: usize) -> Result<u32> {
    let n = c.n();
    let s = c.at(i, j)?;
    let v = if i == 1 && j == n - 1 {
        s == IndexSet::interval(n, 1, 1)
    } else if i == 1 {
        single(s, i, j)? != j + 1
    } else if j == n - 1 {
        single(s.difference(c.at(i - 1, j)?), i, j)? == i
    } else if !s.contains(j + 1) {
        true
    } else {
        let l = single(s.difference(c.at(i - 1, j)?), i, j)? as i64;
        let m = single(c.at(i, j + 1)?.difference(s), i, j)? as i64;
        let jj = j as i64;
        wrap(l - jj, n) > wrap(m - jj, n)
    };
    Ok(v as u32)
}

/// h_{i,j} for i < j: whether slot (i,j) contributes a coordinate to the
/// fiber of C(S) over its diagonal cell.
///
/// h_{i,j} = 1 exactly when j lies in S_{i,j-1} and wrap(m-j) < wrap(l-j), with
/// l = S_{i,j} \ S_{i,j-1} and m = S_{i+1,j} \ S_{i,j}.
pub fn h_term(c: &Collection, i: usize, j: usize) -> Result<u32> {
    let n = c.n();
    let left = c.at(i, j - 1)?;
    if !left.contains(j) {
        return Ok(0);
    }
    let s = c.at(i, j)?;
    let l = single(s.difference(left), i, j)? as i64;
    let m = single(c.at(i + 1, j)?.difference(s), i, j)? as i64;
    let jj = j as i64;
    Ok((wrap(m - jj, n) < wrap(l - jj, n)) as u32)
}

/// Dimension of the cell C(S): the sum of g_{i,j} over the present slots.
pub fn cell_dimension(c: &Collection) -> Result<u32> {
    c.slots().map(|(r, _)| g_term(c, r.i, r.j)).sum()
}

/// dim C(S) - dim C(diagonal), the sum of h_{i,j} over 1 <= i < j <= n-1.
pub fn relative_dimension(c: &Collection) -> Result<u32> {
    let n = c.n();
    let mut t = 0;
    for i in 1..n {
        for j in i + 1..n {
            t += h_term(c, i, j)?;
        }
    }
    Ok(t)
}

/// Poincare polynomial coefficients: entry k counts collections with cell dimension k.
pub fn poincare_polynomial(n: usize) -> Result<Vec<u64>> {
    let mut p = vec![0u64; num_roots(n) + 1];
    for c in enumerate_admissible(n)? {
        p[cell_dimension(&c)? as usize] += 1;
    }
    Ok(p)
}

/// Coefficients of (1+t)^m.
pub fn binomial_row(m: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for _ in 0..m {
        let mut next = vec![1u64; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    row
}

/// All chains S_1, ..., S_{n-1} with |S_i| = i and S_i in S_{i+1} u {i+1}.
pub fn enumerate_base_cells(n: usize) -> Result<Vec<BaseCellLabel>> {
    check_rank(n)?;
    if n > 16 {
        return Err(Error::Capacity(format!("base cells for n = {n}")));
    }
    let by_size: Vec<Vec<IndexSet>> = (0..=n).map(|k| IndexSet::subsets_of_size(n, k)).collect();
    let mut out = Vec::new();
    let mut stack: Vec<IndexSet> = Vec::with_capacity(n);
    fn rec(n: usize, by_size: &[Vec<IndexSet>], stack: &mut Vec<IndexSet>, out: &mut Vec<BaseCellLabel>) {
        let i = stack.len() + 1;
        if i == n {
            out.push(BaseCellLabel { n, sets: stack.clone() });
            return;
        }
        for &t in &by_size[i] {
            if let Some(&p) = stack.last() {
                // S_{i-1} in S_i u {i}
                if !p.is_subset(t.with(i)) {
                    continue;
                }
            }
            stack.push(t);
            rec(n, by_size, stack, out);
            stack.pop();
        }
    }
    rec(n, &by_size, &mut stack, &mut out);
    Ok(out)
}

/// The first admissible collection, in enumeration order, with the given diagonal.
pub fn first_completion(label: &BaseCellLabel) -> Result<Collection> {
    label.validate()?;
    let shape = SlotShape::full(label.n)?;
    fn rec(shape: &SlotShape, k: usize, c: &mut Collection, label: &BaseCellLabel) -> bool {
        if k == shape.depth() {
            return true;
        }
        let r = shape.slots[k];
        let (prev, cand) = candidates(c, r.i, r.j).expect("admissible prefix");
        for x in cand {
            let s = prev.with(x);
            if r.is_diagonal() && s != label.sets[r.i - 1] {
                continue;
            }
            c.set(r.i, r.j, s);
            if rec(shape, k + 1, c, label) {
                return true;
            }
        }
        c.clear(r.i, r.j);
        false
    }
    let mut c = Collection::empty(label.n);
    if rec(&shape, 0, &mut c, label) {
        Ok(c)
    } else {
        Err(Error::Precondition(format!("chain {label} has no admissible completion")))
    }
}

/// Dimension of the cell of Fl^a_n labelled by the chain, read off from its first completion.
pub fn base_cell_dimension(label: &BaseCellLabel) -> Result<u32> {
    let c = first_completion(label)?;
    Ok(cell_dimension(&c)? - relative_dimension(&c)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodimOneCell {
    pub a: usize,
    pub b: usize,
    pub cell: Collection,
}

/// For each 1 <= a <= b <= n-1: S_{i,j} = {1..i} if i < a or j > b, else {1..i} \ {a} u {b+1}.
pub fn codim_one_cells(n: usize) -> Result<Vec<CodimOneCell>> {
    check_rank(n)?;
    let mut out = Vec::new();
    for a in 1..n {
        for b in a..n {
            let mut c = Collection::empty(n);
            for i in 1..n {
                for j in i..n {
                    let base = IndexSet::interval(n, 1, i);
                    let s = if i < a || j > b { base } else { base.without(a).with(b + 1) };
                    c.set(i, j, s);
                }
            }
            out.push(CodimOneCell { a, b, cell: c });
        }
    }
    Ok(out)
}
