//! Streaming census of fiber dimensions of pi_n over the cells of Fl^a_n.
//!
//! Every admissible collection is visited once by a depth-first walk along
//! the beta order. Cell and relative dimensions are accumulated term by term
//! on the way down, so a leaf costs one hash-map update keyed by the packed
//! diagonal.

use super::{beta_order, num_roots, BaseCellLabel, Collection, IndexSet, SlotShape};
use crate::error::{check_rank, Error, Result};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

const NONE: usize = usize::MAX;

/// Largest rank accepted by the census (2^36 leaves at n = 9).
pub const CENSUS_MAX_N: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Small,
    Semismall,
    NotSemismall,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Small => "small",
            Verdict::Semismall => "semismall",
            Verdict::NotSemismall => "not-semismall",
        })
    }
}

/// Per base cell: its dimension, the largest fiber cell dimension above it,
/// and the ordinal of the first collection reaching that maximum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseCellRecord {
    pub label: BaseCellLabel,
    pub base_dim: u32,
    pub fiber_dim: u32,
    pub ordinal: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub fiber_dim: u32,
    pub base_cells: usize,
    pub max_base_dim: u32,
    /// max over the stratum of base_dim + 2 fiber_dim - M
    pub max_excess: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub base: BaseCellLabel,
    pub base_dim: u32,
    pub fiber_dim: u32,
    pub excess: i64,
    pub completion: Collection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallnessReport {
    pub n: usize,
    pub dim: usize,
    pub collections: u64,
    pub base_cells: usize,
    pub verdict: Verdict,
    /// max of base_dim + 2 fiber_dim - M over base cells with positive fiber dimension
    pub max_excess: Option<i64>,
    pub strata: Vec<Stratum>,
    /// number of base cells violating the next stronger property
    pub witness_count: usize,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Copy)]
struct SlotInfo {
    i: u32,
    j: u32,
    prev: usize,
    up: usize,
    // h_{i-1,j} completes here: positions of S_{i-1,j} and S_{i-1,j-1}
    h_same: usize,
    h_left: usize,
}

#[derive(Clone, Copy)]
struct Entry {
    base: u32,
    fiber: u32,
    ord: u64,
}

#[derive(Default)]
struct Acc {
    map: FxHashMap<u128, Entry>,
    leaves: u64,
    inconsistent: u64,
}

impl Acc {
    #[inline]
    fn record(&mut self, key: u128, base: u32, fiber: u32, ord: u64) {
        self.leaves += 1;
        match self.map.entry(key) {
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(Entry { base, fiber, ord });
            }
            std::collections::hash_map::Entry::Occupied(mut o) => {
                let e = o.get_mut();
                if e.base != base {
                    self.inconsistent += 1;
                }
                if fiber > e.fiber || (fiber == e.fiber && ord < e.ord) {
                    e.fiber = fiber;
                    e.ord = ord;
                }
            }
        }
    }

    fn merge(self, other: Acc) -> Acc {
        let (mut big, small) = if self.map.len() >= other.map.len() { (self, other) } else { (other, self) };
        big.leaves += small.leaves;
        big.inconsistent += small.inconsistent;
        for (k, e) in small.map {
            big.record_entry(k, e);
        }
        big
    }

    fn record_entry(&mut self, key: u128, e: Entry) {
        match self.map.entry(key) {
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(e);
            }
            std::collections::hash_map::Entry::Occupied(mut o) => {
                let cur = o.get_mut();
                if cur.base != e.base {
                    self.inconsistent += 1;
                }
                if e.fiber > cur.fiber || (e.fiber == cur.fiber && e.ord < cur.ord) {
                    cur.fiber = e.fiber;
                    cur.ord = e.ord;
                }
            }
        }
    }
}

struct Walker {
    n: u32,
    m: usize,
    slots: Vec<SlotInfo>,
    diag_pos: Vec<usize>,
}

#[inline]
fn wrap(x: i32, n: u32) -> i32 {
    if x > 0 {
        x
    } else {
        x + n as i32
    }
}

#[inline]
fn elem(bit: u32) -> i32 {
    bit.trailing_zeros() as i32 + 1
}

impl Walker {
    fn new(n: usize) -> Self {
        let order = beta_order(n).expect("rank checked").order;
        let pos = |i: usize, j: usize| -> usize {
            if i == 0 || i > j || j >= n {
                NONE
            } else {
                order.iter().position(|r| r.i == i && r.j == j).unwrap()
            }
        };
        let slots = order
            .iter()
            .map(|r| {
                let (i, j) = (r.i, r.j);
                let (h_same, h_left) = if i >= 2 { (pos(i - 1, j), pos(i - 1, j - 1)) } else { (NONE, NONE) };
                SlotInfo {
                    i: i as u32,
                    j: j as u32,
                    prev: if i > 1 { pos(i - 1, j) } else { NONE },
                    up: if j < n - 1 { pos(i, j + 1) } else { NONE },
                    h_same,
                    h_left,
                }
            })
            .collect();
        let diag_pos = (1..n).map(|i| pos(i, i)).collect();
        Walker { n: n as u32, m: order.len(), slots, diag_pos }
    }

    /// Candidate pair (lower, higher) and the upper set at slot k.
    #[inline]
    fn cands(&self, k: usize, sets: &[u32]) -> (u32, u32, u32) {
        let s = &self.slots[k];
        let prev = if s.prev == NONE { 0 } else { sets[s.prev] };
        let upper = if s.up == NONE { ((1u32 << s.i) - 1) | (1u32 << (self.n - 1)) } else { sets[s.up] | (1u32 << s.j) };
        let diff = upper & !prev;
        let lo = diff & diff.wrapping_neg();
        (prev, lo, diff ^ lo)
    }

    /// (g_{i,j}, h completed at this slot) for the choice `bit` added to `prev`.
    #[inline]
    fn terms(&self, k: usize, sets: &[u32], prev: u32, bit: u32) -> (u32, u32) {
        let s = &self.slots[k];
        let (i, j, n) = (s.i, s.j, self.n);
        let set = prev | bit;
        let l = elem(bit);
        let g = if i == 1 && j == n - 1 {
            l == 1
        } else if i == 1 {
            l != j as i32 + 1
        } else if j == n - 1 {
            l == i as i32
        } else if set & (1 << j) == 0 {
            true
        } else {
            let m = elem(sets[s.up] & !set);
            wrap(l - j as i32, n) > wrap(m - j as i32, n)
        };
        let h = if s.h_same == NONE {
            false
        } else {
            let left = sets[s.h_left];
            if left & (1 << (j - 1)) == 0 {
                false
            } else {
                let same = sets[s.h_same];
                let hl = elem(same & !left);
                let hm = elem(set & !same);
                wrap(hm - j as i32, n) < wrap(hl - j as i32, n)
            }
        };
        (g as u32, h as u32)
    }

    fn key(&self, sets: &[u32]) -> u128 {
        let mut key = 0u128;
        for (t, &p) in self.diag_pos.iter().enumerate() {
            key |= (sets[p] as u128) << (self.n as usize * t);
        }
        key
    }

    fn descend(&self, k: usize, sets: &mut [u32], g: u32, h: u32, ord: u64, acc: &mut Acc) {
        if k == self.m {
            acc.record(self.key(sets), g - h, h, ord);
            return;
        }
        let (prev, lo, hi) = self.cands(k, sets);
        for (b, bit) in [(0u64, lo), (1u64, hi)] {
            let (dg, dh) = self.terms(k, sets, prev, bit);
            sets[k] = prev | bit;
            self.descend(k + 1, sets, g + dg, h + dh, (ord << 1) | b, acc);
        }
    }

    fn run_chunk(&self, prefix_len: usize, prefix: u64, acc: &mut Acc) {
        let mut sets = [0u32; 64];
        let (mut g, mut h) = (0, 0);
        for k in 0..prefix_len {
            let b = (prefix >> (prefix_len - 1 - k)) & 1;
            let (prev, lo, hi) = self.cands(k, &sets);
            let bit = if b == 0 { lo } else { hi };
            let (dg, dh) = self.terms(k, &sets, prev, bit);
            sets[k] = prev | bit;
            g += dg;
            h += dh;
        }
        self.descend(prefix_len, &mut sets, g, h, prefix, acc);
    }

    fn unpack(&self, key: u128) -> BaseCellLabel {
        let n = self.n as usize;
        let sets = (0..n - 1)
            .map(|t| IndexSet::from_mask(n, ((key >> (n * t)) as u64) & ((1u64 << n) - 1)))
            .collect();
        BaseCellLabel { n, sets }
    }
}

fn run_census(n: usize, threads: usize) -> Result<(Vec<BaseCellRecord>, u64)> {
    check_rank(n)?;
    if n > CENSUS_MAX_N {
        return Err(Error::Capacity(format!("census supports n <= {CENSUS_MAX_N}")));
    }
    let w = Walker::new(n);
    let prefix_len = w.m.min(12);
    let chunks = 1u64 << prefix_len;
    let work = || {
        (0..chunks)
            .into_par_iter()
            .fold(Acc::default, |mut acc, c| {
                w.run_chunk(prefix_len, c, &mut acc);
                acc
            })
            .reduce(Acc::default, Acc::merge)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let acc = pool.install(work);
    if acc.inconsistent > 0 {
        return Err(Error::Internal(format!(
            "base cell dimension depends on the completion ({} mismatches)",
            acc.inconsistent
        )));
    }
    let mut records: Vec<BaseCellRecord> = acc
        .map
        .into_iter()
        .map(|(k, e)| BaseCellRecord { label: w.unpack(k), base_dim: e.base, fiber_dim: e.fiber, ordinal: e.ord })
        .collect();
    records.sort_by(|a, b| a.label.cmp(&b.label));
    Ok((records, acc.leaves))
}

/// One record per cell of Fl^a_n, sorted by label.
pub fn base_cell_census(n: usize, threads: usize) -> Result<Vec<BaseCellRecord>> {
    run_census(n, threads).map(|(r, _)| r)
}

/// Semismall iff base_dim + 2 fiber_dim <= M for every base cell; small iff
/// moreover the inequality is strict whenever fiber_dim > 0.
pub fn smallness_report(n: usize, threads: usize, max_witnesses: usize) -> Result<SmallnessReport> {
    let (records, leaves) = run_census(n, threads)?;
    let m = num_roots(n) as i64;
    let excess = |r: &BaseCellRecord| r.base_dim as i64 + 2 * r.fiber_dim as i64 - m;

    let max_excess = records.iter().filter(|r| r.fiber_dim > 0).map(excess).max();
    let verdict = match max_excess {
        Some(e) if e > 0 => Verdict::NotSemismall,
        Some(0) => Verdict::Semismall,
        _ => Verdict::Small,
    };

    let mut strata: Vec<Stratum> = Vec::new();
    for r in &records {
        let e = excess(r);
        match strata.iter_mut().find(|s| s.fiber_dim == r.fiber_dim) {
            Some(s) => {
                s.base_cells += 1;
                s.max_base_dim = s.max_base_dim.max(r.base_dim);
                s.max_excess = s.max_excess.max(e);
            }
            None => strata.push(Stratum { fiber_dim: r.fiber_dim, base_cells: 1, max_base_dim: r.base_dim, max_excess: e }),
        }
    }
    strata.sort_by_key(|s| s.fiber_dim);

    let violates = |r: &BaseCellRecord| match verdict {
        Verdict::NotSemismall => excess(r) > 0,
        Verdict::Semismall => r.fiber_dim > 0 && excess(r) == 0,
        Verdict::Small => false,
    };
    let mut bad: Vec<&BaseCellRecord> = records.iter().filter(|r| violates(r)).collect();
    bad.sort_by(|a, b| excess(b).cmp(&excess(a)).then(a.ordinal.cmp(&b.ordinal)));
    let shape = SlotShape::full(n)?;
    let witnesses = bad
        .iter()
        .take(max_witnesses)
        .map(|r| Witness {
            base: r.label.clone(),
            base_dim: r.base_dim,
            fiber_dim: r.fiber_dim,
            excess: excess(r),
            completion: shape.collection(r.ordinal),
        })
        .collect();

    Ok(SmallnessReport {
        n,
        dim: m as usize,
        collections: leaves,
        base_cells: records.len(),
        verdict,
        max_excess,
        strata,
        witness_count: bad.len(),
        witnesses,
    })
}
