//! Extended weights, Laurent polynomials in z_1..z_{n-1}, q over exact
//! rationals, and the fixed-point sum for PBW-graded characters.

use crate::combinatorics::{
    ab_pair, candidates, num_roots, Collection, IndexSet, RootIndex, SlotShape,
};
use crate::error::{check_rank, Error, Result};
use crate::linalg::{fmt_q, Q};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// m_1 omega_1 + ... + m_{n-1} omega_{n-1} + degree * d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExtendedWeight {
    pub fundamental: Vec<i64>,
    pub degree: i64,
}

impl ExtendedWeight {
    pub fn zero(n: usize) -> Self {
        ExtendedWeight { fundamental: vec![0; n - 1], degree: 0 }
    }

    /// omega_k, with omega_0 = omega_n = 0.
    pub fn omega(n: usize, k: usize) -> Self {
        let mut w = Self::zero(n);
        if k >= 1 && k < n {
            w.fundamental[k - 1] = 1;
        }
        w
    }

    /// epsilon_k = omega_k - omega_{k-1}, the weight of w_k.
    pub fn epsilon(n: usize, k: usize) -> Self {
        Self::omega(n, k).sub(&Self::omega(n, k - 1))
    }

    pub fn add(&self, o: &Self) -> Self {
        ExtendedWeight {
            fundamental: self.fundamental.iter().zip(&o.fundamental).map(|(a, b)| a + b).collect(),
            degree: self.degree + o.degree,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        ExtendedWeight { fundamental: self.fundamental.iter().map(|a| a * k).collect(), degree: self.degree * k }
    }

    pub fn to_monomial(&self) -> LaurentMonomial {
        LaurentMonomial {
            q: self.degree as i32,
            z: self.fundamental.iter().map(|&a| a as i32).collect(),
        }
    }
}

/// lambda = l_1 omega_1 + ... + l_{n-1} omega_{n-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DominantWeight {
    pub ell: Vec<u32>,
}

impl DominantWeight {
    pub fn new(n: usize, ell: Vec<u32>) -> Result<Self> {
        check_rank(n)?;
        if ell.len() != n - 1 {
            return Err(Error::Range(format!("lambda needs {} entries, got {}", n - 1, ell.len())));
        }
        Ok(DominantWeight { ell })
    }

    pub fn zero(n: usize) -> Self {
        DominantWeight { ell: vec![0; n - 1] }
    }

    pub fn fundamental(n: usize, d: usize) -> Result<Self> {
        if d == 0 || d >= n {
            return Err(Error::Range(format!("omega_{d} for n = {n}")));
        }
        let mut ell = vec![0; n - 1];
        ell[d - 1] = 1;
        Ok(DominantWeight { ell })
    }

    pub fn n(&self) -> usize {
        self.ell.len() + 1
    }

    pub fn is_zero(&self) -> bool {
        self.ell.iter().all(|&l| l == 0)
    }
}

/// z_1^{z_1} ... z_{n-1}^{z_{n-1}} q^q. Ordered lexicographically on (q, z).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LaurentMonomial {
    pub q: i32,
    pub z: Vec<i32>,
}

impl LaurentMonomial {
    pub fn one(nvars: usize) -> Self {
        LaurentMonomial { q: 0, z: vec![0; nvars] }
    }

    pub fn new(z: Vec<i32>, q: i32) -> Self {
        LaurentMonomial { q, z }
    }

    pub fn nvars(&self) -> usize {
        self.z.len()
    }

    pub fn is_one(&self) -> bool {
        self.q == 0 && self.z.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        LaurentMonomial { q: self.q + o.q, z: self.z.iter().zip(&o.z).map(|(a, b)| a + b).collect() }
    }

    pub fn inv(&self) -> Self {
        LaurentMonomial { q: -self.q, z: self.z.iter().map(|a| -a).collect() }
    }

    pub fn pow(&self, k: i32) -> Self {
        LaurentMonomial { q: self.q * k, z: self.z.iter().map(|a| a * k).collect() }
    }

    /// Compares with the constant monomial 1 in the (q, z) order.
    pub fn cmp_one(&self) -> std::cmp::Ordering {
        self.cmp(&Self::one(self.nvars()))
    }

    pub fn eval(&self, z: &[Q], q: &Q) -> Q {
        let mut v = Q::one();
        for (x, &e) in z.iter().zip(&self.z) {
            if e != 0 {
                v *= Pow::pow(x.clone(), e);
            }
        }
        if self.q != 0 {
            v *= Pow::pow(q.clone(), self.q);
        }
        v
    }
}

impl fmt::Display for LaurentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let single = self.z.len() == 1;
        for (k, &e) in self.z.iter().enumerate() {
            let v = if single { "z".to_string() } else { format!("z{}", k + 1) };
            match e {
                0 => {}
                1 => parts.push(v),
                _ => parts.push(format!("{v}^{e}")),
            }
        }
        match self.q {
            0 => {}
            1 => parts.push("q".into()),
            e => parts.push(format!("q^{e}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Debug for LaurentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<LaurentMonomial, Q>,
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(LaurentMonomial::one(nvars), Q::one())
    }

    pub fn monomial(m: LaurentMonomial, c: Q) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (LaurentMonomial, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LaurentMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &LaurentMonomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: LaurentMonomial, c: Q) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul_monomial(&self, x: &LaurentMonomial) -> Self {
        LaurentPolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.mul(x), c.clone())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                r.add_term(a.mul(b), ca * cb);
            }
        }
        r
    }

    pub fn eval(&self, z: &[Q], q: &Q) -> Q {
        self.terms.iter().map(|(m, c)| c * m.eval(z, q)).fold(Q::zero(), |a, b| a + b)
    }

    /// Exact quotient by (1 - x); errors if (1 - x) does not divide.
    pub fn div_one_minus(&self, x: &LaurentMonomial) -> Result<Self> {
        use std::cmp::Ordering::*;
        match x.cmp_one() {
            Equal => Err(Error::Internal("division by 1 - 1".into())),
            // P / (1 - x) = -x^{-1} P / (1 - x^{-1})
            Less => {
                let xi = x.inv();
                Ok(self.div_one_minus_above_one(&xi)?.mul_monomial(&xi).scale(&-Q::one()))
            }
            Greater => self.div_one_minus_above_one(x),
        }
    }

    // x > 1: peel off the smallest remaining term; every quotient term stays
    // below max(P) when the division is exact.
    fn div_one_minus_above_one(&self, x: &LaurentMonomial) -> Result<Self> {
        let Some(top) = self.terms.keys().next_back().cloned() else {
            return Ok(Self::zero(self.nvars));
        };
        let mut rem = self.terms.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((m, c)) = rem.pop_first() {
            if m > top {
                return Err(Error::Internal(format!("not divisible by 1 - {x}")));
            }
            let mx = m.mul(x);
            match rem.entry(mx) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    *o.get_mut() += &c;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
            quot.terms.insert(m, c);
        }
        Ok(quot)
    }

    /// Sets q = 1.
    pub fn specialize_q1(&self) -> Self {
        let mut r = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            r.add_term(LaurentMonomial { q: 0, z: m.z.clone() }, c.clone());
        }
        r
    }

    pub fn min_q(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.q).min()
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            if m.is_one() {
                write!(f, "{sign}{a}")?;
            } else if a.is_one() {
                write!(f, "{sign}{m}")?;
            } else {
                write!(f, "{sign}{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One canonical character term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub z: Vec<i32>,
    pub q: i32,
    pub coeff: String,
}

impl LaurentPolynomial {
    /// Terms sorted by the (q, z) order, coefficients as `p/q` strings.
    pub fn canonical_terms(&self) -> Vec<TermJson> {
        self.terms.iter().map(|(m, c)| TermJson { z: m.z.clone(), q: m.q, coeff: fmt_q(c) }).collect()
    }
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.canonical_terms().serialize(s)
    }
}

/// numerator / prod (1 - factor).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalTerm {
    pub numerator: LaurentMonomial,
    pub denominator_factors: Vec<LaurentMonomial>,
}

impl RationalTerm {
    /// Equality up to the order of the denominator factors.
    pub fn same_as(&self, o: &Self) -> bool {
        let mut a = self.denominator_factors.clone();
        let mut b = o.denominator_factors.clone();
        a.sort();
        b.sort();
        self.numerator == o.numerator && a == b
    }

    pub fn eval(&self, z: &[Q], q: &Q) -> Result<Q> {
        let mut den = Q::one();
        for f in &self.denominator_factors {
            let v = Q::one() - f.eval(z, q);
            if v.is_zero() {
                return Err(Error::VanishingDenominator);
            }
            den *= v;
        }
        Ok(self.numerator.eval(z, q) / den)
    }
}

impl fmt::Display for RationalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den: Vec<String> = self.denominator_factors.iter().map(|m| format!("(1 - {m})")).collect();
        write!(f, "{} / ({})", self.numerator, den.join(""))
    }
}

/// The PBW-graded character sum_k q^k ch V_lambda(k).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct QCharacter {
    pub polynomial: LaurentPolynomial,
}

impl QCharacter {
    /// Positive integer coefficients, no negative q powers, and q^0 part e^lambda.
    pub fn validate(&self, lam: &DominantWeight) -> Result<()> {
        let p = &self.polynomial;
        for (m, c) in p.terms() {
            if !c.is_integer() || !c.is_positive() {
                return Err(Error::Internal(format!("coefficient {c} at {m} is not a positive integer")));
            }
            if m.q < 0 {
                return Err(Error::Internal(format!("negative q power at {m}")));
            }
        }
        let top = LaurentMonomial::new(lam.ell.iter().map(|&l| l as i32).collect(), 0);
        let deg0: Vec<_> = p.terms().filter(|(m, _)| m.q == 0).collect();
        if deg0.len() != 1 || deg0[0].0 != &top || !deg0[0].1.is_one() {
            return Err(Error::Internal(format!("degree zero part is not e^lambda = {top}")));
        }
        Ok(())
    }

    pub fn specialize_q1(&self) -> LaurentPolynomial {
        self.polynomial.specialize_q1()
    }

    /// Dimensions of the graded pieces, index = power of q.
    pub fn graded_dimensions(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        for (m, c) in self.polynomial.terms() {
            let k = m.q.max(0) as usize;
            if out.len() <= k {
                out.resize(k + 1, 0);
            }
            out[k] += c.to_integer().to_u64().unwrap_or(0);
        }
        out
    }

    pub fn dimension(&self) -> u64 {
        self.graded_dimensions().iter().sum()
    }
}

pub fn specialize_q1(ch: &QCharacter) -> LaurentPolynomial {
    ch.specialize_q1()
}

pub fn graded_dimensions(ch: &QCharacter) -> Vec<u64> {
    ch.graded_dimensions()
}

/// gamma(S) = sum_{l in S} (omega_l - omega_{l-1}) + #{l in S : l > i} d.
pub fn gamma(n: usize, s: IndexSet, slot: RootIndex) -> ExtendedWeight {
    let mut w = ExtendedWeight::zero(n);
    for l in s.iter() {
        w = w.add(&ExtendedWeight::epsilon(n, l));
    }
    w.degree = s.count_above(slot.i) as i64;
    w
}

/// sum_i l_i gamma(S_{i,i}).
pub fn gamma_lambda(c: &Collection, lam: &DominantWeight) -> Result<ExtendedWeight> {
    let n = c.n();
    if lam.n() != n {
        return Err(Error::Precondition("lambda has the wrong length".into()));
    }
    let mut w = ExtendedWeight::zero(n);
    for i in 1..n {
        let s = c.at(i, i)?;
        w = w.add(&gamma(n, s, RootIndex::new(i, i)).scale(lam.ell[i - 1] as i64));
    }
    Ok(w)
}

/// The summand e^{gamma_lambda(S)} / prod_{i<=j} (1 - e^{gamma(S'_{i,j}) - gamma(S_{i,j})}).
pub fn abl_term(c: &Collection, lam: &DominantWeight) -> Result<RationalTerm> {
    let n = c.n();
    let numerator = gamma_lambda(c, lam)?.to_monomial();
    let mut denominator_factors = Vec::with_capacity(num_roots(n));
    for slot in SlotShape::full(n)?.slots {
        let s = c.at(slot.i, slot.j)?;
        let p = ab_pair(c, slot)?;
        let s2 = s.without(p.a).with(p.b);
        denominator_factors.push(gamma(n, s2, slot).sub(&gamma(n, s, slot)).to_monomial());
    }
    Ok(RationalTerm { numerator, denominator_factors })
}

/// Default guard for the exact path.
pub const EXACT_MAX_N: usize = 5;
/// Default guard for the evaluation path.
pub const EVAL_MAX_N: usize = 7;

// Parallel split depth for the tower recursions.
const SPLIT_DEPTH: usize = 6;

/// Tower recursion along the beta order. The subtree sum below a node is
/// the character of a virtual module on a smooth fiber, hence a Laurent
/// polynomial, so each step
///     T = (A_0 - x A_1) / (1 - x),   x = e^{gamma(S_1) - gamma(S_0)}
/// is an exact division.
fn tower_exact(
    shape: &SlotShape,
    k: usize,
    c: &mut Collection,
    lam: &DominantWeight,
) -> Result<LaurentPolynomial> {
    let n = shape.n;
    if k == shape.depth() {
        return Ok(LaurentPolynomial::monomial(gamma_lambda(c, lam)?.to_monomial(), Q::one()));
    }
    let r = shape.slots[k];
    let (prev, [c0, c1]) = candidates(c, r.i, r.j)?;
    let (s0, s1) = (prev.with(c0), prev.with(c1));
    let x = gamma(n, s1, r).sub(&gamma(n, s0, r)).to_monomial();
    let (a0, a1) = if k < SPLIT_DEPTH {
        let mut c0c = c.clone();
        let mut c1c = c.clone();
        c0c.set(r.i, r.j, s0);
        c1c.set(r.i, r.j, s1);
        rayon::join(|| tower_exact(shape, k + 1, &mut c0c, lam), || tower_exact(shape, k + 1, &mut c1c, lam))
    } else {
        c.set(r.i, r.j, s0);
        let a0 = tower_exact(shape, k + 1, c, lam);
        c.set(r.i, r.j, s1);
        let a1 = tower_exact(shape, k + 1, c, lam);
        c.clear(r.i, r.j);
        (a0, a1)
    };
    let num = a0?.sub(&a1?.mul_monomial(&x));
    num.div_one_minus(&x)
}

/// The q-character as a Laurent polynomial, summed exactly over all 2^M fixed points.
pub fn abl_character_exact(n: usize, lam: &DominantWeight) -> Result<QCharacter> {
    abl_character_exact_guarded(n, lam, EXACT_MAX_N)
}

pub fn abl_character_exact_guarded(n: usize, lam: &DominantWeight, max_n: usize) -> Result<QCharacter> {
    check_rank(n)?;
    if lam.n() != n {
        return Err(Error::Precondition("lambda has the wrong length".into()));
    }
    if n > max_n {
        return Err(Error::Capacity(format!(
            "exact summation is limited to n <= {max_n}; use the evaluation path"
        )));
    }
    let shape = SlotShape::full(n)?;
    let poly = tower_exact(&shape, 0, &mut Collection::empty(n), lam)?;
    let ch = QCharacter { polynomial: poly };
    ch.validate(lam)?;
    Ok(ch)
}

fn tower_eval(shape: &SlotShape, k: usize, c: &mut Collection, lam: &DominantWeight, z: &[Q], q: &Q) -> Result<Q> {
    let n = shape.n;
    if k == shape.depth() {
        return Ok(gamma_lambda(c, lam)?.to_monomial().eval(z, q));
    }
    let r = shape.slots[k];
    let (prev, [c0, c1]) = candidates(c, r.i, r.j)?;
    let (s0, s1) = (prev.with(c0), prev.with(c1));
    let x = gamma(n, s1, r).sub(&gamma(n, s0, r)).to_monomial().eval(z, q);
    let den = Q::one() - &x;
    if den.is_zero() {
        return Err(Error::VanishingDenominator);
    }
    let (a0, a1) = if k < SPLIT_DEPTH {
        let mut c0c = c.clone();
        let mut c1c = c.clone();
        c0c.set(r.i, r.j, s0);
        c1c.set(r.i, r.j, s1);
        rayon::join(|| tower_eval(shape, k + 1, &mut c0c, lam, z, q), || tower_eval(shape, k + 1, &mut c1c, lam, z, q))
    } else {
        c.set(r.i, r.j, s0);
        let a0 = tower_eval(shape, k + 1, c, lam, z, q);
        c.set(r.i, r.j, s1);
        let a1 = tower_eval(shape, k + 1, c, lam, z, q);
        c.clear(r.i, r.j);
        (a0, a1)
    };
    Ok((a0? - x * a1?) / den)
}

/// Exact value of the fixed-point sum at z_1..z_{n-1}, q.
pub fn abl_character_eval(n: usize, lam: &DominantWeight, z: &[Q], q: &Q) -> Result<Q> {
    abl_character_eval_guarded(n, lam, z, q, EVAL_MAX_N)
}

pub fn abl_character_eval_guarded(n: usize, lam: &DominantWeight, z: &[Q], q: &Q, max_n: usize) -> Result<Q> {
    check_rank(n)?;
    if lam.n() != n || z.len() != n - 1 {
        return Err(Error::Precondition("lambda or point has the wrong length".into()));
    }
    if n > max_n {
        return Err(Error::Capacity(format!("evaluation is limited to n <= {max_n}")));
    }
    if q.is_zero() || z.iter().any(|x| x.is_zero()) {
        return Err(Error::Precondition("evaluation point must have nonzero coordinates".into()));
    }
    let shape = SlotShape::full(n)?;
    tower_eval(&shape, 0, &mut Collection::empty(n), lam, z, q)
}

/// Term-by-term evaluation of the fixed-point sum, one summand per collection.
pub fn abl_character_eval_termwise(n: usize, lam: &DominantWeight, z: &[Q], q: &Q) -> Result<Q> {
    check_rank(n)?;
    let shape = SlotShape::full(n)?;
    let m = shape.depth();
    (0..1u64 << m)
        .into_par_iter()
        .map(|ord| abl_term(&shape.collection(ord), lam)?.eval(z, q))
        .try_reduce(Q::zero, |a, b| Ok(a + b))
}

/// A sum of terms p / prod (1 - x)^k kept over the least common denominator.
/// Factors are normalised so that x > 1 in the (q, z) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: LaurentPolynomial,
    pub denominator: BTreeMap<LaurentMonomial, u32>,
}

impl RationalFunction {
    pub fn zero(nvars: usize) -> Self {
        RationalFunction { numerator: LaurentPolynomial::zero(nvars), denominator: BTreeMap::new() }
    }

    pub fn from_term(t: &RationalTerm) -> Result<Self> {
        let nvars = t.numerator.nvars();
        let mut num = LaurentPolynomial::monomial(t.numerator.clone(), Q::one());
        let mut den = BTreeMap::new();
        for f in &t.denominator_factors {
            let f = match f.cmp_one() {
                std::cmp::Ordering::Equal => return Err(Error::VanishingDenominator),
                std::cmp::Ordering::Greater => f.clone(),
                // 1 / (1 - x) = -x^{-1} / (1 - x^{-1})
                std::cmp::Ordering::Less => {
                    let fi = f.inv();
                    num = num.mul_monomial(&fi).scale(&-Q::one());
                    fi
                }
            };
            *den.entry(f).or_insert(0) += 1;
        }
        debug_assert_eq!(num.nvars(), nvars);
        Ok(RationalFunction { numerator: num, denominator: den })
    }

    fn lift_to(&self, den: &BTreeMap<LaurentMonomial, u32>) -> LaurentPolynomial {
        let mut p = self.numerator.clone();
        for (f, &k) in den {
            let have = self.denominator.get(f).copied().unwrap_or(0);
            let binom = LaurentPolynomial::one(p.nvars()).sub(&LaurentPolynomial::monomial(f.clone(), Q::one()));
            for _ in have..k {
                p = p.mul(&binom);
            }
        }
        p
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut den = self.denominator.clone();
        for (f, &k) in &o.denominator {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let numerator = self.lift_to(&den).add(&o.lift_to(&den));
        RationalFunction { numerator, denominator: den }
    }

    /// Divides out the denominator; errors if the result is not a Laurent polynomial.
    pub fn into_polynomial(self) -> Result<LaurentPolynomial> {
        let mut p = self.numerator;
        for (f, k) in self.denominator {
            for _ in 0..k {
                p = p.div_one_minus(&f)?;
            }
        }
        Ok(p)
    }
}

/// Common-denominator summation of the fixed-point terms in the given order.
/// Only practical for n <= 3; used to check order independence.
pub fn abl_character_common_denominator(n: usize, lam: &DominantWeight, order: &[u64]) -> Result<QCharacter> {
    check_rank(n)?;
    if n > 3 {
        return Err(Error::Capacity("common-denominator summation is limited to n <= 3".into()));
    }
    let shape = SlotShape::full(n)?;
    let mut acc = RationalFunction::zero(n - 1);
    for &ord in order {
        acc = acc.add(&RationalFunction::from_term(&abl_term(&shape.collection(ord), lam)?)?);
    }
    Ok(QCharacter { polynomial: acc.into_polynomial()? })
}
