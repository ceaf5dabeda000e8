use super::{project_pi, z_divisors, FlagPoint, RPoint, Subspace};
use crate::combinatorics::{slot_support, ParabolicShape, RootIndex, SlotShape};
use crate::error::{check_rank, Result};
use crate::linalg::{qf, Q};
use rand::Rng;

/// A rational with numerator and denominator bounded by 10.
pub fn random_rational<R: Rng>(rng: &mut R) -> Q {
    qf(rng.random_range(-10..=10), rng.random_range(1..=10))
}

/// Two vectors of `upper` spanning a complement of `lower`, assuming codimension 2.
fn complement(lower: &Subspace, upper: &Subspace) -> Vec<Vec<Q>> {
    let mut acc = lower.clone();
    let mut out = Vec::new();
    for r in upper.rows() {
        if !acc.contains_vector(&r) {
            acc = acc.with_vector(r.clone());
            out.push(r);
        }
    }
    out
}

/// A point of the line P(upper / lower): e_1 + c e_2 with c a small random
/// rational, or e_2 alone. Special positions come up with positive probability.
fn random_on_line<R: Rng>(lower: &Subspace, upper: &Subspace, rng: &mut R) -> Subspace {
    let e = complement(lower, upper);
    debug_assert_eq!(e.len(), 2);
    let v = if rng.random_range(0..12) == 0 {
        e[1].clone()
    } else {
        let c = random_rational(rng);
        e[0].iter().zip(&e[1]).map(|(a, b)| a + &c * b).collect()
    };
    lower.with_vector(v)
}

fn upper_space(p: &RPoint, r: RootIndex) -> Subspace {
    let n = p.n;
    match p.get(r.i, r.j + 1) {
        Some(v) if r.j + 1 < n => v.sum(&Subspace::coordinate(crate::combinatorics::IndexSet::new(n, &[r.j + 1]).unwrap())),
        _ => Subspace::coordinate(slot_support(n, r.i, r.j)),
    }
}

fn random_on_slots<R: Rng>(n: usize, slots: &[RootIndex], rng: &mut R) -> RPoint {
    let mut p = RPoint::empty(n);
    for &r in slots {
        let lower = if r.i > 1 { p.get(r.i - 1, r.j).cloned().unwrap_or_else(|| Subspace::zero(n)) } else { Subspace::zero(n) };
        let upper = upper_space(&p, r);
        let v = random_on_line(&lower, &upper, rng);
        p.set(r.i, r.j, v);
    }
    p
}

/// A random point of R_n, built along the tower of P^1-fibrations in beta order.
pub fn random_r_point<R: Rng>(n: usize, rng: &mut R) -> Result<RPoint> {
    check_rank(n)?;
    Ok(random_on_slots(n, &SlotShape::full(n)?.slots, rng))
}

/// A random point of the parabolic R_d over the slots P_d.
pub fn random_r_point_parabolic<R: Rng>(shape: &ParabolicShape, rng: &mut R) -> RPoint {
    random_on_slots(shape.n, &shape.roots(), rng)
}

/// A random point of R_n lying on no divisor Z_l.
pub fn random_generic_r_point<R: Rng>(n: usize, rng: &mut R) -> Result<RPoint> {
    loop {
        let p = random_r_point(n, rng)?;
        if z_divisors(&p)?.is_empty() {
            return Ok(p);
        }
    }
}

/// A random degenerate flag, the image of a random point of R_n.
pub fn random_flag<R: Rng>(n: usize, rng: &mut R) -> Result<FlagPoint> {
    project_pi(&random_r_point(n, rng)?)
}
