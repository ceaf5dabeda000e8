//! Acceptance suite: one PASS/FAIL line per criterion.

use degflag_core::characters::{
    abl_character_common_denominator, abl_character_eval, abl_character_exact, abl_term, DominantWeight,
    LaurentMonomial, LaurentPolynomial, RationalTerm,
};
use degflag_core::combinatorics::{
    binomial_row, cell_dimension, codim_one_cells, enumerate_admissible, is_admissible, num_roots, relative_dimension,
    smallness_report, Collection, ParabolicShape, Verdict,
};
use degflag_core::geometry::{
    is_partial_r_point, is_r_point, lift, project_pi, quiver_dimension_check, random_flag, random_r_point,
    random_rational, section_s,
};
use degflag_core::linalg::{q, Q};
use degflag_core::pbw::{degenerate_fundamental_wedge, graded_character, weyl_dimension};
use degflag_core::Error;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::{Duration, Instant};

/// Runtime budgets, in seconds.
const BUDGET_N2_CLOSED_FORM: f64 = 1.0;
const BUDGET_ORACLE: f64 = 300.0;
const BUDGET_ENUMERATION: f64 = 60.0;
const BUDGET_CENSUS: f64 = 1800.0;
const BUDGET_EVAL: f64 = 600.0;

const ROUND_TRIP_TRIALS: usize = 100;
const QUIVER_SAMPLES: usize = 20;
const EVAL_POINTS: usize = 20;
const SEED: u64 = 20240611;

type Criterion = (&'static str, fn() -> Outcome, Option<f64>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome { pass: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { pass: false, detail: detail.into() }
}

fn within(o: Outcome, t: Duration, budget: f64) -> Outcome {
    let s = t.as_secs_f64();
    if o.pass && s > budget {
        fail(format!("{}; took {s:.1} s, budget {budget} s", o.detail))
    } else {
        o
    }
}

fn mono(z: &[i32], e: i32) -> LaurentMonomial {
    LaurentMonomial::new(z.to_vec(), e)
}

fn lam(n: usize, l: &[u32]) -> DominantWeight {
    DominantWeight::new(n, l.to_vec()).unwrap()
}

fn criterion_1() -> Outcome {
    for m in 0..=5u32 {
        let ch = abl_character_exact(2, &lam(2, &[m])).unwrap();
        let want = LaurentPolynomial::from_terms(1, (0..=m as i32).map(|k| (mono(&[m as i32 - 2 * k], k), Q::one())));
        if ch.polynomial != want {
            return fail(format!("m = {m}: got {}", ch.polynomial));
        }
    }
    ok("z^m + q z^(m-2) + ... + q^m z^-m for m = 0..5")
}

fn criterion_2() -> Outcome {
    let c = Collection::from_slots(3, &[(1, 1, &[2]), (1, 2, &[3]), (2, 2, &[1, 3])]).unwrap();
    let t = abl_term(&c, &lam(3, &[1, 1])).unwrap();
    let want = RationalTerm {
        numerator: mono(&[0, 0], 2),
        denominator_factors: vec![mono(&[1, 1], -1), mono(&[1, -2], 0), mono(&[-2, 1], 0)],
    };
    if t.same_as(&want) {
        ok(format!("{t}"))
    } else {
        fail(format!("got {t}, want {want}"))
    }
}

fn weights_up_to_two(n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 1..n {
        out = out.into_iter().flat_map(|v| (0..=2).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}

fn criterion_3() -> Outcome {
    let cases: Vec<(usize, Vec<u32>)> = (2..=4).flat_map(|n| weights_up_to_two(n).into_iter().map(move |l| (n, l))).collect();
    let bad: Vec<String> = cases
        .par_iter()
        .filter_map(|(n, l)| {
            let w = lam(*n, l);
            let abl = abl_character_exact(*n, &w).unwrap();
            let oracle = graded_character(&w).unwrap();
            let dim_ok = num_bigint::BigInt::from(oracle.dimension()) == weyl_dimension(&w);
            (abl != oracle.to_qcharacter() || !dim_ok).then(|| format!("n = {n}, lambda = {l:?}"))
        })
        .collect();
    if !bad.is_empty() {
        return fail(format!("mismatch at {}", bad.join("; ")));
    }
    let d = abl_character_exact(3, &lam(3, &[1, 1])).unwrap().dimension();
    if d != 8 {
        return fail(format!("dim V(1,1) = {d}"));
    }
    ok(format!("{} weights equal term by term; dim V_(1,1) = 8 for n = 3", cases.len()))
}

fn criterion_4() -> Outcome {
    for n in 2..=4 {
        let ch = abl_character_exact(n, &DominantWeight::zero(n)).unwrap();
        if ch.polynomial != LaurentPolynomial::one(n - 1) {
            return fail(format!("n = {n}: {}", ch.polynomial));
        }
    }
    for n in 2..=3 {
        let order: Vec<u64> = (0..1u64 << num_roots(n)).collect();
        let ch = abl_character_common_denominator(n, &DominantWeight::zero(n), &order).unwrap();
        if ch.polynomial != LaurentPolynomial::one(n - 1) {
            return fail(format!("n = {n}, common denominator: {}", ch.polynomial));
        }
    }
    ok("sum equals 1 for n = 2..4")
}

fn criterion_5() -> Outcome {
    let mut count = 0;
    for n in 2..=6 {
        for d in 1..n {
            let wedge = degenerate_fundamental_wedge(n, d).unwrap();
            let filt = graded_character(&DominantWeight::fundamental(n, d).unwrap()).unwrap();
            if wedge != filt {
                return fail(format!("n = {n}, d = {d}"));
            }
            count += 1;
        }
    }
    ok(format!("{count} fundamental modules, n <= 6"))
}

fn criterion_6() -> Outcome {
    for n in 2..=6 {
        let m = num_roots(n);
        let mut count = 0u64;
        let mut hist = vec![0u64; m + 1];
        for c in enumerate_admissible(n).unwrap() {
            if !is_admissible(&c).unwrap() {
                return fail(format!("n = {n}: {c} not admissible"));
            }
            count += 1;
            hist[cell_dimension(&c).unwrap() as usize] += 1;
        }
        if count != 1u64 << m || hist != binomial_row(m) {
            return fail(format!("n = {n}: {count} collections, Poincare {hist:?}"));
        }
    }
    ok("2^M collections and (1+t)^M for n <= 6")
}

fn criterion_7() -> Outcome {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).max(8);
    let expected = |n: usize| match n {
        2..=4 => Verdict::Small,
        5..=7 => Verdict::Semismall,
        _ => Verdict::NotSemismall,
    };
    let mut parts = Vec::new();
    let mut pass = true;
    for n in 2..=8 {
        let r = smallness_report(n, threads, 1).unwrap();
        let mut good = r.verdict == expected(n);
        if n == 8 {
            good &= !r.witnesses.is_empty();
        }
        pass &= good;
        parts.push(if good {
            format!("n={n} {}", r.verdict)
        } else {
            format!("n={n} {} (expected {})", r.verdict, expected(n))
        });
    }
    Outcome { pass, detail: parts.join(", ") }
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    for n in 2..=6 {
        let m = num_roots(n) as u32;
        for cell in codim_one_cells(n).unwrap() {
            let c = &cell.cell;
            let good = is_admissible(c).unwrap()
                && cell_dimension(c).unwrap() == m - 1
                && relative_dimension(c).unwrap() == 0;
            if !good {
                return fail(format!("n = {n}, (a,b) = ({},{})", cell.a, cell.b));
            }
            count += 1;
        }
    }
    ok(format!("{count} cells: admissible, dimension M-1, relative dimension 0"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for n in 2..=6 {
        let order = degflag_core::combinatorics::beta_order(n).unwrap().order;
        for t in 0..ROUND_TRIP_TRIALS {
            let x = random_flag(n, &mut rng).unwrap();
            let p = lift(&x).unwrap();
            if !is_r_point(&p) || project_pi(&p).unwrap() != x {
                return fail(format!("lift, n = {n}, trial {t}"));
            }
            let full = random_r_point(n, &mut rng).unwrap();
            let l = rng.random_range(1..=order.len());
            let partial = full.restrict(&order[..l - 1]);
            let s = section_s(l, &partial).unwrap();
            if !is_partial_r_point(&s) || s.forget(order[l - 1]) != partial {
                return fail(format!("section, n = {n}, trial {t}, l = {l}"));
            }
        }
    }
    ok(format!("{ROUND_TRIP_TRIALS} lifts and {ROUND_TRIP_TRIALS} sections per n = 2..6"))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut dims = Vec::new();
    for n in 2..=5 {
        let r = quiver_dimension_check(&ParabolicShape::full(n).unwrap(), QUIVER_SAMPLES, &mut rng).unwrap();
        let rank: usize = (1..n - 1).map(|i| n * i).sum();
        let dim = n * (n - 1) / 2 + (1..n).map(|i| i * i).sum::<usize>();
        if r.ranks.iter().any(|&k| k != rank) || r.dimension != Some(dim) {
            return fail(format!("n = {n}: ranks {:?}, want {rank}; dimension {:?}, want {dim}", r.ranks, r.dimension));
        }
        dims.push(format!("{dim}"));
    }
    ok(format!("rank sum n*i at {QUIVER_SAMPLES} points; dim Q_n = {} for n = 2..5", dims.join(", ")))
}

fn criterion_11() -> Outcome {
    let n = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for d in 1..=2 {
        let w = DominantWeight::fundamental(n, d).unwrap();
        let oracle = graded_character(&w).unwrap().to_polynomial();
        let mut done = 0;
        let mut resampled = 0;
        while done < EVAL_POINTS {
            let z: Vec<Q> = (0..n - 1).map(|_| random_rational(&mut rng)).collect();
            let qv = random_rational(&mut rng);
            if qv == q(0) || z.iter().any(|x| *x == q(0)) {
                continue;
            }
            match abl_character_eval(n, &w, &z, &qv) {
                Ok(v) => {
                    if v != oracle.eval(&z, &qv) {
                        return fail(format!("omega_{d} at z = {z:?}, q = {qv}"));
                    }
                    done += 1;
                }
                Err(Error::VanishingDenominator) => resampled += 1,
                Err(e) => return fail(format!("{e}")),
            }
        }
        if resampled > EVAL_POINTS {
            return fail(format!("omega_{d}: {resampled} degenerate points"));
        }
    }
    ok(format!("omega_1 and omega_2 at {EVAL_POINTS} points each"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("n=2 closed form", criterion_1, Some(BUDGET_N2_CLOSED_FORM)),
        ("n=3 golden term", criterion_2, None),
        ("oracle equivalence", criterion_3, Some(BUDGET_ORACLE)),
        ("trivial weight", criterion_4, None),
        ("fundamental wedge model", criterion_5, None),
        ("enumeration counts", criterion_6, Some(BUDGET_ENUMERATION)),
        ("smallness census", criterion_7, Some(BUDGET_CENSUS)),
        ("codim-one cells", criterion_8, None),
        ("geometry round trips", criterion_9, None),
        ("quiver dimension", criterion_10, None),
        ("evaluation agreement", criterion_11, Some(BUDGET_EVAL)),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = Vec::new();
    for (k, (name, f, budget)) in criteria.iter().enumerate() {
        let id = k + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let t0 = Instant::now();
        let mut o = f();
        let t = t0.elapsed();
        if let Some(b) = budget {
            o = within(o, t, *b);
        }
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {tag}  {name}: {} [{:.2} s]", o.detail, t.as_secs_f64());
        if !o.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
