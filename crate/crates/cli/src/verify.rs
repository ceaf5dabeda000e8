use crate::output::{csv_row, write_json, Format};
use crate::Outcome;
use anyhow::Result;
use clap::Args;
use degflag_core::combinatorics::{
    beta_order, binomial_row, cell_dimension, codim_one_cells, is_admissible, num_roots, relative_dimension,
    Collection, ParabolicShape, SlotShape,
};
use degflag_core::geometry::{
    cell_labels, fixed_point, fixed_point_divisors, is_partial_r_point, is_r_point, lift, project_pi,
    quiver_dimension_check, random_flag, random_generic_r_point, random_r_point, section_s, z_divisor_membership,
    z_divisors, QuiverDimensionReport,
};
use degflag_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

/// Largest n for `verify`.
pub const VERIFY_MAX_N: usize = 8;
/// Largest n with exhaustive enumeration checks.
const EXHAUSTIVE_MAX_N: usize = 6;
/// Quiver Jacobian samples.
const QUIVER_SAMPLES: usize = 20;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Serialize, Default)]
struct Suite {
    name: &'static str,
    checks: u64,
    failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize)]
struct Report {
    n: usize,
    trials: usize,
    seed: u64,
    suites: Vec<Suite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quiver: Option<QuiverDimensionReport>,
    all_pass: bool,
}

/// The generator for trial `t` of suite `s`.
fn trial_rng(seed: u64, s: u64, t: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream((s << 32) | t);
    r
}

/// Runs `f` on every index in parallel; outcomes are collected in index order.
fn suite<F>(name: &'static str, count: u64, f: F) -> Result<Suite>
where
    F: Fn(u64) -> std::result::Result<Option<String>, Error> + Sync,
{
    let res = (0..count).into_par_iter().map(&f).collect::<std::result::Result<Vec<_>, Error>>()?;
    let failures: Vec<String> = res.into_iter().flatten().collect();
    Ok(Suite {
        name,
        checks: count,
        failures: failures.len() as u64,
        first_failure: failures.into_iter().next(),
        note: None,
    })
}

fn fail_unless(ok: bool, msg: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(msg)
}

fn admissibility(n: usize, trials: usize, seed: u64) -> Result<Vec<Suite>> {
    let slots = SlotShape::full(n)?;
    let m = slots.depth();
    let mut out = Vec::new();
    if n <= EXHAUSTIVE_MAX_N {
        let total = 1u64 << m;
        let mut s = suite("enumeration", total, |o| {
            let c = slots.collection(o);
            Ok(fail_unless(is_admissible(&c)? && slots.ordinal(&c)? == o, || format!("ordinal {o}: {c}")))
        })?;
        let mut hist = vec![0u64; m + 1];
        for c in slots.iter() {
            hist[cell_dimension(&c)? as usize] += 1;
        }
        s.checks += 1;
        if hist != binomial_row(m) {
            s.failures += 1;
            s.first_failure.get_or_insert(format!("Poincare coefficients {hist:?}"));
        }
        out.push(s);
    } else {
        let mut s = suite("enumeration", trials as u64, |t| {
            let o = trial_rng(seed, 0, t).random_range(0..1u64 << m);
            let c = slots.collection(o);
            Ok(fail_unless(is_admissible(&c)? && slots.ordinal(&c)? == o, || format!("ordinal {o}: {c}")))
        })?;
        s.note = Some(format!("sampled {trials} of 2^{m} collections"));
        out.push(s);
    }
    out.push(suite("cell-labels", trials as u64, |t| {
        let p = random_r_point(n, &mut trial_rng(seed, 1, t))?;
        let c = cell_labels(&p);
        Ok(fail_unless(is_admissible(&c)?, || format!("trial {t}: labels {c} not admissible")))
    })?);
    let cells = codim_one_cells(n)?;
    out.push(suite("codim-one", cells.len() as u64, |k| {
        let c = &cells[k as usize].cell;
        let ok = is_admissible(c)? && cell_dimension(c)? as usize == m - 1 && relative_dimension(c)? == 0;
        Ok(fail_unless(ok, || format!("cell {c}")))
    })?);
    Ok(out)
}

fn round_trip(n: usize, trials: usize, seed: u64) -> Result<Vec<Suite>> {
    let lifts = suite("lift", trials as u64, |t| {
        let x = random_flag(n, &mut trial_rng(seed, 2, t))?;
        let p = lift(&x)?;
        Ok(fail_unless(is_r_point(&p) && project_pi(&p)? == x, || format!("trial {t}: pi(lift(x)) != x")))
    })?;
    let generic = suite("generic-lift", trials as u64, |t| {
        let p = random_generic_r_point(n, &mut trial_rng(seed, 3, t))?;
        Ok(fail_unless(lift(&project_pi(&p)?)? == p, || format!("trial {t}: lift(pi(p)) != p off the divisors")))
    })?;
    Ok(vec![lifts, generic])
}

fn sections(n: usize, trials: usize, seed: u64) -> Result<Suite> {
    let order = beta_order(n)?.order;
    suite("section", trials as u64, |t| {
        let full = random_r_point(n, &mut trial_rng(seed, 4, t))?;
        for l in 1..=order.len() {
            let p = full.restrict(&order[..l - 1]);
            let s = section_s(l, &p)?;
            if !is_partial_r_point(&s) || s.forget(order[l - 1]) != p || !z_divisor_membership(&s, order[l - 1])? {
                return Ok(Some(format!("trial {t}, l = {l}")));
            }
        }
        Ok(None)
    })
}

fn divisors(n: usize, trials: usize, seed: u64) -> Result<Suite> {
    let slots = SlotShape::full(n)?;
    let m = slots.depth();
    let check = |c: &Collection| -> std::result::Result<Option<String>, Error> {
        let p = fixed_point(c)?;
        Ok(fail_unless(z_divisors(&p)? == fixed_point_divisors(c)?, || format!("fixed point {c}")))
    };
    if n <= EXHAUSTIVE_MAX_N {
        suite("divisor", 1u64 << m, |o| check(&slots.collection(o)))
    } else {
        let mut s = suite("divisor", trials as u64, |t| {
            check(&slots.collection(trial_rng(seed, 5, t).random_range(0..1u64 << m)))
        })?;
        s.note = Some(format!("sampled {trials} of 2^{m} fixed points"));
        Ok(s)
    }
}

fn quiver(n: usize, seed: u64) -> Result<(Suite, Option<QuiverDimensionReport>)> {
    if n == 2 {
        let s = Suite {
            name: "quiver",
            note: Some("skipped: Q_2 has no relations".into()),
            ..Default::default()
        };
        return Ok((s, None));
    }
    let shape = ParabolicShape::full(n)?;
    let r = quiver_dimension_check(&shape, QUIVER_SAMPLES, &mut trial_rng(seed, 6, 0))?;
    let ok = r.full_rank && r.dimension == Some(r.expected_dimension);
    let s = Suite {
        name: "quiver",
        checks: r.samples as u64,
        failures: if ok { 0 } else { r.ranks.iter().filter(|&&k| k != r.equations).count().max(1) as u64 },
        first_failure: (!ok).then(|| format!("ranks {:?}, expected {}", r.ranks, r.equations)),
        note: None,
    };
    Ok((s, Some(r)))
}

fn report(a: &VerifyArgs) -> Result<Report> {
    if a.n < 2 {
        return Err(Error::InvalidRank(a.n).into());
    }
    if a.n > VERIFY_MAX_N {
        return Err(Error::Capacity(format!("verify is limited to n <= {VERIFY_MAX_N}")).into());
    }
    let mut suites = admissibility(a.n, a.trials, a.seed)?;
    suites.extend(round_trip(a.n, a.trials, a.seed)?);
    let mut sec = sections(a.n, a.trials, a.seed)?;
    if a.n == 2 {
        sec.note = Some("trivial: a single slot, s_1 is the constant w_2".into());
    }
    suites.push(sec);
    suites.push(divisors(a.n, a.trials, a.seed)?);
    let (q, qr) = quiver(a.n, a.seed)?;
    suites.push(q);
    let all_pass = suites.iter().all(|s| s.failures == 0);
    Ok(Report { n: a.n, trials: a.trials, seed: a.seed, suites, quiver: qr, all_pass })
}

pub fn run<W: Write>(a: &VerifyArgs, fmt: Format, out: &mut W) -> Result<Outcome> {
    let r = report(a)?;
    for s in &r.suites {
        if let Some(note) = &s.note {
            eprintln!("verify n = {}: {}: {note}", r.n, s.name);
        }
    }
    match fmt {
        Format::Json => write_json(out, &r)?,
        Format::Csv => {
            csv_row(out, &["suite", "checks", "failures", "note"].map(String::from))?;
            for s in &r.suites {
                csv_row(out, &[s.name.into(), s.checks.to_string(), s.failures.to_string(), s.note.clone().unwrap_or_default()])?;
            }
        }
        Format::Text => {
            for s in &r.suites {
                let status = if s.failures == 0 { "pass" } else { "FAIL" };
                write!(out, "{:<13} {status}  {} checks", s.name, s.checks)?;
                if let Some(f) = &s.first_failure {
                    write!(out, "  first failure: {f}")?;
                }
                if let Some(note) = &s.note {
                    write!(out, "  ({note})")?;
                }
                writeln!(out)?;
            }
            if let Some(q) = &r.quiver {
                let base = num_roots(r.n);
                writeln!(
                    out,
                    "quiver dimension: {} + {} = {} (Jacobian rank {} of {} equations, {} samples)",
                    base,
                    q.expected_dimension - base,
                    q.dimension.map_or("?".into(), |d| d.to_string()),
                    q.ranks.first().copied().unwrap_or(0),
                    q.equations,
                    q.samples
                )?;
            }
            writeln!(out, "{}", if r.all_pass { "all checks passed" } else { "some checks FAILED" })?;
        }
    }
    Ok(if r.all_pass { Outcome::Ok } else { Outcome::CheckFailed })
}
