use crate::output::{csv_row, write_json, Format};
use crate::Outcome;
use anyhow::Result;
use clap::Args;
use degflag_core::combinatorics::{smallness_report, SmallnessReport};
use serde::Serialize;
use std::io::Write;
use std::time::Instant;

#[derive(Args, Debug)]
pub struct SemismallArgs {
    #[arg(long)]
    pub n: usize,
    /// Witnesses listed in the report (the count is always complete).
    #[arg(long, default_value_t = 10)]
    pub max_witnesses: usize,
    /// Include wall-clock time (makes the output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Serialize)]
struct Timed<'a> {
    #[serde(flatten)]
    report: &'a SmallnessReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<usize>,
}

pub fn run<W: Write>(a: &SemismallArgs, threads: usize, fmt: Format, out: &mut W) -> Result<Outcome> {
    let t0 = Instant::now();
    let r = smallness_report(a.n, threads, a.max_witnesses)?;
    let secs = t0.elapsed().as_secs_f64();
    match fmt {
        Format::Json => write_json(
            out,
            &Timed { report: &r, seconds: a.timing.then_some(secs), threads: a.timing.then_some(threads) },
        )?,
        Format::Csv => {
            csv_row(out, &["fiber_dim", "base_cells", "max_base_dim", "max_excess"].map(String::from))?;
            for s in &r.strata {
                csv_row(
                    out,
                    &[s.fiber_dim.to_string(), s.base_cells.to_string(), s.max_base_dim.to_string(), s.max_excess.to_string()],
                )?;
            }
        }
        Format::Text => {
            writeln!(out, "n = {}: verdict {}", r.n, r.verdict)?;
            writeln!(out, "dim = {}, collections = {}, base cells = {}", r.dim, r.collections, r.base_cells)?;
            if let Some(e) = r.max_excess {
                writeln!(out, "max excess (b + 2f - M, f > 0) = {e}")?;
            }
            for s in &r.strata {
                writeln!(
                    out,
                    "  fiber dim {:>2}: {:>6} base cells, max base dim {:>2}, max excess {:>3}",
                    s.fiber_dim, s.base_cells, s.max_base_dim, s.max_excess
                )?;
            }
            writeln!(out, "witnesses: {} (showing {})", r.witness_count, r.witnesses.len())?;
            for w in &r.witnesses {
                writeln!(out, "  base {}  b = {}  f = {}  excess {}  [{}]", w.base, w.base_dim, w.fiber_dim, w.excess, w.completion)?;
            }
            if a.timing {
                writeln!(out, "time: {secs:.3} s on {threads} threads")?;
            }
        }
    }
    Ok(Outcome::Ok)
}
