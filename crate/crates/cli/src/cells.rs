use crate::output::{csv_row, parse_shape, poly_in_t, write_json, Format};
use crate::Outcome;
use anyhow::Result;
use clap::Args;
use degflag_core::combinatorics::{
    binomial_row, cell_dimension, relative_dimension, Collection, IndexSet, ParabolicShape, RootIndex, SlotShape,
};
use degflag_core::geometry::tangent_dimensions;
use degflag_core::Error;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

/// Largest n with a full per-cell table.
pub const TABLE_MAX_N: usize = 6;
/// Largest n for counts-only mode.
pub const COUNTS_MAX_N: usize = 8;

#[derive(Args, Debug)]
pub struct CellsArgs {
    #[arg(long)]
    pub n: usize,
    /// Parabolic shape d_1 < ... < d_k, comma separated.
    #[arg(long)]
    pub shape: Option<String>,
    /// Only the Poincare polynomial (streams, no per-cell rows).
    #[arg(long)]
    pub counts_only: bool,
}

#[derive(Serialize)]
struct Row {
    ordinal: u64,
    label: Collection,
    dim: u32,
    relative_dim: u32,
    diagonal: Vec<IndexSet>,
}

#[derive(Serialize)]
struct Table {
    n: usize,
    shape: Vec<usize>,
    cells: u64,
    rows: Option<Vec<Row>>,
    poincare: Vec<u64>,
    poincare_text: String,
    binomial_check: bool,
}

fn dims(c: &Collection, shape: &ParabolicShape) -> Result<(u32, u32)> {
    if shape.is_full() {
        Ok((cell_dimension(c)?, relative_dimension(c)?))
    } else {
        let t = tangent_dimensions(c, Some(shape))?;
        Ok((t.positive as u32, t.relative as u32))
    }
}

fn row(slots: &SlotShape, shape: &ParabolicShape, ord: u64) -> Result<Row> {
    let c = slots.collection(ord);
    let (dim, relative_dim) = dims(&c, shape)?;
    let diagonal = shape
        .d
        .iter()
        .map(|&d| c.get(d, d).ok_or_else(|| Error::Internal(format!("missing diagonal slot {}", RootIndex::new(d, d)))))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Row { ordinal: ord, label: c, dim, relative_dim, diagonal })
}

/// Cell-dimension histogram, split into independent prefix chunks.
fn counts(slots: &SlotShape, shape: &ParabolicShape) -> Result<Vec<u64>> {
    let m = slots.depth();
    let p = m.min(10);
    let hist = (0..1u64 << p)
        .into_par_iter()
        .map(|prefix| {
            let mut h = vec![0u64; m + 1];
            for c in slots.chunk(p, prefix) {
                h[dims(&c, shape)?.0 as usize] += 1;
            }
            Ok::<_, anyhow::Error>(h)
        })
        .try_reduce(
            || vec![0u64; m + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    Ok(hist)
}

fn table(a: &CellsArgs) -> Result<Table> {
    let shape = match &a.shape {
        Some(s) => parse_shape(a.n, s)?,
        None => ParabolicShape::full(a.n)?,
    };
    let limit = if a.counts_only { COUNTS_MAX_N } else { TABLE_MAX_N };
    if a.n > limit {
        let hint = if a.counts_only { "" } else { "; use --counts-only" };
        return Err(Error::Capacity(format!("cell table for n = {} exceeds n <= {limit}{hint}", a.n)).into());
    }
    let slots = SlotShape::parabolic(&shape);
    let m = slots.depth();
    let total = 1u64 << m;
    let (rows, poincare) = if a.counts_only {
        (None, counts(&slots, &shape)?)
    } else {
        let rows = (0..total).into_par_iter().map(|o| row(&slots, &shape, o)).collect::<Result<Vec<_>>>()?;
        let mut p = vec![0u64; m + 1];
        for r in &rows {
            p[r.dim as usize] += 1;
        }
        (Some(rows), p)
    };
    Ok(Table {
        n: a.n,
        shape: shape.d.clone(),
        cells: total,
        binomial_check: poincare == binomial_row(m),
        poincare_text: poly_in_t(&poincare),
        poincare,
        rows,
    })
}

pub fn run<W: Write>(a: &CellsArgs, fmt: Format, out: &mut W) -> Result<Outcome> {
    let t = table(a)?;
    match fmt {
        Format::Json => write_json(out, &t)?,
        Format::Csv => {
            csv_row(out, &["ordinal", "label", "dim", "relative_dim", "diagonal"].map(String::from))?;
            for r in t.rows.iter().flatten() {
                let diag: Vec<String> = r.diagonal.iter().map(|s| s.to_string()).collect();
                csv_row(
                    out,
                    &[r.ordinal.to_string(), r.label.to_string(), r.dim.to_string(), r.relative_dim.to_string(), diag.join(" ")],
                )?;
            }
            if t.rows.is_none() {
                csv_row(out, &["dim".into(), "count".into()])?;
                for (k, c) in t.poincare.iter().enumerate() {
                    csv_row(out, &[k.to_string(), c.to_string()])?;
                }
            }
        }
        Format::Text => {
            for r in t.rows.iter().flatten() {
                let diag: Vec<String> = r.diagonal.iter().map(|s| s.to_string()).collect();
                writeln!(out, "{:>6}  dim {:>2}  rel {:>2}  diag {}  [{}]", r.ordinal, r.dim, r.relative_dim, diag.join(" "), r.label)?;
            }
            writeln!(out, "n = {}, shape {:?}: {} cells", t.n, t.shape, t.cells)?;
            writeln!(out, "Poincare polynomial: {}", t.poincare_text)?;
        }
    }
    Ok(if t.binomial_check { Outcome::Ok } else { Outcome::CheckFailed })
}
