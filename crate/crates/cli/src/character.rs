use crate::output::{csv_row, parse_lambda, parse_rationals, usage, write_json, Format};
use crate::Outcome;
use anyhow::Result;
use clap::Args;
use degflag_core::characters::{
    abl_character_eval_guarded, abl_character_exact_guarded, TermJson, EVAL_MAX_N, EXACT_MAX_N,
};
use degflag_core::linalg::{fmt_q, parse_q};
use degflag_core::pbw::{graded_character_capped, weyl_dimension, DEFAULT_DIM_CAP};
use serde::Serialize;
use std::io::Write;

#[derive(Args, Debug)]
pub struct CharacterArgs {
    #[arg(long)]
    pub n: usize,
    /// Dominant weight l_1,...,l_{n-1}.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    /// Evaluate at z_1,...,z_{n-1} and q instead of expanding.
    #[arg(long, num_args = 2, value_names = ["Z", "Q"], allow_hyphen_values = true)]
    pub eval: Option<Vec<String>>,
    /// Compare against the PBW-filtration oracle.
    #[arg(long)]
    pub oracle_check: bool,
    /// Largest n for the exact expansion.
    #[arg(long, default_value_t = EXACT_MAX_N)]
    pub exact_cap: usize,
    /// Largest module dimension the oracle will build.
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    pub oracle_cap: u64,
}

#[derive(Serialize)]
struct Expanded {
    terms: Vec<TermJson>,
    text: String,
    graded_dimensions: Vec<u64>,
    dimension: u64,
}

#[derive(Serialize)]
struct Point {
    z: Vec<String>,
    q: String,
}

#[derive(Serialize)]
struct Oracle {
    weyl_dimension: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    character: Option<Expanded>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    equal: bool,
}

#[derive(Serialize)]
struct Report {
    n: usize,
    lambda: Vec<u32>,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    character: Option<Expanded>,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Oracle>,
}

fn expanded(ch: &degflag_core::characters::QCharacter) -> Expanded {
    Expanded {
        terms: ch.polynomial.canonical_terms(),
        text: ch.polynomial.to_string(),
        graded_dimensions: ch.graded_dimensions(),
        dimension: ch.dimension(),
    }
}

fn report(a: &CharacterArgs) -> Result<Report> {
    let lam = parse_lambda(a.n, &a.lambda)?;
    let mut r = Report { n: a.n, lambda: lam.ell.clone(), mode: "exact", character: None, point: None, value: None, oracle: None };
    match &a.eval {
        None => {
            let ch = abl_character_exact_guarded(a.n, &lam, a.exact_cap).map_err(|e| match e {
                degflag_core::Error::Capacity(m) => {
                    anyhow::Error::new(degflag_core::Error::Capacity(format!("{m} (pass --eval Z Q)")))
                }
                e => e.into(),
            })?;
            if a.oracle_check {
                let o = graded_character_capped(&lam, a.oracle_cap)?.to_qcharacter();
                r.oracle = Some(Oracle {
                    weyl_dimension: weyl_dimension(&lam).to_string(),
                    equal: o == ch,
                    character: Some(expanded(&o)),
                    value: None,
                });
            }
            r.character = Some(expanded(&ch));
        }
        Some(ev) => {
            let z = parse_rationals(&ev[0], "--eval Z")?;
            let qv = parse_q(&ev[1]).ok_or_else(|| usage(format!("--eval Q: cannot parse '{}'", ev[1])))?;
            if z.len() != a.n - 1 {
                return Err(usage(format!("--eval needs {} z-coordinates, got {}", a.n - 1, z.len())));
            }
            let v = abl_character_eval_guarded(a.n, &lam, &z, &qv, EVAL_MAX_N)?;
            if a.oracle_check {
                let ov = graded_character_capped(&lam, a.oracle_cap)?.eval(&z, &qv);
                r.oracle = Some(Oracle {
                    weyl_dimension: weyl_dimension(&lam).to_string(),
                    equal: ov == v,
                    character: None,
                    value: Some(fmt_q(&ov)),
                });
            }
            r.mode = "eval";
            r.point = Some(Point { z: z.iter().map(fmt_q).collect(), q: fmt_q(&qv) });
            r.value = Some(fmt_q(&v));
        }
    }
    Ok(r)
}

pub fn run<W: Write>(a: &CharacterArgs, fmt: Format, out: &mut W) -> Result<Outcome> {
    let r = report(a)?;
    match fmt {
        Format::Json => write_json(out, &r)?,
        Format::Csv => {
            if let Some(ch) = &r.character {
                csv_row(out, &["z", "q", "coeff"].map(String::from))?;
                for t in &ch.terms {
                    let z: Vec<String> = t.z.iter().map(|x| x.to_string()).collect();
                    csv_row(out, &[z.join(" "), t.q.to_string(), t.coeff.clone()])?;
                }
            } else if let (Some(p), Some(v)) = (&r.point, &r.value) {
                csv_row(out, &["z", "q", "value"].map(String::from))?;
                csv_row(out, &[p.z.join(" "), p.q.clone(), v.clone()])?;
            }
        }
        Format::Text => {
            writeln!(out, "n = {}, lambda = {:?}", r.n, r.lambda)?;
            if let Some(ch) = &r.character {
                writeln!(out, "character: {}", ch.text)?;
                writeln!(out, "graded dimensions: {:?} (total {})", ch.graded_dimensions, ch.dimension)?;
            }
            if let (Some(p), Some(v)) = (&r.point, &r.value) {
                writeln!(out, "value at z = ({}), q = {}: {v}", p.z.join(", "), p.q)?;
            }
            if let Some(o) = &r.oracle {
                writeln!(out, "oracle: Weyl dimension {}, equal = {}", o.weyl_dimension, o.equal)?;
            }
        }
    }
    Ok(match &r.oracle {
        Some(o) if !o.equal => Outcome::CheckFailed,
        _ => Outcome::Ok,
    })
}
