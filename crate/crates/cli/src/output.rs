use clap::ValueEnum;
use degflag_core::characters::DominantWeight;
use degflag_core::combinatorics::ParabolicShape;
use degflag_core::linalg::{parse_q, Q};
use serde::Serialize;
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Bad command-line input that clap cannot catch.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn parse_list(s: &str, what: &str) -> anyhow::Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| usage(format!("{what}: cannot parse '{t}'"))))
        .collect()
}

pub fn parse_lambda(n: usize, s: &str) -> anyhow::Result<DominantWeight> {
    let v = parse_list(s, "--lambda")?;
    if v.len() != n.saturating_sub(1) {
        return Err(usage(format!("--lambda needs {} entries for n = {n}, got {}", n.saturating_sub(1), v.len())));
    }
    Ok(DominantWeight::new(n, v.into_iter().map(|x| x as u32).collect())?)
}

pub fn parse_shape(n: usize, s: &str) -> anyhow::Result<ParabolicShape> {
    Ok(ParabolicShape::new(n, parse_list(s, "--shape")?)?)
}

pub fn parse_rationals(s: &str, what: &str) -> anyhow::Result<Vec<Q>> {
    s.split(',').map(|t| parse_q(t).ok_or_else(|| usage(format!("{what}: cannot parse '{t}'")))).collect()
}

pub fn write_json<W: Write, T: Serialize>(out: &mut W, v: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

/// A CSV field, quoted when it contains a comma or a quote.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_row<W: Write>(out: &mut W, fields: &[String]) -> anyhow::Result<()> {
    let f: Vec<String> = fields.iter().map(|x| csv_field(x)).collect();
    writeln!(out, "{}", f.join(","))?;
    Ok(())
}

/// 1 + 3t + 3t^2 + t^3.
pub fn poly_in_t(coeffs: &[u64]) -> String {
    let mut parts = Vec::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{k}"),
        };
        parts.push(match (c, k) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_formatting() {
        assert_eq!(poly_in_t(&[1, 3, 3, 1]), "1 + 3t + 3t^2 + t^3");
        assert_eq!(poly_in_t(&[1, 1]), "1 + t");
        assert_eq!(poly_in_t(&[0, 2]), "2t");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("(1,3)"), "\"(1,3)\"");
        assert_eq!(csv_field("abc"), "abc");
    }

    #[test]
    fn parse_inputs() {
        assert_eq!(parse_lambda(3, "1,2").unwrap().ell, vec![1, 2]);
        assert!(parse_lambda(3, "1").is_err());
        assert!(parse_lambda(3, "1,x").is_err());
        assert_eq!(parse_shape(4, "1,3").unwrap().d, vec![1, 3]);
        assert!(parse_shape(4, "3,1").is_err());
        assert_eq!(parse_rationals("2,-3/4", "z").unwrap().len(), 2);
    }
}
