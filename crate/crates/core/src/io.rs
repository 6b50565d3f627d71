//! CSV formats and the family-spec mini-language.
//!
//! Numbers are written with 17 significant digits so that every `f64`
//! survives a write/read round trip bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gom::TrigPolynomial;
use crate::matrix::WindowMatrix;
use crate::structure::{self, PhaseTable, StructureMatrix};
use crate::vector::{FiniteVector, GeneralizedVector, Membership};

/// Lossless scientific notation (`{:.16e}`).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: `{s}` is not a number")))
}

fn parse_i64(s: &str, line: usize) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: `{s}` is not an integer")))
}

/// Data rows of a CSV with the given header, split into fields.
fn rows<'a>(text: &'a str, header: &str) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == header => {}
        Some((_, h)) => return Err(Error::Parse(format!("expected header `{header}`, found `{}`", h.trim()))),
        None => return Err(Error::Parse(format!("empty file, expected header `{header}`"))),
    }
    let width = header.split(',').count();
    lines
        .map(|(i, l)| {
            let fields: Vec<&str> = l.split(',').collect();
            if fields.len() != width {
                return Err(Error::Parse(format!(
                    "line {}: expected {width} fields, found {}",
                    i + 1,
                    fields.len()
                )));
            }
            Ok((i + 1, fields))
        })
        .collect()
}

/// `n,m,re,im`, one row per entry, row-major.
pub fn matrix_to_csv(a: &WindowMatrix) -> String {
    let mut out = String::from("n,m,re,im\n");
    for n in a.indices() {
        for m in a.indices() {
            let z = a.at(n, m);
            let _ = writeln!(out, "{n},{m},{},{}", fmt_f64(z.re), fmt_f64(z.im));
        }
    }
    out
}

/// Reads a matrix CSV. The radius is the largest `|index|` present (or
/// `radius` when given); absent entries are zero.
pub fn matrix_from_csv(text: &str, radius: Option<usize>) -> Result<WindowMatrix> {
    let mut entries = Vec::new();
    for (line, f) in rows(text, "n,m,re,im")? {
        let (n, m) = (parse_i64(f[0], line)?, parse_i64(f[1], line)?);
        let z = Complex64::new(parse_f64(f[2], line)?, parse_f64(f[3], line)?);
        entries.push((n, m, z));
    }
    let seen = entries
        .iter()
        .map(|(n, m, _)| n.unsigned_abs().max(m.unsigned_abs()) as usize)
        .max()
        .unwrap_or(0);
    let r = radius.unwrap_or(seen);
    if seen > r {
        return Err(Error::RadiusExceeded {
            requested: seen,
            declared: r,
        });
    }
    let mut a = WindowMatrix::zeros(r);
    for (n, m, z) in entries {
        a = a.with_entry(n, m, z)?;
    }
    Ok(a)
}

/// `n,re,im`.
pub fn vector_to_csv(v: &FiniteVector) -> String {
    let mut out = String::from("n,re,im\n");
    for (n, z) in v.iter() {
        let _ = writeln!(out, "{n},{},{}", fmt_f64(z.re), fmt_f64(z.im));
    }
    out
}

pub fn vector_from_csv(text: &str) -> Result<FiniteVector> {
    let mut pairs = Vec::new();
    for (line, f) in rows(text, "n,re,im")? {
        pairs.push((
            parse_i64(f[0], line)?,
            Complex64::new(parse_f64(f[1], line)?, parse_f64(f[2], line)?),
        ));
    }
    Ok(FiniteVector::from_pairs(pairs))
}

/// `index,n,re,im`: coefficient `n` of the vector `ψ_index`.
pub fn gram_table_from_csv(text: &str) -> Result<BTreeMap<i64, FiniteVector>> {
    let mut raw: BTreeMap<i64, Vec<(i64, Complex64)>> = BTreeMap::new();
    for (line, f) in rows(text, "index,n,re,im")? {
        let z = Complex64::new(parse_f64(f[2], line)?, parse_f64(f[3], line)?);
        raw.entry(parse_i64(f[0], line)?)
            .or_default()
            .push((parse_i64(f[1], line)?, z));
    }
    Ok(raw.into_iter().map(|(k, v)| (k, FiniteVector::from_pairs(v))).collect())
}

pub fn gram_table_to_csv(table: &BTreeMap<i64, FiniteVector>) -> String {
    let mut out = String::from("index,n,re,im\n");
    for (k, v) in table {
        for (n, z) in v.iter() {
            let _ = writeln!(out, "{k},{n},{},{}", fmt_f64(z.re), fmt_f64(z.im));
        }
    }
    out
}

/// `n,phase`.
pub fn phases_from_csv(text: &str) -> Result<PhaseTable> {
    let mut pairs = Vec::new();
    for (line, f) in rows(text, "n,phase")? {
        pairs.push((parse_i64(f[0], line)?, parse_f64(f[1], line)?));
    }
    Ok(PhaseTable::new(pairs))
}

/// `theta,re,im` samples on `points` uniform nodes.
pub fn density_to_csv(p: &TrigPolynomial, points: usize) -> String {
    let mut out = String::from("theta,re,im\n");
    for (t, z) in p.sample(points) {
        let _ = writeln!(out, "{},{},{}", fmt_f64(t), fmt_f64(z.re), fmt_f64(z.im));
    }
    out
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| Error::Io(format!("{path}: {e}")))
}

/// Parses a family spec such as `family=ones`, `family=gram vectors=g.csv`,
/// `family=rank_one v=v.csv u=u.csv`, `family=phase phases=p.csv` or
/// `family=dense matrix=m.csv radius=8`. A bare name is read as `family=<name>`.
///
/// Vectors outside a gram table are zero. Rank-one vectors are tagged `Hinf`
/// with their sup as bound.
pub fn parse_family(spec: &str) -> Result<StructureMatrix> {
    let mut params: BTreeMap<&str, &str> = BTreeMap::new();
    for token in spec.split_whitespace() {
        let (k, v) = token.split_once('=').unwrap_or(("family", token));
        if params.insert(k, v).is_some() {
            return Err(Error::Parse(format!("key `{k}` given twice in family spec")));
        }
    }
    let family = params
        .remove("family")
        .ok_or_else(|| Error::Parse("family spec has no `family=` entry".into()))?;
    let mut take = |key: &str| -> Result<&str> {
        params
            .remove(key)
            .ok_or_else(|| Error::Parse(format!("family `{family}` requires `{key}=`")))
    };
    let c = match family {
        "gram" => {
            let table = gram_table_from_csv(&read(take("vectors")?)?)?;
            structure::gram(table, FiniteVector::new())
        }
        "rank_one" => {
            let v = vector_from_csv(&read(take("v")?)?)?;
            let u = vector_from_csv(&read(take("u")?)?)?;
            structure::rank_one(bounded(v), bounded(u))
        }
        "phase" => structure::phase_matrix(phases_from_csv(&read(take("phases")?)?)?),
        "dense" => {
            let path = take("matrix")?;
            let radius: Option<usize> = match params.remove("radius") {
                Some(r) => Some(
                    r.parse()
                        .map_err(|_| Error::Parse(format!("radius `{r}` is not a nonnegative integer")))?,
                ),
                None => None,
            };
            structure::dense(matrix_from_csv(&read(path)?, radius)?)
        }
        name => structure::builtin(name)?,
    };
    if let Some(k) = params.keys().next() {
        return Err(Error::Parse(format!("unexpected key `{k}` for family `{family}`")));
    }
    Ok(c)
}

fn bounded(v: FiniteVector) -> GeneralizedVector {
    let bound = v.iter().map(|(_, z)| z.norm()).fold(0.0, f64::max);
    GeneralizedVector::new(Membership::Hinf { bound }, move |n| v.get(n))
}
