//! Text formats: node files, trial-basis specs, basis tables, and float
//! formatting shared by the CSV and JSON writers.
//!
//! Node files are CSV with one node per row and `d` columns. Lines starting
//! with `#` are comments and a non-numeric first row is taken as a header.
//! Basis tables have the header `index,family,e1,..,ed` and one function per
//! row with a 1-based index.

use std::fmt;
use std::str::FromStr;

use crate::basis::{BasisFamily, BasisFunction, BasisSequence};
use crate::error::{Error, Result};
use crate::sparse_grid::smolyak_basis;
use crate::vandermonde::NodeSet;

/// Shortest decimal form of `x` rounded to 9 significant digits; non-finite
/// values become `inf`, `-inf` and `nan`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float");
    format!("{rounded}")
}

/// Reads `inf`, `-inf`, `nan` and ordinary decimals.
pub fn parse_float(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" | "Infinity" => Some(f64::INFINITY),
        "-inf" | "-Infinity" => Some(f64::NEG_INFINITY),
        "nan" | "NaN" => Some(f64::NAN),
        t => t.parse().ok(),
    }
}

/// JSON number for finite `x` (9 significant digits), string otherwise.
pub fn json_float(x: f64) -> serde_json::Value {
    let s = format_float(x);
    if x.is_finite() {
        serde_json::Value::Number(serde_json::Number::from_f64(s.parse().expect("finite")).expect("finite"))
    } else {
        serde_json::Value::String(s)
    }
}

fn csv_reader(input: &[u8]) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn parse_error(line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line: line as usize,
        message: message.into(),
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    parse_error(line, e.to_string())
}

/// Parses a node file. `dim` is inferred from the first data row unless given.
pub fn parse_nodes(input: &str, dim: Option<usize>) -> Result<NodeSet> {
    let mut reader = csv_reader(input.as_bytes());
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut width = dim;
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, &str> =
            record.iter().map(|f| f.parse::<f64>().map_err(|_| f)).collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if first && record.iter().all(|f| f.parse::<f64>().is_err()) => {
                first = false;
                continue;
            }
            Err(field) => return Err(parse_error(line, format!("not a number: {field:?}"))),
        };
        first = false;
        let expected = *width.get_or_insert(row.len());
        if row.len() != expected {
            return Err(parse_error(
                line,
                format!("expected {expected} coordinates, found {}", row.len()),
            ));
        }
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(parse_error(line, format!("non-finite coordinate {bad}")));
        }
        points.push(row);
    }
    let dim = width.ok_or_else(|| parse_error(0, "no nodes"))?;
    NodeSet::new(dim, points)
}

/// Parses one value per row (first column), e.g. function values at nodes.
pub fn parse_values(input: &str) -> Result<Vec<f64>> {
    let mut reader = csv_reader(input.as_bytes());
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 1 {
            return Err(parse_error(line, format!("expected 1 value, found {}", record.len())));
        }
        let v = parse_float(&record[0]).ok_or_else(|| parse_error(line, format!("not a number: {:?}", &record[0])))?;
        if !v.is_finite() {
            return Err(parse_error(line, format!("non-finite value {v}")));
        }
        values.push(v);
    }
    Ok(values)
}

/// Node file text, one node per line.
pub fn write_nodes(nodes: &NodeSet) -> String {
    let mut out = String::new();
    for p in nodes.points() {
        let row: Vec<String> = p.iter().map(|&v| format_float(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Trial-basis specification: `monomial:degree=K`, `chebyshev:degree=K` or
/// `smolyak:k=K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSpec {
    TotalDegree { family: BasisFamily, degree: u32 },
    Smolyak { level: u32 },
}

impl BasisSpec {
    pub fn build(self, dim: usize) -> Result<BasisSequence> {
        match self {
            BasisSpec::TotalDegree { family, degree } => BasisSequence::total_degree(family, dim, degree),
            BasisSpec::Smolyak { level } => smolyak_basis(dim, level),
        }
    }
}

impl FromStr for BasisSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("bad basis spec {s:?}, expected e.g. monomial:degree=2"));
        let (kind, param) = s.trim().split_once(':').ok_or_else(bad)?;
        let (key, value) = param.split_once('=').ok_or_else(bad)?;
        let value: u32 = value.trim().parse().map_err(|_| bad())?;
        match (kind.trim(), key.trim()) {
            ("smolyak", "k") => Ok(BasisSpec::Smolyak { level: value }),
            (family, "degree") => Ok(BasisSpec::TotalDegree {
                family: family.parse().map_err(|_| bad())?,
                degree: value,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for BasisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSpec::TotalDegree { family, degree } => write!(f, "{}:degree={degree}", family.name()),
            BasisSpec::Smolyak { level } => write!(f, "smolyak:k={level}"),
        }
    }
}

pub fn write_basis_table(basis: &BasisSequence) -> String {
    let mut out = String::from("index,family");
    for i in 1..=basis.dim() {
        out.push_str(&format!(",e{i}"));
    }
    out.push('\n');
    for (i, phi) in basis.functions().iter().enumerate() {
        out.push_str(&format!("{},{}", i + 1, phi.family.name()));
        for e in phi.index.exponents() {
            out.push_str(&format!(",{e}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_basis_table(input: &str) -> Result<BasisSequence> {
    let mut reader = csv_reader(input.as_bytes());
    let mut records = reader.records();
    let header = loop {
        match records.next() {
            None => return Err(parse_error(0, "empty basis table")),
            Some(r) => {
                let r = r.map_err(csv_error)?;
                if !r.iter().all(str::is_empty) {
                    break r;
                }
            }
        }
    };
    let header_line = header.position().map(|p| p.line()).unwrap_or(0);
    if header.len() < 3 || &header[0] != "index" || &header[1] != "family" {
        return Err(parse_error(header_line, "expected header index,family,e1,.."));
    }
    let dim = header.len() - 2;
    let mut functions = Vec::new();
    for record in records {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != dim + 2 {
            return Err(parse_error(
                line,
                format!("expected {} fields, found {}", dim + 2, record.len()),
            ));
        }
        let index: usize = record[0]
            .parse()
            .map_err(|_| parse_error(line, format!("bad index {:?}", &record[0])))?;
        if index != functions.len() + 1 {
            return Err(parse_error(
                line,
                format!("expected index {}, found {index}", functions.len() + 1),
            ));
        }
        let family: BasisFamily = record[1]
            .parse()
            .map_err(|_| parse_error(line, format!("unknown family {:?}", &record[1])))?;
        let exponents = record
            .iter()
            .skip(2)
            .map(|e| {
                e.parse::<u32>()
                    .map_err(|_| parse_error(line, format!("bad exponent {e:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        functions.push(match family {
            BasisFamily::Monomial => BasisFunction::monomial(exponents)?,
            BasisFamily::Chebyshev => BasisFunction::chebyshev(exponents)?,
        });
    }
    BasisSequence::new(dim, functions).map_err(|e| match e {
        Error::DuplicateBasisFunction(s) => parse_error(0, format!("duplicate basis function {s}")),
        other => other,
    })
}
