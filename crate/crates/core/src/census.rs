//! Bundled table of prime knots with DT codes and geometric types.
//!
//! CSV with header `name,dt,type,params`; `#` lines are comments and the
//! first of them names the data source. Torus entries are cross-checked on
//! load: the Alexander polynomial of the DT-derived Wirtinger presentation
//! must equal the closed torus formula.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_integer::Integer;
use serde::Deserialize;
use thiserror::Error;

use crate::diagram::dt_to_diagram;
use crate::group::torus_alexander;
use crate::notation::{parse_dt, DtCode};
use crate::presentation::{alexander_polynomial, wirtinger};

/// The bundled table of prime knots through nine crossings.
pub const BUNDLED_CSV: &str = include_str!("../../../data/knots9.csv");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("cannot read census file: {0}")]
    Io(String),
    #[error("census parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("cross-check failed for `{name}`: {reason}")]
    CrossCheckFailed { name: String, reason: String },
    #[error("unknown table name `{0}`")]
    UnknownTableName(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeometricType {
    Torus,
    Hyperbolic,
    Satellite,
}

impl fmt::Display for GeometricType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeometricType::Torus => "torus",
            GeometricType::Hyperbolic => "hyperbolic",
            GeometricType::Satellite => "satellite",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusEntry {
    pub name: String,
    pub dt: DtCode,
    pub geometric_type: GeometricType,
    pub params: Option<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    entries: BTreeMap<String, CensusEntry>,
    provenance: String,
}

impl CensusTable {
    pub fn lookup(&self, name: &str) -> Result<&CensusEntry, CensusError> {
        self.entries
            .get(name)
            .ok_or_else(|| CensusError::UnknownTableName(name.to_string()))
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Entries in name order (`3_1` < `4_1` < … < `9_49`).
    pub fn entries(&self) -> impl Iterator<Item = &CensusEntry> {
        let mut v: Vec<&CensusEntry> = self.entries.values().collect();
        v.sort_by_key(|e| name_key(&e.name));
        v.into_iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn name_key(name: &str) -> (u32, u32, String) {
    let mut it = name.splitn(2, '_');
    let a = it.next().and_then(|s| s.parse().ok()).unwrap_or(u32::MAX);
    let b = it.next().and_then(|s| s.parse().ok()).unwrap_or(u32::MAX);
    (a, b, name.to_string())
}

pub fn lookup<'a>(t: &'a CensusTable, name: &str) -> Result<&'a CensusEntry, CensusError> {
    t.lookup(name)
}

#[derive(Deserialize)]
struct Row {
    name: String,
    dt: String,
    #[serde(rename = "type")]
    kind: String,
    params: String,
}

pub fn load_census(path: &Path) -> Result<CensusTable, CensusError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CensusError::Io(format!("{}: {e}", path.display())))?;
    parse_census(&text)
}

pub fn bundled_census() -> Result<CensusTable, CensusError> {
    parse_census(BUNDLED_CSV)
}

pub fn parse_census(text: &str) -> Result<CensusTable, CensusError> {
    let perr = |line: usize, msg: String| CensusError::ParseError { line, msg };
    let provenance = text
        .lines()
        .find_map(|l| l.trim_start().strip_prefix('#'))
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .ok_or_else(|| perr(1, "first comment line must name the data provenance".into()))?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| perr(1, e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["name", "dt", "type", "params"] {
        return Err(perr(
            1,
            format!(
                "expected header name,dt,type,params, got {}",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut entries = BTreeMap::new();
    for rec in rdr.deserialize::<Row>() {
        let row = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            perr(line, e.to_string())
        })?;
        let entry = entry_from_row(row).map_err(|(msg, name)| match name {
            Some(name) => CensusError::CrossCheckFailed { name, reason: msg },
            None => perr(0, msg),
        })?;
        if entries.contains_key(&entry.name) {
            return Err(perr(0, format!("duplicate name `{}`", entry.name)));
        }
        entries.insert(entry.name.clone(), entry);
    }
    if entries.is_empty() {
        return Err(perr(0, "census has no entries".into()));
    }
    Ok(CensusTable {
        entries,
        provenance,
    })
}

/// Errors carry the entry name when the failure is a cross-check failure.
fn entry_from_row(row: Row) -> Result<CensusEntry, (String, Option<String>)> {
    let name = row.name.clone();
    let plain = |m: String| (format!("{name}: {m}"), None);
    let dt = parse_dt(&row.dt).map_err(|e| plain(e.to_string()))?;
    let geometric_type = match row.kind.as_str() {
        "torus" => GeometricType::Torus,
        "hyperbolic" => GeometricType::Hyperbolic,
        "satellite" => GeometricType::Satellite,
        other => return Err(plain(format!("unknown type `{other}`"))),
    };
    let params = if row.params.trim().is_empty() {
        None
    } else {
        let v: Vec<i64> = row
            .params
            .split_whitespace()
            .map(|t| t.parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| plain(format!("bad params `{}`", row.params)))?;
        match v[..] {
            [p, q] => Some((p, q)),
            _ => {
                return Err(plain(format!(
                    "params must be a pair, got `{}`",
                    row.params
                )))
            }
        }
    };
    let entry = CensusEntry {
        name: row.name,
        dt,
        geometric_type,
        params,
    };
    if geometric_type == GeometricType::Torus {
        cross_check(&entry).map_err(|m| (m, Some(entry.name.clone())))?;
    }
    Ok(entry)
}

fn cross_check(e: &CensusEntry) -> Result<(), String> {
    let (p, q) = e.params.ok_or("torus entry without params")?;
    let g = p.gcd(&q);
    if g != 1 || p.abs() < 2 || q.abs() < 2 {
        return Err(format!(
            "torus params ({p},{q}) are not a non-trivial coprime pair"
        ));
    }
    let d = dt_to_diagram(&e.dt).map_err(|err| err.to_string())?;
    let (grp, _) = wirtinger(&d);
    let got = alexander_polynomial(&grp).map_err(|err| err.to_string())?;
    let want = torus_alexander(p, q);
    if got != want {
        return Err(format!(
            "Alexander polynomial {got} differs from torus({p},{q}) formula {want}"
        ));
    }
    Ok(())
}
