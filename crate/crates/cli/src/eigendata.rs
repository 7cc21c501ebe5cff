//! The line-oriented `eigendata v1` format for Hecke eigenvalues.
//!
//! ```text
//! # eigendata v1
//! weight 12
//! level 1
//! role elliptic
//! minpoly 0 1
//!
//! q= 2 : -24
//! q= 3 : 252
//! ```
//!
//! `minpoly` lists integer coefficients in ascending order and must be
//! monic. Each row gives the eigenvalue in the power basis of a root of the
//! minimal polynomial, coordinates written as integers or `num/den`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use eiscong::exactmath::{factor_poly_rational, format_rational, is_prime, parse_rational};
use eiscong::{EigenSystem, NFElement, NumberFieldCtx, PolyOverQ};

pub const MAGIC: &str = "# eigendata v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Elliptic,
    Genus2,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Elliptic => "elliptic",
            Role::Genus2 => "genus2",
        })
    }
}

impl FromStr for Role {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "elliptic" => Ok(Role::Elliptic),
            "genus2" => Ok(Role::Genus2),
            other => Err(format!("unknown role {other:?}")),
        }
    }
}

#[derive(Debug, Error)]
pub enum EigenDataError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header field {0}")]
    MissingHeader(&'static str),
    #[error("minimal polynomial is reducible over Q")]
    Reducible,
    #[error("no eigenvalues")]
    NoEigenvalues,
    #[error(transparent)]
    Library(#[from] eiscong::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// A parsed eigenvalue file.
#[derive(Clone, Debug)]
pub struct EigenDataFile {
    pub weight: i64,
    pub level: u64,
    pub role: Role,
    pub system: EigenSystem,
}

fn syntax(line: usize, msg: impl Into<String>) -> EigenDataError {
    EigenDataError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn header_value<T: FromStr>(line: usize, rest: &str) -> Result<T, EigenDataError> {
    rest.trim()
        .parse()
        .map_err(|_| syntax(line, format!("cannot parse {:?}", rest.trim())))
}

pub fn parse(text: &str) -> Result<EigenDataFile, EigenDataError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim_end() == MAGIC => {}
        _ => return Err(syntax(1, format!("expected {MAGIC:?}"))),
    }
    let (mut weight, mut level, mut role, mut minpoly) = (None, None, None, None);
    let mut rows: Vec<(usize, u64, Vec<&str>)> = Vec::new();
    for (n, raw) in lines {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("q=") {
            let (q, coords) = rest
                .split_once(':')
                .ok_or_else(|| syntax(n, "row needs ':'"))?;
            let q: u64 = header_value(n, q)?;
            if !is_prime(q) {
                return Err(syntax(n, format!("{q} is not prime")));
            }
            if let Some((_, prev, _)) = rows.last() {
                if q <= *prev {
                    return Err(syntax(n, format!("q = {q} does not increase")));
                }
            }
            rows.push((n, q, coords.split_whitespace().collect()));
            continue;
        }
        if !rows.is_empty() {
            return Err(syntax(n, "header line after eigenvalue rows"));
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match key {
            "weight" => weight = Some(header_value::<i64>(n, rest)?),
            "level" => level = Some(header_value::<u64>(n, rest)?),
            "role" => role = Some(rest.trim().parse::<Role>().map_err(|e| syntax(n, e))?),
            "minpoly" => {
                let coeffs = rest
                    .split_whitespace()
                    .map(|c| {
                        c.parse::<BigInt>()
                            .map_err(|_| syntax(n, format!("bad coefficient {c:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let poly = PolyOverQ::from_ints(coeffs);
                if poly.degree().unwrap_or(0) < 1 || !poly.is_monic() {
                    return Err(syntax(n, "minpoly must be monic of positive degree"));
                }
                minpoly = Some(poly);
            }
            other => return Err(syntax(n, format!("unknown header field {other:?}"))),
        }
    }
    let weight = weight.ok_or(EigenDataError::MissingHeader("weight"))?;
    let level = level.ok_or(EigenDataError::MissingHeader("level"))?;
    let role = role.ok_or(EigenDataError::MissingHeader("role"))?;
    let minpoly = minpoly.ok_or(EigenDataError::MissingHeader("minpoly"))?;
    if rows.is_empty() {
        return Err(EigenDataError::NoEigenvalues);
    }
    if minpoly.degree() > Some(1) && !factor_poly_rational(&minpoly)?.is_irreducible() {
        return Err(EigenDataError::Reducible);
    }
    let ctx = NumberFieldCtx::new(minpoly)?;
    let d = ctx.degree();
    let mut values = BTreeMap::new();
    for (n, q, coords) in rows {
        if coords.len() != d {
            return Err(syntax(
                n,
                format!("row has {} coordinates, field degree is {d}", coords.len()),
            ));
        }
        let coords = coords
            .iter()
            .map(|c| parse_rational(c).map_err(|e| syntax(n, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        values.insert(q, NFElement::from_coords(ctx.clone(), coords)?);
    }
    let system = EigenSystem {
        weight,
        level,
        ctx,
        values,
        normalized: true,
    };
    Ok(EigenDataFile {
        weight,
        level,
        role,
        system,
    })
}

pub fn read(path: &Path) -> Result<EigenDataFile, EigenDataError> {
    let text = std::fs::read_to_string(path).map_err(|source| EigenDataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

/// Serialize a system; `parse` of the result reproduces it exactly.
pub fn render(system: &EigenSystem, role: Role) -> String {
    let mut out = String::new();
    let poly = system.ctx.minpoly();
    let coeffs: Vec<String> = poly.coeffs().iter().map(format_rational).collect();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "weight {}", system.weight);
    let _ = writeln!(out, "level {}", system.level);
    let _ = writeln!(out, "role {role}");
    let _ = writeln!(out, "minpoly {}", coeffs.join(" "));
    out.push('\n');
    for (q, v) in &system.values {
        let coords: Vec<String> = v.coords().iter().map(format_rational).collect();
        let _ = writeln!(out, "q= {q} : {}", coords.join(" "));
    }
    out
}

pub fn write(path: &Path, system: &EigenSystem, role: Role) -> Result<(), EigenDataError> {
    std::fs::write(path, render(system, role)).map_err(|source| EigenDataError::Io {
        path: path.display().to_string(),
        source,
    })
}
