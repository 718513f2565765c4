//! Variety files and JSON structure constants.
//!
//! A JSON structure is an object with `dim` and either `left` and `right`
//! (the tables of `⊣` and `⊢`) or `bracket` (a Leibniz bracket). Entry
//! `[i][j]` of a table is the coordinate vector of the product of basis
//! elements `i` and `j`. Scalars are strings `"p/q"` or integers; floats are
//! rejected. Optional keys: `name`, `labels`.

use std::path::Path;

use divaria_core::dialgebra::{leibniz_to_dialgebra, FDAlgebra, FDDialgebra, Table};
use divaria_core::dsl::parse_variety;
use divaria_core::operads::IdentitySet;
use divaria_core::{Error, Rational, Result};
use serde_json::Value;

/// Data files shipped with the tool, found by file name when no such path exists.
pub const BUNDLED: &[(&str, &str)] = &[
    ("associative.var", include_str!("../data/associative.var")),
    ("commutative.var", include_str!("../data/commutative.var")),
    ("alternative.var", include_str!("../data/alternative.var")),
    ("lie.var", include_str!("../data/lie.var")),
    ("jordan.var", include_str!("../data/jordan.var")),
    ("leibniz2.json", include_str!("../data/leibniz2.json")),
    ("sl2.json", include_str!("../data/sl2.json")),
];

fn input(msg: String) -> Error {
    Error::Input(msg)
}

/// Reads `name` from disk, falling back to a bundled file of that name.
pub fn read_source(name: &str) -> Result<String> {
    let path = Path::new(name);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|e| input(format!("cannot read {name}: {e}")));
    }
    let file = path.file_name().and_then(|f| f.to_str()).unwrap_or(name);
    BUNDLED
        .iter()
        .find(|(n, _)| *n == file)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| input(format!("cannot read {name}: no such file")))
}

pub fn load_variety(name: &str) -> Result<IdentitySet<Rational>> {
    parse_variety(&read_source(name)?).map_err(|e| input(format!("{name}: {}", strip(&e))))
}

fn strip(e: &Error) -> String {
    match e {
        Error::Input(m) | Error::Precondition(m) | Error::Resource(m) => m.clone(),
    }
}

/// Structure constants read from JSON.
#[derive(Clone, Debug)]
pub struct Structure {
    pub name: Option<String>,
    pub labels: Option<Vec<String>>,
    pub tables: Tables,
}

#[derive(Clone, Debug)]
pub enum Tables {
    Dialgebra(FDDialgebra<Rational>),
    Leibniz(FDAlgebra<Rational>),
}

pub fn parse_scalar(v: &Value) -> std::result::Result<Rational, String> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            let parsed = if s.contains('/') { s.parse::<Rational>().ok() } else { s.parse().ok().map(Rational::from_integer) };
            match parsed {
                Some(q) => Ok(q),
                None if s.ends_with("/0") => Err(format!("zero denominator in {s:?}")),
                None => Err(format!("{s:?} is not a rational number p/q")),
            }
        }
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            n.to_string().parse().map(Rational::from_integer).map_err(|_| format!("bad integer {n}"))
        }
        Value::Number(n) => Err(format!("{n} is a float; write rationals as strings \"p/q\"")),
        other => Err(format!("expected a scalar, found {other}")),
    }
}

fn parse_table(v: &Value, dim: usize, key: &str) -> Result<Table<Rational>> {
    let shape_err = || input(format!("\"{key}\" must be a {dim}×{dim} array of vectors of length {dim}"));
    let rows = v.as_array().filter(|r| r.len() == dim).ok_or_else(shape_err)?;
    let mut table = Vec::with_capacity(dim);
    for (i, row) in rows.iter().enumerate() {
        let cells = row.as_array().filter(|r| r.len() == dim).ok_or_else(shape_err)?;
        let mut out = Vec::with_capacity(dim);
        for (j, cell) in cells.iter().enumerate() {
            let entries = cell.as_array().filter(|r| r.len() == dim).ok_or_else(shape_err)?;
            let vec = entries
                .iter()
                .enumerate()
                .map(|(k, x)| parse_scalar(x).map_err(|m| input(format!("{key}[{i}][{j}][{k}]: {m}"))))
                .collect::<Result<Vec<_>>>()?;
            out.push(vec);
        }
        table.push(out);
    }
    Ok(table)
}

pub fn parse_structure(text: &str) -> Result<Structure> {
    let v: Value = serde_json::from_str(text).map_err(|e| input(format!("JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| input("JSON: expected an object".into()))?;
    for key in obj.keys() {
        if !["dim", "left", "right", "bracket", "name", "labels"].contains(&key.as_str()) {
            return Err(input(format!("JSON: unknown key \"{key}\"")));
        }
    }
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .filter(|&d| d > 0)
        .ok_or_else(|| input("JSON: \"dim\" must be a positive integer".into()))? as usize;
    let name = obj.get("name").map(|n| n.as_str().map(str::to_string).ok_or_else(|| input("\"name\" must be a string".into()))).transpose()?;
    let labels = match obj.get("labels") {
        None => None,
        Some(l) => {
            let ls: Option<Vec<String>> =
                l.as_array().and_then(|a| a.iter().map(|x| x.as_str().map(str::to_string)).collect::<Option<_>>());
            match ls {
                Some(ls) if ls.len() == dim => Some(ls),
                _ => return Err(input(format!("\"labels\" must be {dim} strings"))),
            }
        }
    };
    let tables = match (obj.get("bracket"), obj.get("left"), obj.get("right")) {
        (Some(b), None, None) => Tables::Leibniz(FDAlgebra::new(dim, parse_table(b, dim, "bracket")?)?),
        (None, Some(l), Some(r)) => {
            Tables::Dialgebra(FDDialgebra::new(dim, parse_table(l, dim, "left")?, parse_table(r, dim, "right")?)?)
        }
        _ => return Err(input("JSON: give either \"bracket\" or both \"left\" and \"right\"".into())),
    };
    Ok(Structure { name, labels, tables })
}

fn labelled(mut d: FDDialgebra<Rational>, labels: &Option<Vec<String>>) -> FDDialgebra<Rational> {
    if let Some(l) = labels {
        d.labels = l.clone();
    }
    d
}

/// A dialgebra; a Leibniz bracket is imported as its Lie dialgebra.
pub fn load_dialgebra(name: &str) -> Result<FDDialgebra<Rational>> {
    let s = parse_structure(&read_source(name)?).map_err(|e| input(format!("{name}: {}", strip(&e))))?;
    let d = match s.tables {
        Tables::Dialgebra(d) => d,
        Tables::Leibniz(l) => leibniz_to_dialgebra(&l).map_err(|e| input(format!("{name}: {}", strip(&e))))?,
    };
    Ok(labelled(d, &s.labels))
}

/// A left Leibniz algebra with its basis labels. A dialgebra file is accepted
/// when it is the Lie dialgebra of its `⊢` table.
pub fn load_leibniz(name: &str) -> Result<(FDAlgebra<Rational>, Vec<String>)> {
    let s = parse_structure(&read_source(name)?).map_err(|e| input(format!("{name}: {}", strip(&e))))?;
    let g = match s.tables {
        Tables::Leibniz(l) => l,
        Tables::Dialgebra(d) => {
            let g = d.right_algebra();
            for i in 0..d.dim {
                for j in 0..d.dim {
                    let expected: Vec<Rational> = g.table[j][i].iter().map(|x| -x.clone()).collect();
                    if d.left[i][j] != expected {
                        return Err(input(format!(
                            "{name}: not a Lie dialgebra, e{0}-|e{1} ≠ -(e{1}|-e{0})",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
            g
        }
    };
    let labels = s.labels.clone().unwrap_or_else(|| (1..=g.dim).map(|i| format!("e{i}")).collect());
    Ok((g, labels))
}

/// Parses cycle notation such as `(123)(45)` or `(1 2 3)`; digits run
/// together only when the degree is below 10.
pub fn parse_cycles(n: usize, text: &str) -> Result<divaria_core::Permutation> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| input(format!("cycle notation: expected '(' in {text:?}")))?;
        let end = body.find(')').ok_or_else(|| input(format!("cycle notation: unclosed '(' in {text:?}")))?;
        let inner = &body[..end];
        let entries: Vec<usize> = if inner.contains([' ', ',']) {
            inner
                .split([' ', ','])
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().map_err(|_| input(format!("cycle notation: bad entry {s:?}"))))
                .collect::<Result<_>>()?
        } else if n < 10 {
            inner
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| input(format!("cycle notation: bad entry {c:?}"))))
                .collect::<Result<_>>()?
        } else {
            return Err(input("cycle notation: separate entries by spaces when the degree is 10 or more".into()));
        };
        if !entries.is_empty() {
            cycles.push(entries);
        }
        rest = body[end + 1..].trim_start();
    }
    divaria_core::Permutation::from_cycles(n, &cycles)
}
