//! Canonical JSON for structure constants.
//!
//! `.lie`: `{dim, basis_names, brackets: [[i, j, k, "p/q"], ...]}` with
//! `i < j`, sorted. `.alg`: `{dim, basis_names, unit: [[k, "p/q"], ...],
//! mult: [[i, j, k, "p/q"], ...]}`, sorted. One entry per line, so equal
//! algebras serialize to equal bytes.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::composition::StructureAlgebra;
use crate::exactlin::sparse::{self, SVec};
use crate::exactlin::Rat;
use crate::liealg::LieAlgebra;
use crate::tits::{Summand, TitsAlgebra, TitsCoefficients};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("line {line}, column {column}: {section} entry {index}: {msg}")]
    Entry { line: usize, column: usize, section: &'static str, index: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json { line: e.line(), column: e.column(), msg: e.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Lie(LieAlgebra),
    Alg(StructureAlgebra),
}

fn names_json(names: &[String]) -> String {
    serde_json::to_string(names).expect("strings serialize")
}

fn write_rows<I: Iterator<Item = String>>(out: &mut String, key: &str, rows: I, last: bool) {
    let rows: Vec<String> = rows.collect();
    if rows.is_empty() {
        let _ = write!(out, "  \"{key}\": []");
    } else {
        let _ = writeln!(out, "  \"{key}\": [");
        let _ = writeln!(out, "    {}", rows.join(",\n    "));
        out.push_str("  ]");
    }
    out.push_str(if last { "\n" } else { ",\n" });
}

pub fn lie_to_json(l: &LieAlgebra) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"dim\": {},", l.dim());
    let _ = writeln!(out, "  \"basis_names\": {},", names_json(l.basis_names()));
    write_rows(&mut out, "brackets", l.entries().map(|(i, j, k, c)| format!("[{i},{j},{k},\"{c}\"]")), true);
    out.push_str("}\n");
    out
}

pub fn alg_to_json(a: &StructureAlgebra) -> String {
    let n = a.dim;
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"dim\": {n},");
    let _ = writeln!(out, "  \"basis_names\": {},", names_json(&a.basis_names));
    write_rows(&mut out, "unit", a.unit.iter().map(|(k, c)| format!("[{k},\"{c}\"]")), false);
    let mult = (0..n * n).flat_map(|ij| {
        let (i, j) = (ij / n, ij % n);
        a.mult[ij].iter().map(move |(k, c)| format!("[{i},{j},{k},\"{c}\"]"))
    });
    write_rows(&mut out, "mult", mult, true);
    out.push_str("}\n");
    out
}

/// SHA-256 of the sorted constant list, one `i j k c` line per constant.
pub fn lie_checksum(l: &LieAlgebra) -> String {
    let mut h = Sha256::new();
    for (i, j, k, c) in l.entries() {
        h.update(format!("{i} {j} {k} {c}\n").as_bytes());
    }
    hex::encode(h.finalize())
}

pub fn bytes_checksum(b: &[u8]) -> String {
    hex::encode(Sha256::digest(b))
}

/// Line and column of each element of the top-level array `key`.
fn element_positions(text: &str, key: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 0usize);
    let mut depth = 0usize;
    let mut in_str = false;
    let mut escaped = false;
    let mut cur = String::new();
    let mut last_key: Option<String> = None;
    let mut in_target = false;
    let mut expect_elem = false;
    for ch in text.chars() {
        if ch == '\n' {
            line += 1;
            col = 0;
        } else {
            col += 1;
        }
        if in_str {
            if escaped {
                escaped = false;
            } else if ch == '\\' {
                escaped = true;
            } else if ch == '"' {
                in_str = false;
                if depth == 1 {
                    last_key = Some(std::mem::take(&mut cur));
                }
            } else if depth == 1 {
                cur.push(ch);
            }
            continue;
        }
        if in_target && depth == 2 && expect_elem && !ch.is_whitespace() && ch != ']' {
            out.push((line, col));
            expect_elem = false;
        }
        match ch {
            '"' => {
                in_str = true;
                cur.clear();
            }
            '[' | '{' => {
                depth += 1;
                if depth == 2 && ch == '[' && last_key.as_deref() == Some(key) {
                    in_target = true;
                    expect_elem = true;
                }
            }
            ']' | '}' => {
                if depth == 2 {
                    in_target = false;
                }
                depth = depth.saturating_sub(1);
            }
            ',' if in_target && depth == 2 => expect_elem = true,
            _ => {}
        }
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLie {
    dim: usize,
    basis_names: Vec<String>,
    brackets: Vec<(usize, usize, usize, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlg {
    dim: usize,
    basis_names: Vec<String>,
    unit: Vec<(usize, String)>,
    mult: Vec<(usize, usize, usize, String)>,
}

struct Locator<'a> {
    text: &'a str,
    section: &'static str,
    positions: Option<Vec<(usize, usize)>>,
}

impl Locator<'_> {
    fn err(&mut self, index: usize, msg: impl Into<String>) -> IoError {
        let (text, section) = (self.text, self.section);
        let pos = self.positions.get_or_insert_with(|| element_positions(text, section));
        let (line, column) = pos.get(index).copied().unwrap_or((0, 0));
        IoError::Entry { line, column, section: self.section, index, msg: msg.into() }
    }
}

fn parse_const(loc: &mut Locator, index: usize, s: &str) -> Result<Rat, IoError> {
    let c = Rat::parse_canonical(s).map_err(|e| loc.err(index, e.to_string()))?;
    if c.is_zero() {
        return Err(loc.err(index, "zero constant"));
    }
    Ok(c)
}

fn check_names(dim: usize, names: &[String]) -> Result<(), IoError> {
    if names.len() != dim {
        return Err(IoError::Invalid(format!("dim is {dim} but {} basis names are given", names.len())));
    }
    Ok(())
}

pub fn lie_from_json(text: &str) -> Result<LieAlgebra, IoError> {
    let raw: RawLie = serde_json::from_str(text)?;
    check_names(raw.dim, &raw.basis_names)?;
    let n = raw.dim;
    let mut loc = Locator { text, section: "brackets", positions: None };
    let mut seen = HashSet::new();
    let mut entries = Vec::with_capacity(raw.brackets.len());
    for (idx, (i, j, k, s)) in raw.brackets.iter().enumerate() {
        if *i >= n || *j >= n || *k >= n {
            return Err(loc.err(idx, format!("index out of range for dim {n}")));
        }
        if i >= j {
            return Err(loc.err(idx, format!("antisymmetry violation: entries must have i < j, got ({i}, {j})")));
        }
        if !seen.insert((*i, *j, *k)) {
            return Err(loc.err(idx, format!("duplicate entry ({i}, {j}, {k})")));
        }
        entries.push((*i, *j, *k, parse_const(&mut loc, idx, s)?));
    }
    LieAlgebra::from_entries(n, raw.basis_names, entries).map_err(|e| IoError::Invalid(e.to_string()))
}

pub fn alg_from_json(text: &str) -> Result<StructureAlgebra, IoError> {
    let raw: RawAlg = serde_json::from_str(text)?;
    check_names(raw.dim, &raw.basis_names)?;
    let n = raw.dim;
    let mut loc = Locator { text, section: "unit", positions: None };
    let mut unit: SVec = Vec::new();
    let mut seen = HashSet::new();
    for (idx, (k, s)) in raw.unit.iter().enumerate() {
        if *k >= n {
            return Err(loc.err(idx, format!("index out of range for dim {n}")));
        }
        if !seen.insert(*k) {
            return Err(loc.err(idx, format!("duplicate entry {k}")));
        }
        unit.push((*k, parse_const(&mut loc, idx, s)?));
    }
    let mut loc = Locator { text, section: "mult", positions: None };
    let mut mult: Vec<SVec> = vec![Vec::new(); n * n];
    let mut seen = HashSet::new();
    for (idx, (i, j, k, s)) in raw.mult.iter().enumerate() {
        if *i >= n || *j >= n || *k >= n {
            return Err(loc.err(idx, format!("index out of range for dim {n}")));
        }
        if !seen.insert((*i, *j, *k)) {
            return Err(loc.err(idx, format!("duplicate entry ({i}, {j}, {k})")));
        }
        mult[i * n + j].push((*k, parse_const(&mut loc, idx, s)?));
    }
    Ok(StructureAlgebra {
        dim: n,
        basis_names: raw.basis_names,
        unit: sparse::normalize(unit),
        mult: mult.into_iter().map(sparse::normalize).collect(),
    })
}

/// Parses either file kind, telling them apart by their keys.
pub fn parse_document(text: &str) -> Result<Document, IoError> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    match v.as_object() {
        Some(o) if o.contains_key("brackets") => Ok(Document::Lie(lie_from_json(text)?)),
        Some(o) if o.contains_key("mult") => Ok(Document::Alg(alg_from_json(text)?)),
        _ => Err(IoError::Invalid("expected an object with \"brackets\" or \"mult\"".into())),
    }
}

impl Document {
    pub fn to_json(&self) -> String {
        match self {
            Document::Lie(l) => lie_to_json(l),
            Document::Alg(a) => alg_to_json(a),
        }
    }
}

pub fn read_document(path: &Path) -> Result<Document, IoError> {
    parse_document(&std::fs::read_to_string(path)?)
}

/// Context of a constructed algebra, stored next to its `.lie` file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TitsSidecar {
    pub summand_tags: Vec<Summand>,
    pub gammas: Vec<Rat>,
    pub jordan_label: Option<String>,
    pub jordan_gammas: Vec<Rat>,
    pub rho: [Rat; 3],
    pub mu: TitsCoefficients,
}

impl TitsSidecar {
    pub fn of(g: &TitsAlgebra) -> TitsSidecar {
        TitsSidecar {
            summand_tags: g.summand_tags.clone(),
            gammas: g.octonion.gammas.clone(),
            jordan_label: g.jordan.label.clone(),
            jordan_gammas: g.jordan.coord.gammas.clone(),
            rho: g.jordan.rho.clone(),
            mu: g.coeffs.clone(),
        }
    }

    /// Coordinate subspaces spanned by the basis elements with the given tag.
    pub fn tagged(&self, tag: Summand) -> Vec<usize> {
        self.summand_tags.iter().enumerate().filter(|(_, t)| **t == tag).map(|(i, _)| i).collect()
    }
}

pub fn sidecar_path(lie_path: &Path) -> PathBuf {
    lie_path.with_extension("meta.json")
}

/// Writes `<path>` and its sidecar; returns the constant checksum.
pub fn write_tits(g: &TitsAlgebra, path: &Path) -> Result<String, IoError> {
    std::fs::write(path, lie_to_json(&g.lie))?;
    let meta = serde_json::to_string_pretty(&TitsSidecar::of(g)).expect("sidecar serializes") + "\n";
    std::fs::write(sidecar_path(path), meta)?;
    Ok(lie_checksum(&g.lie))
}

pub fn read_sidecar(path: &Path) -> Result<Option<TitsSidecar>, IoError> {
    let p = sidecar_path(path);
    if !p.exists() {
        return Ok(None);
    }
    Ok(Some(serde_json::from_str(&std::fs::read_to_string(p)?)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::build_composition;
    use crate::liealg::so3_compact;

    #[test]
    fn lie_round_trip() {
        let l = so3_compact();
        let s = lie_to_json(&l);
        let back = lie_from_json(&s).unwrap();
        assert_eq!(back, l);
        assert_eq!(lie_to_json(&back), s);
        assert_eq!(lie_checksum(&back), lie_checksum(&l));
    }

    #[test]
    fn alg_round_trip() {
        let o = build_composition(&[Rat::int(-1), Rat::int(-1), Rat::int(1)]).unwrap();
        let s = alg_to_json(&o.alg);
        let back = alg_from_json(&s).unwrap();
        assert_eq!(back, o.alg);
        assert_eq!(alg_to_json(&back), s);
    }

    #[test]
    fn rejects_with_positions() {
        let s = lie_to_json(&so3_compact());
        let bad = s.replace("[0,1,2,\"1\"]", "[0,1,2,\"2/4\"]");
        match lie_from_json(&bad) {
            Err(IoError::Entry { line, index, .. }) => {
                assert_eq!(index, 0);
                assert_eq!(line, 5);
            }
            other => panic!("{other:?}"),
        }
        let dup = s.replace("[0,2,1,\"-1\"]", "[0,1,2,\"3\"]");
        let e = lie_from_json(&dup).unwrap_err();
        assert!(e.to_string().contains("duplicate"), "{e}");
        assert!(e.to_string().starts_with("line 6"), "{e}");
        let anti = s.replace("[1,2,0,\"1\"]", "[2,1,0,\"1\"]");
        assert!(lie_from_json(&anti).unwrap_err().to_string().contains("antisymmetry"));
        assert!(matches!(lie_from_json("{\"dim\": 3,"), Err(IoError::Json { .. })));
    }

    #[test]
    fn detects_kind() {
        let l = so3_compact();
        assert!(matches!(parse_document(&lie_to_json(&l)).unwrap(), Document::Lie(_)));
        let o = build_composition(&[Rat::int(-1)]).unwrap();
        assert!(matches!(parse_document(&alg_to_json(&o.alg)).unwrap(), Document::Alg(_)));
    }
}
