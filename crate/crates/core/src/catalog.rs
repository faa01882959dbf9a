//! Named octonion and Jordan algebras.

use serde::Serialize;

use crate::composition::{build_composition, AlgebraError, CompositionAlgebra};
use crate::exactlin::Rat;
use crate::jordan::{hermitian_jordan, jordan_catalog, JordanAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Octonion,
    Jordan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: Kind,
    pub gammas: Vec<Rat>,
    /// Diagonal of ϱ; `None` for octonion entries.
    pub rho: Option<[Rat; 3]>,
}

pub const OCTONION_NAMES: [&str; 2] = ["Oc", "Os"];

/// Jordan columns of the real-form grid.
pub const JORDAN_COLUMNS: [&str; 11] = ["Jc1", "Js1", "Jc2", "JII2", "Js2", "Jc4", "JII4", "Js4", "Jc8", "JII8", "Js8"];

pub fn octonion_gammas(name: &str) -> Option<Vec<Rat>> {
    match name {
        "Oc" => Some(vec![Rat::int(-1); 3]),
        "Os" => Some(vec![Rat::int(-1), Rat::int(-1), Rat::int(1)]),
        _ => None,
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = OCTONION_NAMES
        .iter()
        .map(|n| CatalogEntry {
            name: n.to_string(),
            kind: Kind::Octonion,
            gammas: octonion_gammas(n).unwrap(),
            rho: None,
        })
        .collect();
    out.extend(jordan_catalog().into_iter().map(|e| CatalogEntry {
        name: e.label,
        kind: Kind::Jordan,
        gammas: e.coord_gammas,
        rho: Some(e.rho),
    }));
    out
}

pub fn entry(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

fn parse_list(s: &str) -> Result<Vec<Rat>, AlgebraError> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<Rat>().map_err(|e| AlgebraError::Invalid(format!("bad rational {t:?}: {e}")))
        })
        .collect()
}

/// An octonion algebra from a catalog name or a comma-separated list of three
/// doubling parameters, e.g. `-1,-1,1`.
pub fn octonion(spec: &str) -> Result<CompositionAlgebra, AlgebraError> {
    let gammas = match octonion_gammas(spec) {
        Some(g) => g,
        None => parse_list(spec)?,
    };
    if gammas.len() != 3 {
        return Err(AlgebraError::Invalid(format!(
            "an octonion algebra needs three doubling parameters, got {}",
            gammas.len()
        )));
    }
    build_composition(&gammas)
}

/// A Jordan algebra from a catalog label or `gammas;rho`, e.g. `-1,1;1,-1,1`.
pub fn jordan(spec: &str) -> Result<JordanAlgebra, AlgebraError> {
    if let Some(e) = jordan_catalog().into_iter().find(|e| e.label == spec) {
        return e.build();
    }
    let (g, r) =
        spec.split_once(';').ok_or_else(|| AlgebraError::Invalid(format!("unknown Jordan algebra {spec:?}")))?;
    let gammas = parse_list(g)?;
    let rho: [Rat; 3] = parse_list(r)?
        .try_into()
        .map_err(|v: Vec<Rat>| AlgebraError::Invalid(format!("rho needs three entries, got {}", v.len())))?;
    let c = build_composition(&gammas)?;
    hermitian_jordan(&c, rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_unique_and_buildable() {
        let c = catalog();
        let mut names: Vec<&str> = c.iter().map(|e| e.name.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), c.len());
        for e in &c {
            match e.kind {
                Kind::Octonion => assert_eq!(octonion(&e.name).unwrap().dim(), 8),
                Kind::Jordan => assert!(jordan(&e.name).is_ok()),
            }
        }
    }

    #[test]
    fn explicit_parameters() {
        assert!(octonion("-1,-1,1").is_ok());
        assert!(octonion("-1,0,1").is_err());
        assert!(octonion("-1,1").is_err());
        assert_eq!(jordan("-1;1,-1,1").unwrap().dim(), 9);
    }
}
