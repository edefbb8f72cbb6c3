//! The hand-encoded list of drawn diagrams for five vortices.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{EnumerationReport, ExclusionReason};
use crate::diagram::{CanonicalKey, Diagram};
use crate::exactpoly::Polynomial;
use crate::lemmas::BranchTag;
use crate::vorticity::ConstraintLedger;

const CATALOG: &str = include_str!("../../data/catalog.jsonl");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog line {line}: {msg}")]
    Corrupt { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    Possible,
    Excluded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FutureList {
    NineImpossible,
    TwentyTwoPossible,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchEntry {
    pub tag: BranchTag,
    pub equalities: Vec<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub figure_ref: String,
    pub c_class: u32,
    pub status: EntryStatus,
    #[serde(default)]
    pub excluding_lemma: Option<ExclusionReason>,
    pub diagram: Diagram,
    pub ledger: ConstraintLedger,
    #[serde(default)]
    pub branches: Vec<BranchEntry>,
    #[serde(default)]
    pub future_list: FutureList,
    #[serde(default)]
    pub notes: String,
}

impl CatalogEntry {
    pub fn key(&self) -> CanonicalKey {
        self.diagram.canonical_key()
    }
}

/// Parse JSON lines; blank lines are skipped.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let e: CatalogEntry =
            serde_json::from_str(line).map_err(|e| CatalogError::Corrupt { line: i + 1, msg: e.to_string() })?;
        let consistent = match e.status {
            EntryStatus::Excluded => e.excluding_lemma.is_some(),
            EntryStatus::Possible => e.excluding_lemma.is_none(),
        };
        if !consistent {
            return Err(CatalogError::Corrupt { line: i + 1, msg: "status and excluding_lemma disagree".into() });
        }
        out.push(e);
    }
    Ok(out)
}

pub fn load_catalog() -> Result<Vec<CatalogEntry>, CatalogError> {
    parse_catalog(CATALOG)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogDiff {
    /// Possible in the catalog but not among the survivors.
    pub missing: Vec<(CanonicalKey, String)>,
    /// Survivors with no possible catalog entry.
    pub extra: Vec<CanonicalKey>,
    /// Excluded catalog entries the enumeration kept or never saw.
    pub not_rejected: Vec<(CanonicalKey, String)>,
    /// Excluded entries rejected for a different reason: (figure, expected, actual).
    pub reason_mismatches: Vec<(String, ExclusionReason, ExclusionReason)>,
}

impl CatalogDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty()
            && self.extra.is_empty()
            && self.not_rejected.is_empty()
            && self.reason_mismatches.is_empty()
    }
}

pub fn diff(report: &EnumerationReport, catalog: &[CatalogEntry]) -> CatalogDiff {
    let survivors: BTreeSet<CanonicalKey> = report.survivor_keys().into_iter().collect();
    let rejected: BTreeMap<&CanonicalKey, ExclusionReason> =
        report.rejected.iter().map(|r| (&r.key, r.reason)).collect();
    let mut out = CatalogDiff::default();
    let mut possible = BTreeSet::new();
    for e in catalog.iter().filter(|e| e.diagram.n() == report.n) {
        let key = e.key();
        match e.status {
            EntryStatus::Possible => {
                if !survivors.contains(&key) && possible.insert(key.clone()) {
                    out.missing.push((key, e.figure_ref.clone()));
                } else {
                    possible.insert(key);
                }
            }
            EntryStatus::Excluded => {
                let expected = e.excluding_lemma.expect("checked on load");
                match rejected.get(&key) {
                    None => out.not_rejected.push((key, e.figure_ref.clone())),
                    Some(&actual) if actual != expected => {
                        out.reason_mismatches.push((e.figure_ref.clone(), expected, actual))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    out.extra = survivors.difference(&possible).cloned().collect();
    out
}
