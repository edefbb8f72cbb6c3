//! Exhaustive enumeration of diagrams, the curated catalog, and rendering.

mod catalog;
mod render;

pub use catalog::{
    diff, load_catalog, parse_catalog, CatalogDiff, CatalogEntry, CatalogError, EntryStatus, FutureList,
};
pub use render::{render, Format, RenderError};

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{clique_adjacency, set_partitions, CanonicalKey, Diagram, RuleReport, MAX_N};
use crate::exactpoly::{GroebnerError, Polynomial};
use crate::lemmas::{apply_all, base_ledger, merged_branches, BranchTag, Effect, LemmaFinding, LemmaId};
use crate::vorticity::{decide_with, CertificateKind, ConstraintLedger, DecideOptions, Verdict, VerdictKind};

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error("enumeration supports 3 <= n <= 6, got {0}")]
    VertexCount(usize),
    #[error("candidate space {candidates} exceeds budget {limit}")]
    CandidateBudget { candidates: u64, limit: u64 },
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    pub max_candidates: u64,
    pub decide: DecideOptions,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { workers: 0, max_candidates: 200_000_000, decide: DecideOptions::default() }
    }
}

/// Why a diagram is ruled out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExclusionReason {
    Lemma(LemmaId),
    LedgerInfeasible,
}

impl ExclusionReason {
    pub fn name(&self) -> &'static str {
        match self {
            ExclusionReason::Lemma(id) => id.name(),
            ExclusionReason::LedgerInfeasible => "ledger-infeasible",
        }
    }

    pub fn from_name(s: &str) -> Option<ExclusionReason> {
        if s == "ledger-infeasible" {
            return Some(ExclusionReason::LedgerInfeasible);
        }
        serde_json::from_value::<LemmaId>(serde_json::Value::String(s.to_string())).ok().map(ExclusionReason::Lemma)
    }
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for ExclusionReason {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ExclusionReason {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ExclusionReason::from_name(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown exclusion reason {s}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Validate,
    Lemma,
    Ledger,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub stage: Stage,
    pub reason: ExclusionReason,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchVerdict {
    pub tag: BranchTag,
    pub equalities: Vec<Polynomial>,
    pub verdict: Verdict,
}

/// Everything the pipeline derives for one diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub rules: RuleReport,
    pub c_class: u32,
    pub findings: Vec<LemmaFinding>,
    pub ledger: ConstraintLedger,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub branches: Vec<BranchVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exclusion: Option<Exclusion>,
}

impl Analysis {
    pub fn survives(&self) -> bool {
        self.exclusion.is_none()
    }
}

/// Readable form of a polynomial for reason strings: `Γ2+Γ3`.
pub fn pretty(p: &Polynomial) -> String {
    p.to_string().replace('G', "Γ").replace(" * ", "").replace(' ', "")
}

// lemma names as they read in reason strings
fn label(l: LemmaId) -> &'static str {
    match l {
        LemmaId::RuleIv => "RuleIV",
        other => other.name(),
    }
}

fn ledger_detail(findings: &[LemmaFinding], ledger: &ConstraintLedger, v: &Verdict) -> String {
    let cert = v.certificate.as_ref().expect("infeasible verdicts carry a certificate");
    let sources = |pick: &dyn Fn(&LemmaFinding) -> bool| {
        let mut names: Vec<&str> = findings.iter().filter(|f| pick(f)).map(|f| label(f.lemma)).collect();
        names.dedup();
        names.join("+")
    };
    let eqs = ledger.equalities.iter().map(|p| format!("{}=0", pretty(p))).collect::<Vec<_>>().join(", ");
    let eq_src = sources(&|f| matches!(&f.effect, Effect::Emit { equalities, .. } if !equalities.is_empty()));
    match cert.kind {
        CertificateKind::DirectDisequality => {
            let base = &cert.base;
            let nz_src = findings
                .iter()
                .filter(|f| matches!(&f.effect, Effect::Emit { nonzeros, .. } if nonzeros.contains(base)))
                .map(|f| f.lemma)
                .max()
                .map_or("vorticity", label);
            format!("{eq_src} {eqs} vs {nz_src} nonzero")
        }
        _ => {
            let mult = if cert.multiplier.is_empty() {
                String::new()
            } else {
                format!("{}·", cert.multiplier.iter().map(|i| format!("Γ{i}")).collect::<String>())
            };
            format!("{eq_src} {eqs} force {}({}) = 0 ({})", mult, pretty(&cert.base), cert.kind)
        }
    }
}

/// Validate, match lemmas, and decide the ledger and its Λ-branches.
pub fn analyze(d: &Diagram, opts: &DecideOptions) -> Result<Analysis, GroebnerError> {
    let rules = d.validate();
    let c_class = d.stroke_count_c();
    let ledger_n = d.n().min(crate::exactpoly::MAX_VERTICES);
    if !rules.valid() {
        let exclusion = Exclusion {
            stage: Stage::Validate,
            reason: ExclusionReason::LedgerInfeasible,
            detail: format!("rule check failed: {}", rules.failures().join(", ")),
        };
        return Ok(Analysis {
            rules,
            c_class,
            findings: vec![],
            ledger: ConstraintLedger::new(ledger_n),
            verdict: None,
            branches: vec![],
            exclusion: Some(exclusion),
        });
    }
    let findings = apply_all(d);
    let ledger = base_ledger(d.n(), &findings);
    if let Some(f) = findings.iter().find(|f| f.is_exclusion()) {
        let Effect::Exclude(why) = &f.effect else { unreachable!() };
        let exclusion = Exclusion {
            stage: Stage::Lemma,
            reason: ExclusionReason::Lemma(f.lemma),
            detail: format!("{} ({}) on {:?}: {}", f.lemma, f.color, f.binding, why),
        };
        return Ok(Analysis {
            rules,
            c_class,
            findings,
            ledger,
            verdict: None,
            branches: vec![],
            exclusion: Some(exclusion),
        });
    }
    let verdict = decide_with(&ledger, opts)?;
    let mut branches = Vec::new();
    for b in merged_branches(&findings) {
        let mut l = ledger.clone();
        b.equalities.iter().for_each(|p| l.require_zero(p.clone()));
        branches.push(BranchVerdict { tag: b.tag, equalities: b.equalities.clone(), verdict: decide_with(&l, opts)? });
    }
    let exclusion = verdict.is_infeasible().then(|| Exclusion {
        stage: Stage::Ledger,
        reason: ExclusionReason::LedgerInfeasible,
        detail: ledger_detail(&findings, &ledger, &verdict),
    });
    Ok(Analysis { rules, c_class, findings, ledger, verdict: Some(verdict), branches, exclusion })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    /// Pairs of clique partitions times circle subsets, visited exhaustively.
    pub raw_candidates: u64,
    pub valid_candidates: u64,
    pub valid_classes: usize,
    pub after_lemmas: usize,
    pub survivors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivorRecord {
    pub key: CanonicalKey,
    pub c_class: u32,
    pub diagram: Diagram,
    pub ledger: ConstraintLedger,
    pub verdict: VerdictKind,
    pub branches: Vec<BranchSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSummary {
    pub tag: BranchTag,
    pub equalities: Vec<Polynomial>,
    pub verdict: VerdictKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub key: CanonicalKey,
    pub c_class: u32,
    pub stage: Stage,
    pub reason: ExclusionReason,
    pub detail: String,
    pub diagram: Diagram,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub n: usize,
    pub stages: StageCounts,
    /// Raw candidates failing each rule check (a candidate may fail several).
    pub validation_failures: BTreeMap<String, u64>,
    pub histogram: BTreeMap<u32, usize>,
    pub survivors: Vec<SurvivorRecord>,
    pub rejected: Vec<Rejection>,
}

impl EnumerationReport {
    pub fn survivor_keys(&self) -> Vec<CanonicalKey> {
        self.survivors.iter().map(|s| s.key.clone()).collect()
    }

    pub fn total(&self) -> usize {
        self.survivors.len()
    }
}

#[derive(Default)]
struct Partial {
    raw: u64,
    valid: u64,
    failures: [u64; 6],
    classes: BTreeMap<CanonicalKey, ()>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.raw += other.raw;
        self.valid += other.valid;
        for i in 0..6 {
            self.failures[i] += other.failures[i];
        }
        self.classes.extend(other.classes);
        self
    }
}

const RULE_NAMES: [&str; 6] = ["R1a", "R1b", "R1c", "R2", "R4", "R6"];

fn scan(n: usize, z: &[u8; MAX_N], w: &[u8; MAX_N]) -> Partial {
    let mut out = Partial::default();
    let subsets = 1u16 << n;
    for zc in 0..subsets {
        for wc in 0..subsets {
            out.raw += 1;
            let d = Diagram::from_masks(n, [*z, *w], [zc as u8, wc as u8]);
            let r = d.validate();
            if r.valid() {
                out.valid += 1;
                out.classes.insert(d.canonical_key(), ());
            } else {
                for (i, ok) in [r.r1a, r.r1b, r.r1c, r.r2, r.r4, r.r6].into_iter().enumerate() {
                    if !ok {
                        out.failures[i] += 1;
                    }
                }
            }
        }
    }
    out
}

/// Enumerate every diagram on `n` vertices and run the full pipeline.
pub fn enumerate(n: usize, opts: &EnumerateOptions) -> Result<EnumerationReport, AtlasError> {
    if !(3..=6).contains(&n) {
        return Err(AtlasError::VertexCount(n));
    }
    let parts: Vec<[u8; MAX_N]> = set_partitions(n).iter().map(|p| clique_adjacency(p)).collect();
    let candidates = (parts.len() as u64).pow(2) << (2 * n);
    if candidates > opts.max_candidates {
        return Err(AtlasError::CandidateBudget { candidates, limit: opts.max_candidates });
    }
    let run = || -> Result<EnumerationReport, AtlasError> {
        let pairs: Vec<(usize, usize)> = (0..parts.len()).flat_map(|i| (0..parts.len()).map(move |j| (i, j))).collect();
        let partial =
            pairs.par_iter().map(|&(i, j)| scan(n, &parts[i], &parts[j])).reduce(Partial::default, Partial::merge);
        let keys: Vec<CanonicalKey> = partial.classes.keys().cloned().collect();
        let analyses: Vec<(CanonicalKey, Diagram, Analysis)> = keys
            .par_iter()
            .map(|k| {
                let d = Diagram::from_key(k);
                analyze(&d, &opts.decide).map(|a| (k.clone(), d, a))
            })
            .collect::<Result<_, _>>()?;
        let mut report = EnumerationReport {
            n,
            stages: StageCounts {
                raw_candidates: partial.raw,
                valid_candidates: partial.valid,
                valid_classes: keys.len(),
                after_lemmas: 0,
                survivors: 0,
            },
            validation_failures: RULE_NAMES.iter().zip(partial.failures).map(|(k, v)| (k.to_string(), v)).collect(),
            histogram: BTreeMap::new(),
            survivors: Vec::new(),
            rejected: Vec::new(),
        };
        for (key, d, a) in analyses {
            report.histogram.entry(a.c_class).or_insert(0);
            if a.exclusion.as_ref().is_none_or(|e| e.stage != Stage::Lemma) {
                report.stages.after_lemmas += 1;
            }
            match a.exclusion {
                None => {
                    *report.histogram.get_mut(&a.c_class).expect("inserted above") += 1;
                    report.survivors.push(SurvivorRecord {
                        key,
                        c_class: a.c_class,
                        diagram: d,
                        verdict: a.verdict.as_ref().map_or(VerdictKind::Unknown, |v| v.verdict),
                        branches: a
                            .branches
                            .iter()
                            .map(|b| BranchSummary {
                                tag: b.tag,
                                equalities: b.equalities.clone(),
                                verdict: b.verdict.verdict,
                            })
                            .collect(),
                        ledger: a.ledger,
                    });
                }
                Some(e) => report.rejected.push(Rejection {
                    key,
                    c_class: a.c_class,
                    stage: e.stage,
                    reason: e.reason,
                    detail: e.detail,
                    diagram: d,
                }),
            }
        }
        report.stages.survivors = report.survivors.len();
        Ok(report)
    };
    if opts.workers == 0 {
        run()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| AtlasError::Pool(e.to_string()))?;
        pool.install(run)
    }
}
