//! Guideline lints.
//!
//! Structural lints are errors and mirror [`Fragment::violations`] one to one. Cue
//! lints compare surface cues in the transcript against the clause segmentation and
//! only warn. Macro-shape and onset lints are informational hints.

mod cues;
mod shape;
mod structure;

pub use cues::{lint_fragment_cues, lint_segmentation_cues};
pub use shape::{hint_span_onsets, lint_macro_shape};
pub use structure::lint_structure;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{ClauseId, Fragment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub fragment_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clause: Option<ClauseId>,
    /// Boundary position in atoms, for segmentation findings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintFinding {
    pub rule_id: String,
    pub severity: Severity,
    pub location: Location,
    pub message: String,
    pub guideline_ref: String,
}

impl LintFinding {
    pub(crate) fn new(rule_id: &'static str, fragment_id: &str, clause: Option<ClauseId>, message: String) -> Self {
        let rule = rule(rule_id).unwrap_or_else(|| panic!("rule {rule_id:?} is not registered"));
        LintFinding {
            rule_id: rule_id.to_string(),
            severity: rule.severity,
            location: Location { fragment_id: fragment_id.to_string(), clause, boundary: None },
            message,
            guideline_ref: rule.guideline_ref.to_string(),
        }
    }

    pub(crate) fn at_boundary(mut self, position: usize) -> Self {
        self.location.boundary = Some(position);
        self
    }
}

impl fmt::Display for LintFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.location.fragment_id.is_empty() {
            write!(f, "{} ", self.location.fragment_id)?;
        }
        match (self.location.clause, self.location.boundary) {
            (Some(c), _) => write!(f, "clause {c}")?,
            (None, Some(b)) => write!(f, "boundary {b}")?,
            (None, None) => f.write_str("-")?,
        }
        write!(f, ": {} [{}] {} ({})", self.severity, self.rule_id, self.message, self.guideline_ref)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RuleInfo {
    pub id: &'static str,
    pub severity: Severity,
    pub guideline_ref: &'static str,
    pub summary: &'static str,
}

const fn rule_info(id: &'static str, severity: Severity, guideline_ref: &'static str, summary: &'static str) -> RuleInfo {
    RuleInfo { id, severity, guideline_ref, summary }
}

use Severity::{Error, Info, Warning};

pub const RULES: &[RuleInfo] = &[
    rule_info("clause-ids", Error, "data model: clause numbering", "clause ids do not run 1..n in order"),
    rule_info("clause-empty-text", Error, "data model: clauses", "clause text is empty after normalization"),
    rule_info("span-bounds", Error, "spans: S/E marking", "span end precedes its start or lies outside the fragment"),
    rule_info("span-min-length", Error, "spans: minimum length", "a narrative span covers fewer than two clauses"),
    rule_info("span-same-kind-overlap", Error, "spans: one lane per type", "two spans of the same type overlap"),
    rule_info("span-interviewer", Error, "interviewer turns", "a span includes an interviewer unit"),
    rule_info("interviewer-labeled", Error, "interviewer turns", "an interviewer unit carries a micro or macro label"),
    rule_info("label-outside-span", Error, "spans: labeling scope", "a labeled clause lies outside every span"),
    rule_info("hypothetical-no-micro", Error, "micro labels: hypothetical narratives", "a clause only in Hypothetical spans has a micro label"),
    rule_info("span-cross-kind-overlap", Warning, "spans: narrative types", "spans of different types overlap"),
    rule_info("formal-noun-topic-split", Warning, "segmentation: formal nouns", "formal noun + topic particle with no clause boundary after it"),
    rule_info("formal-noun-subject-merge", Warning, "segmentation: formal nouns", "formal noun + subject/genitive particle followed by a clause boundary"),
    rule_info("unquoted-speech-merge", Warning, "segmentation: quoted speech", "clause boundary inside a quotation without a quotative marker"),
    rule_info("abstract-position", Info, "macro labels: Abstract", "Abstract outside the first quarter of its span"),
    rule_info("coda-position", Info, "macro labels: Coda", "Coda outside the last quarter of its span"),
    rule_info("complication-micro-mismatch", Info, "macro labels: Complication", "Complication clause whose micro label is not Narrative"),
    rule_info("resolution-micro-mismatch", Info, "macro labels: Resolution", "Resolution clause whose micro label is not Narrative"),
    rule_info("span-no-complication", Info, "macro labels: Complication", "a labeled span has no Complication clause"),
    rule_info("possible-onset", Info, "spans: discourse markers", "onset discourse marker in a clause outside every span"),
];

/// Ids held for rules that are not implemented yet (a Coda check from reference and
/// narration time). They never fire; disabling them is accepted and does nothing.
pub const RESERVED_RULE_IDS: &[&str] = &["coda-reference-time"];

pub fn rule(id: &str) -> Option<&'static RuleInfo> {
    RULES.iter().find(|r| r.id == id)
}

/// Lint settings, loadable from JSON. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LintConfig {
    /// Rule ids to drop from the output.
    #[serde(default)]
    pub disabled: BTreeSet<String>,
    #[serde(default = "default_onset_markers")]
    pub onset_markers: Vec<String>,
}

pub fn default_onset_markers() -> Vec<String> {
    ["a, sou da", "sono toki wa", "あ、そうだ", "その時は", "そのときは"].iter().map(|s| s.to_string()).collect()
}

impl Default for LintConfig {
    fn default() -> Self {
        LintConfig { disabled: BTreeSet::new(), onset_markers: default_onset_markers() }
    }
}

impl LintConfig {
    /// Fails on unknown rule ids so typos do not silently disable nothing.
    pub fn check(&self) -> Result<(), String> {
        match self.disabled.iter().find(|id| rule(id).is_none() && !RESERVED_RULE_IDS.contains(&id.as_str())) {
            Some(id) => Err(format!("unknown rule id {id:?}")),
            None => Ok(()),
        }
    }
}

/// Every lint over one fragment: structure, segmentation cues, macro shape, onsets.
pub fn lint_fragment(fragment: &Fragment, config: &LintConfig) -> Vec<LintFinding> {
    let mut out = lint_structure(fragment);
    out.extend(lint_fragment_cues(fragment));
    out.extend(lint_macro_shape(fragment));
    out.extend(hint_span_onsets(fragment, &config.onset_markers));
    out.retain(|f| !config.disabled.contains(&f.rule_id));
    out
}

pub fn error_count(findings: &[LintFinding]) -> usize {
    findings.iter().filter(|f| f.severity == Severity::Error).count()
}
