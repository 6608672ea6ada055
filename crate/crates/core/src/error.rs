use thiserror::Error;

use crate::model::{ClauseId, Violation};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unknown {kind} token {token:?}")]
    UnknownToken { kind: &'static str, token: String },
    #[error("span {start}..{end} is out of range for a fragment of {clauses} clauses")]
    SpanOutOfRange { start: ClauseId, end: ClauseId, clauses: usize },
    #[error("fragment is invalid: {}", summarize(.0))]
    Invalid(Vec<Violation>),
}

fn summarize(v: &[Violation]) -> String {
    v.iter().map(|v| format!("[{}] {}", v.rule_id, v.message)).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid bundle JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("layer of annotator {annotator:?} was made against different raw text (digest {found}, expected {expected})")]
    DigestMismatch { annotator: String, expected: String, found: String },
    #[error("layer of annotator {annotator:?} belongs to fragment {found:?}, bundle is {expected:?}")]
    FragmentMismatch { annotator: String, expected: String, found: String },
    #[error("layer of annotator {annotator:?} references unknown clause id {id}")]
    UnknownClause { annotator: String, id: ClauseId },
    #[error("segmentation of {owner} covers {found} atoms but the raw text has {expected}")]
    AtomCount { owner: String, expected: usize, found: usize },
    #[error("fragment cannot be written as a table: {0}")]
    Unrepresentable(String),
    #[error("unsupported bundle format {0:?}")]
    Version(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("segmentations cover different atom counts ({left} vs {right})")]
    AtomMismatch { left: usize, right: usize },
    #[error("transposition window n_t must be at least 2 (got {0})")]
    InvalidWindow(usize),
    #[error("segment masses must be positive")]
    ZeroMass,
    #[error("boundary position {position} is outside the {atoms}-atom text")]
    BoundaryOutOfRange { position: usize, atoms: usize },
    #[error("cannot place {count} boundaries in {atoms} atoms")]
    TooManyBoundaries { count: usize, atoms: usize },
    #[error("agreement needs at least two coders (fragment {fragment:?} has {found})")]
    TooFewCoders { fragment: String, found: usize },
    #[error("label matrix is malformed: {0}")]
    MalformedMatrix(String),
    #[error("alpha undefined: no pairable units")]
    NoPairableUnits,
    #[error("alpha undefined: no variation")]
    NoVariation,
    #[error("no reference segmentation: layers disagree and the bundle has none")]
    NoReference,
}

#[derive(Debug, Error, PartialEq)]
pub enum AdjudicationError {
    #[error("majority vote needs at least two layers (got {0})")]
    TooFewLayers(usize),
    #[error("layers are not aligned: {0}")]
    Misaligned(String),
    #[error("outcome for clause {clause} is already decided")]
    AlreadyDecided { clause: ClauseId },
    #[error("{label:?} is not a valid {field} value")]
    InvalidLabel { field: String, label: String },
    #[error("resolution needs at least one resolver")]
    NoResolver,
    #[error("{0} outcome(s) still await discussion")]
    Pending(usize),
    #[error("no {field} outcome for clause {clause}")]
    UnknownOutcome { field: String, clause: ClauseId },
}
