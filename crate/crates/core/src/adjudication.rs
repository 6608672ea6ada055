//! Gold data from several annotator layers: majority vote, a discussion queue for
//! ties, and corpus statistics over the resulting gold fragments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::AdjudicationError;
use crate::format::{normalize_text, Bundle};
use crate::model::{
    span_lengths, AnnotatorLayer, Clause, ClauseId, Fragment, Label, MacroLabel, MicroLabel, NarrativeSpan,
    NarrativeType, Speaker, SpanStat,
};
use crate::seg::Segmentation;

pub const IN_SPAN: &str = "in";
pub const OUT_OF_SPAN: &str = "out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoteField {
    Micro,
    Macro,
    SpanMembership(NarrativeType),
}

impl VoteField {
    pub const ALL: [VoteField; 5] = [
        VoteField::Micro,
        VoteField::Macro,
        VoteField::SpanMembership(NarrativeType::Story),
        VoteField::SpanMembership(NarrativeType::Habitual),
        VoteField::SpanMembership(NarrativeType::Hypothetical),
    ];

    /// Canonical form of `token` for this field, or `None` if the schema has no such value.
    pub fn canonical(self, token: &str) -> Option<String> {
        match self {
            VoteField::Micro => MicroLabel::from_token(token).map(|l| l.code().to_string()),
            VoteField::Macro => MacroLabel::from_token(token).map(|l| l.code().to_string()),
            VoteField::SpanMembership(_) => [IN_SPAN, OUT_OF_SPAN].contains(&token).then(|| token.to_string()),
        }
    }
}

impl fmt::Display for VoteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VoteField::Micro => f.write_str("micro"),
            VoteField::Macro => f.write_str("macro"),
            VoteField::SpanMembership(k) => write!(f, "{k} membership"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionSource {
    Unanimous,
    Majority,
    Discussion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub resolvers: BTreeSet<String>,
    /// Caller-supplied time of the decision, kept verbatim.
    pub at: String,
    pub note: String,
}

/// Result of voting on one field of one clause.
///
/// `decided` is present exactly when `needs_discussion` is false.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteOutcome {
    pub fragment_id: String,
    pub clause: ClauseId,
    pub field: VoteField,
    /// Non-missing votes, sorted.
    pub votes: Vec<String>,
    pub decided: Option<String>,
    pub needs_discussion: bool,
    pub source: Option<DecisionSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditRecord>,
}

impl VoteOutcome {
    fn tally(fragment_id: &str, clause: ClauseId, field: VoteField, mut votes: Vec<String>) -> Self {
        votes.sort();
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for v in &votes {
            *counts.entry(v.as_str()).or_insert(0) += 1;
        }
        let top = counts.values().copied().max().unwrap_or(0);
        let mut leaders = counts.iter().filter(|(_, &c)| c == top);
        let (decided, source) = match (leaders.next(), leaders.next()) {
            (Some((label, _)), None) if counts.len() == 1 => (Some(label.to_string()), Some(DecisionSource::Unanimous)),
            (Some((label, _)), None) => (Some(label.to_string()), Some(DecisionSource::Majority)),
            _ => (None, None),
        };
        VoteOutcome {
            fragment_id: fragment_id.to_string(),
            clause,
            field,
            needs_discussion: decided.is_none(),
            decided,
            source,
            votes,
            audit: None,
        }
    }

    fn queue(&mut self) {
        self.decided = None;
        self.source = None;
        self.needs_discussion = true;
    }
}

/// Layers checked to share a fragment and a clause numbering.
#[derive(Debug, Clone)]
pub struct Alignment<'a> {
    pub fragment_id: String,
    pub segmentation: Segmentation,
    layers: &'a [AnnotatorLayer],
}

impl<'a> Alignment<'a> {
    /// With no `reference`, every layer must carry the same clause segmentation;
    /// segmentation disagreements are not voted on and have to be settled first.
    pub fn new(layers: &'a [AnnotatorLayer], reference: Option<&Segmentation>) -> Result<Self, AdjudicationError> {
        if layers.len() < 2 {
            return Err(AdjudicationError::TooFewLayers(layers.len()));
        }
        let first = &layers[0];
        if let Some(l) = layers.iter().find(|l| l.fragment_id != first.fragment_id) {
            return Err(AdjudicationError::Misaligned(format!(
                "annotator {:?} labeled fragment {:?}, annotator {:?} labeled {:?}",
                first.annotator_id, first.fragment_id, l.annotator_id, l.fragment_id
            )));
        }
        let segmentation = match reference {
            Some(r) => r.clone(),
            None => {
                if let Some(l) = layers.iter().find(|l| l.clause_boundaries != first.clause_boundaries) {
                    return Err(AdjudicationError::Misaligned(format!(
                        "annotators {:?} and {:?} segment the text differently; settle a reference segmentation by discussion first",
                        first.annotator_id, l.annotator_id
                    )));
                }
                first.clause_boundaries.clone()
            }
        };
        for l in layers {
            if l.clause_boundaries.atoms() != segmentation.atoms() {
                return Err(AdjudicationError::Misaligned(format!(
                    "annotator {:?} segmented {} atoms, the reference has {}",
                    l.annotator_id,
                    l.clause_boundaries.atoms(),
                    segmentation.atoms()
                )));
            }
            if let Some(id) = l.referenced_ids().into_iter().find(|&id| id == 0 || id > segmentation.segment_count()) {
                return Err(AdjudicationError::Misaligned(format!(
                    "annotator {:?} refers to clause {id}, the reference has {}",
                    l.annotator_id,
                    segmentation.segment_count()
                )));
            }
        }
        Ok(Alignment { fragment_id: first.fragment_id.clone(), segmentation, layers })
    }

    pub fn clauses(&self) -> usize {
        self.segmentation.segment_count()
    }
}

/// Votes every clause on one field. A label with strictly more votes than any other
/// wins; ties go to discussion. Missing votes are left out of the tally, and clauses
/// nobody labeled get no outcome.
///
/// For span membership every layer votes `in` or `out`; accepted `in` runs shorter
/// than two clauses are queued for discussion rather than dropped.
pub fn majority_vote(alignment: &Alignment<'_>, field: VoteField) -> Vec<VoteOutcome> {
    let fid = alignment.fragment_id.as_str();
    let clauses = 1..=alignment.clauses();
    match field {
        VoteField::Micro | VoteField::Macro => clauses
            .filter_map(|id| {
                let votes: Vec<String> = alignment
                    .layers
                    .iter()
                    .filter_map(|l| match field {
                        VoteField::Micro => l.micro.get(&id).map(|v| v.code().to_string()),
                        _ => l.macro_labels.get(&id).map(|v| v.code().to_string()),
                    })
                    .collect();
                (!votes.is_empty()).then(|| VoteOutcome::tally(fid, id, field, votes))
            })
            .collect(),
        VoteField::SpanMembership(kind) => {
            let mut out: Vec<VoteOutcome> = clauses
                .map(|id| {
                    let votes = alignment
                        .layers
                        .iter()
                        .map(|l| {
                            let inside = l.spans.iter().any(|s| s.kind == kind && s.contains(id));
                            (if inside { IN_SPAN } else { OUT_OF_SPAN }).to_string()
                        })
                        .collect();
                    VoteOutcome::tally(fid, id, field, votes)
                })
                .collect();
            for run in in_runs(&out) {
                if run.len() < 2 {
                    for i in run {
                        out[i].queue();
                    }
                }
            }
            out
        }
    }
}

// index ranges of consecutive outcomes decided "in"
fn in_runs(outcomes: &[VoteOutcome]) -> Vec<std::ops::Range<usize>> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, o) in outcomes.iter().enumerate() {
        let inside = o.decided.as_deref() == Some(IN_SPAN);
        match (inside, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push(s..i);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push(s..outcomes.len());
    }
    runs
}

/// Settles a queued outcome. The resolution must be a value of the outcome's field.
pub fn resolve_discussion<I, S>(
    outcome: &VoteOutcome,
    resolution: &str,
    resolvers: I,
    note: &str,
    at: &str,
) -> Result<VoteOutcome, AdjudicationError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    if !outcome.needs_discussion {
        return Err(AdjudicationError::AlreadyDecided { clause: outcome.clause });
    }
    let label = outcome.field.canonical(resolution).ok_or_else(|| AdjudicationError::InvalidLabel {
        field: outcome.field.to_string(),
        label: resolution.to_string(),
    })?;
    let resolvers: BTreeSet<String> = resolvers.into_iter().map(Into::into).filter(|r| !r.is_empty()).collect();
    if resolvers.is_empty() {
        return Err(AdjudicationError::NoResolver);
    }
    Ok(VoteOutcome {
        decided: Some(label),
        needs_discussion: false,
        source: Some(DecisionSource::Discussion),
        audit: Some(AuditRecord { resolvers, at: at.to_string(), note: note.to_string() }),
        ..outcome.clone()
    })
}

/// Every vote outcome of one fragment, across micro, macro and the three span kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjudication {
    pub fragment_id: String,
    pub segmentation: Segmentation,
    pub outcomes: Vec<VoteOutcome>,
}

impl Adjudication {
    pub fn run(alignment: &Alignment<'_>) -> Self {
        Adjudication {
            fragment_id: alignment.fragment_id.clone(),
            segmentation: alignment.segmentation.clone(),
            outcomes: VoteField::ALL.iter().flat_map(|&f| majority_vote(alignment, f)).collect(),
        }
    }

    pub fn of_bundle(bundle: &Bundle) -> Result<Self, AdjudicationError> {
        Ok(Adjudication::run(&Alignment::new(&bundle.layers, bundle.reference.as_ref())?))
    }

    pub fn pending(&self) -> impl Iterator<Item = &VoteOutcome> {
        self.outcomes.iter().filter(|o| o.needs_discussion)
    }

    pub fn resolve<I, S>(
        &mut self,
        field: VoteField,
        clause: ClauseId,
        resolution: &str,
        resolvers: I,
        note: &str,
        at: &str,
    ) -> Result<&VoteOutcome, AdjudicationError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let slot = self
            .outcomes
            .iter_mut()
            .find(|o| o.field == field && o.clause == clause)
            .ok_or_else(|| AdjudicationError::UnknownOutcome { field: field.to_string(), clause })?;
        *slot = resolve_discussion(slot, resolution, resolvers, note, at)?;
        Ok(slot)
    }

    /// The gold fragment. Fails while any outcome is still pending.
    ///
    /// Clause texts are cut from `raw_text` by the adjudicated segmentation; spans are
    /// the maximal runs of clauses decided `in`.
    pub fn build_gold(&self, raw_text: &str) -> Result<Fragment, AdjudicationError> {
        let pending = self.pending().count();
        if pending > 0 {
            return Err(AdjudicationError::Pending(pending));
        }
        let texts = self.segmentation.split_text(raw_text).ok_or_else(|| {
            AdjudicationError::Misaligned(format!(
                "raw text has {} characters, the segmentation covers {}",
                raw_text.chars().count(),
                self.segmentation.atoms()
            ))
        })?;
        let mut clauses: Vec<Clause> =
            texts.iter().enumerate().map(|(i, t)| Clause::interviewee(i + 1, normalize_text(t))).collect();
        let mut spans = Vec::new();
        for kind in NarrativeType::ALL {
            let field = VoteField::SpanMembership(kind);
            let lane: Vec<VoteOutcome> = self.outcomes.iter().filter(|o| o.field == field).cloned().collect();
            for run in in_runs(&lane) {
                spans.push(NarrativeSpan::new(kind, lane[run.start].clause, lane[run.end - 1].clause));
            }
        }
        spans.sort_by_key(|s| (s.start, s.kind, s.end));
        for o in &self.outcomes {
            let (Some(label), Some(c)) = (o.decided.as_deref(), clauses.get_mut(o.clause - 1)) else {
                continue;
            };
            match o.field {
                VoteField::Micro => c.micro = MicroLabel::from_token(label),
                VoteField::Macro => c.macro_label = MacroLabel::from_token(label),
                VoteField::SpanMembership(_) => {}
            }
        }
        Ok(Fragment::new(self.fragment_id.clone(), Default::default(), clauses, spans))
    }

    /// The audit sidecar written next to the gold table: every outcome with its votes
    /// and, for discussed ones, who decided and why.
    pub fn audit_sidecar(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("adjudication serializes");
        out.push(b'\n');
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MicroShare {
    pub count: usize,
    /// Share of micro-labeled clauses, exact.
    pub exact_percent: f64,
    /// Share of micro-labeled clauses, rounded half up.
    pub percent: u32,
    /// Share of all annotated clauses (interviewee clauses inside some span), rounded half up.
    pub percent_of_annotated: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ClauseTotals {
    pub total: usize,
    pub interviewee: usize,
    pub interviewer: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldCorpusStats {
    pub fragments: usize,
    pub clause_totals: ClauseTotals,
    pub macro_counts: BTreeMap<MacroLabel, usize>,
    pub micro_counts: BTreeMap<MicroLabel, MicroShare>,
    pub micro_labeled: usize,
    pub annotated_clauses: usize,
    pub span_stats: BTreeMap<NarrativeType, SpanStat>,
}

fn percent_half_up(count: usize, of: usize) -> u32 {
    if of == 0 {
        return 0;
    }
    ((200 * count + of) / (2 * of)) as u32
}

pub fn corpus_stats(gold: &[Fragment]) -> GoldCorpusStats {
    let mut totals = ClauseTotals::default();
    let mut macro_counts: BTreeMap<MacroLabel, usize> = MacroLabel::ALL.iter().map(|l| (*l, 0)).collect();
    let mut micro: BTreeMap<MicroLabel, usize> = MicroLabel::ALL.iter().map(|l| (*l, 0)).collect();
    let mut annotated = 0;
    for f in gold {
        for c in &f.clauses {
            totals.total += 1;
            if c.speaker == Speaker::Interviewer {
                totals.interviewer += 1;
                continue;
            }
            totals.interviewee += 1;
            if f.spans_containing(c.id).next().is_some() {
                annotated += 1;
            }
            if let Some(m) = c.micro {
                *micro.entry(m).or_default() += 1;
            }
            if let Some(m) = c.macro_label {
                *macro_counts.entry(m).or_default() += 1;
            }
        }
    }
    let labeled: usize = micro.values().sum();
    let micro_counts = micro
        .into_iter()
        .map(|(l, count)| {
            let exact = if labeled == 0 { 0.0 } else { 100.0 * count as f64 / labeled as f64 };
            let share = MicroShare {
                count,
                exact_percent: exact,
                percent: percent_half_up(count, labeled),
                percent_of_annotated: percent_half_up(count, annotated),
            };
            (l, share)
        })
        .collect();
    GoldCorpusStats {
        fragments: gold.len(),
        clause_totals: totals,
        macro_counts,
        micro_counts,
        micro_labeled: labeled,
        annotated_clauses: annotated,
        span_stats: span_lengths(gold),
    }
}
