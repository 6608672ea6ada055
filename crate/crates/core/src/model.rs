//! Domain types for transcripts, clauses, narrative spans and labels.
//!
//! A [`Fragment`] is one interview segment: an ordered list of clauses (interviewer
//! turns are kept as single unsegmented units) plus the narrative spans marked over
//! them. Construction does not validate; call [`Fragment::validate`] (or run the
//! structural lints, which share the same checks) before trusting a fragment.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::seg::Segmentation;

/// Per-fragment ordinal of a clause, starting at 1.
pub type ClauseId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Speaker {
    Interviewer,
    Interviewee,
}

impl Speaker {
    pub fn code(self) -> &'static str {
        match self {
            Speaker::Interviewer => "IR",
            Speaker::Interviewee => "IE",
        }
    }
}

impl FromStr for Speaker {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "IR" | "Interviewer" => Ok(Speaker::Interviewer),
            "IE" | "Interviewee" => Ok(Speaker::Interviewee),
            other => Err(ModelError::UnknownToken { kind: "speaker", token: other.to_string() }),
        }
    }
}

/// A closed label vocabulary with a canonical short code.
pub trait Label: Copy + Ord + fmt::Debug + 'static {
    const ALL: &'static [Self];
    const KIND: &'static str;

    /// Canonical token written to `.lat.tsv` files and used as the label token in matrices.
    fn code(self) -> &'static str;
    fn name(self) -> &'static str;

    fn from_token(token: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|l| l.code() == token || l.name() == token)
    }
}

/// Clause-level temporal function. There is deliberately no "hypothetical" value:
/// clauses inside hypothetical narratives carry no micro label at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MicroLabel {
    #[serde(rename = "N")]
    Narrative,
    #[serde(rename = "R")]
    Restricted,
    #[serde(rename = "F")]
    Free,
}

impl Label for MicroLabel {
    const ALL: &'static [Self] = &[MicroLabel::Narrative, MicroLabel::Restricted, MicroLabel::Free];
    const KIND: &'static str = "micro label";

    fn code(self) -> &'static str {
        match self {
            MicroLabel::Narrative => "N",
            MicroLabel::Restricted => "R",
            MicroLabel::Free => "F",
        }
    }

    fn name(self) -> &'static str {
        match self {
            MicroLabel::Narrative => "Narrative",
            MicroLabel::Restricted => "Restricted",
            MicroLabel::Free => "Free",
        }
    }
}

/// The six Labovian macro functions. Only external evaluation is labeled as `Evaluation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MacroLabel {
    Abstract,
    Orientation,
    Complication,
    Evaluation,
    Resolution,
    Coda,
}

impl Label for MacroLabel {
    const ALL: &'static [Self] = &[
        MacroLabel::Abstract,
        MacroLabel::Orientation,
        MacroLabel::Complication,
        MacroLabel::Evaluation,
        MacroLabel::Resolution,
        MacroLabel::Coda,
    ];
    const KIND: &'static str = "macro label";

    fn code(self) -> &'static str {
        match self {
            MacroLabel::Abstract => "Abs",
            MacroLabel::Orientation => "Ori",
            MacroLabel::Complication => "Com",
            MacroLabel::Evaluation => "Eva",
            MacroLabel::Resolution => "Res",
            MacroLabel::Coda => "Cod",
        }
    }

    fn name(self) -> &'static str {
        match self {
            MacroLabel::Abstract => "Abstract",
            MacroLabel::Orientation => "Orientation",
            MacroLabel::Complication => "Complication",
            MacroLabel::Evaluation => "Evaluation",
            MacroLabel::Resolution => "Resolution",
            MacroLabel::Coda => "Coda",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NarrativeType {
    Story,
    Habitual,
    Hypothetical,
}

impl NarrativeType {
    pub const ALL: [NarrativeType; 3] =
        [NarrativeType::Story, NarrativeType::Habitual, NarrativeType::Hypothetical];

    pub fn name(self) -> &'static str {
        match self {
            NarrativeType::Story => "Story",
            NarrativeType::Habitual => "Habitual",
            NarrativeType::Hypothetical => "Hypothetical",
        }
    }
}

impl fmt::Display for NarrativeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub enum Topic {
    HappinessHardship,
    Challenges,
    #[default]
    Other,
}

impl Topic {
    pub fn name(self) -> &'static str {
        match self {
            Topic::HappinessHardship => "HappinessHardship",
            Topic::Challenges => "Challenges",
            Topic::Other => "Other",
        }
    }
}

impl FromStr for Topic {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "HappinessHardship" => Ok(Topic::HappinessHardship),
            "Challenges" => Ok(Topic::Challenges),
            "Other" => Ok(Topic::Other),
            other => Err(ModelError::UnknownToken { kind: "topic", token: other.to_string() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub id: ClauseId,
    pub speaker: Speaker,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub micro: Option<MicroLabel>,
    #[serde(rename = "macro", default, skip_serializing_if = "Option::is_none")]
    pub macro_label: Option<MacroLabel>,
}

impl Clause {
    pub fn interviewee(id: ClauseId, text: impl Into<String>) -> Self {
        Clause { id, speaker: Speaker::Interviewee, text: text.into(), micro: None, macro_label: None }
    }

    pub fn interviewer(id: ClauseId, text: impl Into<String>) -> Self {
        Clause { id, speaker: Speaker::Interviewer, text: text.into(), micro: None, macro_label: None }
    }

    pub fn with_labels(mut self, micro: Option<MicroLabel>, macro_label: Option<MacroLabel>) -> Self {
        self.micro = micro;
        self.macro_label = macro_label;
        self
    }

    pub fn is_labeled(&self) -> bool {
        self.micro.is_some() || self.macro_label.is_some()
    }
}

/// A contiguous clause range `start..=end` of one narrative type (the S and E marks).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NarrativeSpan {
    pub kind: NarrativeType,
    pub start: ClauseId,
    pub end: ClauseId,
}

impl NarrativeSpan {
    pub fn new(kind: NarrativeType, start: ClauseId, end: ClauseId) -> Self {
        NarrativeSpan { kind, start, end }
    }

    /// Number of clauses covered; zero for an inverted span.
    pub fn len(&self) -> usize {
        (self.end + 1).saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, id: ClauseId) -> bool {
        self.start <= id && id <= self.end
    }

    pub fn overlaps(&self, other: &NarrativeSpan) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

/// One structural problem found by [`Fragment::violations`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule_id: &'static str,
    pub clause: Option<ClauseId>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment {
    pub fragment_id: String,
    #[serde(default)]
    pub topic: Topic,
    pub clauses: Vec<Clause>,
    #[serde(default)]
    pub spans: Vec<NarrativeSpan>,
}

impl Fragment {
    pub fn new(fragment_id: impl Into<String>, topic: Topic, clauses: Vec<Clause>, spans: Vec<NarrativeSpan>) -> Self {
        Fragment { fragment_id: fragment_id.into(), topic, clauses, spans }
    }

    pub fn clause(&self, id: ClauseId) -> Option<&Clause> {
        // ids are normally contiguous, so try the direct slot first
        match self.clauses.get(id.wrapping_sub(1)) {
            Some(c) if c.id == id => Some(c),
            _ => self.clauses.iter().find(|c| c.id == id),
        }
    }

    pub fn spans_containing(&self, id: ClauseId) -> impl Iterator<Item = &NarrativeSpan> {
        self.spans.iter().filter(move |s| s.contains(id))
    }

    /// True when the clause lies in at least one span and every span holding it is Hypothetical.
    pub fn is_hypothetical_only(&self, id: ClauseId) -> bool {
        let mut any = false;
        for s in self.spans_containing(id) {
            if s.kind != NarrativeType::Hypothetical {
                return false;
            }
            any = true;
        }
        any
    }

    /// Clauses covered by `span`, in order.
    pub fn clauses_in_span(&self, span: &NarrativeSpan) -> Result<Vec<&Clause>, ModelError> {
        let n = self.clauses.len();
        if span.start == 0 || span.end > n || span.start > span.end {
            return Err(ModelError::SpanOutOfRange { start: span.start, end: span.end, clauses: n });
        }
        Ok(self.clauses.iter().filter(|c| span.contains(c.id)).collect())
    }

    /// All schema violations, in a fixed order (clauses first, then spans, then labels).
    ///
    /// Cross-kind overlap is permitted and therefore not reported here.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.clauses.len();

        for (i, c) in self.clauses.iter().enumerate() {
            if c.id != i + 1 {
                out.push(Violation {
                    rule_id: "clause-ids",
                    clause: Some(c.id),
                    message: format!("clause at position {} has id {} (expected {})", i + 1, c.id, i + 1),
                });
            }
            if c.text.split_whitespace().next().is_none() {
                out.push(Violation {
                    rule_id: "clause-empty-text",
                    clause: Some(c.id),
                    message: format!("clause {} has empty text", c.id),
                });
            }
        }

        let mut well_formed = Vec::with_capacity(self.spans.len());
        for span in &self.spans {
            if span.start == 0 || span.end > n || span.start > span.end {
                out.push(Violation {
                    rule_id: "span-bounds",
                    clause: Some(span.start),
                    message: format!(
                        "{} span S={} E={} does not fit a fragment of {} clauses",
                        span.kind, span.start, span.end, n
                    ),
                });
                continue;
            }
            well_formed.push(span);
            if span.len() < 2 {
                out.push(Violation {
                    rule_id: "span-min-length",
                    clause: Some(span.start),
                    message: format!("{} span at clause {} covers a single clause; spans need at least two", span.kind, span.start),
                });
            }
            if let Some(c) = self.clauses.iter().find(|c| span.contains(c.id) && c.speaker == Speaker::Interviewer) {
                out.push(Violation {
                    rule_id: "span-interviewer",
                    clause: Some(c.id),
                    message: format!("{} span {}..{} includes interviewer unit {}", span.kind, span.start, span.end, c.id),
                });
            }
        }

        for (i, a) in well_formed.iter().enumerate() {
            for b in &well_formed[i + 1..] {
                if a.kind == b.kind && a.overlaps(b) {
                    out.push(Violation {
                        rule_id: "span-same-kind-overlap",
                        clause: Some(a.start.max(b.start)),
                        message: format!(
                            "{} spans {}..{} and {}..{} overlap",
                            a.kind, a.start, a.end, b.start, b.end
                        ),
                    });
                }
            }
        }

        for c in &self.clauses {
            if !c.is_labeled() {
                continue;
            }
            if c.speaker == Speaker::Interviewer {
                out.push(Violation {
                    rule_id: "interviewer-labeled",
                    clause: Some(c.id),
                    message: format!("interviewer unit {} carries a label", c.id),
                });
                continue;
            }
            if !well_formed.iter().any(|s| s.contains(c.id)) {
                out.push(Violation {
                    rule_id: "label-outside-span",
                    clause: Some(c.id),
                    message: format!("clause {} is labeled but lies outside every narrative span", c.id),
                });
            } else if c.micro.is_some() && self.is_hypothetical_only(c.id) {
                out.push(Violation {
                    rule_id: "hypothetical-no-micro",
                    clause: Some(c.id),
                    message: format!("clause {} lies only in a Hypothetical span and must not carry a micro label", c.id),
                });
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Invalid(v))
        }
    }
}

/// One annotator's labeling of a shared fragment.
///
/// Clause ids refer to the annotator's own `clause_boundaries` while segmentation is still
/// open, and to the bundle's reference segmentation once one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatorLayer {
    pub annotator_id: String,
    pub fragment_id: String,
    pub clause_boundaries: Segmentation,
    #[serde(default)]
    pub spans: Vec<NarrativeSpan>,
    #[serde(default)]
    pub micro: BTreeMap<ClauseId, MicroLabel>,
    #[serde(rename = "macro", default)]
    pub macro_labels: BTreeMap<ClauseId, MacroLabel>,
}

impl AnnotatorLayer {
    pub fn new(annotator_id: impl Into<String>, fragment_id: impl Into<String>, clause_boundaries: Segmentation) -> Self {
        AnnotatorLayer {
            annotator_id: annotator_id.into(),
            fragment_id: fragment_id.into(),
            clause_boundaries,
            spans: Vec::new(),
            micro: BTreeMap::new(),
            macro_labels: BTreeMap::new(),
        }
    }

    /// Every clause id this layer mentions, in ascending order.
    pub fn referenced_ids(&self) -> Vec<ClauseId> {
        let mut ids: Vec<ClauseId> = self
            .spans
            .iter()
            .flat_map(|s| [s.start, s.end])
            .chain(self.micro.keys().copied())
            .chain(self.macro_labels.keys().copied())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// Count and total clause length of the spans of one narrative type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SpanStat {
    pub count: usize,
    pub clauses: usize,
}

impl SpanStat {
    /// Mean span length; `None` when there are no spans of this kind.
    pub fn mean_length(&self) -> Option<f64> {
        (self.count > 0).then(|| self.clauses as f64 / self.count as f64)
    }

    pub fn mean_display(&self) -> String {
        self.mean_length().map_or_else(|| "-".to_string(), |m| format!("{m:.2}"))
    }
}

pub fn span_lengths<'a, I>(fragments: I) -> BTreeMap<NarrativeType, SpanStat>
where
    I: IntoIterator<Item = &'a Fragment>,
{
    let mut out: BTreeMap<NarrativeType, SpanStat> =
        NarrativeType::ALL.iter().map(|k| (*k, SpanStat::default())).collect();
    for f in fragments {
        for s in &f.spans {
            let e = out.entry(s.kind).or_default();
            e.count += 1;
            e.clauses += s.len();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ten_clause_story() -> Fragment {
        let clauses = (1..=10).map(|i| Clause::interviewee(i, format!("clause {i}"))).collect();
        Fragment::new("t1", Topic::HappinessHardship, clauses, vec![NarrativeSpan::new(NarrativeType::Story, 1, 10)])
    }

    #[test]
    fn clauses_in_span_whole_and_minimal() {
        let f = ten_clause_story();
        assert_eq!(f.clauses_in_span(&f.spans[0]).unwrap().len(), 10);
        let two = f.clauses_in_span(&NarrativeSpan::new(NarrativeType::Story, 4, 5)).unwrap();
        assert_eq!(two.iter().map(|c| c.id).collect::<Vec<_>>(), vec![4, 5]);
    }

    #[test]
    fn clauses_in_span_out_of_range() {
        let f = ten_clause_story();
        let err = f.clauses_in_span(&NarrativeSpan::new(NarrativeType::Story, 9, 12)).unwrap_err();
        assert!(matches!(err, ModelError::SpanOutOfRange { start: 9, end: 12, clauses: 10 }));
    }

    #[test]
    fn span_lengths_simple() {
        let mut f = ten_clause_story();
        f.spans = vec![NarrativeSpan::new(NarrativeType::Habitual, 2, 4)];
        let stats = span_lengths([&f]);
        assert_eq!(stats[&NarrativeType::Habitual], SpanStat { count: 1, clauses: 3 });
        assert_eq!(stats[&NarrativeType::Habitual].mean_display(), "3.00");
        assert_eq!(stats[&NarrativeType::Story].mean_length(), None);
    }

    #[test]
    fn span_lengths_of_two_three_four() {
        let mut f = ten_clause_story();
        f.spans = vec![
            NarrativeSpan::new(NarrativeType::Story, 1, 2),
            NarrativeSpan::new(NarrativeType::Story, 3, 5),
            NarrativeSpan::new(NarrativeType::Story, 6, 9),
        ];
        let s = span_lengths([&f])[&NarrativeType::Story];
        assert_eq!((s.count, s.mean_display()), (3, "3.00".to_string()));
    }

    #[test]
    fn interviewer_labels_rejected() {
        let mut f = ten_clause_story();
        f.spans.clear();
        f.clauses[0] = Clause::interviewer(1, "question").with_labels(Some(MicroLabel::Free), None);
        let rules: Vec<_> = f.violations().iter().map(|v| v.rule_id).collect();
        assert_eq!(rules, vec!["interviewer-labeled"]);
    }

    #[test]
    fn cross_kind_overlap_is_valid() {
        let mut f = ten_clause_story();
        f.spans.push(NarrativeSpan::new(NarrativeType::Hypothetical, 3, 4));
        assert!(f.validate().is_ok());
        // micro labels are still allowed there, since the clause also sits in a Story
        f.clauses[2].micro = Some(MicroLabel::Narrative);
        assert!(f.validate().is_ok());
    }

    #[test]
    fn label_tokens() {
        assert_eq!(MacroLabel::from_token("Coda"), Some(MacroLabel::Coda));
        assert_eq!(MacroLabel::from_token("Cod"), Some(MacroLabel::Coda));
        assert_eq!(MicroLabel::from_token("H"), None);
        assert_eq!(MicroLabel::ALL.len(), 3);
        assert_eq!(MacroLabel::ALL.len(), 6);
    }
}
