//! Micro-label decision chart.
//!
//! The chart is data: a small binary tree of yes/no questions whose leaves are a
//! micro label or "no label". The built-in chart asks at most three questions:
//! hypothetical-only clauses get no label, events and discoveries are Narrative,
//! and the rest is Free or Restricted depending on whether the information holds
//! for the whole narrated period.
//!
//! ```
//! use labov_core::wizard::{decide_micro, ChartAnswer};
//! use labov_core::MicroLabel;
//!
//! let sky_was_blue = ChartAnswer { in_hypothetical_only: false, reports_event_or_discovery: false, holds_entire_period: true };
//! assert_eq!(decide_micro(&sky_was_blue), Some(MicroLabel::Free));
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::model::MicroLabel;

pub const DEFAULT_CHART: &str = include_str!("../charts/micro.json");
pub const MAX_DEPTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartField {
    InHypotheticalOnly,
    ReportsEventOrDiscovery,
    HoldsEntirePeriod,
}

/// A complete answer vector. Fields a path never reaches are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ChartAnswer {
    pub in_hypothetical_only: bool,
    pub reports_event_or_discovery: bool,
    pub holds_entire_period: bool,
}

impl ChartAnswer {
    pub fn get(&self, field: ChartField) -> bool {
        match field {
            ChartField::InHypotheticalOnly => self.in_hypothetical_only,
            ChartField::ReportsEventOrDiscovery => self.reports_event_or_discovery,
            ChartField::HoldsEntirePeriod => self.holds_entire_period,
        }
    }

    /// All eight answer vectors.
    pub fn all() -> impl Iterator<Item = ChartAnswer> {
        (0..8u8).map(|bits| ChartAnswer {
            in_hypothetical_only: bits & 1 != 0,
            reports_event_or_discovery: bits & 2 != 0,
            holds_entire_period: bits & 4 != 0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PartialAnswers {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_hypothetical_only: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reports_event_or_discovery: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holds_entire_period: Option<bool>,
}

impl PartialAnswers {
    pub fn get(&self, field: ChartField) -> Option<bool> {
        match field {
            ChartField::InHypotheticalOnly => self.in_hypothetical_only,
            ChartField::ReportsEventOrDiscovery => self.reports_event_or_discovery,
            ChartField::HoldsEntirePeriod => self.holds_entire_period,
        }
    }
}

impl From<ChartAnswer> for PartialAnswers {
    fn from(a: ChartAnswer) -> Self {
        PartialAnswers {
            in_hypothetical_only: Some(a.in_hypothetical_only),
            reports_event_or_discovery: Some(a.reports_event_or_discovery),
            holds_entire_period: Some(a.holds_entire_period),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Next(String),
    Label(MicroLabel),
    NoLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartNode {
    pub id: String,
    pub field: ChartField,
    pub question_en: String,
    pub question_ja: String,
    #[serde(default)]
    pub examples: Vec<String>,
    pub yes: Target,
    pub no: Target,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Chart {
    pub start: String,
    pub nodes: Vec<ChartNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    Question {
        node: String,
        field: ChartField,
        question_en: String,
        question_ja: String,
        examples: Vec<String>,
        /// 1-based position of this question on the path.
        number: usize,
    },
    Decided {
        label: Option<MicroLabel>,
        path: Vec<String>,
    },
}

impl Chart {
    pub fn from_json(text: &str) -> Result<Chart, String> {
        let chart: Chart = serde_json::from_str(text).map_err(|e| format!("chart is not valid: {e}"))?;
        chart.check()?;
        Ok(chart)
    }

    pub fn builtin() -> &'static Chart {
        static CHART: OnceLock<Chart> = OnceLock::new();
        CHART.get_or_init(|| Chart::from_json(DEFAULT_CHART).expect("built-in chart is valid"))
    }

    fn node(&self, id: &str) -> Option<&ChartNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    /// Node ids resolve, no field is asked twice on a path, every path ends within
    /// [`MAX_DEPTH`] questions, and every node is reachable.
    pub fn check(&self) -> Result<(), String> {
        let mut ids = BTreeSet::new();
        for n in &self.nodes {
            if !ids.insert(n.id.as_str()) {
                return Err(format!("duplicate node id {:?}", n.id));
            }
        }
        let by_id: BTreeMap<&str, &ChartNode> = self.nodes.iter().map(|n| (n.id.as_str(), n)).collect();
        let mut reached = BTreeSet::new();
        // (node, depth, fields asked so far)
        let mut stack = vec![(self.start.as_str(), 1usize, Vec::<ChartField>::new())];
        while let Some((id, depth, asked)) = stack.pop() {
            let node = by_id.get(id).ok_or_else(|| format!("unknown node {id:?}"))?;
            if asked.contains(&node.field) {
                return Err(format!("node {id:?} asks {:?} a second time on one path", node.field));
            }
            if depth > MAX_DEPTH {
                return Err(format!("path through {id:?} asks more than {MAX_DEPTH} questions"));
            }
            reached.insert(id);
            for t in [&node.yes, &node.no] {
                if let Target::Next(next) = t {
                    let mut asked = asked.clone();
                    asked.push(node.field);
                    stack.push((next.as_str(), depth + 1, asked));
                }
            }
        }
        if let Some(orphan) = ids.difference(&reached).next() {
            return Err(format!("node {orphan:?} is unreachable"));
        }
        Ok(())
    }

    /// Walks the chart; a checked chart always terminates.
    pub fn decide(&self, answers: &ChartAnswer) -> Option<MicroLabel> {
        match self.next_question(&PartialAnswers::from(*answers)) {
            Step::Decided { label, .. } => label,
            Step::Question { .. } => unreachable!("complete answers always reach a leaf"),
        }
    }

    /// The first question on the path that `answers` leaves open, or the outcome.
    pub fn next_question(&self, answers: &PartialAnswers) -> Step {
        let mut path = Vec::new();
        let mut id = self.start.as_str();
        loop {
            let node = self.node(id).expect("checked chart");
            let Some(yes) = answers.get(node.field) else {
                return Step::Question {
                    node: node.id.clone(),
                    field: node.field,
                    question_en: node.question_en.clone(),
                    question_ja: node.question_ja.clone(),
                    examples: node.examples.clone(),
                    number: path.len() + 1,
                };
            };
            path.push(node.id.clone());
            match if yes { &node.yes } else { &node.no } {
                Target::Next(next) => id = next,
                Target::Label(l) => return Step::Decided { label: Some(*l), path },
                Target::NoLabel => return Step::Decided { label: None, path },
            }
        }
    }
}

/// [`Chart::decide`] on the built-in chart.
pub fn decide_micro(answers: &ChartAnswer) -> Option<MicroLabel> {
    Chart::builtin().decide(answers)
}

/// [`Chart::next_question`] on the built-in chart.
pub fn next_question(answers: &PartialAnswers) -> Step {
    Chart::builtin().next_question(answers)
}
