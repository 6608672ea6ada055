//! The pure operations behind the stateless endpoints. The CLI calls the same
//! functions, so its `--format json` output and the service bodies match.

use labov_core::adjudication::{corpus_stats, Adjudication, GoldCorpusStats, VoteField};
use labov_core::format::{parse_bundle, Bundle};
use labov_core::label::{label_agreement, macro_matrix, micro_matrix, ExactMatchMode, LabelAgreementReport};
use labov_core::lint::{error_count, lint_fragment, LintConfig, LintFinding};
use labov_core::model::{ClauseId, Fragment};
use labov_core::seg::{
    fleiss_kappa_b, random_baseline_experiment, BaselineFragment, BaselineReport, BedMode, SegAgreementReport,
};
use labov_core::{AdjudicationError, FormatError, MetricError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LintReport {
    pub findings: Vec<LintFinding>,
    pub errors: usize,
}

pub fn lint(fragment: &Fragment, config: &LintConfig) -> LintReport {
    let findings = lint_fragment(fragment, config);
    LintReport { errors: error_count(&findings), findings }
}

/// One bundle object, or a JSON array of them.
pub fn parse_bundles(input: &[u8]) -> Result<Vec<Bundle>, FormatError> {
    let value: serde_json::Value = serde_json::from_slice(input)?;
    match value {
        serde_json::Value::Array(items) => items
            .iter()
            .map(|v| parse_bundle(&serde_json::to_vec(v).expect("value serializes")))
            .collect(),
        v => Ok(vec![parse_bundle(&serde_json::to_vec(&v).expect("value serializes"))?]),
    }
}

pub fn segmentation_report(bundles: &[Bundle], n_t: usize, bed_mode: BedMode) -> Result<SegAgreementReport, MetricError> {
    let fragments: Vec<_> = bundles.iter().map(Bundle::segmentations).collect();
    fleiss_kappa_b(&fragments, n_t, bed_mode)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelField {
    #[default]
    Micro,
    Macro,
}

impl LabelField {
    pub fn name(self) -> &'static str {
        match self {
            LabelField::Micro => "micro",
            LabelField::Macro => "macro",
        }
    }
}

pub fn label_report(bundles: &[Bundle], field: LabelField, mode: ExactMatchMode) -> Result<LabelAgreementReport, MetricError> {
    let matrix = match field {
        LabelField::Micro => micro_matrix(bundles)?,
        LabelField::Macro => macro_matrix(bundles)?,
    };
    label_agreement(field.name(), &matrix, mode)
}

/// Random-segmentation baseline sized from the human layers of each bundle.
pub fn baseline_report(bundles: &[Bundle], seeds: &[u64], n_t: usize, bed_mode: BedMode) -> Result<BaselineReport, MetricError> {
    let corpus: Vec<_> = bundles.iter().map(|b| BaselineFragment::from_human(&b.segmentations())).collect();
    random_baseline_experiment(&corpus, seeds, n_t, bed_mode)
}

pub fn adjudicate(bundle: &Bundle) -> Result<Adjudication, AdjudicationError> {
    Adjudication::of_bundle(bundle)
}

/// Body of a discussion resolution. Stateless: the caller sends the adjudication
/// it holds and gets the updated one back.
#[derive(Debug, Clone, Deserialize)]
pub struct Resolution {
    pub adjudication: Adjudication,
    pub field: VoteField,
    pub clause: ClauseId,
    pub resolution: String,
    pub resolvers: Vec<String>,
    #[serde(default)]
    pub note: String,
    #[serde(default)]
    pub at: String,
}

pub fn resolve(r: Resolution) -> Result<Adjudication, AdjudicationError> {
    let mut adjudication = r.adjudication;
    adjudication.resolve(r.field, r.clause, &r.resolution, &r.resolvers, &r.note, &r.at)?;
    Ok(adjudication)
}

pub fn gold_stats(bundles: &[Bundle]) -> GoldCorpusStats {
    let gold: Vec<Fragment> = bundles.iter().filter_map(|b| b.gold.clone()).collect();
    corpus_stats(&gold)
}
