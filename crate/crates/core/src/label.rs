//! Label agreement: nominal Krippendorff's alpha, exact-match rates and pair confusion.
//!
//! Values are label tokens (the canonical codes, `N`, `Com`, ...). A missing value is
//! `None`; it is never treated as a label of its own.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::MetricError;
use crate::format::Bundle;
use crate::model::{ClauseId, Label, MacroLabel, MicroLabel};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Unit {
    pub fragment_id: String,
    pub clause: ClauseId,
}

/// Coders by units; `values[u][c]` is coder `c`'s token for unit `u`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LabelMatrix {
    pub units: Vec<Unit>,
    pub coders: Vec<String>,
    pub values: Vec<Vec<Option<String>>>,
}

impl LabelMatrix {
    pub fn new<S: Into<String>>(coders: impl IntoIterator<Item = S>) -> Self {
        LabelMatrix { units: Vec::new(), coders: coders.into_iter().map(Into::into).collect(), values: Vec::new() }
    }

    pub fn push(&mut self, unit: Unit, row: Vec<Option<String>>) -> Result<(), MetricError> {
        if row.len() != self.coders.len() {
            return Err(MetricError::MalformedMatrix(format!(
                "unit {}:{} has {} values for {} coders",
                unit.fragment_id,
                unit.clause,
                row.len(),
                self.coders.len()
            )));
        }
        self.units.push(unit);
        self.values.push(row);
        Ok(())
    }

    /// Matrix from bare rows; units are numbered 1.. in a fragment called `"-"`.
    pub fn from_rows<S: AsRef<str>>(coders: usize, rows: &[Vec<Option<S>>]) -> Result<Self, MetricError> {
        let mut m = LabelMatrix::new((1..=coders).map(|c| format!("c{c}")));
        for (i, row) in rows.iter().enumerate() {
            let row = row.iter().map(|v| v.as_ref().map(|s| s.as_ref().to_string())).collect();
            m.push(Unit { fragment_id: "-".into(), clause: i + 1 }, row)?;
        }
        Ok(m)
    }

    fn check(&self) -> Result<(), MetricError> {
        if self.coders.len() < 2 {
            return Err(MetricError::MalformedMatrix(format!("need at least two coders, found {}", self.coders.len())));
        }
        if self.units.len() != self.values.len() || self.values.iter().any(|r| r.len() != self.coders.len()) {
            return Err(MetricError::MalformedMatrix("row lengths do not match the coder list".into()));
        }
        Ok(())
    }

    /// Non-missing values of each unit.
    fn present(&self) -> impl Iterator<Item = Vec<&str>> {
        self.values.iter().map(|row| row.iter().flatten().map(String::as_str).collect())
    }

    /// Units with at least two non-missing values.
    pub fn pairable_units(&self) -> usize {
        self.present().filter(|v| v.len() >= 2).count()
    }

    /// How often each token was assigned, over all coders and units.
    pub fn label_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for v in self.present() {
            for t in v {
                *out.entry(t.to_string()).or_insert(0) += 1;
            }
        }
        out
    }
}

/// Nominal alpha, `1 - D_o / D_e`, from the coincidence matrix.
///
/// With `n` pairable values, `o_cc` the diagonal of the coincidence matrix and `n_c`
/// its marginals, `alpha = 1 - (n - 1)(n - Σ o_cc) / (n² - Σ n_c²)`.
pub fn krippendorff_alpha_nominal(matrix: &LabelMatrix) -> Result<f64, MetricError> {
    matrix.check()?;
    let mut n = 0.0;
    let mut diagonal = 0.0;
    let mut marginals: BTreeMap<&str, f64> = BTreeMap::new();
    for row in &matrix.values {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for v in row.iter().flatten() {
            *counts.entry(v.as_str()).or_insert(0) += 1;
        }
        let m: usize = counts.values().sum();
        if m < 2 {
            continue;
        }
        n += m as f64;
        for (label, &k) in &counts {
            diagonal += (k * (k - 1)) as f64 / (m - 1) as f64;
            *marginals.entry(label).or_insert(0.0) += k as f64;
        }
    }
    if n == 0.0 {
        return Err(MetricError::NoPairableUnits);
    }
    let expected = n * n - marginals.values().map(|c| c * c).sum::<f64>();
    if expected == 0.0 {
        return Err(MetricError::NoVariation);
    }
    Ok(1.0 - (n - 1.0) * (n - diagonal) / expected)
}

/// Which units count as "the label was chosen".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactMatchMode {
    /// At least one coder chose the label.
    #[default]
    AnyChose,
    /// A strict majority of the coders with a value chose it.
    Majority,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactMatch {
    pub matched: usize,
    pub chosen: usize,
    pub rate: f64,
}

/// Per label: units where every coder with a value chose it (at least two of them),
/// over units where it was chosen. Labels nobody chose are absent.
pub fn exact_match_rates(matrix: &LabelMatrix, mode: ExactMatchMode) -> BTreeMap<String, ExactMatch> {
    let mut tally: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for values in matrix.present() {
        let distinct: BTreeSet<&str> = values.iter().copied().collect();
        for &label in &distinct {
            let k = values.iter().filter(|&&v| v == label).count();
            let e = tally.entry(label.to_string()).or_default();
            let chosen = match mode {
                ExactMatchMode::AnyChose => true,
                ExactMatchMode::Majority => 2 * k > values.len(),
            };
            if chosen {
                e.1 += 1;
            }
            if distinct.len() == 1 && values.len() >= 2 {
                e.0 += 1;
            }
        }
    }
    tally
        .into_iter()
        .filter(|(_, (_, chosen))| *chosen > 0)
        .map(|(label, (matched, chosen))| (label, ExactMatch { matched, chosen, rate: matched as f64 / chosen as f64 }))
        .collect()
}

/// Unordered label pairs over all coder pairs of every unit, keyed with the smaller token first.
pub fn confusion_counts(matrix: &LabelMatrix) -> BTreeMap<(String, String), usize> {
    let mut out = BTreeMap::new();
    for values in matrix.present() {
        for (i, a) in values.iter().enumerate() {
            for b in &values[i + 1..] {
                let key = if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
                *out.entry(key).or_insert(0) += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionCell {
    pub a: String,
    pub b: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelAgreementReport {
    /// Kind of label the matrix holds, e.g. "micro label".
    pub field: String,
    pub coders: Vec<String>,
    pub units: usize,
    /// `None` when alpha is undefined; `alpha_undefined` then says why.
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_undefined: Option<String>,
    pub pairable_units: usize,
    pub exact_match: BTreeMap<String, ExactMatch>,
    pub exact_match_mode: ExactMatchMode,
    pub label_counts: BTreeMap<String, usize>,
    pub confusion: Vec<ConfusionCell>,
}

pub fn label_agreement(
    field: &str,
    matrix: &LabelMatrix,
    mode: ExactMatchMode,
) -> Result<LabelAgreementReport, MetricError> {
    matrix.check()?;
    let (alpha, alpha_undefined) = match krippendorff_alpha_nominal(matrix) {
        Ok(a) => (Some(a), None),
        Err(e @ (MetricError::NoPairableUnits | MetricError::NoVariation)) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(LabelAgreementReport {
        field: field.to_string(),
        coders: matrix.coders.clone(),
        units: matrix.units.len(),
        alpha,
        alpha_undefined,
        pairable_units: matrix.pairable_units(),
        exact_match: exact_match_rates(matrix, mode),
        exact_match_mode: mode,
        label_counts: matrix.label_counts(),
        confusion: confusion_counts(matrix)
            .into_iter()
            .map(|((a, b), count)| ConfusionCell { a, b, count })
            .collect(),
    })
}

fn build_matrix<L: Label>(
    bundles: &[Bundle],
    pick: impl Fn(&crate::model::AnnotatorLayer) -> &BTreeMap<ClauseId, L>,
) -> Result<LabelMatrix, MetricError> {
    let coders: BTreeSet<&str> = bundles.iter().flat_map(|b| b.layers.iter().map(|l| l.annotator_id.as_str())).collect();
    let mut matrix = LabelMatrix::new(coders.iter().copied());
    for bundle in bundles {
        let clauses = bundle.reference_segmentation()?.segment_count();
        for clause in 1..=clauses {
            let row = coders
                .iter()
                .map(|c| bundle.layer(c).and_then(|l| pick(l).get(&clause)).map(|v| v.code().to_string()))
                .collect();
            matrix.push(Unit { fragment_id: bundle.fragment_id.clone(), clause }, row)?;
        }
    }
    Ok(matrix)
}

/// Micro-label matrix over the reference clauses of each bundle. Clauses of
/// Hypothetical spans carry no micro label and so enter as missing values.
pub fn micro_matrix(bundles: &[Bundle]) -> Result<LabelMatrix, MetricError> {
    build_matrix::<MicroLabel>(bundles, |l| &l.micro)
}

pub fn macro_matrix(bundles: &[Bundle]) -> Result<LabelMatrix, MetricError> {
    build_matrix::<MacroLabel>(bundles, |l| &l.macro_labels)
}
