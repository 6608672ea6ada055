use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{boundary_edit_distance, AtomBasis, Segmentation};
use crate::error::MetricError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoderSegmentation {
    pub coder: String,
    pub segmentation: Segmentation,
}

/// All coders' segmentations of one fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentSegmentations {
    pub fragment_id: String,
    pub coders: Vec<CoderSegmentation>,
}

impl FragmentSegmentations {
    pub fn new<I, S>(fragment_id: impl Into<String>, coders: I) -> Self
    where
        I: IntoIterator<Item = (S, Segmentation)>,
        S: Into<String>,
    {
        FragmentSegmentations {
            fragment_id: fragment_id.into(),
            coders: coders
                .into_iter()
                .map(|(c, s)| CoderSegmentation { coder: c.into(), segmentation: s })
                .collect(),
        }
    }
}

/// How BED is normalized to "per 100 potential boundaries".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BedMode {
    /// Total edit cost over total potential positions, across every pair and fragment.
    #[default]
    Pooled,
    /// Mean of the per-pair, per-fragment rates.
    PerFragment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegParams {
    pub n_t: usize,
    pub atom_basis: AtomBasis,
    pub bed_mode: BedMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseB {
    pub fragment_id: String,
    pub coder_a: String,
    pub coder_b: String,
    pub b: f64,
    pub bed: f64,
    pub potential_positions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegAgreementReport {
    pub pairwise_b: Vec<PairwiseB>,
    pub mean_b: f64,
    pub chance_agreement: f64,
    /// `None` when the coefficient is undefined: chance agreement is 1, or no coder placed a boundary.
    pub kappa_b: Option<f64>,
    pub bed_per_100: f64,
    pub params: SegParams,
}

/// Fleiss-style kappa with pairwise agreement replaced by boundary similarity.
///
/// Observed agreement is the mean B over every coder pair of every fragment. Chance
/// agreement is the mean, over the same pairs, of `p_c * p_c'`, where `p_c` is coder
/// `c`'s boundary placement rate (boundaries placed / potential positions) pooled
/// over all fragments that coder segmented.
pub fn fleiss_kappa_b(
    fragments: &[FragmentSegmentations],
    n_t: usize,
    bed_mode: BedMode,
) -> Result<SegAgreementReport, MetricError> {
    if n_t < 2 {
        return Err(MetricError::InvalidWindow(n_t));
    }
    if fragments.is_empty() {
        return Err(MetricError::TooFewCoders { fragment: String::new(), found: 0 });
    }

    // boundaries placed, potential positions
    let mut rates: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for f in fragments {
        if f.coders.len() < 2 {
            return Err(MetricError::TooFewCoders { fragment: f.fragment_id.clone(), found: f.coders.len() });
        }
        for c in &f.coders {
            let e = rates.entry(&c.coder).or_default();
            e.0 += c.segmentation.boundary_count();
            e.1 += c.segmentation.potential_positions();
        }
    }
    let rate = |coder: &str| {
        let (placed, potential) = rates[coder];
        if potential == 0 {
            0.0
        } else {
            placed as f64 / potential as f64
        }
    };

    let mut pairwise = Vec::new();
    let mut chance_sum = 0.0;
    let (mut bed_total, mut potential_total, mut rate_sum) = (0.0, 0usize, 0.0);
    let mut rate_count = 0usize;
    for f in fragments {
        for (i, a) in f.coders.iter().enumerate() {
            for b in &f.coders[i + 1..] {
                let r = boundary_edit_distance(&a.segmentation, &b.segmentation, n_t)?;
                let potential = a.segmentation.potential_positions();
                bed_total += r.raw_distance;
                potential_total += potential;
                if potential > 0 {
                    rate_sum += r.raw_distance / potential as f64;
                    rate_count += 1;
                }
                chance_sum += rate(&a.coder) * rate(&b.coder);
                pairwise.push(PairwiseB {
                    fragment_id: f.fragment_id.clone(),
                    coder_a: a.coder.clone(),
                    coder_b: b.coder.clone(),
                    b: r.similarity(),
                    bed: r.raw_distance,
                    potential_positions: potential,
                });
            }
        }
    }

    let pairs = pairwise.len() as f64;
    let mean_b = pairwise.iter().map(|p| p.b).sum::<f64>() / pairs;
    let chance = chance_sum / pairs;
    // with no boundary placed anywhere every B is vacuous and kappa carries no information
    let placed: usize = rates.values().map(|r| r.0).sum();
    let kappa_b = (chance < 1.0 && placed > 0).then(|| (mean_b - chance) / (1.0 - chance));
    let bed_per_100 = match bed_mode {
        BedMode::Pooled if potential_total > 0 => 100.0 * bed_total / potential_total as f64,
        BedMode::PerFragment if rate_count > 0 => 100.0 * rate_sum / rate_count as f64,
        _ => 0.0,
    };

    Ok(SegAgreementReport {
        pairwise_b: pairwise,
        mean_b,
        chance_agreement: chance,
        kappa_b,
        bed_per_100,
        params: SegParams { n_t, atom_basis: AtomBasis::Character, bed_mode },
    })
}
