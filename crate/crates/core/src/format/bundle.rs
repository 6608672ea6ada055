//! The `.bundle.json` container: one fragment's raw text plus every annotator's layer.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::normalize_text;
use crate::error::{FormatError, MetricError};
use crate::model::{AnnotatorLayer, Clause, ClauseId, Fragment, MacroLabel, MicroLabel, NarrativeSpan, Speaker, Topic};
use crate::seg::{FragmentSegmentations, Segmentation};

pub const BUNDLE_FORMAT: &str = "labov-bundle/1";

/// Hex SHA-256 of the normalized raw text.
pub fn text_digest(raw_text: &str) -> String {
    version_token(raw_text.as_bytes())
}

/// Hex SHA-256 of a stored document, used as its optimistic-concurrency version.
pub fn version_token(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub fragment_id: String,
    pub topic: Topic,
    /// Normalized interviewee transcript; segmentation atoms are its characters.
    pub raw_text: String,
    /// Agreed clause segmentation, once segmentation has been adjudicated.
    pub reference: Option<Segmentation>,
    pub layers: Vec<AnnotatorLayer>,
    pub gold: Option<Fragment>,
}

// spelled out rather than flattened: serde's flatten cannot read integer map keys
#[derive(Serialize, Deserialize)]
struct LayerRecord {
    annotator_id: String,
    fragment_id: String,
    text_digest: String,
    clause_boundaries: Segmentation,
    #[serde(default)]
    spans: Vec<NarrativeSpan>,
    #[serde(default)]
    micro: BTreeMap<ClauseId, MicroLabel>,
    #[serde(rename = "macro", default)]
    macro_labels: BTreeMap<ClauseId, MacroLabel>,
}

impl LayerRecord {
    fn new(layer: &AnnotatorLayer, text_digest: String) -> Self {
        LayerRecord {
            annotator_id: layer.annotator_id.clone(),
            fragment_id: layer.fragment_id.clone(),
            text_digest,
            clause_boundaries: layer.clause_boundaries.clone(),
            spans: layer.spans.clone(),
            micro: layer.micro.clone(),
            macro_labels: layer.macro_labels.clone(),
        }
    }

    fn into_layer(self) -> AnnotatorLayer {
        AnnotatorLayer {
            annotator_id: self.annotator_id,
            fragment_id: self.fragment_id,
            clause_boundaries: self.clause_boundaries,
            spans: self.spans,
            micro: self.micro,
            macro_labels: self.macro_labels,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct BundleRecord {
    format: String,
    fragment_id: String,
    #[serde(default)]
    topic: Topic,
    raw_text: String,
    text_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reference: Option<Segmentation>,
    layers: Vec<LayerRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gold: Option<Fragment>,
}

impl Bundle {
    pub fn new(fragment_id: impl Into<String>, topic: Topic, raw_text: &str) -> Self {
        Bundle {
            fragment_id: fragment_id.into(),
            topic,
            raw_text: normalize_text(raw_text),
            reference: None,
            layers: Vec::new(),
            gold: None,
        }
    }

    /// A bundle holding `gold`, whose raw text is the interviewee clauses joined by
    /// single spaces and whose reference segmentation cuts it back into those clauses.
    /// Interviewer clauses are not part of the raw text, so reference ids count
    /// interviewee clauses only.
    pub fn from_gold(gold: &Fragment) -> Result<Bundle, FormatError> {
        let texts: Vec<String> = gold
            .clauses
            .iter()
            .filter(|c| c.speaker == Speaker::Interviewee)
            .map(|c| normalize_text(&c.text))
            .collect();
        let mut bundle = Bundle::new(gold.fragment_id.clone(), gold.topic, &texts.join(" "));
        if !texts.is_empty() {
            if let Some(i) = texts.iter().position(|t| t.is_empty()) {
                return Err(FormatError::Unrepresentable(format!("interviewee clause {} has no text", i + 1)));
            }
            let last = texts.len() - 1;
            let masses = texts.iter().enumerate().map(|(i, t)| t.chars().count() + usize::from(i < last)).collect();
            bundle.reference = Some(Segmentation::from_masses(masses).expect("masses are positive"));
        }
        bundle.gold = Some(gold.clone());
        Ok(bundle)
    }

    pub fn atoms(&self) -> usize {
        self.raw_text.chars().count()
    }

    pub fn digest(&self) -> String {
        text_digest(&self.raw_text)
    }

    pub fn layer(&self, annotator: &str) -> Option<&AnnotatorLayer> {
        self.layers.iter().find(|l| l.annotator_id == annotator)
    }

    /// The segmentation labels are keyed against: the bundle's reference if set,
    /// otherwise the common segmentation when every layer agrees on it.
    pub fn reference_segmentation(&self) -> Result<&Segmentation, MetricError> {
        if let Some(r) = &self.reference {
            return Ok(r);
        }
        let first = self.layers.first().map(|l| &l.clause_boundaries).ok_or(MetricError::NoReference)?;
        if self.layers.iter().all(|l| &l.clause_boundaries == first) {
            Ok(first)
        } else {
            Err(MetricError::NoReference)
        }
    }

    /// Segmentation a layer's clause ids resolve against.
    pub fn id_space<'a>(&'a self, layer: &'a AnnotatorLayer) -> &'a Segmentation {
        self.reference.as_ref().unwrap_or(&layer.clause_boundaries)
    }

    /// Every layer's clause segmentation, for segmentation agreement.
    pub fn segmentations(&self) -> FragmentSegmentations {
        FragmentSegmentations::new(
            self.fragment_id.clone(),
            self.layers.iter().map(|l| (l.annotator_id.clone(), l.clause_boundaries.clone())),
        )
    }

    /// A fragment view of one layer: its clauses (all interviewee speech), spans and labels.
    pub fn layer_fragment(&self, layer: &AnnotatorLayer) -> Fragment {
        let seg = self.id_space(layer);
        let texts = seg.split_text(&self.raw_text).unwrap_or_default();
        let clauses = texts
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let id = i + 1;
                Clause::interviewee(id, normalize_text(t))
                    .with_labels(layer.micro.get(&id).copied(), layer.macro_labels.get(&id).copied())
            })
            .collect();
        Fragment::new(self.fragment_id.clone(), self.topic, clauses, layer.spans.clone())
    }

    /// Checks the invariants [`parse_bundle`] enforces.
    pub fn check(&self) -> Result<(), FormatError> {
        let atoms = self.atoms();
        if let Some(r) = &self.reference {
            if r.atoms() != atoms {
                return Err(FormatError::AtomCount { owner: "reference".into(), expected: atoms, found: r.atoms() });
            }
        }
        for layer in &self.layers {
            if layer.fragment_id != self.fragment_id {
                return Err(FormatError::FragmentMismatch {
                    annotator: layer.annotator_id.clone(),
                    expected: self.fragment_id.clone(),
                    found: layer.fragment_id.clone(),
                });
            }
            if layer.clause_boundaries.atoms() != atoms {
                return Err(FormatError::AtomCount {
                    owner: format!("annotator {:?}", layer.annotator_id),
                    expected: atoms,
                    found: layer.clause_boundaries.atoms(),
                });
            }
            let clauses = self.id_space(layer).segment_count();
            if let Some(&id) = layer.referenced_ids().iter().find(|&&id| id == 0 || id > clauses) {
                return Err(FormatError::UnknownClause { annotator: layer.annotator_id.clone(), id });
            }
        }
        Ok(())
    }
}

pub fn parse_bundle(input: &[u8]) -> Result<Bundle, FormatError> {
    let record: BundleRecord = serde_json::from_slice(input)?;
    if record.format != BUNDLE_FORMAT {
        return Err(FormatError::Version(record.format));
    }
    let raw_text = normalize_text(&record.raw_text);
    let expected = text_digest(&raw_text);
    if record.text_digest != expected {
        return Err(FormatError::DigestMismatch {
            annotator: "(bundle)".into(),
            expected,
            found: record.text_digest,
        });
    }
    let mut layers = Vec::with_capacity(record.layers.len());
    for l in record.layers {
        if l.text_digest != expected {
            return Err(FormatError::DigestMismatch {
                annotator: l.annotator_id,
                expected,
                found: l.text_digest,
            });
        }
        layers.push(l.into_layer());
    }
    let bundle = Bundle {
        fragment_id: record.fragment_id,
        topic: record.topic,
        raw_text,
        reference: record.reference,
        layers,
        gold: record.gold,
    };
    bundle.check()?;
    Ok(bundle)
}

pub fn serialize_bundle(bundle: &Bundle) -> Result<Vec<u8>, FormatError> {
    bundle.check()?;
    let digest = bundle.digest();
    let record = BundleRecord {
        format: BUNDLE_FORMAT.to_string(),
        fragment_id: bundle.fragment_id.clone(),
        topic: bundle.topic,
        raw_text: bundle.raw_text.clone(),
        text_digest: digest.clone(),
        reference: bundle.reference.clone(),
        layers: bundle
            .layers
            .iter()
            .map(|l| LayerRecord::new(l, digest.clone()))
            .collect(),
        gold: bundle.gold.clone(),
    };
    let mut out = serde_json::to_vec_pretty(&record)?;
    out.push(b'\n');
    Ok(out)
}
