//! Segmentation agreement: boundary edit distance, boundary similarity, the
//! B-based Fleiss' kappa and a random-segmentation baseline.
//!
//! A segmentation is stored as a mass sequence over atoms (characters of the
//! normalized transcript). A text of `n` atoms has `n - 1` potential boundary
//! positions; position `p` sits between atom `p` and atom `p + 1` (1-based).

mod bed;
mod kappa;
mod random;

pub use bed::{boundary_edit_distance, boundary_similarity, BoundaryEditResult, Transposition};
pub use kappa::{fleiss_kappa_b, BedMode, CoderSegmentation, FragmentSegmentations, PairwiseB, SegAgreementReport, SegParams};
pub use random::{
    random_baseline_experiment, random_segmentation, BaselineFragment, BaselineReport, BaselineRun, Distribution,
};

use serde::{Deserialize, Serialize};

use crate::error::MetricError;

/// Default transposition window: only adjacent-position near misses pair up.
pub const DEFAULT_NT: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomBasis {
    #[default]
    Character,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSegmentation")]
pub struct Segmentation {
    masses: Vec<usize>,
    #[serde(default)]
    atom_basis: AtomBasis,
}

#[derive(Deserialize)]
struct RawSegmentation {
    masses: Vec<usize>,
    #[serde(default)]
    atom_basis: AtomBasis,
}

impl TryFrom<RawSegmentation> for Segmentation {
    type Error = MetricError;

    fn try_from(raw: RawSegmentation) -> Result<Self, Self::Error> {
        let mut s = Segmentation::from_masses(raw.masses)?;
        s.atom_basis = raw.atom_basis;
        Ok(s)
    }
}

impl Segmentation {
    pub fn from_masses(masses: Vec<usize>) -> Result<Self, MetricError> {
        if masses.contains(&0) {
            return Err(MetricError::ZeroMass);
        }
        Ok(Segmentation { masses, atom_basis: AtomBasis::Character })
    }

    /// Builds a segmentation of `atoms` atoms with boundaries at the given positions.
    ///
    /// Positions are gaps `1..atoms`; order and duplicates do not matter.
    pub fn from_boundaries(positions: &[usize], atoms: usize) -> Result<Self, MetricError> {
        let mut pos = positions.to_vec();
        pos.sort_unstable();
        pos.dedup();
        if let Some(&p) = pos.iter().find(|&&p| p == 0 || p >= atoms) {
            return Err(MetricError::BoundaryOutOfRange { position: p, atoms });
        }
        if atoms == 0 {
            return Ok(Segmentation { masses: Vec::new(), atom_basis: AtomBasis::Character });
        }
        let mut masses = Vec::with_capacity(pos.len() + 1);
        let mut prev = 0;
        for p in pos {
            masses.push(p - prev);
            prev = p;
        }
        masses.push(atoms - prev);
        Ok(Segmentation { masses, atom_basis: AtomBasis::Character })
    }

    /// One segment spanning the whole text.
    pub fn unsegmented(atoms: usize) -> Self {
        let masses = if atoms == 0 { Vec::new() } else { vec![atoms] };
        Segmentation { masses, atom_basis: AtomBasis::Character }
    }

    pub fn masses(&self) -> &[usize] {
        &self.masses
    }

    pub fn atom_basis(&self) -> AtomBasis {
        self.atom_basis
    }

    pub fn atoms(&self) -> usize {
        self.masses.iter().sum()
    }

    pub fn potential_positions(&self) -> usize {
        self.atoms().saturating_sub(1)
    }

    pub fn segment_count(&self) -> usize {
        self.masses.len()
    }

    pub fn boundary_count(&self) -> usize {
        self.masses.len().saturating_sub(1)
    }

    /// Boundary positions in ascending order; the inverse of [`Segmentation::from_boundaries`].
    pub fn boundaries(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.boundary_count());
        let mut acc = 0;
        for m in &self.masses[..self.boundary_count()] {
            acc += m;
            out.push(acc);
        }
        out
    }

    /// Atom ranges (0-based, half-open) of each segment.
    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut acc = 0;
        self.masses
            .iter()
            .map(|m| {
                let r = acc..acc + m;
                acc += m;
                r
            })
            .collect()
    }

    /// Splits `text` into the segments' substrings; `None` if the character count differs.
    pub fn split_text<'t>(&self, text: &'t str) -> Option<Vec<&'t str>> {
        let offsets: Vec<usize> = text.char_indices().map(|(i, _)| i).chain([text.len()]).collect();
        if offsets.len() - 1 != self.atoms() {
            return None;
        }
        Some(self.ranges().into_iter().map(|r| &text[offsets[r.start]..offsets[r.end]]).collect())
    }
}

/// Segmentation of `raw_text` (counted in characters) with boundaries after the given atom counts.
pub fn to_segmentation(boundaries: &[usize], raw_text: &str) -> Result<Segmentation, MetricError> {
    Segmentation::from_boundaries(boundaries, raw_text.chars().count())
}
