use serde::Serialize;

use super::Segmentation;
use crate::error::MetricError;

/// A near miss: a boundary of `a` at `position` paired with a boundary of `b` at
/// `position + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Transposition {
    pub position: usize,
    pub offset: isize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryEditResult {
    /// Boundaries present in only one segmentation and left unpaired (insertions or deletions).
    pub additions: usize,
    pub transpositions: Vec<Transposition>,
    pub matches: usize,
    /// Edit cost: additions plus the span-weighted transpositions.
    pub raw_distance: f64,
    pub n_t: usize,
}

impl BoundaryEditResult {
    /// Number of edit operations, counting each transposition once.
    pub fn edits(&self) -> usize {
        self.additions + self.transpositions.len()
    }

    /// Sum of `|offset| / n_t` over all transpositions.
    pub fn weighted_transpositions(&self) -> f64 {
        self.transposition_span() as f64 / self.n_t as f64
    }

    fn transposition_span(&self) -> usize {
        self.transpositions.iter().map(|t| t.offset.unsigned_abs()).sum()
    }

    /// Boundary similarity derived from this edit set. Vacuously 1 when neither side has a boundary.
    pub fn similarity(&self) -> f64 {
        let denom = self.edits() + self.matches;
        if denom == 0 {
            return 1.0;
        }
        // scaled by n_t so both sides are integers and the result is one rounding of the exact ratio
        let cost = self.additions * self.n_t + self.transposition_span();
        let scale = denom * self.n_t;
        (scale - cost) as f64 / scale as f64
    }
}

fn check(a: &Segmentation, b: &Segmentation, n_t: usize) -> Result<(), MetricError> {
    if n_t < 2 {
        return Err(MetricError::InvalidWindow(n_t));
    }
    if a.atoms() != b.atoms() {
        return Err(MetricError::AtomMismatch { left: a.atoms(), right: b.atoms() });
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Cost {
    // n_t * additions + sum of |offset|
    scaled: usize,
    // ties go to the decomposition with fewer edit operations
    edits: usize,
}

/// Minimal edit decomposition between two segmentations.
///
/// Boundaries at the same position in both are matches. The remaining boundaries are
/// paired into transpositions (offset at most `n_t - 1`) so as to minimize
/// `additions + Σ|offset| / n_t`, preferring fewer edit operations on ties. Two
/// crossing pairs can always be uncrossed without raising either offset or the total,
/// so an alignment of the two sorted lists of unshared boundaries finds the optimum.
pub fn boundary_edit_distance(a: &Segmentation, b: &Segmentation, n_t: usize) -> Result<BoundaryEditResult, MetricError> {
    check(a, b, n_t)?;
    let ba = a.boundaries();
    let bb = b.boundaries();
    let shared: Vec<usize> = ba.iter().copied().filter(|p| bb.binary_search(p).is_ok()).collect();
    let ua: Vec<usize> = ba.iter().copied().filter(|p| shared.binary_search(p).is_err()).collect();
    let ub: Vec<usize> = bb.iter().copied().filter(|p| shared.binary_search(p).is_err()).collect();

    // best[i][j]: optimum for the first i of ua and the first j of ub
    let (n, m) = (ua.len(), ub.len());
    let mut best = vec![vec![Cost { scaled: 0, edits: 0 }; m + 1]; n + 1];
    for i in 0..=n {
        for j in 0..=m {
            if i == 0 && j == 0 {
                continue;
            }
            let add = |c: Cost| Cost { scaled: c.scaled + n_t, edits: c.edits + 1 };
            let mut cand = match (i, j) {
                (0, _) => add(best[0][j - 1]),
                (_, 0) => add(best[i - 1][0]),
                _ => add(best[i - 1][j]).min(add(best[i][j - 1])),
            };
            if i > 0 && j > 0 {
                let off = ua[i - 1].abs_diff(ub[j - 1]);
                if off < n_t {
                    let prev = best[i - 1][j - 1];
                    cand = cand.min(Cost { scaled: prev.scaled + off, edits: prev.edits + 1 });
                }
            }
            best[i][j] = cand;
        }
    }

    let mut transpositions = Vec::new();
    let mut additions = 0;
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = best[i][j];
        if i > 0 && j > 0 {
            let off = ua[i - 1].abs_diff(ub[j - 1]);
            let prev = best[i - 1][j - 1];
            if off < n_t && here == (Cost { scaled: prev.scaled + off, edits: prev.edits + 1 }) {
                transpositions.push(Transposition { position: ua[i - 1], offset: ub[j - 1] as isize - ua[i - 1] as isize });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        additions += 1;
        if i > 0 && here == (Cost { scaled: best[i - 1][j].scaled + n_t, edits: best[i - 1][j].edits + 1 }) {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    transpositions.reverse();

    let span: usize = transpositions.iter().map(|t| t.offset.unsigned_abs()).sum();
    Ok(BoundaryEditResult {
        additions,
        transpositions,
        matches: shared.len(),
        raw_distance: additions as f64 + span as f64 / n_t as f64,
        n_t,
    })
}

/// Boundary similarity `B` in `[0, 1]`.
pub fn boundary_similarity(a: &Segmentation, b: &Segmentation, n_t: usize) -> Result<f64, MetricError> {
    Ok(boundary_edit_distance(a, b, n_t)?.similarity())
}
