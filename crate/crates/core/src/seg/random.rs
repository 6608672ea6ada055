use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{fleiss_kappa_b, BedMode, FragmentSegmentations, SegParams, Segmentation};
use crate::error::MetricError;

/// A segmentation with `boundary_count` boundaries drawn uniformly without
/// replacement from the `atoms - 1` potential positions. Deterministic per seed.
pub fn random_segmentation(atoms: usize, boundary_count: usize, seed: u64) -> Result<Segmentation, MetricError> {
    let potential = atoms.saturating_sub(1);
    if boundary_count > potential {
        return Err(MetricError::TooManyBoundaries { count: boundary_count, atoms });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions: Vec<usize> = index::sample(&mut rng, potential, boundary_count).into_iter().map(|i| i + 1).collect();
    Segmentation::from_boundaries(&positions, atoms)
}

/// What the baseline needs to know about one fragment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineFragment {
    pub fragment_id: String,
    pub atoms: usize,
    pub mean_boundaries: f64,
}

impl BaselineFragment {
    /// Atom count and mean boundary count of the human segmentations of one fragment.
    pub fn from_human(fragment: &FragmentSegmentations) -> Self {
        let n = fragment.coders.len().max(1) as f64;
        BaselineFragment {
            fragment_id: fragment.fragment_id.clone(),
            atoms: fragment.coders.first().map_or(0, |c| c.segmentation.atoms()),
            mean_boundaries: fragment.coders.iter().map(|c| c.segmentation.boundary_count() as f64).sum::<f64>() / n,
        }
    }

    fn boundary_count(&self) -> usize {
        (self.mean_boundaries.round() as usize).min(self.atoms.saturating_sub(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Distribution {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl Distribution {
    fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        Some(Distribution {
            mean: v.iter().sum::<f64>() / v.len() as f64,
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            samples: v.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineRun {
    pub seed: u64,
    pub mean_b: f64,
    pub kappa_b: Option<f64>,
    pub bed_per_100: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineReport {
    pub runs: Vec<BaselineRun>,
    /// `None` when every run had an undefined kappa.
    pub kappa_b: Option<Distribution>,
    pub undefined_runs: usize,
    pub bed_per_100: Option<Distribution>,
    pub seeds: Vec<u64>,
    pub params: SegParams,
}

// splitmix64 finalizer
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one random coder on one fragment of one run.
pub(crate) fn derive_seed(seed: u64, fragment: usize, coder: usize) -> u64 {
    mix(mix(mix(seed) ^ fragment as u64) ^ coder as u64)
}

/// Compares two random segmentations per fragment, each with the rounded mean human
/// boundary count, once per seed, and summarizes kappa and BED over the runs.
pub fn random_baseline_experiment(
    corpus: &[BaselineFragment],
    seeds: &[u64],
    n_t: usize,
    bed_mode: BedMode,
) -> Result<BaselineReport, MetricError> {
    let mut runs = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let fragments = corpus
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let k = f.boundary_count();
                let a = random_segmentation(f.atoms, k, derive_seed(seed, i, 0))?;
                let b = random_segmentation(f.atoms, k, derive_seed(seed, i, 1))?;
                Ok(FragmentSegmentations::new(f.fragment_id.clone(), [("random-a", a), ("random-b", b)]))
            })
            .collect::<Result<Vec<_>, MetricError>>()?;
        let r = fleiss_kappa_b(&fragments, n_t, bed_mode)?;
        runs.push(BaselineRun { seed, mean_b: r.mean_b, kappa_b: r.kappa_b, bed_per_100: r.bed_per_100 });
    }
    Ok(BaselineReport {
        kappa_b: Distribution::of(runs.iter().filter_map(|r| r.kappa_b)),
        undefined_runs: runs.iter().filter(|r| r.kappa_b.is_none()).count(),
        bed_per_100: Distribution::of(runs.iter().map(|r| r.bed_per_100)),
        runs,
        seeds: seeds.to_vec(),
        params: SegParams { n_t, atom_basis: super::AtomBasis::Character, bed_mode },
    })
}
