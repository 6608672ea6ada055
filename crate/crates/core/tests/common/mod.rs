//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use labov_core::format::parse_lat;
use labov_core::model::{Clause, Fragment, Label, MacroLabel, MicroLabel, NarrativeSpan, NarrativeType, Speaker, Topic};
use labov_core::seg::{FragmentSegmentations, Segmentation};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CARER_EXAMPLE: &str = include_str!("../fixtures/carer_example.lat.tsv");

pub fn carer_example() -> Fragment {
    parse_lat(CARER_EXAMPLE.as_bytes()).expect("fixture parses")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// boundary edit distance by enumeration

/// Every composition of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    // each subset of the n - 1 inner positions is one boundary set
    (0u32..1 << (n - 1))
        .map(|mask| {
            let mut parts = Vec::new();
            let mut last = 0;
            for p in 1..n {
                if mask & (1 << (p - 1)) != 0 {
                    parts.push(p - last);
                    last = p;
                }
            }
            parts.push(n - last);
            parts
        })
        .collect()
}

fn cumulative(masses: &[usize]) -> BTreeSet<usize> {
    let mut acc = 0;
    masses[..masses.len() - 1].iter().map(|m| {
        acc += m;
        acc
    }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleEdit {
    pub matches: usize,
    pub additions: usize,
    pub transpositions: usize,
    pub offset_sum: usize,
}

impl OracleEdit {
    /// B as the exact ratio `(D n_t - cost) / (D n_t)`, rounded once.
    pub fn similarity(&self, n_t: usize) -> f64 {
        let d = self.matches + self.additions + self.transpositions;
        if d == 0 {
            return 1.0;
        }
        let cost = self.additions * n_t + self.offset_sum;
        (d * n_t - cost) as f64 / (d * n_t) as f64
    }
}

/// Tries every way of pairing the unshared boundaries of `a` with those of `b`.
/// Shared positions count as matches. The best pairing has the lowest
/// `n_t * additions + Σ|offset|`, then the fewest operations.
pub fn bed_oracle(a: &[usize], b: &[usize], n_t: usize) -> OracleEdit {
    let sa = cumulative(a);
    let sb = cumulative(b);
    let matches = sa.intersection(&sb).count();
    let ua: Vec<usize> = sa.difference(&sb).copied().collect();
    let ub: Vec<usize> = sb.difference(&sa).copied().collect();

    fn search(i: usize, ua: &[usize], ub: &[usize], used: &mut Vec<bool>, pairs: &mut Vec<usize>, n_t: usize, best: &mut Option<(usize, usize, usize, usize)>) {
        if i == ua.len() {
            let paired = pairs.len();
            let additions = ua.len() + ub.len() - 2 * paired;
            let span: usize = pairs.iter().sum();
            let key = (additions * n_t + span, additions + paired, additions, span);
            if best.is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                *best = Some(key);
            }
            return;
        }
        search(i + 1, ua, ub, used, pairs, n_t, best);
        for j in 0..ub.len() {
            let off = ua[i].abs_diff(ub[j]);
            if !used[j] && off < n_t {
                used[j] = true;
                pairs.push(off);
                search(i + 1, ua, ub, used, pairs, n_t, best);
                pairs.pop();
                used[j] = false;
            }
        }
    }

    let mut best = None;
    search(0, &ua, &ub, &mut vec![false; ub.len()], &mut Vec::new(), n_t, &mut best);
    let (_, edits, additions, span) = best.expect("the empty pairing always exists");
    OracleEdit { matches, additions, transpositions: edits - additions, offset_sum: span }
}

// ---------------------------------------------------------------------------
// Krippendorff's alpha from the full coincidence matrix

/// `None` when alpha is undefined (nothing pairable, or a single value in use).
pub fn alpha_oracle(rows: &[Vec<Option<String>>]) -> Option<f64> {
    let mut values: BTreeSet<&str> = BTreeSet::new();
    for r in rows {
        values.extend(r.iter().flatten().map(String::as_str));
    }
    let values: Vec<&str> = values.into_iter().collect();
    let k = values.len();
    let index = |v: &str| values.iter().position(|x| *x == v).unwrap();
    let mut o = vec![vec![0.0f64; k]; k];
    for r in rows {
        let present: Vec<usize> = r.iter().flatten().map(|v| index(v)).collect();
        let m = present.len();
        if m < 2 {
            continue;
        }
        for (i, &c) in present.iter().enumerate() {
            for (j, &d) in present.iter().enumerate() {
                if i != j {
                    o[c][d] += 1.0 / (m - 1) as f64;
                }
            }
        }
    }
    let n_c: Vec<f64> = o.iter().map(|row| row.iter().sum()).collect();
    let n: f64 = n_c.iter().sum();
    if n == 0.0 || n_c.iter().filter(|&&x| x > 0.0).count() < 2 {
        return None;
    }
    let mut observed = 0.0;
    let mut expected = 0.0;
    for c in 0..k {
        for d in 0..k {
            if c != d {
                observed += o[c][d];
                expected += n_c[c] * n_c[d];
            }
        }
    }
    let d_o = observed / n;
    let d_e = expected / (n * (n - 1.0));
    Some(1.0 - d_o / d_e)
}

pub fn random_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<Option<String>>> {
    let coders = rng.random_range(2..=5);
    let labels = rng.random_range(3..=6);
    let units = rng.random_range(5..=60);
    (0..units)
        .map(|_| {
            (0..coders)
                .map(|_| (!rng.random_bool(0.2)).then(|| format!("L{}", rng.random_range(0..labels))))
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// fragments

const WORDS: &[&str] = &[
    "watashi", "ga", "tokyo", "ni", "kita", "toki", "wa", "the", "sky", "was", "blue,", "and", "I", "felt", "free.",
    "初めて", "東京に", "来た", "時は", "「もう秋か」", "と", "思った", "“Ah,", "autumn”", "café", "ｶﾀｶﾅ", "…", "itte",
];

fn sentence(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(1..=8);
    (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

/// A valid fragment: spans of each kind sit on interviewee runs without
/// overlapping their own kind, and labels only appear where the schema allows.
pub fn random_fragment(rng: &mut ChaCha8Rng, id: usize) -> Fragment {
    let n = rng.random_range(0..=30);
    let mut clauses: Vec<Clause> = (1..=n)
        .map(|i| {
            let text = sentence(rng);
            if rng.random_bool(0.15) {
                Clause::interviewer(i, text)
            } else {
                Clause::interviewee(i, text)
            }
        })
        .collect();

    let mut spans = Vec::new();
    for kind in NarrativeType::ALL {
        let mut i = 1;
        while i < n {
            if rng.random_bool(0.3) {
                // extend over interviewee clauses only
                let mut end = i;
                let want = rng.random_range(2..=8);
                while end < n && end + 1 - i < want && clauses[end].speaker == Speaker::Interviewee {
                    end += 1;
                }
                if clauses[i - 1].speaker == Speaker::Interviewee && end > i {
                    spans.push(NarrativeSpan::new(kind, i, end));
                    i = end + 1 + rng.random_range(0..3);
                    continue;
                }
            }
            i += 1;
        }
    }
    spans.sort_by_key(|s| (s.start, s.kind, s.end));
    let mut f = Fragment::new(format!("gen-{id}"), *[Topic::HappinessHardship, Topic::Challenges, Topic::Other].choose(rng).unwrap(), Vec::new(), spans);
    for c in clauses.iter_mut() {
        if f.spans_containing(c.id).next().is_none() {
            continue;
        }
        if !f.is_hypothetical_only(c.id) && rng.random_bool(0.7) {
            c.micro = Some(*MicroLabel::ALL.choose(rng).unwrap());
        }
        if rng.random_bool(0.6) {
            c.macro_label = Some(*MacroLabel::ALL.choose(rng).unwrap());
        }
    }
    f.clauses = clauses;
    f
}

/// A generated fragment with up to three random schema breakages.
pub fn damaged_fragment(rng: &mut ChaCha8Rng, id: usize) -> Fragment {
    let mut f = random_fragment(rng, id);
    let n = f.clauses.len();
    for _ in 0..rng.random_range(0..=3) {
        match rng.random_range(0..9) {
            0 if n > 0 => {
                let i = rng.random_range(0..n);
                f.clauses[i].id = rng.random_range(0..=n + 2);
            }
            1 if n > 0 => {
                let i = rng.random_range(0..n);
                f.clauses[i].text = [" ", ""].choose(rng).unwrap().to_string();
            }
            2 => {
                let start = rng.random_range(0..=n + 1);
                let end = rng.random_range(0..=n + 2);
                f.spans.push(NarrativeSpan::new(*NarrativeType::ALL.choose(rng).unwrap(), start, end));
            }
            3 if n > 0 => {
                let at = rng.random_range(1..=n);
                f.spans.push(NarrativeSpan::new(*NarrativeType::ALL.choose(rng).unwrap(), at, at));
            }
            4 if !f.spans.is_empty() => {
                let s = *f.spans.choose(rng).unwrap();
                f.spans.push(NarrativeSpan::new(s.kind, s.end, (s.end + 2).min(n.max(s.end))));
            }
            5 if n > 0 => {
                let i = rng.random_range(0..n);
                f.clauses[i].speaker = Speaker::Interviewer;
            }
            6 if n > 0 => {
                let i = rng.random_range(0..n);
                f.clauses[i].macro_label = Some(MacroLabel::Orientation);
            }
            7 if n > 0 => {
                let i = rng.random_range(0..n);
                f.clauses[i].micro = Some(MicroLabel::Free);
            }
            8 if n > 2 => {
                let at = rng.random_range(1..n);
                f.spans.push(NarrativeSpan::new(NarrativeType::Hypothetical, at, at + 1));
                f.clauses[at - 1].micro = Some(MicroLabel::Narrative);
            }
            _ => {}
        }
    }
    f
}

// ---------------------------------------------------------------------------
// synthetic segmentation corpus

/// 16 fragments of 300..=800 atoms, each with a base segmentation and three
/// coders who jitter every base boundary by at most one position; each base
/// boundary is, with probability 0.1, dropped or moved somewhere random instead.
pub fn synthetic_corpus(seed: u64) -> (Vec<Segmentation>, Vec<FragmentSegmentations>) {
    let mut rng = rng(seed);
    let mut bases = Vec::new();
    let mut fragments = Vec::new();
    for f in 0..16 {
        let atoms = rng.random_range(300..=800);
        let mut base = Vec::new();
        let mut p = rng.random_range(8..=40);
        while p < atoms {
            base.push(p);
            p += rng.random_range(8..=40);
        }
        let coders: Vec<(String, Segmentation)> = (0..3)
            .map(|c| {
                let mut placed = BTreeSet::new();
                for &b in &base {
                    let pos = if rng.random_bool(0.1) {
                        if rng.random_bool(0.5) {
                            continue;
                        }
                        rng.random_range(1..atoms)
                    } else {
                        (b as i64 + rng.random_range(-1i64..=1)).clamp(1, atoms as i64 - 1) as usize
                    };
                    placed.insert(pos);
                }
                let v: Vec<usize> = placed.into_iter().collect();
                (format!("coder-{c}"), Segmentation::from_boundaries(&v, atoms).unwrap())
            })
            .collect();
        bases.push(Segmentation::from_boundaries(&base, atoms).unwrap());
        fragments.push(FragmentSegmentations::new(format!("syn-{f}"), coders));
    }
    (bases, fragments)
}

// ---------------------------------------------------------------------------
// gold corpus with known counts

struct Builder {
    clauses: Vec<Clause>,
    spans: Vec<NarrativeSpan>,
}

impl Builder {
    fn new() -> Self {
        Builder { clauses: Vec::new(), spans: Vec::new() }
    }

    fn ie(&mut self, n: usize) {
        for _ in 0..n {
            let id = self.clauses.len() + 1;
            self.clauses.push(Clause::interviewee(id, format!("clause {id}")));
        }
    }

    fn ir(&mut self) {
        let id = self.clauses.len() + 1;
        self.clauses.push(Clause::interviewer(id, format!("question {id}")));
    }

    fn span(&mut self, kind: NarrativeType, len: usize) {
        let start = self.clauses.len() + 1;
        self.ie(len);
        self.spans.push(NarrativeSpan::new(kind, start, start + len - 1));
    }
}

/// Expected values of [`stats_corpus`], counted while it is built.
pub struct StatsExpectation {
    pub macro_counts: BTreeMap<MacroLabel, usize>,
    pub micro_counts: BTreeMap<MicroLabel, usize>,
    pub total: usize,
    pub interviewee: usize,
    pub interviewer: usize,
    pub annotated: usize,
}

/// 16 fragments shaped like the published corpus: 965 clauses (847 interviewee),
/// 17 Story spans (16 of 15 clauses, one of 22), 16 Habitual spans (one of 11
/// nested in the long Story, 12 of 9, 3 of 10) and one 6-clause Hypothetical.
pub fn stats_corpus(seed: u64) -> (Vec<Fragment>, StatsExpectation) {
    let mut builders: Vec<Builder> = (0..16).map(|_| Builder::new()).collect();
    for (i, b) in builders.iter_mut().enumerate() {
        b.ir();
        b.ie(3);
        b.span(NarrativeType::Story, 15);
        b.ir();
        b.ie(2);
        if i > 0 {
            b.span(NarrativeType::Habitual, if i <= 12 { 9 } else { 10 });
            b.ie(1);
        }
    }
    // the long story with a nested habitual, and the hypothetical
    let b = &mut builders[0];
    let start = b.clauses.len() + 1;
    b.ie(22);
    b.spans.push(NarrativeSpan::new(NarrativeType::Story, start, start + 21));
    b.spans.push(NarrativeSpan::new(NarrativeType::Habitual, start + 5, start + 15));
    b.ir();
    b.span(NarrativeType::Hypothetical, 6);
    b.ie(1);

    // pad to the published clause totals
    let ir_now: usize = builders.iter().map(|b| b.clauses.iter().filter(|c| c.speaker == Speaker::Interviewer).count()).sum();
    let ie_now: usize = builders.iter().map(|b| b.clauses.len()).sum::<usize>() - ir_now;
    let (mut ir_left, mut ie_left) = (118 - ir_now, 847 - ie_now);
    let mut k = 0;
    while ir_left + ie_left > 0 {
        let b = &mut builders[k % 16];
        if ir_left > 0 {
            b.ir();
            ir_left -= 1;
        }
        let take = ie_left.min(3);
        b.ie(take);
        ie_left -= take;
        k += 1;
    }

    let mut rng = rng(seed);
    let mut micro: Vec<MicroLabel> = [(MicroLabel::Narrative, 193), (MicroLabel::Free, 139), (MicroLabel::Restricted, 68)]
        .iter()
        .flat_map(|&(l, n)| std::iter::repeat_n(l, n))
        .collect();
    let mut macros: Vec<Option<MacroLabel>> = [
        (MacroLabel::Abstract, 17),
        (MacroLabel::Orientation, 134),
        (MacroLabel::Complication, 172),
        (MacroLabel::Evaluation, 42),
        (MacroLabel::Resolution, 16),
        (MacroLabel::Coda, 18),
    ]
    .iter()
    .flat_map(|&(l, n)| std::iter::repeat_n(Some(l), n))
    .chain([None])
    .collect();
    micro.shuffle(&mut rng);
    macros.shuffle(&mut rng);

    let mut exp = StatsExpectation {
        macro_counts: BTreeMap::new(),
        micro_counts: BTreeMap::new(),
        total: 0,
        interviewee: 0,
        interviewer: 0,
        annotated: 0,
    };
    let mut fragments = Vec::new();
    for (i, b) in builders.into_iter().enumerate() {
        let mut f = Fragment::new(format!("interview-{:02}", i + 1), Topic::HappinessHardship, b.clauses, b.spans);
        for idx in 0..f.clauses.len() {
            let id = f.clauses[idx].id;
            exp.total += 1;
            if f.clauses[idx].speaker == Speaker::Interviewer {
                exp.interviewer += 1;
                continue;
            }
            exp.interviewee += 1;
            if f.spans_containing(id).next().is_none() {
                continue;
            }
            exp.annotated += 1;
            if f.is_hypothetical_only(id) {
                continue;
            }
            let m = micro.pop().expect("400 narrative clauses");
            let a = macros.pop().expect("400 narrative clauses");
            *exp.micro_counts.entry(m).or_default() += 1;
            if let Some(a) = a {
                *exp.macro_counts.entry(a).or_default() += 1;
            }
            f.clauses[idx].micro = Some(m);
            f.clauses[idx].macro_label = a;
        }
        fragments.push(f);
    }
    assert!(micro.is_empty() && macros.is_empty(), "every label was placed");
    (fragments, exp)
}
