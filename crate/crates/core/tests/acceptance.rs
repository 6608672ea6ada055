//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the test harness so the lines print under plain `cargo test`.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use labov_core::adjudication::{corpus_stats, majority_vote, Alignment, DecisionSource, VoteField, VoteOutcome};
use labov_core::format::{parse_lat, serialize_lat};
use labov_core::label::{confusion_counts, exact_match_rates, krippendorff_alpha_nominal, ExactMatchMode, LabelMatrix};
use labov_core::lint::{lint_fragment, lint_structure, LintConfig, Severity, RULES};
use labov_core::model::{AnnotatorLayer, Clause, Fragment, MacroLabel, MicroLabel, NarrativeSpan, NarrativeType, Speaker, Topic};
use labov_core::report;
use labov_core::seg::{
    boundary_edit_distance, boundary_similarity, fleiss_kappa_b, random_baseline_experiment, BaselineFragment, BedMode,
    FragmentSegmentations, Segmentation,
};
use labov_core::wizard::{decide_micro, next_question, ChartAnswer, PartialAnswers, Step};
use labov_core::MetricError;
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bed_oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let mut pairs = 0usize;
    for n in 1..=8 {
        let comps = common::compositions(n);
        for a in &comps {
            let sa = Segmentation::from_masses(a.clone()).unwrap();
            for b in &comps {
                let sb = Segmentation::from_masses(b.clone()).unwrap();
                for n_t in 2..=4 {
                    let want = common::bed_oracle(a, b, n_t);
                    let got = boundary_edit_distance(&sa, &sb, n_t).unwrap();
                    let got_span: usize = got.transpositions.iter().map(|t| t.offset.unsigned_abs()).sum();
                    let same = got.matches == want.matches
                        && got.additions == want.additions
                        && got.transpositions.len() == want.transpositions
                        && got_span == want.offset_sum;
                    ensure(same, || format!("{a:?} vs {b:?}, n_t {n_t}: got {got:?}, oracle {want:?}"))?;
                    let b_got = boundary_similarity(&sa, &sb, n_t).unwrap();
                    ensure(b_got == want.similarity(n_t) && got.similarity() == b_got, || {
                        format!("{a:?} vs {b:?}, n_t {n_t}: B {b_got} vs oracle {}", want.similarity(n_t))
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.2} s"))?;
    Ok(format!("{pairs} (pair, n_t) cases up to 8 atoms in {secs:.2} s"))
}

fn random_segmentation(rng: &mut impl Rng, atoms: usize) -> Segmentation {
    let density: f64 = rng.random_range(0.0..0.6);
    let b: Vec<usize> = (1..atoms).filter(|_| rng.random_bool(density)).collect();
    Segmentation::from_boundaries(&b, atoms).unwrap()
}

fn metric_properties() -> Outcome {
    let mut rng = common::rng(0xbed);
    for i in 0..10_000 {
        let atoms = rng.random_range(1..=300);
        let n_t = rng.random_range(2..=5);
        let a = random_segmentation(&mut rng, atoms);
        let b = random_segmentation(&mut rng, atoms);
        let ab = boundary_similarity(&a, &b, n_t).unwrap();
        let ba = boundary_similarity(&b, &a, n_t).unwrap();
        let aa = boundary_similarity(&a, &a, n_t).unwrap();
        ensure(ab == ba, || format!("pair {i}: B(a,b) {ab} != B(b,a) {ba}"))?;
        ensure(aa == 1.0, || format!("pair {i}: B(a,a) = {aa}"))?;
        ensure((0.0..=1.0).contains(&ab), || format!("pair {i}: B = {ab}"))?;
    }
    Ok("10000 pairs, 0 failures".into())
}

fn kappa_replication() -> Outcome {
    let mut worst_margin = f64::INFINITY;
    let mut human_min = f64::INFINITY;
    let mut random_max = f64::NEG_INFINITY;
    for seed in 0..100u64 {
        let (bases, humans) = common::synthetic_corpus(seed);
        let human = fleiss_kappa_b(&humans, 2, BedMode::Pooled).map_err(|e| e.to_string())?;
        let human_k = human.kappa_b.ok_or_else(|| format!("seed {seed}: human kappa undefined"))?;
        let corpus: Vec<BaselineFragment> = humans.iter().map(BaselineFragment::from_human).collect();
        let base = random_baseline_experiment(&corpus, &[1000 + seed], 2, BedMode::Pooled).map_err(|e| e.to_string())?;
        let random_k = base.runs[0].kappa_b.ok_or_else(|| format!("seed {seed}: random kappa undefined"))?;
        ensure(human_k > random_k, || format!("seed {seed}: humans {human_k:.4} <= random {random_k:.4}"))?;
        worst_margin = worst_margin.min(human_k - random_k);
        human_min = human_min.min(human_k);
        random_max = random_max.max(random_k);

        if seed == 0 {
            let identical: Vec<FragmentSegmentations> = bases
                .iter()
                .enumerate()
                .map(|(i, s)| FragmentSegmentations::new(format!("syn-{i}"), (0..3).map(|c| (format!("c{c}"), s.clone()))))
                .collect();
            let k = fleiss_kappa_b(&identical, 2, BedMode::Pooled).unwrap().kappa_b.unwrap();
            ensure((k - 1.0).abs() <= 1e-12, || format!("identical layers give kappa {k}"))?;
        }
    }
    Ok(format!(
        "100/100 seeds; humans >= {human_min:.3}, random <= {random_max:.3}, smallest gap {worst_margin:.3}; identical layers 1 within 1e-12"
    ))
}

fn alpha_oracle() -> Outcome {
    let mut rng = common::rng(0xa1fa);
    let (mut defined, mut undefined) = (0, 0);
    let mut max_err: f64 = 0.0;
    for i in 0..1000 {
        let rows = common::random_matrix(&mut rng);
        let coders = rows[0].len();
        let m = LabelMatrix::from_rows(coders, &rows).unwrap();
        match (krippendorff_alpha_nominal(&m), common::alpha_oracle(&rows)) {
            (Ok(a), Some(o)) => {
                max_err = max_err.max((a - o).abs());
                ensure((a - o).abs() <= 1e-12, || format!("matrix {i}: alpha {a} vs oracle {o}"))?;
                defined += 1;
            }
            (Err(MetricError::NoVariation | MetricError::NoPairableUnits), None) => undefined += 1,
            (got, want) => return Err(format!("matrix {i}: implementation {got:?}, oracle {want:?}")),
        }
    }
    let perfect = LabelMatrix::from_rows(3, &[vec![Some("N"); 3], vec![Some("F"); 3], vec![Some("R"), Some("R"), None]]).unwrap();
    let a = krippendorff_alpha_nominal(&perfect).unwrap();
    ensure(a == 1.0, || format!("perfect agreement gives {a}"))?;
    let flat = LabelMatrix::from_rows(2, &[vec![Some("N"); 2], vec![Some("N"); 2]]).unwrap();
    let err = krippendorff_alpha_nominal(&flat).unwrap_err();
    ensure(err == MetricError::NoVariation && err.to_string() == "alpha undefined: no variation", || format!("flat matrix: {err}"))?;
    Ok(format!("{defined} defined and {undefined} undefined matrices agree, max error {max_err:.1e}; perfect = 1; no variation raised"))
}

fn exact_match_fixtures() -> Outcome {
    let rates = |rows: &[Vec<Option<&str>>]| {
        let m = LabelMatrix::from_rows(rows[0].len(), rows).unwrap();
        exact_match_rates(&m, ExactMatchMode::AnyChose)
            .into_iter()
            .map(|(k, v)| (k, (v.matched, v.chosen, v.rate)))
            .collect::<BTreeMap<_, _>>()
    };
    let single = rates(&[vec![Some("N"), Some("N"), Some("N")]]);
    ensure(single == BTreeMap::from([("N".to_string(), (1, 1, 1.0))]), || format!("(N,N,N): {single:?}"))?;
    let two = rates(&[vec![Some("N"), Some("N"), Some("F")], vec![Some("N"), Some("N"), Some("N")]]);
    let want = BTreeMap::from([("F".to_string(), (0, 1, 0.0)), ("N".to_string(), (1, 2, 0.5))]);
    ensure(two == want, || format!("(N,N,F),(N,N,N): {two:?}"))?;

    let m = LabelMatrix::from_rows(3, &[vec![Some("Res"), Some("Cod"), Some("Cod")]]).unwrap();
    let conf = confusion_counts(&m);
    let want = BTreeMap::from([(("Cod".to_string(), "Cod".to_string()), 1), (("Cod".to_string(), "Res".to_string()), 2)]);
    ensure(conf == want, || format!("(Res,Cod,Cod) confusion: {conf:?}"))?;

    let rows = [
        vec![Some("N".to_string()), Some("N".to_string())],
        vec![Some("N".to_string()), Some("F".to_string())],
        vec![Some("F".to_string()), Some("F".to_string())],
        vec![Some("R".to_string()), Some("R".to_string())],
    ];
    let a = krippendorff_alpha_nominal(&LabelMatrix::from_rows(2, &rows).unwrap()).unwrap();
    let o = common::alpha_oracle(&rows).unwrap();
    ensure((a - o).abs() <= 1e-12, || format!("worked alpha {a} vs oracle {o}"))?;
    Ok(format!("{{N:1}}; {{N:1/2, F:0/1}}; confusion (Res,Cod,Cod); worked alpha {a:.6}"))
}

fn format_round_trip() -> Outcome {
    let t1 = common::CARER_EXAMPLE.as_bytes();
    let parsed = parse_lat(t1).map_err(|e| e.to_string())?;
    ensure(serialize_lat(&parsed).unwrap() == t1, || "carer example fixture is not reproduced byte for byte".into())?;
    ensure(parsed.clauses.len() == 10 && parsed.spans == vec![NarrativeSpan::new(NarrativeType::Story, 1, 10)], || {
        "carer example fixture parsed to the wrong shape".into()
    })?;
    let mut rng = common::rng(0x1a7);
    for i in 0..500 {
        let f = common::random_fragment(&mut rng, i);
        let bytes = serialize_lat(&f).map_err(|e| format!("fragment {i}: {e}"))?;
        let back = parse_lat(&bytes).map_err(|e| format!("fragment {i}: {e}"))?;
        ensure(back == f, || format!("fragment {i} changed in the round trip"))?;
        ensure(serialize_lat(&back).unwrap() == bytes, || format!("fragment {i} bytes differ"))?;
    }
    Ok("carer example byte-exact; 500 generated fragments".into())
}

fn carer_example_with(edit: impl FnOnce(&mut Fragment)) -> Fragment {
    let mut f = common::carer_example();
    edit(&mut f);
    f
}

fn ie_fragment(texts: &[&str]) -> Fragment {
    let clauses = texts.iter().enumerate().map(|(i, t)| Clause::interviewee(i + 1, *t)).collect();
    Fragment::new("cues", Topic::Other, clauses, Vec::new())
}

/// (rule, fixture that fires it, near miss that does not)
fn lint_fixtures() -> Vec<(&'static str, Fragment, Fragment)> {
    use MacroLabel::*;
    use NarrativeType::*;
    let hypothetical = |micro: Option<MicroLabel>| {
        carer_example_with(|f| {
            f.clauses.push(Clause::interviewee(11, "If I could, I would go again"));
            f.clauses.push(Clause::interviewee(12, "and stay a week").with_labels(micro, None));
            f.spans.push(NarrativeSpan::new(Hypothetical, 11, 12));
        })
    };
    vec![
        ("clause-ids", carer_example_with(|f| f.clauses[3].id = 7), common::carer_example()),
        ("clause-empty-text", carer_example_with(|f| f.clauses[0].text = " ".into()), common::carer_example()),
        (
            "span-bounds",
            carer_example_with(|f| f.spans.push(NarrativeSpan::new(Habitual, 9, 12))),
            carer_example_with(|f| f.spans.push(NarrativeSpan::new(Habitual, 9, 10))),
        ),
        (
            "span-min-length",
            carer_example_with(|f| f.spans.push(NarrativeSpan::new(Habitual, 3, 3))),
            carer_example_with(|f| f.spans.push(NarrativeSpan::new(Habitual, 3, 4))),
        ),
        (
            "span-same-kind-overlap",
            carer_example_with(|f| f.spans.push(NarrativeSpan::new(Story, 5, 7))),
            carer_example_with(|f| f.spans.push(NarrativeSpan::new(Habitual, 5, 7))),
        ),
        (
            "span-interviewer",
            carer_example_with(|f| f.clauses.insert(5, Clause::interviewer(6, "Was it cold?"))).renumbered(),
            carer_example_with(|f| f.clauses.push(Clause::interviewer(11, "Was it cold?"))),
        ),
        (
            "interviewer-labeled",
            carer_example_with(|f| f.clauses.push(Clause::interviewer(11, "Really?").with_labels(None, Some(Evaluation)))),
            carer_example_with(|f| f.clauses.push(Clause::interviewer(11, "Really?"))),
        ),
        (
            "label-outside-span",
            carer_example_with(|f| f.spans[0].end = 9),
            carer_example_with(|f| {
                f.spans[0].end = 9;
                f.clauses[9].micro = None;
                f.clauses[9].macro_label = None;
            }),
        ),
        ("hypothetical-no-micro", hypothetical(Some(MicroLabel::Free)), hypothetical(None)),
        (
            "span-cross-kind-overlap",
            carer_example_with(|f| f.spans.push(NarrativeSpan::new(Habitual, 3, 5))),
            carer_example_with(|f| {
                f.clauses.push(Clause::interviewee(11, "Every weekend I walk"));
                f.clauses.push(Clause::interviewee(12, "by the river"));
                f.spans.push(NarrativeSpan::new(Habitual, 11, 12));
            }),
        ),
        (
            "formal-noun-topic-split",
            ie_fragment(&["watashi ga hajimete tokyo ni kita toki wa ichiban shiawase datta"]),
            ie_fragment(&["watashi ga hajimete tokyo ni kita toki wa", "ichiban shiawase datta"]),
        ),
        (
            "formal-noun-subject-merge",
            ie_fragment(&["tokyo ni kita toki ga", "ichiban shiawase deshita"]),
            ie_fragment(&["tokyo ni kita toki ga ichiban shiawase deshita"]),
        ),
        (
            "unquoted-speech-merge",
            ie_fragment(&["「もう秋か。", "もう十月だ」 そう思った"]),
            ie_fragment(&["「もう秋か。", "もう十月だ」と思った"]),
        ),
        (
            "abstract-position",
            carer_example_with(|f| f.clauses[4].macro_label = Some(Abstract)),
            carer_example_with(|f| f.clauses[2].macro_label = Some(Abstract)),
        ),
        (
            "coda-position",
            carer_example_with(|f| f.clauses[1].macro_label = Some(Coda)),
            carer_example_with(|f| f.clauses[8].macro_label = Some(Coda)),
        ),
        ("complication-micro-mismatch", carer_example_with(|f| f.clauses[2].micro = Some(MicroLabel::Free)), common::carer_example()),
        ("resolution-micro-mismatch", carer_example_with(|f| f.clauses[7].micro = Some(MicroLabel::Restricted)), common::carer_example()),
        (
            "span-no-complication",
            carer_example_with(|f| {
                for c in &mut f.clauses {
                    if c.macro_label == Some(Complication) {
                        c.macro_label = Some(Orientation);
                    }
                }
            }),
            common::carer_example(),
        ),
        (
            "possible-onset",
            carer_example_with(|f| f.clauses.push(Clause::interviewee(11, "A, sou da, kyonen no natsu"))),
            carer_example_with(|f| f.clauses.push(Clause::interviewee(11, "kyonen no natsu"))),
        ),
    ]
}

trait Renumber {
    fn renumbered(self) -> Self;
}

impl Renumber for Fragment {
    fn renumbered(mut self) -> Self {
        for (i, c) in self.clauses.iter_mut().enumerate() {
            c.id = i + 1;
        }
        for c in &mut self.clauses {
            if c.speaker == Speaker::Interviewer {
                c.micro = None;
                c.macro_label = None;
            }
        }
        self.spans[0].end = self.clauses.len();
        self
    }
}

fn lint_suite() -> Outcome {
    let config = LintConfig::default();
    let fixtures = lint_fixtures();
    for rule in RULES {
        let (_, fires, quiet) = fixtures
            .iter()
            .find(|(id, _, _)| *id == rule.id)
            .ok_or_else(|| format!("rule {} has no fixture", rule.id))?;
        let hit = |f: &Fragment| lint_fragment(f, &config).iter().any(|x| x.rule_id == rule.id);
        ensure(hit(fires), || format!("{} did not fire on its fixture", rule.id))?;
        ensure(!hit(quiet), || format!("{} fired on its near miss: {:?}", rule.id, lint_fragment(quiet, &config)))?;
    }
    ensure(fixtures.len() == RULES.len(), || "fixture for an unregistered rule".into())?;

    let mut rng = common::rng(0x11e7);
    let mut rejected = 0;
    for i in 0..500 {
        let f = common::damaged_fragment(&mut rng, i);
        let mut lint_errors: Vec<String> =
            lint_structure(&f).into_iter().filter(|x| x.severity == Severity::Error).map(|x| x.rule_id).collect();
        let mut violations: Vec<String> = f.violations().into_iter().map(|v| v.rule_id.to_string()).collect();
        lint_errors.sort();
        violations.sort();
        ensure(lint_errors == violations, || format!("fragment {i}: lint {lint_errors:?}, validation {violations:?}"))?;
        ensure(lint_errors.is_empty() == f.validate().is_ok(), || format!("fragment {i}: verdicts differ"))?;
        rejected += usize::from(f.validate().is_err());
    }
    Ok(format!("{} rules fire and stay quiet on their fixtures; 500 fragments ({rejected} invalid), 0 divergences", RULES.len()))
}

fn wizard_consistency() -> Outcome {
    let t1 = common::carer_example();
    for c in &t1.clauses {
        let want = c.micro.ok_or("carer example clause without a micro label")?;
        let found = ChartAnswer::all().find(|a| decide_micro(a) == Some(want));
        ensure(found.is_some(), || format!("no answers give {want:?} for clause {}", c.id))?;
    }
    // every partial answer vector is either asked about or decided, within three questions
    let opts = [None, Some(false), Some(true)];
    let mut decided = 0;
    for h in opts {
        for e in opts {
            for p in opts {
                let answers = PartialAnswers { in_hypothetical_only: h, reports_event_or_discovery: e, holds_entire_period: p };
                match next_question(&answers) {
                    Step::Question { number, .. } => ensure(number <= 3, || format!("question number {number}"))?,
                    Step::Decided { path, .. } => {
                        ensure(path.len() <= 3, || format!("path {path:?}"))?;
                        decided += 1;
                    }
                }
            }
        }
    }
    for a in ChartAnswer::all() {
        ensure(matches!(next_question(&a.into()), Step::Decided { .. }), || format!("{a:?} is not decided"))?;
    }
    Ok(format!("10/10 carer example labels reachable; 8/8 complete answers decided; {decided}/27 partial vectors decided, rest asked"))
}

fn random_layers(rng: &mut impl Rng, case: usize) -> Vec<AnnotatorLayer> {
    let clauses = rng.random_range(2..=12);
    let seg = Segmentation::from_masses(vec![3; clauses]).unwrap();
    let coders = rng.random_range(2..=5);
    (0..coders)
        .map(|c| {
            let mut l = AnnotatorLayer::new(format!("a{c}"), format!("case-{case}"), seg.clone());
            for id in 1..=clauses {
                if rng.random_bool(0.8) {
                    l.micro.insert(id, [MicroLabel::Narrative, MicroLabel::Free, MicroLabel::Restricted][rng.random_range(0..3)]);
                }
                if rng.random_bool(0.6) {
                    l.macro_labels.insert(id, [MacroLabel::Complication, MacroLabel::Orientation, MacroLabel::Coda][rng.random_range(0..3)]);
                }
            }
            for kind in NarrativeType::ALL {
                if rng.random_bool(0.5) {
                    let start = rng.random_range(1..clauses);
                    let end = rng.random_range(start + 1..=clauses);
                    l.spans.push(NarrativeSpan::new(kind, start, end));
                }
            }
            l
        })
        .collect()
}

fn votes(layers: &[AnnotatorLayer]) -> Vec<VoteOutcome> {
    let al = Alignment::new(layers, None).unwrap();
    VoteField::ALL.iter().flat_map(|&f| majority_vote(&al, f)).collect()
}

fn adjudication_votes() -> Outcome {
    let mut rng = common::rng(0xad1);
    for case in 0..1000 {
        let layers = random_layers(&mut rng, case);
        let want = votes(&layers);
        let mut shuffled = layers.clone();
        shuffled.shuffle(&mut rng);
        ensure(votes(&shuffled) == want, || format!("case {case}: outcome changed under permutation"))?;
    }

    let seg = Segmentation::from_masses(vec![4]).unwrap();
    let vote = |labels: [MicroLabel; 3]| {
        let layers: Vec<AnnotatorLayer> = labels
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let mut l = AnnotatorLayer::new(format!("a{i}"), "f", seg.clone());
                l.micro.insert(1, m);
                l
            })
            .collect();
        majority_vote(&Alignment::new(&layers, None).unwrap(), VoteField::Micro).remove(0)
    };
    use MicroLabel::*;
    let nnf = vote([Narrative, Narrative, Free]);
    ensure(nnf.decided.as_deref() == Some("N") && !nnf.needs_discussion && nnf.source == Some(DecisionSource::Majority), || {
        format!("(N,N,F) gave {nnf:?}")
    })?;
    let nfr = vote([Narrative, Free, Restricted]);
    ensure(nfr.decided.is_none() && nfr.needs_discussion, || format!("(N,F,R) gave {nfr:?}"))?;
    Ok("1000 permuted cases identical; (N,N,F) -> N; (N,F,R) -> discussion".into())
}

fn stats_fixture() -> Outcome {
    let (gold, exp) = common::stats_corpus(7);
    for f in &gold {
        f.validate().map_err(|e| format!("{}: {e}", f.fragment_id))?;
    }
    let s = corpus_stats(&gold);
    let t = s.clause_totals;
    ensure((t.total, t.interviewee, t.interviewer) == (exp.total, exp.interviewee, exp.interviewer), || format!("totals {t:?}"))?;
    ensure((t.total, t.interviewee, t.interviewer) == (965, 847, 118), || format!("totals {t:?}"))?;
    for (l, n) in &s.macro_counts {
        ensure(exp.macro_counts.get(l).copied().unwrap_or(0) == *n, || format!("{l:?}: {n}"))?;
    }
    let expected_macro = [17, 134, 172, 42, 16, 18];
    let macro_got: Vec<usize> = [MacroLabel::Abstract, MacroLabel::Orientation, MacroLabel::Complication, MacroLabel::Evaluation, MacroLabel::Resolution, MacroLabel::Coda]
        .iter()
        .map(|l| s.macro_counts[l])
        .collect();
    ensure(macro_got == expected_macro, || format!("macro counts {macro_got:?}"))?;
    let micro = |l: MicroLabel| s.micro_counts[&l];
    let (n, f, r) = (micro(MicroLabel::Narrative), micro(MicroLabel::Free), micro(MicroLabel::Restricted));
    for (l, share) in &s.micro_counts {
        ensure(exp.micro_counts[l] == share.count, || format!("{l:?}: {}", share.count))?;
    }
    ensure((n.count, f.count, r.count) == (193, 139, 68), || format!("micro counts {:?}", (n.count, f.count, r.count)))?;
    let shares = (n.percent_of_annotated, f.percent_of_annotated, r.percent_of_annotated);
    ensure(shares == (48, 34, 17), || format!("shares of annotated clauses {shares:?}"))?;
    ensure(s.annotated_clauses == exp.annotated && s.annotated_clauses == 406, || format!("annotated {}", s.annotated_clauses))?;
    let spans: Vec<(usize, String)> =
        NarrativeType::ALL.iter().map(|k| (s.span_stats[k].count, s.span_stats[k].mean_display())).collect();
    let want_spans = vec![(17, "15.41".to_string()), (16, "9.31".to_string()), (1, "6.00".to_string())];
    ensure(spans == want_spans, || format!("span table {spans:?}"))?;

    let text = report::corpus_stats(&s);
    for needle in ["Complication", "172", "Narrative", "48%", "34%", "17%", "shares sum to 99%", "15.41", "9.31", "965 clauses (847 interviewee, 118 interviewer)"] {
        ensure(text.contains(needle), || format!("report lacks {needle:?}:\n{text}"))?;
    }
    Ok("965/847/118 clauses, macro 17/134/172/42/16/18, micro 193/139/68 -> 48/34/17 (sum 99), spans 17x15.41 16x9.31 1x6.00".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("BED/B oracle equivalence", bed_oracle_equivalence),
        ("metric properties", metric_properties),
        ("kappa_B sanity replication", kappa_replication),
        ("Krippendorff alpha", alpha_oracle),
        ("exact-match rates", exact_match_fixtures),
        ("format round trip", format_round_trip),
        ("lint suite", lint_suite),
        ("wizard and the carer example", wizard_consistency),
        ("adjudication", adjudication_votes),
        ("stats", stats_fixture),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS  {:>2}  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
