use super::LintFinding;
use crate::model::{Fragment, MacroLabel, MicroLabel, NarrativeSpan, Speaker};

fn in_range(f: &Fragment, s: &NarrativeSpan) -> bool {
    s.start >= 1 && s.start <= s.end && s.end <= f.clauses.len()
}

/// Informational macro-structure hints. These are tendencies, not rules.
///
/// An Abstract is expected in the first quarter of its span and a Coda in the last
/// quarter (a clause in several spans is flagged only if it is misplaced in all of
/// them); Complication and Resolution clauses are expected to be Narrative at the
/// micro level; a span with macro labels is expected to contain a Complication.
pub fn lint_macro_shape(fragment: &Fragment) -> Vec<LintFinding> {
    let fid = fragment.fragment_id.as_str();
    let spans: Vec<&NarrativeSpan> = fragment.spans.iter().filter(|s| in_range(fragment, s)).collect();
    let mut out = Vec::new();

    for c in &fragment.clauses {
        let Some(label) = c.macro_label else { continue };
        let holding: Vec<&&NarrativeSpan> = spans.iter().filter(|s| s.contains(c.id)).collect();
        match label {
            MacroLabel::Abstract if !holding.is_empty() => {
                // offset within the first quarter: 4 * offset < len
                if holding.iter().all(|s| 4 * (c.id - s.start) >= s.len()) {
                    out.push(LintFinding::new(
                        "abstract-position",
                        fid,
                        Some(c.id),
                        format!("Abstract at clause {} is not in the first quarter of its span", c.id),
                    ));
                }
            }
            MacroLabel::Coda if !holding.is_empty() && holding.iter().all(|s| 4 * (c.id - s.start + 1) <= 3 * s.len()) => {
                out.push(LintFinding::new(
                    "coda-position",
                    fid,
                    Some(c.id),
                    format!("Coda at clause {} is not in the last quarter of its span", c.id),
                ));
            }
            _ => {}
        }
        let rule = match label {
            MacroLabel::Complication => "complication-micro-mismatch",
            MacroLabel::Resolution => "resolution-micro-mismatch",
            _ => continue,
        };
        if let Some(m) = c.micro.filter(|m| *m != MicroLabel::Narrative) {
            out.push(LintFinding::new(
                rule,
                fid,
                Some(c.id),
                format!("{label:?} clause {} is micro-labeled {m:?}; such clauses are usually Narrative", c.id),
            ));
        }
    }

    for s in &spans {
        let labels: Vec<MacroLabel> =
            fragment.clauses.iter().filter(|c| s.contains(c.id)).filter_map(|c| c.macro_label).collect();
        if !labels.is_empty() && !labels.contains(&MacroLabel::Complication) {
            out.push(LintFinding::new(
                "span-no-complication",
                fid,
                Some(s.start),
                format!("{} span {}..{} has macro labels but no Complication", s.kind, s.start, s.end),
            ));
        }
    }
    out
}

/// Info markers on interviewee clauses outside every span that contain an onset
/// discourse marker. Matching is case-insensitive literal substring.
pub fn hint_span_onsets(fragment: &Fragment, markers: &[String]) -> Vec<LintFinding> {
    let markers: Vec<String> = markers.iter().filter(|m| !m.is_empty()).map(|m| m.to_lowercase()).collect();
    let mut out = Vec::new();
    for c in &fragment.clauses {
        if c.speaker == Speaker::Interviewer || fragment.spans_containing(c.id).next().is_some() {
            continue;
        }
        let text = c.text.to_lowercase();
        if let Some(m) = markers.iter().find(|m| text.contains(m.as_str())) {
            out.push(LintFinding::new(
                "possible-onset",
                &fragment.fragment_id,
                Some(c.id),
                format!("clause {} contains onset marker {m:?}; a narrative may start here", c.id),
            ));
        }
    }
    out
}
