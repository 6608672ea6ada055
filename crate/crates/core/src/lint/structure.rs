use super::LintFinding;
use crate::model::Fragment;

/// Schema errors, one per [`Fragment::violations`] entry, plus a warning for each
/// pair of overlapping spans of different types.
pub fn lint_structure(fragment: &Fragment) -> Vec<LintFinding> {
    let fid = fragment.fragment_id.as_str();
    let mut out: Vec<LintFinding> = fragment
        .violations()
        .into_iter()
        .map(|v| LintFinding::new(v.rule_id, fid, v.clause, v.message))
        .collect();

    let n = fragment.clauses.len();
    let spans: Vec<_> = fragment.spans.iter().filter(|s| s.start >= 1 && s.start <= s.end && s.end <= n).collect();
    for (i, a) in spans.iter().enumerate() {
        for b in &spans[i + 1..] {
            if a.kind != b.kind && a.overlaps(b) {
                out.push(LintFinding::new(
                    "span-cross-kind-overlap",
                    fid,
                    Some(a.start.max(b.start)),
                    format!("{} span {}..{} overlaps {} span {}..{}", a.kind, a.start, a.end, b.kind, b.start, b.end),
                ));
            }
        }
    }
    out
}
