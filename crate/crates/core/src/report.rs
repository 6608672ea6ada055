//! Plain-text tables for the reports. The JSON form is the serde serialization.

use std::fmt::Write;

use crate::adjudication::{Adjudication, GoldCorpusStats};
use crate::label::LabelAgreementReport;
use crate::lint::LintFinding;
use crate::model::{Label, MacroLabel, MicroLabel, NarrativeType};
use crate::seg::{BaselineReport, SegAgreementReport};

/// Left-aligned first column, right-aligned others, two spaces between.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, cell) in r.iter().enumerate().take(cols) {
            width[i] = width[i].max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            let pad = width[i] - c.chars().count();
            if i > 0 {
                s.push_str("  ");
            }
            if i == 0 {
                s.push_str(c);
                s.push_str(&" ".repeat(pad));
            } else {
                s.push_str(&" ".repeat(pad));
                s.push_str(c);
            }
        }
        s.trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    out.push_str(&width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.4}"))
}

pub fn seg_agreement(r: &SegAgreementReport) -> String {
    let rows: Vec<Vec<String>> = r
        .pairwise_b
        .iter()
        .map(|p| {
            vec![
                p.fragment_id.clone(),
                format!("{} / {}", p.coder_a, p.coder_b),
                format!("{:.4}", p.b),
                format!("{:.2}", p.bed),
                p.potential_positions.to_string(),
            ]
        })
        .collect();
    let mut out = table(&["fragment", "pair", "B", "BED", "positions"], &rows);
    let _ = writeln!(out);
    let _ = writeln!(out, "mean B             {:.4}", r.mean_b);
    let _ = writeln!(out, "chance agreement   {:.4}", r.chance_agreement);
    let _ = writeln!(out, "kappa_B            {}", opt(r.kappa_b));
    let _ = writeln!(out, "BED per 100        {:.2}", r.bed_per_100);
    let _ = writeln!(out, "n_t {}, atoms {:?}, BED mode {:?}", r.params.n_t, r.params.atom_basis, r.params.bed_mode);
    out
}

pub fn baseline(r: &BaselineReport) -> String {
    let mut out = String::new();
    let seeds = match (r.seeds.first(), r.seeds.last()) {
        (Some(a), Some(b)) => format!("{a}..{b} ({} runs)", r.seeds.len()),
        _ => "none".to_string(),
    };
    let _ = writeln!(out, "seeds              {seeds}");
    let dist = |d: Option<crate::seg::Distribution>, prec: usize| match d {
        Some(d) => format!("mean {:.prec$}  min {:.prec$}  max {:.prec$}", d.mean, d.min, d.max),
        None => "undefined".to_string(),
    };
    let _ = writeln!(out, "kappa_B            {}", dist(r.kappa_b, 4));
    let _ = writeln!(out, "undefined runs     {}", r.undefined_runs);
    let _ = writeln!(out, "BED per 100        {}", dist(r.bed_per_100, 2));
    let _ = writeln!(out, "n_t {}, atoms {:?}, BED mode {:?}", r.params.n_t, r.params.atom_basis, r.params.bed_mode);
    out
}

fn label_name(token: &str) -> String {
    MicroLabel::from_token(token)
        .map(|l| l.name())
        .or_else(|| MacroLabel::from_token(token).map(|l| l.name()))
        .unwrap_or(token)
        .to_string()
}

pub fn label_agreement(r: &LabelAgreementReport) -> String {
    let rows: Vec<Vec<String>> = r
        .label_counts
        .iter()
        .map(|(label, count)| {
            let em = r.exact_match.get(label);
            vec![
                label_name(label),
                count.to_string(),
                em.map_or("-".into(), |e| format!("{}/{}", e.matched, e.chosen)),
                em.map_or("-".into(), |e| format!("{:.2}", e.rate)),
            ]
        })
        .collect();
    let mut out = format!("{} agreement, coders {}\n\n", r.field, r.coders.join(", "));
    out.push_str(&table(&["label", "assigned", "matched/chosen", "exact match"], &rows));
    let _ = writeln!(out);
    match (&r.alpha, &r.alpha_undefined) {
        (Some(a), _) => {
            let _ = writeln!(out, "Krippendorff alpha (nominal)  {a:.4}");
        }
        (None, reason) => {
            let _ = writeln!(out, "Krippendorff alpha (nominal)  {}", reason.as_deref().unwrap_or("undefined"));
        }
    }
    let _ = writeln!(out, "pairable units                {} of {}", r.pairable_units, r.units);
    out
}

/// Macro counts, micro shares and span lengths, laid out like the published tables.
pub fn corpus_stats(s: &GoldCorpusStats) -> String {
    let mut out = String::new();
    let macro_rows: Vec<Vec<String>> =
        s.macro_counts.iter().map(|(l, c)| vec![l.name().to_string(), c.to_string()]).collect();
    out.push_str(&table(&["Macro label", "Clauses"], &macro_rows));
    out.push('\n');

    // order as usually reported: Narrative, Free, Restricted
    let order = [MicroLabel::Narrative, MicroLabel::Free, MicroLabel::Restricted];
    let micro_rows: Vec<Vec<String>> = order
        .iter()
        .map(|l| {
            let m = &s.micro_counts[l];
            vec![l.name().to_string(), m.count.to_string(), format!("{}%", m.percent_of_annotated), format!("{}%", m.percent)]
        })
        .collect();
    out.push_str(&table(&["Micro label", "Clauses", "% annotated", "% micro-labeled"], &micro_rows));
    let sum: u32 = s.micro_counts.values().map(|m| m.percent_of_annotated).sum();
    let _ = writeln!(out, "annotated clauses {}, micro-labeled {}, shares sum to {sum}%", s.annotated_clauses, s.micro_labeled);
    out.push('\n');

    let span_rows: Vec<Vec<String>> = NarrativeType::ALL
        .iter()
        .map(|k| {
            let st = s.span_stats.get(k).copied().unwrap_or_default();
            vec![k.name().to_string(), st.count.to_string(), st.mean_display()]
        })
        .collect();
    out.push_str(&table(&["Narrative type", "Spans", "Mean clauses"], &span_rows));
    out.push('\n');
    let t = s.clause_totals;
    let _ = writeln!(
        out,
        "{} fragments, {} clauses ({} interviewee, {} interviewer)",
        s.fragments, t.total, t.interviewee, t.interviewer
    );
    out
}

pub fn findings(f: &[LintFinding]) -> String {
    if f.is_empty() {
        return "no findings\n".to_string();
    }
    let mut out = String::new();
    for x in f {
        let _ = writeln!(out, "{x}");
    }
    out
}

pub fn adjudication(a: &Adjudication) -> String {
    let rows: Vec<Vec<String>> = a
        .outcomes
        .iter()
        .filter(|o| o.needs_discussion || o.votes.iter().any(|v| Some(v) != o.decided.as_ref()))
        .map(|o| {
            vec![
                o.clause.to_string(),
                o.field.to_string(),
                o.votes.join(" "),
                o.decided.clone().unwrap_or_else(|| "discuss".into()),
            ]
        })
        .collect();
    let pending = a.pending().count();
    let mut out = format!("{}: {} outcomes, {} awaiting discussion\n\n", a.fragment_id, a.outcomes.len(), pending);
    if rows.is_empty() {
        out.push_str("all votes unanimous\n");
    } else {
        out.push_str(&table(&["clause", "field", "votes", "decision"], &rows));
    }
    out
}
