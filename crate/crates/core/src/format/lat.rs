//! The `.lat.tsv` table: one row per clause with a span lane per narrative type.
//!
//! ```text
//! # fragment_id: carer-07-a
//! # topic: HappinessHardship
//! idx	speaker	text	story	habitual	hypothetical	micro	macro
//! 1	IE	When I finally have time for myself, ...	S			F	Abs
//! ```
//!
//! Metadata lines are optional and only written when they differ from the defaults
//! (empty id, topic `Other`), so an empty default fragment is a header-only file.

#![allow(clippy::tabs_in_doc_comments)]

use std::collections::HashSet;

use super::normalize_text;
use crate::error::FormatError;
use crate::model::{Clause, ClauseId, Fragment, Label, MacroLabel, MicroLabel, NarrativeSpan, NarrativeType, Speaker, Topic};

pub const LAT_HEADER: &str = "idx\tspeaker\ttext\tstory\thabitual\thypothetical\tmicro\tmacro";
const COLUMNS: usize = 8;

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

#[derive(Clone, Copy)]
enum Mark {
    Start,
    End,
    Both,
}

fn parse_mark(token: &str) -> Option<Option<Mark>> {
    match token {
        "" => Some(None),
        "S" => Some(Some(Mark::Start)),
        "E" => Some(Some(Mark::End)),
        "SE" => Some(Some(Mark::Both)),
        _ => None,
    }
}

/// Parses a `.lat.tsv` document.
///
/// Spans are rebuilt from the S/E lanes and returned sorted by start, then kind. A
/// one-row `SE` span is accepted here and left for validation to reject.
pub fn parse_lat(input: &[u8]) -> Result<Fragment, FormatError> {
    let text = std::str::from_utf8(input).map_err(|e| {
        let line = input[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        err(line, "input is not valid UTF-8")
    })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);

    let mut fragment = Fragment::new("", Topic::Other, Vec::new(), Vec::new());
    let mut header_seen = false;
    let mut seen_ids = HashSet::new();
    let mut open: [Option<(ClauseId, usize)>; 3] = [None; 3];

    for (i, raw) in text.split('\n').enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if !header_seen {
            if line.trim().is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let (key, value) = meta
                    .split_once(':')
                    .ok_or_else(|| err(line_no, "metadata line must look like `# key: value`"))?;
                match key.trim() {
                    "fragment_id" => fragment.fragment_id = value.trim().to_string(),
                    "topic" => {
                        fragment.topic = value.trim().parse().map_err(|e: crate::error::ModelError| err(line_no, e.to_string()))?
                    }
                    other => return Err(err(line_no, format!("unknown metadata key {other:?}"))),
                }
                continue;
            }
            if line != LAT_HEADER {
                return Err(err(line_no, format!("expected header row {LAT_HEADER:?}")));
            }
            header_seen = true;
            continue;
        }
        if line.is_empty() {
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != COLUMNS {
            return Err(err(line_no, format!("expected {COLUMNS} tab-separated columns, found {}", cols.len())));
        }
        let id: ClauseId = cols[0]
            .trim()
            .parse()
            .map_err(|_| err(line_no, format!("clause index {:?} is not a positive integer", cols[0])))?;
        if !seen_ids.insert(id) {
            return Err(err(line_no, format!("duplicate clause index {id}")));
        }
        let speaker: Speaker = cols[1].trim().parse().map_err(|e: crate::error::ModelError| err(line_no, e.to_string()))?;
        let micro = match cols[6].trim() {
            "" => None,
            t => Some(MicroLabel::from_token(t).ok_or_else(|| err(line_no, format!("unknown micro label {t:?}")))?),
        };
        let macro_label = match cols[7].trim() {
            "" => None,
            t => Some(MacroLabel::from_token(t).ok_or_else(|| err(line_no, format!("unknown macro label {t:?}")))?),
        };

        for (lane, kind) in NarrativeType::ALL.iter().enumerate() {
            let token = cols[3 + lane].trim();
            let mark = parse_mark(token)
                .ok_or_else(|| err(line_no, format!("unknown {kind} span marker {token:?}")))?;
            match (mark, open[lane]) {
                (None, _) => {}
                (Some(Mark::Start), None) => open[lane] = Some((id, line_no)),
                (Some(Mark::Both), None) => fragment.spans.push(NarrativeSpan::new(*kind, id, id)),
                (Some(Mark::End), Some((start, _))) => {
                    fragment.spans.push(NarrativeSpan::new(*kind, start, id));
                    open[lane] = None;
                }
                (Some(Mark::End), None) => {
                    return Err(err(line_no, format!("{kind} span closed at clause {id} was never opened")))
                }
                (Some(_), Some((start, _))) => {
                    return Err(err(
                        line_no,
                        format!("{kind} span opened at clause {start} is reopened at clause {id} before it ends"),
                    ))
                }
            }
        }

        fragment.clauses.push(Clause { id, speaker, text: normalize_text(cols[2]), micro, macro_label });
    }

    if !header_seen {
        return Err(err(1, format!("missing header row {LAT_HEADER:?}")));
    }
    for (lane, kind) in NarrativeType::ALL.iter().enumerate() {
        if let Some((start, line)) = open[lane] {
            return Err(err(line, format!("unterminated {kind} span opened at clause {start}")));
        }
    }
    fragment.spans.sort_by_key(|s| (s.start, s.kind, s.end));
    Ok(fragment)
}

/// Writes the canonical table. Fails only for fragments the lanes cannot express
/// (same-kind overlap, spans outside the clause list, duplicate ids, unnormalized text).
pub fn serialize_lat(fragment: &Fragment) -> Result<Vec<u8>, FormatError> {
    let mut ids = HashSet::new();
    for c in &fragment.clauses {
        if !ids.insert(c.id) {
            return Err(FormatError::Unrepresentable(format!("duplicate clause id {}", c.id)));
        }
        if c.text != normalize_text(&c.text) {
            return Err(FormatError::Unrepresentable(format!("clause {} text is not normalized", c.id)));
        }
    }

    // lanes[row][kind]
    let mut lanes = vec![[""; 3]; fragment.clauses.len()];
    let row_of = |id: ClauseId| fragment.clauses.iter().position(|c| c.id == id);
    for span in &fragment.spans {
        let (Some(start), Some(end)) = (row_of(span.start), row_of(span.end)) else {
            return Err(FormatError::Unrepresentable(format!(
                "{} span {}..{} refers to a missing clause",
                span.kind, span.start, span.end
            )));
        };
        if start > end {
            return Err(FormatError::Unrepresentable(format!("{} span {}..{} is inverted", span.kind, span.start, span.end)));
        }
        let lane = span.kind as usize;
        if lanes[start..=end].iter().any(|row| !row[lane].is_empty())
            || fragment.spans.iter().any(|o| o != span && o.kind == span.kind && o.overlaps(span))
        {
            return Err(FormatError::Unrepresentable(format!(
                "overlapping {} spans cannot share one lane",
                span.kind
            )));
        }
        if start == end {
            lanes[start][lane] = "SE";
        } else {
            lanes[start][lane] = "S";
            lanes[end][lane] = "E";
        }
    }

    let mut out = String::new();
    if !fragment.fragment_id.is_empty() {
        out.push_str(&format!("# fragment_id: {}\n", fragment.fragment_id));
    }
    if fragment.topic != Topic::Other {
        out.push_str(&format!("# topic: {}\n", fragment.topic.name()));
    }
    out.push_str(LAT_HEADER);
    out.push('\n');
    for (c, lane) in fragment.clauses.iter().zip(&lanes) {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            c.id,
            c.speaker.code(),
            c.text,
            lane[0],
            lane[1],
            lane[2],
            c.micro.map_or("", Label::code),
            c.macro_label.map_or("", Label::code),
        ));
    }
    Ok(out.into_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only() {
        let f = parse_lat(format!("{LAT_HEADER}\n").as_bytes()).unwrap();
        assert!(f.clauses.is_empty() && f.spans.is_empty());
        assert_eq!(serialize_lat(&f).unwrap(), format!("{LAT_HEADER}\n").into_bytes());
    }

    #[test]
    fn unterminated_span() {
        let doc = format!("{LAT_HEADER}\n1\tIE\ta\t\t\t\t\t\n2\tIE\tb\t\t\t\t\t\n3\tIE\tc\tS\t\t\t\t\n4\tIE\td\t\t\t\t\t\n");
        let e = parse_lat(doc.as_bytes()).unwrap_err();
        assert!(e.to_string().contains("unterminated Story span opened at clause 3"), "{e}");
    }

    #[test]
    fn unknown_tokens_and_duplicates() {
        let bad_micro = format!("{LAT_HEADER}\n1\tIE\ta\t\t\t\tX\t\n");
        assert!(parse_lat(bad_micro.as_bytes()).unwrap_err().to_string().contains("unknown micro label"));
        let bad_macro = format!("{LAT_HEADER}\n1\tIE\ta\t\t\t\t\tClimax\n");
        assert!(parse_lat(bad_macro.as_bytes()).unwrap_err().to_string().contains("line 2"));
        let dup = format!("{LAT_HEADER}\n1\tIE\ta\t\t\t\t\t\n1\tIE\tb\t\t\t\t\t\n");
        assert!(parse_lat(dup.as_bytes()).unwrap_err().to_string().contains("duplicate clause index 1"));
    }

    #[test]
    fn one_row_span_parses_then_fails_validation() {
        let doc = format!("{LAT_HEADER}\n1\tIE\ta\tSE\t\t\t\t\n");
        let f = parse_lat(doc.as_bytes()).unwrap();
        assert_eq!(f.spans, vec![NarrativeSpan::new(NarrativeType::Story, 1, 1)]);
        assert!(f.violations().iter().any(|v| v.rule_id == "span-min-length"));
        assert_eq!(serialize_lat(&f).unwrap(), doc.into_bytes());
    }

    #[test]
    fn full_macro_words_accepted_and_abbreviated() {
        let doc = format!("{LAT_HEADER}\n1\tIE\ta\tS\t\t\tN\tComplication\n2\tIE\tb\tE\t\t\tF\tCoda\n");
        let f = parse_lat(doc.as_bytes()).unwrap();
        let out = String::from_utf8(serialize_lat(&f).unwrap()).unwrap();
        assert!(out.ends_with("N\tCom\n2\tIE\tb\tE\t\t\tF\tCod\n"));
    }

    #[test]
    fn crlf_and_bom_tolerated() {
        let doc = format!("\u{feff}# fragment_id: x\r\n{LAT_HEADER}\r\n1\tIR\tquestion?\t\t\t\t\t\r\n");
        let f = parse_lat(doc.as_bytes()).unwrap();
        assert_eq!(f.fragment_id, "x");
        assert_eq!(f.clauses[0].speaker, Speaker::Interviewer);
    }

    #[test]
    fn same_kind_overlap_is_unrepresentable() {
        let clauses = (1..=4).map(|i| Clause::interviewee(i, "x")).collect();
        let f = Fragment::new(
            "o",
            Topic::Other,
            clauses,
            vec![NarrativeSpan::new(NarrativeType::Story, 1, 3), NarrativeSpan::new(NarrativeType::Story, 2, 4)],
        );
        assert!(matches!(serialize_lat(&f), Err(FormatError::Unrepresentable(_))));
    }
}
