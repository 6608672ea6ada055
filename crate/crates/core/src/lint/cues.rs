//! Surface cues for Japanese clause segmentation.
//!
//! Matching is literal over the normalized text, in romanized (`toki wa`) and
//! native (`時は`, `ときは`) spellings. There is no morphological analysis, so
//! conjugated or unusual spellings are simply missed.

use std::collections::BTreeSet;

use super::LintFinding;
use crate::model::{ClauseId, Fragment, Speaker};
use crate::seg::Segmentation;

const ROMAJI_NOUNS: [&str; 4] = ["toki", "koro", "baai", "tokoro"];
const NATIVE_NOUNS: [&str; 7] = ["とき", "時", "ころ", "頃", "場合", "ところ", "所"];
const TOPIC: (&str, &str) = ("wa", "は");
const SUBJECT: [(&str, &str); 2] = [("ga", "が"), ("no", "の")];
const QUOTES: [(char, char); 4] = [('「', '」'), ('『', '』'), ('“', '”'), ('"', '"')];
const ROMAJI_QUOTATIVES: [&str; 2] = ["to", "tte"];
const NATIVE_QUOTATIVES: [&str; 2] = ["と", "って"];

fn is_latin(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn skippable(c: char) -> bool {
    c.is_whitespace() || matches!(c, ',' | '.' | '、' | '。' | '，' | '．' | '…' | '!' | '?' | '！' | '？')
}

fn occurrences(text: &[char], pattern: &str, word: bool) -> Vec<usize> {
    let pat: Vec<char> = pattern.chars().collect();
    if pat.is_empty() || pat.len() > text.len() {
        return Vec::new();
    }
    (0..=text.len() - pat.len())
        .filter(|&i| text[i..i + pat.len()] == pat[..])
        .filter(|&i| {
            !word || ((i == 0 || !is_latin(text[i - 1])) && text.get(i + pat.len()).is_none_or(|&c| !is_latin(c)))
        })
        .collect()
}

/// End positions (in atoms) of every formal noun + particle phrase.
fn phrase_ends(text: &[char], particle: (&str, &str)) -> BTreeSet<usize> {
    let mut ends = BTreeSet::new();
    for noun in ROMAJI_NOUNS {
        let pattern = format!("{noun} {}", particle.0);
        ends.extend(occurrences(text, &pattern, true).into_iter().map(|i| i + pattern.chars().count()));
    }
    for noun in NATIVE_NOUNS {
        let pattern = format!("{noun}{}", particle.1);
        ends.extend(occurrences(text, &pattern, false).into_iter().map(|i| i + pattern.chars().count()));
    }
    ends
}

/// Positions `end..=q` where `q` skips trailing spaces and punctuation, or `None` at end of text.
fn window(text: &[char], end: usize) -> Option<std::ops::RangeInclusive<usize>> {
    let mut q = end;
    while q < text.len() && skippable(text[q]) {
        q += 1;
    }
    (q < text.len()).then_some(end..=q)
}

fn has_quotative(text: &[char], close: usize) -> bool {
    let mut k = close + 1;
    while k < text.len() && text[k].is_whitespace() {
        k += 1;
    }
    let rest = &text[k..];
    let starts = |p: &str| {
        let pat: Vec<char> = p.chars().collect();
        rest.len() >= pat.len() && rest[..pat.len()] == pat[..]
    };
    NATIVE_QUOTATIVES.iter().any(|p| starts(p))
        || ROMAJI_QUOTATIVES
            .iter()
            .any(|p| starts(p) && rest.get(p.len()).is_none_or(|&c| !is_latin(c)))
}

// (position, rule, message) before locations are attached
type Hit = (usize, &'static str, String);

fn scan(text: &[char], boundaries: &BTreeSet<usize>) -> Vec<Hit> {
    let mut hits = Vec::new();
    for end in phrase_ends(text, TOPIC) {
        if let Some(w) = window(text, end) {
            if boundaries.range(w).next().is_none() {
                let phrase: String = text[end.saturating_sub(7)..end].iter().collect();
                hits.push((
                    end,
                    "formal-noun-topic-split",
                    format!("\"…{}\" is a formal-noun topic; start a new clause after it", phrase.trim_start()),
                ));
            }
        }
    }
    for particle in SUBJECT {
        for end in phrase_ends(text, particle) {
            if let Some(w) = window(text, end) {
                if let Some(&b) = boundaries.range(w).next() {
                    let phrase: String = text[end.saturating_sub(7)..end].iter().collect();
                    hits.push((
                        b,
                        "formal-noun-subject-merge",
                        format!("\"…{}\" is a formal-noun subject or modifier; merge across boundary {b}", phrase.trim_start()),
                    ));
                }
            }
        }
    }
    let mut i = 0;
    while i < text.len() {
        let Some(&(_, close)) = QUOTES.iter().find(|(open, _)| *open == text[i]) else {
            i += 1;
            continue;
        };
        let Some(j) = (i + 1..text.len()).find(|&j| text[j] == close) else {
            break;
        };
        if !has_quotative(text, j) {
            for &b in boundaries.range(i + 1..=j) {
                hits.push((b, "unquoted-speech-merge", format!("boundary {b} splits a quotation that has no quotative marker")));
            }
        }
        i = j + 1;
    }
    hits.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    hits.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    hits
}

/// Segmentation cue warnings for one transcript and one segmentation of it.
pub fn lint_segmentation_cues(raw_text: &str, segmentation: &Segmentation) -> Vec<LintFinding> {
    let text: Vec<char> = raw_text.chars().collect();
    let boundaries: BTreeSet<usize> = segmentation.boundaries().into_iter().collect();
    scan(&text, &boundaries)
        .into_iter()
        .map(|(pos, rule, msg)| LintFinding::new(rule, "", None, msg).at_boundary(pos))
        .collect()
}

/// The same cues over a fragment's clauses. Each run of consecutive interviewee
/// clauses is joined with spaces and its clause joins act as boundaries, so
/// interviewer units are never linted.
pub fn lint_fragment_cues(fragment: &Fragment) -> Vec<LintFinding> {
    let mut out = Vec::new();
    let mut run: Vec<(ClauseId, &str)> = Vec::new();
    let mut flush = |run: &mut Vec<(ClauseId, &str)>| {
        if run.is_empty() {
            return;
        }
        let mut text: Vec<char> = Vec::new();
        let mut boundaries = BTreeSet::new();
        // clause id covering each atom
        let mut owner = Vec::new();
        for (k, (id, t)) in run.iter().enumerate() {
            if k > 0 {
                boundaries.insert(text.len());
                text.push(' ');
                owner.push(*id);
            }
            for c in t.chars() {
                text.push(c);
                owner.push(*id);
            }
        }
        for (pos, rule, msg) in scan(&text, &boundaries) {
            let clause = owner.get(pos.saturating_sub(1)).copied();
            out.push(LintFinding::new(rule, &fragment.fragment_id, clause, msg));
        }
        run.clear();
    };
    for c in &fragment.clauses {
        if c.speaker == Speaker::Interviewer {
            flush(&mut run);
        } else {
            run.push((c.id, c.text.as_str()));
        }
    }
    flush(&mut run);
    out
}
