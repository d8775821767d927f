//! Document segmentation: sentences, paragraphs, sections/titles, pages.
//!
//! Sentence splitting is abbreviation-aware. A period only ends a sentence
//! when the token before it is not a known abbreviation, it is not
//! internal to a numeral or dotted abbreviation, and no statutory
//! continuation ("§§6901 et seq., ...") is in progress. The abbreviation
//! set is data, not code: models can be retrained from a corpus with
//! [`train_abbreviations`].

use std::collections::{BTreeMap, BTreeSet};
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::doc::{Annotation, AnnotationKind, Document, Span};
use crate::error::{LexError, Result};

/// Abbreviation and sentence-starter statistics driving sentence splitting.
///
/// Abbreviations are stored lowercased without the trailing period
/// ("u.s.c", "corp"); internal periods are kept.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SentenceModel {
    pub abbreviations: BTreeSet<String>,
    pub sentence_starters: BTreeSet<String>,
    pub min_abbrev_score: f64,
}

static DEFAULT_MODEL: LazyLock<SentenceModel> = LazyLock::new(|| {
    SentenceModel::from_json(include_str!("../data/sentence_model.json"))
        .expect("bundled sentence model is well-formed")
});

impl SentenceModel {
    /// The English legal model shipped with the crate.
    pub fn default_english() -> &'static SentenceModel {
        &DEFAULT_MODEL
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let mut model: SentenceModel = serde_json::from_str(json)
            .map_err(|e| LexError::Schema { line: e.line() as u64, message: e.to_string() })?;
        model.abbreviations = model.abbreviations.iter().map(|a| normalize_abbrev(a)).collect();
        if model.abbreviations.iter().any(|a| a.contains(char::is_whitespace) || a.is_empty()) {
            return Err(LexError::Schema { line: 0, message: "abbreviations must be non-empty, whitespace-free".into() });
        }
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }

    pub fn with_abbreviation(mut self, abbrev: &str) -> Self {
        self.abbreviations.insert(normalize_abbrev(abbrev));
        self
    }

    pub fn is_abbreviation(&self, token: &str) -> bool {
        self.abbreviations.contains(&normalize_abbrev(token))
    }
}

fn normalize_abbrev(token: &str) -> String {
    token.to_lowercase().trim_end_matches('.').to_string()
}

fn is_closing(c: char) -> bool {
    matches!(c, ')' | ']' | '}' | '"' | '\'' | '\u{201D}' | '\u{2019}' | '\u{00BB}')
}

/// Split a document into sentence spans. Spans partition the non-whitespace
/// text: terminal punctuation, ellipses, and closing quotes/parens attach
/// to the preceding sentence.
pub fn sentence_spans(doc: &Document, model: &SentenceModel) -> Vec<Span> {
    let chars: Vec<char> = doc.text().chars().collect();
    let n = chars.len();
    let mut spans = Vec::new();
    let mut i = 0;

    while i < n {
        while i < n && chars[i].is_whitespace() {
            i += 1;
        }
        if i >= n {
            break;
        }
        let start = i;
        let mut j = i;
        let mut sentence_end: Option<usize> = None;

        while j < n {
            let c = chars[j];
            if !matches!(c, '.' | '?' | '!' | '\u{2026}') {
                j += 1;
                continue;
            }
            // terminal run, then attached closers
            let run_start = j;
            let mut k = j;
            let mut strong = false;
            while k < n && matches!(chars[k], '.' | '?' | '!' | '\u{2026}') {
                if matches!(chars[k], '?' | '!') {
                    strong = true;
                }
                k += 1;
            }
            let mut m = k;
            while m < n && is_closing(chars[m]) {
                m += 1;
            }
            if m < n && !chars[m].is_whitespace() {
                // not a terminal position (decimal point, internal period,
                // "seq.," and the like)
                j = k;
                continue;
            }
            let is_ellipsis = chars[run_start] == '\u{2026}' || k - run_start > 1;
            let breaks = if strong {
                true
            } else if is_ellipsis {
                // ellipsis attaches left; only break before a fresh
                // uppercase/digit start
                next_token(&chars, m).map_or(true, |t| t.chars().next().is_some_and(|c| c.is_uppercase() || c.is_ascii_digit()))
            } else {
                !suppress_period_break(model, &chars, start, run_start, m)
            };
            if breaks {
                sentence_end = Some(m);
                break;
            }
            j = m;
        }

        match sentence_end {
            Some(e) => {
                spans.push(Span::new(start, e));
                i = e;
            }
            None => {
                let mut last = n;
                while last > start && chars[last - 1].is_whitespace() {
                    last -= 1;
                }
                if last > start {
                    spans.push(Span::new(start, last));
                }
                break;
            }
        }
    }
    spans
}

/// The word immediately before the period, stripped of leading
/// punctuation, lowercased, without the terminal period.
fn prev_token(chars: &[char], period_idx: usize) -> String {
    let mut s = period_idx;
    while s > 0 && !chars[s - 1].is_whitespace() {
        s -= 1;
    }
    let token: String = chars[s..period_idx].iter().collect();
    token.trim_start_matches(|c: char| !c.is_alphanumeric() && c != '\u{00A7}').to_lowercase()
}

fn next_token(chars: &[char], from: usize) -> Option<String> {
    let mut s = from;
    while s < chars.len() && chars[s].is_whitespace() {
        s += 1;
    }
    if s >= chars.len() {
        return None;
    }
    let mut e = s;
    while e < chars.len() && !chars[e].is_whitespace() {
        e += 1;
    }
    Some(chars[s..e].iter().collect())
}

fn suppress_period_break(
    model: &SentenceModel,
    chars: &[char],
    sent_start: usize,
    period_idx: usize,
    after_idx: usize,
) -> bool {
    let token = prev_token(chars, period_idx);
    if token.is_empty() {
        return false;
    }
    // (a) known abbreviation
    if model.abbreviations.contains(token.trim_end_matches('.')) {
        return true;
    }
    // single-letter initials ("S. Ct.", "John Q. Public")
    if token.chars().count() == 1 && token.chars().all(char::is_alphabetic) {
        return true;
    }
    // (c) statutory continuation: "§§6901 et seq. or any related ..."
    if chars[sent_start..period_idx].contains(&'\u{00A7}') {
        if let Some(next) = next_token(chars, after_idx) {
            let word = next.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase();
            if next.chars().next().is_some_and(char::is_lowercase) && !model.sentence_starters.contains(&word) {
                return true;
            }
        }
    }
    false
}

/// Scoring inputs for one abbreviation candidate observed in a corpus.
#[derive(Debug, Clone, Copy)]
pub struct CandidateCounts {
    pub with_period: u64,
    pub without_period: u64,
    pub internal_periods: u64,
    pub length: u64,
}

/// Kiss & Strunk-style abbreviation score: a one-sided log-likelihood
/// ratio of "this token binds its period" against the corpus period rate,
/// damped by token length and boosted by internal periods.
pub fn abbreviation_score(counts: CandidateCounts, total_tokens: u64, total_periods: u64) -> f64 {
    if total_tokens == 0 || counts.with_period == 0 {
        return f64::NEG_INFINITY;
    }
    let count_total = (counts.with_period + counts.without_period) as f64;
    let count_with = counts.with_period as f64;
    let p1 = ((total_periods as f64) / (total_tokens as f64)).clamp(1e-9, 1.0 - 1e-9);
    let p2 = 0.99_f64;
    let null_hypo = count_with * p1.ln() + (count_total - count_with) * (1.0 - p1).ln();
    let alt_hypo = count_with * p2.ln() + (count_total - count_with) * (1.0 - p2).ln();
    let ll = -2.0 * (null_hypo - alt_hypo);
    let f_length = (-(counts.length as f64)).exp();
    let f_periods = (counts.internal_periods + 1) as f64;
    let f_penalty = (counts.length as f64).powi(-(counts.without_period as i64 as i32));
    ll * f_length * f_periods * f_penalty
}

/// Learn abbreviations from a corpus. Candidates scoring at or above
/// `threshold` join the default seed set; the seed set is always kept.
pub fn train_abbreviations(corpus: &[Document], threshold: f64) -> Result<SentenceModel> {
    if corpus.is_empty() {
        return Err(LexError::Argument("training corpus must be non-empty".into()));
    }
    let mut total_tokens: u64 = 0;
    let mut total_periods: u64 = 0;
    let mut stats: BTreeMap<String, (u64, u64)> = BTreeMap::new();

    for doc in corpus {
        for raw in doc.text().split_whitespace() {
            total_tokens += 1;
            let with_period = raw.ends_with('.');
            if with_period {
                total_periods += 1;
            }
            let token = raw
                .trim_matches(|c: char| !c.is_alphanumeric() && c != '.')
                .trim_end_matches('.')
                .to_lowercase();
            if token.is_empty()
                || token.chars().count() > 12
                || !token.chars().any(char::is_alphabetic)
                || token.chars().any(|c| c.is_ascii_digit())
            {
                continue;
            }
            let e = stats.entry(token).or_insert((0, 0));
            if with_period {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
    }

    let mut model = SentenceModel::default_english().clone();
    model.min_abbrev_score = threshold;
    for (token, (with, without)) in stats {
        if with == 0 {
            continue;
        }
        let length = token.chars().filter(|c| *c != '.').count() as u64;
        let internal_periods = token.chars().filter(|c| *c == '.').count() as u64;
        let score = abbreviation_score(
            CandidateCounts { with_period: with, without_period: without, internal_periods, length },
            total_tokens,
            total_periods,
        );
        if score >= threshold {
            model.abbreviations.insert(token);
        }
    }
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadingPattern {
    AllCapsLine,
    NumberedHeading,
    ArticleSectionKeyword,
    AppendixKeyword,
    RomanNumeralHeading,
}

impl HeadingPattern {
    pub fn as_str(&self) -> &'static str {
        match self {
            HeadingPattern::AllCapsLine => "all_caps_line",
            HeadingPattern::NumberedHeading => "numbered_heading",
            HeadingPattern::ArticleSectionKeyword => "article_section_keyword",
            HeadingPattern::AppendixKeyword => "appendix_keyword",
            HeadingPattern::RomanNumeralHeading => "roman_numeral_heading",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct HeadingRule {
    pub pattern: HeadingPattern,
    pub max_line_length: usize,
}

impl HeadingRule {
    /// All five patterns, headings capped at 100 chars.
    pub fn defaults() -> Vec<HeadingRule> {
        [
            HeadingPattern::AllCapsLine,
            HeadingPattern::NumberedHeading,
            HeadingPattern::ArticleSectionKeyword,
            HeadingPattern::AppendixKeyword,
            HeadingPattern::RomanNumeralHeading,
        ]
        .into_iter()
        .map(|pattern| HeadingRule { pattern, max_line_length: 100 })
        .collect()
    }
}

/// Title annotations over heading lines (or inline numbered headings such
/// as "4.2.2    Release." at the head of a paragraph line).
pub fn title_spans(doc: &Document, rules: &[HeadingRule]) -> Vec<Annotation> {
    let mut out = Vec::new();
    for (line_start, line) in lines_with_offsets(doc) {
        let trimmed_start = line_start + leading_ws_chars(line);
        let content = line.trim();
        if content.is_empty() {
            continue;
        }
        let content_chars = content.chars().count();
        for rule in rules {
            let hit = match rule.pattern {
                HeadingPattern::AllCapsLine => {
                    (content_chars <= rule.max_line_length
                        && content.chars().any(char::is_alphabetic)
                        && !content.chars().any(char::is_lowercase))
                    .then_some(content_chars)
                }
                HeadingPattern::NumberedHeading => numbered_heading_len(content, rule.max_line_length),
                HeadingPattern::ArticleSectionKeyword => keyword_heading(
                    content,
                    content_chars,
                    rule.max_line_length,
                    &["ARTICLE ", "Article ", "SECTION ", "Section "],
                ),
                HeadingPattern::AppendixKeyword => {
                    keyword_heading(content, content_chars, rule.max_line_length, &["APPENDIX ", "Appendix "])
                }
                HeadingPattern::RomanNumeralHeading => roman_heading(content, content_chars, rule.max_line_length),
            };
            if let Some(len) = hit {
                let span = Span::new(trimmed_start, trimmed_start + len);
                out.push(Annotation::at(
                    doc,
                    AnnotationKind::Title,
                    span,
                    serde_json::json!({ "pattern": rule.pattern.as_str() }),
                ));
                break;
            }
        }
    }
    out.sort_by_key(|a| (a.span.start, a.span.end));
    out
}

fn leading_ws_chars(line: &str) -> usize {
    line.chars().take_while(|c| c.is_whitespace()).count()
}

fn lines_with_offsets(doc: &Document) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in doc.text().split('\n') {
        out.push((offset, line));
        offset += line.chars().count() + 1;
    }
    out
}

/// "4.2.2    Release." or "1.2 Definitions": a dotted or
/// period-terminated number, whitespace, then a capitalized prose word.
/// Inline headings stop at the first period.
fn numbered_heading_len(content: &str, max_len: usize) -> Option<usize> {
    let chars: Vec<char> = content.chars().collect();
    let mut i = 0;
    let mut dots = 0;
    while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
        if chars[i] == '.' {
            dots += 1;
        }
        i += 1;
    }
    if i == 0 || dots == 0 || !chars[0].is_ascii_digit() {
        return None;
    }
    let num_end = i;
    while i < chars.len() && chars[i].is_whitespace() {
        i += 1;
    }
    if i == num_end || i >= chars.len() {
        return None;
    }
    // prose-shaped heading word: capital followed by lowercase
    if !(chars[i].is_uppercase() && chars.get(i + 1).is_some_and(|c| c.is_lowercase())) {
        return None;
    }
    // inline form ends at the first period after the heading word
    let mut j = i;
    while j < chars.len() && chars[j] != '.' {
        j += 1;
    }
    let end = if j < chars.len() { j + 1 } else { chars.len() };
    (end <= max_len).then_some(end)
}

fn keyword_heading(content: &str, content_chars: usize, max_len: usize, keywords: &[&str]) -> Option<usize> {
    if content_chars > max_len {
        return None;
    }
    keywords
        .iter()
        .any(|k| content.starts_with(k) && content[k.len()..].chars().next().is_some_and(|c| c.is_alphanumeric()))
        .then_some(content_chars)
}

fn roman_heading(content: &str, content_chars: usize, max_len: usize) -> Option<usize> {
    if content_chars > max_len {
        return None;
    }
    let numeral_len = content.chars().take_while(|c| "IVXLCDM".contains(*c)).count();
    if numeral_len == 0 {
        return None;
    }
    let rest: String = content.chars().skip(numeral_len).collect();
    let mut rest_chars = rest.chars();
    (rest_chars.next() == Some('.')
        && rest_chars.next() == Some(' ')
        && rest_chars.next().is_some_and(|c| c.is_uppercase()))
    .then_some(content_chars)
}

/// Sections run from each title start to the next title start (or document
/// end); text before the first title is section 0 when non-empty.
pub fn section_spans(doc: &Document, rules: &[HeadingRule]) -> Vec<Span> {
    let len = doc.len_chars();
    if len == 0 {
        return Vec::new();
    }
    let titles = title_spans(doc, rules);
    if titles.is_empty() {
        return vec![Span::new(0, len)];
    }
    let mut spans = Vec::new();
    let first = titles[0].span.start;
    if first > 0 && doc.slice(Span::new(0, first)).is_ok_and(|s| !s.trim().is_empty()) {
        spans.push(Span::new(0, first));
    }
    for (i, t) in titles.iter().enumerate() {
        let end = titles.get(i + 1).map_or(len, |n| n.span.start);
        if end > t.span.start {
            spans.push(Span::new(t.span.start, end));
        }
    }
    spans
}

/// Paragraphs are runs of non-blank lines; a blank line is empty after
/// trimming. Spans exclude leading/trailing whitespace.
pub fn paragraph_spans(doc: &Document) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut para_start: Option<usize> = None;
    let mut para_end = 0;
    for (offset, line) in lines_with_offsets(doc) {
        if line.trim().is_empty() {
            if let Some(s) = para_start.take() {
                spans.push(Span::new(s, para_end));
            }
            continue;
        }
        let content_start = offset + leading_ws_chars(line);
        let content_len = line.trim_end().chars().count() - leading_ws_chars(line);
        if para_start.is_none() {
            para_start = Some(content_start);
        }
        para_end = content_start + content_len;
    }
    if let Some(s) = para_start {
        spans.push(Span::new(s, para_end));
    }
    spans
}

/// Pages split on form-feed; whitespace-only segments are dropped and
/// spans exclude leading/trailing whitespace.
pub fn page_spans(doc: &Document) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut seg_start = 0;
    let chars: Vec<char> = doc.text().chars().collect();
    for (i, c) in chars.iter().chain([&'\u{000C}']).enumerate() {
        if *c != '\u{000C}' {
            continue;
        }
        let mut s = seg_start;
        let mut e = i;
        while s < e && chars[s].is_whitespace() {
            s += 1;
        }
        while e > s && chars[e - 1].is_whitespace() {
            e -= 1;
        }
        if e > s {
            spans.push(Span::new(s, e));
        }
        seg_start = i + 1;
    }
    spans
}
