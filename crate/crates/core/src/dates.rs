//! Two-stage date extraction: a high-recall candidate grammar, then a
//! character-distribution logistic filter that prunes false positives.
//!
//! The grammar covers `Month D, YYYY`, `D Month YYYY`, `YYYY-MM-DD`,
//! `MM/DD/YYYY`, `MM/DD/YY`, and `Month YYYY`; partial forms (`Month D`,
//! `MM/DD`) only surface under `allow_partial`, with the year imputed to
//! 2000. Candidates always carry a calendar-legal date. The filter is a
//! logistic-linear model over character-class features, trained with
//! full-batch gradient descent; the shipped default model is a JSON
//! artifact trained on the bundled labeled candidate set.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::doc::{Annotation, AnnotationKind, Document, Span};
use crate::error::{LexError, Result};

/// A located, parsed date candidate with its ±20-char context window.
#[derive(Debug, Clone)]
pub struct DateCandidate {
    pub span: Span,
    pub text: String,
    pub year: i32,
    pub month: u32,
    pub day: u32,
    pub context_window: String,
}

const MONTHS: [(&str, u32); 12] = [
    ("january", 1),
    ("february", 2),
    ("march", 3),
    ("april", 4),
    ("may", 5),
    ("june", 6),
    ("july", 7),
    ("august", 8),
    ("september", 9),
    ("october", 10),
    ("november", 11),
    ("december", 12),
];

fn month_number(name: &str) -> Option<u32> {
    let lower = name.trim_end_matches('.').to_lowercase();
    MONTHS
        .iter()
        .find(|(full, _)| **full == *lower || (lower.len() == 3 && full.starts_with(&lower)))
        .map(|(_, n)| *n)
}

fn is_leap(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

fn days_in_month(year: i32, month: u32) -> u32 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 => {
            if is_leap(year) {
                29
            } else {
                28
            }
        }
        _ => 0,
    }
}

fn valid_date(year: i32, month: u32, day: u32) -> bool {
    (1..=12).contains(&month) && day >= 1 && day <= days_in_month(year, month)
}

/// Two-digit years map to the 1970-2069 window.
fn expand_two_digit_year(yy: i32) -> i32 {
    if yy < 70 {
        2000 + yy
    } else {
        1900 + yy
    }
}

const MONTH_PATTERN: &str = "(?:январь)"; // placeholder replaced below

static MONTH_ALT: LazyLock<String> = LazyLock::new(|| {
    let mut alts = Vec::new();
    for (full, _) in MONTHS {
        alts.push(full.to_string());
        alts.push(format!("{}\\.?", &full[..3]));
    }
    let _ = MONTH_PATTERN;
    format!("(?:{})", alts.join("|"))
});

static MDY_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"(?i)\b(?P<mon>{})\s+(?P<d>[0-9]{{1,2}})(?:st|nd|rd|th)?\s*,?\s+(?P<y>[0-9]{{4}})\b",
        &*MONTH_ALT
    ))
    .unwrap()
});
static DMY_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(r"(?i)\b(?P<d>[0-9]{{1,2}})(?:st|nd|rd|th)?\s+(?P<mon>{})\s*,?\s+(?P<y>[0-9]{{4}})\b", &*MONTH_ALT))
        .unwrap()
});
static ISO_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b(?P<y>[0-9]{4})-(?P<m>[0-9]{2})-(?P<d>[0-9]{2})\b").unwrap());
static SLASH_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b(?P<m>[0-9]{1,2})/(?P<d>[0-9]{1,2})/(?P<y>[0-9]{2}|[0-9]{4})\b").unwrap());
static MONTH_YEAR_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(&format!(r"(?i)\b(?P<mon>{})\s+(?P<y>[0-9]{{4}})\b", &*MONTH_ALT)).unwrap());
static MONTH_DAY_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(r"(?i)\b(?P<mon>{})\s+(?P<d>[0-9]{{1,2}})(?:st|nd|rd|th)?\b", &*MONTH_ALT)).unwrap()
});
static SLASH_PARTIAL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b(?P<m>[0-9]{1,2})/(?P<d>[0-9]{1,2})\b").unwrap());

/// Imputed year for partial candidates (leap, so Feb 29 stays legal).
const PARTIAL_YEAR: i32 = 2000;

fn boundaries_clear(text: &str, start: usize, end: usize) -> bool {
    let before = text[..start].chars().next_back();
    let after = text[end..].chars().next();
    !before.is_some_and(|c| c.is_alphanumeric() || c == '/' || c == '-')
        && !after.is_some_and(|c| c.is_alphanumeric() || c == '/' || c == '-')
}

fn context_window(doc: &Document, span: Span) -> String {
    let from = span.start.saturating_sub(20);
    let to = (span.end + 20).min(doc.len_chars());
    doc.text().chars().skip(from).take(to - from).collect()
}

/// High-recall date candidates. Every candidate is calendar-legal; the
/// grammar over-matches by design and is pruned by [`get_dates`].
pub fn get_raw_dates(doc: &Document) -> Vec<DateCandidate> {
    get_raw_dates_with(doc, false)
}

pub fn get_raw_dates_with(doc: &Document, allow_partial: bool) -> Vec<DateCandidate> {
    let text = doc.text();
    let mut cands: Vec<(usize, usize, i32, u32, u32)> = Vec::new();

    for m in MDY_RE.captures_iter(text) {
        let w = m.get(0).unwrap();
        let month = month_number(m.name("mon").unwrap().as_str()).unwrap();
        let day: u32 = m.name("d").unwrap().as_str().parse().unwrap();
        let year: i32 = m.name("y").unwrap().as_str().parse().unwrap();
        cands.push((w.start(), w.end(), year, month, day));
    }
    for m in DMY_RE.captures_iter(text) {
        let w = m.get(0).unwrap();
        let month = month_number(m.name("mon").unwrap().as_str()).unwrap();
        let day: u32 = m.name("d").unwrap().as_str().parse().unwrap();
        let year: i32 = m.name("y").unwrap().as_str().parse().unwrap();
        cands.push((w.start(), w.end(), year, month, day));
    }
    for m in ISO_RE.captures_iter(text) {
        let w = m.get(0).unwrap();
        let year: i32 = m.name("y").unwrap().as_str().parse().unwrap();
        let month: u32 = m.name("m").unwrap().as_str().parse().unwrap();
        let day: u32 = m.name("d").unwrap().as_str().parse().unwrap();
        cands.push((w.start(), w.end(), year, month, day));
    }
    for m in SLASH_RE.captures_iter(text) {
        let w = m.get(0).unwrap();
        let month: u32 = m.name("m").unwrap().as_str().parse().unwrap();
        let day: u32 = m.name("d").unwrap().as_str().parse().unwrap();
        let raw_year = m.name("y").unwrap().as_str();
        let year: i32 = raw_year.parse().unwrap();
        let year = if raw_year.len() == 2 { expand_two_digit_year(year) } else { year };
        cands.push((w.start(), w.end(), year, month, day));
    }
    for m in MONTH_YEAR_RE.captures_iter(text) {
        let w = m.get(0).unwrap();
        let month = month_number(m.name("mon").unwrap().as_str()).unwrap();
        let year: i32 = m.name("y").unwrap().as_str().parse().unwrap();
        cands.push((w.start(), w.end(), year, month, 1));
    }
    if allow_partial {
        for m in MONTH_DAY_RE.captures_iter(text) {
            let w = m.get(0).unwrap();
            let month = month_number(m.name("mon").unwrap().as_str()).unwrap();
            let day: u32 = m.name("d").unwrap().as_str().parse().unwrap();
            cands.push((w.start(), w.end(), PARTIAL_YEAR, month, day));
        }
        for m in SLASH_PARTIAL_RE.captures_iter(text) {
            let w = m.get(0).unwrap();
            let month: u32 = m.name("m").unwrap().as_str().parse().unwrap();
            let day: u32 = m.name("d").unwrap().as_str().parse().unwrap();
            cands.push((w.start(), w.end(), PARTIAL_YEAR, month, day));
        }
    }

    cands.retain(|&(s, e, y, m, d)| valid_date(y, m, d) && boundaries_clear(text, s, e));
    // longest match wins at any position
    cands.sort_by(|a, b| ((b.1 - b.0), a.0).cmp(&((a.1 - a.0), b.0)));
    let mut taken: Vec<(usize, usize, i32, u32, u32)> = Vec::new();
    for c in cands {
        if taken.iter().all(|t| c.1 <= t.0 || t.1 <= c.0) {
            taken.push(c);
        }
    }
    taken.sort();
    taken
        .into_iter()
        .map(|(s, e, year, month, day)| {
            let span = doc.span_of_bytes(s, e);
            DateCandidate {
                span,
                text: text[s..e].to_string(),
                year,
                month,
                day,
                context_window: context_window(doc, span),
            }
        })
        .collect()
}

pub const FEATURE_SPEC: &str = "charclass-v1";
pub const FEATURE_COUNT: usize = 18;

fn class_fractions(s: &str) -> [f64; 7] {
    let mut counts = [0f64; 7];
    let mut total = 0f64;
    for c in s.chars() {
        total += 1.0;
        if c.is_ascii_digit() {
            counts[0] += 1.0;
        }
        if c.is_alphabetic() {
            counts[1] += 1.0;
        }
        if c.is_whitespace() {
            counts[2] += 1.0;
        }
        if !c.is_alphanumeric() && !c.is_whitespace() {
            counts[3] += 1.0;
        }
        if c == '/' {
            counts[4] += 1.0;
        }
        if c == '-' {
            counts[5] += 1.0;
        }
        if c == ',' {
            counts[6] += 1.0;
        }
    }
    if total > 0.0 {
        for c in counts.iter_mut() {
            *c /= total;
        }
    }
    counts
}

fn digit_run_count(s: &str) -> usize {
    let mut runs = 0;
    let mut in_run = false;
    for c in s.chars() {
        if c.is_ascii_digit() {
            if !in_run {
                runs += 1;
                in_run = true;
            }
        } else {
            in_run = false;
        }
    }
    runs
}

fn year_plausibility(s: &str) -> f64 {
    let mut best: Option<f64> = None;
    let mut run = String::new();
    for c in s.chars().chain([' ']) {
        if c.is_ascii_digit() {
            run.push(c);
        } else {
            if run.len() == 4 {
                let y: i32 = run.parse().unwrap();
                let score = if (1950..=2050).contains(&y) {
                    1.0
                } else if (1850..=2100).contains(&y) {
                    0.75
                } else {
                    0.0
                };
                best = Some(best.map_or(score, |b: f64| b.max(score)));
            }
            run.clear();
        }
    }
    best.unwrap_or(0.5)
}

fn has_month_name(s: &str) -> bool {
    let lower = s.to_lowercase();
    MONTHS.iter().any(|(full, _)| lower.contains(&full[..3]))
}

/// Fixed-order feature vector: char-class fractions over the candidate
/// text, the same over the context window, scaled length, month-name hit,
/// digit-run count, and a year-plausibility bucket.
pub fn featurize_parts(text: &str, context: &str) -> Vec<f64> {
    let mut f = Vec::with_capacity(FEATURE_COUNT);
    f.extend(class_fractions(text));
    f.extend(class_fractions(context));
    f.push(text.chars().count() as f64 / 20.0);
    f.push(if has_month_name(text) { 1.0 } else { 0.0 });
    f.push(digit_run_count(text) as f64);
    f.push(year_plausibility(text));
    debug_assert_eq!(f.len(), FEATURE_COUNT);
    f
}

pub fn featurize(candidate: &DateCandidate) -> Vec<f64> {
    featurize_parts(&candidate.text, &candidate.context_window)
}

/// Linear classifier over character-class features pruning raw date
/// candidates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DateFilterModel {
    pub feature_spec: String,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub threshold: f64,
}

static DEFAULT_MODEL: LazyLock<DateFilterModel> = LazyLock::new(|| {
    DateFilterModel::from_json(include_str!("../data/models/date_filter.json"))
        .expect("bundled date filter model is well-formed")
});

impl DateFilterModel {
    /// The model shipped with the crate, trained on the bundled labeled
    /// candidate set.
    pub fn default_shipped() -> &'static DateFilterModel {
        &DEFAULT_MODEL
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let model: DateFilterModel = serde_json::from_str(json)
            .map_err(|e| LexError::Schema { line: e.line() as u64, message: e.to_string() })?;
        if model.weights.len() != FEATURE_COUNT {
            return Err(LexError::Schema {
                line: 0,
                message: format!("expected {FEATURE_COUNT} weights, got {}", model.weights.len()),
            });
        }
        if !model.weights.iter().all(|w| w.is_finite()) || !model.bias.is_finite() {
            return Err(LexError::Schema { line: 0, message: "weights must be finite".into() });
        }
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }

    pub fn score(&self, candidate: &DateCandidate) -> f64 {
        self.score_features(&featurize(candidate))
    }

    pub fn score_features(&self, features: &[f64]) -> f64 {
        let z: f64 = self.weights.iter().zip(features).map(|(w, x)| w * x).sum::<f64>() + self.bias;
        sigmoid(z)
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Filtered dates: raw candidates the model scores at or above its
/// threshold. Always a subset of [`get_raw_dates`].
pub fn get_dates(doc: &Document, model: &DateFilterModel) -> Vec<Annotation> {
    get_dates_with(doc, model, false)
}

pub fn get_dates_with(doc: &Document, model: &DateFilterModel, allow_partial: bool) -> Vec<Annotation> {
    get_raw_dates_with(doc, allow_partial)
        .into_iter()
        .filter(|c| model.score(c) >= model.threshold)
        .map(|c| {
            Annotation::at(
                doc,
                AnnotationKind::Date,
                c.span,
                json!({ "year": c.year, "month": c.month, "day": c.day }),
            )
        })
        .collect()
}

/// One labeled training row: candidate text, its context window, label.
#[derive(Debug, Clone)]
pub struct TrainingExample {
    pub text: String,
    pub context: String,
    pub label: bool,
}

/// Training CSV schema: `text,context,window_start,window_end,label`
/// (header required, `#` comment lines allowed).
pub fn load_training_csv(content: &str) -> Result<Vec<TrainingExample>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .flexible(false)
        .from_reader(content.as_bytes());
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| LexError::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 5 {
            return Err(LexError::Parse { line, message: format!("expected 5 fields, got {}", record.len()) });
        }
        let label = match record.get(4).unwrap_or("").trim() {
            "1" | "true" => true,
            "0" | "false" => false,
            other => {
                return Err(LexError::Parse { line, message: format!("label must be 0/1/true/false, got {other:?}") })
            }
        };
        for idx in [2, 3] {
            let v = record.get(idx).unwrap_or("").trim();
            if v.parse::<u64>().is_err() {
                return Err(LexError::Parse { line, message: format!("window offset must be an integer, got {v:?}") });
            }
        }
        out.push(TrainingExample {
            text: record.get(0).unwrap_or("").to_string(),
            context: record.get(1).unwrap_or("").to_string(),
            label,
        });
    }
    Ok(out)
}

/// Mean logistic loss and its gradient at (weights, bias).
pub fn loss_and_gradient(weights: &[f64], bias: f64, examples: &[(Vec<f64>, bool)]) -> (f64, Vec<f64>, f64) {
    let n = examples.len() as f64;
    let mut loss = 0.0;
    let mut grad_w = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for (x, label) in examples {
        let z: f64 = weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + bias;
        let p = sigmoid(z);
        let y = if *label { 1.0 } else { 0.0 };
        let eps = 1e-12;
        loss += -(y * (p + eps).ln() + (1.0 - y) * (1.0 - p + eps).ln());
        let d = p - y;
        for (g, v) in grad_w.iter_mut().zip(x) {
            *g += d * v;
        }
        grad_b += d;
    }
    loss /= n;
    for g in grad_w.iter_mut() {
        *g /= n;
    }
    grad_b /= n;
    (loss, grad_w, grad_b)
}

/// Full-batch gradient descent on the mean logistic loss from
/// zero-initialized weights; deterministic given fixed iteration order.
pub fn train_date_filter(labeled: &[TrainingExample], epochs: usize, learning_rate: f64) -> Result<DateFilterModel> {
    if labeled.is_empty() {
        return Err(LexError::Training("labeled set is empty".into()));
    }
    if epochs == 0 {
        return Err(LexError::Training("epochs must be at least 1".into()));
    }
    let pos = labeled.iter().filter(|e| e.label).count();
    if pos == 0 || pos == labeled.len() {
        return Err(LexError::Training("labeled set must contain both classes".into()));
    }
    let examples: Vec<(Vec<f64>, bool)> =
        labeled.iter().map(|e| (featurize_parts(&e.text, &e.context), e.label)).collect();
    let mut weights = vec![0.0; FEATURE_COUNT];
    let mut bias = 0.0;
    for _ in 0..epochs {
        let (_, grad_w, grad_b) = loss_and_gradient(&weights, bias, &examples);
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= learning_rate * g;
        }
        bias -= learning_rate * grad_b;
    }
    Ok(DateFilterModel { feature_spec: FEATURE_SPEC.to_string(), weights, bias, threshold: 0.5 })
}
