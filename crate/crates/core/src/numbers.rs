//! Number parsing shared by the quantity extractors: numerals with
//! separators, written numbers ("THIRTY-SIX THOUSAND ... AND 2/100"), and
//! mixed magnitude forms ("2.035 billion").

use std::sync::LazyLock;

use regex::Regex;
use serde::Serialize;

use crate::decimal::Dec;
use crate::doc::{Document, Span};
use crate::error::{LexError, Result};

/// How a number was written in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceForm {
    Numeral,
    Words,
    Mixed,
}

/// A number located in a document.
#[derive(Debug, Clone)]
pub struct NumberValue {
    pub value: Dec,
    pub span: Span,
    pub source_form: SourceForm,
}

fn unit_value(word: &str) -> Option<u32> {
    Some(match word {
        "zero" => 0,
        "one" => 1,
        "two" => 2,
        "three" => 3,
        "four" => 4,
        "five" => 5,
        "six" => 6,
        "seven" => 7,
        "eight" => 8,
        "nine" => 9,
        "ten" => 10,
        "eleven" => 11,
        "twelve" => 12,
        "thirteen" => 13,
        "fourteen" => 14,
        "fifteen" => 15,
        "sixteen" => 16,
        "seventeen" => 17,
        "eighteen" => 18,
        "nineteen" => 19,
        _ => return None,
    })
}

fn tens_value(word: &str) -> Option<u32> {
    Some(match word {
        "twenty" => 20,
        "thirty" => 30,
        "forty" => 40,
        "fifty" => 50,
        "sixty" => 60,
        "seventy" => 70,
        "eighty" => 80,
        "ninety" => 90,
        _ => return None,
    })
}

fn scale_value(word: &str) -> Option<i128> {
    Some(match word {
        "thousand" => 1_000,
        "million" => 1_000_000,
        "billion" => 1_000_000_000,
        _ => return None,
    })
}

fn is_number_word(word: &str) -> bool {
    unit_value(word).is_some() || tens_value(word).is_some() || scale_value(word).is_some() || word == "hundred"
}

/// Cents suffix: `2/100`, `No/100`, `00/100`.
fn fraction_value(token: &str) -> Option<u32> {
    let lower = token.to_lowercase();
    let (num, den) = lower.split_once('/')?;
    if den != "100" {
        return None;
    }
    if num == "no" {
        return Some(0);
    }
    if num.is_empty() || num.len() > 2 || !num.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    num.parse().ok()
}

/// Parse a written number phrase to an exact decimal.
///
/// Grammar: units and tens compose additively, "hundred" multiplies the
/// running group, thousand/million/billion close a group; "and", hyphens,
/// and arbitrary case are tolerated; a final `n/100` or `No/100` adds
/// cents. A bare multiplier ("a hundred", "thousand") is not a number.
pub fn parse_number_words(text: &str) -> Result<Dec> {
    let tokens: Vec<String> = text
        .split(|c: char| c.is_whitespace() || c == '-' || c == '\u{2010}' || c == '\u{2011}')
        .filter(|t| !t.is_empty())
        .map(|t| t.trim_matches(|c: char| c == ',' || c == ';').to_lowercase())
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(LexError::Argument("empty number phrase".into()));
    }

    let mut total: i128 = 0;
    let mut group: i128 = 0;
    let mut saw_value = false;
    let mut cents: Option<u32> = None;

    for (i, tok) in tokens.iter().enumerate() {
        if tok == "and" {
            continue;
        }
        if let Some(n) = fraction_value(tok) {
            if i + 1 != tokens.len() {
                return Err(LexError::Argument(format!("fraction must end the phrase: {text:?}")));
            }
            cents = Some(n);
            continue;
        }
        if let Some(v) = unit_value(tok) {
            group += v as i128;
            saw_value = true;
        } else if let Some(v) = tens_value(tok) {
            group += v as i128;
            saw_value = true;
        } else if tok == "hundred" {
            if group == 0 {
                return Err(LexError::Argument(format!("bare multiplier in {text:?}")));
            }
            group *= 100;
        } else if let Some(scale) = scale_value(tok) {
            if group == 0 {
                return Err(LexError::Argument(format!("bare multiplier in {text:?}")));
            }
            total += group * scale;
            group = 0;
        } else {
            return Err(LexError::Argument(format!("not a number word: {tok:?}")));
        }
    }
    if !saw_value {
        return Err(LexError::Argument(format!("no number words in {text:?}")));
    }

    let whole = Dec::from_int(total + group);
    Ok(match cents {
        Some(0) | None => whole,
        Some(n) => whole.add(&Dec::new(n as i128, 2)),
    })
}

const UNITS: [&str; 20] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
];
const TENS: [&str; 8] = ["twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"];

fn render_below_thousand(n: u32, out: &mut Vec<String>) {
    let hundreds = n / 100;
    let rest = n % 100;
    if hundreds > 0 {
        out.push(UNITS[hundreds as usize].to_string());
        out.push("hundred".to_string());
    }
    if rest == 0 {
        return;
    }
    if rest < 20 {
        out.push(UNITS[rest as usize].to_string());
    } else {
        let tens = TENS[(rest / 10 - 2) as usize];
        if rest % 10 == 0 {
            out.push(tens.to_string());
        } else {
            out.push(format!("{tens}-{}", UNITS[(rest % 10) as usize]));
        }
    }
}

/// Canonical English words for `n`, such that
/// `parse_number_words(render_number_words(n)) == n`.
pub fn render_number_words(n: u64) -> Result<String> {
    if n > 999_999_999 {
        return Err(LexError::Argument(format!("{n} out of range for rendering")));
    }
    if n == 0 {
        return Ok("zero".to_string());
    }
    let mut words = Vec::new();
    let millions = (n / 1_000_000) as u32;
    let thousands = ((n / 1_000) % 1_000) as u32;
    let rest = (n % 1_000) as u32;
    if millions > 0 {
        render_below_thousand(millions, &mut words);
        words.push("million".to_string());
    }
    if thousands > 0 {
        render_below_thousand(thousands, &mut words);
        words.push("thousand".to_string());
    }
    if rest > 0 {
        render_below_thousand(rest, &mut words);
    }
    Ok(words.join(" "))
}

static NUMERAL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[0-9]{1,3}(?:,[0-9]{3})+(?:\.[0-9]+)?|[0-9]+(?:\.[0-9]+)?").unwrap());
static WORD_TOKEN_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[A-Za-z]+/100|[0-9]{1,2}/100|[A-Za-z]+").unwrap());
static MIXED_SCALE_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)^(thousand|million|billion)\b").unwrap());

fn char_at(text: &str, byte: usize) -> Option<char> {
    text[byte..].chars().next()
}

fn char_before(text: &str, byte: usize) -> Option<char> {
    text[..byte].chars().next_back()
}

/// A numeral match is rejected when it adjoins more digits/letters, a
/// slash fraction, or sits inside a dotted run like `4.2.2`.
fn numeral_boundaries_ok(text: &str, start: usize, end: usize) -> bool {
    if let Some(prev) = char_before(text, start) {
        if prev.is_alphanumeric() || prev == '/' {
            return false;
        }
        if prev == '.' || prev == ',' {
            if let Some(pp) = char_before(text, start - prev.len_utf8()) {
                if pp.is_ascii_digit() {
                    return false;
                }
            }
        }
    }
    if let Some(next) = char_at(text, end) {
        if next.is_alphanumeric() || next == '/' {
            return false;
        }
        if next == '.' || next == ',' {
            if let Some(nn) = char_at(text, end + next.len_utf8()) {
                if nn.is_ascii_digit() {
                    return false;
                }
            }
        }
    }
    true
}

struct WordRun {
    start: usize,
    end: usize,
    text: String,
}

/// Collect maximal runs of number words joined by spaces/hyphens, with
/// "and" connectors and an optional trailing cents fraction.
fn word_number_runs(text: &str) -> Vec<WordRun> {
    let tokens: Vec<(usize, usize, String)> = WORD_TOKEN_RE
        .find_iter(text)
        .map(|m| (m.start(), m.end(), m.as_str().to_lowercase()))
        .collect();
    let joinable = |gap: &str| !gap.is_empty() && gap.chars().all(|c| c.is_whitespace() || c == '-');

    let mut runs = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if !is_number_word(&tokens[i].2) {
            i += 1;
            continue;
        }
        let run_start = tokens[i].0;
        let mut last_value_end = tokens[i].1;
        let mut j = i + 1;
        while j < tokens.len() {
            if !joinable(&text[tokens[j - 1].1..tokens[j].0]) {
                break;
            }
            let word = &tokens[j].2;
            if is_number_word(word) {
                last_value_end = tokens[j].1;
                j += 1;
            } else if word == "and" {
                j += 1;
            } else if fraction_value(word).is_some() {
                last_value_end = tokens[j].1;
                j += 1;
                break;
            } else {
                break;
            }
        }
        runs.push(WordRun { start: run_start, end: last_value_end, text: text[run_start..last_value_end].to_string() });
        i = j.max(i + 1);
    }
    runs
}

/// Find every number expression in a document: numerals, written numbers,
/// and `numeral + scale word` mixed forms. Overlapping candidates resolve
/// longest-first, so "2.035 billion" wins over "2.035".
pub fn find_numbers(doc: &Document) -> Vec<NumberValue> {
    let text = doc.text();
    let mut candidates: Vec<NumberValue> = Vec::new();

    for m in NUMERAL_RE.find_iter(text) {
        if !numeral_boundaries_ok(text, m.start(), m.end()) {
            continue;
        }
        let Ok(value) = Dec::parse(m.as_str()) else { continue };
        let mut span = doc.span_of_bytes(m.start(), m.end());
        let mut val = value;
        let mut form = SourceForm::Numeral;
        // mixed form: numeral followed by a scale word
        let after = &text[m.end()..];
        if let Some(rest) = after.strip_prefix(' ') {
            if let Some(sm) = MIXED_SCALE_RE.find(rest) {
                let scale = scale_value(&sm.as_str().to_lowercase()).unwrap();
                if let Some(scaled) = value.mul_int(scale) {
                    val = scaled.normalize();
                    form = SourceForm::Mixed;
                    span = doc.span_of_bytes(m.start(), m.end() + 1 + sm.end());
                }
            }
        }
        candidates.push(NumberValue { value: val, span, source_form: form });
    }

    for run in word_number_runs(text) {
        let Ok(value) = parse_number_words(&run.text) else { continue };
        candidates.push(NumberValue {
            value,
            span: doc.span_of_bytes(run.start, run.end),
            source_form: SourceForm::Words,
        });
    }

    resolve_longest(candidates)
}

/// Longest-first non-overlap resolution, then document order.
fn resolve_longest(mut candidates: Vec<NumberValue>) -> Vec<NumberValue> {
    candidates.sort_by(|a, b| {
        (b.span.len(), a.span.start, a.span.end).cmp(&(a.span.len(), b.span.start, b.span.end))
    });
    let mut taken: Vec<NumberValue> = Vec::new();
    for cand in candidates {
        if taken.iter().all(|t| !t.span.overlaps(&cand.span)) {
            taken.push(cand);
        }
    }
    taken.sort_by_key(|n| (n.span.start, n.span.end));
    taken
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> Document {
        Document::new("t", text, "en").unwrap()
    }

    #[test]
    fn the_1057_variants() {
        for phrase in [
            "one thousand fifty seven",
            "one-thousand fifty seven",
            "one thousand and fifty seven",
            "one thousand fifty-seven",
        ] {
            assert_eq!(parse_number_words(phrase).unwrap(), Dec::from_int(1057), "{phrase}");
        }
    }

    // independent oracle: top-down recursive evaluation over the grammar,
    // splitting at the largest scale word
    fn oracle_words(tokens: &[&str]) -> i128 {
        for (scale, word) in [(1_000_000_000, "billion"), (1_000_000, "million"), (1_000, "thousand")] {
            if let Some(pos) = tokens.iter().position(|t| *t == word) {
                let left = oracle_words(&tokens[..pos]);
                let right = if pos + 1 < tokens.len() { oracle_words(&tokens[pos + 1..]) } else { 0 };
                return left * scale + right;
            }
        }
        if let Some(pos) = tokens.iter().position(|t| *t == "hundred") {
            let left = oracle_words(&tokens[..pos]);
            let right = if pos + 1 < tokens.len() { oracle_words(&tokens[pos + 1..]) } else { 0 };
            return left * 100 + right;
        }
        tokens
            .iter()
            .filter(|t| **t != "and")
            .map(|t| (unit_value(t).or_else(|| tens_value(t)).unwrap()) as i128)
            .sum()
    }

    #[test]
    fn cents_fraction_matches_word_oracle() {
        let phrase = "THIRTY-SIX THOUSAND TWO-HUNDRED SIXTY-SIX AND 2/100";
        let tokens = ["thirty", "six", "thousand", "two", "hundred", "sixty", "six"];
        let whole = oracle_words(&tokens);
        assert_eq!(whole, 36266);
        let expected = Dec::from_int(whole).add(&Dec::new(2, 2));
        let got = parse_number_words(phrase).unwrap();
        assert_eq!(got, expected);
        assert_eq!(got.to_string(), "36266.02");
    }

    #[test]
    fn zero_parses() {
        assert_eq!(parse_number_words("zero").unwrap(), Dec::ZERO);
    }

    #[test]
    fn no_over_100_equals_0_over_100() {
        let a = parse_number_words("two hundred fifty thousand and No/100").unwrap();
        let b = parse_number_words("two hundred fifty thousand and 0/100").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, Dec::from_int(250_000));
    }

    #[test]
    fn rejects_non_numbers() {
        assert!(parse_number_words("hello world").is_err());
        assert!(parse_number_words("").is_err());
        assert!(parse_number_words("and").is_err());
        // "a hundred" is not accepted
        assert!(parse_number_words("a hundred").is_err());
        assert!(parse_number_words("hundred").is_err());
    }

    #[test]
    fn render_examples() {
        assert_eq!(render_number_words(1057).unwrap(), "one thousand fifty-seven");
        assert_eq!(render_number_words(0).unwrap(), "zero");
        assert_eq!(render_number_words(1_000_000).unwrap(), "one million");
        assert!(render_number_words(1_000_000_000).is_err());
    }

    #[test]
    fn render_parse_round_trip_spot() {
        for n in [1, 14, 40, 99, 100, 101, 115, 999, 1000, 1001, 36266, 250_000, 999_999_999] {
            let words = render_number_words(n).unwrap();
            assert_eq!(parse_number_words(&words).unwrap(), Dec::from_int(n as i128), "{words}");
        }
    }

    #[test]
    fn finds_mixed_magnitude() {
        let d = doc("about 2.035 billion tons of waste");
        let nums = find_numbers(&d);
        assert_eq!(nums.len(), 1);
        assert_eq!(nums[0].value, Dec::from_int(2_035_000_000));
        assert_eq!(nums[0].value.to_string(), "2035000000");
        assert_eq!(nums[0].source_form, SourceForm::Mixed);
        assert_eq!(d.slice(nums[0].span).unwrap(), "2.035 billion");
    }

    #[test]
    fn finds_separated_numeral() {
        let d = doc("pay $1,250,000.00 now");
        let nums = find_numbers(&d);
        assert_eq!(nums.len(), 1);
        assert_eq!(nums[0].value.to_string(), "1250000.00");
        assert_eq!(nums[0].source_form, SourceForm::Numeral);
    }

    #[test]
    fn no_numbers_in_plain_text() {
        assert!(find_numbers(&doc("no numbers here")).is_empty());
    }

    #[test]
    fn dotted_section_numbers_skipped() {
        let d = doc("see Section 4.2.2 above");
        assert!(find_numbers(&d).is_empty());
    }

    #[test]
    fn word_run_with_cents_found() {
        let d = doc("Two Hundred Fifty Thousand and No/100 Dollars");
        let nums = find_numbers(&d);
        assert_eq!(nums.len(), 1);
        assert_eq!(nums[0].value, Dec::from_int(250_000));
        assert_eq!(nums[0].value.to_string(), "250000");
        assert_eq!(d.slice(nums[0].span).unwrap(), "Two Hundred Fifty Thousand and No/100");
        assert_eq!(nums[0].source_form, SourceForm::Words);
    }

    #[test]
    fn numeric_cents_fraction_joins_word_run() {
        let d = doc("THIRTY-SIX THOUSAND TWO-HUNDRED SIXTY-SIX AND 2/100");
        let nums = find_numbers(&d);
        assert_eq!(nums.len(), 1);
        assert_eq!(nums[0].value.to_string(), "36266.02");
    }

    #[test]
    fn spans_do_not_overlap() {
        let d = doc("3 million and 2.5 and twenty-one widgets cost 1,100.50 or 7");
        let nums = find_numbers(&d);
        assert!(!nums.is_empty());
        for w in nums.windows(2) {
            assert!(w[0].span.end <= w[1].span.start);
        }
    }
}
