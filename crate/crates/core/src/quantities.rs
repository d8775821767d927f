//! Typed quantity extractors built on the number engine: money, generic
//! amounts, percents/rates, ratios, distances, durations.

use std::sync::LazyLock;

use regex::Regex;
use serde_json::json;

use crate::decimal::Dec;
use crate::doc::{Annotation, AnnotationKind, Document, Span};
use crate::numbers::{find_numbers, NumberValue, SourceForm};

/// ISO-4217 codes extracted by default.
pub const CURRENCIES: [&str; 6] = ["USD", "EUR", "GBP", "JPY", "CNY", "INR"];

fn symbol_currency(c: char) -> Option<&'static str> {
    Some(match c {
        '$' => "USD",
        '\u{20AC}' => "EUR",
        '\u{00A3}' => "GBP",
        '\u{00A5}' => "JPY", // CNY when a "CN" context token precedes
        '\u{20B9}' => "INR",
        _ => return None,
    })
}

static CURRENCY_WORD_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)^[\x20\t]+(?P<word>pounds?[\x20\t]+sterling|dollars?|euros?|yen|yuan|renminbi|rupees?)\b",
    )
    .unwrap()
});
static CURRENCY_CODE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?P<code>USD|EUR|GBP|JPY|CNY|RMB|INR)[\x20\t]$").unwrap());

fn currency_for_word(word: &str) -> &'static str {
    let w = word.to_lowercase();
    if w.starts_with("dollar") {
        "USD"
    } else if w.starts_with("euro") {
        "EUR"
    } else if w.starts_with("pound") {
        "GBP"
    } else if w == "yen" {
        "JPY"
    } else if w == "yuan" || w == "renminbi" {
        "CNY"
    } else {
        "INR"
    }
}

/// Monetary amounts: `$5`, `ten Euros`, `USD 100`, and spelled-out forms
/// with parenthetical numeral restatements. Word and numeral forms of the
/// same amount are both emitted, in document order.
pub fn get_money(doc: &Document) -> Vec<Annotation> {
    let text = doc.text();
    let mut out = Vec::new();
    for num in find_numbers(doc) {
        let start_byte = doc.byte_of_char(num.span.start);
        let end_byte = doc.byte_of_char(num.span.end);

        // symbol + numeral: "$1,250,000.00"
        let before = &text[..start_byte];
        let sym = before.chars().next_back().filter(|c| symbol_currency(*c).is_some()).map(|c| (c, 0));
        let sym = sym.or_else(|| {
            let trimmed = before.strip_suffix(' ')?;
            trimmed.chars().next_back().filter(|c| symbol_currency(*c).is_some()).map(|c| (c, 1))
        });
        if let Some((c, gap)) = sym {
            let mut currency = symbol_currency(c).unwrap();
            let sym_start = start_byte - gap - c.len_utf8();
            if c == '\u{00A5}' {
                let head = text[..sym_start].trim_end();
                if head.ends_with("CN") || head.ends_with("CNY") {
                    currency = "CNY";
                }
            }
            push_money(doc, &mut out, doc.span_of_bytes(sym_start, end_byte), &num, currency);
            continue;
        }

        // number + currency word: "ten Euros", "... and No/100 Dollars"
        if let Some(m) = CURRENCY_WORD_RE.captures(&text[end_byte..]) {
            let word = m.name("word").unwrap();
            let currency = currency_for_word(word.as_str());
            push_money(doc, &mut out, doc.span_of_bytes(start_byte, end_byte + word.end()), &num, currency);
            continue;
        }

        // currency code + numeral: "USD 100"
        if let Some(m) = CURRENCY_CODE_RE.captures(&text[..start_byte]) {
            let code = m.name("code").unwrap();
            let currency = if code.as_str() == "RMB" { "CNY" } else { code.as_str() };
            push_money(doc, &mut out, doc.span_of_bytes(code.start(), end_byte), &num, currency);
        }
    }
    out.sort_by_key(|a| (a.span.start, a.span.end));
    out
}

fn push_money(doc: &Document, out: &mut Vec<Annotation>, span: Span, num: &NumberValue, currency: &str) {
    out.push(Annotation::at(
        doc,
        AnnotationKind::Money,
        span,
        json!({ "amount": num.value.to_string(), "currency": currency }),
    ));
}

static UNIT_WORD_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[\x20\t]+([A-Za-z]+)\b").unwrap());

const UNIT_STOPWORDS: [&str; 9] = ["and", "or", "of", "to", "the", "a", "an", "per", "in"];

/// All numbers in the document, with an optional trailing unit word
/// captured as raw text. Standalone form of the amount extractor; in a
/// pipeline, numbers consumed by more specific extractors are excluded
/// via [`get_amounts_filtered`].
pub fn get_amounts(doc: &Document) -> Vec<Annotation> {
    get_amounts_filtered(doc, &[])
}

/// Amounts excluding any number whose span overlaps `consumed` (spans
/// claimed by money/percent/ratio/distance/duration annotations).
pub fn get_amounts_filtered(doc: &Document, consumed: &[Span]) -> Vec<Annotation> {
    let text = doc.text();
    let mut out = Vec::new();
    for num in find_numbers(doc) {
        if consumed.iter().any(|s| s.overlaps(&num.span)) {
            continue;
        }
        let end_byte = doc.byte_of_char(num.span.end);
        let unit_text = UNIT_WORD_RE
            .captures(&text[end_byte..])
            .map(|m| m.get(1).unwrap().as_str())
            .filter(|w| !UNIT_STOPWORDS.contains(&w.to_lowercase().as_str()));
        let source_form = match num.source_form {
            SourceForm::Numeral => "numeral",
            SourceForm::Words => "words",
            SourceForm::Mixed => "mixed",
        };
        out.push(Annotation::at(
            doc,
            AnnotationKind::Amount,
            num.span,
            json!({
                "value": num.value.to_string(),
                "source_form": source_form,
                "unit_text": unit_text,
            }),
        ));
    }
    out
}

static PERCENT_UNIT_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)^(?:[\x20\t]*(?P<pct>%)|[\x20\t]+(?P<word>percent|bps|basis[\x20\t]+points?))").unwrap());

/// Percents and rates: `10.5%`, `ten percent`, `50 bps`. The payload
/// carries the magnitude, the unit, and the equivalent fraction
/// (magnitude/100 for percent, magnitude/10000 for bps).
pub fn get_percents(doc: &Document) -> Vec<Annotation> {
    let text = doc.text();
    let mut out = Vec::new();
    for num in find_numbers(doc) {
        let end_byte = doc.byte_of_char(num.span.end);
        let Some(m) = PERCENT_UNIT_RE.captures(&text[end_byte..]) else { continue };
        let (unit, factor, end) = match (m.name("pct"), m.name("word")) {
            (Some(p), _) => ("percent", Dec::new(1, 2), p.end()),
            (_, Some(w)) => {
                let lower = w.as_str().to_lowercase();
                if lower == "percent" {
                    ("percent", Dec::new(1, 2), w.end())
                } else {
                    ("bps", Dec::new(1, 4), w.end())
                }
            }
            _ => unreachable!(),
        };
        let Some(fraction) = num.value.mul(&factor) else { continue };
        out.push(Annotation::at(
            doc,
            AnnotationKind::Percent,
            doc.span_of_bytes(doc.byte_of_char(num.span.start), end_byte + end),
            json!({
                "magnitude": num.value.to_string(),
                "unit": unit,
                "fraction": fraction.normalize().to_string(),
            }),
        ));
    }
    out.sort_by_key(|a| (a.span.start, a.span.end));
    out
}

static COLON_RATIO_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"([0-9]{1,6}):([0-9]{1,6})").unwrap());
static TIME_SUFFIX_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)^[\x20\t]*[ap]\.?m\.?\b").unwrap());

/// Ratios: `3:1` and `four to three`. Times of day are rejected when the
/// match is followed by AM/PM or preceded by "at".
pub fn get_ratios(doc: &Document) -> Vec<Annotation> {
    let text = doc.text();
    let mut out = Vec::new();

    for m in COLON_RATIO_RE.captures_iter(text) {
        let whole = m.get(0).unwrap();
        if text[..whole.start()].chars().next_back().is_some_and(|c| c.is_alphanumeric() || c == ':')
            || text[whole.end()..].chars().next().is_some_and(|c| c.is_alphanumeric() || c == ':')
        {
            continue;
        }
        if TIME_SUFFIX_RE.is_match(&text[whole.end()..]) {
            continue;
        }
        let head = text[..whole.start()].trim_end();
        let preceded_by_at = head.to_lowercase().ends_with("at")
            && head[..head.len() - 2].chars().next_back().map_or(true, |c| !c.is_alphanumeric());
        if preceded_by_at {
            continue;
        }
        let left = Dec::parse(m.get(1).unwrap().as_str()).unwrap();
        let right = Dec::parse(m.get(2).unwrap().as_str()).unwrap();
        push_ratio(doc, &mut out, doc.span_of_bytes(whole.start(), whole.end()), left, right);
    }

    // word-number "to" word-number
    let words: Vec<NumberValue> =
        find_numbers(doc).into_iter().filter(|n| n.source_form == SourceForm::Words).collect();
    for pair in words.windows(2) {
        let gap_start = doc.byte_of_char(pair[0].span.end);
        let gap_end = doc.byte_of_char(pair[1].span.start);
        let gap = &text[gap_start..gap_end];
        if gap.trim().eq_ignore_ascii_case("to") && !gap.trim().is_empty() {
            let span = Span::new(pair[0].span.start, pair[1].span.end);
            push_ratio(doc, &mut out, span, pair[0].value, pair[1].value);
        }
    }
    out.sort_by_key(|a| (a.span.start, a.span.end));
    out
}

fn push_ratio(doc: &Document, out: &mut Vec<Annotation>, span: Span, left: Dec, right: Dec) {
    if right.is_zero() {
        return;
    }
    let quotient = left.div_dp(&right, 12).map(|q| q.normalize());
    let Some(quotient) = quotient else { return };
    out.push(Annotation::at(
        doc,
        AnnotationKind::Ratio,
        span,
        json!({
            "left": left.to_string(),
            "right": right.to_string(),
            "quotient": quotient.to_string(),
        }),
    ));
}

fn distance_unit(word: &str) -> Option<&'static str> {
    Some(match word.to_lowercase().as_str() {
        "mile" | "miles" | "mi" => "mile",
        "kilometer" | "kilometers" | "kilometre" | "kilometres" | "km" => "kilometer",
        "meter" | "meters" | "metre" | "metres" | "m" => "meter",
        "foot" | "feet" | "ft" => "foot",
        "yard" | "yards" | "yd" => "yard",
        "inch" | "inches" | "in" => "inch",
        _ => return None,
    })
}

fn duration_unit(word: &str) -> Option<(&'static str, Option<u32>)> {
    Some(match word.to_lowercase().as_str() {
        "second" | "seconds" => ("second", None),
        "minute" | "minutes" => ("minute", None),
        "hour" | "hours" => ("hour", None),
        "day" | "days" => ("day", Some(1)),
        "week" | "weeks" => ("week", Some(7)),
        "month" | "months" => ("month", Some(30)),
        "quarter" | "quarters" => ("quarter", Some(91)),
        "year" | "years" | "anniversary" | "anniversaries" => ("year", Some(365)),
        _ => return None,
    })
}

fn number_with_unit<F, T>(doc: &Document, classify: F) -> Vec<(NumberValue, T, usize)>
where
    F: Fn(&str) -> Option<T>,
{
    let text = doc.text();
    let mut out = Vec::new();
    for num in find_numbers(doc) {
        let end_byte = doc.byte_of_char(num.span.end);
        let Some(m) = UNIT_WORD_RE.captures(&text[end_byte..]) else { continue };
        let word = m.get(1).unwrap();
        if let Some(unit) = classify(word.as_str()) {
            out.push((num, unit, end_byte + word.end()));
        }
    }
    out
}

/// Distances: `fifteen miles`, `30.5 km`; units canonicalized.
pub fn get_distances(doc: &Document) -> Vec<Annotation> {
    number_with_unit(doc, distance_unit)
        .into_iter()
        .map(|(num, unit, end_byte)| {
            Annotation::at(
                doc,
                AnnotationKind::Distance,
                Span::new(num.span.start, doc.char_of_byte(end_byte)),
                json!({ "value": num.value.to_string(), "unit": unit }),
            )
        })
        .collect()
}

/// Durations: `ten years`, `120 seconds`. Units of a day or longer carry
/// `normalized_days` under the day=1, week=7, month=30, quarter=91,
/// year=365 convention; sub-day units leave it null.
pub fn get_durations(doc: &Document) -> Vec<Annotation> {
    number_with_unit(doc, duration_unit)
        .into_iter()
        .map(|(num, (unit, days), end_byte)| {
            let normalized = days.and_then(|d| num.value.mul_int(d as i128)).map(|d| d.normalize().to_string());
            Annotation::at(
                doc,
                AnnotationKind::Duration,
                Span::new(num.span.start, doc.char_of_byte(end_byte)),
                json!({ "value": num.value.to_string(), "unit": unit, "normalized_days": normalized }),
            )
        })
        .collect()
}
