//! Entity-like extractors: companies, geopolitical entities, street
//! addresses, PII, and URLs.
//!
//! The company extractor is a deterministic suffix-anchored tagger: a
//! maximal run of capitalized tokens ending at a company-type suffix
//! ("LP", "L.L.C.") names a company. Addresses are tagged as
//! [number][1-4 name tokens][street suffix] with optional unit and
//! city/state/zip fields.

use std::collections::HashMap;
use std::sync::LazyLock;

use regex::Regex;
use serde_json::json;

use crate::doc::{Annotation, AnnotationKind, Document, Span};
use crate::lexicon::{EntityKind, Lexicon};
use crate::tokens::{tokenize, Token};

/// Lowercased surface form -> canonical form for suffix-style lexicons.
fn canonical_map(lex: &Lexicon, kind: EntityKind) -> HashMap<String, String> {
    let mut map = HashMap::new();
    for e in lex.entries().iter().filter(|e| e.entity_kind == kind) {
        map.insert(e.canonical.to_lowercase(), e.canonical.clone());
        for a in &e.aliases {
            map.insert(a.to_lowercase(), e.canonical.clone());
        }
    }
    map
}

/// Surface forms exactly as written in the lexicon (for lowercase-only
/// aliases like "plc" that are valid suffix tokens without capitals).
fn exact_surfaces(lex: &Lexicon, kind: EntityKind) -> std::collections::HashSet<String> {
    let mut set = std::collections::HashSet::new();
    for e in lex.entries().iter().filter(|e| e.entity_kind == kind) {
        set.insert(e.canonical.clone());
        for a in &e.aliases {
            set.insert(a.clone());
        }
    }
    set
}

fn is_name_token(t: &Token) -> bool {
    let mut chars = t.text.chars();
    chars.next().is_some_and(|c| c.is_uppercase())
        && t.text.chars().all(|c| c.is_alphanumeric() || matches!(c, '&' | '-' | '\'' | '\u{2019}'))
}

const LEADING_NOISE: [&str; 8] = ["the", "and", "between", "by", "of", "a", "an", "to"];

/// Companies: a capitalized or all-caps token run immediately followed by
/// a company-type suffix (optionally comma-separated). The suffix is
/// canonicalized ("L.L.C." -> "LLC") and leading articles/prepositions
/// are excluded from the name.
pub fn get_companies(doc: &Document, suffixes: &Lexicon) -> Vec<Annotation> {
    let suffix_map = canonical_map(suffixes, EntityKind::CompanySuffix);
    let surfaces = exact_surfaces(suffixes, EntityKind::CompanySuffix);
    let tokens = tokenize(doc);
    let mut cands: Vec<(Span, serde_json::Value)> = Vec::new();

    for (i, tok) in tokens.iter().enumerate() {
        let Some(canonical) = suffix_map.get(&tok.lower) else { continue };
        // prose like "a Delaware limited partnership" is not a suffix use
        let capitalized = tok.text.chars().next().is_some_and(char::is_uppercase);
        if !capitalized && !surfaces.contains(&tok.text) {
            continue;
        }
        if i == 0 {
            continue;
        }
        // optional comma between name and suffix
        let mut j = i - 1;
        if tokens[j].text == "," {
            if j == 0 {
                continue;
            }
            j -= 1;
        }
        let run_end = j;
        let mut run_start = run_end + 1;
        while is_name_token(&tokens[run_start - 1]) && !suffix_map.contains_key(&tokens[run_start - 1].lower) {
            run_start -= 1;
            if run_start == 0 {
                break;
            }
        }
        let mut start = run_start;
        while start <= run_end && LEADING_NOISE.contains(&tokens[start].lower.as_str()) {
            start += 1;
        }
        if start > run_end {
            continue;
        }
        let name_span = Span::new(tokens[start].span.start, tokens[run_end].span.end);
        let name = doc.slice(name_span).expect("token spans are valid").to_string();
        let span = Span::new(name_span.start, tok.span.end);
        cands.push((span, json!({ "name": name, "suffix": canonical })));
    }

    // longest match wins when runs overlap
    cands.sort_by(|a, b| (b.0.len(), a.0.start).cmp(&(a.0.len(), b.0.start)));
    let mut taken: Vec<(Span, serde_json::Value)> = Vec::new();
    for c in cands {
        if taken.iter().all(|t| !t.0.overlaps(&c.0)) {
            taken.push(c);
        }
    }
    taken.sort_by_key(|c| (c.0.start, c.0.end));
    taken.into_iter().map(|(span, value)| Annotation::at(doc, AnnotationKind::Company, span, value)).collect()
}

/// Geopolitical entities via lexicon scan, honoring enabled locales.
pub fn get_geoentities(doc: &Document, geo: &Lexicon) -> Vec<Annotation> {
    geo.scan_kind(doc, EntityKind::Geoentity)
        .into_iter()
        .map(|m| {
            Annotation::at(
                doc,
                AnnotationKind::Geoentity,
                m.span,
                json!({
                    "canonical": m.entry.canonical,
                    "locale": m.entry.locale,
                    "attributes": m.entry.attributes,
                }),
            )
            .with_locale(m.entry.locale.clone())
        })
        .collect()
}

static UNIT_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)^,?[\x20\t]+(?P<unit>(?:STE|SUITE|APT|APARTMENT|UNIT|RM|ROOM|FL|FLOOR|#)\.?[\x20\t]*[A-Za-z0-9-]+)")
        .unwrap()
});
static CITY_STATE_ZIP_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?x)^,?[\x20\t]+
          (?P<city>[A-Z][A-Za-z.'-]*(?:[\x20\t][A-Z][A-Za-z.'-]*){0,2})
          ,[\x20\t]*(?P<state>[A-Z]{2})
          (?:[\x20\t]+(?P<zip>[0-9]{5}(?:-[0-9]{4})?))?\b",
    )
    .unwrap()
});

/// Street addresses: `2702 LOVE FIELD DR`, `100 Main Street, Suite 200`.
/// The suffix must terminate a run of one to four name tokens following a
/// leading number; unit and city/state/zip are optional best-effort
/// fields captured from the same line.
pub fn get_addresses(doc: &Document, street_suffixes: &Lexicon) -> Vec<Annotation> {
    let suffix_map = canonical_map(street_suffixes, EntityKind::StreetSuffix);
    let text = doc.text();
    let tokens = tokenize(doc);
    let mut out = Vec::new();

    let number_re = Regex::new(r"^[0-9]{1,6}[A-Za-z]?$").unwrap();
    let mut i = 0;
    while i < tokens.len() {
        if !number_re.is_match(&tokens[i].text) {
            i += 1;
            continue;
        }
        // collect up to four name tokens, then a suffix, all on one line
        let mut j = i + 1;
        let mut name_count = 0;
        let mut hit: Option<usize> = None;
        while j < tokens.len() && name_count < 4 {
            if crosses_newline(doc, tokens[j - 1].span.end, tokens[j].span.start) {
                break;
            }
            let lower = tokens[j].text.trim_end_matches('.').to_lowercase();
            if name_count >= 1 && suffix_map.contains_key(&lower) {
                hit = Some(j);
                break;
            }
            if tokens[j].text.chars().all(|c| c.is_alphanumeric() || matches!(c, '\'' | '-' | '\u{2019}'))
                && tokens[j].text.chars().any(char::is_alphabetic)
                && !suffix_map.contains_key(&lower)
            {
                name_count += 1;
                j += 1;
            } else {
                break;
            }
        }
        let Some(sfx) = hit else {
            i += 1;
            continue;
        };
        let suffix_token = &tokens[sfx];
        let canonical = suffix_map[&suffix_token.text.trim_end_matches('.').to_lowercase()].clone();
        let street_span = Span::new(tokens[i + 1].span.start, tokens[sfx - 1].span.end);
        let street = doc.slice(street_span).expect("token spans are valid").to_string();

        let mut end_char = suffix_token.span.end;
        let mut unit = None;
        let tail_byte = doc.byte_of_char(end_char);
        if let Some(m) = UNIT_RE.captures(&text[tail_byte..]) {
            let u = m.name("unit").unwrap();
            unit = Some(u.as_str().to_string());
            end_char += text[tail_byte..tail_byte + m.get(0).unwrap().end()].chars().count();
        }
        let (mut city, mut state, mut zip) = (None, None, None);
        let tail_byte = doc.byte_of_char(end_char);
        if let Some(m) = CITY_STATE_ZIP_RE.captures(&text[tail_byte..]) {
            city = Some(m.name("city").unwrap().as_str().to_string());
            state = Some(m.name("state").unwrap().as_str().to_string());
            zip = m.name("zip").map(|z| z.as_str().to_string());
            end_char += text[tail_byte..tail_byte + m.get(0).unwrap().end()].chars().count();
        }

        out.push(Annotation::at(
            doc,
            AnnotationKind::Address,
            Span::new(tokens[i].span.start, end_char),
            json!({
                "number": tokens[i].text,
                "street": street,
                "suffix": canonical,
                "unit": unit,
                "city": city,
                "state": state,
                "zip": zip,
            }),
        ));
        i = sfx + 1;
    }
    out
}

fn crosses_newline(doc: &Document, from_char: usize, to_char: usize) -> bool {
    let a = doc.byte_of_char(from_char);
    let b = doc.byte_of_char(to_char);
    doc.text()[a..b].contains('\n')
}

static SSN_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b([0-9]{3})-([0-9]{2})-([0-9]{4})\b").unwrap());
static PHONE_RES: LazyLock<Vec<Regex>> = LazyLock::new(|| {
    vec![
        Regex::new(r"\+1[\x20.-]?\(?[0-9]{3}\)?[\x20.-]?[0-9]{3}[\x20.-][0-9]{4}\b").unwrap(),
        Regex::new(r"\([0-9]{3}\)[\x20\t]?[0-9]{3}-[0-9]{4}\b").unwrap(),
        Regex::new(r"\b[0-9]{3}-[0-9]{3}-[0-9]{4}\b").unwrap(),
    ]
});

/// Mask every digit but the last four.
fn redact_keeping_last4(text: &str) -> String {
    let digit_count = text.chars().filter(|c| c.is_ascii_digit()).count();
    let mut seen = 0;
    text.chars()
        .map(|c| {
            if c.is_ascii_digit() {
                seen += 1;
                if seen + 4 > digit_count {
                    c
                } else {
                    'X'
                }
            } else {
                c
            }
        })
        .collect()
}

/// Social security numbers (excluding 000/666/9xx areas) and US phone
/// numbers. Payload carries a redaction-ready form keeping the last four
/// digits.
pub fn get_pii(doc: &Document) -> Vec<Annotation> {
    let text = doc.text();
    let mut cands: Vec<(Span, serde_json::Value)> = Vec::new();

    for m in SSN_RE.captures_iter(text) {
        let whole = m.get(0).unwrap();
        let area = m.get(1).unwrap().as_str();
        if area == "000" || area == "666" || area.starts_with('9') {
            continue;
        }
        cands.push((
            doc.span_of_bytes(whole.start(), whole.end()),
            json!({ "pii_kind": "ssn", "redacted": redact_keeping_last4(whole.as_str()) }),
        ));
    }
    for re in PHONE_RES.iter() {
        for m in re.find_iter(text) {
            if text[..m.start()].chars().next_back().is_some_and(|c| c.is_ascii_digit() || c == '-') {
                continue;
            }
            cands.push((
                doc.span_of_bytes(m.start(), m.end()),
                json!({ "pii_kind": "phone", "redacted": redact_keeping_last4(m.as_str()) }),
            ));
        }
    }

    cands.sort_by(|a, b| (b.0.len(), a.0.start).cmp(&(a.0.len(), b.0.start)));
    let mut taken: Vec<(Span, serde_json::Value)> = Vec::new();
    for c in cands {
        if taken.iter().all(|t| !t.0.overlaps(&c.0)) {
            taken.push(c);
        }
    }
    taken.sort_by_key(|c| (c.0.start, c.0.end));
    taken.into_iter().map(|(span, value)| Annotation::at(doc, AnnotationKind::Pii, span, value)).collect()
}

/// Replace PII matches with fixed-width masks: alphanumeric characters in
/// the given spans become 'X', everything else is kept, so the document
/// keeps its length and layout.
pub fn redact_text(doc: &Document, spans: &[Span]) -> String {
    doc.text()
        .chars()
        .enumerate()
        .map(|(i, c)| {
            if spans.iter().any(|s| s.start <= i && i < s.end) && c.is_alphanumeric() {
                'X'
            } else {
                c
            }
        })
        .collect()
}

static URL_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r#"(?i)\b(?:(?:https?|ftp)://[^\s<>"'\)\]]+|www\.[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)+(?:/[^\s<>"'\)\]]*)?)"#)
        .unwrap()
});

/// Scheme- or www-prefixed URLs; trailing sentence punctuation stays out
/// of the span.
pub fn get_urls(doc: &Document) -> Vec<Annotation> {
    let text = doc.text();
    let mut out = Vec::new();
    for m in URL_RE.find_iter(text) {
        let mut end = m.end();
        while end > m.start() {
            let last = text[..end].chars().next_back().unwrap();
            if matches!(last, '.' | ',' | ';' | ':' | '!' | '?' | '\'' | '"' | '\u{201D}' | '\u{2019}') {
                end -= last.len_utf8();
            } else {
                break;
            }
        }
        if end <= m.start() {
            continue;
        }
        let span = doc.span_of_bytes(m.start(), end);
        let url = &text[m.start()..end];
        out.push(Annotation::at(doc, AnnotationKind::Url, span, json!({ "url": url })));
    }
    out
}
