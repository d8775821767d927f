//! Legal-structure extractors: citations, regulations, courts,
//! definitions, conditional statements, constraints, copyrights,
//! trademarks.
//!
//! Condition/constraint matching is sentence-scoped and word-bounded;
//! the longest trigger wins at a position ("unless and until" beats
//! "unless"). Trigger lists are data (JSON) so users can extend them
//! without rebuilds.

use std::collections::HashSet;
use std::sync::LazyLock;

use aho_corasick::{AhoCorasick, MatchKind};
use regex::Regex;
use serde::Deserialize;
use serde_json::json;

use crate::data;
use crate::doc::{Annotation, AnnotationKind, Document, Span};
use crate::error::{LexError, Result};
use crate::lexicon::{EntityKind, Lexicon};
use crate::segment::{sentence_spans, SentenceModel};

/// One configurable trigger. `negatable` admits the "not ..."/"... not"/
/// "no ..." variants in addition to the bare phrase.
#[derive(Debug, Clone, Deserialize)]
pub struct TriggerDef {
    pub text: String,
    #[serde(default)]
    pub negatable: bool,
}

#[derive(Debug, Deserialize)]
struct TriggerFile {
    triggers: Vec<TriggerDef>,
}

/// A compiled trigger list for sentence-scoped phrase matching.
#[derive(Debug)]
pub struct TriggerList {
    expanded: Vec<String>,
    matcher: AhoCorasick,
}

static CONDITIONS: LazyLock<TriggerList> = LazyLock::new(|| {
    TriggerList::from_json(data::CONDITION_TRIGGERS_JSON).expect("bundled condition triggers are well-formed")
});
static CONSTRAINTS: LazyLock<TriggerList> = LazyLock::new(|| {
    TriggerList::from_json(data::CONSTRAINT_TRIGGERS_JSON).expect("bundled constraint triggers are well-formed")
});

impl TriggerList {
    pub fn from_json(json: &str) -> Result<Self> {
        let file: TriggerFile = serde_json::from_str(json)
            .map_err(|e| LexError::Schema { line: e.line() as u64, message: e.to_string() })?;
        if file.triggers.iter().any(|t| t.text.trim().is_empty()) {
            return Err(LexError::Schema { line: 0, message: "trigger text must be non-empty".into() });
        }
        let mut expanded: Vec<String> = Vec::new();
        let mut seen = HashSet::new();
        for def in &file.triggers {
            let base = def.text.to_lowercase();
            let mut forms = vec![base.clone()];
            if def.negatable {
                forms.push(format!("not {base}"));
                forms.push(format!("{base} not"));
                forms.push(format!("no {base}"));
            }
            for f in forms {
                if seen.insert(f.clone()) {
                    expanded.push(f);
                }
            }
        }
        let matcher = AhoCorasick::builder()
            .match_kind(MatchKind::Standard)
            .build(&expanded)
            .expect("trigger automaton construction cannot fail");
        Ok(TriggerList { expanded, matcher })
    }

    pub fn conditions_default() -> &'static TriggerList {
        &CONDITIONS
    }

    pub fn constraints_default() -> &'static TriggerList {
        &CONSTRAINTS
    }

    /// Every phrase the list recognizes, after negation expansion.
    pub fn expanded_triggers(&self) -> &[String] {
        &self.expanded
    }

    /// Word-bounded, longest-wins matches over a folded sentence. Returns
    /// byte ranges into `folded` plus the matched pattern index.
    fn find(&self, folded: &str) -> Vec<(usize, usize, usize)> {
        let mut cands: Vec<(usize, usize, usize)> = self
            .matcher
            .find_overlapping_iter(folded)
            .filter(|m| {
                let before_ok = folded[..m.start()].chars().next_back().map_or(true, |c| !c.is_alphanumeric());
                let after_ok = folded[m.end()..].chars().next().map_or(true, |c| !c.is_alphanumeric());
                before_ok && after_ok
            })
            .map(|m| (m.start(), m.end(), m.pattern().as_usize()))
            .collect();
        cands.sort_by(|a, b| ((b.1 - b.0), a.0, a.2).cmp(&((a.1 - a.0), b.0, b.2)));
        let mut accepted: Vec<(usize, usize, usize)> = Vec::new();
        for c in cands {
            if accepted.iter().all(|t| c.1 <= t.0 || t.1 <= c.0) {
                accepted.push(c);
            }
        }
        accepted.sort();
        accepted
    }
}

/// Per-char lowercase fold preserving scalar count.
fn fold_chars(s: &str) -> String {
    s.chars().map(|c| c.to_lowercase().next().unwrap()).collect()
}

fn trigger_annotations(doc: &Document, list: &TriggerList, kind: AnnotationKind) -> Vec<Annotation> {
    let mut out = Vec::new();
    for sent in sentence_spans(doc, SentenceModel::default_english()) {
        let sentence = doc.slice(sent).expect("sentence spans are valid");
        let folded = fold_chars(sentence);
        let starts: Vec<usize> = folded.char_indices().map(|(b, _)| b).chain([folded.len()]).collect();
        for (bs, be, pat) in list.find(&folded) {
            let cs = starts.binary_search(&bs).expect("match starts on a char boundary");
            let ce = starts.binary_search(&be).expect("match ends on a char boundary");
            let pre = folded[..bs].trim();
            let post_raw = &folded[be..];
            let post_end = post_raw.find([',', ';', ':', '.', '!', '?']).unwrap_or(post_raw.len());
            let post = post_raw[..post_end].trim();
            let span = Span::new(sent.start + cs, sent.start + ce);
            out.push(Annotation::at(
                doc,
                kind,
                span,
                json!({
                    "trigger": list.expanded[pat],
                    "pre_context": pre,
                    "post_context": post,
                }),
            ));
        }
    }
    out.sort_by_key(|a| (a.span.start, a.span.end));
    out
}

/// Conditional statements ("subject to ...", "unless and until ...").
pub fn get_conditions(doc: &Document) -> Vec<Annotation> {
    trigger_annotations(doc, TriggerList::conditions_default(), AnnotationKind::Condition)
}

/// Constraint statements ("at most", "no less than"), with lowercased
/// pre/post contexts clipped to the containing sentence and clause.
pub fn get_constraints(doc: &Document) -> Vec<Annotation> {
    trigger_annotations(doc, TriggerList::constraints_default(), AnnotationKind::Constraint)
}

/// Court references via lexicon scan.
pub fn get_courts(doc: &Document, courts: &Lexicon) -> Vec<Annotation> {
    courts
        .scan_kind(doc, EntityKind::Court)
        .into_iter()
        .map(|m| {
            Annotation::at(
                doc,
                AnnotationKind::Court,
                m.span,
                json!({
                    "canonical": m.entry.canonical,
                    "entity_kind": "court",
                    "locale": m.entry.locale,
                }),
            )
            .with_locale(m.entry.locale.clone())
        })
        .collect()
}

/// `volume reporter page` and `year reporter page` citations, with the
/// reporter validated against the reporter lexicon.
pub fn get_citations(doc: &Document, reporters: &Lexicon) -> Vec<Annotation> {
    let text = doc.text();
    let mut cands: Vec<(Span, serde_json::Value)> = Vec::new();
    for m in reporters.scan_kind(doc, EntityKind::Reporter) {
        let rb_start = doc.byte_of_char(m.span.start);
        let rb_end = doc.byte_of_char(m.span.end);
        let Some((first, first_start)) = integer_before(text, rb_start) else { continue };
        let Some((page, page_end)) = integer_after(text, rb_end) else { continue };
        if page == 0 {
            continue;
        }
        let span = doc.span_of_bytes(first_start, page_end);
        let value = if (1600..=2100).contains(&first) {
            json!({
                "volume": null,
                "reporter": m.entry.canonical,
                "page": page,
                "year": first,
            })
        } else if first >= 1 {
            json!({
                "volume": first,
                "reporter": m.entry.canonical,
                "page": page,
                "year": null,
            })
        } else {
            continue;
        };
        cands.push((span, value));
    }
    resolve_longest_annotations(doc, AnnotationKind::Citation, cands)
}

fn integer_before(text: &str, byte: usize) -> Option<(u64, usize)> {
    let head = text[..byte].trim_end_matches(|c: char| c == ' ' || c == '\t');
    if head.len() == byte && byte > 0 {
        return None; // no whitespace between the number and the reporter
    }
    let digits_start = head
        .char_indices()
        .rev()
        .find(|(_, c)| !c.is_ascii_digit())
        .map_or(0, |(p, c)| p + c.len_utf8());
    let digits = &head[digits_start..];
    if digits.is_empty() || digits.len() > 4 {
        return None;
    }
    // reject "x123 U.S." style runs
    if head[..digits_start].chars().next_back().is_some_and(|c| c.is_alphanumeric()) {
        return None;
    }
    Some((digits.parse().ok()?, digits_start))
}

fn integer_after(text: &str, byte: usize) -> Option<(u64, usize)> {
    let rest = &text[byte..];
    let trimmed = rest.trim_start_matches(|c: char| c == ' ' || c == '\t');
    if trimmed.len() == rest.len() && !rest.is_empty() {
        return None;
    }
    let ws = rest.len() - trimmed.len();
    let digits_len = trimmed.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits_len == 0 || digits_len > 6 {
        return None;
    }
    if trimmed[digits_len..].chars().next().is_some_and(|c| c.is_alphanumeric()) {
        return None;
    }
    let value: u64 = trimmed[..digits_len].parse().ok()?;
    Some((value, byte + ws + digits_len))
}

fn resolve_longest_annotations(
    doc: &Document,
    kind: AnnotationKind,
    mut cands: Vec<(Span, serde_json::Value)>,
) -> Vec<Annotation> {
    cands.sort_by(|a, b| (b.0.len(), a.0.start).cmp(&(a.0.len(), b.0.start)));
    let mut taken: Vec<(Span, serde_json::Value)> = Vec::new();
    for (span, value) in cands {
        if taken.iter().all(|(t, _)| !t.overlaps(&span)) {
            taken.push((span, value));
        }
    }
    taken.sort_by_key(|(s, _)| (s.start, s.end));
    taken.into_iter().map(|(span, value)| Annotation::at(doc, kind, span, value)).collect()
}

static USC_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"([0-9]+)\s+U\.? ?S\.? ?C\.?(?:A\.?)?\s*(?:\u{00A7}+\s*)?([0-9]+)").unwrap());
static CFR_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"([0-9]+)\s+C\.? ?F\.? ?R\.?\s*(?:\u{00A7}+\s*|[Pp]arts?\s+)?([0-9]+)").unwrap());
static PUBL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"Pub(?:\.|lic)?\s*L(?:\.|aw)?\s*(?:No\.?\s*)?([0-9]+)[-\u{2013}]([0-9]+)").unwrap());
static SECTION_AFTER_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*(?:\u{00A7}+\s*)?([0-9]+)").unwrap());

/// Strip "§" and ".", collapse whitespace.
fn normalize_regulation(s: &str) -> String {
    let cleaned: String = s.chars().filter(|c| *c != '\u{00A7}' && *c != '.').collect();
    cleaned.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Regulatory references: `N CFR N`, `N U.S.C. §§N`, `Pub. L. N-N`, and
/// state-code citations from the lexicon. Output is deduplicated by the
/// normalized string within a document, keeping the first occurrence.
pub fn get_regulations(doc: &Document, state_codes: &Lexicon) -> Vec<Annotation> {
    let text = doc.text();
    let mut cands: Vec<(Span, String, String)> = Vec::new();

    for m in USC_RE.captures_iter(text) {
        let whole = m.get(0).unwrap();
        let (title, sec) = (m.get(1).unwrap().as_str(), m.get(2).unwrap().as_str());
        cands.push((
            doc.span_of_bytes(whole.start(), whole.end()),
            "United States Code".to_string(),
            format!("{title} USC {sec}"),
        ));
    }
    for m in CFR_RE.captures_iter(text) {
        let whole = m.get(0).unwrap();
        let (title, sec) = (m.get(1).unwrap().as_str(), m.get(2).unwrap().as_str());
        cands.push((
            doc.span_of_bytes(whole.start(), whole.end()),
            "Code of Federal Regulations".to_string(),
            format!("{title} CFR {sec}"),
        ));
    }
    for m in PUBL_RE.captures_iter(text) {
        let whole = m.get(0).unwrap();
        let (a, b) = (m.get(1).unwrap().as_str(), m.get(2).unwrap().as_str());
        cands.push((
            doc.span_of_bytes(whole.start(), whole.end()),
            "Public Law".to_string(),
            format!("Pub L {a}-{b}"),
        ));
    }
    for m in state_codes.scan_kind(doc, EntityKind::StateCode) {
        let code_name = m.entry.attributes.get("code_name").cloned().unwrap_or_else(|| m.entry.canonical.clone());
        let match_end_byte = doc.byte_of_char(m.span.end);
        let (span, cited) = match SECTION_AFTER_RE.captures(&text[match_end_byte..]) {
            Some(sec) => {
                let whole = sec.get(0).unwrap();
                let span = Span::new(m.span.start, m.span.end + text[match_end_byte..match_end_byte + whole.end()].chars().count());
                (span, format!("{} {}", m.entry.canonical, sec.get(1).unwrap().as_str()))
            }
            None => (m.span, m.entry.canonical.clone()),
        };
        cands.push((span, code_name, normalize_regulation(&cited)));
    }

    cands.sort_by(|a, b| (b.0.len(), a.0.start).cmp(&(a.0.len(), b.0.start)));
    let mut taken: Vec<(Span, String, String)> = Vec::new();
    for c in cands {
        if taken.iter().all(|t| !t.0.overlaps(&c.0)) {
            taken.push(c);
        }
    }
    taken.sort_by_key(|c| (c.0.start, c.0.end));
    let mut seen = HashSet::new();
    taken
        .into_iter()
        .filter(|(_, _, normalized)| seen.insert(normalized.clone()))
        .map(|(span, code_name, normalized)| {
            Annotation::at(
                doc,
                AnnotationKind::Regulation,
                span,
                json!({ "code_name": code_name, "normalized": normalized }),
            )
        })
        .collect()
}

const QUOTE_OPEN: &str = "\"\u{201C}\u{2018}'";
const QUOTE_CLOSE: &str = "\"\u{201D}\u{2019}'";

static PAREN_DEF_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r#"\(\s*(?:(?P<demo>this)\s+|the\s+)?[{QUOTE_OPEN}](?P<term>[^"\u{{201C}}\u{{201D}}]{{1,80}}?)[{QUOTE_CLOSE}]\s*\)"#
    ))
    .unwrap()
});
static SHALL_MEAN_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r#"(?:[{QUOTE_OPEN}](?P<qterm>[^"\u{{201C}}\u{{201D}}]{{1,80}}?)[{QUOTE_CLOSE}]|(?P<bterm>[A-Z][A-Za-z0-9-]*(?:\s+[A-Z][A-Za-z0-9-]*){{0,5}}))\s+shall\s+mean\b"#
    ))
    .unwrap()
});
static DEFINED_AS_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r#"(?:[{QUOTE_OPEN}](?P<qterm>[^"\u{{201C}}\u{{201D}}]{{1,80}}?)[{QUOTE_CLOSE}]|(?P<bterm>[A-Z][A-Za-z0-9-]*(?:\s+[A-Z][A-Za-z0-9-]*){{0,5}}))\s+is\s+defined\s+as\b"#
    ))
    .unwrap()
});

/// A defined term is a capitalized phrase of at most six words.
fn valid_term(term: &str) -> bool {
    let words: Vec<&str> = term.split_whitespace().collect();
    !words.is_empty()
        && words.len() <= 6
        && words.iter().all(|w| w.chars().next().is_some_and(char::is_uppercase))
}

/// First word-bounded occurrence of `term` at or after byte `from`.
fn find_word_bounded(text: &str, term: &str, from: usize) -> Option<usize> {
    let mut search = from;
    while let Some(rel) = text[search..].find(term) {
        let start = search + rel;
        let end = start + term.len();
        let before_ok = text[..start].chars().next_back().map_or(true, |c| !c.is_alphanumeric());
        let after_ok = text[end..].chars().next().map_or(true, |c| !c.is_alphanumeric());
        if before_ok && after_ok {
            return Some(start);
        }
        search = start + term.chars().next().map_or(1, char::len_utf8);
    }
    None
}

struct DefCandidate {
    term: String,
    trigger: &'static str,
    anchor_start: usize, // bytes
    anchor_end: usize,
}

/// Defined terms from three trigger families: `"Term" shall mean`,
/// `... is defined as ...`, and parenthetical quoted terms
/// `(the "Term")`. The demonstrative form `(this "Term")` never defines.
///
/// Each definition is anchored at the term's first standalone mention
/// after its defining trigger (the quoted mention itself when the term is
/// never reused), and the list is ordered by those anchors; duplicates by
/// term string keep the first. This ordering reproduces the reference
/// outputs the extractor is validated against.
pub fn get_definitions(doc: &Document) -> Vec<Annotation> {
    let text = doc.text();
    let mut cands: Vec<DefCandidate> = Vec::new();

    for sent in sentence_spans(doc, SentenceModel::default_english()) {
        let sb = doc.byte_of_char(sent.start);
        let se = doc.byte_of_char(sent.end);
        let sentence = &text[sb..se];

        for m in PAREN_DEF_RE.captures_iter(sentence) {
            if m.name("demo").is_some() {
                continue;
            }
            let term_match = m.name("term").unwrap();
            let term = term_match.as_str().trim();
            if !valid_term(term) {
                continue;
            }
            let offset = term_match.as_str().find(term).unwrap_or(0);
            cands.push(DefCandidate {
                term: term.to_string(),
                trigger: "quoted_parenthetical",
                anchor_start: sb + term_match.start() + offset,
                anchor_end: sb + term_match.start() + offset + term.len(),
            });
        }
        for (re, trigger) in [(&*SHALL_MEAN_RE, "shall_mean"), (&*DEFINED_AS_RE, "defined_as")] {
            for m in re.captures_iter(sentence) {
                let term_match = m.name("qterm").or_else(|| m.name("bterm")).unwrap();
                let term = term_match.as_str().trim();
                if !valid_term(term) {
                    continue;
                }
                let trigger_end = sb + m.get(0).unwrap().end();
                let (anchor_start, anchor_end) = match find_word_bounded(text, term, trigger_end) {
                    Some(s) => (s, s + term.len()),
                    None => {
                        let offset = term_match.as_str().find(term).unwrap_or(0);
                        let s = sb + term_match.start() + offset;
                        (s, s + term.len())
                    }
                };
                cands.push(DefCandidate { term: term.to_string(), trigger, anchor_start, anchor_end });
            }
        }
    }

    cands.sort_by_key(|c| (c.anchor_start, c.anchor_end));
    let mut seen = HashSet::new();
    cands
        .into_iter()
        .filter(|c| seen.insert(c.term.clone()))
        .map(|c| {
            Annotation::at(
                doc,
                AnnotationKind::Definition,
                doc.span_of_bytes(c.anchor_start, c.anchor_end),
                json!({ "term": c.term, "trigger": c.trigger }),
            )
        })
        .collect()
}

static COPYRIGHT_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?x)
        (?P<s1>\u{00A9}|\(\s*[Cc]\s*\))?[\x20\t]*
        (?P<word>[Cc]opyright|COPYRIGHT)?[\x20\t]*
        (?P<s2>\u{00A9}|\(\s*[Cc]\s*\))?[\x20\t]*
        (?P<y1>(?:18|19|20)[0-9]{2})(?:[\x20\t]*[-\u{2013}][\x20\t]*(?P<y2>(?:18|19|20)[0-9]{2}))?[\x20\t]+
        (?P<holder>[A-Z][A-Za-z0-9&'\u{2019}.-]*(?:[\x20\t][A-Z][A-Za-z0-9&'\u{2019}.-]*)*)",
    )
    .unwrap()
});

/// Copyright lines: a sign and/or the word, a year or year range, and a
/// capitalized holder phrase.
pub fn get_copyrights(doc: &Document) -> Vec<Annotation> {
    let text = doc.text();
    let mut out = Vec::new();
    for m in COPYRIGHT_RE.captures_iter(text) {
        let sign_present = m.name("s1").is_some() || m.name("s2").is_some();
        if !sign_present && m.name("word").is_none() {
            continue;
        }
        let holder_match = m.name("holder").unwrap();
        let mut holder = holder_match.as_str();
        // the holder run stops at a sentence-ending word
        if let Some(cut) = holder.find(". ") {
            holder = &holder[..cut];
        }
        let holder_clean = holder.trim_end_matches('.').trim();
        if holder_clean.is_empty() {
            continue;
        }
        let year: u32 = m.name("y1").unwrap().as_str().parse().unwrap();
        let year_end: Option<u32> = m.name("y2").map(|y| y.as_str().parse().unwrap());
        let start = m.get(0).unwrap().start();
        let end = holder_match.start() + holder.trim_end().len();
        out.push(Annotation::at(
            doc,
            AnnotationKind::Copyright,
            doc.span_of_bytes(start, end),
            json!({
                "sign_present": sign_present,
                "year": year,
                "year_end": year_end,
                "holder": holder_clean,
            }),
        ));
    }
    out.sort_by_key(|a| (a.span.start, a.span.end));
    out
}

static TRADEMARK_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?P<mark>[A-Z][A-Za-z0-9&'-]*(?:[ \t][A-Z][A-Za-z0-9&'-]*){0,3})[ \t]?(?P<sym>\(R\)|\(TM\)|\u{00AE}|\u{2122})",
    )
    .unwrap()
});

/// Trademark references: a capitalized mark immediately followed by (R),
/// (TM), ®, or ™.
pub fn get_trademarks(doc: &Document) -> Vec<Annotation> {
    let text = doc.text();
    let cands: Vec<(Span, serde_json::Value)> = TRADEMARK_RE
        .captures_iter(text)
        .map(|m| {
            let whole = m.get(0).unwrap();
            let symbol = match m.name("sym").unwrap().as_str() {
                "(R)" | "\u{00AE}" => "R",
                _ => "TM",
            };
            (
                doc.span_of_bytes(whole.start(), whole.end()),
                json!({ "mark_text": m.name("mark").unwrap().as_str(), "symbol": symbol }),
            )
        })
        .collect();
    resolve_longest_annotations(doc, AnnotationKind::Trademark, cands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{EXAMPLE1, EXAMPLE2, EXAMPLE3};

    fn doc(text: &str) -> Document {
        Document::new("t", text, "en").unwrap()
    }

    fn terms(anns: &[Annotation]) -> Vec<String> {
        anns.iter().map(|a| a.value["term"].as_str().unwrap().to_string()).collect()
    }

    #[test]
    fn example1_definitions() {
        let d = doc(EXAMPLE1);
        assert_eq!(terms(&get_definitions(&d)), vec!["Effective Date", "Seller", "Buyer"]);
    }

    #[test]
    fn example2_definitions() {
        let d = doc(EXAMPLE2);
        assert_eq!(terms(&get_definitions(&d)), vec!["First Deposit", "Deposit", "Second Deposit"]);
    }

    #[test]
    fn shall_mean_definition() {
        let d = doc("\"Closing\" shall mean the date of transfer.");
        let defs = get_definitions(&d);
        assert_eq!(terms(&defs), vec!["Closing"]);
        assert_eq!(defs[0].value["trigger"], "shall_mean");
    }

    #[test]
    fn defined_as_definition() {
        let d = doc("The term \"Hazardous Material\" is defined as any regulated substance.");
        assert_eq!(terms(&get_definitions(&d)), vec!["Hazardous Material"]);
        let d = doc("Closing Date is defined as the date of transfer.");
        assert_eq!(terms(&get_definitions(&d)), vec!["Closing Date"]);
    }

    #[test]
    fn demonstrative_parenthetical_is_excluded() {
        let d = doc("THIS AGREEMENT (this \u{201C}Agreement\u{201D}) is made by the parties (the \u{201C}Parties\u{201D}).");
        assert_eq!(terms(&get_definitions(&d)), vec!["Parties"]);
    }

    #[test]
    fn lowercase_parenthetical_is_not_a_term() {
        let d = doc("payment in full (the \u{201C}amount due\u{201D}) is owed");
        assert!(get_definitions(&d).is_empty());
    }

    #[test]
    fn example3_constraints_count_and_first_tuple() {
        let d = doc(EXAMPLE3);
        let cons = get_constraints(&d);
        assert_eq!(cons.len(), 5, "{:?}", cons.iter().map(|c| &c.value["trigger"]).collect::<Vec<_>>());
        assert_eq!(cons[0].value["trigger"], "before");
        assert_eq!(
            cons[0].value["pre_context"],
            "by accepting the deed and closing the transaction, buyer, on behalf of itself and its successors \
             and assigns, shall thereby release each of the seller parties from, and waive any and all \
             liabilities against each of the seller parties for, attributable to, or in connection with the \
             property, whether arising or accruing"
        );
        assert_eq!(cons[0].value["post_context"], "");
    }

    #[test]
    fn no_less_than_is_one_trigger() {
        let d = doc("Payment is due no less than thirty days after notice.");
        let cons = get_constraints(&d);
        let triggers: Vec<&str> = cons.iter().map(|c| c.value["trigger"].as_str().unwrap()).collect();
        assert!(triggers.contains(&"no less than"), "{triggers:?}");
        assert!(!triggers.contains(&"less than"));
        assert!(!triggers.contains(&"less"));
    }

    #[test]
    fn constraint_triggers_are_word_bounded() {
        let d = doc("notwithstanding anything herein the parties may act");
        assert!(get_constraints(&d).is_empty());
    }

    #[test]
    fn longest_condition_wins() {
        let d = doc("unless and until the Closing occurs");
        let conds = get_conditions(&d);
        assert_eq!(conds.len(), 1);
        assert_eq!(conds[0].value["trigger"], "unless and until");
    }

    #[test]
    fn provided_that_matches() {
        let d = doc("provided that Buyer pays the fee");
        let conds = get_conditions(&d);
        assert_eq!(conds[0].value["trigger"], "provided that");
    }

    #[test]
    fn condition_word_boundary() {
        let d = doc("the thief ran off");
        assert!(get_conditions(&d).is_empty());
    }

    #[test]
    fn example3_regulations_exact() {
        let d = doc(EXAMPLE3);
        let regs = get_regulations(&d, crate::data::state_codes());
        assert_eq!(regs.len(), 1);
        assert_eq!(regs[0].value["code_name"], "United States Code");
        assert_eq!(regs[0].value["normalized"], "42 USC 6901");
    }

    #[test]
    fn cfr_and_public_law() {
        let d = doc("as provided in 32 CFR 170 and Pub. L. 555-666 generally");
        let regs = get_regulations(&d, crate::data::state_codes());
        assert_eq!(regs.len(), 2);
        assert_eq!(regs[0].value["code_name"], "Code of Federal Regulations");
        assert_eq!(regs[0].value["normalized"], "32 CFR 170");
        assert_eq!(regs[1].value["code_name"], "Public Law");
        assert_eq!(regs[1].value["normalized"], "Pub L 555-666");
    }

    #[test]
    fn state_code_citation() {
        let d = doc("see Mo. Rev. Stat. § 213 for details");
        let regs = get_regulations(&d, crate::data::state_codes());
        assert_eq!(regs.len(), 1);
        assert_eq!(regs[0].value["code_name"], "Missouri Revised Statutes");
        assert_eq!(regs[0].value["normalized"], "Mo Rev Stat 213");
    }

    #[test]
    fn normalized_never_contains_section_or_period() {
        for text in ["42 U.S.C. §§6901", "32 C.F.R. § 170.5", "Pub. L. 101-336", "Mo. Rev. Stat. § 213.010"] {
            let d = doc(text);
            for r in get_regulations(&d, crate::data::state_codes()) {
                let n = r.value["normalized"].as_str().unwrap();
                assert!(!n.contains('\u{00A7}') && !n.contains('.'), "{n}");
            }
        }
    }

    #[test]
    fn citations_volume_and_year_first() {
        let lex = crate::data::reporters();
        let d = doc("as held in 10 U.S. 100 and later 1998 S. Ct. 1");
        let cites = get_citations(&d, lex);
        assert_eq!(cites.len(), 2);
        assert_eq!(cites[0].value["volume"], 10);
        assert_eq!(cites[0].value["reporter"], "U.S.");
        assert_eq!(cites[0].value["page"], 100);
        assert!(cites[0].value["year"].is_null());
        assert!(cites[1].value["volume"].is_null());
        assert_eq!(cites[1].value["year"], 1998);
        assert_eq!(cites[1].value["reporter"], "S. Ct.");
        assert_eq!(cites[1].value["page"], 1);
    }

    #[test]
    fn unknown_reporter_is_no_citation() {
        let d = doc("10 unknown 100");
        assert!(get_citations(&d, crate::data::reporters()).is_empty());
    }

    #[test]
    fn usc_text_is_not_a_citation() {
        let d = doc(EXAMPLE3);
        assert!(get_citations(&d, crate::data::reporters()).is_empty());
    }

    #[test]
    fn courts_match_by_name_and_alias() {
        let lex = crate::data::courts();
        assert_eq!(get_courts(&doc("before the Supreme Court of New York today"), lex).len(), 1);
        let cites = get_courts(&doc("filed in S.D.N.Y. yesterday"), lex);
        assert_eq!(cites.len(), 1);
        assert_eq!(cites[0].value["canonical"], "United States District Court for the Southern District of New York");
        assert!(get_courts(&doc("the supreme court held"), lex).is_empty());
    }

    #[test]
    fn copyright_variants() {
        let d = doc("(C) Copyright 2000 Acme");
        let c = get_copyrights(&d);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].value["year"], 2000);
        assert_eq!(c[0].value["holder"], "Acme");
        assert_eq!(c[0].value["sign_present"], true);

        let d = doc("\u{00A9} 1998-2002 Widget Corp");
        let c = get_copyrights(&d);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].value["year"], 1998);
        assert_eq!(c[0].value["year_end"], 2002);
        assert_eq!(c[0].value["holder"], "Widget Corp");

        assert!(get_copyrights(&doc("See copyright law.")).is_empty());
    }

    #[test]
    fn trademark_variants() {
        let d = doc("compare Widget(R) and Hal (TM) today");
        let marks = get_trademarks(&d);
        assert_eq!(marks.len(), 2);
        assert_eq!(marks[0].value["mark_text"], "Widget");
        assert_eq!(marks[0].value["symbol"], "R");
        assert_eq!(marks[1].value["mark_text"], "Hal");
        assert_eq!(marks[1].value["symbol"], "TM");
        assert!(get_trademarks(&doc("just (R) alone")).is_empty());
    }

    #[test]
    fn trigger_spans_never_overlap_and_are_flanked() {
        let d = doc(EXAMPLE3);
        for anns in [get_constraints(&d), get_conditions(&d)] {
            for w in anns.windows(2) {
                assert!(w[0].span.end <= w[1].span.start);
            }
            for a in &anns {
                let chars: Vec<char> = d.text().chars().collect();
                if a.span.start > 0 {
                    assert!(!chars[a.span.start - 1].is_alphanumeric());
                }
                if a.span.end < chars.len() {
                    assert!(!chars[a.span.end].is_alphanumeric());
                }
            }
        }
    }
}
