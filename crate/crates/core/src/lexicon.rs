//! Gazetteer dictionaries: loading, merging, and scanning documents for
//! entries (courts, reporters, geopolitical entities, suffixes, state-code
//! citations, stopwords).
//!
//! Matching runs over a multi-pattern automaton and only fires at word
//! boundaries. Acronym-like aliases ("US", "S.D.N.Y.") must match exact
//! case so prose like "tell us more" stays quiet; everything else is
//! case-insensitive. At any position the longest match wins within an
//! entity kind; entries of different kinds may overlap.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use aho_corasick::{AhoCorasick, MatchKind};
use serde::{Deserialize, Serialize};

use crate::doc::{Document, Span};
use crate::error::{LexError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Court,
    Reporter,
    Geoentity,
    CompanySuffix,
    StreetSuffix,
    StateCode,
    Stopword,
    Agency,
}

impl EntityKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "court" => EntityKind::Court,
            "reporter" => EntityKind::Reporter,
            "geoentity" => EntityKind::Geoentity,
            "company_suffix" => EntityKind::CompanySuffix,
            "street_suffix" => EntityKind::StreetSuffix,
            "state_code" => EntityKind::StateCode,
            "stopword" => EntityKind::Stopword,
            "agency" => EntityKind::Agency,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            EntityKind::Court => "court",
            EntityKind::Reporter => "reporter",
            EntityKind::Geoentity => "geoentity",
            EntityKind::CompanySuffix => "company_suffix",
            EntityKind::StreetSuffix => "street_suffix",
            EntityKind::StateCode => "state_code",
            EntityKind::Stopword => "stopword",
            EntityKind::Agency => "agency",
        }
    }
}

/// One gazetteer entry: a canonical name plus alias surface forms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub entity_kind: EntityKind,
    pub canonical: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    #[serde(default = "default_locale")]
    pub locale: String,
    #[serde(default)]
    pub attributes: BTreeMap<String, String>,
}

fn default_locale() -> String {
    "en".to_string()
}

/// A loaded gazetteer. Immutable after construction; concurrent scans over
/// the same lexicon are safe.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    enabled_locales: HashSet<String>,
    matcher: Matcher,
}

/// A scan hit: where an entry surface form matched.
#[derive(Debug, Clone, Copy)]
pub struct LexiconMatch<'a> {
    pub span: Span,
    pub entry: &'a LexiconEntry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexiconFormat {
    Csv,
    Json,
}

impl Lexicon {
    pub fn new(entries: Vec<LexiconEntry>) -> Self {
        let merged = merge_entries(entries);
        let enabled_locales = merged.iter().map(|e| e.locale.clone()).collect();
        let matcher = Matcher::build(&merged);
        Lexicon { entries: merged, enabled_locales, matcher }
    }

    pub fn empty() -> Self {
        Self::new(Vec::new())
    }

    pub fn load(path: impl AsRef<Path>, format: LexiconFormat) -> Result<Self> {
        let content = std::fs::read_to_string(path.as_ref())?;
        Self::from_str(&content, format)
    }

    pub fn from_str(content: &str, format: LexiconFormat) -> Result<Self> {
        let entries = match format {
            LexiconFormat::Csv => parse_csv(content)?,
            LexiconFormat::Json => parse_json(content)?,
        };
        Ok(Self::new(entries))
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn enabled_locales(&self) -> &HashSet<String> {
        &self.enabled_locales
    }

    /// Restrict scanning to entries of the given locales.
    pub fn with_locales<I, S>(mut self, locales: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.enabled_locales = locales.into_iter().map(Into::into).collect();
        self
    }

    /// Entry union with duplicate merging; associative and idempotent.
    pub fn merge(&self, other: &Lexicon) -> Lexicon {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        let enabled: HashSet<String> =
            self.enabled_locales.union(&other.enabled_locales).cloned().collect();
        Lexicon::new(entries).with_locales(enabled)
    }

    /// All surface forms (canonical + aliases) of entries of `kind`,
    /// lowercased. Used for stopword sets and suffix tables.
    pub fn terms(&self, kind: EntityKind) -> HashSet<String> {
        let mut set = HashSet::new();
        for e in self.entries.iter().filter(|e| e.entity_kind == kind) {
            set.insert(e.canonical.to_lowercase());
            for a in &e.aliases {
                set.insert(a.to_lowercase());
            }
        }
        set
    }

    /// Scan a document for all enabled entries. Deterministic: the same
    /// lexicon and document always produce the same match list.
    pub fn scan<'a>(&'a self, doc: &Document) -> Vec<LexiconMatch<'a>> {
        self.scan_impl(doc, None)
    }

    /// Scan restricted to one entity kind.
    pub fn scan_kind<'a>(&'a self, doc: &Document, kind: EntityKind) -> Vec<LexiconMatch<'a>> {
        self.scan_impl(doc, Some(kind))
    }

    fn scan_impl<'a>(&'a self, doc: &Document, kind: Option<EntityKind>) -> Vec<LexiconMatch<'a>> {
        let mut cands = self.matcher.candidates(doc);
        cands.retain(|c| {
            let e = &self.entries[c.entry];
            self.enabled_locales.contains(&e.locale) && kind.map_or(true, |k| e.entity_kind == k)
        });

        // longest match wins at any position, independently per kind
        cands.sort_by(|a, b| {
            ((b.end - b.start), a.start, a.entry).cmp(&((a.end - a.start), b.start, b.entry))
        });
        let mut accepted: Vec<Cand> = Vec::new();
        for c in cands {
            let c_kind = self.entries[c.entry].entity_kind;
            let clash = accepted.iter().any(|t| {
                self.entries[t.entry].entity_kind == c_kind && t.start < c.end && c.start < t.end
            });
            if !clash {
                accepted.push(c);
            }
        }
        accepted.sort_by_key(|c| (c.start, c.end, c.entry));
        accepted
            .into_iter()
            .map(|c| LexiconMatch { span: Span::new(c.start, c.end), entry: &self.entries[c.entry] })
            .collect()
    }
}

/// Merge duplicate (canonical, locale, entity_kind) rows with alias union,
/// preserving first-seen order. Empty aliases and aliases equal to the
/// canonical are dropped.
fn merge_entries(entries: Vec<LexiconEntry>) -> Vec<LexiconEntry> {
    let mut out: Vec<LexiconEntry> = Vec::new();
    let mut index: HashMap<(String, String, EntityKind), usize> = HashMap::new();
    for mut e in entries {
        e.aliases.retain(|a| !a.is_empty() && *a != e.canonical);
        let key = (e.canonical.clone(), e.locale.clone(), e.entity_kind);
        match index.get(&key) {
            Some(&i) => {
                let existing = &mut out[i];
                for a in e.aliases {
                    if !existing.aliases.contains(&a) {
                        existing.aliases.push(a);
                    }
                }
                for (k, v) in e.attributes {
                    existing.attributes.entry(k).or_insert(v);
                }
            }
            None => {
                let mut seen = HashSet::new();
                e.aliases.retain(|a| seen.insert(a.clone()));
                index.insert(key, out.len());
                out.push(e);
            }
        }
    }
    out
}

/// CSV schema: `entity_kind,canonical,aliases(;-separated),locale,attributes(k=v;-separated)`,
/// UTF-8, header row required.
fn parse_csv(content: &str) -> Result<Vec<LexiconEntry>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(content.as_bytes());
    let mut entries = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| LexError::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 5 {
            return Err(LexError::Parse { line, message: format!("expected 5 fields, got {}", record.len()) });
        }
        let kind_str = record.get(0).unwrap_or("").trim();
        let entity_kind = EntityKind::parse(kind_str)
            .ok_or_else(|| LexError::Schema { line, message: format!("unknown entity_kind {kind_str:?}") })?;
        let canonical = record.get(1).unwrap_or("").trim().to_string();
        if canonical.is_empty() {
            return Err(LexError::Parse { line, message: "canonical must be non-empty".into() });
        }
        let aliases: Vec<String> = record
            .get(2)
            .unwrap_or("")
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        let locale = {
            let l = record.get(3).unwrap_or("").trim();
            if l.is_empty() { "en".to_string() } else { l.to_string() }
        };
        let mut attributes = BTreeMap::new();
        for part in record.get(4).unwrap_or("").split(';').map(str::trim).filter(|s| !s.is_empty()) {
            match part.split_once('=') {
                Some((k, v)) => attributes.insert(k.trim().to_string(), v.trim().to_string()),
                None => attributes.insert(part.to_string(), String::new()),
            };
        }
        entries.push(LexiconEntry { entity_kind, canonical, aliases, locale, attributes });
    }
    Ok(entries)
}

fn parse_json(content: &str) -> Result<Vec<LexiconEntry>> {
    let trimmed = content.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    serde_json::from_str::<Vec<LexiconEntry>>(trimmed)
        .map_err(|e| LexError::Schema { line: e.line() as u64, message: e.to_string() })
}

#[derive(Debug, Clone, Copy)]
struct Cand {
    start: usize,
    end: usize,
    entry: usize,
}

/// Compiled surface forms. Case-insensitive forms are matched over a
/// char-folded copy of the document (1:1 scalar mapping keeps offsets
/// aligned); exact-case forms are matched over the raw text.
#[derive(Debug, Clone)]
struct Matcher {
    ci: Option<AhoCorasick>,
    ci_entries: Vec<usize>,
    cs: Option<AhoCorasick>,
    cs_entries: Vec<usize>,
}

/// Acronym-like forms ("US", "U.S.", "S.D.N.Y.") require an exact-case
/// match; anything with lowercase letters or spaces folds.
fn is_acronym_like(form: &str) -> bool {
    let letters: Vec<char> = form.chars().filter(|c| c.is_alphabetic()).collect();
    !letters.is_empty()
        && letters.len() <= 6
        && letters.iter().all(|c| c.is_uppercase())
        && !form.chars().any(char::is_whitespace)
}

/// Per-char lowercase fold that preserves scalar count.
fn fold_chars(s: &str) -> String {
    s.chars().map(|c| c.to_lowercase().next().unwrap()).collect()
}

impl Matcher {
    fn build(entries: &[LexiconEntry]) -> Self {
        let mut ci_patterns: Vec<String> = Vec::new();
        let mut ci_entries = Vec::new();
        let mut cs_patterns: Vec<String> = Vec::new();
        let mut cs_entries = Vec::new();
        for (i, e) in entries.iter().enumerate() {
            for form in std::iter::once(&e.canonical).chain(e.aliases.iter()) {
                if is_acronym_like(form) {
                    cs_patterns.push(form.clone());
                    cs_entries.push(i);
                } else {
                    ci_patterns.push(fold_chars(form));
                    ci_entries.push(i);
                }
            }
        }
        let build = |patterns: &[String]| {
            if patterns.is_empty() {
                None
            } else {
                Some(
                    AhoCorasick::builder()
                        .match_kind(MatchKind::Standard)
                        .build(patterns)
                        .expect("lexicon automaton construction cannot fail"),
                )
            }
        };
        Matcher { ci: build(&ci_patterns), ci_entries, cs: build(&cs_patterns), cs_entries }
    }

    fn candidates(&self, doc: &Document) -> Vec<Cand> {
        let text = doc.text();
        let mut out = Vec::new();

        if let Some(cs) = &self.cs {
            for m in cs.find_overlapping_iter(text) {
                let start = doc.char_of_byte(m.start());
                let end = doc.char_of_byte(m.end());
                if word_bounded(doc, start, end) {
                    out.push(Cand { start, end, entry: self.cs_entries[m.pattern().as_usize()] });
                }
            }
        }
        if let Some(ci) = &self.ci {
            let folded = fold_chars(text);
            let starts: Vec<usize> = folded.char_indices().map(|(b, _)| b).chain([folded.len()]).collect();
            for m in ci.find_overlapping_iter(&folded) {
                let start = starts.binary_search(&m.start()).expect("match starts on a char boundary");
                let end = starts.binary_search(&m.end()).expect("match ends on a char boundary");
                if word_bounded(doc, start, end) {
                    out.push(Cand { start, end, entry: self.ci_entries[m.pattern().as_usize()] });
                }
            }
        }
        out
    }
}

/// Match start/end must not be adjacent to a letter or digit.
fn word_bounded(doc: &Document, start: usize, end: usize) -> bool {
    let text = doc.text();
    if start > 0 {
        let b = doc.byte_of_char(start);
        if text[..b].chars().next_back().is_some_and(|c| c.is_alphanumeric()) {
            return false;
        }
    }
    if end < doc.len_chars() {
        let b = doc.byte_of_char(end);
        if text[b..].chars().next().is_some_and(|c| c.is_alphanumeric()) {
            return false;
        }
    }
    true
}
