//! Core document representation: documents, spans, and the annotation
//! envelope shared by every extractor.
//!
//! Offsets throughout the crate are Unicode scalar offsets (not bytes),
//! end-exclusive. Documents are immutable after construction and safe to
//! share across threads.

use serde::Serialize;

use crate::error::{LexError, Result};

/// A source document. Text is stored verbatim: no case folding, no
/// whitespace collapsing. Extractors do their own folding so that spans
/// always map back to the original text.
#[derive(Debug, Clone)]
pub struct Document {
    id: String,
    text: String,
    locale: String,
    /// Byte offset of each scalar, plus a trailing entry equal to
    /// `text.len()`; maps char offsets to byte offsets in O(1).
    char_starts: Vec<usize>,
}

impl Document {
    /// Build a document. `id` must be non-empty; the text is kept verbatim.
    pub fn new(id: impl Into<String>, text: impl Into<String>, locale: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(LexError::Argument("document id must be non-empty".into()));
        }
        let text = text.into();
        let mut char_starts: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        char_starts.push(text.len());
        Ok(Document { id, text, locale: locale.into(), char_starts })
    }

    /// Decode raw bytes as UTF-8 and build a document.
    pub fn from_bytes(id: impl Into<String>, bytes: &[u8], locale: impl Into<String>) -> Result<Self> {
        let text = std::str::from_utf8(bytes).map_err(|e| LexError::Encoding(e.to_string()))?;
        Self::new(id, text, locale)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn locale(&self) -> &str {
        &self.locale
    }

    /// Length in Unicode scalars.
    pub fn len_chars(&self) -> usize {
        self.char_starts.len() - 1
    }

    /// Substring by scalar offsets.
    pub fn slice(&self, span: Span) -> Result<&str> {
        let len = self.len_chars();
        if span.start >= span.end || span.end > len {
            return Err(LexError::SpanOutOfRange { start: span.start, end: span.end, len });
        }
        Ok(&self.text[self.char_starts[span.start]..self.char_starts[span.end]])
    }

    /// Byte offset of the scalar at char offset `idx` (or `text.len()` for
    /// `idx == len_chars()`).
    pub fn byte_of_char(&self, idx: usize) -> usize {
        self.char_starts[idx]
    }

    /// Char offset of the scalar starting at byte `byte`. Panics if `byte`
    /// is not a char boundary recorded for this document.
    pub fn char_of_byte(&self, byte: usize) -> usize {
        self.char_starts
            .binary_search(&byte)
            .unwrap_or_else(|_| panic!("byte {byte} is not a char boundary"))
    }

    /// Convert a byte range (e.g. from a regex match) into a scalar span.
    pub fn span_of_bytes(&self, start: usize, end: usize) -> Span {
        Span::new(self.char_of_byte(start), self.char_of_byte(end))
    }
}

/// Half-open region of a document in scalar offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

/// Annotation kinds, in the fixed pipeline order used by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnotationKind {
    Sentence,
    Paragraph,
    Section,
    Page,
    Title,
    Token,
    Amount,
    Money,
    Percent,
    Ratio,
    Distance,
    Duration,
    Date,
    Citation,
    Regulation,
    Court,
    Definition,
    Condition,
    Constraint,
    Copyright,
    Trademark,
    Company,
    Geoentity,
    Address,
    Pii,
    Url,
}

impl AnnotationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AnnotationKind::Sentence => "sentence",
            AnnotationKind::Paragraph => "paragraph",
            AnnotationKind::Section => "section",
            AnnotationKind::Page => "page",
            AnnotationKind::Title => "title",
            AnnotationKind::Token => "token",
            AnnotationKind::Amount => "amount",
            AnnotationKind::Money => "money",
            AnnotationKind::Percent => "percent",
            AnnotationKind::Ratio => "ratio",
            AnnotationKind::Distance => "distance",
            AnnotationKind::Duration => "duration",
            AnnotationKind::Date => "date",
            AnnotationKind::Citation => "citation",
            AnnotationKind::Regulation => "regulation",
            AnnotationKind::Court => "court",
            AnnotationKind::Definition => "definition",
            AnnotationKind::Condition => "condition",
            AnnotationKind::Constraint => "constraint",
            AnnotationKind::Copyright => "copyright",
            AnnotationKind::Trademark => "trademark",
            AnnotationKind::Company => "company",
            AnnotationKind::Geoentity => "geoentity",
            AnnotationKind::Address => "address",
            AnnotationKind::Pii => "pii",
            AnnotationKind::Url => "url",
        }
    }
}

/// A typed, located annotation. `text` is always the exact slice of the
/// source document at `span`.
#[derive(Debug, Clone, Serialize)]
pub struct Annotation {
    pub kind: AnnotationKind,
    pub span: Span,
    pub text: String,
    pub value: serde_json::Value,
    pub locale: String,
}

impl Annotation {
    /// Build an annotation over `span`, capturing the document slice.
    pub fn at(doc: &Document, kind: AnnotationKind, span: Span, value: serde_json::Value) -> Self {
        let text = doc.slice(span).expect("extractor produced an out-of-range span").to_string();
        Annotation { kind, span, text, value, locale: doc.locale().to_string() }
    }

    pub fn with_locale(mut self, locale: impl Into<String>) -> Self {
        self.locale = locale.into();
        self
    }

    /// One JSONL record: `{"doc_id", "kind", "start", "end", "text",
    /// "value", "locale"}`.
    pub fn to_jsonl(&self, doc_id: &str) -> String {
        #[derive(Serialize)]
        struct Record<'a> {
            doc_id: &'a str,
            kind: &'a str,
            start: usize,
            end: usize,
            text: &'a str,
            value: &'a serde_json::Value,
            locale: &'a str,
        }
        serde_json::to_string(&Record {
            doc_id,
            kind: self.kind.as_str(),
            start: self.span.start,
            end: self.span.end,
            text: &self.text,
            value: &self.value,
            locale: &self.locale,
        })
        .expect("annotation serialization cannot fail")
    }
}

/// Sort annotations the way extractors must emit them.
pub fn sort_annotations(anns: &mut [Annotation]) {
    anns.sort_by(|a, b| (a.span.start, a.span.end, a.kind).cmp(&(b.span.start, b.span.end, b.kind)));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stores_text_verbatim() {
        let d = Document::new("d1", "abc", "en").unwrap();
        assert_eq!(d.len_chars(), 3);
        assert_eq!(d.text(), "abc");
    }

    #[test]
    fn empty_text_is_valid() {
        let d = Document::new("d1", "", "en").unwrap();
        assert_eq!(d.len_chars(), 0);
    }

    #[test]
    fn section_symbols_count_as_scalars() {
        // independent oracle: count Unicode scalars of the string
        let s = "§§6901";
        assert_eq!(s.chars().count(), 6);
        let d = Document::new("d1", s, "en").unwrap();
        assert_eq!(d.len_chars(), 6);
    }

    #[test]
    fn empty_id_rejected() {
        assert!(Document::new("", "abc", "en").is_err());
    }

    #[test]
    fn invalid_utf8_rejected() {
        assert!(matches!(Document::from_bytes("d1", &[0xff, 0xfe], "en"), Err(LexError::Encoding(_))));
    }

    #[test]
    fn slice_by_scalar_offsets() {
        let d = Document::new("d", "hello", "en").unwrap();
        assert_eq!(d.slice(Span::new(1, 3)).unwrap(), "el");
        // scalar, not byte, indexing
        let d = Document::new("d", "héllo", "en").unwrap();
        assert_eq!(d.slice(Span::new(1, 2)).unwrap(), "é");
    }

    #[test]
    fn slice_out_of_range() {
        let d = Document::new("d", "ab", "en").unwrap();
        assert!(d.slice(Span::new(1, 3)).is_err());
        assert!(d.slice(Span::new(2, 2)).is_err());
    }

    #[test]
    fn byte_char_round_trip() {
        let d = Document::new("d", "a§b€c", "en").unwrap();
        for i in 0..=d.len_chars() {
            assert_eq!(d.char_of_byte(d.byte_of_char(i)), i);
        }
    }
}
