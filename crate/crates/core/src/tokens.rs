//! Tokenization, stopword filtering, and corpus statistics (n-gram,
//! skipgram, and character distributions; collocations).
//!
//! The tokenizer is Penn-Treebank-flavored: terminal punctuation, commas,
//! quotes, parens, and the section symbol split off; dotted abbreviations
//! ("U.S.C.") and numerals with separators ("1,250,000.00") stay intact;
//! hyphenated words are one token.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::LazyLock;

use regex::Regex;

use crate::doc::{Document, Span};
use crate::error::{LexError, Result};
use crate::segment::{sentence_spans, SentenceModel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub span: Span,
    pub text: String,
    pub lower: String,
}

static ABBREV_SHAPE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[A-Za-z]+(?:\.[A-Za-z]+)+\.?$").unwrap());
static NUMERAL_SHAPE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[0-9][0-9,]*(?:\.[0-9]+)?$|^[0-9]+(?:\.[0-9]+)+$").unwrap());

fn is_leading_punct(c: char) -> bool {
    matches!(c, '(' | '[' | '{' | '"' | '\'' | '\u{201C}' | '\u{2018}' | '\u{00AB}' | '\u{00A7}')
}

fn is_trailing_punct(c: char) -> bool {
    matches!(
        c,
        '.' | ',' | ';' | ':' | '!' | '?' | '\u{2026}' | '"' | '\'' | '\u{201D}' | '\u{2019}' | '\u{00BB}'
            | ')' | ']' | '}' | '%' | '\u{00A7}'
    )
}

/// Split a document into tokens with exact source spans.
pub fn tokenize(doc: &Document) -> Vec<Token> {
    let mut tokens = Vec::new();
    let text = doc.text();
    let mut chunk_start_byte = None;
    let mut iter = text.char_indices().peekable();
    while let Some((b, c)) = iter.next() {
        if c.is_whitespace() {
            if let Some(s) = chunk_start_byte.take() {
                tokenize_chunk(doc, s, b, &mut tokens);
            }
        } else if chunk_start_byte.is_none() {
            chunk_start_byte = Some(b);
        }
        if iter.peek().is_none() {
            if let Some(s) = chunk_start_byte.take() {
                let end = if c.is_whitespace() { b } else { text.len() };
                tokenize_chunk(doc, s, end, &mut tokens);
            }
        }
    }
    tokens
}

fn push_token(doc: &Document, start_byte: usize, end_byte: usize, tokens: &mut Vec<Token>) {
    let text = &doc.text()[start_byte..end_byte];
    tokens.push(Token {
        span: doc.span_of_bytes(start_byte, end_byte),
        text: text.to_string(),
        lower: text.to_lowercase(),
    });
}

fn tokenize_chunk(doc: &Document, start: usize, end: usize, tokens: &mut Vec<Token>) {
    let text = doc.text();
    let mut s = start;
    // leading punctuation, each its own token (§§ splits into two)
    while s < end {
        let c = text[s..].chars().next().unwrap();
        if is_leading_punct(c) {
            push_token(doc, s, s + c.len_utf8(), tokens);
            s += c.len_utf8();
        } else {
            break;
        }
    }
    if s >= end {
        return;
    }
    // peel trailing punctuation until the core looks like an abbreviation
    // or a numeral (which keep their internal and trailing periods)
    let mut e = end;
    let mut trailing: Vec<(usize, usize)> = Vec::new();
    loop {
        let core = &text[s..e];
        if ABBREV_SHAPE.is_match(core) || NUMERAL_SHAPE.is_match(core) {
            break;
        }
        match core.chars().next_back() {
            Some(c) if is_trailing_punct(c) && e - c.len_utf8() > s => {
                trailing.push((e - c.len_utf8(), e));
                e -= c.len_utf8();
            }
            Some(c) if is_trailing_punct(c) && e - c.len_utf8() == s => {
                // chunk is a single punctuation char
                trailing.push((s, e));
                e = s;
                break;
            }
            _ => break,
        }
    }
    if e > s {
        push_token(doc, s, e, tokens);
    }
    for &(ts, te) in trailing.iter().rev() {
        push_token(doc, ts, te, tokens);
    }
}

/// Drop tokens whose case-folded form is a stopword.
pub fn remove_stopwords(tokens: Vec<Token>, stopwords: &HashSet<String>) -> Vec<Token> {
    tokens.into_iter().filter(|t| !stopwords.contains(&t.lower)).collect()
}

/// Contiguous n-grams; empty when `n == 0` or `n > len(items)`.
pub fn ngrams<T: Clone>(items: &[T], n: usize) -> Vec<Vec<T>> {
    if n == 0 || n > items.len() {
        return Vec::new();
    }
    items.windows(n).map(|w| w.to_vec()).collect()
}

/// n-grams with up to `k` total skipped positions, in position order.
pub fn skipgrams<T: Clone>(items: &[T], n: usize, k: usize) -> Vec<Vec<T>> {
    if n == 0 || n > items.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut picked = Vec::with_capacity(n);
    fn rec<T: Clone>(items: &[T], n: usize, k: usize, first: usize, next: usize, picked: &mut Vec<usize>, out: &mut Vec<Vec<T>>) {
        if picked.len() == n {
            out.push(picked.iter().map(|&i| items[i].clone()).collect());
            return;
        }
        for i in next..items.len() {
            let span_if_taken = i - first + 1;
            if span_if_taken > n + k {
                break;
            }
            picked.push(i);
            rec(items, n, k, first, i + 1, picked, out);
            picked.pop();
        }
    }
    for start in 0..items.len() {
        picked.push(start);
        rec(items, n, k, start, start + 1, &mut picked, &mut out);
        picked.pop();
    }
    out
}

/// Counts of every contiguous n-scalar substring.
pub fn char_distribution(text: &str, n: usize) -> BTreeMap<String, u64> {
    let mut map = BTreeMap::new();
    if n == 0 {
        return map;
    }
    let chars: Vec<char> = text.chars().collect();
    if n > chars.len() {
        return map;
    }
    for w in chars.windows(n) {
        *map.entry(w.iter().collect::<String>()).or_insert(0) += 1;
    }
    map
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollocationScoring {
    Frequency,
    LogLikelihood,
}

/// Ranked n-gram table; `scored` is ordered by score descending.
#[derive(Debug, Clone)]
pub struct CollocationTable {
    pub n: usize,
    pub scored: Vec<(Vec<String>, u64, f64)>,
}

impl CollocationTable {
    /// CSV export: `rank,gram,count,score`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,gram,count,score\n");
        for (i, (gram, count, score)) in self.scored.iter().enumerate() {
            writeln!(out, "{},{},{},{:.6}", i + 1, gram.join(" "), count, score).unwrap();
        }
        out
    }
}

/// Dunning log-likelihood ratio (G²) over a 2x2 contingency table. Zero
/// when observed counts equal the independence expectation.
pub fn log_likelihood_ratio(o11: u64, o12: u64, o21: u64, o22: u64) -> f64 {
    let n = (o11 + o12 + o21 + o22) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let r1 = (o11 + o12) as f64;
    let r2 = (o21 + o22) as f64;
    let c1 = (o11 + o21) as f64;
    let c2 = (o12 + o22) as f64;
    let term = |o: u64, e: f64| {
        if o == 0 || e == 0.0 {
            0.0
        } else {
            let o = o as f64;
            o * (o / e).ln()
        }
    };
    2.0 * (term(o11, r1 * c1 / n) + term(o12, r1 * c2 / n) + term(o21, r2 * c1 / n) + term(o22, r2 * c2 / n))
}

/// Corpus collocations: case-folded token n-grams that cross no sentence
/// boundary, scored by raw frequency or by log-likelihood against
/// independence. Punctuation-only tokens are excluded from grams.
pub fn collocations(
    corpus: &[Document],
    n: usize,
    top_k: usize,
    scoring: CollocationScoring,
) -> Result<CollocationTable> {
    if corpus.is_empty() {
        return Err(LexError::Argument("collocation corpus must be non-empty".into()));
    }
    if !(n == 2 || n == 3) {
        return Err(LexError::Argument(format!("collocations support n in {{2, 3}}, got {n}")));
    }
    if top_k == 0 {
        return Err(LexError::Argument("top_k must be at least 1".into()));
    }

    let model = SentenceModel::default_english();
    let mut gram_counts: HashMap<Vec<String>, u64> = HashMap::new();
    let mut prefix_counts: HashMap<Vec<String>, u64> = HashMap::new();
    let mut last_counts: HashMap<String, u64> = HashMap::new();
    let mut positions: u64 = 0;

    for doc in corpus {
        let tokens = tokenize(doc);
        for sent in sentence_spans(doc, model) {
            let words: Vec<String> = tokens
                .iter()
                .filter(|t| sent.contains(&t.span) && t.lower.chars().any(char::is_alphanumeric))
                .map(|t| t.lower.clone())
                .collect();
            if words.len() < n {
                continue;
            }
            for w in words.windows(n) {
                positions += 1;
                *gram_counts.entry(w.to_vec()).or_insert(0) += 1;
                *prefix_counts.entry(w[..n - 1].to_vec()).or_insert(0) += 1;
                *last_counts.entry(w[n - 1].clone()).or_insert(0) += 1;
            }
        }
    }

    let mut scored: Vec<(Vec<String>, u64, f64)> = gram_counts
        .into_iter()
        .map(|(gram, count)| {
            let score = match scoring {
                CollocationScoring::Frequency => count as f64,
                CollocationScoring::LogLikelihood => {
                    let o11 = count;
                    let o12 = prefix_counts[&gram[..n - 1]] - count;
                    let o21 = last_counts[&gram[n - 1]] - count;
                    let o22 = positions - o11 - o12 - o21;
                    log_likelihood_ratio(o11, o12, o21, o22)
                }
            };
            (gram, count, score)
        })
        .collect();
    scored.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap().then(b.1.cmp(&a.1)).then(a.0.cmp(&b.0)));
    scored.truncate(top_k);
    Ok(CollocationTable { n, scored })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> Document {
        Document::new("t", text, "en").unwrap()
    }

    fn token_texts(text: &str) -> Vec<String> {
        tokenize(&doc(text)).into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn splits_terminal_punctuation() {
        assert_eq!(token_texts("ten years."), vec!["ten", "years", "."]);
    }

    #[test]
    fn keeps_abbreviations_and_splits_section_symbols() {
        assert_eq!(token_texts("42 U.S.C. §§6901"), vec!["42", "U.S.C.", "§", "§", "6901"]);
    }

    #[test]
    fn empty_text_has_no_tokens() {
        assert!(token_texts("").is_empty());
    }

    #[test]
    fn keeps_numerals_and_hyphenated_words() {
        assert_eq!(token_texts("1,250,000.00 KBS-LEGACY"), vec!["1,250,000.00", "KBS-LEGACY"]);
        assert_eq!(token_texts("($1,250,000.00),"), vec!["(", "$1,250,000.00", ")", ","]);
    }

    #[test]
    fn quotes_split_off() {
        assert_eq!(token_texts("\u{201C}Deposit\u{201D} shall"), vec!["\u{201C}", "Deposit", "\u{201D}", "shall"]);
    }

    #[test]
    fn tokens_reconstruct_document() {
        let text = "See 42 U.S.C. §§6901 (the “Act”), as amended.  Pay $1,250,000.00!";
        let d = doc(text);
        let tokens = tokenize(&d);
        let mut rebuilt = String::new();
        let mut cursor = 0;
        for t in &tokens {
            assert_eq!(d.slice(t.span).unwrap(), t.text);
            assert!(t.span.start >= cursor, "tokens must be ordered and disjoint");
            let gap: String = text.chars().skip(cursor).take(t.span.start - cursor).collect();
            assert!(gap.chars().all(char::is_whitespace));
            rebuilt.push_str(&gap);
            rebuilt.push_str(&t.text);
            cursor = t.span.end;
        }
        rebuilt.extend(text.chars().skip(cursor));
        assert_eq!(rebuilt, text);
    }

    #[test]
    fn stopword_filtering_folds_case() {
        let d = doc("WHEREAS herein Buyer whereas");
        let stop: HashSet<String> = ["whereas", "herein"].iter().map(|s| s.to_string()).collect();
        let kept = remove_stopwords(tokenize(&d), &stop);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].text, "Buyer");
        // empty stopword set is the identity
        let all = remove_stopwords(tokenize(&d), &HashSet::new());
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn ngram_basics() {
        let items = ["a", "b", "c"];
        assert_eq!(ngrams(&items, 2), vec![vec!["a", "b"], vec!["b", "c"]]);
        assert!(ngrams(&items, 4).is_empty());
        assert!(ngrams::<&str>(&[], 1).is_empty());
    }

    #[test]
    fn ngram_count_property() {
        // |ngrams(x, n)| == max(0, len(x) - n + 1)
        for len in 0..8usize {
            let items: Vec<usize> = (0..len).collect();
            for n in 1..6usize {
                let expected = if n > len { 0 } else { len - n + 1 };
                assert_eq!(ngrams(&items, n).len(), expected, "len={len} n={n}");
            }
        }
    }

    #[test]
    fn skipgrams_by_enumeration() {
        let items = ["a", "b", "c"];
        assert_eq!(skipgrams(&items, 2, 1), vec![vec!["a", "b"], vec!["a", "c"], vec!["b", "c"]]);
        // oracle: brute-force index enumeration
        let items = ["a", "b", "c", "d", "e"];
        for n in 1..4usize {
            for k in 0..3usize {
                let mut expect = Vec::new();
                for i in 0..items.len() {
                    for j in i + 1..items.len() {
                        for l in j + 1..items.len() {
                            if n == 3 && l - i + 1 <= n + k {
                                expect.push(vec![items[i], items[j], items[l]]);
                            }
                        }
                        if n == 2 && j - i + 1 <= n + k {
                            expect.push(vec![items[i], items[j]]);
                        }
                    }
                    if n == 1 {
                        expect.push(vec![items[i]]);
                    }
                }
                expect.sort();
                let mut got = skipgrams(&items, n, k);
                got.sort();
                assert_eq!(got, expect, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn char_distribution_counts() {
        let d = char_distribution("aaa", 2);
        assert_eq!(d.get("aa"), Some(&2));
        assert!(char_distribution("ab", 3).is_empty());
        let d = char_distribution("2012", 1);
        assert_eq!(d.get("2"), Some(&2));
        assert_eq!(d.get("0"), Some(&1));
        assert_eq!(d.get("1"), Some(&1));
    }

    #[test]
    fn collocation_frequency_counts() {
        let corpus = vec![doc("a b a b")];
        let table = collocations(&corpus, 2, 10, CollocationScoring::Frequency).unwrap();
        assert_eq!(table.scored[0].0, vec!["a".to_string(), "b".to_string()]);
        assert_eq!(table.scored[0].1, 2);
        // top_k larger than distinct grams returns all grams: "a b", "b a"
        assert_eq!(table.scored.len(), 2);
    }

    #[test]
    fn collocation_llr_matches_oracle() {
        let corpus = vec![doc("a b a b")];
        let table = collocations(&corpus, 2, 1, CollocationScoring::LogLikelihood).unwrap();
        let (gram, count, score) = &table.scored[0];
        assert_eq!(gram.join(" "), "a b");
        assert_eq!(*count, 2);
        // oracle: hand-tallied table for ("a","b"): bigrams ab, ba, ab
        let (o11, o12, o21, o22) = (2u64, 0u64, 0u64, 1u64);
        let n = 3.0f64;
        let e = |r: f64, c: f64| r * c / n;
        let term = |o: f64, e: f64| if o == 0.0 { 0.0 } else { o * (o / e).ln() };
        let expected = 2.0
            * (term(o11 as f64, e(2.0, 2.0))
                + term(o12 as f64, e(2.0, 1.0))
                + term(o21 as f64, e(1.0, 2.0))
                + term(o22 as f64, e(1.0, 1.0)));
        assert!((score - expected).abs() < 1e-9, "{score} vs {expected}");
    }

    #[test]
    fn independent_bigram_scores_zero() {
        // bigrams: ab, ba, ax, xb — count(ab)*N == firsts(a)*seconds(b)
        let corpus = vec![doc("a b a x b")];
        let table = collocations(&corpus, 2, 10, CollocationScoring::LogLikelihood).unwrap();
        let ab = table.scored.iter().find(|(g, _, _)| g.join(" ") == "a b").unwrap();
        assert!(ab.2.abs() < 1e-12, "independence should score ~0, got {}", ab.2);
        assert_eq!(log_likelihood_ratio(1, 1, 1, 1), 0.0);
    }

    #[test]
    fn collocations_ignore_document_order_and_sentence_crossings() {
        let a = doc("one two. three four");
        let b = doc("five six");
        let t1 = collocations(&[a.clone(), b.clone()], 2, 100, CollocationScoring::Frequency).unwrap();
        let t2 = collocations(&[b, a], 2, 100, CollocationScoring::Frequency).unwrap();
        let g1: Vec<_> = t1.scored.iter().map(|(g, c, _)| (g.clone(), *c)).collect();
        let g2: Vec<_> = t2.scored.iter().map(|(g, c, _)| (g.clone(), *c)).collect();
        assert_eq!(g1, g2);
        // "two three" crosses a sentence boundary
        assert!(!g1.iter().any(|(g, _)| g.join(" ") == "two three"));
    }

    #[test]
    fn collocation_argument_errors() {
        assert!(collocations(&[], 2, 10, CollocationScoring::Frequency).is_err());
        assert!(collocations(&[doc("a b")], 4, 10, CollocationScoring::Frequency).is_err());
        assert!(collocations(&[doc("a b")], 2, 0, CollocationScoring::Frequency).is_err());
    }

    #[test]
    fn trigram_collocations() {
        let corpus = vec![doc("the purchase price the purchase price")];
        let table = collocations(&corpus, 3, 2, CollocationScoring::Frequency).unwrap();
        assert_eq!(table.scored[0].0.join(" "), "the purchase price");
        assert_eq!(table.scored[0].1, 2);
    }

    #[test]
    fn csv_export_shape() {
        let corpus = vec![doc("a b a b")];
        let table = collocations(&corpus, 2, 2, CollocationScoring::Frequency).unwrap();
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("rank,gram,count,score"));
        assert_eq!(lines.next(), Some("1,a b,2,2.000000"));
    }
}
