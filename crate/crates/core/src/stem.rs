//! Porter stemmer (the original 1980 algorithm).
//!
//! Within each step the longest matching suffix is taken; when its
//! condition fails no other suffix in that step applies.

use crate::error::{LexError, Result};

/// Porter-stemmed lowercase form of a token. Tokens containing anything
/// other than ASCII letters are lowercased and returned as-is.
pub fn stem(token: &str) -> Result<String> {
    if token.is_empty() {
        return Err(LexError::Argument("cannot stem an empty token".into()));
    }
    let lower = token.to_lowercase();
    if !lower.bytes().all(|b| b.is_ascii_lowercase()) || lower.len() <= 2 {
        return Ok(lower);
    }
    let mut w = Word { b: lower.into_bytes() };
    w.step1a();
    w.step1b();
    w.step1c();
    w.step2();
    w.step3();
    w.step4();
    w.step5a();
    w.step5b();
    Ok(String::from_utf8(w.b).expect("stemmer operates on ASCII"))
}

struct Word {
    b: Vec<u8>,
}

impl Word {
    fn is_consonant(&self, i: usize) -> bool {
        match self.b[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.is_consonant(i - 1),
            _ => true,
        }
    }

    /// The measure m of b[..len]: number of VC sequences in [C](VC)^m[V].
    fn measure(&self, len: usize) -> usize {
        let mut m = 0;
        let mut i = 0;
        while i < len && self.is_consonant(i) {
            i += 1;
        }
        loop {
            while i < len && !self.is_consonant(i) {
                i += 1;
            }
            if i >= len {
                return m;
            }
            while i < len && self.is_consonant(i) {
                i += 1;
            }
            m += 1;
        }
    }

    fn has_vowel(&self, len: usize) -> bool {
        (0..len).any(|i| !self.is_consonant(i))
    }

    /// *d: stem ends with a double consonant.
    fn ends_double_consonant(&self, len: usize) -> bool {
        len >= 2 && self.b[len - 1] == self.b[len - 2] && self.is_consonant(len - 1)
    }

    /// *o: stem ends cvc where the final c is not w, x, or y.
    fn ends_cvc(&self, len: usize) -> bool {
        len >= 3
            && self.is_consonant(len - 3)
            && !self.is_consonant(len - 2)
            && self.is_consonant(len - 1)
            && !matches!(self.b[len - 1], b'w' | b'x' | b'y')
    }

    fn ends_with(&self, suffix: &[u8]) -> Option<usize> {
        self.b.len().checked_sub(suffix.len()).filter(|&s| &self.b[s..] == suffix)
    }

    fn replace(&mut self, stem_len: usize, with: &[u8]) {
        self.b.truncate(stem_len);
        self.b.extend_from_slice(with);
    }

    fn step1a(&mut self) {
        for (suffix, with) in [(&b"sses"[..], &b"ss"[..]), (b"ies", b"i"), (b"ss", b"ss"), (b"s", b"")] {
            if let Some(s) = self.ends_with(suffix) {
                self.replace(s, with);
                return;
            }
        }
    }

    fn step1b(&mut self) {
        if let Some(s) = self.ends_with(b"eed") {
            if self.measure(s) > 0 {
                self.replace(s, b"ee");
            }
            return;
        }
        let removed = [(&b"ed"[..], 0usize), (b"ing", 0)].iter().find_map(|(suffix, _)| {
            let s = self.ends_with(suffix)?;
            self.has_vowel(s).then_some(s)
        });
        let Some(s) = removed else { return };
        self.b.truncate(s);
        // post-removal cleanup
        for (suffix, with) in [(&b"at"[..], &b"ate"[..]), (b"bl", b"ble"), (b"iz", b"ize")] {
            if let Some(p) = self.ends_with(suffix) {
                self.replace(p, with);
                return;
            }
        }
        let len = self.b.len();
        if self.ends_double_consonant(len) && !matches!(self.b[len - 1], b'l' | b's' | b'z') {
            self.b.truncate(len - 1);
        } else if self.measure(len) == 1 && self.ends_cvc(len) {
            self.b.push(b'e');
        }
    }

    fn step1c(&mut self) {
        if let Some(s) = self.ends_with(b"y") {
            if self.has_vowel(s) {
                self.b[s] = b'i';
            }
        }
    }

    fn rule_table(&mut self, rules: &[(&[u8], &[u8])], min_measure: usize) {
        // longest matching suffix wins; condition failure stops the step
        let best = rules
            .iter()
            .filter_map(|&(suffix, with)| self.ends_with(suffix).map(|s| (suffix.len(), s, with)))
            .max_by_key(|&(len, _, _)| len);
        if let Some((_, s, with)) = best {
            if self.measure(s) > min_measure {
                self.replace(s, with);
            }
        }
    }

    fn step2(&mut self) {
        self.rule_table(
            &[
                (b"ational", b"ate"),
                (b"tional", b"tion"),
                (b"enci", b"ence"),
                (b"anci", b"ance"),
                (b"izer", b"ize"),
                (b"abli", b"able"),
                (b"alli", b"al"),
                (b"entli", b"ent"),
                (b"eli", b"e"),
                (b"ousli", b"ous"),
                (b"ization", b"ize"),
                (b"ation", b"ate"),
                (b"ator", b"ate"),
                (b"alism", b"al"),
                (b"iveness", b"ive"),
                (b"fulness", b"ful"),
                (b"ousness", b"ous"),
                (b"aliti", b"al"),
                (b"iviti", b"ive"),
                (b"biliti", b"ble"),
            ],
            0,
        );
    }

    fn step3(&mut self) {
        self.rule_table(
            &[
                (b"icate", b"ic"),
                (b"ative", b""),
                (b"alize", b"al"),
                (b"iciti", b"ic"),
                (b"ical", b"ic"),
                (b"ful", b""),
                (b"ness", b""),
            ],
            0,
        );
    }

    fn step4(&mut self) {
        let rules: &[&[u8]] = &[
            b"al", b"ance", b"ence", b"er", b"ic", b"able", b"ible", b"ant", b"ement", b"ment", b"ent", b"ion",
            b"ou", b"ism", b"ate", b"iti", b"ous", b"ive", b"ize",
        ];
        let best = rules
            .iter()
            .filter_map(|&suffix| self.ends_with(suffix).map(|s| (suffix.len(), s, suffix)))
            .max_by_key(|&(len, _, _)| len);
        if let Some((_, s, suffix)) = best {
            if self.measure(s) > 1 && (suffix != b"ion" || matches!(self.b.get(s.wrapping_sub(1)), Some(b's') | Some(b't'))) {
                self.b.truncate(s);
            }
        }
    }

    fn step5a(&mut self) {
        if let Some(s) = self.ends_with(b"e") {
            let m = self.measure(s);
            if m > 1 || (m == 1 && !self.ends_cvc(s)) {
                self.b.truncate(s);
            }
        }
    }

    fn step5b(&mut self) {
        let len = self.b.len();
        if self.measure(len) > 1 && self.ends_double_consonant(len) && self.b[len - 1] == b'l' {
            self.b.truncate(len - 1);
        }
    }
}
