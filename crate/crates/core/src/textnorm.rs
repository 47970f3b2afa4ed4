//! Text cleaning: raw text in, sentences of lowercase `a..z` tokens out.
//!
//! Sentence boundaries are `.`, `;`, `?`, `!` and newline. After case
//! folding every character outside `a..z` acts as a token separator, so
//! digits, punctuation, accented letters and symbols are all discarded.
//!
//! Acronyms are detected on the raw text before folding: a token whose
//! source characters were all uppercase and whose length is in
//! `[2, min_word_length)` is recorded (folded) in [`NormalizedText::acronyms`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedText {
    /// Non-empty sentences of `^[a-z]+$` tokens, in source order.
    pub sentences: Vec<Vec<String>>,
    /// Short all-caps tokens, case folded.
    pub acronyms: BTreeSet<String>,
    /// Length of the raw input in characters.
    pub source_char_count: usize,
}

impl NormalizedText {
    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.sentences.iter().flatten().map(String::as_str)
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

pub fn is_sentence_boundary(c: char) -> bool {
    matches!(c, '.' | ';' | '?' | '!' | '\n')
}

struct Builder {
    min_word_length: usize,
    sentences: Vec<Vec<String>>,
    acronyms: BTreeSet<String>,
    sentence: Vec<String>,
    token: String,
    token_all_upper: bool,
}

impl Builder {
    fn end_token(&mut self) {
        if self.token.is_empty() {
            return;
        }
        let token = std::mem::take(&mut self.token);
        let len = token.len();
        if self.token_all_upper && len >= 2 && len < self.min_word_length {
            self.acronyms.insert(token.clone());
        }
        self.sentence.push(token);
        self.token_all_upper = true;
    }

    fn end_sentence(&mut self) {
        self.end_token();
        if !self.sentence.is_empty() {
            self.sentences.push(std::mem::take(&mut self.sentence));
        }
    }
}

pub fn normalize(raw: &str, min_word_length: usize) -> NormalizedText {
    let mut b = Builder {
        min_word_length,
        sentences: Vec::new(),
        acronyms: BTreeSet::new(),
        sentence: Vec::new(),
        token: String::new(),
        token_all_upper: true,
    };
    let mut source_char_count = 0;

    for c in raw.chars() {
        source_char_count += 1;
        if is_sentence_boundary(c) {
            b.end_sentence();
            continue;
        }
        for folded in c.to_lowercase() {
            if folded.is_ascii_lowercase() {
                b.token.push(folded);
                b.token_all_upper &= c.is_uppercase();
            } else {
                b.end_token();
            }
        }
    }
    b.end_sentence();

    NormalizedText {
        sentences: b.sentences,
        acronyms: b.acronyms,
        source_char_count,
    }
}
