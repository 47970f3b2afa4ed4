//! Article profiling: the master topic vocabulary and the benchmark score.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textnorm::{normalize, NormalizedText};

pub const DEFAULT_MIN_WORD_LENGTH: usize = 4;

/// A set of eligible topic words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    words: BTreeSet<String>,
    min_word_length: usize,
}

impl Vocabulary {
    pub fn new(min_word_length: usize) -> Self {
        Vocabulary {
            words: BTreeSet::new(),
            min_word_length,
        }
    }

    pub fn from_words<I, S>(min_word_length: usize, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vocabulary {
            words: words.into_iter().map(Into::into).collect(),
            min_word_length,
        }
    }

    pub fn min_word_length(&self) -> usize {
        self.min_word_length
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    /// Words in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn is_subset(&self, other: &Vocabulary) -> bool {
        self.words.is_subset(&other.words)
    }

    /// Returns `true` if the word was not already present.
    pub fn insert(&mut self, word: impl Into<String>) -> bool {
        self.words.insert(word.into())
    }
}

/// Whether `token` from `norm` may enter a vocabulary: long enough, or a
/// detected acronym.
pub fn is_eligible(token: &str, norm: &NormalizedText, min_word_length: usize) -> bool {
    token.len() >= min_word_length || norm.acronyms.contains(token)
}

pub fn extract_vocabulary(norm: &NormalizedText, min_word_length: usize) -> Vocabulary {
    let mut vocab = Vocabulary::new(min_word_length);
    for token in norm.tokens() {
        if token.len() >= min_word_length {
            vocab.insert(token);
        }
    }
    for acronym in &norm.acronyms {
        vocab.insert(acronym.as_str());
    }
    vocab
}

/// Per-sentence count of tokens (with multiplicity) that are in `vocab`.
/// Sentences with no such token are dropped.
pub fn sentence_intersection_counts(norm: &NormalizedText, vocab: &Vocabulary) -> Vec<usize> {
    norm.sentences
        .iter()
        .map(|s| s.iter().filter(|t| vocab.contains(t)).count())
        .filter(|&c| c > 0)
        .collect()
}

/// `mean(count / denominator) * counts.len()`, or 0 for no counts.
///
/// This is the score shared by articles and comments. The ratios are summed
/// left to right so that results are reproducible bit for bit.
pub fn mean_ratio_score(counts: &[usize], denominator: usize) -> f64 {
    if counts.is_empty() || denominator == 0 {
        return 0.0;
    }
    let denom = denominator as f64;
    let sum: f64 = counts.iter().map(|&c| c as f64 / denom).sum();
    let n = counts.len() as f64;
    sum / n * n
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArticleProfile {
    pub original_vocab: Vocabulary,
    pub surviving_sentence_count: usize,
    pub per_sentence_counts: Vec<usize>,
    pub article_score: f64,
}

impl ArticleProfile {
    pub fn build(article_text: &str, min_word_length: usize) -> Result<Self> {
        let norm = normalize(article_text, min_word_length);
        Self::from_normalized(&norm, min_word_length)
    }

    pub fn from_normalized(norm: &NormalizedText, min_word_length: usize) -> Result<Self> {
        let original_vocab = extract_vocabulary(norm, min_word_length);
        if original_vocab.is_empty() {
            return Err(Error::EmptyArticle);
        }
        let per_sentence_counts = sentence_intersection_counts(norm, &original_vocab);
        let article_score = mean_ratio_score(&per_sentence_counts, original_vocab.len());
        Ok(ArticleProfile {
            surviving_sentence_count: per_sentence_counts.len(),
            per_sentence_counts,
            article_score,
            original_vocab,
        })
    }

    pub fn vocab_size(&self) -> usize {
        self.original_vocab.len()
    }

    pub fn min_word_length(&self) -> usize {
        self.original_vocab.min_word_length()
    }
}

pub fn build_article_profile(article_text: &str, min_word_length: usize) -> Result<ArticleProfile> {
    ArticleProfile::build(article_text, min_word_length)
}
