//! The streaming filter.
//!
//! Each comment is normalized once, scored against the current (possibly
//! grown) vocabulary, accepted or rejected against `theta_min`, and, when it
//! scores at least `theta_best` of the article benchmark, mined for new
//! vocabulary words. Scores are always divided by the size of the ORIGINAL
//! article vocabulary so they stay comparable across the run.
//!
//! Results depend on the order comments arrive in.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evalharness::{compute_report, RunReport};
use crate::hnclient::CommentRecord;
use crate::profile::{
    is_eligible, mean_ratio_score, sentence_intersection_counts, ArticleProfile, Vocabulary,
    DEFAULT_MIN_WORD_LENGTH,
};
use crate::textnorm::{normalize, NormalizedText};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    theta_min: f64,
    theta_best: f64,
    grow_enabled: bool,
    min_word_length: usize,
}

impl FilterConfig {
    pub fn new(
        theta_min: f64,
        theta_best: f64,
        grow_enabled: bool,
        min_word_length: usize,
    ) -> Result<Self> {
        for (name, value) in [("theta_min", theta_min), ("theta_best", theta_best)] {
            if !(value > 0.0 && value <= 1.0) {
                return Err(Error::Config(format!(
                    "{name} must be in (0, 1], got {value}"
                )));
            }
        }
        if theta_best < theta_min {
            return Err(Error::Config(format!(
                "theta_best ({theta_best}) must not be below theta_min ({theta_min})"
            )));
        }
        if min_word_length < 2 {
            return Err(Error::Config(format!(
                "min_word_length must be at least 2, got {min_word_length}"
            )));
        }
        Ok(FilterConfig {
            theta_min,
            theta_best,
            grow_enabled,
            min_word_length,
        })
    }

    /// Same thresholds with the default minimum word length.
    pub fn with_thresholds(theta_min: f64, theta_best: f64, grow_enabled: bool) -> Result<Self> {
        Self::new(theta_min, theta_best, grow_enabled, DEFAULT_MIN_WORD_LENGTH)
    }

    pub fn theta_min(&self) -> f64 {
        self.theta_min
    }

    pub fn theta_best(&self) -> f64 {
        self.theta_best
    }

    pub fn grow_enabled(&self) -> bool {
        self.grow_enabled
    }

    pub fn min_word_length(&self) -> usize {
        self.min_word_length
    }

    pub fn with_grow(mut self, grow_enabled: bool) -> Self {
        self.grow_enabled = grow_enabled;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    /// No text at all. Not counted anywhere.
    MissingText,
    /// Text present but nothing survived intersection. Tallied as rejected.
    NoSurvivingSentences,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accepted,
    Rejected,
    Skipped(SkipReason),
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Accepted => "accepted",
            Verdict::Rejected => "rejected",
            Verdict::Skipped(_) => "skipped",
        }
    }

    /// Whether the comment counts toward the rejected tally.
    pub fn counts_as_rejected(&self) -> bool {
        matches!(
            self,
            Verdict::Rejected | Verdict::Skipped(SkipReason::NoSurvivingSentences)
        )
    }

    /// Whether the comment takes part in the tallies at all.
    pub fn is_counted(&self) -> bool {
        !matches!(self, Verdict::Skipped(SkipReason::MissingText))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredComment {
    pub record: CommentRecord,
    pub score: f64,
    pub surviving_sentence_count: usize,
    pub verdict: Verdict,
    pub grew_vocabulary: bool,
    pub new_words_added: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveState {
    pub adaptive_vocab: Vocabulary,
    pub words_added_total: usize,
    pub comments_processed: usize,
}

impl AdaptiveState {
    pub fn new(profile: &ArticleProfile) -> Self {
        AdaptiveState {
            adaptive_vocab: profile.original_vocab.clone(),
            words_added_total: 0,
            comments_processed: 0,
        }
    }

    pub fn vocab_size(&self) -> usize {
        self.adaptive_vocab.len()
    }

    /// Adds every eligible token of `norm` not yet in the vocabulary.
    pub fn grow_vocabulary(&mut self, norm: &NormalizedText, min_word_length: usize) -> usize {
        let mut added = 0;
        for token in norm.tokens() {
            if is_eligible(token, norm, min_word_length)
                && !self.adaptive_vocab.contains(token)
                && self.adaptive_vocab.insert(token)
            {
                added += 1;
            }
        }
        self.words_added_total += added;
        added
    }

    pub fn process_comment(
        &mut self,
        profile: &ArticleProfile,
        config: &FilterConfig,
        record: &CommentRecord,
    ) -> ScoredComment {
        let skipped = |reason| ScoredComment {
            record: record.clone(),
            score: 0.0,
            surviving_sentence_count: 0,
            verdict: Verdict::Skipped(reason),
            grew_vocabulary: false,
            new_words_added: 0,
        };

        if record.text.is_empty() {
            return skipped(SkipReason::MissingText);
        }
        self.comments_processed += 1;

        let norm = normalize(&record.text, config.min_word_length);
        let (score, surviving) = score_comment(&norm, &self.adaptive_vocab, profile.vocab_size());
        if surviving == 0 {
            return skipped(SkipReason::NoSurvivingSentences);
        }

        let mut grew_vocabulary = false;
        let mut new_words_added = 0;
        if config.grow_enabled && score >= config.theta_best * profile.article_score {
            grew_vocabulary = true;
            new_words_added = self.grow_vocabulary(&norm, config.min_word_length);
        }

        ScoredComment {
            record: record.clone(),
            score,
            surviving_sentence_count: surviving,
            verdict: classify(score, profile.article_score, config.theta_min),
            grew_vocabulary,
            new_words_added,
        }
    }
}

/// Score of a comment against `vocab`, divided by the original vocabulary
/// size. Returns the score and the number of surviving sentences.
pub fn score_comment(
    norm: &NormalizedText,
    vocab: &Vocabulary,
    original_vocab_size: usize,
) -> (f64, usize) {
    let counts = sentence_intersection_counts(norm, vocab);
    (mean_ratio_score(&counts, original_vocab_size), counts.len())
}

pub fn classify(score: f64, article_score: f64, theta_min: f64) -> Verdict {
    if score >= theta_min * article_score {
        Verdict::Accepted
    } else {
        Verdict::Rejected
    }
}

/// A single-article filter that consumes comments one at a time.
#[derive(Debug, Clone)]
pub struct AdaptiveFilter {
    profile: ArticleProfile,
    config: FilterConfig,
    state: AdaptiveState,
}

impl AdaptiveFilter {
    pub fn new(article_text: &str, config: FilterConfig) -> Result<Self> {
        let profile = ArticleProfile::build(article_text, config.min_word_length)?;
        Ok(Self::from_profile(profile, config))
    }

    pub fn from_profile(profile: ArticleProfile, config: FilterConfig) -> Self {
        let state = AdaptiveState::new(&profile);
        AdaptiveFilter {
            profile,
            config,
            state,
        }
    }

    pub fn process(&mut self, record: &CommentRecord) -> ScoredComment {
        self.state
            .process_comment(&self.profile, &self.config, record)
    }

    pub fn profile(&self) -> &ArticleProfile {
        &self.profile
    }

    pub fn config(&self) -> &FilterConfig {
        &self.config
    }

    pub fn state(&self) -> &AdaptiveState {
        &self.state
    }

    pub fn into_parts(self) -> (ArticleProfile, FilterConfig, AdaptiveState) {
        (self.profile, self.config, self.state)
    }
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub profile: ArticleProfile,
    pub scored: Vec<ScoredComment>,
    pub report: RunReport,
    pub final_state: AdaptiveState,
}

impl PipelineRun {
    pub fn accepted_ids(&self) -> Vec<u64> {
        self.scored
            .iter()
            .filter(|s| s.verdict == Verdict::Accepted)
            .map(|s| s.record.id)
            .collect()
    }
}

pub fn run_pipeline<'a, I>(article_text: &str, comments: I, config: &FilterConfig) -> Result<PipelineRun>
where
    I: IntoIterator<Item = &'a CommentRecord>,
{
    let profile = ArticleProfile::build(article_text, config.min_word_length)?;
    Ok(run_with_profile(profile, comments, config))
}

/// Same as [`run_pipeline`] for an already built profile.
pub fn run_with_profile<'a, I>(profile: ArticleProfile, comments: I, config: &FilterConfig) -> PipelineRun
where
    I: IntoIterator<Item = &'a CommentRecord>,
{
    let mut filter = AdaptiveFilter::from_profile(profile, *config);
    let scored: Vec<ScoredComment> = comments.into_iter().map(|c| filter.process(c)).collect();
    let (profile, config, final_state) = filter.into_parts();
    let report = compute_report(&scored, &profile, &final_state, &config);
    PipelineRun {
        profile,
        scored,
        report,
        final_state,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: u64, text: &str) -> CommentRecord {
        CommentRecord::new(id, text, 1)
    }

    fn norm_of(sentences: &[&[&str]]) -> NormalizedText {
        NormalizedText {
            sentences: sentences
                .iter()
                .map(|s| s.iter().map(|t| t.to_string()).collect())
                .collect(),
            ..Default::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(FilterConfig::with_thresholds(0.05, 0.10, true).is_ok());
        assert!(FilterConfig::with_thresholds(0.05, 0.05, true).is_ok());
        assert!(FilterConfig::with_thresholds(0.9, 0.1, true).is_err());
        assert!(FilterConfig::with_thresholds(0.0, 0.1, true).is_err());
        assert!(FilterConfig::with_thresholds(0.1, 1.5, true).is_err());
        assert!(FilterConfig::with_thresholds(f64::NAN, 0.1, true).is_err());
        assert!(FilterConfig::new(0.1, 0.2, true, 1).is_err());
    }

    #[test]
    fn scoring_uses_original_denominator() {
        let vocab = Vocabulary::from_words(4, ["alpha", "bravo"]);
        let norm = norm_of(&[&["alpha", "charlie"], &["bravo", "alpha", "delta"]]);
        let (score, n) = score_comment(&norm, &vocab, 2);
        assert_eq!(n, 2);
        assert_eq!(score, 1.5);
        assert_eq!(score, 3.0 / 2.0);

        let grown = Vocabulary::from_words(4, ["alpha", "bravo", "charlie", "delta"]);
        let (score, _) = score_comment(&norm, &grown, 2);
        assert_eq!(score, 2.5);

        let none = norm_of(&[&["zulu"]]);
        assert_eq!(score_comment(&none, &vocab, 2), (0.0, 0));
    }

    #[test]
    fn article_scores_itself() {
        let text = "Alpha bravo charlie. Delta echo alpha! Foxtrot.";
        let p = ArticleProfile::build(text, 4).unwrap();
        let (score, n) = score_comment(&normalize(text, 4), &p.original_vocab, p.vocab_size());
        assert_eq!(score, p.article_score);
        assert_eq!(n, p.surviving_sentence_count);
    }

    #[test]
    fn classification_threshold() {
        assert_eq!(classify(0.10, 1.94, 0.05), Verdict::Accepted);
        assert_eq!(classify(0.05 * 1.94, 1.94, 0.05), Verdict::Accepted);
        assert_eq!(classify(0.09, 1.94, 0.05), Verdict::Rejected);
        assert_eq!(classify(0.0, 1.0, 0.01), Verdict::Rejected);
    }

    #[test]
    fn growth_adds_only_new_eligible_words() {
        let p = ArticleProfile::build("alpha bravo", 4).unwrap();
        let mut state = AdaptiveState::new(&p);
        let norm = norm_of(&[&["alpha", "charlie"], &["delta"]]);
        assert_eq!(state.grow_vocabulary(&norm, 4), 2);
        assert!(state.adaptive_vocab.contains("charlie"));
        assert!(state.adaptive_vocab.contains("delta"));
        assert_eq!(state.words_added_total, 2);

        assert_eq!(state.grow_vocabulary(&norm_of(&[&["alpha", "delta"]]), 4), 0);
        assert_eq!(state.grow_vocabulary(&norm_of(&[&["an", "the", "of"]]), 4), 0);
        // acronyms are eligible
        assert_eq!(state.grow_vocabulary(&normalize("the AI era", 4), 4), 1);
        assert!(state.adaptive_vocab.contains("ai"));
        // a repeated new word is added once
        assert_eq!(state.grow_vocabulary(&norm_of(&[&["zulu", "zulu"]]), 4), 1);
        assert_eq!(state.vocab_size(), p.vocab_size() + state.words_added_total);
    }

    fn threshold_profile() -> ArticleProfile {
        // article_score = 1.5 with vocabulary {alpha, bravo}
        ArticleProfile::build("alpha alpha bravo.", 4).unwrap()
    }

    #[test]
    fn growth_and_acceptance_are_independent() {
        let p = threshold_profile();
        assert_eq!(p.article_score, 1.5);
        let config = FilterConfig::new(0.5, 0.9, true, 4).unwrap();

        // score 1.5 >= 1.35 grows, and >= 0.75 accepts
        let mut state = AdaptiveState::new(&p);
        let s = state.process_comment(&p, &config, &rec(1, "alpha bravo alpha charlie"));
        assert_eq!(s.score, 1.5);
        assert!(s.grew_vocabulary);
        assert_eq!(s.new_words_added, 1);
        assert_eq!(s.verdict, Verdict::Accepted);

        // score 1.0: below 1.35 so no growth, still above 0.75
        let mut state = AdaptiveState::new(&p);
        let s = state.process_comment(&p, &config, &rec(2, "alpha. bravo. charlie"));
        assert_eq!(s.score, 1.0);
        assert!(!s.grew_vocabulary);
        assert_eq!(s.verdict, Verdict::Accepted);
        assert_eq!(state.vocab_size(), 2);

        // score 0.5 below 0.75 is rejected
        let s = state.process_comment(&p, &config, &rec(3, "bravo charlie"));
        assert_eq!(s.score, 0.5);
        assert_eq!(s.verdict, Verdict::Rejected);
    }

    #[test]
    fn missing_text_leaves_state_alone() {
        let p = threshold_profile();
        let config = FilterConfig::new(0.5, 0.9, true, 4).unwrap();
        let mut state = AdaptiveState::new(&p);
        let before = state.clone();
        let s = state.process_comment(&p, &config, &rec(1, ""));
        assert_eq!(s.verdict, Verdict::Skipped(SkipReason::MissingText));
        assert_eq!(state, before);
    }

    #[test]
    fn no_overlap_is_skipped_but_counted() {
        let p = threshold_profile();
        let config = FilterConfig::new(0.5, 0.9, true, 4).unwrap();
        let mut state = AdaptiveState::new(&p);
        let s = state.process_comment(&p, &config, &rec(1, "nothing relevant here"));
        assert_eq!(s.verdict, Verdict::Skipped(SkipReason::NoSurvivingSentences));
        assert!(s.verdict.counts_as_rejected());
        assert_eq!(state.comments_processed, 1);
    }

    #[test]
    fn growth_disabled_never_changes_vocab() {
        let p = threshold_profile();
        let config = FilterConfig::new(0.1, 0.2, false, 4).unwrap();
        let mut state = AdaptiveState::new(&p);
        for (i, t) in ["alpha charlie", "alpha bravo delta echo", "foxtrot alpha"].iter().enumerate() {
            let s = state.process_comment(&p, &config, &rec(i as u64, t));
            assert!(!s.grew_vocabulary);
        }
        assert_eq!(state.adaptive_vocab, p.original_vocab);
    }

    #[test]
    fn drifted_comment_can_be_accepted() {
        let article = "Rust compilers check ownership rules.";
        let comments = [
            rec(1, "Rust compilers check ownership while gardeners prune tomatoes."),
            rec(2, "Gardeners prune tomatoes."),
        ];
        let config = FilterConfig::new(0.1, 0.5, true, 4).unwrap();
        let run = run_pipeline(article, &comments, &config).unwrap();
        let p = &run.profile;
        assert!(["gardeners", "prune", "tomatoes"].iter().all(|w| !p.original_vocab.contains(w)));
        assert_eq!(run.scored[1].verdict, Verdict::Accepted);

        let baseline = run_pipeline(article, &comments, &config.with_grow(false)).unwrap();
        assert_eq!(
            baseline.scored[1].verdict,
            Verdict::Skipped(SkipReason::NoSurvivingSentences)
        );
    }

    #[test]
    fn pipeline_edge_cases() {
        let article = "Alpha bravo charlie. Delta echo!";
        let config = FilterConfig::new(0.5, 0.9, true, 4).unwrap();

        let run = run_pipeline(article, &[], &config).unwrap();
        assert!(run.scored.is_empty());
        assert_eq!(run.report.final_vocab_size, run.report.original_vocab_size);
        assert_eq!(run.report.mean_karma_all, None);

        let run = run_pipeline(article, &[rec(1, article)], &config).unwrap();
        assert_eq!(run.scored[0].verdict, Verdict::Accepted);
        assert_eq!(run.scored[0].new_words_added, 0);
        assert_eq!(run.scored[0].score, run.profile.article_score);

        assert!(matches!(
            run_pipeline("a b. c", &[], &config),
            Err(Error::EmptyArticle)
        ));
    }

    #[test]
    fn streaming_filter_matches_pipeline() {
        let article = "Alpha bravo charlie. Delta echo!";
        let comments: Vec<_> = ["alpha foxtrot golf", "golf hotel", "india", "", "delta golf"]
            .iter()
            .enumerate()
            .map(|(i, t)| rec(i as u64, t))
            .collect();
        let config = FilterConfig::new(0.1, 0.3, true, 4).unwrap();
        let run = run_pipeline(article, &comments, &config).unwrap();
        let mut f = AdaptiveFilter::new(article, config).unwrap();
        let streamed: Vec<_> = comments.iter().map(|c| f.process(c)).collect();
        assert_eq!(streamed, run.scored);
        assert_eq!(f.state(), &run.final_state);
    }
}
