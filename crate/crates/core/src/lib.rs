//! Adaptive relevance filtering for comment threads.
//!
//! An article is reduced to a topic vocabulary and a benchmark score. Each
//! incoming comment is scored against that vocabulary in arrival order and
//! accepted when it reaches a fraction (`theta_min`) of the benchmark.
//! Comments that reach a higher fraction (`theta_best`) contribute their own
//! words to the vocabulary, so the filter follows the discussion as it
//! drifts away from the article.
//!
//! ```
//! use topicsift::{run_pipeline, CommentRecord, FilterConfig, Verdict};
//!
//! let article = "Rust compilers check ownership rules.";
//! let comments = [
//!     CommentRecord::new(1, "Ownership rules make compilers strict.", 120),
//!     CommentRecord::new(2, "First!", 3),
//! ];
//! let config = FilterConfig::with_thresholds(0.05, 0.10, true).unwrap();
//! let run = run_pipeline(article, &comments, &config).unwrap();
//! assert_eq!(run.scored[0].verdict, Verdict::Accepted);
//! assert_eq!(run.report.accepted_count, 1);
//! ```

pub mod error;
pub mod evalharness;
pub mod filter;
pub mod hnclient;
pub mod profile;
pub mod storage;
pub mod textnorm;

pub use error::{Error, Result};
pub use evalharness::{compute_report, sweep, RunReport, SweepOutcome, SweepRow};
pub use filter::{
    classify, run_pipeline, run_with_profile, score_comment, AdaptiveFilter, AdaptiveState,
    FilterConfig, PipelineRun, ScoredComment, SkipReason, Verdict,
};
pub use hnclient::{clean_html, CommentRecord, HnClient, HnError, HnItem, KARMA_UNAVAILABLE};
pub use profile::{
    build_article_profile, extract_vocabulary, sentence_intersection_counts, ArticleProfile,
    Vocabulary, DEFAULT_MIN_WORD_LENGTH,
};
pub use storage::{load_run_config, read_comments_csv, write_comments_csv, ThreadDataset};
pub use textnorm::{normalize, NormalizedText};
