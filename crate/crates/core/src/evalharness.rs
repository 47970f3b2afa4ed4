//! Karma-based validation of filter runs, and threshold sweeps.
//!
//! Commenter karma is used as a rough proxy for comment quality: a filter
//! setting is doing its job when the accepted comments carry a higher mean
//! karma than the thread as a whole.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{run_with_profile, AdaptiveState, FilterConfig, ScoredComment, Verdict};
use crate::hnclient::{CommentRecord, KARMA_UNAVAILABLE};
use crate::profile::ArticleProfile;

/// Summary of one filter run. Absent means (empty buckets) are `None` and
/// are left out of the serialized form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub total_comments: usize,
    pub accepted_count: usize,
    pub rejected_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_karma_accepted: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_karma_rejected: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_karma_all: Option<f64>,
    pub original_vocab_size: usize,
    pub final_vocab_size: usize,
    /// `(mean_karma_accepted - mean_karma_all) / mean_karma_accepted`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub success_rate: Option<f64>,
    /// `rejected / (accepted + rejected)`; the older "accepted / total - 1"
    /// figure is `-rejected_fraction`.
    pub rejected_fraction: f64,
    pub article_score: f64,
    pub theta_min: f64,
    pub theta_best: f64,
    pub grow_enabled: bool,
}

#[derive(Default)]
struct KarmaMean {
    sum: f64,
    n: usize,
}

impl KarmaMean {
    fn push(&mut self, karma: i64) {
        if karma != KARMA_UNAVAILABLE {
            self.sum += karma as f64;
            self.n += 1;
        }
    }

    fn mean(&self) -> Option<f64> {
        (self.n > 0).then(|| self.sum / self.n as f64)
    }
}

pub fn compute_report(
    scored: &[ScoredComment],
    profile: &ArticleProfile,
    state: &AdaptiveState,
    config: &FilterConfig,
) -> RunReport {
    let mut accepted = KarmaMean::default();
    let mut rejected = KarmaMean::default();
    let mut all = KarmaMean::default();
    let (mut accepted_count, mut rejected_count) = (0, 0);

    for s in scored.iter().filter(|s| s.verdict.is_counted()) {
        let karma = s.record.karma;
        if s.verdict == Verdict::Accepted {
            accepted_count += 1;
            accepted.push(karma);
        } else {
            rejected_count += 1;
            rejected.push(karma);
        }
        all.push(karma);
    }

    let mean_karma_accepted = accepted.mean();
    let mean_karma_all = all.mean();
    let success_rate = match (mean_karma_accepted, mean_karma_all) {
        (Some(acc), Some(all)) if acc != 0.0 => Some((acc - all) / acc),
        _ => None,
    };
    let total_comments = accepted_count + rejected_count;
    let rejected_fraction = if total_comments == 0 {
        0.0
    } else {
        rejected_count as f64 / total_comments as f64
    };

    RunReport {
        total_comments,
        accepted_count,
        rejected_count,
        mean_karma_accepted,
        mean_karma_rejected: rejected.mean(),
        mean_karma_all,
        original_vocab_size: profile.vocab_size(),
        final_vocab_size: state.vocab_size(),
        success_rate,
        rejected_fraction,
        article_score: profile.article_score,
        theta_min: config.theta_min(),
        theta_best: config.theta_best(),
        grow_enabled: config.grow_enabled(),
    }
}

impl RunReport {
    /// Flat `key = value` text (TOML), one line per present field.
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("report fields are plain scalars")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("malformed report: {e}")))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.2}"))
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Second filter: {}", self.grow_enabled)?;
        writeln!(f, "Minimum cutoff for standard filter: {}", self.theta_min)?;
        writeln!(f, "Minimum cutoff for related content: {}", self.theta_best)?;
        writeln!(f, "Article score: {:.4}", self.article_score)?;
        writeln!(f, "Overall average karma: {}", opt(self.mean_karma_all))?;
        writeln!(f, "Good comments: {}", self.accepted_count)?;
        writeln!(f, "Average good karma: {}", opt(self.mean_karma_accepted))?;
        writeln!(f, "Bad comments: {}", self.rejected_count)?;
        writeln!(f, "Average bad karma: {}", opt(self.mean_karma_rejected))?;
        writeln!(f, "Original master word set count: {}", self.original_vocab_size)?;
        writeln!(f, "Master word set count: {}", self.final_vocab_size)?;
        writeln!(
            f,
            "Overall success rate: {}",
            self.success_rate
                .map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"))
        )?;
        writeln!(f, "Rejected fraction: {:.4}", self.rejected_fraction)?;
        write!(f, "Total comments: {}", self.total_comments)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta_min: f64,
    pub theta_best: f64,
    pub report: RunReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    /// Grid cells left out because `theta_best < theta_min`.
    pub omitted: Vec<(f64, f64)>,
}

fn sorted_grid(grid: &[f64], name: &str) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::Config(format!("{name} grid is empty")));
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    Ok(g)
}

/// Runs the whole pipeline once per valid `(theta_min, theta_best)` cell.
/// Rows come out ordered by `theta_min`, then `theta_best`.
pub fn sweep(
    article_text: &str,
    comments: &[CommentRecord],
    theta_min_grid: &[f64],
    theta_best_grid: &[f64],
    grow_enabled: bool,
    min_word_length: usize,
) -> Result<SweepOutcome> {
    let mins = sorted_grid(theta_min_grid, "theta_min")?;
    let bests = sorted_grid(theta_best_grid, "theta_best")?;
    let profile = ArticleProfile::build(article_text, min_word_length)?;

    let mut rows = Vec::new();
    let mut omitted = Vec::new();
    for &theta_min in &mins {
        for &theta_best in &bests {
            if theta_best < theta_min {
                omitted.push((theta_min, theta_best));
                continue;
            }
            let config = FilterConfig::new(theta_min, theta_best, grow_enabled, min_word_length)?;
            let run = run_with_profile(profile.clone(), comments, &config);
            rows.push(SweepRow {
                theta_min,
                theta_best,
                report: run.report,
            });
        }
    }
    Ok(SweepOutcome { rows, omitted })
}

pub const SWEEP_CSV_HEADER: &str = "theta_min,theta_best,grow_enabled,total_comments,accepted_count,rejected_count,mean_karma_accepted,mean_karma_rejected,mean_karma_all,original_vocab_size,final_vocab_size,success_rate,rejected_fraction";

impl SweepOutcome {
    /// CSV table, one row per cell. Absent values are empty fields.
    pub fn to_csv(&self) -> String {
        fn o(v: Option<f64>) -> String {
            v.map(|v| v.to_string()).unwrap_or_default()
        }
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let r = &row.report;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                row.theta_min,
                row.theta_best,
                r.grow_enabled,
                r.total_comments,
                r.accepted_count,
                r.rejected_count,
                o(r.mean_karma_accepted),
                o(r.mean_karma_rejected),
                o(r.mean_karma_all),
                r.original_vocab_size,
                r.final_vocab_size,
                o(r.success_rate),
                r.rejected_fraction,
            ));
        }
        out
    }
}
