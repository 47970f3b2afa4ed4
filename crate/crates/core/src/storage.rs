//! On-disk formats: the comments CSV, article text files and run
//! configuration, including the ten bundled article presets.
//!
//! # Comments CSV
//!
//! UTF-8, header exactly `comment,karma`, one row per comment in thread
//! order. Standard CSV quoting. `karma` is an integer, `-1` when unknown.
//! An empty `comment` field marks a comment with no text. Row numbers
//! (starting at 1) become the record ids on read.
//!
//! # Run configuration
//!
//! A flat TOML file:
//!
//! ```toml
//! preset = "article-7"      # optional, supplies defaults for the thresholds
//! theta_min = 0.02
//! theta_best = 0.10
//! grow = true               # default true
//! min_word_length = 4       # default 4
//! article = "article.txt"   # optional, relative to the config file
//! comments = "comments.csv" # optional, relative to the config file
//! ```

use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::FilterConfig;
use crate::hnclient::CommentRecord;
use crate::profile::DEFAULT_MIN_WORD_LENGTH;

pub const COMMENTS_CSV_HEADER: [&str; 2] = ["comment", "karma"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreadDataset {
    pub article_text: String,
    pub comments: Vec<CommentRecord>,
    pub source_story_id: Option<u64>,
}

impl ThreadDataset {
    pub fn load(article: &Path, comments: &Path) -> Result<Self> {
        Ok(ThreadDataset {
            article_text: read_article(article)?,
            comments: read_comments_csv(comments)?,
            source_story_id: None,
        })
    }

    /// Writes `article.txt` and `comments.csv` into `dir`, creating it.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let article = dir.join("article.txt");
        std::fs::write(&article, &self.article_text).map_err(|e| Error::io(&article, e))?;
        write_comments_csv(&dir.join("comments.csv"), &self.comments)
    }
}

/// Reads an article as UTF-8, replacing invalid sequences.
pub fn read_article(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

pub fn comments_to_csv<W: std::io::Write>(out: W, comments: &[CommentRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COMMENTS_CSV_HEADER)?;
    for c in comments {
        w.write_record([c.text.as_str(), &c.karma.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_comments_csv(path: &Path, comments: &[CommentRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    comments_to_csv(file, comments).map_err(|e| csv_error(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        kind => Error::CsvFormat {
            path: path.to_path_buf(),
            row,
            message: format!("{kind:?}"),
        },
    }
}

/// Parses comments CSV text. `origin` only labels errors.
pub fn comments_from_csv<R: std::io::Read>(input: R, origin: &Path) -> Result<Vec<CommentRecord>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(input);
    let bad = |row: usize, message: String| Error::CsvFormat {
        path: origin.to_path_buf(),
        row,
        message,
    };

    let header = r.headers().map_err(|e| csv_error(origin, e))?;
    if header.iter().ne(COMMENTS_CSV_HEADER) {
        return Err(bad(1, format!("expected header `comment,karma`, found `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }

    let mut comments = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(|e| csv_error(origin, e))?;
        let line = record.position().map_or(i + 2, |p| p.line() as usize);
        let karma = record[1]
            .trim()
            .parse::<i64>()
            .map_err(|_| bad(line, format!("karma `{}` is not an integer", &record[1])))?;
        comments.push(CommentRecord::new(i as u64 + 1, &record[0], karma));
    }
    Ok(comments)
}

pub fn read_comments_csv(path: &Path) -> Result<Vec<CommentRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    comments_from_csv(file, path)
}

/// Numbers one of the ten reference threads was reported with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportedResults {
    pub article_score: f64,
    /// `theta_min * article_score`, as published.
    pub cutoff: f64,
    pub total_comments: usize,
    pub approved_base: usize,
    pub approved_adaptive: usize,
    pub vocab_original: usize,
    pub vocab_final: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub title: &'static str,
    pub theta_min: f64,
    pub theta_best: f64,
    pub reported: ReportedResults,
}

impl Preset {
    pub fn filter_config(&self) -> FilterConfig {
        FilterConfig::new(self.theta_min, self.theta_best, true, DEFAULT_MIN_WORD_LENGTH)
            .expect("bundled presets are valid")
    }
}

macro_rules! preset {
    ($name:literal, $title:literal, $min:literal, $best:literal,
     $score:literal, $cut:literal, $total:literal, $base:literal, $adapt:literal, $v0:literal, $v1:literal) => {
        Preset {
            name: $name,
            title: $title,
            theta_min: $min,
            theta_best: $best,
            reported: ReportedResults {
                article_score: $score,
                cutoff: $cut,
                total_comments: $total,
                approved_base: $base,
                approved_adaptive: $adapt,
                vocab_original: $v0,
                vocab_final: $v1,
            },
        }
    };
}

/// The ten Hacker News threads the filter was originally tuned on.
pub const PRESETS: [Preset; 10] = [
    preset!("article-1", "Warning: Microsoft Signature PC program now requires that you can't run Linux",
        0.05, 0.10, 1.94, 0.097, 438, 42, 60, 336, 766),
    preset!("article-2", "An A/B Testing Story",
        0.01, 0.05, 1.89, 0.0189, 47, 24, 25, 673, 870),
    preset!("article-3", "Researchers teleport particle of light six kilometres",
        0.01, 0.05, 1.69, 0.0169, 154, 110, 131, 303, 1549),
    preset!("article-4", "A 16-year-old British girl earns £48,000 helping Chinese people name their babies",
        0.01, 0.05, 1.62, 0.0162, 199, 150, 178, 191, 1698),
    preset!("article-5", "The Bizarre Role Reversal of Apple and Microsoft",
        0.03, 0.08, 1.42, 0.0426, 176, 59, 107, 321, 1537),
    preset!("article-6", "Of course smart homes are targets for hackers",
        0.03, 0.08, 1.7, 0.051, 59, 26, 40, 206, 800),
    preset!("article-7", "Soylent halts sales of its powder as customers keep getting sick",
        0.02, 0.10, 1.3, 0.026, 1001, 542, 893, 161, 5318),
    preset!("article-8", "Google AI invents its own cryptographic algorithm",
        0.04, 0.10, 1.67, 0.0668, 162, 46, 60, 231, 941),
    preset!("article-9", "General questions about the Airbnb Community Commitment",
        0.04, 0.10, 1.66, 0.0664, 160, 45, 126, 109, 1480),
    preset!("article-10", "Cognitive bias cheat sheet",
        0.005, 0.02, 2.1, 0.0105, 139, 78, 87, 862, 1331),
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub filter: FilterConfig,
    pub article: Option<PathBuf>,
    pub comments: Option<PathBuf>,
    pub preset: Option<&'static Preset>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    preset: Option<String>,
    theta_min: Option<f64>,
    theta_best: Option<f64>,
    grow: Option<bool>,
    min_word_length: Option<usize>,
    article: Option<PathBuf>,
    comments: Option<PathBuf>,
}

fn lookup_preset(name: &str) -> Result<&'static Preset> {
    preset(name).ok_or_else(|| Error::Config(format!("unknown preset `{name}`")))
}

/// Parses configuration text. Relative paths resolve against `base_dir`.
pub fn parse_run_config(text: &str, base_dir: &Path) -> Result<RunConfig> {
    let file: ConfigFile =
        toml::from_str(text).map_err(|e| Error::Config(format!("malformed config: {e}")))?;
    let preset = file.preset.as_deref().map(lookup_preset).transpose()?;
    let theta_min = file
        .theta_min
        .or(preset.map(|p| p.theta_min))
        .ok_or_else(|| Error::Config("theta_min is required".into()))?;
    let theta_best = file
        .theta_best
        .or(preset.map(|p| p.theta_best))
        .ok_or_else(|| Error::Config("theta_best is required".into()))?;
    let filter = FilterConfig::new(
        theta_min,
        theta_best,
        file.grow.unwrap_or(true),
        file.min_word_length.unwrap_or(DEFAULT_MIN_WORD_LENGTH),
    )?;
    let resolve = |p: PathBuf| if p.is_relative() { base_dir.join(p) } else { p };
    Ok(RunConfig {
        filter,
        article: file.article.map(resolve),
        comments: file.comments.map(resolve),
        preset,
    })
}

/// Accepts a preset name (`article-1` .. `article-10`) or a config file path.
pub fn load_run_config(source: &str) -> Result<RunConfig> {
    if let Some(p) = preset(source) {
        return Ok(RunConfig {
            filter: p.filter_config(),
            article: None,
            comments: None,
            preset: Some(p),
        });
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_run_config(&text, path.parent().unwrap_or(Path::new("")))
}
