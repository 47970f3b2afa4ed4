//! Browser bindings for the topicsift demo page.
//!
//! Every export takes plain strings and numbers and returns a JSON string,
//! so the page needs no generated glue beyond what `wasm-bindgen` emits.
//! The `*_json` functions hold the logic and are what the tests call.

use std::path::Path;

use serde::Serialize;
use topicsift::storage::comments_from_csv;
use topicsift::{run_pipeline, sweep, ArticleProfile, FilterConfig, RunReport};
use wasm_bindgen::prelude::*;

const SAMPLE_ARTICLE: &str = include_str!("../../core/tests/fixtures/synthetic/article.txt");
const SAMPLE_COMMENTS: &str = include_str!("../../core/tests/fixtures/synthetic/comments.csv");

#[derive(Serialize)]
struct ProfileView {
    vocabulary: Vec<String>,
    acronyms: Vec<String>,
    sentence_counts: Vec<usize>,
    article_score: f64,
}

#[derive(Serialize)]
struct CommentView<'a> {
    id: u64,
    text: &'a str,
    karma: i64,
    score: f64,
    verdict: &'static str,
    new_words_added: usize,
}

#[derive(Serialize)]
struct FilterView<'a> {
    accept_cutoff: f64,
    growth_cutoff: f64,
    comments: Vec<CommentView<'a>>,
    report: &'a RunReport,
    report_text: String,
}

#[derive(Serialize)]
struct SweepCell {
    theta_min: f64,
    theta_best: f64,
    accepted: usize,
    rejected: usize,
    final_vocab_size: usize,
    success_rate: Option<f64>,
}

#[derive(Serialize)]
struct SweepView {
    rows: Vec<SweepCell>,
    omitted: Vec<(f64, f64)>,
    csv: String,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn parse_comments(csv_text: &str) -> Result<Vec<topicsift::CommentRecord>, String> {
    comments_from_csv(csv_text.as_bytes(), Path::new("comments")).map_err(|e| e.to_string())
}

fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("`{s}` is not a number")))
        .collect()
}

/// The bundled sample thread as `{"article": ..., "comments": ...}`.
pub fn sample_json() -> String {
    serde_json::json!({ "article": SAMPLE_ARTICLE, "comments": SAMPLE_COMMENTS }).to_string()
}

pub fn profile_json(article: &str, min_word_len: usize) -> Result<String, String> {
    let profile = ArticleProfile::build(article, min_word_len).map_err(|e| e.to_string())?;
    let acronyms = topicsift::normalize(article, min_word_len).acronyms;
    to_json(&ProfileView {
        vocabulary: profile.original_vocab.iter().map(String::from).collect(),
        acronyms: acronyms.into_iter().collect(),
        sentence_counts: profile.per_sentence_counts.clone(),
        article_score: profile.article_score,
    })
}

pub fn filter_json(
    article: &str,
    comments_csv: &str,
    theta_min: f64,
    theta_best: f64,
    grow: bool,
    min_word_len: usize,
) -> Result<String, String> {
    let config = FilterConfig::new(theta_min, theta_best, grow, min_word_len).map_err(|e| e.to_string())?;
    let records = parse_comments(comments_csv)?;
    let run = run_pipeline(article, &records, &config).map_err(|e| e.to_string())?;
    let score = run.profile.article_score;
    to_json(&FilterView {
        accept_cutoff: theta_min * score,
        growth_cutoff: theta_best * score,
        comments: run
            .scored
            .iter()
            .map(|s| CommentView {
                id: s.record.id,
                text: &s.record.text,
                karma: s.record.karma,
                score: s.score,
                verdict: s.verdict.as_str(),
                new_words_added: s.new_words_added,
            })
            .collect(),
        report: &run.report,
        report_text: run.report.to_string(),
    })
}

pub fn sweep_json(
    article: &str,
    comments_csv: &str,
    theta_min_grid: &str,
    theta_best_grid: &str,
    grow: bool,
    min_word_len: usize,
) -> Result<String, String> {
    let records = parse_comments(comments_csv)?;
    let mins = parse_grid(theta_min_grid)?;
    let bests = parse_grid(theta_best_grid)?;
    let outcome = sweep(article, &records, &mins, &bests, grow, min_word_len).map_err(|e| e.to_string())?;
    to_json(&SweepView {
        rows: outcome
            .rows
            .iter()
            .map(|r| SweepCell {
                theta_min: r.theta_min,
                theta_best: r.theta_best,
                accepted: r.report.accepted_count,
                rejected: r.report.rejected_count,
                final_vocab_size: r.report.final_vocab_size,
                success_rate: r.report.success_rate,
            })
            .collect(),
        omitted: outcome.omitted.clone(),
        csv: outcome.to_csv(),
    })
}

#[wasm_bindgen]
pub fn sample_thread() -> String {
    sample_json()
}

#[wasm_bindgen]
pub fn profile_article(article: &str, min_word_len: usize) -> Result<String, JsError> {
    profile_json(article, min_word_len).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn filter_thread(
    article: &str,
    comments_csv: &str,
    theta_min: f64,
    theta_best: f64,
    grow: bool,
    min_word_len: usize,
) -> Result<String, JsError> {
    filter_json(article, comments_csv, theta_min, theta_best, grow, min_word_len).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sweep_grid(
    article: &str,
    comments_csv: &str,
    theta_min_grid: &str,
    theta_best_grid: &str,
    grow: bool,
    min_word_len: usize,
) -> Result<String, JsError> {
    sweep_json(article, comments_csv, theta_min_grid, theta_best_grid, grow, min_word_len)
        .map_err(|e| JsError::new(&e))
}
