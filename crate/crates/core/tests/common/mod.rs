#![allow(dead_code)]

use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Deserialize;
use topicsift::CommentRecord;

pub fn fixture_dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

#[derive(Debug, Deserialize)]
pub struct ExpectedComment {
    pub id: u64,
    pub karma: i64,
    pub verdict: String,
    pub score: String,
    pub surviving: usize,
    pub grew: bool,
    pub new_words_added: usize,
}

#[derive(Debug, Deserialize)]
pub struct ExpectedReport {
    pub total_comments: usize,
    pub accepted_count: usize,
    pub rejected_count: usize,
    pub mean_karma_accepted: Option<String>,
    pub mean_karma_rejected: Option<String>,
    pub mean_karma_all: Option<String>,
    pub original_vocab_size: usize,
    pub final_vocab_size: usize,
    pub success_rate: Option<String>,
    pub rejected_fraction: String,
}

#[derive(Debug, Deserialize)]
pub struct ExpectedConfig {
    pub theta_min: f64,
    pub theta_best: f64,
    pub grow: bool,
    pub min_word_length: usize,
}

#[derive(Debug, Deserialize)]
pub struct Expected {
    pub config: ExpectedConfig,
    pub original_vocab: Vec<String>,
    pub article_sentence_counts: Vec<usize>,
    pub article_score: String,
    pub final_vocab: Vec<String>,
    pub comments: Vec<ExpectedComment>,
    pub report: ExpectedReport,
}

pub fn load_expected(file: &str) -> Expected {
    let path = fixture_dir("synthetic").join(file);
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

pub fn of(s: &Option<String>) -> Option<f64> {
    s.as_deref().map(f)
}

const TOPIC: &[&str] = &[
    "battery", "storage", "solar", "panels", "energy", "inverter", "charge", "night", "grid",
    "power", "cells", "lithium", "roof", "install", "sunset", "meter", "cost", "price", "home",
    "watts",
];

const CHATTER: &[&str] = &[
    "the", "and", "a", "of", "to", "is", "it", "in", "I", "you", "that", "this", "lol", "EV", "AI",
    "really", "think", "people", "thing", "great", "never", "always", "weather", "dog", "music",
    "politics", "coffee", "movie", "travel", "pizza", "garden", "chess",
];

const PUNCT: &[&str] = &[" ", " ", " ", ", ", ". ", "; ", "? ", "! ", "\n", " 42 "];

fn sentence_text(rng: &mut StdRng, words: &[&str], n: usize) -> String {
    let mut s = String::new();
    for _ in 0..n {
        s.push_str(words.choose(rng).unwrap());
        s.push_str(PUNCT.choose(rng).unwrap());
    }
    s
}

/// Random article plus `n_comments` comments drawn from topic words,
/// chatter, and words that never appear in the article.
pub fn random_thread(seed: u64, n_comments: usize) -> (String, Vec<CommentRecord>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let n_topic = rng.gen_range(5..TOPIC.len());
    let topic: Vec<&str> = TOPIC
        .choose_multiple(&mut rng, n_topic)
        .copied()
        .collect();
    let mut article_words = topic.clone();
    article_words.extend_from_slice(CHATTER);
    let n_words = rng.gen_range(20..120);
    let article = sentence_text(&mut rng, &article_words, n_words);

    let fresh: Vec<String> = (0..60).map(|i| format!("drift{}", alpha(i))).collect();
    let mut comments = Vec::with_capacity(n_comments);
    for id in 1..=n_comments as u64 {
        let mut pool: Vec<&str> = CHATTER.to_vec();
        if rng.gen_bool(0.7) {
            pool.extend(topic.iter().copied());
        }
        for _ in 0..rng.gen_range(0..4) {
            pool.push(fresh.choose(&mut rng).unwrap().as_str());
        }
        let text = if rng.gen_bool(0.03) {
            String::new()
        } else {
            let n_words = rng.gen_range(1..40);
            sentence_text(&mut rng, &pool, n_words)
        };
        let karma = if rng.gen_bool(0.05) {
            -1
        } else {
            rng.gen_range(0..20_000)
        };
        comments.push(CommentRecord::new(id, text, karma));
    }
    (article, comments)
}

/// Letters-only suffix, so generated words survive cleaning intact.
pub fn alpha(mut i: usize) -> String {
    let mut s = String::new();
    loop {
        s.push((b'a' + (i % 26) as u8) as char);
        i /= 26;
        if i == 0 {
            return s;
        }
    }
}

/// A thread the size of the largest reference thread: a short article and
/// 1001 comments, many of which bring new vocabulary.
pub fn large_thread(seed: u64) -> (String, Vec<CommentRecord>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let article_vocab: Vec<String> = (0..161).map(|i| format!("topic{}", alpha(i))).collect();
    let mut article = String::new();
    for (i, w) in article_vocab.iter().enumerate() {
        article.push_str(w);
        article.push_str(if i % 9 == 8 { ". " } else { " " });
    }
    for w in article_vocab.iter().take(50) {
        article.push_str(w);
        article.push(' ');
    }

    let mut next_fresh = 0usize;
    let mut comments = Vec::with_capacity(1001);
    for id in 1..=1001u64 {
        let mut text = String::new();
        let n_sentences = rng.gen_range(2..8);
        for _ in 0..n_sentences {
            for _ in 0..rng.gen_range(6..14) {
                let roll: f64 = rng.gen();
                if roll < 0.5 {
                    text.push_str(article_vocab.choose(&mut rng).unwrap());
                } else if roll < 0.64 {
                    text.push_str(&format!("novel{}", alpha(next_fresh)));
                    next_fresh += 1;
                } else {
                    text.push_str(CHATTER.choose(&mut rng).unwrap());
                }
                text.push(' ');
            }
            text.push_str(". ");
        }
        comments.push(CommentRecord::new(id, text, rng.gen_range(0..20_000)));
    }
    (article, comments)
}

macro_rules! ensure_eq {
    ($got:expr, $want:expr, $($ctx:tt)*) => {{
        let (g, w) = (&$got, &$want);
        if g != w {
            return Err(format!("{}: got {:?}, want {:?}", format!($($ctx)*), g, w));
        }
    }};
}

/// Runs the synthetic fixture with the oracle's configuration and compares
/// every value bit for bit.
pub fn check_fixture(expected: &Expected) -> Result<(), String> {
    use topicsift::{run_pipeline, FilterConfig, ThreadDataset};

    let dir = fixture_dir("synthetic");
    let data = ThreadDataset::load(&dir.join("article.txt"), &dir.join("comments.csv"))
        .map_err(|e| e.to_string())?;
    let c = &expected.config;
    let config = FilterConfig::new(c.theta_min, c.theta_best, c.grow, c.min_word_length)
        .map_err(|e| e.to_string())?;
    let run = run_pipeline(&data.article_text, &data.comments, &config).map_err(|e| e.to_string())?;

    let vocab: Vec<String> = run.profile.original_vocab.iter().map(String::from).collect();
    ensure_eq!(vocab, expected.original_vocab, "original vocabulary");
    ensure_eq!(run.profile.per_sentence_counts, expected.article_sentence_counts, "article counts");
    ensure_eq!(run.profile.article_score.to_bits(), f(&expected.article_score).to_bits(), "article score bits");

    ensure_eq!(run.scored.len(), expected.comments.len(), "comment count");
    for (got, want) in run.scored.iter().zip(&expected.comments) {
        let id = want.id;
        ensure_eq!(got.record.id, want.id, "comment {id} id");
        ensure_eq!(got.record.karma, want.karma, "comment {id} karma");
        ensure_eq!(got.verdict.as_str(), want.verdict.as_str(), "comment {id} verdict");
        ensure_eq!(got.score.to_bits(), f(&want.score).to_bits(), "comment {id} score bits");
        ensure_eq!(got.surviving_sentence_count, want.surviving, "comment {id} surviving");
        ensure_eq!(got.grew_vocabulary, want.grew, "comment {id} grew");
        ensure_eq!(got.new_words_added, want.new_words_added, "comment {id} new words");
    }

    let final_vocab: Vec<String> = run.final_state.adaptive_vocab.iter().map(String::from).collect();
    ensure_eq!(final_vocab, expected.final_vocab, "final vocabulary");

    let bits = |v: Option<f64>| v.map(f64::to_bits);
    let (r, e) = (&run.report, &expected.report);
    ensure_eq!(r.total_comments, e.total_comments, "total_comments");
    ensure_eq!(r.accepted_count, e.accepted_count, "accepted_count");
    ensure_eq!(r.rejected_count, e.rejected_count, "rejected_count");
    ensure_eq!(bits(r.mean_karma_accepted), bits(of(&e.mean_karma_accepted)), "mean_karma_accepted");
    ensure_eq!(bits(r.mean_karma_rejected), bits(of(&e.mean_karma_rejected)), "mean_karma_rejected");
    ensure_eq!(bits(r.mean_karma_all), bits(of(&e.mean_karma_all)), "mean_karma_all");
    ensure_eq!(r.original_vocab_size, e.original_vocab_size, "original_vocab_size");
    ensure_eq!(r.final_vocab_size, e.final_vocab_size, "final_vocab_size");
    ensure_eq!(bits(r.success_rate), bits(of(&e.success_rate)), "success_rate");
    ensure_eq!(r.rejected_fraction.to_bits(), f(&e.rejected_fraction).to_bits(), "rejected_fraction");
    Ok(())
}

/// Replays recorded API responses and notes the virtual time of every
/// request. Each response takes 30 ms of virtual time to arrive.
pub struct TimedReplay<'a> {
    pub inner: topicsift::hnclient::ReplayTransport,
    pub clock: &'a topicsift::hnclient::ManualClock,
    pub log: std::cell::RefCell<Vec<(String, std::time::Duration)>>,
}

impl<'a> TimedReplay<'a> {
    pub fn recorded(clock: &'a topicsift::hnclient::ManualClock) -> Self {
        TimedReplay {
            inner: topicsift::hnclient::ReplayTransport::from_dir(&fixture_dir("hn")).unwrap(),
            clock,
            log: Default::default(),
        }
    }
}

impl topicsift::hnclient::Transport for TimedReplay<'_> {
    fn get(&self, url: &str) -> Result<String, String> {
        use topicsift::hnclient::Clock;
        self.log.borrow_mut().push((url.to_string(), self.clock.now()));
        self.clock.advance(std::time::Duration::from_millis(30));
        self.inner.get(url)
    }
}
