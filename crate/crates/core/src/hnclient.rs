//! Hacker News thread harvester.
//!
//! Walks a story's comment tree breadth first through the public Firebase
//! API (`/v0/item/{id}.json`, `/v0/user/{name}.json`), pairing every comment
//! with its own author's karma. All requests go through one [`RateLimiter`]
//! so consecutive calls are at least `min_interval` apart.
//!
//! Network access and time are injected through [`Transport`] and [`Clock`],
//! which lets tests replay recorded API responses against a virtual clock.

use std::cell::{Cell, RefCell};
use std::collections::{HashMap, HashSet, VecDeque};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_BASE_URL: &str = "https://hacker-news.firebaseio.com";
pub const DEFAULT_MIN_INTERVAL_MS: u64 = 200;
/// Karma recorded when the author or their karma is unavailable.
pub const KARMA_UNAVAILABLE: i64 = -1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HnError {
    #[error("network error fetching {url}: {message}")]
    Network { url: String, message: String },
    #[error("could not decode response from {url}: {message}")]
    Decode { url: String, message: String },
    #[error("story {0} does not exist")]
    StoryNotFound(u64),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

impl HnError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, HnError::Network { .. } | HnError::Decode { .. })
    }
}

/// An item as served by the API. Unknown fields are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnItem {
    pub id: u64,
    #[serde(default)]
    pub title: Option<String>,
    #[serde(default)]
    pub text: Option<String>,
    #[serde(default)]
    pub by: Option<String>,
    #[serde(default)]
    pub kids: Option<Vec<u64>>,
    #[serde(default)]
    pub deleted: Option<bool>,
}

impl HnItem {
    pub fn is_deleted(&self) -> bool {
        self.deleted.unwrap_or(false)
    }

    pub fn kids(&self) -> &[u64] {
        self.kids.as_deref().unwrap_or(&[])
    }
}

/// One harvested comment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommentRecord {
    pub id: u64,
    /// HTML-cleaned text; empty when the comment had none.
    pub text: String,
    /// Author karma, or [`KARMA_UNAVAILABLE`].
    pub karma: i64,
}

impl CommentRecord {
    pub fn new(id: u64, text: impl Into<String>, karma: i64) -> Self {
        CommentRecord {
            id,
            text: text.into(),
            karma,
        }
    }
}

/// Decodes entities, turns `<p>` into a newline and drops italic tags.
pub fn clean_html(raw: &str) -> String {
    html_escape::decode_html_entities(raw)
        .replace("<p>", "\n")
        .replace("<i>", "")
        .replace("</i>", "")
}

pub trait Transport {
    /// GET `url` and return the body. Any failure is a transport error.
    fn get(&self, url: &str) -> Result<String, String>;
}

pub trait Clock {
    /// Monotonic time since an arbitrary origin.
    fn now(&self) -> Duration;
    fn sleep(&self, d: Duration);
}

#[derive(Debug, Clone)]
pub struct SystemClock {
    origin: Instant,
}

impl Default for SystemClock {
    fn default() -> Self {
        SystemClock {
            origin: Instant::now(),
        }
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }

    fn sleep(&self, d: Duration) {
        std::thread::sleep(d);
    }
}

/// Virtual clock: `sleep` advances time instantly.
#[derive(Debug, Default)]
pub struct ManualClock {
    now: Cell<Duration>,
}

impl ManualClock {
    pub fn advance(&self, d: Duration) {
        self.now.set(self.now.get() + d);
    }
}

impl Clock for ManualClock {
    fn now(&self) -> Duration {
        self.now.get()
    }

    fn sleep(&self, d: Duration) {
        self.advance(d);
    }
}

impl<C: Clock + ?Sized> Clock for &C {
    fn now(&self) -> Duration {
        (**self).now()
    }

    fn sleep(&self, d: Duration) {
        (**self).sleep(d)
    }
}

impl<T: Transport + ?Sized> Transport for &T {
    fn get(&self, url: &str) -> Result<String, String> {
        (**self).get(url)
    }
}

#[derive(Debug, Clone)]
pub struct RateLimiter {
    min_interval: Duration,
    last: Option<Duration>,
}

impl RateLimiter {
    pub fn new(min_interval: Duration) -> Self {
        RateLimiter {
            min_interval,
            last: None,
        }
    }

    /// Blocks until `min_interval` has passed since the previous call.
    pub fn wait(&mut self, clock: &impl Clock) {
        if let Some(last) = self.last {
            let elapsed = clock.now().saturating_sub(last);
            if elapsed < self.min_interval {
                clock.sleep(self.min_interval - elapsed);
            }
        }
        self.last = Some(clock.now());
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub initial_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 3,
            initial_backoff: Duration::from_millis(500),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Harvest {
    pub story_id: u64,
    /// Story title, a newline, then the cleaned story text.
    pub article_text: String,
    pub comments: Vec<CommentRecord>,
}

pub struct HnClient<T, C> {
    base_url: String,
    pretty: bool,
    transport: T,
    clock: C,
    limiter: RateLimiter,
    retry: RetryPolicy,
}

impl<T: Transport, C: Clock> HnClient<T, C> {
    pub fn new(transport: T, clock: C) -> Self {
        HnClient {
            base_url: DEFAULT_BASE_URL.to_string(),
            pretty: false,
            transport,
            clock,
            limiter: RateLimiter::new(Duration::from_millis(DEFAULT_MIN_INTERVAL_MS)),
            retry: RetryPolicy::default(),
        }
    }

    pub fn with_base_url(mut self, base_url: impl Into<String>) -> Self {
        self.base_url = base_url.into().trim_end_matches('/').to_string();
        self
    }

    pub fn with_min_interval(mut self, min_interval: Duration) -> Self {
        self.limiter = RateLimiter::new(min_interval);
        self
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    /// Appends `?print=pretty` to request URLs. Has no effect on parsing.
    pub fn with_pretty(mut self, pretty: bool) -> Self {
        self.pretty = pretty;
        self
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }

    pub fn item_url(&self, id: u64) -> String {
        self.url(&format!("v0/item/{id}.json"))
    }

    pub fn user_url(&self, username: &str) -> String {
        self.url(&format!("v0/user/{username}.json"))
    }

    fn url(&self, path: &str) -> String {
        let suffix = if self.pretty { "?print=pretty" } else { "" };
        format!("{}/{path}{suffix}", self.base_url)
    }

    fn get_json(&mut self, url: &str) -> Result<serde_json::Value, HnError> {
        let mut backoff = self.retry.initial_backoff;
        let mut attempt = 1;
        loop {
            self.limiter.wait(&self.clock);
            let result = self
                .transport
                .get(url)
                .map_err(|message| HnError::Network {
                    url: url.to_string(),
                    message,
                })
                .and_then(|body| {
                    serde_json::from_str(&body).map_err(|e| HnError::Decode {
                        url: url.to_string(),
                        message: e.to_string(),
                    })
                });
            match result {
                Err(e) if e.is_retryable() && attempt < self.retry.attempts => {
                    self.clock.sleep(backoff);
                    backoff *= 2;
                    attempt += 1;
                }
                other => return other,
            }
        }
    }

    /// `Ok(None)` when the API answers `null`.
    pub fn fetch_item(&mut self, id: u64) -> Result<Option<HnItem>, HnError> {
        if id == 0 {
            return Err(HnError::InvalidRequest("item id must be positive".into()));
        }
        let url = self.item_url(id);
        let value = self.get_json(&url)?;
        if value.is_null() {
            return Ok(None);
        }
        serde_json::from_value(value)
            .map(Some)
            .map_err(|e| HnError::Decode {
                url,
                message: e.to_string(),
            })
    }

    pub fn fetch_user_karma(&mut self, username: &str) -> Result<Option<i64>, HnError> {
        if username.is_empty() {
            return Err(HnError::InvalidRequest("username must not be empty".into()));
        }
        let url = self.user_url(username);
        let value = self.get_json(&url)?;
        Ok(value.get("karma").and_then(serde_json::Value::as_i64))
    }

    /// Breadth-first harvest of a story's comments.
    ///
    /// Null and deleted items are dropped, and the children of a deleted
    /// item are not visited.
    pub fn harvest_thread(&mut self, story_id: u64) -> Result<Harvest, HnError> {
        let story = self
            .fetch_item(story_id)?
            .ok_or(HnError::StoryNotFound(story_id))?;
        let article_text = format!(
            "{}\n{}",
            story.title.as_deref().map(clean_html).unwrap_or_default(),
            story.text.as_deref().map(clean_html).unwrap_or_default()
        );

        let mut queue: VecDeque<u64> = story.kids().iter().copied().collect();
        let mut seen: HashSet<u64> = queue.iter().copied().collect();
        let mut comments = Vec::new();

        while let Some(id) = queue.pop_front() {
            let Some(item) = self.fetch_item(id)? else {
                continue;
            };
            if item.is_deleted() {
                continue;
            }
            let karma = match item.by.as_deref() {
                Some(user) if !user.is_empty() => {
                    self.fetch_user_karma(user)?.unwrap_or(KARMA_UNAVAILABLE)
                }
                _ => KARMA_UNAVAILABLE,
            };
            let text = item.text.as_deref().map(clean_html).unwrap_or_default();
            comments.push(CommentRecord::new(item.id, text, karma));
            for &kid in item.kids() {
                if seen.insert(kid) {
                    queue.push_back(kid);
                }
            }
        }

        Ok(Harvest {
            story_id,
            article_text,
            comments,
        })
    }
}

/// Serves recorded API responses keyed by URL path (`v0/item/1.json`),
/// ignoring the host and query string. Every requested URL is logged.
#[derive(Debug, Default)]
pub struct ReplayTransport {
    responses: HashMap<String, String>,
    requests: RefCell<Vec<String>>,
}

impl ReplayTransport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, path: impl Into<String>, body: impl Into<String>) {
        self.responses.insert(path.into(), body.into());
    }

    /// Loads `<dir>/item/*.json` and `<dir>/user/*.json`.
    pub fn from_dir(dir: &Path) -> std::io::Result<Self> {
        if !dir.is_dir() {
            return Err(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "replay directory not found",
            ));
        }
        let mut t = Self::new();
        for kind in ["item", "user"] {
            let sub: PathBuf = dir.join(kind);
            if !sub.is_dir() {
                continue;
            }
            for entry in std::fs::read_dir(&sub)? {
                let path = entry?.path();
                if path.extension().is_some_and(|e| e == "json") {
                    let name = path.file_name().unwrap().to_string_lossy().into_owned();
                    t.insert(format!("v0/{kind}/{name}"), std::fs::read_to_string(&path)?);
                }
            }
        }
        Ok(t)
    }

    pub fn requests(&self) -> Vec<String> {
        self.requests.borrow().clone()
    }

    fn key(url: &str) -> &str {
        let url = url.split('?').next().unwrap_or(url);
        match url.find("v0/") {
            Some(i) => &url[i..],
            None => url,
        }
    }
}

impl Transport for ReplayTransport {
    fn get(&self, url: &str) -> Result<String, String> {
        self.requests.borrow_mut().push(url.to_string());
        self.responses
            .get(Self::key(url))
            .cloned()
            .ok_or_else(|| "404 Not Found (no recorded response)".to_string())
    }
}

#[cfg(feature = "http")]
pub use http::UreqTransport;

#[cfg(feature = "http")]
mod http {
    use std::time::Duration;

    use super::Transport;

    /// Blocking HTTPS transport.
    pub struct UreqTransport {
        agent: ureq::Agent,
    }

    impl Default for UreqTransport {
        fn default() -> Self {
            let config = ureq::Agent::config_builder()
                .timeout_global(Some(Duration::from_secs(30)))
                .build();
            UreqTransport {
                agent: config.into(),
            }
        }
    }

    impl Transport for UreqTransport {
        fn get(&self, url: &str) -> Result<String, String> {
            self.agent
                .get(url)
                .call()
                .map_err(|e| e.to_string())?
                .body_mut()
                .read_to_string()
                .map_err(|e| e.to_string())
        }
    }
}
