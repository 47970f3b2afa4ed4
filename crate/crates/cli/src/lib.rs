//! `topicsift` command line: fetch a thread, filter it, sweep thresholds,
//! and print saved reports.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use topicsift::hnclient::{HnClient, ReplayTransport, SystemClock, Transport, UreqTransport};
use topicsift::storage::{load_run_config, read_article, read_comments_csv};
use topicsift::{run_pipeline, sweep, Error, FilterConfig, HnError, RunReport, ThreadDataset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NETWORK: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "topicsift", version, about = "Adaptive relevance filter for comment threads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Download a Hacker News story and its comments.
    Fetch {
        story_id: u64,
        #[arg(long)]
        out_dir: PathBuf,
        /// Minimum gap between API requests, in milliseconds.
        #[arg(long, default_value_t = topicsift::hnclient::DEFAULT_MIN_INTERVAL_MS)]
        rate_ms: u64,
        /// API root. A `file://` root replays responses recorded on disk.
        #[arg(long, default_value = topicsift::hnclient::DEFAULT_BASE_URL)]
        base_url: String,
    },
    /// Filter a comment thread against its article.
    Filter(FilterArgs),
    /// Run the filter over a grid of thresholds and print a CSV table.
    Sweep(SweepArgs),
    /// Pretty-print a saved run report.
    Report { file: PathBuf },
}

#[derive(Debug, Args)]
struct FilterArgs {
    #[arg(long)]
    article: Option<PathBuf>,
    #[arg(long)]
    comments: Option<PathBuf>,
    /// Preset name (article-1 .. article-10) or a TOML config file.
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    theta_min: Option<f64>,
    #[arg(long)]
    theta_best: Option<f64>,
    /// Disable vocabulary growth.
    #[arg(long)]
    no_grow: bool,
    #[arg(long)]
    min_word_len: Option<usize>,
    /// Write the run report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write per-comment verdicts here as CSV.
    #[arg(long)]
    verdicts: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    article: PathBuf,
    #[arg(long)]
    comments: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    theta_min_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    theta_best_grid: Vec<f64>,
    #[arg(long)]
    no_grow: bool,
    #[arg(long, default_value_t = topicsift::DEFAULT_MIN_WORD_LENGTH)]
    min_word_len: usize,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Config(_) | Error::EmptyArticle => EXIT_USAGE,
            Error::Io { .. } | Error::CsvFormat { .. } => EXIT_IO,
            Error::Hn(HnError::InvalidRequest(_)) => EXIT_USAGE,
            Error::Hn(_) => EXIT_NETWORK,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<HnError> for Failure {
    fn from(e: HnError) -> Self {
        Error::from(e).into()
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to `err`.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Fetch {
            story_id,
            out_dir,
            rate_ms,
            base_url,
        } => fetch(story_id, &out_dir, rate_ms, &base_url, out),
        Command::Filter(args) => filter(args, out),
        Command::Sweep(args) => run_sweep(args, out, err),
        Command::Report { file } => {
            let report = RunReport::read(&file)?;
            writeln!(out, "{report}").map_err(|e| io_failure(Path::new("<stdout>"), e))
        }
    }
}

fn fetch(
    story_id: u64,
    out_dir: &Path,
    rate_ms: u64,
    base_url: &str,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let harvest = if let Some(dir) = base_url.strip_prefix("file://") {
        let replay = ReplayTransport::from_dir(Path::new(dir)).map_err(|e| io_failure(Path::new(dir), e))?;
        harvest_with(replay, story_id, rate_ms, base_url)?
    } else {
        harvest_with(UreqTransport::default(), story_id, rate_ms, base_url)?
    };
    let dataset = ThreadDataset {
        article_text: harvest.article_text,
        comments: harvest.comments,
        source_story_id: Some(story_id),
    };
    dataset.save(out_dir)?;
    writeln!(
        out,
        "story {story_id}: {} comments written to {}",
        dataset.comments.len(),
        out_dir.display()
    )
    .map_err(|e| io_failure(Path::new("<stdout>"), e))
}

fn harvest_with<T: Transport>(
    transport: T,
    story_id: u64,
    rate_ms: u64,
    base_url: &str,
) -> Result<topicsift::hnclient::Harvest, Failure> {
    let mut client = HnClient::new(transport, SystemClock::default())
        .with_base_url(base_url)
        .with_min_interval(Duration::from_millis(rate_ms));
    Ok(client.harvest_thread(story_id)?)
}

fn filter(args: FilterArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let base = args.config.as_deref().map(load_run_config).transpose()?;
    let article = args
        .article
        .or_else(|| base.as_ref().and_then(|c| c.article.clone()))
        .ok_or_else(|| usage("--article is required"))?;
    let comments = args
        .comments
        .or_else(|| base.as_ref().and_then(|c| c.comments.clone()))
        .ok_or_else(|| usage("--comments is required"))?;
    let theta_min = args
        .theta_min
        .or(base.as_ref().map(|c| c.filter.theta_min()))
        .ok_or_else(|| usage("--theta-min is required"))?;
    let theta_best = args
        .theta_best
        .or(base.as_ref().map(|c| c.filter.theta_best()))
        .ok_or_else(|| usage("--theta-best is required"))?;
    let grow = !args.no_grow && base.as_ref().is_none_or(|c| c.filter.grow_enabled());
    let min_word_len = args
        .min_word_len
        .or(base.as_ref().map(|c| c.filter.min_word_length()))
        .unwrap_or(topicsift::DEFAULT_MIN_WORD_LENGTH);
    let config = FilterConfig::new(theta_min, theta_best, grow, min_word_len)?;

    let article_text = read_article(&article)?;
    let records = read_comments_csv(&comments)?;
    let run = run_pipeline(&article_text, &records, &config)?;

    if let Some(path) = &args.report {
        run.report.write(path)?;
    }
    if let Some(path) = &args.verdicts {
        let mut text = String::from("id,score,verdict,karma,new_words_added\n");
        for s in &run.scored {
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                s.record.id,
                s.score,
                s.verdict.as_str(),
                s.record.karma,
                s.new_words_added
            ));
        }
        std::fs::write(path, text).map_err(|e| io_failure(path, e))?;
    }
    writeln!(out, "{}", run.report).map_err(|e| io_failure(Path::new("<stdout>"), e))
}

fn run_sweep(args: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let article_text = read_article(&args.article)?;
    let records = read_comments_csv(&args.comments)?;
    let outcome = sweep(
        &article_text,
        &records,
        &args.theta_min_grid,
        &args.theta_best_grid,
        !args.no_grow,
        args.min_word_len,
    )?;
    for (min, best) in &outcome.omitted {
        let _ = writeln!(
            err,
            "note: skipping theta_min={min} theta_best={best} (theta_best below theta_min)"
        );
    }
    write!(out, "{}", outcome.to_csv()).map_err(|e| io_failure(Path::new("<stdout>"), e))
}
