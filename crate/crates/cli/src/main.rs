//! rex: pattern matching and corpus refinement at the command line.
//!
//! Four commands share one pattern language and one exit-code contract:
//! 0 means at least one match (or general success), 1 means a clean run
//! that found nothing, 2 means a usage or pattern error, and 3 means an
//! I/O or provider failure. Diagnostics go to standard error, data to
//! standard output, so output stays pipeable.
//!
//! Patterns are written bare, with no surrounding slashes. Every command
//! validates its pattern before touching any input.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use rex_core::corpus::load_corpus;
use rex_core::matcher::{find, find_all, span_text};
use rex_core::oracle::oracle_find;
use rex_core::pipeline::{
    extract_captures, format_report, refine, CaptureSample, RefineOptions, ReportFormat,
};
use rex_core::provider::{self, ProviderConfig, ProviderError, Query};
use rex_core::{compile, parse, MatchBudget, MatchResult, StateMachine, SyntaxError};

const MATCHED: u8 = 0;
const NOTHING_FOUND: u8 = 1;
const USAGE: u8 = 2;
const IO_FAILURE: u8 = 3;

/// Step budget installed when neither --max-steps nor REX_MAX_STEPS says
/// otherwise. Large enough for ordinary patterns, small enough that a
/// pathological one fails in well under a second.
const DEFAULT_MAX_STEPS: u64 = 10_000_000;

#[derive(Parser)]
#[command(
    name = "rex",
    version,
    about = "Pattern matching and corpus refinement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Match a pattern against a subject string
    Match(MatchArgs),
    /// Print matching lines from files or standard input
    Grep(GrepArgs),
    /// Print the compiled state machine in Graphviz DOT form
    Explain(ExplainArgs),
    /// Run a pattern over a corpus and report how far it narrows it
    Refine(RefineArgs),
}

#[derive(Args)]
struct MatchArgs {
    /// Pattern, written bare (no surrounding slashes)
    pattern: String,
    /// Text to search
    subject: String,
    /// Print every non-overlapping match instead of only the leftmost
    #[arg(long)]
    all: bool,
    /// Cross-check the leftmost match against the reference interpreter
    #[arg(long)]
    oracle: bool,
    /// Step budget for this run
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: Option<u64>,
}

#[derive(Args)]
struct GrepArgs {
    /// Pattern, written bare (no surrounding slashes)
    pattern: String,
    /// Input files; reads standard input when none are given
    paths: Vec<std::path::PathBuf>,
    /// Print only a per-input count of matching lines
    #[arg(short = 'c', long = "count", conflicts_with = "only_matching")]
    count: bool,
    /// Print each matched substring instead of the whole line
    #[arg(short = 'o', long = "only-matching")]
    only_matching: bool,
    /// Step budget per line
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: Option<u64>,
}

#[derive(Args)]
struct ExplainArgs {
    /// Pattern, written bare (no surrounding slashes)
    pattern: String,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["corpus", "provider"])))]
struct RefineArgs {
    /// Pattern, written bare (no surrounding slashes)
    #[arg(long)]
    pattern: String,
    /// Corpus file (or directory of documents) to load
    #[arg(long)]
    corpus: Option<std::path::PathBuf>,
    /// Corpus service to query; only "http" is supported
    #[arg(long, requires = "base_url", requires = "keywords")]
    provider: Option<String>,
    /// Root URL of the search/fetch service
    #[arg(long)]
    base_url: Option<String>,
    /// Keyword query sent to the provider
    #[arg(long)]
    keywords: Option<String>,
    /// Most documents to request from the provider
    #[arg(long, default_value_t = 100)]
    max: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also print the captured text of this group for every match
    #[arg(long, value_name = "GROUP")]
    captures: Option<usize>,
    /// Environment variable holding the provider credential
    #[arg(long, default_value = "REX_API_KEY", value_name = "NAME")]
    api_key_env: String,
    /// Step budget per document
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Jsonl,
}

/// Restores the default SIGPIPE disposition so `rex ... | head` ends the
/// process quietly, the way grep does, instead of panicking on a write to
/// the closed pipe. Rust mutes the signal before `main` runs.
#[cfg(unix)]
fn die_on_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn die_on_sigpipe() {}

fn main() -> ExitCode {
    die_on_sigpipe();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Match(args) => cmd_match(&args),
        Command::Grep(args) => cmd_grep(&args),
        Command::Explain(args) => cmd_explain(&args),
        Command::Refine(args) => cmd_refine(&args),
    };
    ExitCode::from(code)
}

fn pattern_error(error: SyntaxError) -> u8 {
    eprintln!("rex: {error}");
    USAGE
}

fn usage(message: &str) -> u8 {
    eprintln!("rex: {message}");
    USAGE
}

fn io_failure(message: &str) -> u8 {
    eprintln!("rex: {message}");
    IO_FAILURE
}

/// Flag beats environment beats default.
fn resolve_budget(flag: Option<u64>) -> Result<MatchBudget, String> {
    if let Some(steps) = flag {
        return Ok(MatchBudget::limited(steps));
    }
    match std::env::var("REX_MAX_STEPS") {
        Ok(raw) => match raw.parse::<u64>() {
            Ok(steps) if steps > 0 => Ok(MatchBudget::limited(steps)),
            _ => Err(format!(
                "REX_MAX_STEPS must be a positive integer, not {raw:?}"
            )),
        },
        Err(std::env::VarError::NotPresent) => Ok(MatchBudget::limited(DEFAULT_MAX_STEPS)),
        Err(e) => Err(format!("REX_MAX_STEPS is unreadable: {e}")),
    }
}

fn cmd_match(args: &MatchArgs) -> u8 {
    let pattern = match parse(&args.pattern) {
        Ok(parsed) => parsed,
        Err(error) => return pattern_error(error),
    };
    let budget = match resolve_budget(args.max_steps) {
        Ok(budget) => budget,
        Err(message) => return usage(&message),
    };
    let machine = compile(&pattern);

    let found = if args.all {
        find_all(&machine, &args.subject, &budget)
    } else {
        find(&machine, &args.subject, &budget).map(|leftmost| leftmost.into_iter().collect())
    };
    let matches: Vec<MatchResult> = match found {
        Ok(matches) => matches,
        Err(exceeded) => return io_failure(&exceeded.to_string()),
    };

    if matches.is_empty() {
        println!("no match");
    }
    for result in &matches {
        print_match(result, &args.subject);
    }
    if args.oracle {
        let reference = oracle_find(&pattern, &args.subject);
        let agree = reference.as_ref() == matches.first();
        println!("oracle: {}", if agree { "AGREE" } else { "DISAGREE" });
    }
    if matches.is_empty() {
        NOTHING_FOUND
    } else {
        MATCHED
    }
}

/// The span on its own line, then one line per capture group.
fn print_match(result: &MatchResult, subject: &str) {
    println!("{}", result.span);
    for index in 1..=result.group_count() {
        match result.group(index) {
            Some(span) => println!("{index}: {} {}", span_text(subject, span), span),
            None => println!("{index}: -"),
        }
    }
}

fn cmd_grep(args: &GrepArgs) -> u8 {
    let pattern = match parse(&args.pattern) {
        Ok(parsed) => parsed,
        Err(error) => return pattern_error(error),
    };
    let budget = match resolve_budget(args.max_steps) {
        Ok(budget) => budget,
        Err(message) => return usage(&message),
    };
    let machine = compile(&pattern);

    let mut any_match = false;
    let mut failed = false;
    if args.paths.is_empty() {
        grep_input(
            &machine,
            io::stdin().lock(),
            "-",
            args,
            &budget,
            &mut any_match,
            &mut failed,
        );
    } else {
        for path in &args.paths {
            let display = path.display().to_string();
            match File::open(path) {
                Ok(file) => grep_input(
                    &machine,
                    BufReader::new(file),
                    &display,
                    args,
                    &budget,
                    &mut any_match,
                    &mut failed,
                ),
                Err(error) => {
                    eprintln!("rex: {display}: {error}");
                    failed = true;
                }
            }
        }
    }

    if failed {
        IO_FAILURE
    } else if any_match {
        MATCHED
    } else {
        NOTHING_FOUND
    }
}

fn grep_input(
    machine: &StateMachine,
    reader: impl BufRead,
    display: &str,
    args: &GrepArgs,
    budget: &MatchBudget,
    any_match: &mut bool,
    failed: &mut bool,
) {
    let mut matching_lines = 0usize;
    for (index, line) in reader.lines().enumerate() {
        let number = index + 1;
        let line = match line {
            Ok(line) => line,
            Err(error) => {
                eprintln!("rex: {display}:{number}: {error}");
                *failed = true;
                break;
            }
        };
        let matches = match find_all(machine, &line, budget) {
            Ok(matches) => matches,
            Err(exceeded) => {
                eprintln!("rex: {display}:{number}: {exceeded}");
                *failed = true;
                continue;
            }
        };
        if matches.is_empty() {
            continue;
        }
        matching_lines += 1;
        *any_match = true;
        if args.count {
            continue;
        }
        if args.only_matching {
            for hit in &matches {
                println!("{display}:{number}:{}", span_text(&line, hit.span));
            }
        } else {
            println!("{display}:{number}:{line}");
        }
    }
    if args.count {
        println!("{display}:{matching_lines}");
    }
}

fn cmd_explain(args: &ExplainArgs) -> u8 {
    match parse(&args.pattern) {
        Ok(pattern) => {
            print!("{}", compile(&pattern).to_dot());
            MATCHED
        }
        Err(error) => pattern_error(error),
    }
}

fn cmd_refine(args: &RefineArgs) -> u8 {
    // Everything derivable from the arguments alone is checked before any
    // file or network I/O: the pattern, then the requested capture group
    // against the pattern's group count.
    let pattern = match parse(&args.pattern) {
        Ok(parsed) => parsed,
        Err(error) => return pattern_error(error),
    };
    if let Some(group) = args.captures {
        if group == 0 || group > pattern.group_count as usize {
            return usage(&format!(
                "group-out-of-range: group {group}, pattern has groups 1..={}",
                pattern.group_count
            ));
        }
    }
    let budget = match resolve_budget(args.max_steps) {
        Ok(budget) => budget,
        Err(message) => return usage(&message),
    };

    let corpus = if let Some(path) = &args.corpus {
        match load_corpus(path) {
            Ok(corpus) => corpus,
            Err(error) => return io_failure(&error.to_string()),
        }
    } else {
        let kind = args.provider.as_deref().unwrap_or_default();
        if kind != "http" {
            return usage(&format!("unsupported provider {kind:?}; use \"http\""));
        }
        let base_url = args.base_url.as_deref().unwrap_or_default();
        let keywords = args.keywords.as_deref().unwrap_or_default();
        let mut config = ProviderConfig::http(base_url);
        config.api_key_env_var = Some(args.api_key_env.clone());
        let query = Query {
            keywords: keywords.to_string(),
            max_results: args.max,
        };
        match provider::query(&config, &query) {
            Ok(corpus) => corpus,
            // A bad query or config is the caller's mistake, not the
            // service's failure.
            Err(
                error @ (ProviderError::InvalidQuery { .. } | ProviderError::InvalidConfig { .. }),
            ) => return usage(&error.to_string()),
            Err(error) => return io_failure(&error.to_string()),
        }
    };

    let options = RefineOptions {
        budget,
        ..RefineOptions::default()
    };
    let report = match refine(&corpus, &args.pattern, &options) {
        Ok(report) => report,
        Err(error) => return usage(&error.to_string()),
    };
    let format = match args.format {
        Format::Text => ReportFormat::Text,
        Format::Jsonl => ReportFormat::JsonLines,
    };
    print!("{}", format_report(&report, format));

    if let Some(group) = args.captures {
        match extract_captures(&corpus, &args.pattern, group, &budget) {
            Ok(samples) => print_captures(&samples, group, args.format),
            Err(error) => return usage(&error.to_string()),
        }
    }

    if report.matched_docs >= 1 {
        MATCHED
    } else {
        NOTHING_FOUND
    }
}

fn print_captures(samples: &[CaptureSample], group: usize, format: Format) {
    match format {
        Format::Text => {
            println!("captures (group {group}):");
            for sample in samples {
                println!("{}\t{}", sample.id, sample.captured_text);
            }
        }
        Format::Jsonl => {
            for sample in samples {
                let record = serde_json::json!({
                    "id": sample.id,
                    "group": sample.group_index,
                    "text": sample.captured_text,
                });
                println!("{record}");
            }
        }
    }
}
