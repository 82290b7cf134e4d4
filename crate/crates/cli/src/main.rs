use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jobgap::DocumentKind;

mod commands;
mod config;
mod exit;

use config::{Overrides, RunConfig};
use exit::CmdResult;

/// Technology-skill demand in job posts versus program syllabi.
#[derive(Debug, Parser)]
#[command(name = "jobgap", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Overrides,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Download job ads for every search phrase into a job-post corpus
    Ingest,
    /// Convert a directory of .txt/.pdf files into a corpus
    Import {
        dir: PathBuf,
        /// Document kind of the imported files
        #[arg(long, default_value = "syllabus")]
        kind: DocumentKind,
    },
    /// Write the skills detected in each document as JSON lines
    Match {
        corpus: PathBuf,
    },
    /// Coverage, half-year demand, trends and gaps, written as CSV and SVG
    Analyze,
    /// Validate a skill dictionary
    DictCheck {
        /// Dictionary file; the built-in dictionary when absent
        path: Option<PathBuf>,
    },
    /// Re-render the CSV and SVG outputs from a saved bundle.json
    Report {
        bundle: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> CmdResult<()> {
    let cfg = RunConfig::resolve(&cli.flags)?;
    let out = cli.flags.out.as_deref();
    match cli.command {
        Command::Ingest => commands::ingest(&cfg, out).map(drop),
        Command::Import { dir, kind } => commands::import(&cfg, &dir, kind, out).map(drop),
        Command::Match { corpus } => commands::match_skills(&cfg, &corpus, out),
        Command::Analyze => commands::run_analysis(&cfg).map(drop),
        Command::DictCheck { path } => commands::dict_check(&cfg, path.as_deref(), &mut std::io::stdout()),
        Command::Report { bundle } => commands::report(&cfg, bundle.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not errors
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
