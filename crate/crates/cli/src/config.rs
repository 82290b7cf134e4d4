//! Run configuration: a TOML file, overridden field by field by flags.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::Args;
use jobgap::{analysis::DEFAULT_DEADBAND, IntervalRange};
use jobgap_ingest::DEFAULT_PHRASES;
use serde::Deserialize;

use crate::exit::{usage, CmdResult};

pub const DEFAULT_PAGE_SIZE: usize = 100;

/// Options shared by every subcommand. Each one overrides the config file.
#[derive(Debug, Default, Clone, Args)]
pub struct Overrides {
    /// TOML run configuration
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// First day of the date range (YYYY-MM-DD)
    #[arg(long, global = true, value_name = "DATE")]
    pub from: Option<NaiveDate>,
    /// Last day of the date range (YYYY-MM-DD), inclusive
    #[arg(long, global = true, value_name = "DATE")]
    pub to: Option<NaiveDate>,
    /// Skill dictionary (TOML); the built-in dictionary when absent
    #[arg(long, global = true, value_name = "FILE")]
    pub dict: Option<PathBuf>,
    /// Output file or directory, depending on the subcommand
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Serve archive requests from a local JSONL file of raw ads
    #[arg(long, global = true, value_name = "FILE")]
    pub archive_fixture: Option<PathBuf>,
    /// Restrict trend rows to these skills (comma separated)
    #[arg(long, global = true, value_delimiter = ',', value_name = "SKILLS")]
    pub skills: Option<Vec<String>>,
    /// Archive page size
    #[arg(long, global = true, value_name = "N")]
    pub page_size: Option<usize>,
    /// Slope deadband, in percentage points per year, for the trend verdict
    #[arg(long, global = true, value_name = "PP")]
    pub epsilon: Option<f64>,
    /// Job-post corpus (JSONL)
    #[arg(long, global = true, value_name = "FILE")]
    pub jobs: Option<PathBuf>,
    /// Syllabus corpus (JSONL)
    #[arg(long, global = true, value_name = "FILE")]
    pub syllabi: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    base_url: Option<String>,
    archive_fixture: Option<PathBuf>,
    phrases: Option<Vec<String>>,
    from: Option<NaiveDate>,
    to: Option<NaiveDate>,
    dictionary: Option<PathBuf>,
    jobs: Option<PathBuf>,
    syllabi: Option<PathBuf>,
    out: Option<PathBuf>,
    epsilon: Option<f64>,
    page_size: Option<usize>,
    skills: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub base_url: Option<String>,
    pub archive_fixture: Option<PathBuf>,
    pub phrases: Vec<String>,
    pub from: NaiveDate,
    pub to: NaiveDate,
    pub dictionary: Option<PathBuf>,
    pub jobs: Option<PathBuf>,
    pub syllabi: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub epsilon: f64,
    pub page_size: usize,
    pub skills: Option<Vec<String>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            base_url: None,
            archive_fixture: None,
            phrases: DEFAULT_PHRASES.iter().map(|p| p.to_string()).collect(),
            from: NaiveDate::from_ymd_opt(2016, 1, 1).expect("valid date"),
            to: NaiveDate::from_ymd_opt(2021, 12, 31).expect("valid date"),
            dictionary: None,
            jobs: None,
            syllabi: None,
            out: None,
            epsilon: DEFAULT_DEADBAND,
            page_size: DEFAULT_PAGE_SIZE,
            skills: None,
        }
    }
}

impl RunConfig {
    /// Reads the config file named by `--config`, if any, then applies the flags.
    pub fn resolve(flags: &Overrides) -> CmdResult<Self> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
                let base = path.parent().unwrap_or(Path::new(""));
                Some((parse_file(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?, base.to_path_buf()))
            }
            None => None,
        };
        let mut cfg = RunConfig::default();
        if let Some((file, base)) = file {
            cfg.apply_file(file, &base);
        }
        cfg.apply_flags(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, file: ConfigFile, base: &Path) {
        // relative paths in a config file are relative to the file itself
        let rel = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
        self.base_url = file.base_url.or(self.base_url.take());
        self.archive_fixture = file.archive_fixture.map(rel).or(self.archive_fixture.take());
        if let Some(p) = file.phrases {
            self.phrases = p;
        }
        self.from = file.from.unwrap_or(self.from);
        self.to = file.to.unwrap_or(self.to);
        self.dictionary = file.dictionary.map(rel).or(self.dictionary.take());
        self.jobs = file.jobs.map(rel).or(self.jobs.take());
        self.syllabi = file.syllabi.map(rel).or(self.syllabi.take());
        self.out = file.out.map(rel).or(self.out.take());
        self.epsilon = file.epsilon.unwrap_or(self.epsilon);
        self.page_size = file.page_size.unwrap_or(self.page_size);
        self.skills = file.skills.or(self.skills.take());
    }

    fn apply_flags(&mut self, f: &Overrides) {
        fn set<T: Clone>(slot: &mut Option<T>, flag: &Option<T>) {
            if flag.is_some() {
                slot.clone_from(flag);
            }
        }
        set(&mut self.archive_fixture, &f.archive_fixture);
        set(&mut self.dictionary, &f.dict);
        set(&mut self.jobs, &f.jobs);
        set(&mut self.syllabi, &f.syllabi);
        set(&mut self.out, &f.out);
        set(&mut self.skills, &f.skills);
        self.from = f.from.unwrap_or(self.from);
        self.to = f.to.unwrap_or(self.to);
        self.epsilon = f.epsilon.unwrap_or(self.epsilon);
        self.page_size = f.page_size.unwrap_or(self.page_size);
    }

    pub fn validate(&self) -> CmdResult<()> {
        if self.from > self.to {
            return Err(usage(format!("--from {} is after --to {}", self.from, self.to)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(usage(format!("epsilon must be a finite number >= 0, got {}", self.epsilon)));
        }
        if self.page_size == 0 {
            return Err(usage("page size must be at least 1"));
        }
        if self.phrases.iter().any(|p| p.trim().is_empty()) {
            return Err(usage("search phrases must not be empty"));
        }
        if let Some(skills) = &self.skills {
            if skills.iter().any(|s| s.trim().is_empty()) {
                return Err(usage("--skills contains an empty name"));
            }
        }
        Ok(())
    }

    pub fn range(&self) -> CmdResult<IntervalRange> {
        IntervalRange::from_dates(self.from, self.to).map_err(|e| usage(e.to_string()))
    }
}

fn parse_file(text: &str) -> Result<ConfigFile, toml::de::Error> {
    toml::from_str(text)
}
