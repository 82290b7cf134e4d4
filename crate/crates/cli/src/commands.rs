use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use jobgap::{
    analyze, emit_charts, emit_csv, load_corpus, load_corpus_as, load_dictionary, match_corpus, save_corpus,
    AnalysisOptions, Corpus, DocumentKind, ReportBundle, SkillDictionary,
};
use jobgap_ingest::{
    fetch_job_posts, import_text_dir, load_fixture_archive, ArchiveQuery, ArchiveSource, HttpArchive, IngestReport,
    RetryPolicy,
};

use crate::config::RunConfig;
use crate::exit::{data, usage, CmdResult, Context};

const BUNDLE_FILE: &str = "bundle.json";

fn warn_failures(report: &IngestReport) {
    for f in &report.failures {
        eprintln!("warning: {f}");
    }
}

pub fn ingest(cfg: &RunConfig, out: Option<&Path>) -> CmdResult<IngestReport> {
    let (source, base_url): (Box<dyn ArchiveSource>, String) = match (&cfg.archive_fixture, &cfg.base_url) {
        (Some(path), _) => (Box::new(load_fixture_archive(path).context("loading archive fixture")?), String::new()),
        (None, Some(url)) => (Box::new(HttpArchive::from_env()), url.clone()),
        (None, None) => {
            return Err(usage(
                "no data source configured: pass --archive-fixture <FILE> or set base_url in the --config file",
            ))
        }
    };
    let out = out.map(Path::to_path_buf).or_else(|| cfg.jobs.clone()).unwrap_or_else(|| "jobs.jsonl".into());

    let mut sink = Corpus::new(DocumentKind::JobPost);
    let mut total = IngestReport::default();
    for phrase in &cfg.phrases {
        let query = ArchiveQuery::new(phrase.clone(), cfg.from, cfg.to, cfg.page_size, base_url.clone())?;
        let report = fetch_job_posts(source.as_ref(), &query, &mut sink, &RetryPolicy::default())?;
        println!("{phrase:>24}: {report}");
        total.merge(report);
    }
    warn_failures(&total);
    sink.sort_by_id();
    save_corpus(&sink, &out)?;
    println!("{:>24}: {total}", "total");
    println!("wrote {} job posts to {}", sink.len(), out.display());
    Ok(total)
}

pub fn import(cfg: &RunConfig, dir: &Path, kind: DocumentKind, out: Option<&Path>) -> CmdResult<IngestReport> {
    if !dir.is_dir() {
        return Err(usage(format!("{} is not a directory", dir.display())));
    }
    let configured = match kind {
        DocumentKind::JobPost => &cfg.jobs,
        DocumentKind::Syllabus => &cfg.syllabi,
    };
    let default_name = match kind {
        DocumentKind::JobPost => "jobs.jsonl",
        DocumentKind::Syllabus => "syllabi.jsonl",
    };
    let out = out.map(Path::to_path_buf).or_else(|| configured.clone()).unwrap_or_else(|| default_name.into());

    let mut sink = Corpus::new(kind);
    let report = import_text_dir(dir, kind, &mut sink)?;
    warn_failures(&report);
    save_corpus(&sink, &out)?;
    println!("{report}");
    println!("wrote {} {} documents to {}", sink.len(), kind, out.display());
    Ok(report)
}

pub fn dictionary(cfg: &RunConfig) -> CmdResult<SkillDictionary> {
    match &cfg.dictionary {
        Some(path) => Ok(load_dictionary(path)?),
        None => Ok(SkillDictionary::default_dictionary()),
    }
}

pub fn match_skills(cfg: &RunConfig, corpus_path: &Path, out: Option<&Path>) -> CmdResult<()> {
    let dict = dictionary(cfg)?;
    let corpus = load_corpus(corpus_path).context(format!("reading {}", corpus_path.display()))?;
    let matches = match_corpus(&corpus, &dict);
    let mut buf = Vec::new();
    for m in &matches {
        serde_json::to_writer(&mut buf, m).map_err(data)?;
        buf.push(b'\n');
    }
    match out {
        Some(path) => {
            fs::write(path, &buf).map_err(|e| data(format!("{}: {e}", path.display())))?;
            let hits = matches.iter().filter(|m| !m.skills.is_empty()).count();
            println!("{hits} of {} documents mention at least one skill; wrote {}", matches.len(), path.display());
        }
        None => io::stdout().write_all(&buf).map_err(data)?,
    }
    Ok(())
}

fn read_input(path: &Option<PathBuf>, kind: DocumentKind) -> CmdResult<Option<Corpus>> {
    match path {
        Some(p) => Ok(Some(load_corpus_as(p, kind).context(format!("reading {kind} corpus {}", p.display()))?)),
        None => Ok(None),
    }
}

pub fn run_analysis(cfg: &RunConfig) -> CmdResult<PathBuf> {
    if cfg.jobs.is_none() && cfg.syllabi.is_none() {
        return Err(usage("nothing to analyze: pass --jobs and/or --syllabi, or set them in the --config file"));
    }
    let dict = dictionary(cfg)?;
    let jobs = read_input(&cfg.jobs, DocumentKind::JobPost)?;
    let syllabi = read_input(&cfg.syllabi, DocumentKind::Syllabus)?;
    let opts = AnalysisOptions { range: cfg.range()?, epsilon: cfg.epsilon, skills: cfg.skills.clone() };
    let analysis = analyze(jobs.as_ref(), syllabi.as_ref(), &dict, &opts).map_err(|e| match e {
        // an unknown --skills name is an invocation problem
        jobgap::Error::Analysis(msg) if msg.contains("not in the dictionary") => usage(msg),
        other => other.into(),
    })?;
    for notice in &analysis.notices {
        eprintln!("notice: {notice}");
    }

    let out = cfg.out.clone().unwrap_or_else(|| "report".into());
    let written = write_bundle(&analysis.bundle, &out)?;
    print_summary(&analysis.bundle, syllabi.as_ref().map(Corpus::len), jobs.as_ref().map(Corpus::len), &mut io::stdout())
        .map_err(data)?;
    println!("wrote {written} files to {}", out.display());
    Ok(out)
}

fn write_bundle(bundle: &ReportBundle, out: &Path) -> CmdResult<usize> {
    let mut n = emit_csv(bundle, out)?.len();
    n += emit_charts(bundle, out)?.len();
    let path = out.join(BUNDLE_FILE);
    let mut json = bundle.to_json()?;
    json.push('\n');
    fs::write(&path, json).map_err(|e| data(format!("{}: {e}", path.display())))?;
    Ok(n + 1)
}

pub fn report(cfg: &RunConfig, bundle_path: Option<&Path>) -> CmdResult<()> {
    let bundle_path = match (bundle_path, &cfg.out) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(out)) => out.join(BUNDLE_FILE),
        (None, None) => return Err(usage("which bundle? pass a bundle.json path or --out <DIR>")),
    };
    let text = fs::read_to_string(&bundle_path).map_err(|e| usage(format!("{}: {e}", bundle_path.display())))?;
    let bundle = ReportBundle::from_json(&text).context(format!("reading {}", bundle_path.display()))?;
    let out = match &cfg.out {
        Some(out) => out.clone(),
        None => bundle_path.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let mut n = emit_csv(&bundle, &out)?.len();
    n += emit_charts(&bundle, &out)?.len();
    println!("wrote {n} files to {}", out.display());
    Ok(())
}

pub fn dict_check(cfg: &RunConfig, path: Option<&Path>, out: &mut impl Write) -> CmdResult<()> {
    let (dict, name) = match path.or(cfg.dictionary.as_deref()) {
        Some(p) => (load_dictionary(p)?, p.display().to_string()),
        None => (SkillDictionary::default_dictionary(), "built-in dictionary".to_owned()),
    };
    writeln!(
        out,
        "OK {name}: {} skills, {} keywords, {} excluded tokens ({})",
        dict.entries().len(),
        dict.keyword_count(),
        dict.excluded().len(),
        dict.excluded().join(", ")
    )
    .map_err(data)
}

const TOP: usize = 5;

pub fn print_summary(
    bundle: &ReportBundle,
    syllabi: Option<usize>,
    jobs: Option<usize>,
    out: &mut impl Write,
) -> io::Result<()> {
    for (title, rows, n) in [
        ("syllabi", &bundle.coverage_edu, syllabi),
        ("job posts", &bundle.coverage_job, jobs),
    ] {
        let Some(n) = n else { continue };
        writeln!(out, "top skills in {n} {title}:")?;
        for row in rows.iter().take(TOP) {
            writeln!(out, "  {:<16} {:>6} {:>6.1}%", row.skill, row.count, row.pct)?;
        }
    }
    if !bundle.gaps.is_empty() {
        let mut gaps: Vec<_> = bundle.gaps.iter().collect();
        gaps.sort_by(|a, b| b.gap.total_cmp(&a.gap).then_with(|| a.skill.cmp(&b.skill)));
        writeln!(out, "largest gaps (syllabi vs job posts):")?;
        for g in gaps.iter().take(TOP) {
            writeln!(
                out,
                "  {:<16} {:>6.1}% vs {:>5.1}%  gap {:>5.1} pp",
                g.skill, g.edu_pct, g.job_pct, g.gap
            )?;
        }
    }
    if !bundle.trends.is_empty() {
        writeln!(out, "trends (pp/year):")?;
        for t in bundle.trends.iter().take(TOP) {
            writeln!(out, "  {:<16} {:>+7.3}  {}", t.fit.skill, t.fit.slope, t.class)?;
        }
    }
    Ok(())
}
