use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use citeconc_core::corpus::{scan_files, write_articles, write_edges, ValidationReport};
use citeconc_core::studies::{
    gini_by_field, gini_series, region_removal_uncitedness, region_tail_shares, top_share_series,
    uncited_share_series, SeriesReport, StudyError,
};
use citeconc_core::synthgen::{generate, scenario, GenParams, GenReport};
use citeconc_core::{Corpus, CorpusError, LoadOptions, YearSpan};
use serde_json::{json, Value};

use crate::config::{Format, Job, Plan, RunConfig, Source};
use crate::output::{file_stem, pretty_json, sha256_hex, write_atomic, Manifest, ManifestEntry, ManifestFile};
use crate::CliError;

fn data_err(path: &Path, e: CorpusError) -> CliError {
    match e {
        CorpusError::Io(io) => CliError::Data(format!("{}: {io}", path.display())),
        other => CliError::Data(other.to_string()),
    }
}

fn load_opts(span: Option<YearSpan>, regions: Option<Vec<String>>) -> LoadOptions {
    LoadOptions { span, regions }
}

/// Parses both tables without building indexes.
pub fn cmd_validate(articles: &Path, edges: &Path, span: Option<YearSpan>) -> Result<ValidationReport, CliError> {
    for p in [articles, edges] {
        fs::metadata(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
    }
    scan_files(articles, edges, &load_opts(span, None)).map_err(|e| data_err(articles, e))
}

/// Where generator parameters come from.
#[derive(Debug, Clone, PartialEq)]
pub enum GenerateSource {
    Scenario(String),
    /// TOML file with a full parameter set.
    Params(PathBuf),
}

pub fn generator_params(
    source: &GenerateSource,
    seed: Option<u64>,
    span: Option<YearSpan>,
) -> Result<GenParams, CliError> {
    let mut p = match source {
        GenerateSource::Scenario(name) => scenario(name).map_err(|e| CliError::Config(e.to_string()))?,
        GenerateSource::Params(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
    };
    if let Some(seed) = seed {
        p.seed = seed;
    }
    if let Some(span) = span {
        p.span = span;
    }
    p.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(p)
}

fn run_generator(p: &GenParams) -> Result<(Corpus, GenReport), CliError> {
    generate(p).map_err(|e| CliError::Config(e.to_string()))
}

/// Writes `articles.tsv` and `edges.tsv` into `out_dir`.
pub fn cmd_generate(
    source: &GenerateSource,
    seed: Option<u64>,
    out_dir: &Path,
) -> Result<(Corpus, GenReport), CliError> {
    let params = generator_params(source, seed, None)?;
    let (corpus, report) = run_generator(&params)?;
    fs::create_dir_all(out_dir).map_err(|e| CliError::Data(format!("{}: {e}", out_dir.display())))?;
    let mut a = Vec::new();
    let mut e = Vec::new();
    write_articles(&corpus, &mut a).expect("in-memory write");
    write_edges(&corpus, &mut e).expect("in-memory write");
    write_atomic(&out_dir.join("articles.tsv"), &a)?;
    write_atomic(&out_dir.join("edges.tsv"), &e)?;
    Ok((corpus, report))
}

fn study_err(e: StudyError) -> CliError {
    match e {
        StudyError::InvalidConfig(_) | StudyError::UnknownRegion(_) | StudyError::UnknownField(_) => {
            CliError::Config(e.to_string())
        }
        _ => CliError::Data(e.to_string()),
    }
}

fn run_job(corpus: &Corpus, job: &Job) -> Result<Vec<SeriesReport>, StudyError> {
    Ok(match job {
        Job::Gini(cfg) => vec![gini_series(corpus, cfg)?],
        Job::GiniByField(cfg) => gini_by_field(corpus, cfg)?.into_values().collect(),
        Job::Uncited {
            window,
            exclude_self,
            core_only,
        } => vec![uncited_share_series(corpus, window, *exclude_self, *core_only)?],
        Job::RegionRemoval {
            window,
            region,
            exclude_self,
        } => vec![region_removal_uncitedness(corpus, region, window, *exclude_self)?],
        Job::RegionTail { window, options } => vec![region_tail_shares(corpus, window, options)?],
        Job::TopShare {
            window,
            pcts,
            exclude_self,
        } => vec![top_share_series(corpus, window, pcts, *exclude_self)?],
    })
}

/// What an analyze run wrote.
#[derive(Debug, Clone)]
pub struct AnalyzeSummary {
    pub out_dir: PathBuf,
    pub reports: Vec<String>,
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
}

fn load_corpus(plan: &Plan) -> Result<(Corpus, Value), CliError> {
    match &plan.source {
        Source::Files { articles, edges } => {
            let corpus = citeconc_core::corpus::load_corpus_files(
                articles,
                edges,
                &load_opts(plan.span, plan.regions.clone()),
            )
            .map_err(|e| data_err(articles, e))?;
            let name = |p: &Path| p.file_name().map(|n| n.to_string_lossy().into_owned());
            let source = json!({ "articles": name(articles), "edges": name(edges) });
            Ok((corpus, source))
        }
        Source::Scenario(_) | Source::Params(_) => {
            if plan.regions.is_some() {
                return Err(CliError::Config("`regions` applies to [input] corpora only".into()));
            }
            let gs = match &plan.source {
                Source::Scenario(s) => GenerateSource::Scenario(s.clone()),
                Source::Params(p) => GenerateSource::Params(p.clone()),
                Source::Files { .. } => unreachable!(),
            };
            let params = generator_params(&gs, plan.seed, plan.span)?;
            let (corpus, report) = run_generator(&params)?;
            let label = match &gs {
                GenerateSource::Scenario(s) => json!({ "scenario": s }),
                GenerateSource::Params(p) => {
                    json!({ "params": p.file_name().map(|n| n.to_string_lossy().into_owned()) })
                }
            };
            let source = json!({ "generator": label, "seed": params.seed, "realized": report });
            Ok((corpus, source))
        }
    }
}

/// Runs every study in the config file and writes reports plus `manifest.json`.
pub fn cmd_analyze(config_path: &Path) -> Result<AnalyzeSummary, CliError> {
    let text = fs::read(config_path).map_err(|e| CliError::Config(format!("{}: {e}", config_path.display())))?;
    let config_hash = sha256_hex(&text);
    let text = String::from_utf8(text).map_err(|_| CliError::Config("config is not UTF-8".into()))?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let plan = RunConfig::parse(&text)?.plan(base)?;
    fs::create_dir_all(&plan.out_dir)
        .map_err(|e| CliError::Config(format!("output directory {}: {e}", plan.out_dir.display())))?;

    let (corpus, source) = load_corpus(&plan)?;
    let mut reports = Vec::new();
    for job in &plan.jobs {
        reports.extend(run_job(&corpus, job).map_err(study_err)?);
    }
    let mut seen = BTreeSet::new();
    for r in &reports {
        if !seen.insert(file_stem(&r.study_id)) {
            return Err(CliError::Config(format!("study `{}` is configured twice", r.study_id)));
        }
    }

    let mut files = Vec::new();
    let mut entries = Vec::new();
    for r in &reports {
        let stem = file_stem(&r.study_id);
        let mut written = Vec::new();
        for format in &plan.formats {
            let bytes = match format {
                Format::Csv => r.to_csv().into_bytes(),
                Format::Json => pretty_json(&r.to_json()),
            };
            let name = format!("{stem}.{}", format.extension());
            let path = plan.out_dir.join(&name);
            write_atomic(&path, &bytes)?;
            written.push(ManifestFile {
                path: name,
                format: format.extension(),
                sha256: sha256_hex(&bytes),
            });
            files.push(path);
        }
        entries.push(ManifestEntry {
            study_id: r.study_id.clone(),
            kind: r.kind.slug(),
            config_sha256: sha256_hex(r.config.to_string().as_bytes()),
            columns: r.csv_header(),
            rows: r.rows.len(),
            files: written,
        });
    }
    let manifest = Manifest {
        tool: "citeconc",
        version: env!("CARGO_PKG_VERSION"),
        config_sha256: config_hash,
        corpus: json!({
            "source": source,
            "span": corpus.span(),
            "articles": corpus.len(),
            "edges": corpus.edge_count(),
            "dropped": corpus.tally(),
        }),
        outputs: entries,
    };
    let manifest_path = manifest.write(&plan.out_dir)?;
    Ok(AnalyzeSummary {
        out_dir: plan.out_dir,
        reports: reports.into_iter().map(|r| r.study_id).collect(),
        files,
        manifest: manifest_path,
    })
}
