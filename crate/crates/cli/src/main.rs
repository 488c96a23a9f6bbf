use std::path::PathBuf;
use std::process::ExitCode;

use citeconc_cli::{cmd_analyze, cmd_generate, cmd_validate, CliError, GenerateSource};
use citeconc_core::YearSpan;
use clap::{ArgGroup, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "citeconc", version, about = "Citation-concentration studies over citation corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse an articles/edges pair and report counts, drops and histograms.
    Validate {
        #[arg(long)]
        articles: PathBuf,
        #[arg(long)]
        edges: PathBuf,
        /// Restrict to a year span, e.g. 1980:2015.
        #[arg(long, value_parser = parse_span)]
        span: Option<YearSpan>,
    },
    /// Run the studies listed in a TOML config and write reports plus a manifest.
    Analyze {
        config: PathBuf,
    },
    /// Write a synthetic corpus as articles.tsv and edges.tsv.
    #[command(group(ArgGroup::new("source").required(true).args(["scenario", "params"])))]
    Generate {
        /// Named preset (declining-uncitedness, stationary, region-shift).
        #[arg(long)]
        scenario: Option<String>,
        /// TOML file with a full generator parameter set.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_span(s: &str) -> Result<YearSpan, String> {
    let (a, b) = s.split_once(':').ok_or("expected START:END")?;
    let start = a.trim().parse().map_err(|_| format!("bad year `{a}`"))?;
    let end = b.trim().parse().map_err(|_| format!("bad year `{b}`"))?;
    let span = YearSpan::new(start, end);
    if span.is_empty() {
        return Err(format!("empty span {span}"));
    }
    Ok(span)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { articles, edges, span } => {
            let report = cmd_validate(&articles, &edges, span)?;
            print!("{report}");
        }
        Command::Analyze { config } => {
            let summary = cmd_analyze(&config)?;
            for id in &summary.reports {
                println!("{id}");
            }
            println!(
                "{} reports, {} files, manifest {}",
                summary.reports.len(),
                summary.files.len(),
                summary.manifest.display()
            );
        }
        Command::Generate {
            scenario,
            params,
            seed,
            out,
        } => {
            let source = match (scenario, params) {
                (Some(s), _) => GenerateSource::Scenario(s),
                (None, Some(p)) => GenerateSource::Params(p),
                (None, None) => unreachable!("clap enforces the group"),
            };
            let (corpus, report) = cmd_generate(&source, seed, &out)?;
            println!("span: {}", corpus.span());
            println!("articles: {}", corpus.len());
            println!("edges: {}", corpus.edge_count());
            println!("references requested: {}", report.requested_refs);
            println!("references realized: {}", report.realized_refs);
            println!("references clamped: {}", report.clamped_refs);
            println!("references external: {}", report.external_refs);
            println!("self-citations injected: {}", report.injected_self_refs);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("citeconc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
