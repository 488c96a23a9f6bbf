use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use super::tsv::{ARTICLES_HEADER, EDGES_HEADER};
use super::{Article, Corpus, CorpusBuilder, CorpusError, DropTally};
use crate::span::YearSpan;

/// How to interpret the tabular sources.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Corpus span; inferred from the article years when absent.
    pub span: Option<YearSpan>,
    /// Region vocabulary; inferred from the article rows when absent.
    pub regions: Option<Vec<String>>,
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(true)
        .flexible(true)
        .quoting(false)
        .from_reader(r)
}

fn check_header<R: Read>(
    rdr: &mut csv::Reader<R>,
    file: &'static str,
    expected: &[&str],
) -> Result<(), CorpusError> {
    let found = rdr
        .headers()
        .map_err(|source| CorpusError::Csv { file, source })?;
    if found.iter().ne(expected.iter().copied()) {
        return Err(CorpusError::Header {
            file,
            expected: expected.join("\t"),
            found: found.iter().collect::<Vec<_>>().join("\t"),
        });
    }
    Ok(())
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

fn parse_articles<R: Read>(src: R) -> Result<Vec<(u64, Article)>, CorpusError> {
    let mut rdr = reader(src);
    check_header(&mut rdr, "articles", &ARTICLES_HEADER)?;
    let mut out = Vec::new();
    let mut rec = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut rec) {
            Ok(false) => break,
            Ok(true) => {}
            Err(source) => return Err(CorpusError::Csv { file: "articles", source }),
        }
        let line = line_of(&rec);
        if rec.len() != ARTICLES_HEADER.len() {
            return Err(CorpusError::ColumnCount {
                file: "articles",
                line,
                expected: ARTICLES_HEADER.len(),
                found: rec.len(),
            });
        }
        let token = &rec[1];
        let pub_year = token.trim().parse::<i32>().map_err(|_| CorpusError::BadYear {
            line,
            token: token.to_string(),
        })?;
        let authors = &rec[5];
        out.push((
            line,
            Article {
                id: rec[0].to_string(),
                pub_year,
                field: rec[2].to_string(),
                region: rec[3].to_string(),
                journal_id: rec[4].to_string(),
                author_ids: authors
                    .split(';')
                    .filter(|a| !a.is_empty())
                    .map(str::to_string)
                    .collect(),
            },
        ));
    }
    Ok(out)
}

fn for_each_edge<R: Read>(
    src: R,
    mut f: impl FnMut(&str, &str),
) -> Result<(), CorpusError> {
    let mut rdr = reader(src);
    check_header(&mut rdr, "edges", &EDGES_HEADER)?;
    let mut rec = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut rec) {
            Ok(false) => break,
            Ok(true) => {}
            Err(source) => return Err(CorpusError::Csv { file: "edges", source }),
        }
        let line = line_of(&rec);
        if rec.len() != EDGES_HEADER.len() {
            return Err(CorpusError::ColumnCount {
                file: "edges",
                line,
                expected: EDGES_HEADER.len(),
                found: rec.len(),
            });
        }
        for (i, column) in ["citing_id", "cited_id"].into_iter().enumerate() {
            if rec[i].is_empty() {
                return Err(CorpusError::EmptyValue { file: "edges", line, column });
            }
        }
        f(&rec[0], &rec[1]);
    }
    Ok(())
}

fn resolve_span(opts: &LoadOptions, rows: &[(u64, Article)]) -> YearSpan {
    opts.span.unwrap_or_else(|| {
        let lo = rows.iter().map(|(_, a)| a.pub_year).min();
        let hi = rows.iter().map(|(_, a)| a.pub_year).max();
        match (lo, hi) {
            (Some(lo), Some(hi)) => YearSpan::new(lo, hi),
            // nothing to infer from; any non-empty span works for an empty corpus
            _ => YearSpan::new(0, 0),
        }
    })
}

/// Parses, validates and indexes the two tabular sources.
pub fn load_corpus<A: Read, E: Read>(
    articles: A,
    edges: E,
    opts: &LoadOptions,
) -> Result<Corpus, CorpusError> {
    let rows = parse_articles(articles)?;
    let span = resolve_span(opts, &rows);
    let mut builder = match &opts.regions {
        Some(r) => CorpusBuilder::with_regions(span, r)?,
        None => CorpusBuilder::new(span)?,
    };
    builder.reserve(rows.len(), 0);
    for (line, article) in rows {
        builder.push_article(article, line)?;
    }
    for_each_edge(edges, |citing, cited| builder.add_edge(citing, cited))?;
    Ok(builder.build())
}

pub fn load_corpus_files(
    articles: &Path,
    edges: &Path,
    opts: &LoadOptions,
) -> Result<Corpus, CorpusError> {
    let a = BufReader::new(File::open(articles)?);
    let e = BufReader::new(File::open(edges)?);
    load_corpus(a, e, opts)
}

/// Result of [`scan`]: row counts, drop tallies and marginal histograms.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ValidationReport {
    pub span: YearSpan,
    pub tally: DropTally,
    pub retained_articles: u64,
    pub retained_edges: u64,
    pub years: BTreeMap<i32, u64>,
    pub fields: BTreeMap<String, u64>,
    pub regions: BTreeMap<String, u64>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.tally;
        writeln!(f, "span: {}", self.span)?;
        writeln!(f, "articles read: {}", t.articles_read)?;
        writeln!(f, "articles retained: {}", self.retained_articles)?;
        writeln!(f, "edges read: {}", t.edges_read)?;
        writeln!(f, "edges retained: {}", self.retained_edges)?;
        writeln!(f, "dropped:")?;
        writeln!(f, "  out_of_span: {}", t.out_of_span)?;
        writeln!(f, "  dangling: {}", t.dangling)?;
        writeln!(f, "  self_loop: {}", t.self_loop)?;
        writeln!(f, "  future_dated: {}", t.future_dated)?;
        writeln!(f, "  duplicate_edge: {}", t.duplicate_edge)?;
        writeln!(f, "years:")?;
        for (y, n) in &self.years {
            writeln!(f, "  {y}: {n}")?;
        }
        writeln!(f, "fields:")?;
        for (k, n) in &self.fields {
            writeln!(f, "  {k}: {n}")?;
        }
        writeln!(f, "regions:")?;
        for (k, n) in &self.regions {
            writeln!(f, "  {k}: {n}")?;
        }
        Ok(())
    }
}

/// Checks both sources with the same rules as [`load_corpus`] but without
/// building adjacency indexes.
pub fn scan<A: Read, E: Read>(
    articles: A,
    edges: E,
    opts: &LoadOptions,
) -> Result<ValidationReport, CorpusError> {
    let rows = parse_articles(articles)?;
    let span = resolve_span(opts, &rows);
    if span.is_empty() {
        return Err(CorpusError::BadSpan(span));
    }
    let allowed: Option<HashSet<&str>> = opts
        .regions
        .as_ref()
        .map(|r| r.iter().map(String::as_str).collect());

    let mut tally = DropTally::default();
    let mut years: HashMap<String, (u32, i32)> = HashMap::with_capacity(rows.len());
    let mut seen: HashSet<String> = HashSet::with_capacity(rows.len());
    let mut report = ValidationReport {
        span,
        tally,
        retained_articles: 0,
        retained_edges: 0,
        years: BTreeMap::new(),
        fields: BTreeMap::new(),
        regions: BTreeMap::new(),
    };
    if let Some(r) = &opts.regions {
        for label in r {
            report.regions.insert(label.clone(), 0);
        }
    }
    for (line, a) in &rows {
        tally.articles_read += 1;
        if a.id.is_empty() || a.field.is_empty() {
            let column = if a.id.is_empty() { "id" } else { "field" };
            return Err(CorpusError::EmptyValue { file: "articles", line: *line, column });
        }
        if !seen.insert(a.id.clone()) {
            return Err(CorpusError::DuplicateId { line: *line, id: a.id.clone() });
        }
        if let Some(allowed) = &allowed {
            if !allowed.contains(a.region.as_str()) {
                return Err(CorpusError::UnknownRegion { line: *line, region: a.region.clone() });
            }
        }
        if !span.contains(a.pub_year) {
            tally.out_of_span += 1;
            continue;
        }
        let idx = years.len() as u32;
        years.insert(a.id.clone(), (idx, a.pub_year));
        *report.years.entry(a.pub_year).or_default() += 1;
        *report.fields.entry(a.field.clone()).or_default() += 1;
        *report.regions.entry(a.region.clone()).or_default() += 1;
    }
    report.retained_articles = years.len() as u64;

    let mut pairs: HashSet<(u32, u32)> = HashSet::new();
    for_each_edge(edges, |citing, cited| {
        tally.edges_read += 1;
        match (years.get(citing), years.get(cited)) {
            (Some(&(a, ya)), Some(&(b, yb))) => {
                if a == b {
                    tally.self_loop += 1;
                } else if ya < yb {
                    tally.future_dated += 1;
                } else if !pairs.insert((a, b)) {
                    tally.duplicate_edge += 1;
                }
            }
            _ => tally.dangling += 1,
        }
    })?;
    report.retained_edges = pairs.len() as u64;
    report.tally = tally;
    Ok(report)
}

pub fn scan_files(
    articles: &Path,
    edges: &Path,
    opts: &LoadOptions,
) -> Result<ValidationReport, CorpusError> {
    let a = BufReader::new(File::open(articles)?);
    let e = BufReader::new(File::open(edges)?);
    scan(a, e, opts)
}
