//! Article metadata and citation edges, indexed for windowed counting.
//!
//! A [`Corpus`] is built once, either by [`load_corpus`] from the tab-separated
//! interchange files or by [`CorpusBuilder`] in memory, and is immutable
//! afterwards. Articles are addressed by a dense [`ArticleIdx`]; both edge
//! directions are stored as CSR adjacency sorted by the opposite endpoint, with
//! a parallel self-citation flag per edge.

mod builder;
mod load;
mod tsv;

use std::collections::HashMap;

use thiserror::Error;

use crate::span::YearSpan;

pub use builder::CorpusBuilder;
pub use load::{load_corpus, load_corpus_files, scan, scan_files, LoadOptions, ValidationReport};
pub use tsv::{write_articles, write_corpus_files, write_edges, ARTICLES_HEADER, EDGES_HEADER};

/// Dense article index inside one corpus.
pub type ArticleIdx = u32;

/// One publication record as supplied by a data source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Article {
    pub id: String,
    pub pub_year: i32,
    pub field: String,
    pub region: String,
    pub journal_id: String,
    pub author_ids: Vec<String>,
}

/// A citation from `citing_id` to `cited_id`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CitationEdge {
    pub citing_id: String,
    pub cited_id: String,
}

impl CitationEdge {
    pub fn new(citing_id: impl Into<String>, cited_id: impl Into<String>) -> Self {
        Self {
            citing_id: citing_id.into(),
            cited_id: cited_id.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{file} file: {source}")]
    Csv {
        file: &'static str,
        #[source]
        source: csv::Error,
    },
    #[error("{file} file: bad header, expected `{expected}`, found `{found}`")]
    Header {
        file: &'static str,
        expected: String,
        found: String,
    },
    #[error("{file} file line {line}: expected {expected} columns, found {found}")]
    ColumnCount {
        file: &'static str,
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("articles file line {line}: unparsable year `{token}`")]
    BadYear { line: u64, token: String },
    #[error("{file} file line {line}: empty `{column}`")]
    EmptyValue {
        file: &'static str,
        line: u64,
        column: &'static str,
    },
    #[error("articles file line {line}: duplicate article id `{id}`")]
    DuplicateId { line: u64, id: String },
    #[error("articles file line {line}: region `{region}` is not in the configured region set")]
    UnknownRegion { line: u64, region: String },
    #[error("unknown article id `{0}`")]
    UnknownArticle(String),
    #[error("unknown region `{0}`")]
    UnknownRegionLabel(String),
    #[error("invalid corpus span {0}")]
    BadSpan(YearSpan),
    #[error("too many distinct {0} labels")]
    TooManyLabels(&'static str),
}

/// Provenance counters for a load: rows read and every drop, by reason.
///
/// `edges_read == retained + dangling + self_loop + future_dated + duplicate_edge`.
/// Edges touching an article dropped for an out-of-span year count as dangling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct DropTally {
    pub articles_read: u64,
    pub edges_read: u64,
    pub out_of_span: u64,
    pub dangling: u64,
    pub self_loop: u64,
    pub future_dated: u64,
    pub duplicate_edge: u64,
}

impl DropTally {
    pub fn edges_dropped(&self) -> u64 {
        self.dangling + self.self_loop + self.future_dated + self.duplicate_edge
    }
}

/// Compressed adjacency: neighbours of node `i` are `targets[offsets[i]..offsets[i + 1]]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Csr {
    pub(crate) offsets: Vec<usize>,
    pub(crate) targets: Vec<ArticleIdx>,
    pub(crate) self_cite: Vec<bool>,
}

impl Csr {
    /// Builds from `(source, target, self)` triples sorted by `(source, target)`.
    fn from_sorted(n: usize, edges: impl Iterator<Item = (ArticleIdx, ArticleIdx, bool)>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::new();
        let mut self_cite = Vec::new();
        for (s, t, f) in edges {
            offsets[s as usize + 1] += 1;
            targets.push(t);
            self_cite.push(f);
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Self {
            offsets,
            targets,
            self_cite,
        }
    }

    fn range(&self, i: ArticleIdx) -> std::ops::Range<usize> {
        self.offsets[i as usize]..self.offsets[i as usize + 1]
    }

    fn degree(&self, i: ArticleIdx) -> usize {
        let r = self.range(i);
        r.end - r.start
    }
}

/// Immutable, indexed citation corpus.
#[derive(Debug, Clone)]
pub struct Corpus {
    span: YearSpan,
    ids: Vec<String>,
    lookup: HashMap<String, ArticleIdx>,
    pub_year: Vec<i32>,
    field: Vec<u16>,
    region: Vec<u16>,
    journal: Vec<u32>,
    author_offsets: Vec<usize>,
    authors: Vec<u32>,
    field_labels: Vec<String>,
    region_labels: Vec<String>,
    journal_labels: Vec<String>,
    author_labels: Vec<String>,
    /// cited -> citing
    cited_by: Csr,
    /// citing -> cited
    references: Csr,
    /// article indices grouped by publication year
    year_offsets: Vec<usize>,
    by_year: Vec<ArticleIdx>,
    edges_per_year: Vec<u64>,
    self_edges_per_year: Vec<u64>,
    field_year_articles: Vec<u64>,
    field_year_references: Vec<u64>,
    tally: DropTally,
}

/// Borrowed view of one article.
#[derive(Clone, Copy)]
pub struct ArticleRef<'a> {
    corpus: &'a Corpus,
    idx: ArticleIdx,
}

impl<'a> ArticleRef<'a> {
    pub fn index(&self) -> ArticleIdx {
        self.idx
    }
    pub fn id(&self) -> &'a str {
        &self.corpus.ids[self.idx as usize]
    }
    pub fn pub_year(&self) -> i32 {
        self.corpus.pub_year[self.idx as usize]
    }
    pub fn field(&self) -> &'a str {
        &self.corpus.field_labels[self.corpus.field[self.idx as usize] as usize]
    }
    pub fn region(&self) -> &'a str {
        &self.corpus.region_labels[self.corpus.region[self.idx as usize] as usize]
    }
    pub fn journal_id(&self) -> &'a str {
        &self.corpus.journal_labels[self.corpus.journal[self.idx as usize] as usize]
    }
    pub fn author_ids(&self) -> impl Iterator<Item = &'a str> + 'a {
        let c = self.corpus;
        c.author_slice(self.idx)
            .iter()
            .map(move |&a| c.author_labels[a as usize].as_str())
    }
    pub fn to_owned(&self) -> Article {
        Article {
            id: self.id().to_string(),
            pub_year: self.pub_year(),
            field: self.field().to_string(),
            region: self.region().to_string(),
            journal_id: self.journal_id().to_string(),
            author_ids: self.author_ids().map(str::to_string).collect(),
        }
    }
}

impl std::fmt::Debug for ArticleRef<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ArticleRef")
            .field("id", &self.id())
            .field("pub_year", &self.pub_year())
            .field("field", &self.field())
            .field("region", &self.region())
            .finish()
    }
}

impl Corpus {
    pub fn span(&self) -> YearSpan {
        self.span
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.references.targets.len()
    }

    pub fn tally(&self) -> &DropTally {
        &self.tally
    }

    pub fn article(&self, idx: ArticleIdx) -> ArticleRef<'_> {
        assert!((idx as usize) < self.ids.len(), "article index out of range");
        ArticleRef { corpus: self, idx }
    }

    pub fn articles(&self) -> impl Iterator<Item = ArticleRef<'_>> {
        (0..self.ids.len() as ArticleIdx).map(move |idx| ArticleRef { corpus: self, idx })
    }

    pub fn find(&self, id: &str) -> Option<ArticleIdx> {
        self.lookup.get(id).copied()
    }

    pub fn id(&self, idx: ArticleIdx) -> &str {
        &self.ids[idx as usize]
    }

    pub fn pub_year(&self, idx: ArticleIdx) -> i32 {
        self.pub_year[idx as usize]
    }

    pub fn field_of(&self, idx: ArticleIdx) -> u16 {
        self.field[idx as usize]
    }

    pub fn region_of(&self, idx: ArticleIdx) -> u16 {
        self.region[idx as usize]
    }

    pub fn journal_of(&self, idx: ArticleIdx) -> u32 {
        self.journal[idx as usize]
    }

    pub fn field_labels(&self) -> &[String] {
        &self.field_labels
    }

    /// The configured region vocabulary; a region may have no articles.
    pub fn region_labels(&self) -> &[String] {
        &self.region_labels
    }

    pub fn journal_labels(&self) -> &[String] {
        &self.journal_labels
    }

    pub fn field_index(&self, label: &str) -> Option<u16> {
        self.field_labels.iter().position(|f| f == label).map(|i| i as u16)
    }

    pub fn region_index(&self, label: &str) -> Option<u16> {
        self.region_labels.iter().position(|r| r == label).map(|i| i as u16)
    }

    pub(crate) fn author_slice(&self, idx: ArticleIdx) -> &[u32] {
        &self.authors[self.author_offsets[idx as usize]..self.author_offsets[idx as usize + 1]]
    }

    /// Articles citing `idx`, with the per-edge self-citation flag.
    pub fn citing(&self, idx: ArticleIdx) -> impl Iterator<Item = (ArticleIdx, bool)> + '_ {
        let r = self.cited_by.range(idx);
        self.cited_by.targets[r.clone()]
            .iter()
            .copied()
            .zip(self.cited_by.self_cite[r].iter().copied())
    }

    /// Articles cited by `idx`, with the per-edge self-citation flag.
    pub fn cited(&self, idx: ArticleIdx) -> impl Iterator<Item = (ArticleIdx, bool)> + '_ {
        let r = self.references.range(idx);
        self.references.targets[r.clone()]
            .iter()
            .copied()
            .zip(self.references.self_cite[r].iter().copied())
    }

    pub fn in_degree(&self, idx: ArticleIdx) -> usize {
        self.cited_by.degree(idx)
    }

    pub fn out_degree(&self, idx: ArticleIdx) -> usize {
        self.references.degree(idx)
    }

    /// Every retained edge as `(citing, cited, is_self)`, ordered by citing then cited index.
    pub fn edges(&self) -> impl Iterator<Item = (ArticleIdx, ArticleIdx, bool)> + '_ {
        (0..self.len() as ArticleIdx)
            .flat_map(move |citing| self.cited(citing).map(move |(cited, s)| (citing, cited, s)))
    }

    /// Articles published in `year`, ascending by index. Empty outside the span.
    pub fn articles_in_year(&self, year: i32) -> &[ArticleIdx] {
        match self.span.offset(year) {
            Some(o) => &self.by_year[self.year_offsets[o]..self.year_offsets[o + 1]],
            None => &[],
        }
    }

    /// Articles published anywhere in `years` (clipped to the corpus span).
    pub fn articles_in_years(&self, years: YearSpan) -> &[ArticleIdx] {
        let lo = years.start.max(self.span.start);
        let hi = years.end.min(self.span.end);
        if lo > hi {
            return &[];
        }
        let a = self.year_offsets[(lo - self.span.start) as usize];
        let b = self.year_offsets[(hi - self.span.start) as usize + 1];
        &self.by_year[a..b]
    }

    /// Raw number of retained citations made in `year` (edge year = citing year).
    pub fn citations_in_year(&self, year: i32) -> u64 {
        self.span.offset(year).map_or(0, |o| self.edges_per_year[o])
    }

    /// Citations made in `year` whose endpoints share an author.
    pub fn self_citations_in_year(&self, year: i32) -> u64 {
        self.span.offset(year).map_or(0, |o| self.self_edges_per_year[o])
    }

    pub fn field_year_articles(&self, field: u16, year: i32) -> u64 {
        self.span
            .offset(year)
            .map_or(0, |o| self.field_year_articles[field as usize * self.span.len() + o])
    }

    /// Sum of retained reference-list lengths over a field's articles published in `year`.
    pub fn field_year_references(&self, field: u16, year: i32) -> u64 {
        self.span
            .offset(year)
            .map_or(0, |o| self.field_year_references[field as usize * self.span.len() + o])
    }

    pub fn region_article_count(&self, region: u16) -> usize {
        self.region.iter().filter(|&&r| r == region).count()
    }

    /// Whether the articles at `a` and `b` share at least one author.
    pub fn shares_author(&self, a: ArticleIdx, b: ArticleIdx) -> bool {
        let xs = self.author_slice(a);
        let ys = self.author_slice(b);
        xs.iter().any(|x| ys.contains(x))
    }

    /// Sub-corpus of the articles for which `keep` is true, with edges
    /// restricted to retained endpoints. Span, vocabularies and load tally carry over.
    pub fn retain(&self, keep: impl Fn(ArticleIdx) -> bool) -> Corpus {
        let n = self.len();
        let mut remap = vec![u32::MAX; n];
        let mut kept = Vec::new();
        for i in 0..n as ArticleIdx {
            if keep(i) {
                remap[i as usize] = kept.len() as u32;
                kept.push(i);
            }
        }
        let mut ids = Vec::with_capacity(kept.len());
        let mut lookup = HashMap::with_capacity(kept.len());
        let mut pub_year = Vec::with_capacity(kept.len());
        let mut field = Vec::with_capacity(kept.len());
        let mut region = Vec::with_capacity(kept.len());
        let mut journal = Vec::with_capacity(kept.len());
        let mut author_offsets = Vec::with_capacity(kept.len() + 1);
        let mut authors = Vec::new();
        author_offsets.push(0);
        for (new, &old) in kept.iter().enumerate() {
            let o = old as usize;
            ids.push(self.ids[o].clone());
            lookup.insert(self.ids[o].clone(), new as u32);
            pub_year.push(self.pub_year[o]);
            field.push(self.field[o]);
            region.push(self.region[o]);
            journal.push(self.journal[o]);
            authors.extend_from_slice(self.author_slice(old));
            author_offsets.push(authors.len());
        }
        // remap is monotone, so CSR order is preserved.
        let edges = kept.iter().flat_map(|&old| {
            let remap = &remap;
            self.cited(old).filter_map(move |(t, s)| {
                let nt = remap[t as usize];
                (nt != u32::MAX).then_some((remap[old as usize], nt, s))
            })
        });
        let references = Csr::from_sorted(kept.len(), edges);
        Self::assemble(
            self.span,
            Columns {
                ids,
                lookup,
                pub_year,
                field,
                region,
                journal,
                author_offsets,
                authors,
            },
            Vocab {
                fields: self.field_labels.clone(),
                regions: self.region_labels.clone(),
                journals: self.journal_labels.clone(),
                authors: self.author_labels.clone(),
            },
            references,
            self.tally,
        )
    }

    /// Builds every derived index from the article columns and the backward CSR.
    fn assemble(
        span: YearSpan,
        cols: Columns,
        vocab: Vocab,
        references: Csr,
        tally: DropTally,
    ) -> Corpus {
        let n = cols.ids.len();
        let years = span.len();

        // forward index by counting sort on the cited endpoint
        let mut fwd_offsets = vec![0usize; n + 1];
        for &t in &references.targets {
            fwd_offsets[t as usize + 1] += 1;
        }
        for i in 0..n {
            fwd_offsets[i + 1] += fwd_offsets[i];
        }
        let m = references.targets.len();
        let mut fwd_targets = vec![0 as ArticleIdx; m];
        let mut fwd_self = vec![false; m];
        let mut cursor = fwd_offsets.clone();
        for citing in 0..n {
            for e in references.offsets[citing]..references.offsets[citing + 1] {
                let cited = references.targets[e] as usize;
                let slot = cursor[cited];
                fwd_targets[slot] = citing as ArticleIdx;
                fwd_self[slot] = references.self_cite[e];
                cursor[cited] += 1;
            }
        }
        let cited_by = Csr {
            offsets: fwd_offsets,
            targets: fwd_targets,
            self_cite: fwd_self,
        };

        let mut year_offsets = vec![0usize; years + 1];
        for &y in &cols.pub_year {
            year_offsets[(y - span.start) as usize + 1] += 1;
        }
        for i in 0..years {
            year_offsets[i + 1] += year_offsets[i];
        }
        let mut by_year = vec![0 as ArticleIdx; n];
        let mut cursor = year_offsets.clone();
        for (i, &y) in cols.pub_year.iter().enumerate() {
            let o = (y - span.start) as usize;
            by_year[cursor[o]] = i as ArticleIdx;
            cursor[o] += 1;
        }

        let nf = vocab.fields.len();
        let mut edges_per_year = vec![0u64; years];
        let mut self_edges_per_year = vec![0u64; years];
        let mut field_year_articles = vec![0u64; nf * years];
        let mut field_year_references = vec![0u64; nf * years];
        for i in 0..n {
            let o = (cols.pub_year[i] - span.start) as usize;
            let r = references.offsets[i]..references.offsets[i + 1];
            let out = (r.end - r.start) as u64;
            edges_per_year[o] += out;
            self_edges_per_year[o] += references.self_cite[r].iter().filter(|&&s| s).count() as u64;
            let cell = cols.field[i] as usize * years + o;
            field_year_articles[cell] += 1;
            field_year_references[cell] += out;
        }

        Corpus {
            span,
            ids: cols.ids,
            lookup: cols.lookup,
            pub_year: cols.pub_year,
            field: cols.field,
            region: cols.region,
            journal: cols.journal,
            author_offsets: cols.author_offsets,
            authors: cols.authors,
            field_labels: vocab.fields,
            region_labels: vocab.regions,
            journal_labels: vocab.journals,
            author_labels: vocab.authors,
            cited_by,
            references,
            year_offsets,
            by_year,
            edges_per_year,
            self_edges_per_year,
            field_year_articles,
            field_year_references,
            tally,
        }
    }

    #[cfg(test)]
    pub(crate) fn indexes_agree(&self) -> bool {
        let mut fwd: Vec<_> = (0..self.len() as u32)
            .flat_map(|cited| self.citing(cited).map(move |(c, s)| (c, cited, s)))
            .collect();
        fwd.sort_unstable();
        let bwd: Vec<_> = self.edges().collect();
        fwd == bwd
    }
}

pub(crate) struct Columns {
    pub(crate) ids: Vec<String>,
    pub(crate) lookup: HashMap<String, ArticleIdx>,
    pub(crate) pub_year: Vec<i32>,
    pub(crate) field: Vec<u16>,
    pub(crate) region: Vec<u16>,
    pub(crate) journal: Vec<u32>,
    pub(crate) author_offsets: Vec<usize>,
    pub(crate) authors: Vec<u32>,
}

pub(crate) struct Vocab {
    pub(crate) fields: Vec<String>,
    pub(crate) regions: Vec<String>,
    pub(crate) journals: Vec<String>,
    pub(crate) authors: Vec<String>,
}

/// Keeps only articles whose journal has at least one article in every year
/// of the corpus span. Idempotent.
pub fn filter_core_journals(corpus: &Corpus) -> Corpus {
    let years = corpus.span.len();
    let nj = corpus.journal_labels.len();
    let mut present = vec![false; nj * years];
    for i in 0..corpus.len() {
        let o = (corpus.pub_year[i] - corpus.span.start) as usize;
        present[corpus.journal[i] as usize * years + o] = true;
    }
    let core: Vec<bool> = (0..nj)
        .map(|j| years > 0 && present[j * years..(j + 1) * years].iter().all(|&p| p))
        .collect();
    corpus.retain(|i| core[corpus.journal_of(i) as usize])
}

/// True iff the citing and cited articles share at least one author id.
pub fn is_self_citation(edge: &CitationEdge, corpus: &Corpus) -> Result<bool, CorpusError> {
    let citing = corpus
        .find(&edge.citing_id)
        .ok_or_else(|| CorpusError::UnknownArticle(edge.citing_id.clone()))?;
    let cited = corpus
        .find(&edge.cited_id)
        .ok_or_else(|| CorpusError::UnknownArticle(edge.cited_id.clone()))?;
    Ok(corpus.shares_author(citing, cited))
}

#[cfg(test)]
mod tests;
