use std::collections::{HashMap, HashSet};

use super::{Article, ArticleIdx, Columns, Corpus, CorpusError, Csr, DropTally, Vocab};
use crate::span::YearSpan;

#[derive(Debug, Default)]
struct Interner {
    lookup: HashMap<String, u32>,
    labels: Vec<String>,
}

impl Interner {
    fn get(&self, s: &str) -> Option<u32> {
        self.lookup.get(s).copied()
    }

    fn intern(&mut self, s: &str) -> u32 {
        if let Some(i) = self.lookup.get(s) {
            return *i;
        }
        let i = self.labels.len() as u32;
        self.lookup.insert(s.to_string(), i);
        self.labels.push(s.to_string());
        i
    }
}

/// Staging area for a [`Corpus`]: add articles, then edges, then [`build`](Self::build).
///
/// Out-of-span articles, dangling edges, self-loops, citations to the future
/// and duplicate edges are dropped and tallied rather than rejected.
#[derive(Debug)]
pub struct CorpusBuilder {
    span: YearSpan,
    fixed_regions: bool,
    ids: Vec<String>,
    lookup: HashMap<String, ArticleIdx>,
    pub_year: Vec<i32>,
    field: Vec<u16>,
    region: Vec<u16>,
    journal: Vec<u32>,
    author_offsets: Vec<usize>,
    authors: Vec<u32>,
    fields: Interner,
    regions: Interner,
    journals: Interner,
    author_ids: Interner,
    out_of_span_ids: HashSet<String>,
    edges: Vec<(ArticleIdx, ArticleIdx)>,
    tally: DropTally,
}

impl CorpusBuilder {
    pub fn new(span: YearSpan) -> Result<Self, CorpusError> {
        if span.is_empty() {
            return Err(CorpusError::BadSpan(span));
        }
        Ok(Self {
            span,
            fixed_regions: false,
            ids: Vec::new(),
            lookup: HashMap::new(),
            pub_year: Vec::new(),
            field: Vec::new(),
            region: Vec::new(),
            journal: Vec::new(),
            author_offsets: vec![0],
            authors: Vec::new(),
            fields: Interner::default(),
            regions: Interner::default(),
            journals: Interner::default(),
            author_ids: Interner::default(),
            out_of_span_ids: HashSet::new(),
            edges: Vec::new(),
            tally: DropTally::default(),
        })
    }

    /// Restricts region labels to `regions`; an article with any other label is rejected.
    pub fn with_regions<S: AsRef<str>>(span: YearSpan, regions: &[S]) -> Result<Self, CorpusError> {
        let mut b = Self::new(span)?;
        for r in regions {
            b.regions.intern(r.as_ref());
        }
        b.fixed_regions = true;
        Ok(b)
    }

    pub fn reserve(&mut self, articles: usize, edges: usize) {
        self.ids.reserve(articles);
        self.lookup.reserve(articles);
        self.pub_year.reserve(articles);
        self.field.reserve(articles);
        self.region.reserve(articles);
        self.journal.reserve(articles);
        self.author_offsets.reserve(articles);
        self.edges.reserve(edges);
    }

    pub fn article_count(&self) -> usize {
        self.ids.len()
    }

    /// Adds an article; returns `None` when its year falls outside the span.
    pub fn add_article(&mut self, article: Article) -> Result<Option<ArticleIdx>, CorpusError> {
        self.push_article(article, 0)
    }

    pub(crate) fn push_article(
        &mut self,
        article: Article,
        line: u64,
    ) -> Result<Option<ArticleIdx>, CorpusError> {
        self.tally.articles_read += 1;
        if article.field.is_empty() {
            return Err(CorpusError::EmptyValue {
                file: "articles",
                line,
                column: "field",
            });
        }
        if article.id.is_empty() {
            return Err(CorpusError::EmptyValue {
                file: "articles",
                line,
                column: "id",
            });
        }
        if self.lookup.contains_key(&article.id) || self.out_of_span_ids.contains(&article.id) {
            return Err(CorpusError::DuplicateId { line, id: article.id });
        }
        let region = if self.fixed_regions {
            self.regions.get(&article.region).ok_or_else(|| CorpusError::UnknownRegion {
                line,
                region: article.region.clone(),
            })?
        } else {
            self.regions.intern(&article.region)
        };
        if !self.span.contains(article.pub_year) {
            self.tally.out_of_span += 1;
            self.out_of_span_ids.insert(article.id);
            return Ok(None);
        }
        let field = self.fields.intern(&article.field);
        if field > u16::MAX as u32 {
            return Err(CorpusError::TooManyLabels("field"));
        }
        if region > u16::MAX as u32 {
            return Err(CorpusError::TooManyLabels("region"));
        }
        let journal = self.journals.intern(&article.journal_id);
        let start = self.authors.len();
        for a in &article.author_ids {
            let a = self.author_ids.intern(a);
            if !self.authors[start..].contains(&a) {
                self.authors.push(a);
            }
        }
        self.author_offsets.push(self.authors.len());

        let idx = self.ids.len() as ArticleIdx;
        self.lookup.insert(article.id.clone(), idx);
        self.ids.push(article.id);
        self.pub_year.push(article.pub_year);
        self.field.push(field as u16);
        self.region.push(region as u16);
        self.journal.push(journal);
        Ok(Some(idx))
    }

    pub fn find(&self, id: &str) -> Option<ArticleIdx> {
        self.lookup.get(id).copied()
    }

    /// Adds an edge by article ids; unresolvable endpoints count as dangling.
    pub fn add_edge(&mut self, citing_id: &str, cited_id: &str) {
        match (self.find(citing_id), self.find(cited_id)) {
            (Some(a), Some(b)) => self.add_edge_idx(a, b),
            _ => {
                self.tally.edges_read += 1;
                self.tally.dangling += 1;
            }
        }
    }

    /// Adds an edge between already-added articles.
    pub fn add_edge_idx(&mut self, citing: ArticleIdx, cited: ArticleIdx) {
        self.tally.edges_read += 1;
        if citing == cited {
            self.tally.self_loop += 1;
        } else if self.pub_year[citing as usize] < self.pub_year[cited as usize] {
            self.tally.future_dated += 1;
        } else {
            self.edges.push((citing, cited));
        }
    }

    pub fn build(mut self) -> Corpus {
        self.edges.sort_unstable();
        let before = self.edges.len();
        self.edges.dedup();
        self.tally.duplicate_edge += (before - self.edges.len()) as u64;

        let n = self.ids.len();
        let authors = &self.authors;
        let offsets = &self.author_offsets;
        let shares = |a: ArticleIdx, b: ArticleIdx| {
            let xs = &authors[offsets[a as usize]..offsets[a as usize + 1]];
            let ys = &authors[offsets[b as usize]..offsets[b as usize + 1]];
            xs.iter().any(|x| ys.contains(x))
        };
        let references = Csr::from_sorted(n, self.edges.iter().map(|&(a, b)| (a, b, shares(a, b))));
        drop(std::mem::take(&mut self.edges));

        Corpus::assemble(
            self.span,
            Columns {
                ids: self.ids,
                lookup: self.lookup,
                pub_year: self.pub_year,
                field: self.field,
                region: self.region,
                journal: self.journal,
                author_offsets: self.author_offsets,
                authors: self.authors,
            },
            Vocab {
                fields: self.fields.labels,
                regions: self.regions.labels,
                journals: self.journals.labels,
                authors: self.author_ids.labels,
            },
            references,
            self.tally,
        )
    }
}
