//! Citation-inflation weights and field/year-normalized scores.
//!
//! Forward (citation-based) scoring weights every citation made in year `y` by
//! `ρ_y = 1 / ncits_y`, sums the weights an article collects inside its window
//! (`ics`) and divides by the mean `ics` of its field (`mics`) to get `nics`.
//!
//! Backward (reference-based) scoring divides each citation made in the
//! reference year by the mean in-window reference-list length `mref` of the
//! citing article's field.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{ArticleIdx, Corpus};
use crate::span::YearSpan;
use crate::windows::{counted_years, Direction, WindowSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("empty cohort")]
    EmptyCohort,
    #[error("empty field-year cell ({field}, {year})")]
    EmptyCell { field: String, year: i32 },
    #[error("expected a {expected} window")]
    WrongDirection { expected: Direction },
}

/// Which citations define `ncits_y` when computing `ρ_y`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoScope {
    /// Same self-citation scope as the study.
    #[default]
    Study,
    /// Every retained edge, self-citations included.
    AllEdges,
}

/// `ρ_y` for every year with at least one in-scope citation.
#[derive(Debug, Clone, PartialEq)]
pub struct YearWeights {
    span: YearSpan,
    rho: Vec<Option<f64>>,
}

impl YearWeights {
    pub fn get(&self, year: i32) -> Option<f64> {
        self.span.offset(year).and_then(|o| self.rho[o])
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.span
            .years()
            .zip(&self.rho)
            .filter_map(|(y, r)| r.map(|r| (y, r)))
    }

    /// Every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            span: self.span,
            rho: self.rho.iter().map(|r| r.map(|r| r * factor)).collect(),
        }
    }
}

/// `ρ_y = 1 / (citations made in year y)`, optionally without self-citations.
pub fn year_weights(corpus: &Corpus, exclude_self: bool) -> YearWeights {
    let span = corpus.span();
    let rho = span
        .years()
        .map(|y| {
            let mut n = corpus.citations_in_year(y);
            if exclude_self {
                n -= corpus.self_citations_in_year(y);
            }
            (n > 0).then(|| 1.0 / n as f64)
        })
        .collect();
    YearWeights { span, rho }
}

/// Weighted in-window citations: `Σ_y ncits_{i,y} · ρ_y` over the counted years.
pub fn ics(
    article: ArticleIdx,
    w: &WindowSpec,
    weights: &YearWeights,
    corpus: &Corpus,
    exclude_self: bool,
) -> f64 {
    let years = counted_years(corpus.pub_year(article), w);
    let mut per_year = vec![0u64; years.len()];
    for (citing, is_self) in corpus.citing(article) {
        if exclude_self && is_self {
            continue;
        }
        if let Some(o) = years.offset(corpus.pub_year(citing)) {
            per_year[o] += 1;
        }
    }
    years
        .years()
        .zip(per_year)
        .filter(|&(_, n)| n > 0)
        .map(|(y, n)| n as f64 * weights.get(y).unwrap_or(0.0))
        .sum()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NicsOptions {
    pub exclude_self: bool,
    /// Compute `mics` per (field, publication year) instead of pooled per field.
    pub mics_per_year: bool,
    pub rho_scope: RhoScope,
}

/// Field means keyed by field label, and by publication year when not pooled.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FieldBaseline {
    pub means: BTreeMap<(String, Option<i32>), f64>,
}

/// Scores for a cohort, parallel to `articles`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedScore {
    pub articles: Vec<ArticleIdx>,
    pub scores: Vec<f64>,
    pub ics: Vec<f64>,
    pub baseline: FieldBaseline,
}

impl NormalizedScore {
    pub fn by_article(&self) -> HashMap<ArticleIdx, f64> {
        self.articles.iter().copied().zip(self.scores.iter().copied()).collect()
    }
}

fn require(w: &WindowSpec, expected: Direction) -> Result<(), NormalizeError> {
    if w.direction == expected {
        Ok(())
    } else {
        Err(NormalizeError::WrongDirection { expected })
    }
}

/// `nics_i = ics_i / mics_k` over `cohort`, with `ρ` derived from `corpus`.
pub fn nics(
    cohort: &[ArticleIdx],
    w: &WindowSpec,
    corpus: &Corpus,
    opts: &NicsOptions,
) -> Result<NormalizedScore, NormalizeError> {
    let rho_excludes_self = match opts.rho_scope {
        RhoScope::Study => opts.exclude_self,
        RhoScope::AllEdges => false,
    };
    let weights = year_weights(corpus, rho_excludes_self);
    nics_with_weights(cohort, w, &weights, corpus, opts)
}

/// [`nics`] with caller-supplied weights. Members of a field whose `mics` is
/// zero score 0.
pub fn nics_with_weights(
    cohort: &[ArticleIdx],
    w: &WindowSpec,
    weights: &YearWeights,
    corpus: &Corpus,
    opts: &NicsOptions,
) -> Result<NormalizedScore, NormalizeError> {
    require(w, Direction::Forward)?;
    if cohort.is_empty() {
        return Err(NormalizeError::EmptyCohort);
    }
    let ics_values: Vec<f64> = cohort
        .iter()
        .map(|&a| ics(a, w, weights, corpus, opts.exclude_self))
        .collect();

    let cell = |a: ArticleIdx| {
        let year = opts.mics_per_year.then(|| corpus.pub_year(a));
        (corpus.field_of(a), year)
    };
    let mut sums: HashMap<(u16, Option<i32>), (f64, u64)> = HashMap::new();
    for (&a, &v) in cohort.iter().zip(&ics_values) {
        let e = sums.entry(cell(a)).or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    let means: HashMap<_, f64> = sums.iter().map(|(&k, &(s, n))| (k, s / n as f64)).collect();
    let scores = cohort
        .iter()
        .zip(&ics_values)
        .map(|(&a, &v)| {
            let m = means[&cell(a)];
            if m > 0.0 {
                v / m
            } else {
                0.0
            }
        })
        .collect();
    let baseline = FieldBaseline {
        means: means
            .into_iter()
            .map(|((f, y), m)| ((corpus.field_labels()[f as usize].clone(), y), m))
            .collect(),
    };
    Ok(NormalizedScore {
        articles: cohort.to_vec(),
        scores,
        ics: ics_values,
        baseline,
    })
}

/// Options for the reference-based approach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceOptions {
    pub exclude_self: bool,
    /// Weight citations by `1 / mref_k`; when false every citation counts 1.
    pub normalized: bool,
}

impl Default for ReferenceOptions {
    fn default() -> Self {
        Self {
            exclude_self: false,
            normalized: true,
        }
    }
}

fn backward_years(ref_year: i32, w: &WindowSpec) -> YearSpan {
    YearSpan::new(ref_year - w.length as i32, ref_year - 1)
}

fn in_window_references(
    citing: ArticleIdx,
    years: YearSpan,
    corpus: &Corpus,
    exclude_self: bool,
) -> impl Iterator<Item = ArticleIdx> + '_ {
    corpus
        .cited(citing)
        .filter(move |&(c, s)| !(exclude_self && s) && years.contains(corpus.pub_year(c)))
        .map(|(c, _)| c)
}

/// Mean number of in-window references made by the field's articles published in `ref_year`.
pub fn field_mean_references(
    corpus: &Corpus,
    field: &str,
    ref_year: i32,
    w: &WindowSpec,
    exclude_self: bool,
) -> Result<f64, NormalizeError> {
    require(w, Direction::Backward)?;
    let empty = || NormalizeError::EmptyCell {
        field: field.to_string(),
        year: ref_year,
    };
    let k = corpus.field_index(field).ok_or_else(empty)?;
    let years = backward_years(ref_year, w);
    let (mut n, mut refs) = (0u64, 0u64);
    for &a in corpus.articles_in_year(ref_year) {
        if corpus.field_of(a) == k {
            n += 1;
            refs += in_window_references(a, years, corpus, exclude_self).count() as u64;
        }
    }
    if n == 0 {
        return Err(empty());
    }
    Ok(refs as f64 / n as f64)
}

/// `mref_k` for every field with articles in `ref_year`; absent fields map to `None`.
pub fn reference_baselines(
    corpus: &Corpus,
    ref_year: i32,
    w: &WindowSpec,
    exclude_self: bool,
) -> Vec<Option<f64>> {
    let years = backward_years(ref_year, w);
    let nf = corpus.field_labels().len();
    let mut n = vec![0u64; nf];
    let mut refs = vec![0u64; nf];
    for &a in corpus.articles_in_year(ref_year) {
        let k = corpus.field_of(a) as usize;
        n[k] += 1;
        refs[k] += in_window_references(a, years, corpus, exclude_self).count() as u64;
    }
    n.iter()
        .zip(&refs)
        .map(|(&n, &r)| (n > 0).then(|| r as f64 / n as f64))
        .collect()
}

fn citation_weights(
    corpus: &Corpus,
    ref_year: i32,
    w: &WindowSpec,
    opts: &ReferenceOptions,
) -> Vec<f64> {
    if !opts.normalized {
        return vec![1.0; corpus.field_labels().len()];
    }
    reference_baselines(corpus, ref_year, w, opts.exclude_self)
        .into_iter()
        // a contributing field has at least one in-window reference
        .map(|m| m.filter(|&m| m > 0.0).map_or(0.0, |m| 1.0 / m))
        .collect()
}

/// `Σ_k (citations from field k made in ref_year) / mref_k` for one cited article.
pub fn normalized_reference_count(
    cited: ArticleIdx,
    ref_year: i32,
    w: &WindowSpec,
    corpus: &Corpus,
    opts: &ReferenceOptions,
) -> Result<f64, NormalizeError> {
    require(w, Direction::Backward)?;
    let years = backward_years(ref_year, w);
    if !years.contains(corpus.pub_year(cited)) {
        return Ok(0.0);
    }
    let weight = citation_weights(corpus, ref_year, w, opts);
    Ok(corpus
        .citing(cited)
        .filter(|&(c, s)| !(opts.exclude_self && s) && corpus.pub_year(c) == ref_year)
        .map(|(c, _)| weight[corpus.field_of(c) as usize])
        .sum())
}

/// Scores for the whole backward population of `ref_year` in one pass over
/// the reference lists made that year. Parallel to `population`.
pub fn reference_scores(
    population: &[ArticleIdx],
    ref_year: i32,
    w: &WindowSpec,
    corpus: &Corpus,
    opts: &ReferenceOptions,
) -> Result<Vec<f64>, NormalizeError> {
    require(w, Direction::Backward)?;
    let years = backward_years(ref_year, w);
    let weight = citation_weights(corpus, ref_year, w, opts);
    let mut acc: HashMap<ArticleIdx, f64> = HashMap::with_capacity(population.len());
    for &citing in corpus.articles_in_year(ref_year) {
        let wk = weight[corpus.field_of(citing) as usize];
        for cited in in_window_references(citing, years, corpus, opts.exclude_self) {
            *acc.entry(cited).or_insert(0.0) += wk;
        }
    }
    Ok(population
        .iter()
        .map(|a| acc.get(a).copied().unwrap_or(0.0))
        .collect())
}
