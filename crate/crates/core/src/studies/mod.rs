//! Named analyses: Gini series under the four approach combinations, uncited
//! shares, counterfactual region removal, region tail shares and top-x%
//! shares. Every function returns a [`SeriesReport`] with one row per
//! candidate year; years where a metric is undefined get a null cell and a
//! reason code instead of being dropped.

mod config;
mod report;

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::concentration::{gini, top_members, top_share, Distribution};
use crate::corpus::{filter_core_journals, ArticleIdx, Corpus};
use crate::normalize::{nics, reference_scores, NicsOptions, NormalizeError, ReferenceOptions, RhoScope};
use crate::span::YearSpan;
use crate::windows::{
    analyzable_ref_years, cited_population_backward, counted_years, eligible_pub_years_forward,
    window_count, Direction, WindowSpec,
};

pub use config::{Approach, StudyConfig};
pub use report::{NullReason, SeriesReport, SeriesRow, StudyKind};

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("invalid study configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown region `{0}`")]
    UnknownRegion(String),
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("empty residual corpus")]
    EmptyResidual,
    #[error("need at least 2 non-null Gini rows, found {0}")]
    TooFewRows(usize),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

pub const GINI_COLUMNS: [&str; 3] = ["gini", "uncited_share", "mean_raw_citations"];

fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn require_forward(w: &WindowSpec) -> Result<(), StudyError> {
    w.validate().map_err(|e| StudyError::InvalidConfig(e.to_string()))?;
    if w.direction != Direction::Forward {
        return Err(StudyError::InvalidConfig("this study needs a forward window".into()));
    }
    Ok(())
}

/// The corpus without `region`'s articles (and therefore without every
/// reference those articles made).
pub fn remove_region(corpus: &Corpus, region: &str) -> Result<Corpus, StudyError> {
    let r = corpus
        .region_index(region)
        .ok_or_else(|| StudyError::UnknownRegion(region.to_string()))?;
    let residual = corpus.retain(|i| corpus.region_of(i) != r);
    if residual.is_empty() {
        return Err(StudyError::EmptyResidual);
    }
    Ok(residual)
}

fn prepare<'a>(
    corpus: &'a Corpus,
    core_only: bool,
    region_removed: Option<&str>,
) -> Result<Cow<'a, Corpus>, StudyError> {
    let mut c = Cow::Borrowed(corpus);
    if core_only {
        c = Cow::Owned(filter_core_journals(&c));
    }
    if let Some(region) = region_removed {
        c = Cow::Owned(remove_region(&c, region)?);
    }
    Ok(c)
}

/// A forward cohort pooled over all eligible publication years, grouped by year.
struct ForwardCohort {
    years: YearSpan,
    members: Vec<ArticleIdx>,
    /// `members[bounds[k]..bounds[k + 1]]` were published in `years.start + k`.
    bounds: Vec<usize>,
    raw: Vec<u64>,
    scores: Vec<f64>,
}

enum Scoring {
    Raw,
    Nics(NicsOptions),
}

impl ForwardCohort {
    fn build(
        c: &Corpus,
        w: &WindowSpec,
        exclude_self: bool,
        field: Option<u16>,
        scoring: Scoring,
    ) -> Result<Self, StudyError> {
        let years = eligible_pub_years_forward(c.span(), w);
        let mut members = Vec::new();
        let mut bounds = vec![0];
        for y in years.years() {
            members.extend(
                c.articles_in_year(y)
                    .iter()
                    .copied()
                    .filter(|&a| field.is_none_or(|f| c.field_of(a) == f)),
            );
            bounds.push(members.len());
        }
        let raw: Vec<u64> = members
            .iter()
            .map(|&a| window_count(a, w, c, exclude_self))
            .collect();
        let scores = match scoring {
            Scoring::Raw => raw.iter().map(|&n| n as f64).collect(),
            Scoring::Nics(_) if members.is_empty() => Vec::new(),
            Scoring::Nics(opts) => nics(&members, w, c, &opts)?.scores,
        };
        Ok(Self {
            years,
            members,
            bounds,
            raw,
            scores,
        })
    }

    fn year_range(&self, k: usize) -> std::ops::Range<usize> {
        self.bounds[k]..self.bounds[k + 1]
    }
}

fn gini_row(year: i32, scores: &[f64], raw: &[u64], include_uncited: bool) -> SeriesRow {
    let n = scores.len() as u64;
    let zeros = scores.iter().filter(|&&s| s == 0.0).count() as u64;
    let mut row = SeriesRow::new(year, n, zeros, GINI_COLUMNS.len());
    if n == 0 {
        row.null(NullReason::EmptyCohort);
        return row;
    }
    row.metrics[1] = Some(zeros as f64 / n as f64);
    row.metrics[2] = Some(raw.iter().sum::<u64>() as f64 / n as f64);
    let values: Vec<f64> = if include_uncited {
        scores.to_vec()
    } else {
        scores.iter().copied().filter(|&s| s > 0.0).collect()
    };
    if values.iter().all(|&v| v == 0.0) {
        row.null(NullReason::AllZero);
        return row;
    }
    let d = Distribution::new(values).expect("scores are finite and non-negative");
    row.metrics[0] = Some(gini(&d).expect("positive total"));
    row
}

fn citation_rows(c: &Corpus, cfg: &StudyConfig, field: Option<u16>) -> Result<Vec<SeriesRow>, StudyError> {
    let scoring = if cfg.normalized {
        Scoring::Nics(NicsOptions {
            exclude_self: cfg.exclude_self_citations,
            mics_per_year: cfg.mics_per_year,
            rho_scope: cfg.rho_scope,
        })
    } else {
        Scoring::Raw
    };
    let cohort = ForwardCohort::build(c, &cfg.window, cfg.exclude_self_citations, field, scoring)?;
    Ok(cohort
        .years
        .years()
        .enumerate()
        .map(|(k, y)| {
            let r = cohort.year_range(k);
            gini_row(y, &cohort.scores[r.clone()], &cohort.raw[r], cfg.include_uncited)
        })
        .collect())
}

fn reference_rows(c: &Corpus, cfg: &StudyConfig, field: Option<u16>) -> Result<Vec<SeriesRow>, StudyError> {
    let w = &cfg.window;
    let years = analyzable_ref_years(c.span(), w, cfg.drop_earliest_population);
    let opts = ReferenceOptions {
        exclude_self: cfg.exclude_self_citations,
        normalized: cfg.normalized,
    };
    let raw_opts = ReferenceOptions {
        normalized: false,
        ..opts
    };
    let mut rows = Vec::with_capacity(years.len());
    for y in years.years() {
        let pop_years = cited_population_backward(y, c.span(), w, cfg.drop_earliest_population)
            .expect("analyzable reference year");
        let population: Vec<ArticleIdx> = c
            .articles_in_years(pop_years)
            .iter()
            .copied()
            .filter(|&a| field.is_none_or(|f| c.field_of(a) == f))
            .collect();
        let scores = reference_scores(&population, y, w, c, &opts)?;
        let raw: Vec<u64> = if cfg.normalized {
            reference_scores(&population, y, w, c, &raw_opts)?
                .into_iter()
                .map(|v| v as u64)
                .collect()
        } else {
            scores.iter().map(|&v| v as u64).collect()
        };
        rows.push(gini_row(y, &scores, &raw, cfg.include_uncited));
    }
    Ok(rows)
}

fn gini_series_prepared(c: &Corpus, cfg: &StudyConfig) -> Result<SeriesReport, StudyError> {
    let field = match &cfg.field_filter {
        Some(f) => Some(c.field_index(f).ok_or_else(|| StudyError::UnknownField(f.clone()))?),
        None => None,
    };
    let rows = match cfg.approach {
        Approach::CitationBased => citation_rows(c, cfg, field)?,
        Approach::ReferenceBased => reference_rows(c, cfg, field)?,
    };
    Ok(SeriesReport {
        study_id: cfg.study_id(),
        kind: StudyKind::Gini,
        group_column: None,
        columns: columns(&GINI_COLUMNS),
        rows,
        config: serde_json::to_value(cfg).expect("serializable config"),
    })
}

/// Per-year Gini of the cohort scores under `cfg`.
///
/// Citation-based cohorts are the articles of each eligible publication year,
/// scored by `nics` (pooled over all eligible years) or by raw windowed
/// counts. Reference-based populations are the articles of the `W` years
/// before each analyzable reference year, scored by normalized reference counts.
pub fn gini_series(corpus: &Corpus, cfg: &StudyConfig) -> Result<SeriesReport, StudyError> {
    cfg.validate()?;
    let c = prepare(corpus, cfg.core_only, cfg.region_removed.as_deref())?;
    gini_series_prepared(&c, cfg)
}

/// Gini of the last non-null year minus Gini of the first.
pub fn end_to_end_change(report: &SeriesReport) -> Result<f64, StudyError> {
    let valid = report.valid("gini");
    match (valid.first(), valid.last()) {
        (Some(first), Some(last)) if valid.len() >= 2 => Ok(last.1 - first.1),
        _ => Err(StudyError::TooFewRows(valid.len())),
    }
}

/// Citation- and reference-based series, with and without uncited articles,
/// for every window length. Core filtering and region removal happen once.
pub fn four_approach_battery(
    corpus: &Corpus,
    windows: &[u32],
    exclude_self: bool,
    core_only: bool,
) -> Result<Vec<SeriesReport>, StudyError> {
    let c = prepare(corpus, core_only, None)?;
    let mut out = Vec::new();
    for approach in [Approach::CitationBased, Approach::ReferenceBased] {
        for include in [true, false] {
            for &w in windows {
                let cfg = StudyConfig::new(approach, w)
                    .include_uncited(include)
                    .exclude_self(exclude_self)
                    .core_only(core_only);
                cfg.validate()?;
                out.push(gini_series_prepared(&c, &cfg)?);
            }
        }
    }
    Ok(out)
}

/// [`gini_series`] once per field label, keyed by field.
pub fn gini_by_field(corpus: &Corpus, cfg: &StudyConfig) -> Result<BTreeMap<String, SeriesReport>, StudyError> {
    cfg.validate()?;
    let c = prepare(corpus, cfg.core_only, cfg.region_removed.as_deref())?;
    let mut out = BTreeMap::new();
    for label in c.field_labels() {
        let fc = cfg.clone().field(label.clone());
        let mut report = gini_series_prepared(&c, &fc)?;
        report.kind = StudyKind::GiniByField;
        report.study_id = report.study_id.replacen("gini_", "gini-field_", 1);
        out.insert(label.clone(), report);
    }
    Ok(out)
}

fn scope_flags(exclude_self: bool, core_only: bool) -> String {
    format!(
        "{}-{}",
        if exclude_self { "noself" } else { "self" },
        if core_only { "core" } else { "all" }
    )
}

/// Share of each eligible publication-year cohort with no in-window citations.
pub fn uncited_share_series(
    corpus: &Corpus,
    window: &WindowSpec,
    exclude_self: bool,
    core_only: bool,
) -> Result<SeriesReport, StudyError> {
    require_forward(window)?;
    let c = prepare(corpus, core_only, None)?;
    let cohort = ForwardCohort::build(&c, window, exclude_self, None, Scoring::Raw)?;
    let rows = cohort
        .years
        .years()
        .enumerate()
        .map(|(k, y)| {
            let raw = &cohort.raw[cohort.year_range(k)];
            let zeros = raw.iter().filter(|&&n| n == 0).count() as u64;
            let mut row = SeriesRow::new(y, raw.len() as u64, zeros, 1);
            if raw.is_empty() {
                row.null(NullReason::EmptyCohort);
            } else {
                row.metrics[0] = Some(zeros as f64 / raw.len() as f64);
            }
            row
        })
        .collect();
    Ok(SeriesReport {
        study_id: format!(
            "uncited_citation_w{}_{}",
            window.length,
            scope_flags(exclude_self, core_only)
        ),
        kind: StudyKind::Uncited,
        group_column: None,
        columns: columns(&["uncited_share"]),
        rows,
        config: json!({
            "window": window,
            "exclude_self_citations": exclude_self,
            "core_only": core_only,
        }),
    })
}

fn uncited_by_year(cohort: &ForwardCohort) -> Vec<(u64, u64)> {
    (0..cohort.years.len())
        .map(|k| {
            let raw = &cohort.raw[cohort.year_range(k)];
            (raw.len() as u64, raw.iter().filter(|&&n| n == 0).count() as u64)
        })
        .collect()
}

/// Signed relative change in each year's uncited share when `region`'s
/// articles, and every reference they make, are removed from the corpus.
pub fn region_removal_uncitedness(
    corpus: &Corpus,
    region: &str,
    window: &WindowSpec,
    exclude_self: bool,
) -> Result<SeriesReport, StudyError> {
    require_forward(window)?;
    let residual = remove_region(corpus, region)?;
    let base = uncited_by_year(&ForwardCohort::build(corpus, window, exclude_self, None, Scoring::Raw)?);
    let after = uncited_by_year(&ForwardCohort::build(&residual, window, exclude_self, None, Scoring::Raw)?);
    let years = eligible_pub_years_forward(corpus.span(), window);
    let rows = years
        .years()
        .zip(base.iter().zip(&after))
        .map(|(y, (&(bn, bz), &(rn, rz)))| {
            let mut row = SeriesRow::new(y, rn, rz, 3);
            let base_share = (bn > 0).then(|| bz as f64 / bn as f64);
            let res_share = (rn > 0).then(|| rz as f64 / rn as f64);
            row.metrics[0] = base_share;
            row.metrics[1] = res_share;
            match (base_share, res_share) {
                (None, _) | (_, None) => row.null(NullReason::EmptyCohort),
                (Some(b), _) if b == 0.0 => row.null(NullReason::ZeroBaseline),
                (Some(b), Some(r)) => row.metrics[2] = Some((r - b) / b),
            }
            row
        })
        .collect();
    Ok(SeriesReport {
        study_id: format!(
            "region-removal_citation_w{}_{}-without={region}",
            window.length,
            scope_flags(exclude_self, false)
        ),
        kind: StudyKind::RegionRemoval,
        group_column: None,
        columns: columns(&["baseline_uncited_share", "residual_uncited_share", "relative_change"]),
        rows,
        config: json!({
            "window": window,
            "exclude_self_citations": exclude_self,
            "region_removed": region,
        }),
    })
}

/// How citing-side tail shares count providers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailCounting {
    /// One unit per citing edge.
    #[default]
    Edge,
    /// One unit per distinct citing article.
    Article,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailOptions {
    pub exclude_self: bool,
    pub counting: TailCounting,
    /// Size of the top group, as a share of each year's cohort.
    pub top_pct: f64,
    pub mics_per_year: bool,
    pub rho_scope: RhoScope,
}

impl Default for TailOptions {
    fn default() -> Self {
        Self {
            exclude_self: true,
            counting: TailCounting::Edge,
            top_pct: 0.01,
            mics_per_year: false,
            rho_scope: RhoScope::Study,
        }
    }
}

pub const TAIL_COLUMNS: [&str; 4] = ["cited_low", "cited_top", "citing_low", "citing_top"];

/// Per year and region: the region's share of single-cited articles, of the
/// top articles by `nics`, of the citations that single-cited articles
/// receive, and of the citations top articles receive.
pub fn region_tail_shares(
    corpus: &Corpus,
    window: &WindowSpec,
    opts: &TailOptions,
) -> Result<SeriesReport, StudyError> {
    require_forward(window)?;
    if !(opts.top_pct > 0.0 && opts.top_pct <= 1.0) {
        return Err(StudyError::InvalidConfig(format!("top share {} outside (0, 1]", opts.top_pct)));
    }
    let c = corpus;
    let cohort = ForwardCohort::build(
        c,
        window,
        opts.exclude_self,
        None,
        Scoring::Nics(NicsOptions {
            exclude_self: opts.exclude_self,
            mics_per_year: opts.mics_per_year,
            rho_scope: opts.rho_scope,
        }),
    )?;
    let nr = c.region_labels().len();
    let in_window_citers = |a: ArticleIdx| {
        let years = counted_years(c.pub_year(a), window);
        c.citing(a)
            .filter(move |&(x, s)| !(opts.exclude_self && s) && years.contains(c.pub_year(x)))
            .map(|(x, _)| x)
    };
    let provider_counts = |citers: Vec<ArticleIdx>| -> (Vec<u64>, u64) {
        let citers: Vec<ArticleIdx> = match opts.counting {
            TailCounting::Edge => citers,
            TailCounting::Article => citers.into_iter().collect::<BTreeSet<_>>().into_iter().collect(),
        };
        let mut per = vec![0u64; nr];
        for &x in &citers {
            per[c.region_of(x) as usize] += 1;
        }
        (per, citers.len() as u64)
    };

    let mut rows = Vec::new();
    for (k, y) in cohort.years.years().enumerate() {
        let range = cohort.year_range(k);
        let members = &cohort.members[range.clone()];
        let raw = &cohort.raw[range.clone()];
        let scores = &cohort.scores[range];

        let mut n = vec![0u64; nr];
        let mut zeros = vec![0u64; nr];
        let mut low = vec![0u64; nr];
        let mut low_citers = Vec::new();
        for (&a, &cnt) in members.iter().zip(raw) {
            let r = c.region_of(a) as usize;
            n[r] += 1;
            if cnt == 0 {
                zeros[r] += 1;
            }
            if cnt == 1 {
                low[r] += 1;
                low_citers.extend(in_window_citers(a));
            }
        }
        let low_total: u64 = low.iter().sum();
        let (low_prov, low_prov_total) = provider_counts(low_citers);

        let any_cited = scores.iter().any(|&s| s > 0.0);
        let mut top = vec![0u64; nr];
        let mut top_total = 0u64;
        let mut top_citers = Vec::new();
        if any_cited {
            for i in top_members(scores, |i| c.id(members[i]), opts.top_pct).expect("non-empty") {
                top[c.region_of(members[i]) as usize] += 1;
                top_total += 1;
                top_citers.extend(in_window_citers(members[i]));
            }
        }
        let (top_prov, top_prov_total) = provider_counts(top_citers);

        for r in 0..nr {
            let mut row = SeriesRow::new(y, n[r], zeros[r], TAIL_COLUMNS.len());
            row.group = Some(c.region_labels()[r].clone());
            if members.is_empty() {
                row.null(NullReason::EmptyCohort);
            }
            if low_total > 0 {
                row.metrics[0] = Some(low[r] as f64 / low_total as f64);
                row.metrics[2] = Some(low_prov[r] as f64 / low_prov_total as f64);
            } else if !members.is_empty() {
                row.null(NullReason::NoSingleCited);
            }
            if any_cited {
                row.metrics[1] = Some(top[r] as f64 / top_total as f64);
                if top_prov_total > 0 {
                    row.metrics[3] = Some(top_prov[r] as f64 / top_prov_total as f64);
                } else {
                    row.null(NullReason::NoTopCitations);
                }
            } else if !members.is_empty() {
                row.null(NullReason::NoCitedArticles);
            }
            rows.push(row);
        }
    }
    let counting = match opts.counting {
        TailCounting::Edge => "edge",
        TailCounting::Article => "article",
    };
    Ok(SeriesReport {
        study_id: format!(
            "region-tail_citation_w{}_{}-{counting}",
            window.length,
            scope_flags(opts.exclude_self, false)
        ),
        kind: StudyKind::RegionTail,
        group_column: Some("region".into()),
        columns: columns(&TAIL_COLUMNS),
        rows,
        config: json!({ "window": window, "options": opts }),
    })
}

/// Column name for a top share, e.g. `top_0.05`.
pub fn top_column(pct: f64) -> String {
    format!("top_{pct}")
}

/// Per eligible publication year, the share of the cohort's raw in-window
/// citations held by the top `pct` of articles, for each `pct`.
pub fn top_share_series(
    corpus: &Corpus,
    window: &WindowSpec,
    pcts: &[f64],
    exclude_self: bool,
) -> Result<SeriesReport, StudyError> {
    require_forward(window)?;
    if pcts.is_empty() || pcts.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
        return Err(StudyError::InvalidConfig(format!("top shares {pcts:?} must lie in (0, 1]")));
    }
    let cohort = ForwardCohort::build(corpus, window, exclude_self, None, Scoring::Raw)?;
    let rows = cohort
        .years
        .years()
        .enumerate()
        .map(|(k, y)| {
            let raw = &cohort.raw[cohort.year_range(k)];
            let zeros = raw.iter().filter(|&&n| n == 0).count() as u64;
            let mut row = SeriesRow::new(y, raw.len() as u64, zeros, pcts.len());
            if raw.is_empty() {
                row.null(NullReason::EmptyCohort);
            } else if zeros == raw.len() as u64 {
                row.null(NullReason::AllZero);
            } else {
                let d = Distribution::from_counts(raw);
                for (slot, &p) in row.metrics.iter_mut().zip(pcts) {
                    *slot = Some(top_share(&d, p).expect("validated share, positive total"));
                }
            }
            row
        })
        .collect();
    Ok(SeriesReport {
        study_id: format!(
            "top-share_citation_w{}_{}",
            window.length,
            scope_flags(exclude_self, false)
        ),
        kind: StudyKind::TopShare,
        group_column: None,
        columns: pcts.iter().map(|&p| top_column(p)).collect(),
        rows,
        config: json!({
            "window": window,
            "pcts": pcts,
            "exclude_self_citations": exclude_self,
        }),
    })
}
