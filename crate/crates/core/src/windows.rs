//! Citation windows and cohort eligibility.
//!
//! Forward windows count citations received in the `W` years after
//! publication; backward windows look at the `W` years before a reference
//! year. The publication (or reference) year itself is never counted.
//! Eligibility requires the whole window to be observable inside the corpus span.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{ArticleIdx, Corpus};
use crate::span::YearSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WindowSpec {
    pub direction: Direction,
    pub length: u32,
    pub exclude_pub_year: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WindowError {
    #[error("window length must be at least 1")]
    ZeroLength,
    #[error("publication-year exclusion cannot be disabled")]
    PubYearIncluded,
}

impl WindowSpec {
    pub fn forward(length: u32) -> Self {
        Self {
            direction: Direction::Forward,
            length,
            exclude_pub_year: true,
        }
    }

    pub fn backward(length: u32) -> Self {
        Self {
            direction: Direction::Backward,
            length,
            exclude_pub_year: true,
        }
    }

    pub fn validate(&self) -> Result<(), WindowError> {
        if self.length == 0 {
            return Err(WindowError::ZeroLength);
        }
        if !self.exclude_pub_year {
            return Err(WindowError::PubYearIncluded);
        }
        Ok(())
    }

    fn w(&self) -> i32 {
        self.length as i32
    }
}

/// Years in which citations to an article published in `pub_year` are counted.
pub fn counted_years(pub_year: i32, w: &WindowSpec) -> YearSpan {
    debug_assert_eq!(w.direction, Direction::Forward);
    YearSpan::new(pub_year + 1, pub_year + w.w())
}

/// Publication years whose full forward window lies inside `span`.
pub fn eligible_pub_years_forward(span: YearSpan, w: &WindowSpec) -> YearSpan {
    debug_assert_eq!(w.direction, Direction::Forward);
    if span.is_empty() {
        return YearSpan::empty();
    }
    YearSpan::new(span.start, span.end - w.w())
}

/// Cited-article population years for `ref_year`, or `None` when the
/// backward window reaches before the span.
///
/// With `drop_earliest_population` the first `W` span years are treated as
/// warm-up and never appear in a population.
pub fn cited_population_backward(
    ref_year: i32,
    span: YearSpan,
    w: &WindowSpec,
    drop_earliest_population: bool,
) -> Option<YearSpan> {
    debug_assert_eq!(w.direction, Direction::Backward);
    let first = ref_year - w.w();
    let floor = if drop_earliest_population {
        span.start + w.w()
    } else {
        span.start
    };
    (span.contains(ref_year) && first >= floor).then(|| YearSpan::new(first, ref_year - 1))
}

/// Reference years for which [`cited_population_backward`] is defined.
pub fn analyzable_ref_years(span: YearSpan, w: &WindowSpec, drop_earliest_population: bool) -> YearSpan {
    if span.is_empty() {
        return YearSpan::empty();
    }
    let lead = if drop_earliest_population { 2 * w.w() } else { w.w() };
    YearSpan::new(span.start + lead, span.end)
}

/// Per-year counts of in-window citations received by `article`.
pub fn citations_in_window(
    article: ArticleIdx,
    w: &WindowSpec,
    corpus: &Corpus,
    exclude_self: bool,
) -> BTreeMap<i32, u64> {
    let years = counted_years(corpus.pub_year(article), w);
    let mut out = BTreeMap::new();
    for (citing, is_self) in corpus.citing(article) {
        if exclude_self && is_self {
            continue;
        }
        let y = corpus.pub_year(citing);
        if years.contains(y) {
            *out.entry(y).or_insert(0) += 1;
        }
    }
    out
}

/// Total in-window citations received by `article`.
pub fn window_count(article: ArticleIdx, w: &WindowSpec, corpus: &Corpus, exclude_self: bool) -> u64 {
    let years = counted_years(corpus.pub_year(article), w);
    corpus
        .citing(article)
        .filter(|&(c, s)| !(exclude_self && s) && years.contains(corpus.pub_year(c)))
        .count() as u64
}
