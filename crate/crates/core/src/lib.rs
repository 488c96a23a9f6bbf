//! Citation-concentration analytics.
//!
//! Load or synthesize a citation [`Corpus`](corpus::Corpus), score cohorts
//! inside fixed citation windows with field- and year-normalization, and
//! measure how concentrated the resulting distributions are.

pub mod concentration;
pub mod corpus;
pub mod normalize;
pub mod span;
pub mod studies;
pub mod synthgen;
pub mod windows;

pub use concentration::{gini, lorenz, top_share, Distribution, LorenzCurve};
pub use corpus::{Article, ArticleIdx, CitationEdge, Corpus, CorpusBuilder, CorpusError, LoadOptions};
pub use span::YearSpan;
pub use studies::{SeriesReport, StudyConfig};
pub use windows::{Direction, WindowSpec};
