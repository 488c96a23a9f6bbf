use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::GenError;
use crate::span::YearSpan;

/// Label → probability; a valid mix sums to one within 1e-9.
pub type Mix = BTreeMap<String, f64>;

/// A per-year quantity as a function of the year offset `t` from the span start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    Constant { value: f64 },
    Linear { start: f64, step: f64 },
    Geometric { start: f64, rate: f64 },
}

impl Schedule {
    pub fn constant(value: f64) -> Self {
        Schedule::Constant { value }
    }

    /// Value at offset `t`, floored at zero.
    pub fn at(&self, t: usize) -> f64 {
        let v = match *self {
            Schedule::Constant { value } => value,
            Schedule::Linear { start, step } => start + step * t as f64,
            Schedule::Geometric { start, rate } => start * (1.0 + rate).powi(t as i32),
        };
        v.max(0.0)
    }
}

/// `(in_degree + additive)^exponent`. An exponent of zero gives uniform attachment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Attachment {
    pub additive: f64,
    pub exponent: f64,
}

/// Region shares, linearly interpolated from `start` to `end` across the span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMix {
    pub start: Mix,
    #[serde(default)]
    pub end: Option<Mix>,
}

impl RegionMix {
    pub fn fixed(mix: Mix) -> Self {
        Self { start: mix, end: None }
    }

    /// Union of labels from both endpoints, sorted.
    pub fn labels(&self) -> Vec<String> {
        let mut s: BTreeSet<String> = self.start.keys().cloned().collect();
        if let Some(end) = &self.end {
            s.extend(end.keys().cloned());
        }
        s.into_iter().collect()
    }

    /// Mix at offset `t` of a span with `years` years; every label is present.
    pub fn at(&self, t: usize, years: usize) -> Mix {
        let frac = if years > 1 { t as f64 / (years - 1) as f64 } else { 0.0 };
        self.labels()
            .into_iter()
            .map(|l| {
                let a = self.start.get(&l).copied().unwrap_or(0.0);
                let v = match &self.end {
                    Some(end) => {
                        let b = end.get(&l).copied().unwrap_or(0.0);
                        a + (b - a) * frac
                    }
                    None => a,
                };
                (l, v)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub span: YearSpan,
    pub articles_per_year: Schedule,
    /// Mean references per article; realized as floor plus a Bernoulli remainder.
    pub refs_per_article: Schedule,
    pub attachment: Attachment,
    /// Halflife in years of the recency decay; `None` disables it.
    pub recency_halflife: Option<f64>,
    /// Let references fall on literature older than the span. Every year before
    /// the span carries the attachment mass of the first span year, decayed by
    /// age; references drawn there are external and produce no edge.
    #[serde(default)]
    pub pre_span_literature: bool,
    pub field_mix: Mix,
    /// Per-field scaling of the reference count (missing fields scale by 1).
    #[serde(default)]
    pub field_ref_multiplier: Mix,
    pub region_mix: RegionMix,
    /// Per-region scaling of the reference count (missing regions scale by 1).
    #[serde(default)]
    pub region_ref_multiplier: Mix,
    /// Probability that a reference slot goes to an earlier article of one of the authors.
    pub self_citation_rate: f64,
    pub max_authors: u32,
    pub author_pool_per_region: u32,
    pub journals: u32,
    pub seed: u64,
}

fn check_mix(name: &str, mix: &Mix) -> Result<(), GenError> {
    if mix.is_empty() {
        return Err(GenError::InvalidParams(format!("{name} is empty")));
    }
    if mix.values().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(GenError::InvalidParams(format!("{name} has a negative or non-finite weight")));
    }
    let total: f64 = mix.values().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(GenError::InvalidParams(format!("{name} sums to {total}, not 1")));
    }
    Ok(())
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |m: &str| Err(GenError::InvalidParams(m.to_string()));
        if self.span.is_empty() {
            return bad("span is empty");
        }
        check_mix("field_mix", &self.field_mix)?;
        check_mix("region_mix.start", &self.region_mix.start)?;
        if let Some(end) = &self.region_mix.end {
            check_mix("region_mix.end", end)?;
        }
        if !(0.0..=1.0).contains(&self.self_citation_rate) {
            return bad("self_citation_rate must be in [0, 1]");
        }
        let a = self.attachment;
        if !(a.additive.is_finite() && a.additive >= 0.0 && a.exponent.is_finite() && a.exponent >= 0.0) {
            return bad("attachment parameters must be finite and non-negative");
        }
        if self.pre_span_literature && self.recency_halflife.is_none() {
            return bad("pre_span_literature needs a recency_halflife");
        }
        if let Some(h) = self.recency_halflife {
            if !(h.is_finite() && h > 0.0) {
                return bad("recency_halflife must be positive");
            }
        }
        let mut mults = self.field_ref_multiplier.values().chain(self.region_ref_multiplier.values());
        if mults.any(|v| !v.is_finite() || *v < 0.0) {
            return bad("reference multipliers must be finite and non-negative");
        }
        if self.max_authors == 0 || self.author_pool_per_region == 0 || self.journals == 0 {
            return bad("max_authors, author_pool_per_region and journals must be positive");
        }
        Ok(())
    }
}
