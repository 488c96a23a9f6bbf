//! Deterministic synthetic citation corpora.
//!
//! Articles are created year by year. Each new article draws its references
//! without replacement from articles of earlier years, with probability
//! proportional to `(in_degree + additive)^exponent`, times an optional
//! recency decay `2^(-age / halflife)`. In-degrees used for sampling are the
//! ones at the start of the year. Authors come from per-region pools, and a
//! fraction of references is redirected to an earlier article by one of the
//! citing article's own authors, so self-citations show up as shared author ids.

mod params;
mod scenario;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{Article, ArticleIdx, Corpus, CorpusBuilder};

pub use params::{Attachment, GenParams, Mix, RegionMix, Schedule};
pub use scenario::{scenario, SCENARIOS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("unknown scenario `{name}`; available: {}", SCENARIOS.join(", "))]
    UnknownScenario { name: String },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

/// What the generator realized, including references it could not place.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct GenReport {
    pub articles: u64,
    pub requested_refs: u64,
    pub realized_refs: u64,
    /// References requested beyond the number of available earlier articles.
    pub clamped_refs: u64,
    /// References routed to an earlier article of a shared author.
    pub injected_self_refs: u64,
    /// References drawn on literature older than the span (no edge).
    pub external_refs: u64,
}

struct Sampler<'a> {
    labels: &'a [String],
    cumulative: Vec<f64>,
}

impl<'a> Sampler<'a> {
    fn new(mix: &'a Mix) -> (Vec<String>, Vec<f64>) {
        let labels: Vec<String> = mix.keys().cloned().collect();
        let mut acc = 0.0;
        let cumulative = mix
            .values()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        (labels, cumulative)
    }

    fn pick(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty mix");
        let u = rng.gen::<f64>() * total;
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.labels.len() - 1)
    }
}

/// Draws an index from prefix sums of non-negative weights.
fn draw(cumulative: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total = *cumulative.last().expect("non-empty");
    let u = rng.gen::<f64>() * total;
    cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
}

/// Generates a corpus and the realization report.
pub fn generate(params: &GenParams) -> Result<(Corpus, GenReport), GenError> {
    params.validate()?;
    let span = params.span;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let region_labels = params.region_mix.labels();
    let mut builder =
        CorpusBuilder::with_regions(span, &region_labels).map_err(|e| GenError::InvalidParams(e.to_string()))?;
    let expected_articles: f64 = (0..span.len()).map(|t| params.articles_per_year.at(t)).sum();
    let expected_refs: f64 = (0..span.len())
        .map(|t| params.articles_per_year.at(t) * params.refs_per_article.at(t))
        .sum();
    builder.reserve(expected_articles as usize, (expected_refs * 1.1) as usize);

    let (field_labels, field_cum) = Sampler::new(&params.field_mix);
    let field_sampler = Sampler {
        labels: &field_labels,
        cumulative: field_cum,
    };
    let field_mult: Vec<f64> = field_labels
        .iter()
        .map(|f| params.field_ref_multiplier.get(f).copied().unwrap_or(1.0))
        .collect();
    let region_mult: Vec<f64> = region_labels
        .iter()
        .map(|r| params.region_ref_multiplier.get(r).copied().unwrap_or(1.0))
        .collect();
    let pool = params.author_pool_per_region.max(1) as usize;
    let mut author_articles: Vec<Vec<ArticleIdx>> = vec![Vec::new(); pool * region_labels.len()];

    let mut in_degree: Vec<u32> = Vec::new();
    let mut years: Vec<i32> = Vec::new();
    let mut authors_of: Vec<Vec<u32>> = Vec::new();
    let mut report = GenReport::default();
    let mut cumulative: Vec<f64> = Vec::new();
    let mut positive: usize;

    for (t, year) in span.years().enumerate() {
        let prior = years.len();
        // sampling weights frozen at the start of the year
        cumulative.clear();
        positive = 0;
        let mut acc = 0.0;
        let a = params.attachment.additive;
        let e = params.attachment.exponent;
        let decay: Vec<f64> = (0..=t)
            .map(|age| match params.recency_halflife {
                Some(h) => (-(age as f64) / h).exp2(),
                None => 1.0,
            })
            .collect();
        let mut first_year_mass = 0.0;
        for i in 0..prior {
            let base = in_degree[i] as f64 + a;
            let pa = if e == 1.0 {
                base
            } else if e == 0.0 {
                1.0
            } else {
                base.powf(e)
            };
            if years[i] == span.start {
                first_year_mass += pa;
            }
            let wgt = pa * decay[(year - years[i]) as usize];
            if wgt > 0.0 {
                positive += 1;
            }
            acc += wgt;
            cumulative.push(acc);
        }

        // Σ_{k > t} decay(k) · mass, summed in closed form
        let external_mass = match params.recency_halflife {
            Some(h) if params.pre_span_literature => {
                let q = (-1.0 / h).exp2();
                first_year_mass * q.powi(t as i32 + 1) / (1.0 - q)
            }
            _ => 0.0,
        };

        let region_mix = params.region_mix.at(t, span.len());
        let (_, region_cum) = Sampler::new(&region_mix);
        let region_sampler = Sampler {
            labels: &region_labels,
            cumulative: region_cum,
        };

        let count = params.articles_per_year.at(t).round() as usize;
        let mut new_edges: Vec<(ArticleIdx, ArticleIdx)> = Vec::new();
        for _ in 0..count {
            let idx = years.len() as ArticleIdx;
            let field = field_sampler.pick(&mut rng);
            let region = region_sampler.pick(&mut rng);
            let journal = rng.gen_range(0..params.journals.max(1));
            let k = rng.gen_range(1..=params.max_authors.max(1));
            let mut authors: Vec<u32> = Vec::with_capacity(k as usize);
            for _ in 0..k {
                let a = (region * pool + rng.gen_range(0..pool)) as u32;
                if !authors.contains(&a) {
                    authors.push(a);
                }
            }
            builder
                .add_article(Article {
                    id: format!("A{idx:07}"),
                    pub_year: year,
                    field: field_labels[field].clone(),
                    region: region_labels[region].clone(),
                    journal_id: format!("J{journal:04}"),
                    author_ids: authors.iter().map(|a| format!("u{a}")).collect(),
                })
                .expect("generated article is valid");
            years.push(year);
            in_degree.push(0);

            let mean = params.refs_per_article.at(t) * field_mult[field] * region_mult[region];
            let whole = mean.floor();
            let mut wanted = whole as usize + usize::from(rng.gen::<f64>() < mean - whole);
            report.requested_refs += wanted as u64;
            if params.pre_span_literature && prior == 0 {
                report.external_refs += wanted as u64;
                wanted = 0;
            }
            if wanted > positive {
                report.clamped_refs += (wanted - positive) as u64;
                wanted = positive;
            }
            let mut chosen: Vec<ArticleIdx> = Vec::with_capacity(wanted);
            let mut external = 0usize;
            let mut attempts = 0usize;
            while chosen.len() + external < wanted && attempts < 64 * wanted + 64 {
                attempts += 1;
                if external_mass > 0.0 {
                    let total = cumulative[prior - 1] + external_mass;
                    if rng.gen::<f64>() * total >= cumulative[prior - 1] {
                        external += 1;
                        continue;
                    }
                }
                let target = if params.self_citation_rate > 0.0 && rng.gen::<f64>() < params.self_citation_rate {
                    let author = authors[rng.gen_range(0..authors.len())] as usize;
                    let own = &author_articles[author];
                    if own.is_empty() {
                        draw(&cumulative, &mut rng) as ArticleIdx
                    } else {
                        report.injected_self_refs += 1;
                        own[rng.gen_range(0..own.len())]
                    }
                } else {
                    draw(&cumulative, &mut rng) as ArticleIdx
                };
                if !chosen.contains(&target) {
                    chosen.push(target);
                }
            }
            report.external_refs += external as u64;
            report.clamped_refs += (wanted - chosen.len() - external) as u64;
            for &target in &chosen {
                new_edges.push((idx, target));
            }
            authors_of.push(authors);
        }
        for &(citing, cited) in &new_edges {
            in_degree[cited as usize] += 1;
            builder.add_edge_idx(citing, cited);
        }
        report.realized_refs += new_edges.len() as u64;
        for idx in prior..years.len() {
            for &a in &authors_of[idx] {
                author_articles[a as usize].push(idx as ArticleIdx);
            }
        }
    }
    report.articles = years.len() as u64;
    Ok((builder.build(), report))
}

#[cfg(test)]
mod tests;
