use super::{Attachment, GenError, GenParams, Mix, RegionMix, Schedule};
use crate::span::YearSpan;

/// Names accepted by [`scenario`].
pub const SCENARIOS: &[&str] = &["declining-uncitedness", "stationary", "region-shift"];

fn mix(pairs: &[(&str, f64)]) -> Mix {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn fields() -> Mix {
    mix(&[("biology", 0.45), ("chemistry", 0.35), ("mathematics", 0.2)])
}

fn field_refs() -> Mix {
    mix(&[("biology", 1.3), ("chemistry", 1.0), ("mathematics", 0.5)])
}

fn regions() -> Mix {
    mix(&[
        ("africa", 0.05),
        ("asia", 0.15),
        ("europe", 0.3),
        ("north_america", 0.45),
        ("other", 0.05),
    ])
}

/// A named preset. The seed defaults to 1 and may be overridden by the caller.
pub fn scenario(name: &str) -> Result<GenParams, GenError> {
    let base = GenParams {
        span: YearSpan::new(1980, 2015),
        articles_per_year: Schedule::Linear {
            start: 20000.0,
            step: 400.0,
        },
        // in-corpus references; most of a real bibliography points elsewhere
        refs_per_article: Schedule::Geometric {
            start: 0.8,
            rate: 0.07,
        },
        attachment: Attachment {
            additive: 4.0,
            exponent: 1.0,
        },
        recency_halflife: Some(3.0),
        pre_span_literature: true,
        field_mix: fields(),
        field_ref_multiplier: field_refs(),
        region_mix: RegionMix::fixed(regions()),
        region_ref_multiplier: Mix::new(),
        self_citation_rate: 0.08,
        max_authors: 4,
        author_pool_per_region: 4000,
        journals: 60,
        seed: 1,
    };
    match name {
        "declining-uncitedness" => Ok(base),
        "stationary" => Ok(GenParams {
            span: YearSpan::new(1990, 2010),
            articles_per_year: Schedule::constant(2000.0),
            refs_per_article: Schedule::constant(8.0),
            ..base
        }),
        "region-shift" => Ok(GenParams {
            articles_per_year: Schedule::Linear {
                start: 6000.0,
                step: 120.0,
            },
            region_mix: RegionMix {
                start: mix(&[
                    ("africa", 0.05),
                    ("asia", 0.15),
                    ("europe", 0.2),
                    ("north_america", 0.55),
                    ("other", 0.05),
                ]),
                end: Some(mix(&[
                    ("africa", 0.05),
                    ("asia", 0.35),
                    ("europe", 0.4),
                    ("north_america", 0.15),
                    ("other", 0.05),
                ])),
            },
            // the rising region writes long reference lists
            region_ref_multiplier: mix(&[("asia", 1.8)]),
            ..base
        }),
        _ => Err(GenError::UnknownScenario { name: name.to_string() }),
    }
}
