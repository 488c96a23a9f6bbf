use super::*;
use crate::concentration::{gini, Distribution};
use crate::corpus::{write_articles, write_edges};
use crate::span::YearSpan;
use crate::studies::{gini_series, uncited_share_series, StudyConfig};

fn small(seed: u64) -> GenParams {
    GenParams {
        span: YearSpan::new(2000, 2011),
        articles_per_year: Schedule::constant(400.0),
        refs_per_article: Schedule::Linear { start: 2.0, step: 0.5 },
        seed,
        ..scenario("stationary").unwrap()
    }
}

fn emitted(c: &Corpus) -> (Vec<u8>, Vec<u8>) {
    let mut a = Vec::new();
    let mut e = Vec::new();
    write_articles(c, &mut a).unwrap();
    write_edges(c, &mut e).unwrap();
    (a, e)
}

#[test]
fn same_seed_same_files() {
    let (a, ra) = generate(&small(7)).unwrap();
    let (b, rb) = generate(&small(7)).unwrap();
    assert_eq!(ra, rb);
    assert_eq!(emitted(&a), emitted(&b));
    let (c, _) = generate(&small(8)).unwrap();
    assert_ne!(emitted(&a).1, emitted(&c).1);
}

#[test]
fn edges_equal_realized_references() {
    let (c, r) = generate(&small(3)).unwrap();
    assert_eq!(c.edge_count() as u64, r.realized_refs);
    assert_eq!(r.requested_refs, r.realized_refs + r.clamped_refs + r.external_refs);
    assert_eq!(c.len() as u64, r.articles);
    assert_eq!(c.tally().edges_dropped(), 0);
    // the first year can only cite literature older than the span
    assert!(r.external_refs > 0);
    assert_eq!(r.clamped_refs, 0);
    let first: u64 = c.articles_in_year(2000).iter().map(|&i| c.out_degree(i) as u64).sum();
    assert_eq!(first, 0);
}

#[test]
fn early_shortfall_is_clamped_without_pre_span_literature() {
    let p = GenParams {
        pre_span_literature: false,
        articles_per_year: Schedule::constant(5.0),
        refs_per_article: Schedule::constant(8.0),
        ..small(4)
    };
    let (c, r) = generate(&p).unwrap();
    assert_eq!(r.external_refs, 0);
    // year 0 has nothing to cite; year 1 has 5 targets for 8 wanted
    assert!(r.clamped_refs >= 40 + 5 * 3);
    assert_eq!(c.edge_count() as u64, r.requested_refs - r.clamped_refs);
}

#[test]
fn no_future_or_self_loops_and_self_citations_appear() {
    let (c, r) = generate(&small(5)).unwrap();
    let mut selfs = 0;
    for (citing, cited, is_self) in c.edges() {
        assert_ne!(citing, cited);
        assert!(c.pub_year(cited) < c.pub_year(citing));
        selfs += usize::from(is_self);
    }
    assert!(r.injected_self_refs > 0);
    assert!(selfs as u64 >= r.injected_self_refs / 2);
}

#[test]
fn frequencies_within_three_sigma() {
    let p = GenParams {
        articles_per_year: Schedule::constant(2000.0),
        refs_per_article: Schedule::constant(0.0),
        ..small(11)
    };
    let (c, _) = generate(&p).unwrap();
    let n = c.len() as f64;
    assert!(n >= 1e4);
    for (label, &prob) in &p.field_mix {
        let k = c.field_index(label).unwrap();
        let count = (0..c.len() as u32).filter(|&i| c.field_of(i) == k).count() as f64;
        let sigma = (n * prob * (1.0 - prob)).sqrt();
        assert!((count - n * prob).abs() <= 3.0 * sigma, "{label}: {count} vs {}", n * prob);
    }
    for (label, &prob) in &p.region_mix.start {
        let k = c.region_index(label).unwrap();
        let count = c.region_article_count(k) as f64;
        let sigma = (n * prob * (1.0 - prob)).sqrt();
        assert!((count - n * prob).abs() <= 3.0 * sigma, "{label}: {count} vs {}", n * prob);
    }
}

#[test]
fn preferential_attachment_is_more_concentrated_than_uniform() {
    let pa = GenParams {
        refs_per_article: Schedule::constant(6.0),
        attachment: Attachment {
            additive: 0.1,
            exponent: 1.0,
        },
        recency_halflife: None,
        pre_span_literature: false,
        ..small(21)
    };
    let uniform = GenParams {
        attachment: Attachment {
            additive: 0.1,
            exponent: 0.0,
        },
        ..pa.clone()
    };
    let cfg = StudyConfig::citation_based(5).normalized(false);
    let g = |p: &GenParams| {
        let (c, _) = generate(p).unwrap();
        gini_series(&c, &cfg).unwrap().valid("gini")
    };
    let (a, b) = (g(&pa), g(&uniform));
    assert_eq!(a.len(), b.len());
    assert!(!a.is_empty());
    for ((y, ga), (_, gb)) in a.iter().zip(&b) {
        assert!(ga > gb, "{y}: {ga} <= {gb}");
    }
}

#[test]
fn stationary_schedules_are_flat() {
    let p = scenario("stationary").unwrap();
    let years = p.span.len();
    for t in 0..years {
        assert_eq!(p.articles_per_year.at(t), p.articles_per_year.at(0));
        assert_eq!(p.refs_per_article.at(t), p.refs_per_article.at(0));
        assert_eq!(p.region_mix.at(t, years), p.region_mix.at(0, years));
    }
}

#[test]
fn region_shift_shares_cross_over() {
    let p = GenParams {
        articles_per_year: Schedule::constant(800.0),
        refs_per_article: Schedule::constant(0.0),
        ..scenario("region-shift").unwrap()
    };
    let (c, _) = generate(&p).unwrap();
    let na = c.region_index("north_america").unwrap();
    let eu = c.region_index("europe").unwrap();
    let share = |year: i32, region: u16| {
        let ids = c.articles_in_year(year);
        ids.iter().filter(|&&i| c.region_of(i) == region).count() as f64 / ids.len() as f64
    };
    assert!(share(p.span.start, na) > share(p.span.start, eu));
    assert!(share(p.span.end, na) < share(p.span.end, eu));
}

#[test]
fn declining_scenario_inflates_references() {
    let p = scenario("declining-uncitedness").unwrap();
    let years = p.span.len();
    assert!(years >= 30);
    let articles: f64 = (0..years).map(|t| p.articles_per_year.at(t)).sum();
    assert!(articles >= 1e5);
    assert!((1..years).all(|t| p.refs_per_article.at(t) > p.refs_per_article.at(t - 1)));
}

#[test]
fn shrunken_declining_scenario_trends_down() {
    let p = GenParams {
        articles_per_year: Schedule::constant(6000.0),
        span: YearSpan::new(1980, 1999),
        ..scenario("declining-uncitedness").unwrap()
    };
    let (c, _) = generate(&p).unwrap();
    let r = uncited_share_series(&c, &crate::windows::WindowSpec::forward(2), false, false).unwrap();
    let s = r.valid("uncited_share");
    assert!(s.last().unwrap().1 < s[0].1 - 0.2);
}

#[test]
fn unknown_scenario_lists_presets() {
    let msg = scenario("nope").unwrap_err().to_string();
    for name in SCENARIOS {
        assert!(msg.contains(name));
    }
}

#[test]
fn invalid_params_rejected() {
    let mut p = small(1);
    p.field_mix.insert("extra".into(), 0.5);
    assert!(matches!(generate(&p), Err(GenError::InvalidParams(_))));
    let mut p = small(1);
    p.self_citation_rate = 1.5;
    assert!(generate(&p).is_err());
}

#[test]
fn gini_helpers_agree_on_generated_counts() {
    let (c, _) = generate(&small(2)).unwrap();
    let counts: Vec<u64> = (0..c.len() as u32).map(|i| c.in_degree(i) as u64).collect();
    let g = gini(&Distribution::from_counts(&counts)).unwrap();
    assert!(g > 0.0 && g < 1.0);
}
