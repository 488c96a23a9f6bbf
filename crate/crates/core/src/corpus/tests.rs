use proptest::prelude::*;

use super::*;

const ARTICLES_HEAD: &str = "id\tpub_year\tfield\tregion\tjournal_id\tauthor_ids\n";
const EDGES_HEAD: &str = "citing_id\tcited_id\n";

fn load(articles: &str, edges: &str, span: Option<YearSpan>) -> Result<Corpus, CorpusError> {
    let a = format!("{ARTICLES_HEAD}{articles}");
    let e = format!("{EDGES_HEAD}{edges}");
    load_corpus(a.as_bytes(), e.as_bytes(), &LoadOptions { span, regions: None })
}

/// A 2000 J1, B 2000 J2, C 2001 J1, D 2002 J1, E 2002 J2
const FIVE: &str = "A\t2000\tbio\tEurope\tJ1\ta1;a2\n\
                    B\t2000\tbio\tAsia\tJ2\tb1\n\
                    C\t2001\tphys\tEurope\tJ1\ta1\n\
                    D\t2002\tbio\tAsia\tJ1\t\n\
                    E\t2002\tphys\tEurope\tJ2\te1\n";
const FIVE_EDGES: &str = "C\tA\nC\tB\nD\tA\nD\tC\nE\tC\nE\tC\n";

fn emit(c: &Corpus) -> (String, String) {
    let mut a = Vec::new();
    let mut e = Vec::new();
    write_articles(c, &mut a).unwrap();
    write_edges(c, &mut e).unwrap();
    (String::from_utf8(a).unwrap(), String::from_utf8(e).unwrap())
}

#[test]
fn empty_sources_give_empty_corpus() {
    let c = load("", "", Some(YearSpan::new(2000, 2001))).unwrap();
    assert_eq!(c.len(), 0);
    assert_eq!(c.edge_count(), 0);
    assert!(c.indexes_agree());
}

#[test]
fn dangling_edge_is_dropped_and_counted() {
    let c = load(
        "A\t2000\tf\tr\tj\t\nB\t2000\tf\tr\tj\t\nC\t2000\tf\tr\tj\t\n",
        "A\tB\nA\tX\n",
        None,
    )
    .unwrap();
    assert_eq!(c.len(), 3);
    assert_eq!(c.edge_count(), 1);
    assert_eq!(c.tally().dangling, 1);
    assert_eq!(c.tally().edges_read, 2);
}

#[test]
fn five_article_fixture_per_year_totals() {
    let c = load(FIVE, FIVE_EDGES, None).unwrap();
    assert_eq!(c.span(), YearSpan::new(2000, 2002));
    assert_eq!(c.edge_count(), 5);
    assert_eq!(c.tally().duplicate_edge, 1);
    // citing years: C(2001) x2, D(2002) x2, E(2002) x1
    assert_eq!(c.citations_in_year(2000), 0);
    assert_eq!(c.citations_in_year(2001), 2);
    assert_eq!(c.citations_in_year(2002), 3);
    // C->A shares a1
    assert_eq!(c.self_citations_in_year(2001), 1);
    assert_eq!(c.self_citations_in_year(2002), 0);
    let bio = c.field_index("bio").unwrap();
    let phys = c.field_index("phys").unwrap();
    assert_eq!(c.field_year_articles(bio, 2000), 2);
    assert_eq!(c.field_year_references(bio, 2002), 2);
    assert_eq!(c.field_year_references(phys, 2001), 2);
    assert_eq!(c.field_year_references(phys, 2002), 1);
    assert_eq!(c.in_degree(c.find("C").unwrap()), 2);
    assert!(c.indexes_agree());
}

#[test]
fn future_dated_and_self_loop_edges_are_tallied() {
    let c = load(FIVE, "A\tC\nC\tC\nC\tA\n", None).unwrap();
    assert_eq!(c.edge_count(), 1);
    assert_eq!(c.tally().future_dated, 1);
    assert_eq!(c.tally().self_loop, 1);
}

#[test]
fn out_of_span_articles_dropped_and_their_edges_dangle() {
    let c = load(FIVE, FIVE_EDGES, Some(YearSpan::new(2001, 2002))).unwrap();
    assert_eq!(c.len(), 3);
    assert_eq!(c.tally().out_of_span, 2);
    // C->A, C->B, D->A dangle; D->C, E->C, E->C(dup) remain
    assert_eq!(c.tally().dangling, 3);
    assert_eq!(c.edge_count(), 2);
}

#[test]
fn malformed_rows_are_hard_errors_with_line_numbers() {
    let err = load("A\t20x0\tf\tr\tj\t\n", "", None).unwrap_err();
    assert!(matches!(err, CorpusError::BadYear { line: 2, .. }), "{err}");

    let err = load("A\t2000\tf\tr\tj\t\nB\t2000\tf\n", "", None).unwrap_err();
    assert!(
        matches!(err, CorpusError::ColumnCount { line: 3, found: 3, .. }),
        "{err}"
    );

    let err = load("A\t2000\tf\tr\tj\t\nA\t2001\tf\tr\tj\t\n", "", None).unwrap_err();
    assert!(matches!(err, CorpusError::DuplicateId { line: 3, .. }), "{err}");

    let err = load("A\t2000\t\tr\tj\t\n", "", None).unwrap_err();
    assert!(matches!(err, CorpusError::EmptyValue { column: "field", .. }));

    let err = load("", "A\tB\tC\n", None).unwrap_err();
    assert!(matches!(err, CorpusError::ColumnCount { file: "edges", line: 2, .. }));
}

#[test]
fn bad_header_is_rejected() {
    let err = load_corpus("id\tyear\n".as_bytes(), EDGES_HEAD.as_bytes(), &LoadOptions::default())
        .unwrap_err();
    assert!(matches!(err, CorpusError::Header { file: "articles", .. }));
}

#[test]
fn configured_regions_reject_unknown_labels_and_keep_empty_ones() {
    let a = format!("{ARTICLES_HEAD}A\t2000\tf\tEurope\tj\t\n");
    let opts = LoadOptions {
        span: None,
        regions: Some(vec!["Europe".into(), "Africa".into()]),
    };
    let c = load_corpus(a.as_bytes(), EDGES_HEAD.as_bytes(), &opts).unwrap();
    assert_eq!(c.region_labels(), ["Europe", "Africa"]);
    assert_eq!(c.region_article_count(c.region_index("Africa").unwrap()), 0);

    let a = format!("{ARTICLES_HEAD}A\t2000\tf\tMars\tj\t\n");
    let err = load_corpus(a.as_bytes(), EDGES_HEAD.as_bytes(), &opts).unwrap_err();
    assert!(matches!(err, CorpusError::UnknownRegion { line: 2, .. }));
}

#[test]
fn core_journal_filter() {
    let c = load(FIVE, FIVE_EDGES, None).unwrap();
    let core = filter_core_journals(&c);
    // J1 has articles in 2000, 2001 and 2002; J2 misses 2001
    let ids: Vec<_> = core.articles().map(|a| a.id().to_string()).collect();
    assert_eq!(ids, ["A", "C", "D"]);
    let edges: Vec<_> = core
        .edges()
        .map(|(a, b, _)| (core.id(a).to_string(), core.id(b).to_string()))
        .collect();
    assert_eq!(
        edges,
        [("C".into(), "A".into()), ("D".into(), "A".into()), ("D".into(), "C".into())]
    );
    assert_eq!(core.citations_in_year(2002), 2);
    assert!(core.indexes_agree());
}

#[test]
fn core_filter_single_journal_every_year_is_kept() {
    let c = load(
        "a\t2000\tf\tr\tJ\t\nb\t2001\tf\tr\tJ\t\nc\t2002\tf\tr\tJ\t\n",
        "",
        None,
    )
    .unwrap();
    assert_eq!(filter_core_journals(&c).len(), 3);
    let c = load("a\t2000\tf\tr\tJ\t\nc\t2002\tf\tr\tJ\t\n", "", None).unwrap();
    assert_eq!(filter_core_journals(&c).len(), 0);
}

#[test]
fn self_citation_predicate() {
    let c = load(
        "A\t2000\tf\tr\tj\ta1;a2\nB\t2001\tf\tr\tj\ta2\nC\t2001\tf\tr\tj\tc1\nD\t2001\tf\tr\tj\t\nE\t2000\tf\tr\tj\t\n",
        "",
        None,
    )
    .unwrap();
    assert!(is_self_citation(&CitationEdge::new("B", "A"), &c).unwrap());
    assert!(!is_self_citation(&CitationEdge::new("C", "A"), &c).unwrap());
    assert!(!is_self_citation(&CitationEdge::new("D", "E"), &c).unwrap());
    assert!(is_self_citation(&CitationEdge::new("Z", "A"), &c).is_err());
}

#[test]
fn scan_matches_load_tallies() {
    let a = format!("{ARTICLES_HEAD}{FIVE}");
    let e = format!("{EDGES_HEAD}{FIVE_EDGES}A\tX\n");
    let report = scan(a.as_bytes(), e.as_bytes(), &LoadOptions::default()).unwrap();
    let c = load_corpus(a.as_bytes(), e.as_bytes(), &LoadOptions::default()).unwrap();
    assert_eq!(report.tally, *c.tally());
    assert_eq!(report.retained_edges, c.edge_count() as u64);
    assert_eq!(report.years[&2002], 2);
    assert_eq!(report.fields["phys"], 2);
    assert!(report.to_string().contains("dangling: 1"));
}

fn corpus_strategy() -> impl Strategy<Value = (String, String)> {
    let article = (1998i32..2004, 0usize..3, 0usize..2, 0usize..3, proptest::collection::vec(0usize..4, 0..3));
    (
        proptest::collection::vec(article, 0..25),
        proptest::collection::vec((0usize..30, 0usize..30), 0..80),
    )
        .prop_map(|(arts, edges)| {
            let mut a = String::from(ARTICLES_HEAD);
            for (i, (y, f, r, j, au)) in arts.iter().enumerate() {
                let au: Vec<_> = au.iter().map(|x| format!("u{x}")).collect();
                a.push_str(&format!("p{i}\t{y}\tf{f}\tr{r}\tj{j}\t{}\n", au.join(";")));
            }
            let mut e = String::from(EDGES_HEAD);
            for (x, y) in edges {
                e.push_str(&format!("p{x}\tp{y}\n"));
            }
            (a, e)
        })
}

proptest! {
    #[test]
    fn load_invariants_and_round_trip((a, e) in corpus_strategy()) {
        let opts = LoadOptions { span: Some(YearSpan::new(1999, 2002)), regions: None };
        let c = load_corpus(a.as_bytes(), e.as_bytes(), &opts).unwrap();
        prop_assert!(c.indexes_agree());
        let per_year: u64 = c.span().years().map(|y| c.citations_in_year(y)).sum();
        prop_assert_eq!(per_year, c.edge_count() as u64);
        let t = c.tally();
        prop_assert_eq!(t.edges_read, c.edge_count() as u64 + t.edges_dropped());

        let (a2, e2) = emit(&c);
        let d = load_corpus(a2.as_bytes(), e2.as_bytes(), &opts).unwrap();
        prop_assert_eq!(emit(&d), (a2, e2));
        prop_assert_eq!(c.edges().collect::<Vec<_>>(), d.edges().collect::<Vec<_>>());
        for y in c.span().years() {
            prop_assert_eq!(c.citations_in_year(y), d.citations_in_year(y));
            prop_assert_eq!(c.self_citations_in_year(y), d.self_citations_in_year(y));
            for f in 0..c.field_labels().len() as u16 {
                prop_assert_eq!(c.field_year_articles(f, y), d.field_year_articles(f, y));
                prop_assert_eq!(c.field_year_references(f, y), d.field_year_references(f, y));
            }
        }
    }

    #[test]
    fn core_filter_is_idempotent((a, e) in corpus_strategy()) {
        let opts = LoadOptions { span: Some(YearSpan::new(1999, 2002)), regions: None };
        let c = load_corpus(a.as_bytes(), e.as_bytes(), &opts).unwrap();
        let once = filter_core_journals(&c);
        let twice = filter_core_journals(&once);
        prop_assert_eq!(emit(&once), emit(&twice));
        prop_assert!(once.indexes_agree());
    }
}
