use std::fmt::Write as _;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Map, Value};

/// Which analysis produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyKind {
    Gini,
    GiniByField,
    Uncited,
    RegionRemoval,
    RegionTail,
    TopShare,
}

impl StudyKind {
    pub fn slug(&self) -> &'static str {
        match self {
            StudyKind::Gini => "gini",
            StudyKind::GiniByField => "gini-field",
            StudyKind::Uncited => "uncited",
            StudyKind::RegionRemoval => "region-removal",
            StudyKind::RegionTail => "region-tail",
            StudyKind::TopShare => "top-share",
        }
    }
}

/// Why a metric is null in a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NullReason {
    EmptyCohort,
    AllZero,
    ZeroBaseline,
    NoSingleCited,
    NoCitedArticles,
    NoTopCitations,
}

impl NullReason {
    pub fn code(&self) -> &'static str {
        match self {
            NullReason::EmptyCohort => "empty_cohort",
            NullReason::AllZero => "all_zero",
            NullReason::ZeroBaseline => "zero_baseline",
            NullReason::NoSingleCited => "no_single_cited",
            NullReason::NoCitedArticles => "no_cited_articles",
            NullReason::NoTopCitations => "no_top_citations",
        }
    }
}

/// One row per candidate year (and group, for grouped studies).
/// `metrics` is parallel to [`SeriesReport::columns`].
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub year: i32,
    pub group: Option<String>,
    pub n: u64,
    pub zero_count: u64,
    pub metrics: Vec<Option<f64>>,
    pub reasons: Vec<NullReason>,
}

impl SeriesRow {
    pub(crate) fn new(year: i32, n: u64, zero_count: u64, width: usize) -> Self {
        Self {
            year,
            group: None,
            n,
            zero_count,
            metrics: vec![None; width],
            reasons: Vec::new(),
        }
    }

    pub(crate) fn null(&mut self, reason: NullReason) {
        if !self.reasons.contains(&reason) {
            self.reasons.push(reason);
        }
    }

    pub fn reason(&self) -> Option<String> {
        if self.reasons.is_empty() {
            None
        } else {
            Some(self.reasons.iter().map(NullReason::code).collect::<Vec<_>>().join(";"))
        }
    }
}

/// A per-year metric series plus the configuration that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesReport {
    pub study_id: String,
    pub kind: StudyKind,
    /// Name of the grouping column (`region`, `field`) when rows are grouped.
    pub group_column: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<SeriesRow>,
    pub config: Value,
}

fn fmt_f64(v: f64) -> String {
    // shortest representation that round-trips
    format!("{v}")
}

impl SeriesReport {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// `(year, group, value)` for one metric column.
    pub fn series(&self, name: &str) -> Vec<(i32, Option<&str>, Option<f64>)> {
        let Some(i) = self.column_index(name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .map(|r| (r.year, r.group.as_deref(), r.metrics[i]))
            .collect()
    }

    pub fn value(&self, year: i32, group: Option<&str>, name: &str) -> Option<f64> {
        let i = self.column_index(name)?;
        self.rows
            .iter()
            .find(|r| r.year == year && r.group.as_deref() == group)
            .and_then(|r| r.metrics[i])
    }

    /// Non-null `(year, value)` pairs of an ungrouped metric.
    pub fn valid(&self, name: &str) -> Vec<(i32, f64)> {
        self.series(name)
            .into_iter()
            .filter_map(|(y, _, v)| v.map(|v| (y, v)))
            .collect()
    }

    pub fn csv_header(&self) -> Vec<String> {
        let mut h = vec!["year".to_string()];
        if let Some(g) = &self.group_column {
            h.push(g.clone());
        }
        h.push("n".into());
        h.push("zero_count".into());
        h.extend(self.columns.iter().cloned());
        h.push("reason".into());
        h
    }

    /// Comma-separated table; nulls are empty cells.
    pub fn to_csv(&self) -> String {
        let mut out = self.csv_header().join(",");
        out.push('\n');
        for r in &self.rows {
            let _ = write!(out, "{}", r.year);
            if self.group_column.is_some() {
                let _ = write!(out, ",{}", r.group.as_deref().unwrap_or(""));
            }
            let _ = write!(out, ",{},{}", r.n, r.zero_count);
            for m in &r.metrics {
                out.push(',');
                if let Some(v) = m {
                    out.push_str(&fmt_f64(*v));
                }
            }
            out.push(',');
            out.push_str(&r.reason().unwrap_or_default());
            out.push('\n');
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }

    /// CSV content as rows of JSON objects, plus study id, kind and config echo.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                m.insert("year".into(), json!(r.year));
                if let Some(g) = &self.group_column {
                    m.insert(g.clone(), json!(r.group));
                }
                m.insert("n".into(), json!(r.n));
                m.insert("zero_count".into(), json!(r.zero_count));
                for (c, v) in self.columns.iter().zip(&r.metrics) {
                    m.insert(c.clone(), json!(v));
                }
                m.insert("reason".into(), json!(r.reason()));
                Value::Object(m)
            })
            .collect();
        json!({
            "study_id": self.study_id,
            "kind": self.kind,
            "columns": self.csv_header(),
            "config": self.config,
            "rows": rows,
        })
    }
}
