//! Run configuration: a TOML file with one `[[analysis]]` table per study
//! family. Keys are dotted (`window.length`, `study.approach`, ...) and every
//! table rejects unknown keys, so typos fail before any computation starts.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use citeconc_core::normalize::RhoScope;
use citeconc_core::studies::{Approach, StudyConfig, TailCounting, TailOptions};
use citeconc_core::windows::{Direction, WindowSpec};
use citeconc_core::YearSpan;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Overrides the generator seed; the only source of randomness.
    pub seed: Option<u64>,
    pub span: Option<YearSpan>,
    /// Fixed region vocabulary; regions without articles are allowed.
    pub regions: Option<Vec<String>>,
    pub input: Option<InputConfig>,
    pub generator: Option<GeneratorConfig>,
    pub output: OutputConfig,
    #[serde(default)]
    pub analysis: Vec<AnalysisConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    pub articles: PathBuf,
    pub edges: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub scenario: Option<String>,
    /// TOML file holding a full parameter set.
    pub params: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalysisKind {
    /// One Gini series per window length.
    Gini,
    /// Citation- and reference-based, with and without uncited, per window length.
    Battery,
    GiniByField,
    Uncited,
    RegionRemoval,
    RegionTail,
    TopShare,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(u32),
    Many(Vec<u32>),
}

impl OneOrMany {
    fn values(&self) -> Vec<u32> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowKeys {
    pub length: OneOrMany,
    pub direction: Option<Direction>,
    #[serde(default)]
    pub drop_earliest_population: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyKeys {
    pub approach: Option<Approach>,
    pub include_uncited: Option<bool>,
    pub exclude_self: Option<bool>,
    pub core_only: Option<bool>,
    pub field: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalizeKeys {
    pub enabled: Option<bool>,
    #[serde(default)]
    pub mics_per_year: bool,
    #[serde(default)]
    pub rho_scope: RhoScope,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionKeys {
    pub remove: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopKeys {
    pub pcts: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailKeys {
    pub counting: Option<TailCounting>,
    pub top_pct: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub kind: AnalysisKind,
    pub window: WindowKeys,
    #[serde(default)]
    pub study: StudyKeys,
    #[serde(default)]
    pub normalize: NormalizeKeys,
    #[serde(default)]
    pub regions: RegionKeys,
    #[serde(default)]
    pub top: TopKeys,
    #[serde(default)]
    pub tail: TailKeys,
}

/// Where the corpus comes from, with paths resolved against the config file.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Files { articles: PathBuf, edges: PathBuf },
    Scenario(String),
    Params(PathBuf),
}

/// One study to run, fully resolved.
#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Gini(StudyConfig),
    GiniByField(StudyConfig),
    Uncited {
        window: WindowSpec,
        exclude_self: bool,
        core_only: bool,
    },
    RegionRemoval {
        window: WindowSpec,
        region: String,
        exclude_self: bool,
    },
    RegionTail {
        window: WindowSpec,
        options: TailOptions,
    },
    TopShare {
        window: WindowSpec,
        pcts: Vec<f64>,
        exclude_self: bool,
    },
}

fn invalid(i: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("analysis #{}: {msg}", i + 1))
}

impl AnalysisConfig {
    fn forward_windows(&self, i: usize) -> Result<Vec<WindowSpec>, CliError> {
        if self.window.direction == Some(Direction::Backward) {
            return Err(invalid(i, "this analysis needs window.direction = \"forward\""));
        }
        if self.window.drop_earliest_population {
            return Err(invalid(i, "window.drop_earliest_population applies to backward windows only"));
        }
        if self.study.approach == Some(Approach::ReferenceBased) {
            return Err(invalid(i, "this analysis is citation-based only"));
        }
        self.window
            .length
            .values()
            .into_iter()
            .map(|w| {
                let spec = WindowSpec::forward(w);
                spec.validate().map_err(|e| invalid(i, e))?;
                Ok(spec)
            })
            .collect()
    }

    fn study_configs(&self, i: usize) -> Result<Vec<StudyConfig>, CliError> {
        let approach = match (self.study.approach, self.window.direction) {
            (Some(a), Some(d)) if a.direction() != d => {
                return Err(invalid(
                    i,
                    format!("window.direction = {d} contradicts study.approach = {}", a.slug()),
                ))
            }
            (Some(a), _) => a,
            (None, Some(Direction::Forward)) => Approach::CitationBased,
            (None, Some(Direction::Backward)) => Approach::ReferenceBased,
            (None, None) => return Err(invalid(i, "set study.approach or window.direction")),
        };
        if self.window.drop_earliest_population && approach == Approach::CitationBased {
            return Err(invalid(i, "window.drop_earliest_population applies to backward windows only"));
        }
        self.window
            .length
            .values()
            .into_iter()
            .map(|w| {
                let mut cfg = StudyConfig::new(approach, w)
                    .include_uncited(self.study.include_uncited.unwrap_or(true))
                    .exclude_self(self.study.exclude_self.unwrap_or(false))
                    .core_only(self.study.core_only.unwrap_or(false))
                    .normalized(self.normalize.enabled.unwrap_or(true));
                cfg.mics_per_year = self.normalize.mics_per_year;
                cfg.rho_scope = self.normalize.rho_scope;
                cfg.drop_earliest_population = self.window.drop_earliest_population;
                cfg.field_filter = self.study.field.clone();
                cfg.region_removed = self.regions.remove.clone();
                cfg.validate().map_err(|e| invalid(i, e))?;
                Ok(cfg)
            })
            .collect()
    }

    fn reject(&self, i: usize, keys: &[(&str, bool)]) -> Result<(), CliError> {
        for (key, present) in keys {
            if *present {
                return Err(invalid(i, format!("key `{key}` does not apply to kind {:?}", self.kind)));
            }
        }
        Ok(())
    }

    /// Expands the table into jobs, rejecting keys the kind does not use.
    pub fn jobs(&self, i: usize) -> Result<Vec<Job>, CliError> {
        let s = &self.study;
        let top_set = self.top.pcts.is_some();
        let tail_set = self.tail.counting.is_some() || self.tail.top_pct.is_some();
        let norm_set = self.normalize.enabled.is_some();
        let exclude_self = s.exclude_self.unwrap_or(false);
        match self.kind {
            AnalysisKind::Gini | AnalysisKind::GiniByField => {
                self.reject(i, &[("top.pcts", top_set), ("tail.*", tail_set)])?;
                if self.kind == AnalysisKind::GiniByField {
                    self.reject(i, &[("study.field", s.field.is_some())])?;
                }
                let cfgs = self.study_configs(i)?;
                Ok(cfgs
                    .into_iter()
                    .map(|c| match self.kind {
                        AnalysisKind::Gini => Job::Gini(c),
                        _ => Job::GiniByField(c),
                    })
                    .collect())
            }
            AnalysisKind::Battery => {
                self.reject(
                    i,
                    &[
                        ("study.approach", s.approach.is_some()),
                        ("study.include_uncited", s.include_uncited.is_some()),
                        ("window.direction", self.window.direction.is_some()),
                        ("top.pcts", top_set),
                        ("tail.*", tail_set),
                    ],
                )?;
                let mut jobs = Vec::new();
                for approach in [Approach::CitationBased, Approach::ReferenceBased] {
                    for include in [true, false] {
                        let mut table = self.clone();
                        table.kind = AnalysisKind::Gini;
                        table.study.approach = Some(approach);
                        table.study.include_uncited = Some(include);
                        if approach == Approach::CitationBased {
                            table.window.drop_earliest_population = false;
                        }
                        jobs.extend(table.study_configs(i)?.into_iter().map(Job::Gini));
                    }
                }
                Ok(jobs)
            }
            AnalysisKind::Uncited => {
                self.reject(
                    i,
                    &[
                        ("study.include_uncited", s.include_uncited.is_some()),
                        ("study.field", s.field.is_some()),
                        ("normalize.enabled", norm_set),
                        ("regions.remove", self.regions.remove.is_some()),
                        ("top.pcts", top_set),
                        ("tail.*", tail_set),
                    ],
                )?;
                Ok(self
                    .forward_windows(i)?
                    .into_iter()
                    .map(|window| Job::Uncited {
                        window,
                        exclude_self,
                        core_only: s.core_only.unwrap_or(false),
                    })
                    .collect())
            }
            AnalysisKind::RegionRemoval => {
                self.reject(
                    i,
                    &[
                        ("study.include_uncited", s.include_uncited.is_some()),
                        ("study.core_only", s.core_only.is_some()),
                        ("study.field", s.field.is_some()),
                        ("normalize.enabled", norm_set),
                        ("top.pcts", top_set),
                        ("tail.*", tail_set),
                    ],
                )?;
                let region = self
                    .regions
                    .remove
                    .clone()
                    .ok_or_else(|| invalid(i, "region_removal needs regions.remove"))?;
                Ok(self
                    .forward_windows(i)?
                    .into_iter()
                    .map(|window| Job::RegionRemoval {
                        window,
                        region: region.clone(),
                        exclude_self,
                    })
                    .collect())
            }
            AnalysisKind::RegionTail => {
                self.reject(
                    i,
                    &[
                        ("study.include_uncited", s.include_uncited.is_some()),
                        ("study.core_only", s.core_only.is_some()),
                        ("study.field", s.field.is_some()),
                        ("normalize.enabled", norm_set),
                        ("regions.remove", self.regions.remove.is_some()),
                        ("top.pcts", top_set),
                    ],
                )?;
                let defaults = TailOptions::default();
                let options = TailOptions {
                    exclude_self: s.exclude_self.unwrap_or(defaults.exclude_self),
                    counting: self.tail.counting.unwrap_or(defaults.counting),
                    top_pct: self.tail.top_pct.unwrap_or(defaults.top_pct),
                    mics_per_year: self.normalize.mics_per_year,
                    rho_scope: self.normalize.rho_scope,
                };
                if !(options.top_pct > 0.0 && options.top_pct <= 1.0) {
                    return Err(invalid(i, "tail.top_pct must lie in (0, 1]"));
                }
                Ok(self
                    .forward_windows(i)?
                    .into_iter()
                    .map(|window| Job::RegionTail { window, options })
                    .collect())
            }
            AnalysisKind::TopShare => {
                self.reject(
                    i,
                    &[
                        ("study.include_uncited", s.include_uncited.is_some()),
                        ("study.core_only", s.core_only.is_some()),
                        ("study.field", s.field.is_some()),
                        ("normalize.enabled", norm_set),
                        ("regions.remove", self.regions.remove.is_some()),
                        ("tail.*", tail_set),
                    ],
                )?;
                let pcts = self.top.pcts.clone().unwrap_or_else(|| vec![0.01, 0.05, 0.1]);
                if pcts.is_empty() || pcts.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
                    return Err(invalid(i, "top.pcts must be non-empty and lie in (0, 1]"));
                }
                Ok(self
                    .forward_windows(i)?
                    .into_iter()
                    .map(|window| Job::TopShare {
                        window,
                        pcts: pcts.clone(),
                        exclude_self,
                    })
                    .collect())
            }
        }
    }
}

/// A parsed and checked configuration.
#[derive(Debug, Clone)]
pub struct Plan {
    pub source: Source,
    pub seed: Option<u64>,
    pub span: Option<YearSpan>,
    pub regions: Option<Vec<String>>,
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
    pub jobs: Vec<Job>,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Checks every invariant that does not need the corpus. Relative paths
    /// are resolved against `base` (the config file's directory).
    pub fn plan(&self, base: &Path) -> Result<Plan, CliError> {
        let source = match (&self.input, &self.generator) {
            (Some(i), None) => Source::Files {
                articles: resolve(base, &i.articles),
                edges: resolve(base, &i.edges),
            },
            (None, Some(g)) => match (&g.scenario, &g.params) {
                (Some(s), None) => {
                    citeconc_core::synthgen::scenario(s).map_err(|e| CliError::Config(e.to_string()))?;
                    Source::Scenario(s.clone())
                }
                (None, Some(p)) => Source::Params(resolve(base, p)),
                _ => {
                    return Err(CliError::Config(
                        "set exactly one of generator.scenario and generator.params".into(),
                    ))
                }
            },
            _ => {
                return Err(CliError::Config(
                    "set exactly one of [input] and [generator]".into(),
                ))
            }
        };
        if let Some(span) = self.span {
            if span.is_empty() {
                return Err(CliError::Config(format!("empty span {span}")));
            }
        }
        if self.output.formats.is_empty() {
            return Err(CliError::Config("output.formats is empty".into()));
        }
        let formats: Vec<Format> = self.output.formats.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if self.analysis.is_empty() {
            return Err(CliError::Config("no [[analysis]] tables".into()));
        }
        let mut jobs = Vec::new();
        for (i, a) in self.analysis.iter().enumerate() {
            jobs.extend(a.jobs(i)?);
        }
        Ok(Plan {
            source,
            seed: self.seed,
            span: self.span,
            regions: self.regions.clone(),
            out_dir: resolve(base, &self.output.dir),
            formats,
            jobs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "seed = 3\n[generator]\nscenario = \"stationary\"\n[output]\ndir = \"out\"\n";

    fn plan(extra: &str) -> Result<Plan, CliError> {
        RunConfig::parse(&format!("{BASE}{extra}"))?.plan(Path::new("/cfg"))
    }

    #[test]
    fn dotted_keys_expand_windows() {
        let p = plan(
            "[[analysis]]\nkind = \"gini\"\nwindow.length = [2, 5]\nstudy.approach = \"reference_based\"\n\
             study.include_uncited = false\nnormalize.enabled = false\n",
        )
        .unwrap();
        assert_eq!(p.jobs.len(), 2);
        let Job::Gini(c) = &p.jobs[1] else { panic!() };
        assert_eq!(c.study_id(), "gini_reference_w5_cited-only-self-all-raw");
        assert_eq!(p.out_dir, Path::new("/cfg/out"));
        assert_eq!(p.formats, vec![Format::Csv, Format::Json]);
    }

    #[test]
    fn battery_is_four_per_window() {
        let p = plan("[[analysis]]\nkind = \"battery\"\nwindow.length = [2, 5, 10]\n").unwrap();
        assert_eq!(p.jobs.len(), 12);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = plan("[[analysis]]\nkind = \"gini\"\nwindow.length = 2\nstudy.aproach = \"x\"\n").unwrap_err();
        assert!(e.to_string().contains("aproach"), "{e}");
        assert!(RunConfig::parse("colour = 1\n[output]\ndir = \"o\"\n").is_err());
    }

    #[test]
    fn source_must_be_unique() {
        let text = "[input]\narticles = \"a\"\nedges = \"e\"\n[generator]\nscenario = \"stationary\"\n\
                    [output]\ndir = \"o\"\n[[analysis]]\nkind = \"uncited\"\nwindow.length = 2\n";
        let e = RunConfig::parse(text).unwrap().plan(Path::new(".")).unwrap_err();
        assert!(matches!(e, CliError::Config(_)));
    }

    #[test]
    fn contradictions_are_config_errors() {
        for bad in [
            "[[analysis]]\nkind = \"gini\"\nwindow.length = 2\nwindow.direction = \"backward\"\nstudy.approach = \"citation_based\"\n",
            "[[analysis]]\nkind = \"uncited\"\nwindow.length = 2\nwindow.direction = \"backward\"\n",
            "[[analysis]]\nkind = \"region_removal\"\nwindow.length = 2\n",
            "[[analysis]]\nkind = \"gini\"\nwindow.length = 0\nstudy.approach = \"citation_based\"\n",
            "[[analysis]]\nkind = \"top_share\"\nwindow.length = 2\ntop.pcts = [1.5]\n",
            "[[analysis]]\nkind = \"uncited\"\nwindow.length = 2\ntop.pcts = [0.1]\n",
            "[[analysis]]\nkind = \"gini\"\nwindow.length = 2\n",
        ] {
            assert!(matches!(plan(bad), Err(CliError::Config(_))), "{bad}");
        }
    }

    #[test]
    fn unknown_scenario_fails_early() {
        let text = "[generator]\nscenario = \"nope\"\n[output]\ndir = \"o\"\n\
                    [[analysis]]\nkind = \"uncited\"\nwindow.length = 2\n";
        let e = RunConfig::parse(text).unwrap().plan(Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("declining-uncitedness"));
    }
}
