use serde::{Deserialize, Serialize};

use super::StudyError;
use crate::normalize::RhoScope;
use crate::windows::{Direction, WindowSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    /// Forward-looking: a publication-year cohort and the citations it receives.
    CitationBased,
    /// Backward-looking: the references made in one year to recent articles.
    ReferenceBased,
}

impl Approach {
    pub fn slug(&self) -> &'static str {
        match self {
            Approach::CitationBased => "citation",
            Approach::ReferenceBased => "reference",
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            Approach::CitationBased => Direction::Forward,
            Approach::ReferenceBased => Direction::Backward,
        }
    }
}

/// One Gini-series configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub approach: Approach,
    pub window: WindowSpec,
    pub include_uncited: bool,
    pub exclude_self_citations: bool,
    pub core_only: bool,
    pub normalized: bool,
    pub field_filter: Option<String>,
    pub region_removed: Option<String>,
    /// `mics` per (field, publication year) instead of pooled over the cohort.
    pub mics_per_year: bool,
    pub rho_scope: RhoScope,
    /// Keep the first `W` span years out of every backward population.
    pub drop_earliest_population: bool,
}

impl StudyConfig {
    pub fn new(approach: Approach, window_length: u32) -> Self {
        let window = match approach {
            Approach::CitationBased => WindowSpec::forward(window_length),
            Approach::ReferenceBased => WindowSpec::backward(window_length),
        };
        Self {
            approach,
            window,
            include_uncited: true,
            exclude_self_citations: false,
            core_only: false,
            normalized: true,
            field_filter: None,
            region_removed: None,
            mics_per_year: false,
            rho_scope: RhoScope::Study,
            drop_earliest_population: false,
        }
    }

    pub fn citation_based(window_length: u32) -> Self {
        Self::new(Approach::CitationBased, window_length)
    }

    pub fn reference_based(window_length: u32) -> Self {
        Self::new(Approach::ReferenceBased, window_length)
    }

    pub fn include_uncited(mut self, yes: bool) -> Self {
        self.include_uncited = yes;
        self
    }

    pub fn exclude_self(mut self, yes: bool) -> Self {
        self.exclude_self_citations = yes;
        self
    }

    pub fn core_only(mut self, yes: bool) -> Self {
        self.core_only = yes;
        self
    }

    pub fn normalized(mut self, yes: bool) -> Self {
        self.normalized = yes;
        self
    }

    pub fn field(mut self, field: impl Into<String>) -> Self {
        self.field_filter = Some(field.into());
        self
    }

    pub fn without_region(mut self, region: impl Into<String>) -> Self {
        self.region_removed = Some(region.into());
        self
    }

    pub fn validate(&self) -> Result<(), StudyError> {
        self.window
            .validate()
            .map_err(|e| StudyError::InvalidConfig(e.to_string()))?;
        if self.window.direction != self.approach.direction() {
            return Err(StudyError::InvalidConfig(format!(
                "{} approach needs a {} window",
                self.approach.slug(),
                self.approach.direction()
            )));
        }
        Ok(())
    }

    /// Dash-joined flag tokens used in study ids and file names.
    pub fn flags(&self) -> String {
        let mut f = vec![
            if self.include_uncited { "uncited" } else { "cited-only" },
            if self.exclude_self_citations { "noself" } else { "self" },
            if self.core_only { "core" } else { "all" },
            if self.normalized { "norm" } else { "raw" },
        ]
        .into_iter()
        .map(str::to_string)
        .collect::<Vec<_>>();
        if self.mics_per_year {
            f.push("micsyear".into());
        }
        if self.rho_scope == RhoScope::AllEdges {
            f.push("rhoall".into());
        }
        if self.drop_earliest_population {
            f.push("dropearly".into());
        }
        if let Some(field) = &self.field_filter {
            f.push(format!("field={field}"));
        }
        if let Some(region) = &self.region_removed {
            f.push(format!("without={region}"));
        }
        f.join("-")
    }

    /// `gini_<approach>_w<W>_<flags>`.
    pub fn study_id(&self) -> String {
        format!("gini_{}_w{}_{}", self.approach.slug(), self.window.length, self.flags())
    }
}
