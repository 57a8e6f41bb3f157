//! Aggregation rules. Each maps a full point set (labels ignored) and a
//! fault budget `t` to one output vector.

mod candidates;
mod coordmedian;
mod geomedian;
mod mda;
mod medoid;
mod minmax;

pub use candidates::{candidate_balls, candidate_balls_with, CandidateBalls, DEFAULT_MAX_SUBSETS};
pub use coordmedian::coordwise_median;
pub use geomedian::{geometric_median, geometric_median_with, MedianOptions};
pub use mda::{mda, mda_with};
pub use medoid::medoid;
pub use minmax::{minmax_meb, minmax_meb_with, solve_minmax, solve_minmax_with, MinMaxOptions};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointset::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Mda,
    Medoid,
    #[serde(rename = "geomedian")]
    GeometricMedian,
    #[serde(rename = "coordmedian")]
    CoordwiseMedian,
    MinmaxMeb,
    Mean,
}

impl Rule {
    pub const ALL: [Rule; 6] = [
        Rule::Mda,
        Rule::Medoid,
        Rule::GeometricMedian,
        Rule::CoordwiseMedian,
        Rule::MinmaxMeb,
        Rule::Mean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Mda => "mda",
            Rule::Medoid => "medoid",
            Rule::GeometricMedian => "geomedian",
            Rule::CoordwiseMedian => "coordmedian",
            Rule::MinmaxMeb => "minmax-meb",
            Rule::Mean => "mean",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown rule '{s}'")))
    }
}

/// Output of an aggregation rule plus rule-specific diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub rule: Rule,
    pub output: Vec<f64>,
    /// Clamped min-max value for MinMax-MEB; the certified factor is `1 + value`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub achieved_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chosen_subset: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chosen_index: Option<usize>,
}

impl AggregateResult {
    pub(crate) fn plain(rule: Rule, output: Vec<f64>) -> Self {
        Self {
            rule,
            output,
            achieved_value: None,
            chosen_subset: None,
            chosen_index: None,
        }
    }
}

/// Tunables shared by the rules.
#[derive(Debug, Clone, Copy)]
pub struct AggregateOptions {
    pub max_subsets: u128,
    /// Run MinMax-MEB even when `n <= 2t`; no guarantee attaches.
    pub allow_non_resilient: bool,
    pub median: MedianOptions,
    pub minmax: MinMaxOptions,
}

impl Default for AggregateOptions {
    fn default() -> Self {
        Self {
            max_subsets: DEFAULT_MAX_SUBSETS,
            allow_non_resilient: false,
            median: MedianOptions::default(),
            minmax: MinMaxOptions::default(),
        }
    }
}

pub fn mean(points: &PointSet) -> AggregateResult {
    AggregateResult::plain(Rule::Mean, points.mean())
}

/// Runs `rule` with default options.
pub fn aggregate(rule: Rule, points: &PointSet, t: usize) -> Result<AggregateResult> {
    aggregate_with(rule, points, t, &AggregateOptions::default())
}

pub fn aggregate_with(
    rule: Rule,
    points: &PointSet,
    t: usize,
    opts: &AggregateOptions,
) -> Result<AggregateResult> {
    if t >= points.len() {
        return Err(Error::InvalidFaultBudget { n: points.len(), t });
    }
    match rule {
        Rule::Mda => mda_with(points, t, opts.max_subsets),
        Rule::Medoid => Ok(medoid(points)),
        Rule::GeometricMedian => geometric_median_with(points, opts.median),
        Rule::CoordwiseMedian => Ok(coordwise_median(points)),
        Rule::MinmaxMeb => minmax_meb_with(points, t, opts),
        Rule::Mean => Ok(mean(points)),
    }
}

pub(crate) fn check_budget(n: usize, t: usize) -> Result<()> {
    if t >= n {
        return Err(Error::InvalidFaultBudget { n, t });
    }
    Ok(())
}
