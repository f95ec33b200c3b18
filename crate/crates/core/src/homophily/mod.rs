//! Diversity gaps, per-hyperedge homophily scores and their averages.
//!
//! For an edge `e` of size `k` with observed diversity `D(e)` and baseline
//! `B_k`, the gap is `B_k - D(e)` and the score is
//! `phi(e) = (B_k - D(e)) / (B_k - 1)`: 1 on pure edges, 0 when the edge is
//! as diverse as random mixing predicts, negative when it is more diverse.

mod assortativity;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diversity::{check_order, hill_of_counts};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::null_model::{
    estimate_from_population, mean_and_std_error, stable_sum, BaselineEstimate, Population, SamplerConfig,
};

pub use assortativity::newman_assortativity;

pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Slack allowed when checking an observed diversity against its bounds.
const DOMAIN_SLACK: f64 = 1e-9;

/// Scores of one hyperedge against its size's baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeScore {
    pub observed: f64,
    pub baseline: f64,
    pub gap: f64,
    pub gap_max: f64,
    pub gap_min: f64,
    pub phi: f64,
    pub phi_min: f64,
    /// The baseline is within `epsilon` of 1, so the ratio is undefined and
    /// `phi` is reported as 0.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomophilyRecord {
    pub edge_index: usize,
    pub k: usize,
    #[serde(flatten)]
    pub score: EdgeScore,
}

/// Scores an edge with observed diversity `observed` and `distinct`
/// attributes against `baseline`.
pub fn score_edge(observed: f64, baseline: &BaselineEstimate, distinct: usize, epsilon: f64) -> Result<EdgeScore> {
    if !observed.is_finite()
        || observed < 1.0 - DOMAIN_SLACK
        || observed > baseline.k as f64 + DOMAIN_SLACK
        || observed > distinct as f64 + DOMAIN_SLACK
    {
        return Err(Error::Domain(format!(
            "observed diversity {observed} outside [1, {}] for a size-{} edge",
            distinct.min(baseline.k),
            baseline.k
        )));
    }
    let b = baseline.mean;
    if !b.is_finite() || b < 1.0 - DOMAIN_SLACK {
        return Err(Error::Domain(format!("baseline {b} must be at least 1")));
    }
    let gap = b - observed;
    let gap_max = b - 1.0;
    let gap_min = b - distinct as f64;
    if gap_max < epsilon {
        return Ok(EdgeScore {
            observed,
            baseline: b,
            gap,
            gap_max,
            gap_min,
            phi: 0.0,
            phi_min: 0.0,
            degenerate: true,
        });
    }
    Ok(EdgeScore {
        observed,
        baseline: b,
        gap,
        gap_max,
        gap_min,
        phi: gap / gap_max,
        phi_min: gap_min / gap_max,
        degenerate: false,
    })
}

/// Lowest attainable score for a size-`k` edge when it may use any of the
/// `num_attributes` attributes, instead of only the ones it contains.
pub fn phi_floor_with_attributes(baseline: &BaselineEstimate, num_attributes: usize) -> f64 {
    let richest = baseline.k.min(num_attributes) as f64;
    (baseline.mean - richest) / (baseline.mean - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub sampler: SamplerConfig,
    pub epsilon: f64,
    /// Smallest edge size to score; sizes below 2 are never scored.
    pub min_k: usize,
    pub max_k: Option<usize>,
    pub emit_per_edge: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            sampler: SamplerConfig::default(),
            epsilon: DEFAULT_EPSILON,
            min_k: 2,
            max_k: None,
            emit_per_edge: false,
        }
    }
}

impl AnalysisOptions {
    pub fn with_sampler(sampler: SamplerConfig) -> Self {
        Self { sampler, ..Self::default() }
    }

    fn admits(&self, k: usize) -> bool {
        k >= self.min_k.max(2) && self.max_k.is_none_or(|hi| k <= hi)
    }

    pub fn validate(&self) -> Result<()> {
        self.sampler.validate()?;
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(Error::Argument(format!("epsilon must be non-negative, got {}", self.epsilon)));
        }
        if let Some(hi) = self.max_k {
            if hi < self.min_k {
                return Err(Error::Argument(format!("max_k {hi} is below min_k {}", self.min_k)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BucketStatus {
    Scored,
    InsufficientPopulation,
    DegenerateBaseline,
}

/// Aggregates for all edges of one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeRow {
    pub k: usize,
    pub edge_count: usize,
    pub status: BucketStatus,
    /// Nodes with positive weight in the size-k null model.
    pub population: usize,
    pub baseline_mean: Option<f64>,
    pub baseline_std_error: Option<f64>,
    pub phi_k: Option<f64>,
    pub mean_observed_perplexity: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusions {
    pub singleton: usize,
    pub outside_size_range: usize,
    pub insufficient_population: usize,
    pub degenerate_baseline: usize,
}

impl Exclusions {
    pub fn total(&self) -> usize {
        self.singleton + self.outside_size_range + self.insufficient_population + self.degenerate_baseline
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomophilyReport {
    pub global_phi: f64,
    /// Standard deviation of the scored `phi` values over `sqrt(edges_scored)`.
    pub global_phi_std_error: f64,
    pub edge_total: usize,
    pub edges_scored: usize,
    pub edges_excluded: usize,
    pub exclusions: Exclusions,
    pub per_k: Vec<SizeRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_edge: Option<Vec<HomophilyRecord>>,
}

impl HomophilyReport {
    pub fn row(&self, k: usize) -> Option<&SizeRow> {
        self.per_k.iter().find(|r| r.k == k)
    }
}

fn observed_diversity(h: &Hypergraph, edge: &[usize], order: f64) -> (f64, usize) {
    let mut attrs: Vec<u32> = edge.iter().map(|&v| h.attribute(v).expect("hyperedge members are labeled")).collect();
    attrs.sort_unstable();
    let mut counts: Vec<u32> = Vec::new();
    let mut prev = None;
    for a in attrs {
        if prev == Some(a) {
            *counts.last_mut().expect("non-empty") += 1;
        } else {
            counts.push(1);
            prev = Some(a);
        }
    }
    (hill_of_counts(counts.iter().copied(), order), counts.len())
}

enum Bucket {
    Ready(BaselineEstimate, usize),
    Insufficient(usize),
}

/// Scores every hyperedge of `h` and aggregates the index globally and per
/// edge size. One baseline is estimated per admitted size.
pub fn analyze(h: &Hypergraph, opts: &AnalysisOptions) -> Result<HomophilyReport> {
    opts.validate()?;
    check_order(opts.sampler.diversity_order)?;
    let order = opts.sampler.diversity_order;

    let mut by_size: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, e) in h.edges().iter().enumerate() {
        by_size.entry(e.len()).or_default().push(i);
    }

    let observed: Vec<(f64, usize)> = h.edges().par_iter().map(|e| observed_diversity(h, e, order)).collect();

    let mut exclusions = Exclusions::default();
    let admitted: Vec<usize> = by_size
        .iter()
        .filter_map(|(&k, edges)| {
            if k < 2 {
                exclusions.singleton += edges.len();
                None
            } else if !opts.admits(k) {
                exclusions.outside_size_range += edges.len();
                None
            } else {
                Some(k)
            }
        })
        .collect();

    let buckets: Vec<Bucket> = admitted
        .par_iter()
        .map(|&k| {
            let population = Population::from_hypergraph(h, k, opts.sampler.weighting);
            if population.len() < k {
                return Ok(Bucket::Insufficient(population.len()));
            }
            estimate_from_population(&population, k, &opts.sampler).map(|b| Bucket::Ready(b, population.len()))
        })
        .collect::<Result<_>>()?;

    let mut per_k = Vec::with_capacity(admitted.len());
    let mut per_edge: Vec<HomophilyRecord> = Vec::new();
    let mut scored_phi: Vec<(usize, f64)> = Vec::new();
    for (&k, bucket) in admitted.iter().zip(&buckets) {
        let edges = &by_size[&k];
        let mean_observed = stable_sum(edges.iter().map(|&i| observed[i].0)) / edges.len() as f64;
        match bucket {
            Bucket::Insufficient(population) => {
                exclusions.insufficient_population += edges.len();
                per_k.push(SizeRow {
                    k,
                    edge_count: edges.len(),
                    status: BucketStatus::InsufficientPopulation,
                    population: *population,
                    baseline_mean: None,
                    baseline_std_error: None,
                    phi_k: None,
                    mean_observed_perplexity: mean_observed,
                });
            }
            Bucket::Ready(baseline, population) => {
                let mut phis = Vec::with_capacity(edges.len());
                let mut degenerate = false;
                for &i in edges {
                    let (d, distinct) = observed[i];
                    let score = score_edge(d, baseline, distinct, opts.epsilon)?;
                    degenerate = score.degenerate;
                    if opts.emit_per_edge {
                        per_edge.push(HomophilyRecord { edge_index: i, k, score });
                    }
                    if !score.degenerate {
                        phis.push(score.phi);
                        scored_phi.push((i, score.phi));
                    }
                }
                let status = if degenerate {
                    exclusions.degenerate_baseline += edges.len();
                    BucketStatus::DegenerateBaseline
                } else {
                    BucketStatus::Scored
                };
                per_k.push(SizeRow {
                    k,
                    edge_count: edges.len(),
                    status,
                    population: *population,
                    baseline_mean: Some(baseline.mean),
                    baseline_std_error: Some(baseline.std_error),
                    phi_k: (!degenerate).then(|| stable_sum(phis.iter().copied()) / phis.len() as f64),
                    mean_observed_perplexity: mean_observed,
                });
            }
        }
    }

    if scored_phi.is_empty() {
        return Err(Error::EmptyAnalysis(format!(
            "no hyperedge could be scored ({} singleton, {} outside size range, {} with insufficient population, {} with a degenerate baseline)",
            exclusions.singleton,
            exclusions.outside_size_range,
            exclusions.insufficient_population,
            exclusions.degenerate_baseline
        )));
    }
    scored_phi.sort_unstable_by_key(|&(i, _)| i);
    let phis: Vec<f64> = scored_phi.into_iter().map(|(_, phi)| phi).collect();
    let (global_phi, global_phi_std_error) = mean_and_std_error(&phis);
    per_edge.sort_unstable_by_key(|r| r.edge_index);

    Ok(HomophilyReport {
        global_phi,
        global_phi_std_error,
        edge_total: h.edge_count(),
        edges_scored: phis.len(),
        edges_excluded: exclusions.total(),
        exclusions,
        per_k,
        per_edge: opts.emit_per_edge.then_some(per_edge),
    })
}

/// Observed diversity against baseline, per edge size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub k: usize,
    pub edge_count: usize,
    pub mean_observed_perplexity: f64,
    pub baseline_mean: Option<f64>,
    pub baseline_std_error: Option<f64>,
}

impl From<&SizeRow> for CurveRow {
    fn from(row: &SizeRow) -> Self {
        Self {
            k: row.k,
            edge_count: row.edge_count,
            mean_observed_perplexity: row.mean_observed_perplexity,
            baseline_mean: row.baseline_mean,
            baseline_std_error: row.baseline_std_error,
        }
    }
}

pub fn perplexity_curve(h: &Hypergraph, opts: &AnalysisOptions) -> Result<Vec<CurveRow>> {
    Ok(analyze(h, opts)?.per_k.iter().map(CurveRow::from).collect())
}
