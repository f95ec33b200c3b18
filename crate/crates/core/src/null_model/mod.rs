//! Baseline diversity `B_k` of a size-`k` hyperedge under random mixing.
//!
//! The null model draws `k` nodes sequentially without replacement, each
//! draw proportional to node weight (the k-degree by default) among the
//! nodes not yet drawn. [`estimate_baseline`] is the Monte Carlo estimator;
//! [`exact_baseline`] enumerates every ordered draw and serves as an oracle
//! on small populations.

mod exact;
mod sampler;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diversity::{check_order, hill_of_counts};
use crate::error::{Error, Result};
use crate::hypergraph::{AttributeId, Hypergraph, NodeId};
use crate::seeding::{stream, TAG_BASELINE};

pub use exact::{exact_baseline, exact_from_population, EXACT_STATE_LIMIT};
pub use sampler::{sample_weighted_k_set, WeightedSampler};

/// Samples per RNG stream. Streams are indexed by block number so results do
/// not depend on how blocks are scheduled over threads.
const BLOCK_SIZE: usize = 512;

/// Node weights used by the null model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    /// Number of size-k hyperedges containing the node.
    #[default]
    KDegree,
    /// Number of hyperedges of any size containing the node.
    TotalDegree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub samples: usize,
    pub seed: u64,
    pub diversity_order: f64,
    pub weighting: Weighting,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { samples: 10_000, seed: 42, diversity_order: 1.0, weighting: Weighting::KDegree }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Argument("samples must be at least 1".into()));
        }
        check_order(self.diversity_order)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineEstimate {
    pub k: usize,
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    pub diversity_order: f64,
}

/// Nodes with positive weight together with their attributes. Attributes are
/// remapped to a dense range so per-sample tallies fit in a small array.
#[derive(Debug, Clone)]
pub struct Population {
    nodes: Vec<NodeId>,
    weights: Vec<f64>,
    classes: Vec<u32>,
    class_count: usize,
}

impl Population {
    /// `weights[v]` and `attributes[v]` describe node `v`; nodes with zero
    /// weight are dropped.
    pub fn new(weights: &[f64], attributes: &[AttributeId]) -> Result<Self> {
        if weights.len() != attributes.len() {
            return Err(Error::Argument(format!("{} weights for {} attributes", weights.len(), attributes.len())));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::Argument(format!("weights must be finite and non-negative, got {w}")));
        }
        Ok(Self::build(
            weights.iter().zip(attributes).enumerate().filter(|(_, (&w, _))| w > 0.0).map(|(v, (&w, &a))| (v, w, a)),
        ))
    }

    /// Population for size-`k` baselines of `h`.
    pub fn from_hypergraph(h: &Hypergraph, k: usize, weighting: Weighting) -> Self {
        let degrees = match weighting {
            Weighting::KDegree => h.k_degrees(k).degrees().to_vec(),
            Weighting::TotalDegree => h.total_degrees(),
        };
        Self::build(
            degrees
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(v, &d)| (v, d as f64, h.attribute(v).expect("nodes with positive degree are labeled"))),
        )
    }

    fn build<I: Iterator<Item = (NodeId, f64, AttributeId)>>(entries: I) -> Self {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut raw = Vec::new();
        for (v, w, a) in entries {
            nodes.push(v);
            weights.push(w);
            raw.push(a);
        }
        let mut distinct = raw.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let classes = raw.iter().map(|a| distinct.binary_search(a).expect("present") as u32).collect();
        Self { nodes, weights, classes, class_count: distinct.len() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of distinct attributes among the population.
    pub fn attribute_count(&self) -> usize {
        self.class_count
    }

    pub(crate) fn classes(&self) -> &[u32] {
        &self.classes
    }
}

/// Per-sample attribute tally that resets in O(k).
struct Tally {
    counts: Vec<u32>,
    touched: Vec<u32>,
}

impl Tally {
    fn new(classes: usize) -> Self {
        Self { counts: vec![0; classes], touched: Vec::new() }
    }

    fn diversity(&mut self, members: impl Iterator<Item = u32>, order: f64) -> f64 {
        for c in members {
            if self.counts[c as usize] == 0 {
                self.touched.push(c);
            }
            self.counts[c as usize] += 1;
        }
        let counts = &self.counts;
        let value = hill_of_counts(self.touched.iter().map(|&c| counts[c as usize]), order);
        for &c in &self.touched {
            self.counts[c as usize] = 0;
        }
        self.touched.clear();
        value
    }
}

/// Monte Carlo estimate of `B_k` for hypergraph `h`.
pub fn estimate_baseline(h: &Hypergraph, k: usize, cfg: &SamplerConfig) -> Result<BaselineEstimate> {
    if k < 2 {
        return Err(Error::Argument(format!("baselines need k >= 2, got {k}")));
    }
    let population = Population::from_hypergraph(h, k, cfg.weighting);
    estimate_from_population(&population, k, cfg)
}

/// Monte Carlo estimate of the expected diversity of a weighted k-set drawn
/// from `population`.
///
/// The estimate is a pure function of `(population, k, cfg)`; thread count
/// does not affect it.
pub fn estimate_from_population(population: &Population, k: usize, cfg: &SamplerConfig) -> Result<BaselineEstimate> {
    cfg.validate()?;
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    if population.len() < k {
        return Err(Error::InsufficientPopulation { k, available: population.len() });
    }
    let sampler = WeightedSampler::new(population.weights())?;
    let classes = population.classes();
    let blocks = cfg.samples.div_ceil(BLOCK_SIZE);
    let per_block: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map_init(
            || (sampler.clone(), Tally::new(population.attribute_count()), Vec::with_capacity(k)),
            |(sampler, tally, drawn), block| {
                let mut rng = stream(cfg.seed, &[TAG_BASELINE, k as u64, block as u64]);
                let start = block * BLOCK_SIZE;
                let end = (start + BLOCK_SIZE).min(cfg.samples);
                (start..end)
                    .map(|_| {
                        sampler.draw_into(k, &mut rng, drawn).expect("population size checked");
                        tally.diversity(drawn.iter().map(|&i| classes[i]), cfg.diversity_order)
                    })
                    .collect()
            },
        )
        .collect();
    let values: Vec<f64> = per_block.into_iter().flatten().collect();
    let (mean, std_error) = mean_and_std_error(&values);
    Ok(BaselineEstimate {
        k,
        mean,
        std_error,
        samples: cfg.samples,
        seed: cfg.seed,
        diversity_order: cfg.diversity_order,
    })
}

/// Compensated (Neumaier) summation.
pub(crate) fn stable_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Mean and standard error of the mean (sample standard deviation over
/// `sqrt(n)`); the error is 0 for a single value.
pub(crate) fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = stable_sum(values.iter().copied()) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss = stable_sum(values.iter().map(|&x| (x - mean) * (x - mean)));
    let sd = (ss / (n - 1) as f64).sqrt();
    (mean, sd / (n as f64).sqrt())
}
