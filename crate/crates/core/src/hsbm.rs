//! Modified hypergraph stochastic block model.
//!
//! Nodes are split into `num_attributes` equal blocks and the block is the
//! node's attribute. Every hyperedge is drawn independently: with probability
//! `p` (when `p > 0`) it is pure, taken from one block; with probability `|p|`
//! (when `p < 0`) it is balanced across blocks; otherwise it is `k` nodes
//! drawn uniformly from the whole node set.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homophily::{analyze, AnalysisOptions};
use crate::hypergraph::{AttributeId, Hypergraph};
use crate::null_model::SamplerConfig;
use crate::seeding::{derive_seed, stream, TAG_GENERATOR, TAG_SWEEP};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsbmConfig {
    pub num_nodes: usize,
    pub num_attributes: usize,
    pub k: usize,
    pub num_edges: usize,
    pub p: f64,
    pub seed: u64,
}

impl Default for HsbmConfig {
    fn default() -> Self {
        Self { num_nodes: 1000, num_attributes: 10, k: 10, num_edges: 5000, p: 0.0, seed: 42 }
    }
}

impl HsbmConfig {
    pub fn block_size(&self) -> usize {
        self.num_nodes / self.num_attributes.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let arg = |msg: String| Err(Error::Argument(msg));
        if self.num_attributes == 0 {
            return arg("at least one attribute is required".into());
        }
        if self.num_nodes == 0 || !self.num_nodes.is_multiple_of(self.num_attributes) {
            return arg(format!(
                "node count {} must be a positive multiple of the attribute count {}",
                self.num_nodes, self.num_attributes
            ));
        }
        if self.k == 0 || self.k > self.num_nodes {
            return arg(format!("edge size {} must lie in 1..={}", self.k, self.num_nodes));
        }
        if self.num_edges == 0 {
            return arg("at least one edge is required".into());
        }
        if !(-1.0..=1.0).contains(&self.p) {
            return arg(format!("p must lie in [-1, 1], got {}", self.p));
        }
        if self.p > 0.0 && self.k > self.block_size() {
            return arg(format!("pure edges of size {} do not fit in blocks of {} nodes", self.k, self.block_size()));
        }
        if self.p < 0.0 {
            if self.k < self.num_attributes {
                return arg(format!(
                    "balanced edges need k >= number of attributes ({} < {})",
                    self.k, self.num_attributes
                ));
            }
            if self.k.div_ceil(self.num_attributes) > self.block_size() {
                return arg(format!(
                    "balanced edges of size {} do not fit in blocks of {} nodes",
                    self.k,
                    self.block_size()
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Pure,
    Balanced,
    Random,
}

/// Generates a hypergraph and reports how each edge was drawn.
pub fn generate_hsbm_with_kinds(cfg: &HsbmConfig) -> Result<(Hypergraph, Vec<EdgeKind>)> {
    cfg.validate()?;
    let block = cfg.block_size();
    let m = cfg.num_attributes;
    let mut rng = stream(cfg.seed, &[TAG_GENERATOR]);
    let mut edges = Vec::with_capacity(cfg.num_edges);
    let mut kinds = Vec::with_capacity(cfg.num_edges);
    for _ in 0..cfg.num_edges {
        let u: f64 = rng.random();
        let kind = if cfg.p > 0.0 && u < cfg.p {
            EdgeKind::Pure
        } else if cfg.p < 0.0 && u < -cfg.p {
            EdgeKind::Balanced
        } else {
            EdgeKind::Random
        };
        let mut edge: Vec<usize> = match kind {
            EdgeKind::Pure => {
                let b = rng.random_range(0..m);
                sample(&mut rng, block, cfg.k).into_iter().map(|i| b * block + i).collect()
            }
            EdgeKind::Balanced => {
                let base = cfg.k / m;
                let mut quota = vec![base; m];
                for b in sample(&mut rng, m, cfg.k % m) {
                    quota[b] += 1;
                }
                let mut nodes = Vec::with_capacity(cfg.k);
                for (b, &q) in quota.iter().enumerate() {
                    nodes.extend(sample(&mut rng, block, q).into_iter().map(|i| b * block + i));
                }
                nodes
            }
            EdgeKind::Random => sample(&mut rng, cfg.num_nodes, cfg.k).into_vec(),
        };
        edge.sort_unstable();
        edges.push(edge);
        kinds.push(kind);
    }
    let attributes: Vec<AttributeId> = (0..cfg.num_nodes).map(|v| (v / block) as AttributeId).collect();
    let names = (1..=m).map(|b| format!("block-{b}")).collect();
    Ok((Hypergraph::from_attributes(attributes, Some(names), edges)?, kinds))
}

pub fn generate_hsbm(cfg: &HsbmConfig) -> Result<Hypergraph> {
    generate_hsbm_with_kinds(cfg).map(|(h, _)| h)
}

/// One analyzed synthetic hypergraph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub k: usize,
    pub p: f64,
    pub phi: f64,
    pub phi_std_error: f64,
    pub baseline_mean: f64,
    pub baseline_std_error: f64,
    pub edges_scored: usize,
    pub generator_seed: u64,
}

fn run_point(base: &HsbmConfig, k: usize, p: f64, sampler: &SamplerConfig) -> Result<SweepPoint> {
    let seed = derive_seed(base.seed, &[TAG_SWEEP, k as u64, p.to_bits()]);
    let cfg = HsbmConfig { k, p, seed, ..base.clone() };
    let h = generate_hsbm(&cfg)?;
    let report = analyze(&h, &AnalysisOptions::with_sampler(sampler.clone()))?;
    let row = report.row(k).expect("uniform hypergraph has a row for k");
    Ok(SweepPoint {
        k,
        p,
        phi: report.global_phi,
        phi_std_error: report.global_phi_std_error,
        baseline_mean: row.baseline_mean.unwrap_or(f64::NAN),
        baseline_std_error: row.baseline_std_error.unwrap_or(f64::NAN),
        edges_scored: report.edges_scored,
        generator_seed: seed,
    })
}

fn check_grid(p_grid: &[f64]) -> Result<()> {
    match p_grid.iter().find(|p| !(-1.0..=1.0).contains(*p)) {
        Some(p) => Err(Error::Argument(format!("p must lie in [-1, 1], got {p}"))),
        None => Ok(()),
    }
}

/// Index of a fresh `base.k`-uniform hypergraph for every `p`.
pub fn sweep_phi_vs_p(base: &HsbmConfig, p_grid: &[f64], sampler: &SamplerConfig) -> Result<Vec<SweepPoint>> {
    check_grid(p_grid)?;
    p_grid.par_iter().map(|&p| run_point(base, base.k, p, sampler)).collect()
}

/// Full `k x p` grid, rows ordered by `k` then `p`.
pub fn sweep_phi_vs_k(
    base: &HsbmConfig,
    k_grid: &[usize],
    p_grid: &[f64],
    sampler: &SamplerConfig,
) -> Result<Vec<SweepPoint>> {
    check_grid(p_grid)?;
    let cells: Vec<(usize, f64)> = k_grid.iter().flat_map(|&k| p_grid.iter().map(move |&p| (k, p))).collect();
    cells.par_iter().map(|&(k, p)| run_point(base, k, p, sampler)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `y` on `x`. Needs two distinct `x` values.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<LinearFit> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit { slope, intercept: my - slope * mx, r_squared })
}
