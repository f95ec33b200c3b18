//! Hill-number diversity of the attribute mix inside a hyperedge.
//!
//! Order 1 is the interaction perplexity, `2^H` with `H` the Shannon entropy
//! in bits. Order 0 counts distinct attributes and order 2 is the inverse
//! Simpson index. Absent attributes contribute nothing (`0 log 0 = 0`).

use crate::error::{Error, Result};
use crate::hypergraph::{AttributeId, Hypergraph};

/// Orders closer than this to 1 use the Shannon limit.
pub const ORDER_ONE_THRESHOLD: f64 = 1e-9;

/// Attribute tally of one hyperedge, sorted by attribute id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperedgeComposition {
    counts: Vec<(AttributeId, u32)>,
    size: u32,
}

impl HyperedgeComposition {
    pub fn from_attributes<I: IntoIterator<Item = AttributeId>>(attributes: I) -> Result<Self> {
        let mut ids: Vec<AttributeId> = attributes.into_iter().collect();
        if ids.is_empty() {
            return Err(Error::Domain("a composition needs at least one node".into()));
        }
        ids.sort_unstable();
        let mut counts: Vec<(AttributeId, u32)> = Vec::new();
        for id in ids {
            match counts.last_mut() {
                Some((last, c)) if *last == id => *c += 1,
                _ => counts.push((id, 1)),
            }
        }
        let size = counts.iter().map(|&(_, c)| c).sum();
        Ok(Self { counts, size })
    }

    /// Builds a composition from a dense count vector indexed by attribute
    /// id. Zero entries mean the attribute is absent.
    pub fn from_counts(counts: &[u32]) -> Result<Self> {
        let counts: Vec<(AttributeId, u32)> =
            counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i as AttributeId, c)).collect();
        if counts.is_empty() {
            return Err(Error::Domain("a composition needs at least one node".into()));
        }
        let size = counts.iter().map(|&(_, c)| c).sum();
        Ok(Self { counts, size })
    }

    pub fn counts(&self) -> &[(AttributeId, u32)] {
        &self.counts
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// m_e, the number of distinct attributes present.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn proportions(&self) -> Vec<(AttributeId, f64)> {
        let n = f64::from(self.size);
        self.counts.iter().map(|&(a, c)| (a, f64::from(c) / n)).collect()
    }

    pub fn is_pure(&self) -> bool {
        self.counts.len() == 1
    }

    pub fn is_balanced(&self) -> bool {
        self.counts.windows(2).all(|w| w[0].1 == w[1].1)
    }

    pub fn perplexity(&self) -> f64 {
        perplexity_of_counts(self.counts.iter().map(|&(_, c)| c))
    }

    pub fn hill_number(&self, q: f64) -> Result<f64> {
        check_order(q)?;
        Ok(hill_of_counts(self.counts.iter().map(|&(_, c)| c), q))
    }
}

/// Composition of hyperedge `edge_index` of `h`.
pub fn composition(h: &Hypergraph, edge_index: usize) -> Result<HyperedgeComposition> {
    let edge = h
        .edge(edge_index)
        .ok_or_else(|| Error::Argument(format!("edge index {edge_index} out of range ({} edges)", h.edge_count())))?;
    HyperedgeComposition::from_attributes(edge.iter().map(|&v| h.attribute(v).expect("hyperedge members are labeled")))
}

pub fn perplexity(c: &HyperedgeComposition) -> f64 {
    c.perplexity()
}

pub fn hill_number(c: &HyperedgeComposition, q: f64) -> Result<f64> {
    c.hill_number(q)
}

pub fn check_order(q: f64) -> Result<()> {
    if q.is_nan() || q < 0.0 || q.is_infinite() {
        return Err(Error::Argument(format!("diversity order must be finite and non-negative, got {q}")));
    }
    Ok(())
}

/// `2^H` over the positive entries of `counts`.
pub fn perplexity_of_counts<I>(counts: I) -> f64
where
    I: IntoIterator<Item = u32>,
    I::IntoIter: Clone,
{
    hill_of_counts(counts, 1.0)
}

/// Hill number of order `q` over the positive entries of `counts`.
///
/// Pure and balanced tallies return exactly 1 and m_e; everything else is
/// clamped into `[1, m_e]` to absorb rounding. `q` must already be valid.
pub fn hill_of_counts<I>(counts: I, q: f64) -> f64
where
    I: IntoIterator<Item = u32>,
    I::IntoIter: Clone,
{
    let counts = counts.into_iter().filter(|&c| c > 0);
    let mut distinct = 0usize;
    let mut size = 0u64;
    let mut first = None;
    let mut balanced = true;
    for c in counts.clone() {
        distinct += 1;
        size += u64::from(c);
        match first {
            None => first = Some(c),
            Some(f) if f != c => balanced = false,
            _ => {}
        }
    }
    if distinct <= 1 {
        return 1.0;
    }
    let richness = distinct as f64;
    if balanced || q == 0.0 {
        return richness;
    }
    let n = size as f64;
    let value = if (q - 1.0).abs() < ORDER_ONE_THRESHOLD {
        let entropy: f64 = counts
            .map(|c| {
                let p = f64::from(c) / n;
                -p * p.log2()
            })
            .sum();
        entropy.exp2()
    } else {
        let power_sum: f64 = counts.map(|c| (f64::from(c) / n).powf(q)).sum();
        power_sum.powf(1.0 / (1.0 - q))
    };
    value.clamp(1.0, richness)
}

/// Perplexity of a two-attribute hyperedge with share `p` of the first
/// attribute, for `p` in `[0, 1]`.
pub fn two_attribute_perplexity(p: f64) -> f64 {
    let entropy: f64 = [p, 1.0 - p].into_iter().filter(|&x| x > 0.0).map(|x| -x * x.log2()).sum();
    entropy.exp2().clamp(1.0, 2.0)
}
