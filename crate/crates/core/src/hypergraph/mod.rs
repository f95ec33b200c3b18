//! Attributed hypergraphs: nodes carry one categorical attribute each and
//! hyperedges are sets of node indices. Duplicate hyperedges are allowed, so
//! the edge list behaves as a multiset.

mod io;

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};

pub use io::{load_files, parse_hypergraph, write_hypergraph, IngestOptions, IngestStats, Ingested};

pub type NodeId = usize;
pub type AttributeId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    labels: Vec<Option<AttributeId>>,
    attribute_names: Option<Vec<String>>,
    edges: Vec<Vec<NodeId>>,
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each hyperedge.
    ///
    /// Fails when a hyperedge is empty, repeats a node, references a node
    /// outside `0..labels.len()` or an unlabeled node, or when a label is not
    /// covered by `attribute_names`.
    pub fn new(
        labels: Vec<Option<AttributeId>>,
        attribute_names: Option<Vec<String>>,
        mut edges: Vec<Vec<NodeId>>,
    ) -> Result<Self> {
        if let Some(names) = &attribute_names {
            if let Some((v, a)) =
                labels.iter().enumerate().find_map(|(v, a)| a.filter(|&a| a as usize >= names.len()).map(|a| (v, a)))
            {
                return Err(Error::Validation(format!(
                    "node {v} has attribute {a} but only {} attribute names are defined",
                    names.len()
                )));
            }
        }
        let n = labels.len();
        for (i, edge) in edges.iter_mut().enumerate() {
            if edge.is_empty() {
                return Err(Error::Validation(format!("hyperedge {i} is empty")));
            }
            edge.sort_unstable();
            if edge.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!("hyperedge {i} repeats a node")));
            }
            if let Some(&last) = edge.last() {
                if last >= n {
                    return Err(Error::Validation(format!(
                        "hyperedge {i} references node {last} but there are only {n} nodes"
                    )));
                }
            }
            if let Some(&v) = edge.iter().find(|&&v| labels[v].is_none()) {
                return Err(Error::Validation(format!("hyperedge {i} contains unlabeled node {v}")));
            }
        }
        Ok(Self { labels, attribute_names, edges })
    }

    /// Convenience constructor for fully labeled node sets.
    pub fn from_attributes(
        attributes: Vec<AttributeId>,
        attribute_names: Option<Vec<String>>,
        edges: Vec<Vec<NodeId>>,
    ) -> Result<Self> {
        Self::new(attributes.into_iter().map(Some).collect(), attribute_names, edges)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<NodeId>] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Option<&[NodeId]> {
        self.edges.get(index).map(Vec::as_slice)
    }

    pub fn attribute(&self, node: NodeId) -> Option<AttributeId> {
        self.labels.get(node).copied().flatten()
    }

    pub fn labels(&self) -> &[Option<AttributeId>] {
        &self.labels
    }

    pub fn attribute_names(&self) -> Option<&[String]> {
        self.attribute_names.as_deref()
    }

    /// |M|: the number of attribute names when given, otherwise one past the
    /// largest attribute id in use.
    pub fn num_attributes(&self) -> usize {
        match &self.attribute_names {
            Some(names) => names.len(),
            None => self.labels.iter().flatten().max().map_or(0, |&a| a as usize + 1),
        }
    }

    /// Number of size-1 hyperedges. They are kept in the structure but carry
    /// no homophily signal.
    pub fn singleton_count(&self) -> usize {
        self.edges.iter().filter(|e| e.len() == 1).count()
    }

    /// The sub-hypergraph on the same node set keeping only size-`k` edges.
    pub fn k_uniform_sub(&self, k: usize) -> Self {
        Self {
            labels: self.labels.clone(),
            attribute_names: self.attribute_names.clone(),
            edges: self.edges.iter().filter(|e| e.len() == k).cloned().collect(),
        }
    }

    pub fn k_degrees(&self, k: usize) -> KDegreeIndex {
        let mut degrees = vec![0u64; self.node_count()];
        for edge in self.edges.iter().filter(|e| e.len() == k) {
            for &v in edge {
                degrees[v] += 1;
            }
        }
        KDegreeIndex { k, degrees }
    }

    /// Number of hyperedges of any size containing each node.
    pub fn total_degrees(&self) -> Vec<u64> {
        let mut degrees = vec![0u64; self.node_count()];
        for &v in self.edges.iter().flatten() {
            degrees[v] += 1;
        }
        degrees
    }

    pub fn edge_sizes(&self) -> BTreeMap<usize, usize> {
        let mut sizes = BTreeMap::new();
        for edge in &self.edges {
            *sizes.entry(edge.len()).or_insert(0) += 1;
        }
        sizes
    }

    /// Drops repeated identical hyperedges, keeping first occurrences in
    /// order. Returns the number removed.
    pub fn collapse_duplicate_edges(&mut self) -> usize {
        let before = self.edges.len();
        let mut seen: HashSet<Vec<NodeId>> = HashSet::with_capacity(before);
        self.edges.retain(|e| seen.insert(e.clone()));
        before - self.edges.len()
    }

    /// Applies `mapping[old] = new` to every node attribute. Attribute names,
    /// if present, are permuted along with the ids.
    pub fn relabel_attributes(&self, mapping: &[AttributeId]) -> Result<Self> {
        let labels = self
            .labels
            .iter()
            .map(|a| {
                a.map(|a| {
                    mapping
                        .get(a as usize)
                        .copied()
                        .ok_or_else(|| Error::Argument(format!("attribute {a} missing from relabel mapping")))
                })
                .transpose()
            })
            .collect::<Result<Vec<_>>>()?;
        let names = match &self.attribute_names {
            Some(names) => {
                let mut permuted = names.clone();
                for (old, &new) in mapping.iter().enumerate().take(names.len()) {
                    *permuted
                        .get_mut(new as usize)
                        .ok_or_else(|| Error::Argument(format!("relabel target {new} has no name slot")))? =
                        names[old].clone();
                }
                Some(permuted)
            }
            None => None,
        };
        Self::new(labels, names, self.edges.clone())
    }
}

/// Per-node count of size-`k` hyperedges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KDegreeIndex {
    k: usize,
    degrees: Vec<u64>,
}

impl KDegreeIndex {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn total(&self) -> u64 {
        self.degrees.iter().sum()
    }

    pub fn positive_count(&self) -> usize {
        self.degrees.iter().filter(|&&d| d > 0).count()
    }
}
