//! Reader and writer for the benchmark text format: a hyperedges file with one
//! comma-separated hyperedge per line, a node-labels file with one label id
//! per line (line i labels node i), and an optional label-names file.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use log::{info, warn};
use serde::{Deserialize, Serialize};

use super::{AttributeId, Hypergraph, NodeId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestOptions {
    /// Node and label ids start at 1 in the files.
    pub one_indexed: bool,
    /// Remove repeated node ids within a line instead of rejecting it.
    pub dedupe_edges: bool,
    /// Skip hyperedges that touch a node with a blank label line.
    pub drop_unlabeled: bool,
    pub min_size: Option<usize>,
    pub max_size: Option<usize>,
    /// Keep only the first of several identical hyperedges.
    pub collapse_duplicates: bool,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            one_indexed: true,
            dedupe_edges: true,
            drop_unlabeled: true,
            min_size: None,
            max_size: None,
            collapse_duplicates: false,
        }
    }
}

impl IngestOptions {
    pub fn validate(&self) -> Result<()> {
        if let (Some(lo), Some(hi)) = (self.min_size, self.max_size) {
            if lo > hi {
                return Err(Error::Argument(format!("min_size {lo} exceeds max_size {hi}")));
            }
        }
        Ok(())
    }

    fn admits_size(&self, size: usize) -> bool {
        self.min_size.is_none_or(|lo| size >= lo) && self.max_size.is_none_or(|hi| size <= hi)
    }
}

/// Counters describing what ingestion changed or dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub edge_lines: usize,
    /// Lines that contained a repeated node id and were deduplicated.
    pub dedup_events: usize,
    pub excluded_by_size: usize,
    pub excluded_unlabeled: usize,
    pub collapsed_duplicates: usize,
    pub unlabeled_nodes: usize,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub hypergraph: Hypergraph,
    pub stats: IngestStats,
}

fn clean(line: &str) -> &str {
    line.trim_end_matches('\r').trim()
}

fn parse_id(token: &str, file: &'static str, line: usize, one_indexed: bool) -> Result<usize> {
    let value: u64 = token.trim().parse().map_err(|_| Error::Parse {
        file,
        line,
        message: format!("expected a non-negative integer, found {token:?}"),
    })?;
    if one_indexed {
        if value == 0 {
            return Err(Error::Range { file, line, message: "id 0 is invalid for one-indexed input".into() });
        }
        Ok(value as usize - 1)
    } else {
        Ok(value as usize)
    }
}

fn read_labels<R: BufRead>(reader: R, opts: &IngestOptions) -> Result<Vec<Option<AttributeId>>> {
    let mut labels = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = clean(&line);
        if text.is_empty() {
            labels.push(None);
            continue;
        }
        let id = parse_id(text, "labels", i + 1, opts.one_indexed)?;
        let id = AttributeId::try_from(id).map_err(|_| Error::Range {
            file: "labels",
            line: i + 1,
            message: format!("label id {id} is too large"),
        })?;
        labels.push(Some(id));
    }
    Ok(labels)
}

fn read_names<R: BufRead>(reader: R) -> Result<Vec<String>> {
    reader.lines().map(|line| Ok(line?.trim_end_matches('\r').to_string())).collect()
}

/// Parses a hypergraph from the three text streams.
///
/// Hyperedges that fail the size filters or, with `drop_unlabeled`, touch an
/// unlabeled node are skipped and counted in [`IngestStats`].
pub fn parse_hypergraph<E, L, N>(
    hyperedges: E,
    labels: L,
    label_names: Option<N>,
    opts: &IngestOptions,
) -> Result<Ingested>
where
    E: BufRead,
    L: BufRead,
    N: BufRead,
{
    opts.validate()?;
    let labels = read_labels(labels, opts)?;
    let names = label_names.map(read_names).transpose()?;
    if let Some(names) = &names {
        for (v, label) in labels.iter().enumerate() {
            if let Some(a) = label {
                if *a as usize >= names.len() {
                    return Err(Error::Range {
                        file: "labels",
                        line: v + 1,
                        message: format!(
                            "label {} has no entry in the label-names file ({} names)",
                            *a as usize + usize::from(opts.one_indexed),
                            names.len()
                        ),
                    });
                }
            }
        }
    }

    let node_count = labels.len();
    let mut stats =
        IngestStats { unlabeled_nodes: labels.iter().filter(|l| l.is_none()).count(), ..IngestStats::default() };
    let mut edges: Vec<Vec<NodeId>> = Vec::new();
    for (i, line) in hyperedges.lines().enumerate() {
        let line = line?;
        let number = i + 1;
        stats.edge_lines += 1;
        let text = clean(&line);
        if text.is_empty() {
            return Err(Error::Parse { file: "hyperedges", line: number, message: "empty hyperedge".into() });
        }
        let mut edge = text
            .split(',')
            .map(|tok| {
                let v = parse_id(tok, "hyperedges", number, opts.one_indexed)?;
                if v >= node_count {
                    return Err(Error::Range {
                        file: "hyperedges",
                        line: number,
                        message: format!("node id {} is outside the labels file ({node_count} nodes)", tok.trim()),
                    });
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        let raw_len = edge.len();
        edge.sort_unstable();
        edge.dedup();
        if edge.len() != raw_len {
            if !opts.dedupe_edges {
                return Err(Error::Validation(format!("hyperedges line {number}: repeated node id")));
            }
            stats.dedup_events += 1;
        }
        if !opts.admits_size(edge.len()) {
            stats.excluded_by_size += 1;
            continue;
        }
        if edge.iter().any(|&v| labels[v].is_none()) {
            if opts.drop_unlabeled {
                stats.excluded_unlabeled += 1;
                continue;
            }
            return Err(Error::Validation(format!("hyperedges line {number}: contains a node without a label")));
        }
        edges.push(edge);
    }

    let mut hypergraph = Hypergraph::new(labels, names, edges)?;
    if opts.collapse_duplicates {
        stats.collapsed_duplicates = hypergraph.collapse_duplicate_edges();
    }
    if stats.excluded_unlabeled > 0 {
        warn!("dropped {} hyperedges touching unlabeled nodes", stats.excluded_unlabeled);
    }
    if stats.dedup_events > 0 {
        info!("deduplicated node ids on {} hyperedge lines", stats.dedup_events);
    }
    Ok(Ingested { hypergraph, stats })
}

/// Reads the dataset from disk. See [`parse_hypergraph`].
pub fn load_files(
    hyperedges: &Path,
    labels: &Path,
    label_names: Option<&Path>,
    opts: &IngestOptions,
) -> Result<Ingested> {
    let edges = BufReader::new(File::open(hyperedges)?);
    let labels = BufReader::new(File::open(labels)?);
    let names = label_names.map(|p| File::open(p).map(BufReader::new)).transpose()?;
    parse_hypergraph(edges, labels, names, opts)
}

/// Writes `h` in the one-indexed text format. Unlabeled nodes become blank
/// label lines. Names are written only when both a writer and names exist.
pub fn write_hypergraph<E: Write, L: Write, N: Write>(
    h: &Hypergraph,
    mut hyperedges: E,
    mut labels: L,
    label_names: Option<N>,
) -> Result<()> {
    for edge in h.edges() {
        let mut first = true;
        for &v in edge {
            if !first {
                hyperedges.write_all(b",")?;
            }
            write!(hyperedges, "{}", v + 1)?;
            first = false;
        }
        hyperedges.write_all(b"\n")?;
    }
    for label in h.labels() {
        match label {
            Some(a) => writeln!(labels, "{}", a + 1)?,
            None => writeln!(labels)?,
        }
    }
    if let (Some(mut out), Some(names)) = (label_names, h.attribute_names()) {
        for name in names {
            writeln!(out, "{name}")?;
        }
        out.flush()?;
    }
    hyperedges.flush()?;
    labels.flush()?;
    Ok(())
}
