//! Run manifests, JSON reports and plot-ready CSV tables.
//!
//! A report is `{schema, manifest, result, run}`. Everything except `run`
//! (wall-clock start and duration) is a pure function of the inputs and
//! options, so two runs with identical flags agree byte for byte outside it.
//! CSV numbers are printed with 17 significant digits.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homophily::{CurveRow, HomophilyRecord, HomophilyReport};
use crate::hsbm::SweepPoint;
use crate::hypergraph::IngestStats;

pub const REPORT_SCHEMA: &str = "hyperphi.report/1";
pub const SCHEMA_JSON: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub inputs: BTreeMap<String, String>,
    pub options: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ingest: Option<IngestStats>,
}

impl RunManifest {
    pub fn new<O: Serialize>(command: &str, options: &O) -> Result<Self> {
        Ok(Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: BTreeMap::new(),
            options: serde_json::to_value(options).map_err(json_error)?,
            ingest: None,
        })
    }

    pub fn input(mut self, name: &str, path: impl std::fmt::Display) -> Self {
        self.inputs.insert(name.to_string(), path.to_string());
        self
    }
}

/// Wall-clock facts, kept apart from the reproducible payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTiming {
    pub started_unix_ms: u128,
    pub wall_clock_seconds: f64,
}

impl RunTiming {
    pub fn since(started: SystemTime) -> Self {
        let elapsed = started.elapsed().unwrap_or(Duration::ZERO);
        Self {
            started_unix_ms: started.duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis()),
            wall_clock_seconds: elapsed.as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub schema: String,
    pub manifest: RunManifest,
    pub result: T,
    pub run: RunTiming,
}

impl<T: Serialize> Report<T> {
    pub fn new(manifest: RunManifest, result: T, run: RunTiming) -> Self {
        Self { schema: REPORT_SCHEMA.to_string(), manifest, result, run }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self).map_err(json_error)?;
        text.push('\n');
        Ok(text)
    }
}

/// The report without its `run` block, for reproducibility checks.
pub fn reproducible_payload(report_json: &str) -> Result<serde_json::Value> {
    let mut value: serde_json::Value = serde_json::from_str(report_json).map_err(json_error)?;
    if let Some(map) = value.as_object_mut() {
        map.remove("run");
    }
    Ok(value)
}

/// Analysis result as written to JSON; per-edge records go to CSV instead.
pub fn summary(report: &HomophilyReport) -> HomophilyReport {
    HomophilyReport { per_edge: None, ..report.clone() }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn table<W: Write>(mut out: W, comments: &[&str], header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    for line in comments {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_per_edge_csv<W: Write>(out: W, records: &[HomophilyRecord]) -> Result<()> {
    let rows = records
        .iter()
        .map(|r| {
            let s = &r.score;
            vec![
                r.edge_index.to_string(),
                r.k.to_string(),
                fmt_f64(s.observed),
                fmt_f64(s.baseline),
                fmt_f64(s.gap),
                fmt_f64(s.gap_max),
                fmt_f64(s.gap_min),
                fmt_f64(s.phi),
                fmt_f64(s.phi_min),
                s.degenerate.to_string(),
            ]
        })
        .collect();
    table(
        out,
        &[
            "edge_index: zero-based position in the hyperedges file after ingestion filters",
            "observed: diversity of the edge; baseline: null-model expectation for its size",
            "gap = baseline - observed; gap_max = baseline - 1; gap_min = baseline - distinct attributes",
            "phi = gap / gap_max; phi_min = gap_min / gap_max; degenerate edges report phi = 0",
        ],
        &["edge_index", "k", "observed", "baseline", "gap", "gap_max", "gap_min", "phi", "phi_min", "degenerate"],
        rows,
    )
}

pub fn write_curve_csv<W: Write>(out: W, rows: &[CurveRow]) -> Result<()> {
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                r.edge_count.to_string(),
                fmt_f64(r.mean_observed_perplexity),
                fmt_opt(r.baseline_mean),
                fmt_opt(r.baseline_std_error),
            ]
        })
        .collect();
    table(
        out,
        &[
            "mean observed diversity of size-k edges against the size-k null-model baseline",
            "baseline columns are empty when too few nodes had positive weight",
        ],
        &["k", "edge_count", "mean_observed_perplexity", "baseline_mean", "baseline_std_error"],
        rows,
    )
}

pub fn write_sweep_csv<W: Write>(out: W, points: &[SweepPoint]) -> Result<()> {
    let rows = points
        .iter()
        .map(|s| {
            vec![
                s.k.to_string(),
                fmt_f64(s.p),
                fmt_f64(s.phi),
                fmt_f64(s.phi_std_error),
                fmt_f64(s.baseline_mean),
                fmt_f64(s.baseline_std_error),
                s.edges_scored.to_string(),
                s.generator_seed.to_string(),
            ]
        })
        .collect();
    table(
        out,
        &[
            "one synthetic k-uniform hypergraph per row",
            "phi: homophily index; phi_std_error: standard deviation of edge scores over sqrt(edges_scored)",
            "baseline_mean, baseline_std_error: Monte Carlo null-model estimate for size k",
        ],
        &["k", "p", "phi", "phi_std_error", "baseline_mean", "baseline_std_error", "edges_scored", "generator_seed"],
        rows,
    )
}

pub fn write_two_attribute_csv<W: Write>(out: W, steps: usize) -> Result<()> {
    let rows = (0..=steps)
        .map(|i| {
            let p = i as f64 / steps as f64;
            vec![fmt_f64(p), fmt_f64(crate::diversity::two_attribute_perplexity(p))]
        })
        .collect();
    table(out, &["perplexity of a hyperedge whose first of two attributes has share p"], &["p", "perplexity"], rows)
}

fn round_grid(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_real_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    let bad = |why: &str| Error::Argument(format!("invalid grid {spec:?}: {why}"));
    if spec.is_empty() {
        return Err(bad("empty"));
    }
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if step.is_nan() || step <= 0.0 || !step.is_finite() || stop < start {
            return Err(bad("need step > 0 and stop >= start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| round_grid(start + i as f64 * step)).collect()
    } else {
        spec.split(',').map(parse).collect::<Result<Vec<_>>>()?
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("non-finite value"));
    }
    Ok(values)
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list of sizes.
pub fn parse_size_grid(spec: &str) -> Result<Vec<usize>> {
    let spec = spec.trim();
    let bad = |why: &str| Error::Argument(format!("invalid grid {spec:?}: {why}"));
    if spec.is_empty() {
        return Err(bad("empty"));
    }
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("not a non-negative integer"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if step == 0 || stop < start {
            return Err(bad("need step > 0 and stop >= start"));
        }
        Ok((start..=stop).step_by(step).collect())
    } else {
        spec.split(',').map(parse).collect()
    }
}
