use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::SystemTime;

use clap::{Parser, Subcommand, ValueEnum};
use log::{error, info};
use serde::Serialize;

use hyperphi::homophily::{analyze, AnalysisOptions, CurveRow};
use hyperphi::hsbm::{generate_hsbm, linear_fit, sweep_phi_vs_k, sweep_phi_vs_p, HsbmConfig};
use hyperphi::hypergraph::{load_files, write_hypergraph, IngestOptions};
use hyperphi::null_model::{SamplerConfig, Weighting};
use hyperphi::report::{self, Report, RunManifest, RunTiming};
use hyperphi::Error;

#[derive(Parser)]
#[command(name = "hyperphi", version, about = "Perplexity-based homophily for attributed hypergraphs")]
struct Cli {
    /// Worker threads (defaults to the number of CPUs). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a dataset and write a JSON report.
    Analyze(AnalyzeArgs),
    /// Write a synthetic hypergraph in the dataset text format.
    Generate(GenerateArgs),
    /// Analyze synthetic hypergraphs over a grid of p (and k) values.
    Sweep(SweepArgs),
    /// Tabulate the perplexity of a two-attribute hyperedge.
    TwoAttributeCurve {
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WeightingArg {
    KDegree,
    TotalDegree,
}

impl From<WeightingArg> for Weighting {
    fn from(w: WeightingArg) -> Self {
        match w {
            WeightingArg::KDegree => Weighting::KDegree,
            WeightingArg::TotalDegree => Weighting::TotalDegree,
        }
    }
}

#[derive(clap::Args, Clone)]
struct SamplingArgs {
    /// Monte Carlo samples per edge size.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Hill-number order of the diversity index.
    #[arg(long, default_value_t = 1.0)]
    order: f64,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    #[arg(long)]
    hyperedges: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    label_names: Option<PathBuf>,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, default_value_t = hyperphi::homophily::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = 2)]
    min_k: usize,
    #[arg(long)]
    max_k: Option<usize>,
    #[arg(long, value_enum, default_value_t = WeightingArg::KDegree)]
    weighting: WeightingArg,
    /// Ids in the input files start at 0.
    #[arg(long)]
    zero_indexed: bool,
    /// Reject hyperedge lines that repeat a node id.
    #[arg(long)]
    strict_edges: bool,
    /// Fail instead of dropping hyperedges that touch unlabeled nodes.
    #[arg(long)]
    keep_unlabeled: bool,
    /// Keep only the first copy of identical hyperedges.
    #[arg(long)]
    collapse_duplicates: bool,
    /// CSV of per-edge scores.
    #[arg(long)]
    per_edge_out: Option<PathBuf>,
    /// CSV of observed and baseline diversity per edge size.
    #[arg(long)]
    perplexity_curve: Option<PathBuf>,
    /// JSON report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    attrs: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    edges: usize,
    #[arg(long, allow_hyphen_values = true)]
    p: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Files are written as PREFIX-hyperedges.txt, PREFIX-node-labels.txt,
    /// PREFIX-label-names.txt and PREFIX-manifest.json.
    #[arg(long)]
    out_prefix: PathBuf,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SweepMode {
    P,
    Kp,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    mode: SweepMode,
    /// START:STOP:STEP or a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    p_grid: String,
    /// Edge sizes for `--mode kp`.
    #[arg(long)]
    k_grid: Option<String>,
    #[arg(long, default_value_t = 1000)]
    nodes: usize,
    #[arg(long, default_value_t = 10)]
    attrs: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 5000)]
    edges: usize,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn sampler(args: &SamplingArgs, weighting: Weighting) -> SamplerConfig {
    SamplerConfig { samples: args.samples, seed: args.seed, diversity_order: args.order, weighting }
}

#[derive(Serialize)]
struct AnalyzeOptionsRecord<'a> {
    analysis: &'a AnalysisOptions,
    ingest: &'a IngestOptions,
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), Error> {
    let started = SystemTime::now();
    let ingest = IngestOptions {
        one_indexed: !args.zero_indexed,
        dedupe_edges: !args.strict_edges,
        drop_unlabeled: !args.keep_unlabeled,
        min_size: None,
        max_size: None,
        collapse_duplicates: args.collapse_duplicates,
    };
    let opts = AnalysisOptions {
        sampler: sampler(&args.sampling, args.weighting.into()),
        epsilon: args.epsilon,
        min_k: args.min_k,
        max_k: args.max_k,
        emit_per_edge: args.per_edge_out.is_some(),
    };
    opts.validate()?;
    let loaded = load_files(&args.hyperedges, &args.labels, args.label_names.as_deref(), &ingest)?;
    let h = &loaded.hypergraph;
    info!("loaded {} nodes, {} hyperedges, {} attributes", h.node_count(), h.edge_count(), h.num_attributes());
    let result = analyze(h, &opts)?;

    if let Some(path) = &args.per_edge_out {
        let records = result.per_edge.as_deref().unwrap_or_default();
        report::write_per_edge_csv(sink(Some(path))?, records)?;
    }
    if let Some(path) = &args.perplexity_curve {
        let rows: Vec<CurveRow> = result.per_k.iter().map(CurveRow::from).collect();
        report::write_curve_csv(sink(Some(path))?, &rows)?;
    }

    let mut manifest = RunManifest::new("analyze", &AnalyzeOptionsRecord { analysis: &opts, ingest: &ingest })?
        .input("hyperedges", args.hyperedges.display())
        .input("labels", args.labels.display());
    if let Some(names) = &args.label_names {
        manifest = manifest.input("label_names", names.display());
    }
    manifest.ingest = Some(loaded.stats.clone());
    let report = Report::new(manifest, report::summary(&result), RunTiming::since(started));
    let mut out = sink(args.out.as_deref())?;
    out.write_all(report.to_json()?.as_bytes())?;
    out.flush()?;
    info!("global phi {:.4} over {} of {} hyperedges", result.global_phi, result.edges_scored, result.edge_total);
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Error> {
    let started = SystemTime::now();
    let cfg = HsbmConfig {
        num_nodes: args.nodes,
        num_attributes: args.attrs,
        k: args.k,
        num_edges: args.edges,
        p: args.p,
        seed: args.seed,
    };
    let h = generate_hsbm(&cfg)?;
    let prefix = args.out_prefix.display().to_string();
    let path = |suffix: &str| PathBuf::from(format!("{prefix}-{suffix}"));
    let (edges, labels, names) = (path("hyperedges.txt"), path("node-labels.txt"), path("label-names.txt"));
    write_hypergraph(&h, sink(Some(&edges))?, sink(Some(&labels))?, Some(sink(Some(&names))?))?;
    let manifest = RunManifest::new("generate", &cfg)?
        .input("hyperedges", edges.display())
        .input("labels", labels.display())
        .input("label_names", names.display());
    let report = Report::new(manifest, serde_json::json!({"edges": h.edge_count()}), RunTiming::since(started));
    let mut out = sink(Some(&path("manifest.json")))?;
    out.write_all(report.to_json()?.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Error> {
    let p_grid = report::parse_real_grid(&args.p_grid)?;
    let base = HsbmConfig {
        num_nodes: args.nodes,
        num_attributes: args.attrs,
        k: args.k,
        num_edges: args.edges,
        p: 0.0,
        seed: args.sampling.seed,
    };
    let sampler = sampler(&args.sampling, Weighting::KDegree);
    let points = match args.mode {
        SweepMode::P => sweep_phi_vs_p(&base, &p_grid, &sampler)?,
        SweepMode::Kp => {
            let spec = args.k_grid.as_deref().ok_or_else(|| Error::Argument("--mode kp needs --k-grid".into()))?;
            let k_grid = report::parse_size_grid(spec)?;
            sweep_phi_vs_k(&base, &k_grid, &p_grid, &sampler)?
        }
    };
    let mut out = sink(args.out.as_deref())?;
    if matches!(args.mode, SweepMode::P) {
        let pts: Vec<(f64, f64)> = points.iter().map(|s| (s.p, s.phi)).collect();
        if let Some(fit) = linear_fit(&pts) {
            writeln!(
                out,
                "# linear fit of phi on p: slope={} intercept={} r_squared={}",
                report::fmt_f64(fit.slope),
                report::fmt_f64(fit.intercept),
                report::fmt_f64(fit.r_squared)
            )?;
        }
    }
    report::write_sweep_csv(&mut out, &points)?;
    out.flush()?;
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 1,
        Error::EmptyAnalysis(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            error!("could not configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::TwoAttributeCurve { steps, out } => {
            if steps == 0 {
                Err(Error::Argument("--steps must be at least 1".into()))
            } else {
                sink(out.as_deref()).map_err(Error::from).and_then(|w| report::write_two_attribute_csv(w, steps))
            }
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hyperphi: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
