//! Homophily in attributed hypergraphs measured through diversity.
//!
//! Each hyperedge's attribute perplexity is compared with the expected
//! perplexity of a same-size hyperedge under degree-preserving random mixing.
//! The normalized gap, averaged over hyperedges, gives the
//! Perplexity-Homophily Index.
//!
//! - [`hypergraph`]: storage, ingestion of benchmark text files, k-degrees.
//! - [`diversity`]: perplexity and Hill numbers of a hyperedge composition.
//! - [`null_model`]: Monte Carlo and exact baselines.
//! - [`homophily`]: per-edge scores, the aggregate index, and Newman
//!   assortativity for pairwise edges.
//! - [`hsbm`]: synthetic hypergraphs with tunable homophily.
//! - [`report`]: run manifests and JSON/CSV output.

pub mod diversity;
pub mod error;
pub mod homophily;
pub mod hsbm;
pub mod hypergraph;
pub mod null_model;
pub mod report;
mod seeding;

pub use diversity::{composition, hill_number, perplexity, HyperedgeComposition};
pub use error::{Error, Result};
pub use homophily::{
    analyze, newman_assortativity, perplexity_curve, score_edge, AnalysisOptions, HomophilyRecord, HomophilyReport,
};
pub use hsbm::{generate_hsbm, HsbmConfig};
pub use hypergraph::{Hypergraph, IngestOptions, KDegreeIndex};
pub use null_model::{estimate_baseline, exact_baseline, sample_weighted_k_set, BaselineEstimate, SamplerConfig};
pub use seeding::derive_seed;
