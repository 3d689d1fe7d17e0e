//! Community-aware influence analysis for undirected networks.
//!
//! The crate identifies influential nodes through signed vitality
//! centralities — the change in (overlapping) modularity when a node is
//! removed — and evaluates seed rankings with a deterministic Monte-Carlo
//! SIR spreading harness:
//!
//! - [`graph`]: edge-list ingestion, components, topology statistics;
//! - [`community`]: overlapping covers, belonging coefficients,
//!   speaker-listener label propagation, cover files;
//! - [`modularity`]: crisp and fuzzy community quality from per-community
//!   edge tallies;
//! - [`vitality`]: per-node quality deltas via an incremental engine;
//! - [`ranking`]: signed-score orderings and seed-set extraction;
//! - [`sir`]: SIR simulation, epidemic threshold, and the
//!   relative-outbreak-difference sweep.

#![forbid(unsafe_code)]

pub mod community;
pub mod error;
pub mod graph;
pub mod modularity;
pub mod ranking;
pub mod scores;
pub mod sir;
pub mod util;
pub mod vitality;

pub use community::{
    belonging_coefficients, collapse_to_partition, cover_stats, read_cover, read_partition,
    slpa_detect, write_cover, write_partition, Cover, CoverStats, Partition, SlpaParams,
};
pub use error::{Error, ErrorKind, Result};
pub use graph::{
    degree, degree_scores, largest_connected_component, load_edge_list, topology_stats,
    EdgeListOptions, Graph, LoadDiagnostics, TopologyStats,
};
pub use modularity::{
    crisp_tallies, fuzzy_tallies, modularity_from_tallies, newman_modularity,
    overlapping_modularity, CommunityTally,
};
pub use ranking::{rank, top_fraction, write_ranking, Ranking, Strategy};
pub use scores::{read_scores, write_scores, ScoreVector};
pub use sir::{
    epidemic_threshold, relative_outbreak_difference, sir_mean, sir_run, sweep, write_sweep_csv,
    SirOutcome, SirParams, SweepLane, SweepResult,
};
pub use vitality::{modularity_vitality, overlapping_modularity_vitality, vitality_by_recompute};
