//! Shortest-path discovery in multi-layered directed networks.
//!
//! A [`MultiLayeredNetwork`] joins a fixed node set by weighted edges on
//! several layers. Parallel edges between a pair are collapsed into one
//! multi-layered edge whose length is the layer-averaged distance, subject to
//! a minimum layer count (`alpha`) and a maximum distance (`beta`). Shortest
//! paths over those edges are found either by aggregating first ([`dap_sssp`])
//! or by evaluating edges during the search ([`mda_sssp`]).

pub mod aggregate;
pub mod analytics;
pub mod bench;
pub mod error;
pub mod generate;
pub mod io;
pub mod network;
pub mod shortest_path;

pub use aggregate::{
    aggregate_graph, distance, me_combined, me_distance, me_layers, AggregatedGraph,
    AggregationMode, AggregationParams, MultiEdge,
};
pub use analytics::{edge_count_sweep, path_stats, sweep, PathStats, SweepCell, SweepReport};
pub use error::{Error, Result};
pub use network::{
    DuplicatePolicy, LayerId, LayeredEdge, MultiLayeredNetwork, NetworkBuilder, NodeId, Polarity,
};
pub use shortest_path::{
    brute_force_sp, dap_sssp, dijkstra, mda_sssp, ml_floyd_warshall, reconstruct_path,
    repeated_dijkstra_apsp, Algorithm, DistanceMatrix, ShortestPathResult,
};
