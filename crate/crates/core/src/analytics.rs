//! Per-source path statistics and threshold sweeps.

use rayon::prelude::*;
use serde::Serialize;

use crate::aggregate::AggregationParams;
use crate::error::{Error, Result};
use crate::network::{MultiLayeredNetwork, NodeId};
use crate::shortest_path::{Algorithm, ShortestPathResult};

/// Column order used by every CSV emission of [`PathStats`].
pub const PATH_STATS_HEADER: [&str; 10] = [
    "source",
    "alpha",
    "beta",
    "num_routes",
    "avg_len",
    "min_len",
    "max_len",
    "avg_handshakes",
    "num_neighbors",
    "pct_connected",
];

/// Summary of one single-source search.
///
/// Handshakes are hop counts along the shortest path. `num_neighbors` is the
/// aggregated out-degree of the source, and `pct_connected` is the share of
/// the other `|V| - 1` nodes that are reachable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathStats {
    pub source: NodeId,
    pub alpha: u32,
    pub beta: f64,
    pub num_routes: usize,
    pub avg_len: f64,
    pub min_len: f64,
    pub max_len: f64,
    pub avg_handshakes: f64,
    pub num_neighbors: usize,
    pub pct_connected: f64,
}

impl PathStats {
    pub fn csv_record(&self) -> [String; 10] {
        [
            self.source.to_string(),
            self.alpha.to_string(),
            self.beta.to_string(),
            self.num_routes.to_string(),
            self.avg_len.to_string(),
            self.min_len.to_string(),
            self.max_len.to_string(),
            self.avg_handshakes.to_string(),
            self.num_neighbors.to_string(),
            self.pct_connected.to_string(),
        ]
    }
}

/// Aggregated out-degree of `source` under `params`.
pub fn aggregated_out_degree(
    net: &MultiLayeredNetwork,
    source: NodeId,
    params: &AggregationParams,
) -> Result<usize> {
    let s = net.require_index(source)?;
    Ok(net
        .pairs_from(s)
        .filter(|p| params.admit_pair(p, net.polarity()).is_some())
        .count())
}

pub fn path_stats(
    result: &ShortestPathResult,
    net: &MultiLayeredNetwork,
    params: &AggregationParams,
) -> Result<PathStats> {
    if result.params() != params {
        return Err(Error::InconsistentInput(format!(
            "result computed with {:?}, stats requested for {:?}",
            result.params(),
            params
        )));
    }
    if result.node_ids() != net.node_ids() {
        return Err(Error::InconsistentInput(
            "result was computed on a different network".into(),
        ));
    }

    let hops = result.hop_counts();
    let mut num_routes = 0usize;
    let (mut sum, mut min, mut max) = (0.0f64, f64::INFINITY, 0.0f64);
    let mut hop_sum = 0u64;
    for (v, len) in result.reachable() {
        num_routes += 1;
        sum += len;
        min = min.min(len);
        max = max.max(len);
        hop_sum += u64::from(hops[v].expect("reachable nodes have a hop count"));
    }

    let others = net.node_count() - 1;
    let (avg_len, min_len, max_len, avg_handshakes) = if num_routes == 0 {
        (0.0, 0.0, 0.0, 0.0)
    } else {
        let k = num_routes as f64;
        (sum / k, min, max, hop_sum as f64 / k)
    };
    Ok(PathStats {
        source: result.source(),
        alpha: params.alpha(),
        beta: params.beta(),
        num_routes,
        avg_len,
        min_len,
        max_len,
        avg_handshakes,
        num_neighbors: aggregated_out_degree(net, result.source(), params)?,
        pct_connected: if others == 0 {
            0.0
        } else {
            num_routes as f64 / others as f64
        },
    })
}

/// Runs a search and summarises it in one step.
pub fn source_stats(
    net: &MultiLayeredNetwork,
    source: NodeId,
    params: &AggregationParams,
    algorithm: Algorithm,
) -> Result<PathStats> {
    let result = algorithm.run(net, source, params)?;
    path_stats(&result, net, params)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub alpha: u32,
    pub beta: f64,
    pub edge_count: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub stats: Vec<PathStats>,
}

/// Aggregated edge counts over an (alpha, beta) grid, alpha-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub alphas: Vec<u32>,
    pub betas: Vec<f64>,
    pub cells: Vec<SweepCell>,
}

impl SweepReport {
    pub fn cell(&self, alpha: u32, beta: f64) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| c.alpha == alpha && c.beta == beta)
    }

    pub fn total_edges(&self) -> usize {
        self.cells.iter().map(|c| c.edge_count).sum()
    }
}

fn grid(alphas: &[u32], betas: &[f64]) -> Result<Vec<AggregationParams>> {
    if alphas.is_empty() || betas.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep grids must not be empty".into(),
        ));
    }
    alphas
        .iter()
        .flat_map(|&a| betas.iter().map(move |&b| AggregationParams::combined(a, b)))
        .collect()
}

/// Edge counts of the combined aggregation for every grid cell.
pub fn edge_count_sweep(
    net: &MultiLayeredNetwork,
    alphas: &[u32],
    betas: &[f64],
) -> Result<SweepReport> {
    sweep(net, alphas, betas, &[], Algorithm::Mda)
}

/// Edge counts plus per-cell statistics for a fixed set of sources.
///
/// Each connected pair's distance is computed once and tested against every
/// cell; statistics for different cells run in parallel.
pub fn sweep(
    net: &MultiLayeredNetwork,
    alphas: &[u32],
    betas: &[f64],
    sources: &[NodeId],
    algorithm: Algorithm,
) -> Result<SweepReport> {
    let params = grid(alphas, betas)?;
    for &s in sources {
        net.require_index(s)?;
    }

    let mut counts = vec![0usize; params.len()];
    let polarity = net.polarity();
    for src in 0..net.node_count() {
        for pair in net.pairs_from(src) {
            let d = crate::aggregate::pair_distance(pair.weights, polarity);
            let layers = pair.layer_count();
            for (count, p) in counts.iter_mut().zip(&params) {
                if p.admits(layers, d) {
                    *count += 1;
                }
            }
        }
    }

    let cells = params
        .par_iter()
        .zip(counts)
        .map(|(p, edge_count)| {
            let stats = sources
                .iter()
                .map(|&s| source_stats(net, s, p, algorithm))
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepCell {
                alpha: p.alpha(),
                beta: p.beta(),
                edge_count,
                stats,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepReport {
        alphas: alphas.to_vec(),
        betas: betas.to_vec(),
        cells,
    })
}
