//! Shortest multi-layered paths.
//!
//! Two single-source strategies produce the same lengths:
//!
//! * [`dap_sssp`] aggregates the whole network first and runs Dijkstra on the
//!   resulting simple digraph.
//! * [`mda_sssp`] runs Dijkstra directly on the layered network, expanding
//!   each settled node through its multi-layered out-neighbourhood and
//!   computing distances only for pairs it actually touches.
//!
//! Both break ties between equal tentative lengths by the lower node id.
//! Unreachable nodes have no length (`None`), never a large sentinel value.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aggregate::{aggregate_graph, AggregatedGraph, AggregationParams};
use crate::error::{Error, Result};
use crate::network::{MultiLayeredNetwork, NodeId};

pub const DEFAULT_APSP_MAX_NODES: usize = 2_000;
pub const DEFAULT_BRUTE_FORCE_MAX_NODES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Aggregate first, then plain Dijkstra.
    Dap,
    /// Dijkstra with on-the-fly edge aggregation.
    #[default]
    Mda,
}

impl Algorithm {
    pub fn run(
        self,
        net: &MultiLayeredNetwork,
        source: NodeId,
        params: &AggregationParams,
    ) -> Result<ShortestPathResult> {
        match self {
            Algorithm::Dap => dap_sssp(net, source, params),
            Algorithm::Mda => mda_sssp(net, source, params),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pred {
    Root,
    Via(u32),
    Unreached,
}

/// Output of a single-source search.
#[derive(Debug, Clone)]
pub struct ShortestPathResult {
    node_ids: Arc<[NodeId]>,
    source: usize,
    params: AggregationParams,
    lengths: Vec<Option<f64>>,
    preds: Vec<Pred>,
}

impl ShortestPathResult {
    pub fn source(&self) -> NodeId {
        self.node_ids[self.source]
    }

    pub fn source_index(&self) -> usize {
        self.source
    }

    pub fn params(&self) -> &AggregationParams {
        &self.params
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn node_ids(&self) -> &[NodeId] {
        &self.node_ids
    }

    fn index(&self, id: NodeId) -> Result<usize> {
        self.node_ids
            .binary_search(&id)
            .map_err(|_| Error::UnknownNode(id))
    }

    /// Lengths by dense node index; `None` marks unreachable nodes.
    pub fn lengths(&self) -> &[Option<f64>] {
        &self.lengths
    }

    pub fn length(&self, target: NodeId) -> Result<Option<f64>> {
        Ok(self.lengths[self.index(target)?])
    }

    pub fn is_reachable(&self, target: NodeId) -> Result<bool> {
        Ok(self.length(target)?.is_some())
    }

    /// Predecessor of `target` on its shortest path. `None` for the source
    /// itself and for unreachable nodes.
    pub fn predecessor(&self, target: NodeId) -> Result<Option<NodeId>> {
        Ok(self.predecessor_index(self.index(target)?).map(|i| self.node_ids[i]))
    }

    pub fn predecessor_index(&self, target: usize) -> Option<usize> {
        match self.preds[target] {
            Pred::Via(p) => Some(p as usize),
            Pred::Root | Pred::Unreached => None,
        }
    }

    /// Reachable targets other than the source, by dense index.
    pub fn reachable(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.lengths
            .iter()
            .enumerate()
            .filter(move |&(i, _)| i != self.source)
            .filter_map(|(i, l)| l.map(|l| (i, l)))
    }

    /// Number of edges on the shortest path to each node; `None` if unreachable.
    pub fn hop_counts(&self) -> Vec<Option<u32>> {
        let n = self.lengths.len();
        let mut hops: Vec<Option<u32>> = vec![None; n];
        hops[self.source] = Some(0);
        let mut stack = Vec::new();
        for start in 0..n {
            if hops[start].is_some() || self.preds[start] == Pred::Unreached {
                continue;
            }
            stack.clear();
            let mut cur = start;
            while hops[cur].is_none() && stack.len() <= n {
                stack.push(cur);
                match self.preds[cur] {
                    Pred::Via(p) => cur = p as usize,
                    Pred::Root | Pred::Unreached => break,
                }
            }
            let Some(mut h) = hops[cur] else {
                continue;
            };
            while let Some(node) = stack.pop() {
                h += 1;
                hops[node] = Some(h);
            }
        }
        hops
    }

    /// Node sequence from the source to `target`, empty if unreachable.
    pub fn path_to(&self, target: NodeId) -> Result<Vec<NodeId>> {
        let t = self.index(target)?;
        Ok(self
            .path_indices(t)
            .into_iter()
            .map(|i| self.node_ids[i])
            .collect())
    }

    pub fn path_indices(&self, target: usize) -> Vec<usize> {
        if self.preds[target] == Pred::Unreached {
            return Vec::new();
        }
        let mut path = vec![target];
        let mut cur = target;
        while let Pred::Via(p) = self.preds[cur] {
            cur = p as usize;
            path.push(cur);
            if path.len() > self.preds.len() {
                return Vec::new();
            }
        }
        path.reverse();
        path
    }
}

/// Standalone form of [`ShortestPathResult::path_to`].
pub fn reconstruct_path(result: &ShortestPathResult, target: NodeId) -> Result<Vec<NodeId>> {
    result.path_to(target)
}

/// Min-heap key: tentative length, then node index for deterministic ties.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry(f64, u32);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Tentative lengths, predecessors and the settled set of one search.
struct Search {
    lengths: Vec<Option<f64>>,
    preds: Vec<Pred>,
    settled: Vec<bool>,
    heap: BinaryHeap<Reverse<Entry>>,
}

impl Search {
    fn new(n: usize, source: usize) -> Self {
        let mut s = Search {
            lengths: vec![None; n],
            preds: vec![Pred::Unreached; n],
            settled: vec![false; n],
            heap: BinaryHeap::new(),
        };
        s.lengths[source] = Some(0.0);
        s.preds[source] = Pred::Root;
        s.heap.push(Reverse(Entry(0.0, source as u32)));
        s
    }

    /// Next unsettled node with the smallest tentative length. Nodes never
    /// reached are not in the heap, so an exhausted heap is the "minimum is
    /// infinite" stop condition.
    fn pop(&mut self) -> Option<(usize, f64)> {
        while let Some(Reverse(Entry(len, v))) = self.heap.pop() {
            let v = v as usize;
            if !self.settled[v] {
                self.settled[v] = true;
                return Some((v, len));
            }
        }
        None
    }

    fn relax(&mut self, from: usize, base: f64, to: usize, d: f64) {
        if self.settled[to] {
            return;
        }
        let candidate = base + d;
        if self.lengths[to].is_none_or(|cur| cur > candidate) {
            self.lengths[to] = Some(candidate);
            self.preds[to] = Pred::Via(from as u32);
            self.heap.push(Reverse(Entry(candidate, to as u32)));
        }
    }

    fn finish(
        self,
        node_ids: Arc<[NodeId]>,
        source: usize,
        params: AggregationParams,
    ) -> ShortestPathResult {
        ShortestPathResult {
            node_ids,
            source,
            params,
            lengths: self.lengths,
            preds: self.preds,
        }
    }
}

/// Dijkstra over an already aggregated graph (the search phase of DAP).
pub fn dijkstra(graph: &AggregatedGraph, source: NodeId) -> Result<ShortestPathResult> {
    let s = graph.index_of(source).ok_or(Error::UnknownNode(source))?;
    Ok(dijkstra_from_index(graph, s))
}

pub(crate) fn dijkstra_from_index(graph: &AggregatedGraph, s: usize) -> ShortestPathResult {
    let mut search = Search::new(graph.node_count(), s);
    while let Some((v, len)) = search.pop() {
        for (w, d) in graph.out_edges(v) {
            search.relax(v, len, w, d);
        }
    }
    search.finish(graph.shared_node_ids(), s, *graph.params())
}

/// Dijkstra with preprocessing: aggregate, then search.
pub fn dap_sssp(
    net: &MultiLayeredNetwork,
    source: NodeId,
    params: &AggregationParams,
) -> Result<ShortestPathResult> {
    net.require_index(source)?;
    let graph = aggregate_graph(net, params);
    dijkstra(&graph, source)
}

/// Multi-layered Dijkstra: aggregated edges are evaluated while searching.
pub fn mda_sssp(
    net: &MultiLayeredNetwork,
    source: NodeId,
    params: &AggregationParams,
) -> Result<ShortestPathResult> {
    let s = net.require_index(source)?;
    let mut search = Search::new(net.node_count(), s);
    let polarity = net.polarity();
    while let Some((v, len)) = search.pop() {
        for pair in net.pairs_from(v) {
            if search.settled[pair.target] {
                continue;
            }
            if let Some(d) = params.admit_pair(&pair, polarity) {
                search.relax(v, len, pair.target, d);
            }
        }
    }
    Ok(search.finish(net.shared_node_ids(), s, *params))
}

/// Exhaustive search over all simple paths of the aggregated graph.
/// Exponential; intended as a test oracle for small networks.
pub fn brute_force_sp(
    net: &MultiLayeredNetwork,
    source: NodeId,
    params: &AggregationParams,
    max_nodes: usize,
) -> Result<ShortestPathResult> {
    let s = net.require_index(source)?;
    let n = net.node_count();
    if n > max_nodes {
        return Err(Error::SizeGuardExceeded {
            nodes: n,
            limit: max_nodes,
        });
    }
    let graph = aggregate_graph(net, params);

    struct Walk<'a> {
        graph: &'a AggregatedGraph,
        on_path: Vec<bool>,
        path: Vec<usize>,
        best: Vec<Option<(f64, Vec<usize>)>>,
    }

    impl Walk<'_> {
        fn visit(&mut self, v: usize, len: f64) {
            let better = self.best[v].as_ref().is_none_or(|(b, _)| len < *b);
            if better {
                self.best[v] = Some((len, self.path.clone()));
            }
            for (w, d) in self.graph.out_edges(v).collect::<Vec<_>>() {
                if !self.on_path[w] {
                    self.on_path[w] = true;
                    self.path.push(w);
                    self.visit(w, len + d);
                    self.path.pop();
                    self.on_path[w] = false;
                }
            }
        }
    }

    let mut walk = Walk {
        graph: &graph,
        on_path: vec![false; n],
        path: vec![s],
        best: vec![None; n],
    };
    walk.on_path[s] = true;
    walk.visit(s, 0.0);

    let mut lengths = vec![None; n];
    let mut preds = vec![Pred::Unreached; n];
    for (v, best) in walk.best.into_iter().enumerate() {
        if let Some((len, path)) = best {
            lengths[v] = Some(len);
            preds[v] = match path.len() {
                1 => Pred::Root,
                k => Pred::Via(path[k - 2] as u32),
            };
        }
    }
    Ok(ShortestPathResult {
        node_ids: net.shared_node_ids(),
        source: s,
        params: *params,
        lengths,
        preds,
    })
}

/// All-pairs shortest lengths, rows and columns in ascending node id order.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    node_ids: Arc<[NodeId]>,
    // f64::INFINITY marks unreachable entries internally; the public
    // accessors translate it to None.
    values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn node_ids(&self) -> &[NodeId] {
        &self.node_ids
    }

    pub fn order(&self) -> usize {
        self.node_ids.len()
    }

    pub fn get_index(&self, i: usize, j: usize) -> Option<f64> {
        let v = self.values[i * self.order() + j];
        v.is_finite().then_some(v)
    }

    pub fn get(&self, from: NodeId, to: NodeId) -> Result<Option<f64>> {
        let idx = |id| {
            self.node_ids
                .binary_search(&id)
                .map_err(|_| Error::UnknownNode(id))
        };
        Ok(self.get_index(idx(from)?, idx(to)?))
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = Option<f64>> + '_ {
        (0..self.order()).map(move |j| self.get_index(i, j))
    }

    /// Largest absolute difference between finite entries, or `None` when
    /// the two matrices disagree on reachability or shape.
    pub fn max_abs_diff(&self, other: &DistanceMatrix) -> Option<f64> {
        if self.node_ids != other.node_ids {
            return None;
        }
        let mut worst = 0.0f64;
        for (a, b) in self.values.iter().zip(&other.values) {
            match (a.is_finite(), b.is_finite()) {
                (true, true) => worst = worst.max((a - b).abs()),
                (false, false) => {}
                _ => return None,
            }
        }
        Some(worst)
    }
}

fn guard(net: &MultiLayeredNetwork, max_nodes: usize) -> Result<()> {
    let n = net.node_count();
    if n > max_nodes {
        Err(Error::SizeGuardExceeded {
            nodes: n,
            limit: max_nodes,
        })
    } else {
        Ok(())
    }
}

/// Floyd–Warshall over the aggregated graph.
pub fn ml_floyd_warshall(
    net: &MultiLayeredNetwork,
    params: &AggregationParams,
    max_nodes: usize,
) -> Result<DistanceMatrix> {
    guard(net, max_nodes)?;
    let graph = aggregate_graph(net, params);
    let n = graph.node_count();
    let mut m = vec![f64::INFINITY; n * n];
    for i in 0..n {
        m[i * n + i] = 0.0;
        for (j, d) in graph.out_edges(i) {
            m[i * n + j] = m[i * n + j].min(d);
        }
    }
    for k in 0..n {
        let row_k = m[k * n..(k + 1) * n].to_vec();
        for i in 0..n {
            let ik = m[i * n + k];
            if ik == f64::INFINITY {
                continue;
            }
            let row_i = &mut m[i * n..(i + 1) * n];
            for (cell, &kj) in row_i.iter_mut().zip(&row_k) {
                let via = ik + kj;
                if via < *cell {
                    *cell = via;
                }
            }
        }
    }
    Ok(DistanceMatrix {
        node_ids: graph.shared_node_ids(),
        values: m,
    })
}

/// All-pairs lengths by one DAP search per source, fanned out over the
/// current rayon pool. Aggregation happens once.
pub fn repeated_dijkstra_apsp(
    net: &MultiLayeredNetwork,
    params: &AggregationParams,
    max_nodes: usize,
) -> Result<DistanceMatrix> {
    guard(net, max_nodes)?;
    let graph = aggregate_graph(net, params);
    let n = graph.node_count();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| {
            dijkstra_from_index(&graph, s)
                .lengths
                .into_iter()
                .map(|l| l.unwrap_or(f64::INFINITY))
                .collect()
        })
        .collect();
    Ok(DistanceMatrix {
        node_ids: graph.shared_node_ids(),
        values: rows.concat(),
    })
}
