//! Independent reference implementations used by the integration suites.
//!
//! Nothing here calls into the library's aggregation or search code: the
//! oracles work on raw `(src, dst, layer, weight)` tuples.

#![allow(dead_code)]

use std::collections::BTreeMap;

use mlsp::{LayerId, LayeredEdge, MultiLayeredNetwork, NetworkBuilder, NodeId};

pub type RawEdge = (u64, u64, u16, f64);

/// Builds a network from raw tuples; duplicate triples keep the first weight.
pub fn build(layers: usize, nodes: &[u64], edges: &[RawEdge]) -> MultiLayeredNetwork {
    let mut b = NetworkBuilder::with_layers(layers).unwrap();
    for &n in nodes {
        b.add_node(n);
    }
    for &(s, d, l, w) in edges {
        if s == d {
            continue;
        }
        let _ = b.add_edge(LayeredEdge::new(s, d, LayerId(l), w));
    }
    b.seal().unwrap()
}

/// Per-pair layer weights straight from the sealed network's edge iterator.
pub fn raw_pairs(net: &MultiLayeredNetwork) -> BTreeMap<(u64, u64), Vec<Option<f64>>> {
    let mut pairs = BTreeMap::new();
    for e in net.edges() {
        let slots = pairs
            .entry((e.src.0, e.dst.0))
            .or_insert_with(|| vec![None; net.layer_count()]);
        slots[e.layer.index()] = Some(e.weight);
    }
    pairs
}

/// Reference aggregated edge relation: `(src, dst) -> distance` for every
/// pair on at least `alpha` layers at distance at most `beta`.
pub fn reference_edges(net: &MultiLayeredNetwork, alpha: u32, beta: f64) -> BTreeMap<(u64, u64), f64> {
    let layers = net.layer_count() as f64;
    raw_pairs(net)
        .into_iter()
        .filter_map(|(pair, slots)| {
            let count = slots.iter().filter(|s| s.is_some()).count() as u32;
            let sum: f64 = slots.iter().map(|s| s.unwrap_or(0.0)).sum();
            let d = 1.0 - sum / layers;
            (count >= alpha && d <= beta).then_some((pair, d))
        })
        .collect()
}

/// Minimum length over every simple path from `source`, by exhaustive DFS.
pub fn enumerate_simple_paths(
    nodes: &[NodeId],
    edges: &BTreeMap<(u64, u64), f64>,
    source: NodeId,
) -> Vec<Option<f64>> {
    let index: BTreeMap<u64, usize> = nodes.iter().enumerate().map(|(i, n)| (n.0, i)).collect();
    let mut adj = vec![Vec::new(); nodes.len()];
    for (&(s, d), &w) in edges {
        adj[index[&s]].push((index[&d], w));
    }
    let mut best = vec![None; nodes.len()];
    let mut on_path = vec![false; nodes.len()];

    fn dfs(
        v: usize,
        len: f64,
        adj: &[Vec<(usize, f64)>],
        on_path: &mut [bool],
        best: &mut [Option<f64>],
    ) {
        if best[v].is_none_or(|b: f64| len < b) {
            best[v] = Some(len);
        }
        for &(w, d) in &adj[v] {
            if !on_path[w] {
                on_path[w] = true;
                dfs(w, len + d, adj, on_path, best);
                on_path[w] = false;
            }
        }
    }

    let s = index[&source.0];
    on_path[s] = true;
    dfs(s, 0.0, &adj, &mut on_path, &mut best);
    best
}

/// Textbook O(n²) Dijkstra without a heap, on an explicit weight list.
pub fn textbook_dijkstra(n: usize, edges: &[(usize, usize, f64)], source: usize) -> Vec<Option<f64>> {
    let mut adj = vec![Vec::new(); n];
    for &(s, d, w) in edges {
        adj[s].push((d, w));
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;
    loop {
        let mut u = None;
        for v in 0..n {
            if !done[v] && dist[v].is_finite() && u.is_none_or(|u: usize| dist[v] < dist[u]) {
                u = Some(v);
            }
        }
        let Some(u) = u else { break };
        done[u] = true;
        for &(v, w) in &adj[u] {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
            }
        }
    }
    dist.into_iter().map(|d| d.is_finite().then_some(d)).collect()
}

pub fn lengths_close(a: &[Option<f64>], b: &[Option<f64>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| match (x, y) {
            (Some(x), Some(y)) => (x - y).abs() <= tol,
            (None, None) => true,
            _ => false,
        })
}

pub fn reachable_count(lengths: &[Option<f64>]) -> usize {
    lengths.iter().filter(|l| l.is_some()).count()
}
