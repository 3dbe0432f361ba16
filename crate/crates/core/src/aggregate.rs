//! Collapsing parallel layered edges into single multi-layered edges.
//!
//! The distance between two nodes averages their per-layer weights over all
//! layers of the network (absent layers count as weight `0`). For positive
//! polarity the average closeness is subtracted from one:
//!
//! ```text
//! d(x, y) = 1 - (Σ_l w(x, y, l)) / |L|
//! ```
//!
//! A pair becomes a multi-layered edge when it spans at least `alpha` layers,
//! has distance at most `beta`, or both, depending on [`AggregationMode`].
//! Pairs with no layered edge at all never aggregate, whatever the thresholds.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{MultiLayeredNetwork, NodeId, PairView, Polarity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AggregationMode {
    /// Layer-count threshold only.
    LayersOnly,
    /// Distance threshold only.
    DistanceOnly,
    /// Both thresholds must hold.
    #[default]
    Combined,
}

/// Validated aggregation thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AggregationParams {
    alpha: u32,
    beta: f64,
    mode: AggregationMode,
}

impl AggregationParams {
    pub fn new(alpha: u32, beta: f64, mode: AggregationMode) -> Result<Self> {
        check_alpha(alpha)?;
        check_beta(beta)?;
        Ok(AggregationParams { alpha, beta, mode })
    }

    pub fn combined(alpha: u32, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, AggregationMode::Combined)
    }

    pub fn layers_only(alpha: u32) -> Result<Self> {
        Self::new(alpha, 1.0, AggregationMode::LayersOnly)
    }

    pub fn distance_only(beta: f64) -> Result<Self> {
        Self::new(1, beta, AggregationMode::DistanceOnly)
    }

    /// `alpha = 1, beta = 1`: every connected pair aggregates.
    pub fn unrestricted() -> Self {
        AggregationParams {
            alpha: 1,
            beta: 1.0,
            mode: AggregationMode::Combined,
        }
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mode(&self) -> AggregationMode {
        self.mode
    }

    fn layer_threshold(&self) -> u32 {
        match self.mode {
            AggregationMode::DistanceOnly => 1,
            _ => self.alpha,
        }
    }

    fn applies_beta(&self) -> bool {
        self.mode != AggregationMode::LayersOnly
    }

    /// Whether a pair spanning `layer_count` layers at `distance` becomes an edge.
    pub fn admits(&self, layer_count: u32, distance: f64) -> bool {
        layer_count >= 1
            && layer_count >= self.layer_threshold()
            && (!self.applies_beta() || distance <= self.beta)
    }

    /// Cheap pre-check on layer count alone, before any distance is computed.
    pub(crate) fn admits_layer_count(&self, layer_count: u32) -> bool {
        layer_count >= 1 && layer_count >= self.layer_threshold()
    }

    /// Evaluates a stored pair, returning its distance if it aggregates.
    pub(crate) fn admit_pair(&self, pair: &PairView<'_>, polarity: Polarity) -> Option<f64> {
        let count = pair.layer_count();
        if !self.admits_layer_count(count) {
            return None;
        }
        let d = pair_distance(pair.weights, polarity);
        (!self.applies_beta() || d <= self.beta).then_some(d)
    }
}

fn check_alpha(alpha: u32) -> Result<()> {
    if alpha >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::InvalidBeta(beta))
    }
}

/// Distance from a full per-layer weight row. Summation runs in layer order
/// so every caller gets bit-identical results for the same pair.
pub(crate) fn pair_distance(weights: &[f64], polarity: Polarity) -> f64 {
    let mean = weights.iter().sum::<f64>() / weights.len() as f64;
    match polarity {
        Polarity::Positive => 1.0 - mean,
        Polarity::Negative => mean.clamp(0.0, 1.0),
    }
}

/// Layer-averaged distance from `x` to `y`. Unconnected pairs are at distance
/// `1` under positive polarity.
pub fn distance(net: &MultiLayeredNetwork, x: NodeId, y: NodeId) -> Result<f64> {
    let (xi, yi) = (net.require_index(x)?, net.require_index(y)?);
    if xi == yi {
        return Err(Error::SameNode(x));
    }
    Ok(match net.find_pair(xi, yi) {
        Some(p) => pair_distance(p.weights, net.polarity()),
        None => match net.polarity() {
            Polarity::Positive => 1.0,
            Polarity::Negative => 0.0,
        },
    })
}

/// A single aggregated edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultiEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub distance: f64,
    pub layer_count: u32,
}

fn evaluate(
    net: &MultiLayeredNetwork,
    x: NodeId,
    y: NodeId,
    params: &AggregationParams,
) -> Result<Option<MultiEdge>> {
    let (xi, yi) = (net.require_index(x)?, net.require_index(y)?);
    if xi == yi {
        return Err(Error::SameNode(x));
    }
    let Some(pair) = net.find_pair(xi, yi) else {
        return Ok(None);
    };
    Ok(params.admit_pair(&pair, net.polarity()).map(|distance| MultiEdge {
        src: x,
        dst: y,
        distance,
        layer_count: pair.layer_count(),
    }))
}

/// Edge admitted by layer count alone.
pub fn me_layers(
    net: &MultiLayeredNetwork,
    x: NodeId,
    y: NodeId,
    alpha: u32,
) -> Result<Option<MultiEdge>> {
    evaluate(net, x, y, &AggregationParams::layers_only(alpha)?)
}

/// Edge admitted by distance alone.
pub fn me_distance(
    net: &MultiLayeredNetwork,
    x: NodeId,
    y: NodeId,
    beta: f64,
) -> Result<Option<MultiEdge>> {
    evaluate(net, x, y, &AggregationParams::distance_only(beta)?)
}

/// Edge admitted when both thresholds hold.
pub fn me_combined(
    net: &MultiLayeredNetwork,
    x: NodeId,
    y: NodeId,
    alpha: u32,
    beta: f64,
) -> Result<Option<MultiEdge>> {
    evaluate(net, x, y, &AggregationParams::combined(alpha, beta)?)
}

pub fn multi_edge(
    net: &MultiLayeredNetwork,
    x: NodeId,
    y: NodeId,
    params: &AggregationParams,
) -> Result<Option<MultiEdge>> {
    evaluate(net, x, y, params)
}

/// Simple weighted digraph of multi-layered edges under fixed thresholds.
/// CSR layout over the network's dense node indices.
#[derive(Debug, Clone)]
pub struct AggregatedGraph {
    node_ids: Arc<[NodeId]>,
    params: AggregationParams,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    distances: Vec<f64>,
    layer_counts: Vec<u32>,
}

/// Builds the aggregated graph. Only pairs joined on at least one layer are
/// examined.
pub fn aggregate_graph(net: &MultiLayeredNetwork, params: &AggregationParams) -> AggregatedGraph {
    let n = net.node_count();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::new();
    let mut distances = Vec::new();
    let mut layer_counts = Vec::new();
    offsets.push(0);
    for src in 0..n {
        for pair in net.pairs_from(src) {
            if let Some(d) = params.admit_pair(&pair, net.polarity()) {
                targets.push(pair.target as u32);
                distances.push(d);
                layer_counts.push(pair.layer_count());
            }
        }
        offsets.push(targets.len());
    }
    AggregatedGraph {
        node_ids: net.shared_node_ids(),
        params: *params,
        offsets,
        targets,
        distances,
        layer_counts,
    }
}

impl AggregatedGraph {
    pub fn params(&self) -> &AggregationParams {
        &self.params
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn node_ids(&self) -> &[NodeId] {
        &self.node_ids
    }

    pub(crate) fn shared_node_ids(&self) -> Arc<[NodeId]> {
        Arc::clone(&self.node_ids)
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.node_ids.binary_search(&id).ok()
    }

    /// `(target index, distance)` for each aggregated out-edge of `src`.
    pub fn out_edges(&self, src: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[src]..self.offsets[src + 1];
        self.targets[range.clone()]
            .iter()
            .zip(&self.distances[range])
            .map(|(&t, &d)| (t as usize, d))
    }

    pub fn out_degree(&self, src: usize) -> usize {
        self.offsets[src + 1] - self.offsets[src]
    }

    pub fn edge(&self, x: NodeId, y: NodeId) -> Option<MultiEdge> {
        let (xi, yi) = (self.index_of(x)?, self.index_of(y)?);
        let start = self.offsets[xi];
        let pos = self.targets[start..self.offsets[xi + 1]]
            .binary_search(&(yi as u32))
            .ok()?;
        Some(self.edge_at(xi, start + pos))
    }

    fn edge_at(&self, src: usize, slot: usize) -> MultiEdge {
        MultiEdge {
            src: self.node_ids[src],
            dst: self.node_ids[self.targets[slot] as usize],
            distance: self.distances[slot],
            layer_count: self.layer_counts[slot],
        }
    }

    /// All edges ordered by (src, dst).
    pub fn edges(&self) -> impl Iterator<Item = MultiEdge> + '_ {
        (0..self.node_count())
            .flat_map(move |src| (self.offsets[src]..self.offsets[src + 1]).map(move |s| self.edge_at(src, s)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::tests::{five_user_network, U, V, X, Y, Z};
    use crate::network::{LayerId, LayeredEdge, NetworkBuilder};

    /// |L| = 3, x -> y with weights 0.8 and 0.5 on the first two layers.
    fn two_node(polarity: Polarity) -> MultiLayeredNetwork {
        let mut b = NetworkBuilder::with_layers(3).unwrap().polarity(polarity);
        b.add_edge(LayeredEdge::new(1, 2, LayerId(0), 0.8)).unwrap();
        b.add_edge(LayeredEdge::new(1, 2, LayerId(1), 0.5)).unwrap();
        b.seal().unwrap()
    }

    const SEVENTEEN_THIRTIETHS: f64 = 17.0 / 30.0;

    #[test]
    fn distance_hand_evaluated() {
        // 1 - (0.8 + 0.5 + 0) / 3 = 1 - 13/30 = 17/30
        let net = two_node(Polarity::Positive);
        let d = distance(&net, NodeId(1), NodeId(2)).unwrap();
        assert!((d - SEVENTEEN_THIRTIETHS).abs() <= 1e-15, "{d}");
    }

    #[test]
    fn distance_extremes() {
        let net = two_node(Polarity::Positive);
        assert_eq!(distance(&net, NodeId(2), NodeId(1)).unwrap(), 1.0);

        let mut b = NetworkBuilder::with_layers(3).unwrap();
        for l in 0..3 {
            b.add_edge(LayeredEdge::new(1, 2, LayerId(l), 1.0)).unwrap();
        }
        let net = b.seal().unwrap();
        assert_eq!(distance(&net, NodeId(1), NodeId(2)).unwrap(), 0.0);
    }

    #[test]
    fn distance_errors() {
        let net = two_node(Polarity::Positive);
        assert!(matches!(distance(&net, NodeId(1), NodeId(1)), Err(Error::SameNode(_))));
        assert!(matches!(distance(&net, NodeId(1), NodeId(9)), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn negative_polarity_skips_subtraction() {
        let net = two_node(Polarity::Negative);
        let d = distance(&net, NodeId(1), NodeId(2)).unwrap();
        assert!((d - 13.0 / 30.0).abs() <= 1e-15);
    }

    #[test]
    fn layer_threshold() {
        let net = two_node(Polarity::Positive);
        let e = me_layers(&net, NodeId(1), NodeId(2), 2).unwrap().unwrap();
        assert_eq!(e.layer_count, 2);
        assert!((e.distance - SEVENTEEN_THIRTIETHS).abs() <= 1e-15);
        assert!(me_layers(&net, NodeId(1), NodeId(2), 3).unwrap().is_none());
        assert!(matches!(
            me_layers(&net, NodeId(1), NodeId(2), 0),
            Err(Error::InvalidAlpha(0))
        ));
    }

    #[test]
    fn layer_threshold_on_five_users() {
        let net = five_user_network();
        assert!(me_layers(&net, X, Z, 3).unwrap().is_some());
        assert!(me_layers(&net, X, U, 3).unwrap().is_none());
    }

    #[test]
    fn distance_threshold() {
        let net = two_node(Polarity::Positive);
        assert!(me_distance(&net, NodeId(1), NodeId(2), 0.6).unwrap().is_some());
        assert!(me_distance(&net, NodeId(1), NodeId(2), 0.5).unwrap().is_none());
        assert!(me_distance(&net, NodeId(1), NodeId(2), 1.0).unwrap().is_some());
        // unconnected pair: d = 1 <= 1 but no edge
        assert!(me_distance(&net, NodeId(2), NodeId(1), 1.0).unwrap().is_none());
        for beta in [-0.1, 1.01, f64::NAN] {
            assert!(matches!(
                me_distance(&net, NodeId(1), NodeId(2), beta),
                Err(Error::InvalidBeta(_))
            ));
        }
    }

    #[test]
    fn combined_thresholds() {
        let net = two_node(Polarity::Positive);
        let (a, b) = (NodeId(1), NodeId(2));
        assert!(me_combined(&net, a, b, 2, 0.6).unwrap().is_some());
        assert!(me_combined(&net, a, b, 3, 0.6).unwrap().is_none());
        assert!(me_combined(&net, a, b, 2, 0.5).unwrap().is_none());
        assert!(me_combined(&net, a, b, 0, 0.5).is_err());
        assert!(me_combined(&net, a, b, 1, 2.0).is_err());
    }

    #[test]
    fn aggregate_unrestricted_keeps_every_connected_pair() {
        let net = five_user_network();
        let g = aggregate_graph(&net, &AggregationParams::unrestricted());
        assert_eq!(g.edge_count(), net.pair_count());
        for e in g.edges() {
            assert_eq!(e.distance, distance(&net, e.src, e.dst).unwrap());
        }
    }

    #[test]
    fn aggregate_impossible_alpha_is_empty() {
        let net = five_user_network();
        let g = aggregate_graph(&net, &AggregationParams::combined(4, 1.0).unwrap());
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn aggregate_alpha_three_out_edges() {
        let net = five_user_network();
        let g = aggregate_graph(&net, &AggregationParams::combined(3, 1.0).unwrap());
        let xi = g.index_of(X).unwrap();
        let out: Vec<NodeId> = g.out_edges(xi).map(|(t, _)| g.node_ids()[t]).collect();
        assert_eq!(out, vec![Y, Z]);
        assert!(g.edge(X, V).is_none());
        assert_eq!(g.edge(X, Y).unwrap().layer_count, 3);
    }

    #[test]
    fn beta_zero_admits_only_full_weight() {
        let mut b = NetworkBuilder::with_layers(1).unwrap();
        b.add_edge(LayeredEdge::new(1, 2, LayerId(0), 1.0)).unwrap();
        b.add_edge(LayeredEdge::new(2, 3, LayerId(0), 0.999)).unwrap();
        let net = b.seal().unwrap();
        let g = aggregate_graph(&net, &AggregationParams::distance_only(0.0).unwrap());
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge(NodeId(1), NodeId(2)).unwrap().distance, 0.0);
    }

    #[test]
    fn mode_ignores_other_threshold() {
        let p = AggregationParams::new(3, 0.0, AggregationMode::LayersOnly).unwrap();
        assert!(p.admits(3, 0.9));
        let p = AggregationParams::new(3, 0.5, AggregationMode::DistanceOnly).unwrap();
        assert!(p.admits(1, 0.5));
        assert!(!p.admits(1, 0.51));
        assert!(!p.admits(0, 0.0));
    }
}
