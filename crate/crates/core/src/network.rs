//! Multi-layered directed networks.
//!
//! A network is assembled with [`NetworkBuilder`] and then sealed into an
//! immutable [`MultiLayeredNetwork`]. Every algorithm in this crate works on
//! the sealed form, which is `Send + Sync` and can be shared freely between
//! threads.
//!
//! In the sealed form each node is addressed by a dense index (its rank in
//! ascending [`NodeId`] order). Outgoing node pairs are stored in CSR layout
//! sorted by target; every pair carries a bitmask of the layers it occurs on
//! and one weight slot per layer (absent layers hold `0.0`).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of layers; the per-pair layer set is a `u64` mask.
pub const MAX_LAYERS: usize = 64;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for NodeId {
    fn from(id: u64) -> Self {
        NodeId(id)
    }
}

/// Dense layer index in `[0, layer_count)`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct LayerId(pub u16);

impl LayerId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for LayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// How raw edge weights relate to distance.
///
/// `Positive` weights measure closeness and are turned into distances by
/// subtracting from one; `Negative` weights already measure distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    #[default]
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicatePolicy {
    /// Reject a second edge on the same (src, dst, layer) triple.
    #[default]
    Error,
    /// Keep the larger of the two weights.
    KeepMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LayeredEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub layer: LayerId,
    pub weight: f64,
}

impl LayeredEdge {
    pub fn new(src: impl Into<NodeId>, dst: impl Into<NodeId>, layer: LayerId, weight: f64) -> Self {
        LayeredEdge {
            src: src.into(),
            dst: dst.into(),
            layer,
            weight,
        }
    }
}

pub(crate) fn check_weight(weight: f64) -> Result<()> {
    if (0.0..=1.0).contains(&weight) {
        Ok(())
    } else {
        Err(Error::WeightOutOfRange(weight))
    }
}

/// Mutable construction phase of a network. Single writer.
#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    labels: Vec<String>,
    label_index: HashMap<String, LayerId>,
    nodes: BTreeSet<NodeId>,
    // (src, dst) -> per-layer weights, sorted by layer
    pairs: BTreeMap<(NodeId, NodeId), Vec<(LayerId, f64)>>,
    polarity: Polarity,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// A builder with `count` layers labelled `l1`, `l2`, ...
    pub fn with_layers(count: usize) -> Result<Self> {
        let mut builder = Self::new();
        for i in 1..=count {
            builder.add_layer(format!("l{i}"))?;
        }
        Ok(builder)
    }

    pub fn polarity(mut self, polarity: Polarity) -> Self {
        self.polarity = polarity;
        self
    }

    pub fn set_polarity(&mut self, polarity: Polarity) {
        self.polarity = polarity;
    }

    pub fn add_layer(&mut self, label: impl Into<String>) -> Result<LayerId> {
        let label = label.into();
        if self.label_index.contains_key(&label) {
            return Err(Error::DuplicateLayer(label));
        }
        if self.labels.len() >= MAX_LAYERS {
            return Err(Error::TooManyLayers);
        }
        let id = LayerId(self.labels.len() as u16);
        self.label_index.insert(label.clone(), id);
        self.labels.push(label);
        Ok(id)
    }

    /// Looks up a layer by label, registering it if it is new.
    pub fn layer_or_insert(&mut self, label: &str) -> Result<LayerId> {
        match self.label_index.get(label) {
            Some(&id) => Ok(id),
            None => self.add_layer(label),
        }
    }

    pub fn layer_by_label(&self, label: &str) -> Option<LayerId> {
        self.label_index.get(label).copied()
    }

    pub fn layer_count(&self) -> usize {
        self.labels.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Registers a node that may have no edges.
    pub fn add_node(&mut self, id: impl Into<NodeId>) {
        self.nodes.insert(id.into());
    }

    pub fn add_edge(&mut self, edge: LayeredEdge) -> Result<()> {
        self.insert_edge(edge, DuplicatePolicy::Error).map(|_| ())
    }

    /// Inserts an edge, auto-registering its endpoints.
    ///
    /// Returns `false` when a duplicate was resolved by the policy without
    /// changing the stored weight.
    pub fn insert_edge(&mut self, edge: LayeredEdge, policy: DuplicatePolicy) -> Result<bool> {
        if edge.src == edge.dst {
            return Err(Error::LoopEdge(edge.src));
        }
        check_weight(edge.weight)?;
        if edge.layer.index() >= self.labels.len() {
            return Err(Error::UnknownLayer(edge.layer));
        }

        let slots = self.pairs.entry((edge.src, edge.dst)).or_default();
        match slots.binary_search_by_key(&edge.layer, |&(l, _)| l) {
            Ok(pos) => match policy {
                DuplicatePolicy::Error => {
                    return Err(Error::DuplicateEdge {
                        src: edge.src,
                        dst: edge.dst,
                        layer: edge.layer,
                    });
                }
                DuplicatePolicy::KeepMax => {
                    if edge.weight > slots[pos].1 {
                        slots[pos].1 = edge.weight;
                        return Ok(true);
                    }
                    return Ok(false);
                }
            },
            Err(pos) => slots.insert(pos, (edge.layer, edge.weight)),
        }
        self.nodes.insert(edge.src);
        self.nodes.insert(edge.dst);
        Ok(true)
    }

    /// Freezes the builder into an immutable network.
    pub fn seal(self) -> Result<MultiLayeredNetwork> {
        if self.labels.is_empty() {
            return Err(Error::NoLayers);
        }
        if self.nodes.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let layer_count = self.labels.len();
        let node_ids: Vec<NodeId> = self.nodes.into_iter().collect();
        let index_of = |id: NodeId| node_ids.binary_search(&id).expect("registered node") as u32;

        let mut offsets = Vec::with_capacity(node_ids.len() + 1);
        let mut targets = Vec::with_capacity(self.pairs.len());
        let mut masks = Vec::with_capacity(self.pairs.len());
        let mut weights = Vec::with_capacity(self.pairs.len() * layer_count);
        let mut layer_edges = vec![0usize; layer_count];

        // BTreeMap iteration is ordered by (src, dst), which is CSR order.
        let mut pairs = self.pairs.into_iter().peekable();
        offsets.push(0);
        for &src in &node_ids {
            while let Some(((_, dst), slots)) = pairs.next_if(|((s, _), _)| *s == src) {
                let mut mask = 0u64;
                let base = weights.len();
                weights.resize(base + layer_count, 0.0);
                for (layer, w) in slots {
                    mask |= 1 << layer.0;
                    weights[base + layer.index()] = w;
                    layer_edges[layer.index()] += 1;
                }
                targets.push(index_of(dst));
                masks.push(mask);
            }
            offsets.push(targets.len());
        }

        Ok(MultiLayeredNetwork {
            node_ids: node_ids.into(),
            labels: self.labels,
            polarity: self.polarity,
            offsets,
            targets,
            masks,
            weights,
            layer_edges,
        })
    }
}

/// Sealed, immutable multi-layered network.
#[derive(Debug, Clone)]
pub struct MultiLayeredNetwork {
    node_ids: Arc<[NodeId]>,
    labels: Vec<String>,
    polarity: Polarity,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    masks: Vec<u64>,
    weights: Vec<f64>,
    layer_edges: Vec<usize>,
}

/// All layered edges between one ordered node pair.
#[derive(Debug, Clone, Copy)]
pub struct PairView<'a> {
    pub target: usize,
    pub mask: u64,
    /// One slot per layer, `0.0` where the layer has no edge.
    pub weights: &'a [f64],
}

impl PairView<'_> {
    /// Number of layers this pair has an edge on.
    pub fn layer_count(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn has_layer(&self, layer: LayerId) -> bool {
        self.mask & (1 << layer.0) != 0
    }
}

impl MultiLayeredNetwork {
    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn layer_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of ordered node pairs joined on at least one layer.
    pub fn pair_count(&self) -> usize {
        self.targets.len()
    }

    /// Total number of layered edges.
    pub fn edge_count(&self) -> usize {
        self.layer_edges.iter().sum()
    }

    pub fn layer_edge_counts(&self) -> &[usize] {
        &self.layer_edges
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    /// Node ids in ascending order; position equals dense index.
    pub fn node_ids(&self) -> &[NodeId] {
        &self.node_ids
    }

    pub(crate) fn shared_node_ids(&self) -> Arc<[NodeId]> {
        Arc::clone(&self.node_ids)
    }

    pub fn node_id(&self, index: usize) -> NodeId {
        self.node_ids[index]
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.node_ids.binary_search(&id).ok()
    }

    pub fn require_index(&self, id: NodeId) -> Result<usize> {
        self.index_of(id).ok_or(Error::UnknownNode(id))
    }

    pub fn contains_node(&self, id: NodeId) -> bool {
        self.index_of(id).is_some()
    }

    pub fn layers(&self) -> impl Iterator<Item = LayerId> {
        (0..self.labels.len() as u16).map(LayerId)
    }

    pub fn layer_label(&self, layer: LayerId) -> Option<&str> {
        self.labels.get(layer.index()).map(String::as_str)
    }

    pub fn layer_labels(&self) -> &[String] {
        &self.labels
    }

    fn check_layer(&self, layer: LayerId) -> Result<()> {
        if layer.index() < self.labels.len() {
            Ok(())
        } else {
            Err(Error::UnknownLayer(layer))
        }
    }

    fn pair(&self, slot: usize) -> PairView<'_> {
        let l = self.labels.len();
        PairView {
            target: self.targets[slot] as usize,
            mask: self.masks[slot],
            weights: &self.weights[slot * l..(slot + 1) * l],
        }
    }

    /// Outgoing pairs of the node at dense index `src`, in ascending target order.
    pub fn pairs_from(&self, src: usize) -> impl ExactSizeIterator<Item = PairView<'_>> + '_ {
        (self.offsets[src]..self.offsets[src + 1]).map(move |slot| self.pair(slot))
    }

    /// The pair `src -> dst` by dense index, if any layered edge joins them.
    pub fn find_pair(&self, src: usize, dst: usize) -> Option<PairView<'_>> {
        let range = self.offsets[src]..self.offsets[src + 1];
        let row = &self.targets[range.clone()];
        row.binary_search(&(dst as u32))
            .ok()
            .map(|pos| self.pair(range.start + pos))
    }

    /// Weight of `⟨x, y, layer⟩`, or `None` when that edge does not exist.
    pub fn weight(&self, x: NodeId, y: NodeId, layer: LayerId) -> Result<Option<f64>> {
        let (xi, yi) = (self.require_index(x)?, self.require_index(y)?);
        self.check_layer(layer)?;
        Ok(self
            .find_pair(xi, yi)
            .filter(|p| p.has_layer(layer))
            .map(|p| p.weights[layer.index()]))
    }

    /// Number of layers on which `x -> y` exists.
    pub fn layer_multiplicity(&self, x: NodeId, y: NodeId) -> Result<u32> {
        let (xi, yi) = (self.require_index(x)?, self.require_index(y)?);
        Ok(self.find_pair(xi, yi).map_or(0, |p| p.layer_count()))
    }

    /// Out-neighbours of `x` restricted to a single layer.
    pub fn out_neighbors(&self, x: NodeId, layer: LayerId) -> Result<Vec<NodeId>> {
        let xi = self.require_index(x)?;
        self.check_layer(layer)?;
        Ok(self
            .pairs_from(xi)
            .filter(|p| p.has_layer(layer))
            .map(|p| self.node_ids[p.target])
            .collect())
    }

    /// Nodes that `x` points to on at least `alpha` layers.
    pub fn multi_neighborhood_out(&self, x: NodeId, alpha: u32) -> Result<Vec<NodeId>> {
        if alpha < 1 {
            return Err(Error::InvalidAlpha(alpha));
        }
        let xi = self.require_index(x)?;
        Ok(self
            .multi_neighborhood_indices(xi, alpha)
            .map(|p| self.node_ids[p.target])
            .collect())
    }

    pub(crate) fn multi_neighborhood_indices(
        &self,
        src: usize,
        alpha: u32,
    ) -> impl Iterator<Item = PairView<'_>> + '_ {
        self.pairs_from(src).filter(move |p| p.layer_count() >= alpha)
    }

    /// Every layered edge, ordered by (src, dst, layer).
    pub fn edges(&self) -> impl Iterator<Item = LayeredEdge> + '_ {
        (0..self.node_count()).flat_map(move |src| {
            self.pairs_from(src).flat_map(move |p| {
                self.layers().filter(move |&l| p.has_layer(l)).map(move |l| LayeredEdge {
                    src: self.node_ids[src],
                    dst: self.node_ids[p.target],
                    layer: l,
                    weight: p.weights[l.index()],
                })
            })
        })
    }

    /// Rebuilds an editable builder holding the same content.
    pub fn to_builder(&self) -> NetworkBuilder {
        let mut b = NetworkBuilder::new().polarity(self.polarity);
        for label in &self.labels {
            b.add_layer(label.clone()).expect("labels are unique");
        }
        for &id in self.node_ids.iter() {
            b.add_node(id);
        }
        for e in self.edges() {
            b.add_edge(e).expect("sealed edges are valid");
        }
        b
    }
}
