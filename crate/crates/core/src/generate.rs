//! Random multi-layered networks for tests and benchmarks.
//!
//! Each layer is an independent directed G(n, p): every ordered pair of
//! distinct nodes carries an edge with probability `density`. Pairs are
//! sampled with geometric skips, so the cost is proportional to the number
//! of edges rather than `n²`. Weights are uniform on the grid
//! `{1e-9, 2e-9, ..., 1}`, which keeps them exactly representable in the
//! CSV edge-list format.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{LayerId, LayeredEdge, MultiLayeredNetwork, NetworkBuilder, NodeId, Polarity};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub nodes: usize,
    pub layers: usize,
    /// Per-layer probability of each ordered pair being joined.
    pub density: f64,
    pub seed: u64,
    pub polarity: Polarity,
}

impl GeneratorConfig {
    pub fn new(nodes: usize, layers: usize, density: f64, seed: u64) -> Self {
        GeneratorConfig {
            nodes,
            layers,
            density,
            seed,
            polarity: Polarity::Positive,
        }
    }
}

/// Generates a sealed network with node ids `0..nodes` and layers `l1..`.
pub fn generate(config: &GeneratorConfig) -> Result<MultiLayeredNetwork> {
    if config.nodes == 0 {
        return Err(Error::EmptyNetwork);
    }
    if !(0.0..=1.0).contains(&config.density) {
        return Err(Error::InvalidArgument(format!(
            "density must lie in [0, 1], got {}",
            config.density
        )));
    }
    if config.layers == 0 {
        return Err(Error::NoLayers);
    }
    let mut b = NetworkBuilder::with_layers(config.layers)?.polarity(config.polarity);
    let n = config.nodes as u64;
    for id in 0..n {
        b.add_node(id);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let slots = n * (n - 1);
    for layer in 0..config.layers {
        let layer = LayerId(layer as u16);
        for k in sample_indices(&mut rng, slots, config.density) {
            let src = k / (n - 1);
            let j = k % (n - 1);
            let dst = if j < src { j } else { j + 1 };
            let weight = grid_weight(rng.gen::<f64>());
            b.add_edge(LayeredEdge::new(NodeId(src), NodeId(dst), layer, weight))?;
        }
    }
    b.seal()
}

const WEIGHT_STEPS: f64 = 1e9;

fn grid_weight(u: f64) -> f64 {
    ((1.0 - u) * WEIGHT_STEPS).round().max(1.0) / WEIGHT_STEPS
}

/// Indices in `0..len` kept independently with probability `p`, ascending.
fn sample_indices(rng: &mut impl Rng, len: u64, p: f64) -> Vec<u64> {
    if len == 0 || p <= 0.0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..len).collect();
    }
    let log_q = (1.0 - p).ln();
    let mut out = Vec::with_capacity((len as f64 * p * 1.1) as usize + 8);
    let mut k: u64 = 0;
    loop {
        // u in (0, 1]
        let u = 1.0 - rng.gen::<f64>();
        let skip = (u.ln() / log_q).floor();
        if !skip.is_finite() || skip >= (len - k) as f64 {
            break;
        }
        k += skip as u64;
        out.push(k);
        k += 1;
        if k >= len {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_seed() {
        let c = GeneratorConfig::new(50, 3, 0.05, 7);
        let a: Vec<_> = generate(&c).unwrap().edges().collect();
        let b: Vec<_> = generate(&c).unwrap().edges().collect();
        assert_eq!(a, b);
        let other: Vec<_> = generate(&GeneratorConfig { seed: 8, ..c }).unwrap().edges().collect();
        assert_ne!(a, other);
    }

    #[test]
    fn density_extremes() {
        let empty = generate(&GeneratorConfig::new(10, 2, 0.0, 1)).unwrap();
        assert_eq!(empty.node_count(), 10);
        assert_eq!(empty.edge_count(), 0);
        let full = generate(&GeneratorConfig::new(6, 2, 1.0, 1)).unwrap();
        assert_eq!(full.edge_count(), 2 * 6 * 5);
        let single = generate(&GeneratorConfig::new(1, 1, 0.5, 1)).unwrap();
        assert_eq!(single.edge_count(), 0);
    }

    #[test]
    fn expected_edge_count() {
        let c = GeneratorConfig::new(400, 3, 0.05, 11);
        let net = generate(&c).unwrap();
        let expected = 0.05 * 400.0 * 399.0;
        for &count in net.layer_edge_counts() {
            // about 6 standard deviations
            assert!((count as f64 - expected).abs() < 6.0 * expected.sqrt(), "{count}");
        }
        for e in net.edges() {
            assert!(e.weight > 0.0 && e.weight <= 1.0);
            assert_ne!(e.src, e.dst);
        }
    }

    #[test]
    fn rejects_bad_config() {
        assert!(generate(&GeneratorConfig::new(0, 1, 0.1, 1)).is_err());
        assert!(generate(&GeneratorConfig::new(5, 0, 0.1, 1)).is_err());
        assert!(generate(&GeneratorConfig::new(5, 1, 1.5, 1)).is_err());
    }
}
