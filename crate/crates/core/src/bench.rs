//! Wall-clock comparison of the two single-source strategies.
//!
//! One repetition runs the same workload (every source under every parameter
//! set) once with DAP and once with MDA. DAP's aggregation is timed as its own
//! phase and also counted in its total. Timings are informational only.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::aggregate::{aggregate_graph, AggregationParams};
use crate::error::{Error, Result};
use crate::network::{MultiLayeredNetwork, NodeId};
use crate::shortest_path::{dijkstra, mda_sssp};

pub const MIN_REPEATS: usize = 3;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sources: Vec<NodeId>,
    pub params: Vec<AggregationParams>,
    pub repeats: usize,
}

/// Median and spread of one timed phase, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseTiming {
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl PhaseTiming {
    fn from_samples(samples: &[Duration]) -> Self {
        let mut secs: Vec<f64> = samples.iter().map(Duration::as_secs_f64).collect();
        secs.sort_by(f64::total_cmp);
        let mid = secs.len() / 2;
        let median = if secs.len().is_multiple_of(2) {
            (secs[mid - 1] + secs[mid]) / 2.0
        } else {
            secs[mid]
        };
        PhaseTiming {
            median,
            min: secs[0],
            max: secs[secs.len() - 1],
        }
    }

    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub nodes: usize,
    pub layers: usize,
    pub layered_edges: usize,
    pub sources: usize,
    pub param_sets: usize,
    pub repeats: usize,
    pub dap_aggregate: PhaseTiming,
    pub dap_search: PhaseTiming,
    pub dap_total: PhaseTiming,
    pub mda_total: PhaseTiming,
    /// `(mda - dap) / dap` on total medians, in percent.
    pub mda_overhead_pct: f64,
    /// Whether both strategies produced the same lengths on the first repetition.
    pub results_agree: bool,
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "network: {} nodes, {} layers, {} layered edges",
            self.nodes, self.layers, self.layered_edges
        )?;
        writeln!(
            f,
            "workload: {} sources x {} parameter sets, {} repeats",
            self.sources, self.param_sets, self.repeats
        )?;
        writeln!(f, "phase\tmedian_s\tmin_s\tmax_s")?;
        for (name, t) in [
            ("dap_aggregate", &self.dap_aggregate),
            ("dap_search", &self.dap_search),
            ("dap_total", &self.dap_total),
            ("mda_total", &self.mda_total),
        ] {
            writeln!(f, "{name}\t{:.6}\t{:.6}\t{:.6}", t.median, t.min, t.max)?;
        }
        writeln!(f, "mda_overhead_pct\t{:.2}", self.mda_overhead_pct)?;
        write!(f, "results_agree\t{}", self.results_agree)
    }
}

pub fn run_bench(net: &MultiLayeredNetwork, config: &BenchConfig) -> Result<BenchReport> {
    if config.repeats < MIN_REPEATS {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_REPEATS} repeats are required, got {}",
            config.repeats
        )));
    }
    if config.sources.is_empty() || config.params.is_empty() {
        return Err(Error::InvalidArgument(
            "benchmark needs at least one source and one parameter set".into(),
        ));
    }
    for &s in &config.sources {
        net.require_index(s)?;
    }

    let mut aggregate = Vec::with_capacity(config.repeats);
    let mut search = Vec::with_capacity(config.repeats);
    let mut dap = Vec::with_capacity(config.repeats);
    let mut mda = Vec::with_capacity(config.repeats);
    let mut results_agree = true;

    for rep in 0..config.repeats {
        let mut agg_time = Duration::ZERO;
        let mut search_time = Duration::ZERO;
        let mut dap_lengths = Vec::new();
        for p in &config.params {
            let t = Instant::now();
            let graph = aggregate_graph(net, p);
            agg_time += t.elapsed();
            let t = Instant::now();
            for &s in &config.sources {
                let r = dijkstra(&graph, s)?;
                if rep == 0 {
                    dap_lengths.push(r.lengths().to_vec());
                }
            }
            search_time += t.elapsed();
        }
        aggregate.push(agg_time);
        search.push(search_time);
        dap.push(agg_time + search_time);

        let t = Instant::now();
        let mut mda_lengths = Vec::new();
        for p in &config.params {
            for &s in &config.sources {
                let r = mda_sssp(net, s, p)?;
                if rep == 0 {
                    mda_lengths.push(r.lengths().to_vec());
                }
            }
        }
        mda.push(t.elapsed());

        if rep == 0 {
            results_agree = dap_lengths.iter().zip(&mda_lengths).all(|(a, b)| {
                a.iter().zip(b).all(|(x, y)| match (x, y) {
                    (Some(x), Some(y)) => (x - y).abs() <= 1e-12,
                    (None, None) => true,
                    _ => false,
                })
            });
        }
    }

    let dap_total = PhaseTiming::from_samples(&dap);
    let mda_total = PhaseTiming::from_samples(&mda);
    let mda_overhead_pct = if dap_total.median > 0.0 {
        (mda_total.median - dap_total.median) / dap_total.median * 100.0
    } else {
        0.0
    };
    Ok(BenchReport {
        nodes: net.node_count(),
        layers: net.layer_count(),
        layered_edges: net.edge_count(),
        sources: config.sources.len(),
        param_sets: config.params.len(),
        repeats: config.repeats,
        dap_aggregate: PhaseTiming::from_samples(&aggregate),
        dap_search: PhaseTiming::from_samples(&search),
        dap_total,
        mda_total,
        mda_overhead_pct,
        results_agree,
    })
}
