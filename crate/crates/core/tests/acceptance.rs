//! Acceptance suite. Runs each criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any failed.
//!
//! `cargo test -p mlsp --test acceptance`

mod common;

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rayon::prelude::*;

use mlsp::bench::{run_bench, BenchConfig};
use mlsp::generate::{generate, GeneratorConfig};
use mlsp::{
    dap_sssp, distance, edge_count_sweep, mda_sssp, ml_floyd_warshall, AggregationParams,
    LayerId, LayeredEdge, MultiLayeredNetwork, NetworkBuilder, NodeId,
};

use common::{enumerate_simple_paths, lengths_close, reference_edges, textbook_dijkstra};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const ALPHAS: [u32; 3] = [1, 2, 3];
const BETAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
const SWEEP_BETAS: [f64; 6] = [1.0, 0.975, 0.875, 0.667, 0.5, 0.333];

fn grid(alphas: &[u32], betas: &[f64]) -> Vec<AggregationParams> {
    alphas
        .iter()
        .flat_map(|&a| betas.iter().map(move |&b| AggregationParams::combined(a, b).unwrap()))
        .collect()
}

fn net(nodes: usize, layers: usize, density: f64, seed: u64) -> MultiLayeredNetwork {
    generate(&GeneratorConfig::new(nodes, layers, density, seed)).unwrap()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dap_equals_mda() -> Outcome {
    let params = grid(&ALPHAS, &BETAS);
    let sizes = [20, 100, 200];
    let searches: usize = (0..200u64)
        .into_par_iter()
        .map(|i| -> Result<usize, String> {
            let n = net(sizes[i as usize % 3], 3, 0.05, 1000 + i);
            let mut count = 0;
            for p in &params {
                for &s in n.node_ids() {
                    let a = dap_sssp(&n, s, p).unwrap();
                    let b = mda_sssp(&n, s, p).unwrap();
                    check(lengths_close(a.lengths(), b.lengths(), 1e-12), || {
                        format!("network {i}, source {s}, alpha {}, beta {}", p.alpha(), p.beta())
                    })?;
                    count += 1;
                }
            }
            Ok(count)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    Ok(format!("200 networks, {searches} source/threshold combinations"))
}

fn matches_enumeration() -> Outcome {
    let params = grid(&ALPHAS, &BETAS);
    let mut compared = 0;
    for i in 0..500u64 {
        let nodes = 2 + (i % 6) as usize;
        let layers = 1 + (i / 6 % 3) as usize;
        let density = [0.3, 0.5, 0.8][(i / 18 % 3) as usize];
        let n = net(nodes, layers, density, 5000 + i);
        for p in &params {
            let edges = reference_edges(&n, p.alpha(), p.beta());
            for &s in n.node_ids() {
                let expected = enumerate_simple_paths(n.node_ids(), &edges, s);
                let got = dap_sssp(&n, s, p).unwrap();
                check(lengths_close(got.lengths(), &expected, 1e-12), || {
                    format!("network {i}, source {s}, alpha {}, beta {}", p.alpha(), p.beta())
                })?;
                compared += 1;
            }
        }
    }
    Ok(format!("500 networks, {compared} searches"))
}

fn single_layer_reduction() -> Outcome {
    let mut targets = 0;
    for i in 0..50u64 {
        let nodes = 10 + 4 * i as usize;
        let n = net(nodes, 1, 4.0 / nodes as f64, 9000 + i);
        // generated ids are 0..nodes, so id == index
        let edges: Vec<(usize, usize, f64)> = n
            .edges()
            .map(|e| (e.src.0 as usize, e.dst.0 as usize, 1.0 - e.weight))
            .collect();
        let p = AggregationParams::combined(1, 1.0).unwrap();
        for s in 0..nodes {
            let got = dap_sssp(&n, NodeId(s as u64), &p).unwrap();
            let expected = textbook_dijkstra(nodes, &edges, s);
            check(got.lengths() == expected.as_slice(), || {
                format!("network {i}, source {s}")
            })?;
            targets += nodes;
        }
    }
    Ok(format!("50 networks, {targets} source-target lengths identical"))
}

fn apsp_consistency() -> Outcome {
    let params = [
        AggregationParams::unrestricted(),
        AggregationParams::combined(2, 0.75).unwrap(),
    ];
    let mut entries = 0;
    for i in 0..20u64 {
        let nodes = 10 + 90 * i as usize / 19;
        let n = net(nodes, 3, 0.08, 12000 + i);
        for p in &params {
            let m = ml_floyd_warshall(&n, p, 100).unwrap();
            for (row, &s) in n.node_ids().iter().enumerate() {
                let r = dap_sssp(&n, s, p).unwrap();
                let fw: Vec<Option<f64>> = m.row(row).collect();
                check(lengths_close(&fw, r.lengths(), 1e-12), || {
                    format!("network {i}, row {s}, alpha {}", p.alpha())
                })?;
                entries += fw.len();
            }
        }
    }
    Ok(format!("20 networks, {entries} matrix entries"))
}

fn threshold_monotonicity() -> Outcome {
    let cells = grid(&ALPHAS, &SWEEP_BETAS);
    for i in 0..20u64 {
        let n = net(120, 3, 0.04, 15000 + i);
        let report = edge_count_sweep(&n, &ALPHAS, &SWEEP_BETAS).map_err(|e| e.to_string())?;
        let sources: Vec<NodeId> = n.node_ids().iter().copied().step_by(12).collect();
        let mut counts = BTreeMap::new();
        let mut lengths = BTreeMap::new();
        for p in &cells {
            let key = (p.alpha(), p.beta().to_bits());
            let edge_count = report.cell(p.alpha(), p.beta()).unwrap().edge_count;
            check(edge_count == reference_edges(&n, p.alpha(), p.beta()).len(), || {
                format!("network {i}: sweep count differs from reference at {key:?}")
            })?;
            counts.insert(key, edge_count);
            let rows: Vec<Vec<Option<f64>>> = sources
                .iter()
                .map(|&s| dap_sssp(&n, s, p).unwrap().lengths().to_vec())
                .collect();
            lengths.insert(key, rows);
        }
        for a in &cells {
            for b in &cells {
                // b is at least as strict as a
                if b.alpha() < a.alpha() || b.beta() > a.beta() {
                    continue;
                }
                let (ka, kb) = ((a.alpha(), a.beta().to_bits()), (b.alpha(), b.beta().to_bits()));
                let tag = || format!("network {i}: ({},{}) vs ({},{})", a.alpha(), a.beta(), b.alpha(), b.beta());
                check(counts[&kb] <= counts[&ka], || format!("{} edge count", tag()))?;
                for (ra, rb) in lengths[&ka].iter().zip(&lengths[&kb]) {
                    check(common::reachable_count(rb) <= common::reachable_count(ra), || {
                        format!("{} reachable size", tag())
                    })?;
                    for (la, lb) in ra.iter().zip(rb) {
                        if let Some(lb) = lb {
                            check(la.is_some_and(|la| *lb >= la), || format!("{} length", tag()))?;
                        }
                    }
                }
            }
        }
    }
    Ok("20 networks, 18-cell grid, all pairwise comparisons hold".into())
}

fn distance_spot_checks() -> Outcome {
    let mut b = NetworkBuilder::with_layers(3).unwrap();
    b.add_edge(LayeredEdge::new(1, 2, LayerId(0), 0.8)).unwrap();
    b.add_edge(LayeredEdge::new(1, 2, LayerId(1), 0.5)).unwrap();
    for l in 0..3 {
        b.add_edge(LayeredEdge::new(2, 3, LayerId(l), 1.0)).unwrap();
    }
    let n = b.seal().unwrap();
    let partial = distance(&n, NodeId(1), NodeId(2)).unwrap();
    check((partial - 17.0 / 30.0).abs() <= 1e-15, || format!("partial pair gave {partial}"))?;
    let none = distance(&n, NodeId(3), NodeId(1)).unwrap();
    check(none == 1.0, || format!("unconnected pair gave {none}"))?;
    let full = distance(&n, NodeId(2), NodeId(3)).unwrap();
    check(full == 0.0, || format!("all-ones pair gave {full}"))?;
    Ok(format!("{partial:.17}, {none}, {full}"))
}

fn bench_runs() -> Outcome {
    let n = net(10_000, 3, 0.0005, 20000);
    let config = BenchConfig {
        sources: n.node_ids().iter().copied().step_by(2000).collect(),
        params: vec![
            AggregationParams::unrestricted(),
            AggregationParams::combined(2, 0.75).unwrap(),
        ],
        repeats: 3,
    };
    let report = run_bench(&n, &config).map_err(|e| e.to_string())?;
    let text = report.to_string();
    for phase in ["dap_aggregate", "dap_search", "dap_total", "mda_total"] {
        check(text.contains(phase), || format!("report lacks {phase}"))?;
    }
    check(report.results_agree, || "strategies disagreed".into())?;
    Ok(format!(
        "{} layered edges, dap median {:.4}s, mda median {:.4}s",
        report.layered_edges, report.dap_total.median, report.mda_total.median
    ))
}

fn cli_paths() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_mlsp"))
            .args(args)
            .output()
            .unwrap()
    };
    let file = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    for (name, text, needle) in [
        ("loop", "src,dst,layer,weight\n1,2,a,0.5\n2,2,a,0.5\n", "loop edge"),
        ("dup", "src,dst,layer,weight\n1,2,a,0.5\n1,2,a,0.6\n", "duplicate edge"),
        ("range", "src,dst,layer,weight\n1,2,a,-0.1\n", "outside [0, 1]"),
    ] {
        let o = run(&["load-summary", "-i", &file(name, text)]);
        let err = String::from_utf8_lossy(&o.stderr);
        check(o.status.code() == Some(3) && err.contains(needle), || {
            format!("{name}: exit {:?}, stderr {err}", o.status.code())
        })?;
    }

    let gen = dir.path().join("g.csv").to_str().unwrap().to_string();
    let o = run(&["generate", "--nodes", "80", "--layers", "3", "--density", "0.05", "--seed", "1", "-o", &gen]);
    check(o.status.success(), || "generate failed".into())?;
    let n = mlsp::io::load_edge_list(&gen, &Default::default()).map_err(|e| e.to_string())?;
    check(n.node_count() == 80 && n.layer_count() == 3, || "reloaded shape differs".into())?;

    let a = run(&["sssp", "-i", &gen, "--source", "9,2,40", "--alphas", "1,2", "--betas", "1,0.6", "--paths", "--jobs", "1"]);
    let b = run(&["sssp", "-i", &gen, "--source", "40,9,2", "--alphas", "1,2", "--betas", "1,0.6", "--paths", "--jobs", "4"]);
    check(a.status.success() && a.stdout == b.stdout, || "sssp output not deterministic".into())?;
    let x = run(&["aggregate-export", "-i", &gen, "--alpha", "2"]);
    let y = run(&["aggregate-export", "-i", &gen, "--alpha", "2"]);
    check(x.status.success() && x.stdout == y.stdout, || "export output not deterministic".into())?;
    Ok("rejections exit 3, outputs byte-identical across runs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("dap and mda agree on generated networks", dap_equals_mda),
        ("dap matches simple-path enumeration", matches_enumeration),
        ("one-layer dap equals textbook dijkstra", single_layer_reduction),
        ("floyd-warshall equals repeated dap", apsp_consistency),
        ("threshold monotonicity", threshold_monotonicity),
        ("distance spot checks", distance_spot_checks),
        ("benchmark on 10k nodes", bench_runs),
        ("cli round-trip and error paths", cli_paths),
    ];
    std::panic::set_hook(Box::new(|info| eprintln!("{info}")));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
