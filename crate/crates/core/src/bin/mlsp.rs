//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 usage error,
//! 3 malformed or invalid input data, 4 size guard exceeded.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use mlsp::analytics::{self, PATH_STATS_HEADER};
use mlsp::bench::{run_bench, BenchConfig};
use mlsp::generate::{generate, GeneratorConfig};
use mlsp::io::{load_edge_list, write_aggregated, write_edge_list, LoadOptions, LoadSummary};
use mlsp::shortest_path::{DEFAULT_APSP_MAX_NODES, ml_floyd_warshall, repeated_dijkstra_apsp};
use mlsp::{
    aggregate_graph, AggregationMode, AggregationParams, Algorithm, DistanceMatrix,
    DuplicatePolicy, Error, MultiLayeredNetwork, NodeId, PathStats, Polarity,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_GUARD: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "mlsp", version, about = "Shortest paths in multi-layered networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print node and per-layer edge counts of an edge list.
    LoadSummary {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Single-source shortest paths and path statistics.
    Sssp {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        /// Source node ids (comma separated or repeated).
        #[arg(long, value_delimiter = ',', required = true)]
        source: Vec<u64>,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Mda)]
        algorithm: AlgorithmArg,
        /// Also emit every shortest path.
        #[arg(long)]
        paths: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// All-pairs shortest path lengths.
    Apsp {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(long, value_enum, default_value_t = Strategy::FloydWarshall)]
        strategy: Strategy,
        /// Compute with both strategies and fail if they disagree.
        #[arg(long)]
        cross_check: bool,
        #[arg(long, default_value_t = DEFAULT_APSP_MAX_NODES)]
        max_nodes: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Aggregated edge counts over an (alpha, beta) grid.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        betas: Vec<f64>,
        /// Optional sources to compute path statistics for in every cell.
        #[arg(long, value_delimiter = ',')]
        source: Vec<u64>,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Mda)]
        algorithm: AlgorithmArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Time DAP against MDA on the same workload.
    Bench {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(long, value_delimiter = ',')]
        source: Vec<u64>,
        /// Number of evenly spaced sources when --source is not given.
        #[arg(long, default_value_t = 10)]
        sample: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write a random multi-layered edge list.
    Generate {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 3)]
        layers: usize,
        /// Per-layer probability of each ordered pair being joined.
        #[arg(long)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write the aggregated graph as CSV.
    AggregateExport {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Edge list with header `src,dst,layer,weight`.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = PolarityArg::Positive)]
    polarity: PolarityArg,
    #[arg(long, value_enum, default_value_t = DuplicateArg::Error)]
    on_duplicate: DuplicateArg,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[arg(long, default_value_t = 1)]
    alpha: u32,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Alpha grid; overrides --alpha.
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<u32>,
    /// Beta grid; overrides --beta.
    #[arg(long, value_delimiter = ',')]
    betas: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Combined)]
    mode: ModeArg,
}

impl ThresholdArgs {
    fn grid(&self) -> Result<Vec<AggregationParams>, Error> {
        let alphas = if self.alphas.is_empty() { vec![self.alpha] } else { self.alphas.clone() };
        let betas = if self.betas.is_empty() { vec![self.beta] } else { self.betas.clone() };
        let mode = self.mode.into();
        alphas
            .iter()
            .flat_map(|&a| betas.iter().map(move |&b| AggregationParams::new(a, b, mode)))
            .collect()
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for per-source and per-cell work.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PolarityArg {
    Positive,
    Negative,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DuplicateArg {
    Error,
    KeepMax,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Combined,
    Layers,
    Distance,
}

impl From<ModeArg> for AggregationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Combined => AggregationMode::Combined,
            ModeArg::Layers => AggregationMode::LayersOnly,
            ModeArg::Distance => AggregationMode::DistanceOnly,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AlgorithmArg {
    Dap,
    Mda,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Dap => Algorithm::Dap,
            AlgorithmArg::Mda => Algorithm::Mda,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Strategy {
    FloydWarshall,
    RepeatedDijkstra,
}

fn exit_code(err: &Error) -> u8 {
    match err.root() {
        Error::UnknownNode(_)
        | Error::InvalidAlpha(_)
        | Error::InvalidBeta(_)
        | Error::InvalidArgument(_)
        | Error::SameNode(_)
        | Error::InconsistentInput(_) => EXIT_USAGE,
        Error::SizeGuardExceeded { .. } => EXIT_GUARD,
        Error::Io(_) | Error::Json(_) => EXIT_FAILURE,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if let Error::SizeGuardExceeded { .. } = err.root() {
                eprintln!("hint: raise --max-nodes to run anyway; the cost grows with the cube of the node count");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}

fn load(args: &InputArgs) -> Result<MultiLayeredNetwork, Error> {
    let options = LoadOptions {
        polarity: match args.polarity {
            PolarityArg::Positive => Polarity::Positive,
            PolarityArg::Negative => Polarity::Negative,
        },
        on_duplicate: match args.on_duplicate {
            DuplicateArg::Error => DuplicatePolicy::Error,
            DuplicateArg::KeepMax => DuplicatePolicy::KeepMax,
        },
    };
    load_edge_list(&args.input, &options)
}

fn load_quiet(args: &InputArgs) -> Result<MultiLayeredNetwork, Error> {
    let net = load(args)?;
    eprintln!("{}", LoadSummary::of(&net));
    Ok(net)
}

fn set_jobs(jobs: Option<usize>) -> Result<(), Error> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(Error::InvalidArgument("--jobs must be at least 1".into()));
        }
        // Only fails if a global pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Sorted, de-duplicated sources, each checked against the network.
fn sources(net: &MultiLayeredNetwork, ids: &[u64]) -> Result<Vec<NodeId>, Error> {
    let mut out: Vec<NodeId> = ids.iter().map(|&i| NodeId(i)).collect();
    out.sort();
    out.dedup();
    for &s in &out {
        net.require_index(s)?;
    }
    Ok(out)
}

fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout()),
    })
}

fn write_json(value: &impl Serialize) -> Result<(), Error> {
    let mut out = stdout();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::LoadSummary { input, format } => {
            let net = load(&input)?;
            let summary = LoadSummary::of(&net);
            match format {
                Format::Json => write_json(&summary),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(stdout());
                    w.write_record(["layer_index", "layer", "edges", "nodes"])?;
                    for l in &summary.layers {
                        w.write_record([
                            (l.index + 1).to_string(),
                            l.label.clone(),
                            l.edges.to_string(),
                            summary.nodes.to_string(),
                        ])?;
                    }
                    w.flush()?;
                    Ok(())
                }
                Format::Text => {
                    println!("{summary}");
                    Ok(())
                }
            }
        }
        Command::Sssp {
            input,
            thresholds,
            source,
            algorithm,
            paths,
            run,
        } => {
            set_jobs(run.jobs)?;
            let net = load_quiet(&input)?;
            let sources = sources(&net, &source)?;
            let grid = thresholds.grid()?;
            cmd_sssp(&net, &sources, &grid, algorithm.into(), paths, run.format)
        }
        Command::Apsp {
            input,
            thresholds,
            strategy,
            cross_check,
            max_nodes,
            run,
        } => {
            set_jobs(run.jobs)?;
            let net = load_quiet(&input)?;
            let grid = thresholds.grid()?;
            let [params] = grid.as_slice() else {
                return Err(Error::InvalidArgument(
                    "apsp takes a single --alpha/--beta pair".into(),
                ));
            };
            cmd_apsp(&net, params, strategy, cross_check, max_nodes, run.format)
        }
        Command::Sweep {
            input,
            alphas,
            betas,
            source,
            algorithm,
            run,
        } => {
            set_jobs(run.jobs)?;
            let net = load_quiet(&input)?;
            let sources = sources(&net, &source)?;
            let report = analytics::sweep(&net, &alphas, &betas, &sources, algorithm.into())?;
            match run.format {
                Format::Json => write_json(&report),
                Format::Csv | Format::Text => {
                    let mut out = stdout();
                    {
                        let mut w = csv::Writer::from_writer(&mut out);
                        w.write_record(["alpha", "beta", "edge_count"])?;
                        for c in &report.cells {
                            w.write_record([
                                c.alpha.to_string(),
                                c.beta.to_string(),
                                c.edge_count.to_string(),
                            ])?;
                        }
                        w.flush()?;
                    }
                    if !sources.is_empty() {
                        writeln!(out)?;
                        let stats: Vec<&PathStats> =
                            report.cells.iter().flat_map(|c| &c.stats).collect();
                        write_stats_csv(&mut out, stats)?;
                    }
                    out.flush()?;
                    Ok(())
                }
            }
        }
        Command::Bench {
            input,
            thresholds,
            source,
            sample,
            repeats,
            format,
        } => {
            let net = load_quiet(&input)?;
            let sources = if source.is_empty() {
                spread_sources(&net, sample)
            } else {
                sources(&net, &source)?
            };
            let config = BenchConfig {
                sources,
                params: thresholds.grid()?,
                repeats,
            };
            let report = run_bench(&net, &config)?;
            match format {
                Format::Json => write_json(&report),
                Format::Csv | Format::Text => {
                    println!("{report}");
                    Ok(())
                }
            }
        }
        Command::Generate {
            nodes,
            layers,
            density,
            seed,
            output: path,
        } => {
            let net = generate(&GeneratorConfig::new(nodes, layers, density, seed))?;
            let mut out = output(&path)?;
            write_edge_list(&net, &mut out)?;
            out.flush()?;
            eprintln!("{}", LoadSummary::of(&net));
            Ok(())
        }
        Command::AggregateExport {
            input,
            thresholds,
            output: path,
        } => {
            let net = load_quiet(&input)?;
            let grid = thresholds.grid()?;
            let [params] = grid.as_slice() else {
                return Err(Error::InvalidArgument(
                    "aggregate-export takes a single --alpha/--beta pair".into(),
                ));
            };
            let graph = aggregate_graph(&net, params);
            let mut out = output(&path)?;
            write_aggregated(&graph, &mut out)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn spread_sources(net: &MultiLayeredNetwork, count: usize) -> Vec<NodeId> {
    let n = net.node_count();
    let count = count.clamp(1, n);
    let mut out: Vec<NodeId> = (0..count).map(|i| net.node_id(i * n / count)).collect();
    out.dedup();
    out
}

fn write_stats_csv<'a>(
    out: &mut impl Write,
    rows: impl IntoIterator<Item = &'a PathStats>,
) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PATH_STATS_HEADER)?;
    for row in rows {
        w.write_record(row.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PathRecord {
    target: NodeId,
    length: f64,
    hops: usize,
    path: Vec<NodeId>,
}

#[derive(Serialize)]
struct SsspRow {
    #[serde(flatten)]
    stats: PathStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    paths: Option<Vec<PathRecord>>,
}

fn cmd_sssp(
    net: &MultiLayeredNetwork,
    sources: &[NodeId],
    grid: &[AggregationParams],
    algorithm: Algorithm,
    with_paths: bool,
    format: Format,
) -> Result<(), Error> {
    let jobs: Vec<(NodeId, AggregationParams)> = sources
        .iter()
        .flat_map(|&s| grid.iter().map(move |&p| (s, p)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|(s, p)| {
            let result = algorithm.run(net, *s, p)?;
            let stats = analytics::path_stats(&result, net, p)?;
            let paths = with_paths.then(|| {
                result
                    .reachable()
                    .map(|(t, length)| {
                        let path: Vec<NodeId> = result
                            .path_indices(t)
                            .into_iter()
                            .map(|i| net.node_id(i))
                            .collect();
                        PathRecord {
                            target: net.node_id(t),
                            length,
                            hops: path.len() - 1,
                            path,
                        }
                    })
                    .collect()
            });
            Ok(SsspRow { stats, paths })
        })
        .collect::<Result<Vec<_>, Error>>()?;

    if format == Format::Json {
        return write_json(&rows);
    }
    let mut out = stdout();
    write_stats_csv(&mut out, rows.iter().map(|r| &r.stats))?;
    if with_paths {
        writeln!(out)?;
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(["source", "alpha", "beta", "target", "length", "hops", "path"])?;
        for row in &rows {
            for p in row.paths.iter().flatten() {
                let path = p.path.iter().map(NodeId::to_string).collect::<Vec<_>>().join(" ");
                w.write_record([
                    row.stats.source.to_string(),
                    row.stats.alpha.to_string(),
                    row.stats.beta.to_string(),
                    p.target.to_string(),
                    p.length.to_string(),
                    p.hops.to_string(),
                    path,
                ])?;
            }
        }
        w.flush()?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct MatrixJson<'a> {
    nodes: &'a [NodeId],
    lengths: Vec<Vec<Option<f64>>>,
}

fn cmd_apsp(
    net: &MultiLayeredNetwork,
    params: &AggregationParams,
    strategy: Strategy,
    cross_check: bool,
    max_nodes: usize,
    format: Format,
) -> Result<(), Error> {
    let compute = |s: Strategy| match s {
        Strategy::FloydWarshall => ml_floyd_warshall(net, params, max_nodes),
        Strategy::RepeatedDijkstra => repeated_dijkstra_apsp(net, params, max_nodes),
    };
    let matrix = compute(strategy)?;
    if cross_check {
        let other = compute(match strategy {
            Strategy::FloydWarshall => Strategy::RepeatedDijkstra,
            Strategy::RepeatedDijkstra => Strategy::FloydWarshall,
        })?;
        match matrix.max_abs_diff(&other) {
            Some(d) if d <= 1e-12 => eprintln!("cross-check passed (max difference {d:e})"),
            Some(d) => {
                eprintln!("error: strategies disagree by up to {d:e}");
                return Err(Error::Io(io::Error::other("cross-check failed")));
            }
            None => {
                eprintln!("error: strategies disagree on reachability");
                return Err(Error::Io(io::Error::other("cross-check failed")));
            }
        }
    }
    write_matrix(&matrix, format)
}

fn write_matrix(m: &DistanceMatrix, format: Format) -> Result<(), Error> {
    if format == Format::Json {
        let lengths = (0..m.order()).map(|i| m.row(i).collect()).collect();
        return write_json(&MatrixJson {
            nodes: m.node_ids(),
            lengths,
        });
    }
    let mut w = csv::Writer::from_writer(stdout());
    let mut header = vec!["node".to_string()];
    header.extend(m.node_ids().iter().map(NodeId::to_string));
    w.write_record(&header)?;
    for (i, id) in m.node_ids().iter().enumerate() {
        let mut record = vec![id.to_string()];
        record.extend(m.row(i).map(|v| v.map_or_else(|| "inf".to_string(), |v| v.to_string())));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
