//! CSV edge lists in and out.
//!
//! Input files carry the header `src,dst,layer,weight`, one layered edge per
//! line. Node ids are non-negative integers; the layer column is a free-form
//! label, and labels are mapped to dense layer indices in order of first
//! appearance.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::aggregate::AggregatedGraph;
use crate::error::{Error, Result};
use crate::network::{
    DuplicatePolicy, LayeredEdge, MultiLayeredNetwork, NetworkBuilder, NodeId, Polarity,
};

pub const EDGE_LIST_HEADER: [&str; 4] = ["src", "dst", "layer", "weight"];
pub const AGGREGATED_HEADER: [&str; 4] = ["src", "dst", "distance", "layer_count"];

/// Longest accepted weight mantissa.
pub const MAX_WEIGHT_DIGITS: usize = 15;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    pub polarity: Polarity,
    pub on_duplicate: DuplicatePolicy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerSummary {
    pub index: usize,
    pub label: String,
    pub edges: usize,
}

/// Node count and per-layer edge counts of a loaded network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoadSummary {
    pub nodes: usize,
    pub layers: Vec<LayerSummary>,
}

impl LoadSummary {
    pub fn of(net: &MultiLayeredNetwork) -> Self {
        LoadSummary {
            nodes: net.node_count(),
            layers: net
                .layer_labels()
                .iter()
                .zip(net.layer_edge_counts())
                .enumerate()
                .map(|(index, (label, &edges))| LayerSummary {
                    index,
                    label: label.clone(),
                    edges,
                })
                .collect(),
        }
    }

    pub fn total_edges(&self) -> usize {
        self.layers.iter().map(|l| l.edges).sum()
    }
}

impl fmt::Display for LoadSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes: {}", self.nodes)?;
        writeln!(f, "layers: {}", self.layers.len())?;
        writeln!(f, "index\tlayer\tedges")?;
        for l in &self.layers {
            writeln!(f, "{}\t{}\t{}", l.index + 1, l.label, l.edges)?;
        }
        write!(f, "total edges: {}", self.total_edges())
    }
}

pub fn load_edge_list(path: impl AsRef<Path>, options: &LoadOptions) -> Result<MultiLayeredNetwork> {
    read_edge_list(File::open(path)?, options)
}

pub fn read_edge_list(input: impl Read, options: &LoadOptions) -> Result<MultiLayeredNetwork> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);

    let header = reader.headers().map_err(|e| csv_error(e, 1))?.clone();
    if header.iter().collect::<Vec<_>>() != EDGE_LIST_HEADER {
        if header.is_empty() || header.iter().all(str::is_empty) {
            return Err(Error::EmptyFile);
        }
        return Err(Error::Parse(format!(
            "expected header {:?}, found {:?}",
            EDGE_LIST_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        ))
        .at_line(1));
    }

    let mut builder = NetworkBuilder::new().polarity(options.polarity);
    let mut records = 0usize;
    let mut record = csv::StringRecord::new();
    loop {
        let line = reader.position().line();
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => return Err(csv_error(e, line)),
        }
        let line = record.position().map_or(line, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        records += 1;
        add_record(&mut builder, &record, options.on_duplicate).map_err(|e| e.at_line(line))?;
    }
    if records == 0 {
        return Err(Error::EmptyFile);
    }
    builder.seal()
}

fn csv_error(e: csv::Error, line: u64) -> Error {
    let line = e.position().map_or(line, |p| p.line());
    Error::Parse(e.to_string()).at_line(line)
}

fn add_record(
    builder: &mut NetworkBuilder,
    record: &csv::StringRecord,
    policy: DuplicatePolicy,
) -> Result<()> {
    if record.len() != 4 {
        return Err(Error::Parse(format!(
            "expected 4 fields, found {}",
            record.len()
        )));
    }
    let node = |s: &str, what: &str| {
        s.parse::<u64>()
            .map(NodeId)
            .map_err(|_| Error::Parse(format!("invalid {what} node id {s:?}")))
    };
    let src = node(&record[0], "source")?;
    let dst = node(&record[1], "target")?;
    let label = &record[2];
    if label.is_empty() {
        return Err(Error::Parse("empty layer label".into()));
    }
    let weight = parse_weight(&record[3])?;
    if src == dst {
        return Err(Error::LoopEdge(src));
    }
    crate::network::check_weight(weight)?;
    let layer = builder.layer_or_insert(label)?;
    builder.insert_edge(LayeredEdge { src, dst, layer, weight }, policy)?;
    Ok(())
}

/// Parses a decimal weight with at most [`MAX_WEIGHT_DIGITS`] significant digits.
pub fn parse_weight(text: &str) -> Result<f64> {
    let invalid = || Error::Parse(format!("invalid weight {text:?}"));
    let mantissa = text.split(['e', 'E']).next().unwrap_or("");
    let mantissa = mantissa.strip_prefix(['+', '-']).unwrap_or(mantissa);
    if mantissa.is_empty()
        || mantissa.chars().filter(|&c| c == '.').count() > 1
        || !mantissa.chars().all(|c| c.is_ascii_digit() || c == '.')
        || !mantissa.chars().any(|c| c.is_ascii_digit())
    {
        return Err(invalid());
    }
    let significant = mantissa
        .chars()
        .filter(char::is_ascii_digit)
        .skip_while(|&c| c == '0')
        .count();
    if significant > MAX_WEIGHT_DIGITS {
        return Err(Error::Parse(format!(
            "weight {text:?} has more than {MAX_WEIGHT_DIGITS} significant digits"
        )));
    }
    text.parse::<f64>().map_err(|_| invalid())
}

/// Writes every layered edge in (layer, src, dst) order, so reloading the
/// output registers the layers in their original order.
pub fn write_edge_list(net: &MultiLayeredNetwork, output: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(output);
    w.write_record(EDGE_LIST_HEADER)?;
    let mut edges: Vec<LayeredEdge> = net.edges().collect();
    edges.sort_by_key(|e| (e.layer, e.src, e.dst));
    for e in edges {
        let label = net.layer_label(e.layer).expect("edge layer exists");
        w.write_record([
            e.src.to_string(),
            e.dst.to_string(),
            label.to_string(),
            e.weight.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes aggregated edges in (src, dst) order.
pub fn write_aggregated(graph: &AggregatedGraph, output: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(output);
    w.write_record(AGGREGATED_HEADER)?;
    for e in graph.edges() {
        w.write_record([
            e.src.to_string(),
            e.dst.to_string(),
            e.distance.to_string(),
            e.layer_count.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
