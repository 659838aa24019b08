//! Training-pair selection strategies and line-delimited pair export.

use std::io::{self, BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{canonical_order, descending_order, PreferenceEdge, PreferenceGraph};
use crate::solver::SolverResult;

/// Exported preference pair: `chosen` beat `rejected` with confidence
/// `weight`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingPair {
    pub prompt: String,
    pub chosen: String,
    pub rejected: String,
    pub weight: f64,
}

/// Selection strategy, named as on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum Strategy {
    #[value(name = "contrasolver")]
    #[serde(rename = "contrasolver")]
    ContraSolver,
    #[value(name = "random")]
    #[serde(rename = "random")]
    Random,
    #[value(name = "max-confidence")]
    #[serde(rename = "max-confidence")]
    MaxConfidence,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Strategy::ContraSolver => "contrasolver",
            Strategy::Random => "random",
            Strategy::MaxConfidence => "max-confidence",
        };
        f.write_str(name)
    }
}

fn pair_from_edge(graph: &PreferenceGraph, edge: &PreferenceEdge) -> TrainingPair {
    TrainingPair {
        prompt: graph.prompt().to_string(),
        chosen: graph.response_text(edge.src).to_string(),
        rejected: graph.response_text(edge.dst).to_string(),
        weight: edge.weight,
    }
}

/// One pair per heuristic edge of a solved graph, ordered by descending
/// weight then node indices.
pub fn select_contrasolver(
    result: &SolverResult,
    graph: &PreferenceGraph,
) -> Result<Vec<TrainingPair>> {
    result.matches(graph)?;
    let mut edges = result.heuristic.clone();
    edges.sort_by(descending_order);
    Ok(edges.iter().map(|e| pair_from_edge(graph, e)).collect())
}

/// Uniform sample of `n` edges without replacement, deterministic per seed.
/// With `n >= edge count` every edge comes back, shuffled.
pub fn select_random(graph: &PreferenceGraph, n: usize, seed: u64) -> Vec<TrainingPair> {
    let mut edges = graph.edges().to_vec();
    edges.sort_by(canonical_order);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    edges.shuffle(&mut rng);
    edges.truncate(n.min(graph.edge_count()));
    edges.iter().map(|e| pair_from_edge(graph, e)).collect()
}

/// The `n` highest-weight edges, ties by node indices.
pub fn select_max_confidence(graph: &PreferenceGraph, n: usize) -> Vec<TrainingPair> {
    let mut edges = graph.edges().to_vec();
    edges.sort_by(descending_order);
    edges.truncate(n.min(graph.edge_count()));
    edges.iter().map(|e| pair_from_edge(graph, e)).collect()
}

/// Writes pairs as line-delimited records; returns the record count.
///
/// On a write failure the error carries how many records made it out.
pub fn export_pairs<W: Write>(pairs: &[TrainingPair], mut sink: W) -> Result<usize> {
    let mut written = 0usize;
    for pair in pairs {
        let line = serde_json::to_string(pair).expect("training pairs always serialize");
        sink.write_all(line.as_bytes())
            .and_then(|()| sink.write_all(b"\n"))
            .map_err(|source| Error::PartialWrite { written, source })?;
        written += 1;
    }
    sink.flush()
        .map_err(|source| Error::PartialWrite { written, source })?;
    Ok(written)
}

/// Reads pairs written by [`export_pairs`]. Blank lines are ignored.
pub fn read_pairs<R: BufRead>(source: R) -> Result<Vec<TrainingPair>> {
    let mut pairs = Vec::new();
    for (number, line) in source.lines().enumerate() {
        let line = line.map_err(Error::Io)?;
        if line.trim().is_empty() {
            continue;
        }
        let pair: TrainingPair =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                line: number + 1,
                reason: e.to_string(),
            })?;
        if !(pair.weight > 0.5 && pair.weight <= 1.0) {
            return Err(Error::MalformedRecord {
                line: number + 1,
                reason: format!("weight {} outside (0.5, 1]", pair.weight),
            });
        }
        pairs.push(pair);
    }
    Ok(pairs)
}

/// Convenience wrapper for [`read_pairs`] on an in-memory buffer.
pub fn read_pairs_from_slice(bytes: &[u8]) -> Result<Vec<TrainingPair>> {
    read_pairs(io::BufReader::new(bytes))
}
