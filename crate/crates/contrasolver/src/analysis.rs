//! Contradiction metrics over graph collections and mechanical verification
//! of the two guarantees every solved result must satisfy: the kept graph is
//! acyclic even after re-adding the contradictory edges reversed, and no
//! convicted edge outweighs the cycle path that convicted it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{find_cycle, is_dag, PreferenceEdge, PreferenceGraph};
use crate::solver::SolverResult;

/// Edge counts by solver class. `kept + contradictory + omitted` equals the
/// edge count; `heuristic` and `definite` are subsets of `kept`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub kept: usize,
    pub contradictory: usize,
    pub heuristic: usize,
    pub omitted: usize,
    pub definite: usize,
}

/// Per-graph statistics. Class counts are present only when computed from a
/// solved result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    pub prompt_key: String,
    pub node_count: usize,
    pub edge_count: usize,
    pub has_cycle: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<ClassCounts>,
    /// Ten 0.05-wide weight bins covering (0.5, 1]; a weight lands in bin
    /// `floor((w - 0.5) * 20)`, with 1.0 folded into the last bin.
    pub weight_histogram: [usize; 10],
}

fn histogram(edges: &[PreferenceEdge]) -> [usize; 10] {
    let mut bins = [0usize; 10];
    for e in edges {
        let bin = (((e.weight - 0.5) * 20.0).floor() as usize).min(9);
        bins[bin] += 1;
    }
    bins
}

impl GraphStats {
    pub fn from_graph(graph: &PreferenceGraph) -> Self {
        GraphStats {
            prompt_key: graph.prompt_key().to_string(),
            node_count: graph.node_count(),
            edge_count: graph.edge_count(),
            has_cycle: !graph.is_dag(),
            classes: None,
            weight_histogram: histogram(graph.edges()),
        }
    }

    /// Statistics including solver class counts. Definite edges are the kept
    /// edges that appear on no witness cycle path.
    pub fn with_result(graph: &PreferenceGraph, result: &SolverResult) -> Result<Self> {
        result.matches(graph)?;
        let mut stats = GraphStats::from_graph(graph);
        stats.classes = Some(ClassCounts {
            kept: result.kept.len(),
            contradictory: result.contradictory.len(),
            heuristic: result.heuristic.len(),
            omitted: result.omitted.len(),
            definite: result.kept.len() - result.heuristic.len(),
        });
        Ok(stats)
    }
}

/// Fraction of graphs containing at least one directed cycle.
pub fn contradiction_rate(graphs: &[PreferenceGraph]) -> Result<f64> {
    if graphs.is_empty() {
        return Err(Error::validation("graphs", "rate over an empty collection"));
    }
    let cyclic = graphs.iter().filter(|g| !g.is_dag()).count();
    Ok(cyclic as f64 / graphs.len() as f64)
}

/// Contradiction rate after replacing each graph's edges with the kept
/// edges plus the reversed contradictory edges. Always 0 for genuine solver
/// output; anything else is a bug surfaced by [`verify_properties`].
pub fn post_alignment_rate(graphs: &[PreferenceGraph], results: &[SolverResult]) -> Result<f64> {
    if graphs.len() != results.len() {
        return Err(Error::validation(
            "results",
            format!("{} results for {} graphs", results.len(), graphs.len()),
        ));
    }
    if graphs.is_empty() {
        return Err(Error::validation("graphs", "rate over an empty collection"));
    }
    let mut cyclic = 0usize;
    for (graph, result) in graphs.iter().zip(results) {
        result.matches(graph)?;
        if !is_dag(&result.realigned_edges(), graph.node_count()) {
            cyclic += 1;
        }
    }
    Ok(cyclic as f64 / graphs.len() as f64)
}

/// First failure found while verifying a result, with its evidence.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    KeptCycle {
        cycle: Vec<PreferenceEdge>,
    },
    RealignedCycle {
        cycle: Vec<PreferenceEdge>,
    },
    WitnessViolation {
        witness_index: usize,
        contradictory_weight: f64,
        min_path_weight: f64,
    },
}

/// Outcome of checking a solved result against its guarantees.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    /// Kept graph is acyclic.
    pub kept_acyclic: bool,
    /// Kept graph stays acyclic with every contradictory edge re-added
    /// reversed.
    pub realigned_acyclic: bool,
    /// No witness has a contradictory edge heavier than the lightest edge
    /// of its cycle path (strictly lighter when weights are distinct).
    pub witnesses_consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub fn all_hold(&self) -> bool {
        self.kept_acyclic && self.realigned_acyclic && self.witnesses_consistent
    }
}

/// Checks a solved result against the solver's guarantees; failures are
/// report content, never errors.
pub fn verify_properties(result: &SolverResult, graph: &PreferenceGraph) -> VerificationReport {
    let n = graph.node_count();
    let mut report = VerificationReport {
        kept_acyclic: true,
        realigned_acyclic: true,
        witnesses_consistent: true,
        counterexample: None,
    };

    if let Some(cycle) = find_cycle(&result.kept, n) {
        report.kept_acyclic = false;
        report.counterexample = Some(Counterexample::KeptCycle { cycle });
    }
    if let Some(cycle) = find_cycle(&result.realigned_edges(), n) {
        report.realigned_acyclic = false;
        if report.counterexample.is_none() {
            report.counterexample = Some(Counterexample::RealignedCycle { cycle });
        }
    }
    for (witness_index, witness) in result.witnesses.iter().enumerate() {
        let min_path_weight = witness
            .cycle_path
            .iter()
            .map(|e| e.weight)
            .fold(f64::INFINITY, f64::min);
        // Equality can only arise from tied weights, where it is allowed.
        if witness.contradictory_edge.weight > min_path_weight {
            report.witnesses_consistent = false;
            if report.counterexample.is_none() {
                report.counterexample = Some(Counterexample::WitnessViolation {
                    witness_index,
                    contradictory_weight: witness.contradictory_edge.weight,
                    min_path_weight,
                });
            }
            break;
        }
    }
    report
}
