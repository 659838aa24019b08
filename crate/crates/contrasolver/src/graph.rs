//! Preference-graph data model: judgment debiasing, graph construction, and
//! the reachability primitives everything else is built on.
//!
//! A preference graph holds one prompt's candidate responses as nodes and a
//! directed edge `src -> dst` for every pair the annotator preferred `src`
//! over `dst` with confidence above the build threshold. Construction
//! guarantees no self-loops, at most one direction per pair, and all weights
//! strictly above 0.5.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a response within one prompt's candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResponseId(pub u32);

impl ResponseId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ResponseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One annotator judgment over an ordered response pair.
///
/// `confidence_forward` is the annotator's probability that `first` beats
/// `second`. `confidence_reverse`, when present, is the probability for the
/// same direction re-measured with the answer labels swapped; averaging the
/// two readings cancels label-position bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgmentRecord {
    #[serde(rename = "i")]
    pub first: ResponseId,
    #[serde(rename = "j")]
    pub second: ResponseId,
    #[serde(rename = "conf_fwd")]
    pub confidence_forward: f64,
    #[serde(rename = "conf_rev")]
    pub confidence_reverse: Option<f64>,
}

impl JudgmentRecord {
    pub fn new(first: u32, second: u32, conf_fwd: f64, conf_rev: Option<f64>) -> Self {
        JudgmentRecord {
            first: ResponseId(first),
            second: ResponseId(second),
            confidence_forward: conf_fwd,
            confidence_reverse: conf_rev,
        }
    }
}

/// Directed preference: `src` beats `dst` with probability `weight`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreferenceEdge {
    pub src: ResponseId,
    pub dst: ResponseId,
    pub weight: f64,
}

impl PreferenceEdge {
    pub fn new(src: u32, dst: u32, weight: f64) -> Self {
        PreferenceEdge {
            src: ResponseId(src),
            dst: ResponseId(dst),
            weight,
        }
    }

    /// Directed endpoint pair, used as the canonical sort key.
    pub fn key(&self) -> (u32, u32) {
        (self.src.0, self.dst.0)
    }

    /// Endpoint pair ignoring direction.
    pub fn unordered_pair(&self) -> (u32, u32) {
        let (a, b) = self.key();
        (a.min(b), a.max(b))
    }
}

/// Ascending by weight, ties by smaller src then dst index.
pub(crate) fn ascending_order(a: &PreferenceEdge, b: &PreferenceEdge) -> Ordering {
    a.weight
        .total_cmp(&b.weight)
        .then(a.src.cmp(&b.src))
        .then(a.dst.cmp(&b.dst))
}

/// Descending by weight, ties by smaller src then dst index.
pub(crate) fn descending_order(a: &PreferenceEdge, b: &PreferenceEdge) -> Ordering {
    b.weight
        .total_cmp(&a.weight)
        .then(a.src.cmp(&b.src))
        .then(a.dst.cmp(&b.dst))
}

/// Canonical (src, dst) order used for serialized edge sets.
pub(crate) fn canonical_order(a: &PreferenceEdge, b: &PreferenceEdge) -> Ordering {
    a.key().cmp(&b.key())
}

/// Per-prompt directed preference graph over candidate responses.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceGraph {
    prompt_key: String,
    prompt: String,
    response_texts: Vec<String>,
    edges: Vec<PreferenceEdge>,
}

impl PreferenceGraph {
    /// Builds a graph from already-thresholded edges, checking every
    /// structural invariant: indices in range, no self-loops, one direction
    /// per pair, weights in (0.5, 1].
    pub fn new(
        prompt_key: impl Into<String>,
        prompt: impl Into<String>,
        response_texts: Vec<String>,
        mut edges: Vec<PreferenceEdge>,
    ) -> Result<Self> {
        if response_texts.is_empty() {
            return Err(Error::validation(
                "responses",
                "at least one response required",
            ));
        }
        let n = response_texts.len();
        edges.sort_by(canonical_order);
        let mut seen_pairs = BTreeMap::new();
        for e in &edges {
            if e.src.index() >= n || e.dst.index() >= n {
                return Err(Error::validation(
                    "edges",
                    format!("edge {} -> {} references an unknown response", e.src, e.dst),
                ));
            }
            if e.src == e.dst {
                return Err(Error::validation(
                    "edges",
                    format!("self-loop on response {}", e.src),
                ));
            }
            if !(e.weight > 0.5 && e.weight <= 1.0) {
                return Err(Error::validation(
                    "edges",
                    format!("weight {} outside (0.5, 1]", e.weight),
                ));
            }
            if seen_pairs.insert(e.unordered_pair(), e.key()).is_some() {
                return Err(Error::validation(
                    "edges",
                    format!("more than one edge for the pair ({}, {})", e.src, e.dst),
                ));
            }
        }
        Ok(PreferenceGraph {
            prompt_key: prompt_key.into(),
            prompt: prompt.into(),
            response_texts,
            edges,
        })
    }

    pub fn prompt_key(&self) -> &str {
        &self.prompt_key
    }

    pub fn prompt(&self) -> &str {
        &self.prompt
    }

    pub fn node_count(&self) -> usize {
        self.response_texts.len()
    }

    pub fn response_text(&self, id: ResponseId) -> &str {
        &self.response_texts[id.index()]
    }

    pub fn response_texts(&self) -> &[String] {
        &self.response_texts
    }

    /// Edges in canonical (src, dst) order.
    pub fn edges(&self) -> &[PreferenceEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_dag(&self) -> bool {
        is_dag(&self.edges, self.node_count())
    }
}

fn check_probability(field: &'static str, p: f64) -> Result<()> {
    if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
        return Err(Error::validation(
            field,
            format!("{p} is not a probability in [0, 1]"),
        ));
    }
    Ok(())
}

/// Averages the two label-swapped confidence readings for one direction.
///
/// Both inputs must refer to the same directed claim (`first` beats
/// `second`); the reverse reading is the one taken with swapped label
/// presentation.
pub fn debias_confidence(p_forward: f64, p_reverse: f64) -> Result<f64> {
    check_probability("conf_fwd", p_forward)?;
    check_probability("conf_rev", p_reverse)?;
    Ok((p_forward + p_reverse) / 2.0)
}

/// Result of building a graph from raw judgments.
#[derive(Debug, Clone)]
pub struct BuildOutcome {
    pub graph: PreferenceGraph,
    /// Pairs judged more than once with inconsistent direction after
    /// debiasing; the higher-weight direction was kept for each.
    pub conflict_warnings: usize,
}

/// Builds a preference graph from one prompt's judgments.
///
/// For each judgment the debiased confidence `c` decides the edge: `src ->
/// dst` with weight `c` when `c > max(0.5, delta)`, the reverse direction
/// with weight `1 - c` when that exceeds the threshold, and no edge
/// otherwise. `c` and `1 - c` cannot both clear 0.5, so antisymmetry holds
/// by construction.
pub fn build_graph(
    prompt_key: &str,
    prompt: &str,
    responses: &[String],
    judgments: &[JudgmentRecord],
    delta: f64,
) -> Result<BuildOutcome> {
    if !(delta.is_finite() && (0.5..1.0).contains(&delta)) {
        return Err(Error::validation(
            "delta",
            format!("{delta} outside [0.5, 1)"),
        ));
    }
    if responses.is_empty() {
        return Err(Error::validation(
            "responses",
            "at least one response required",
        ));
    }
    let n = responses.len();
    let cutoff = delta.max(0.5);
    let mut best: BTreeMap<(u32, u32), PreferenceEdge> = BTreeMap::new();
    let mut conflict_warnings = 0usize;

    for judgment in judgments {
        if judgment.first == judgment.second {
            return Err(Error::validation(
                "judgment",
                format!(
                    "responses {} and {} are the same",
                    judgment.first, judgment.second
                ),
            ));
        }
        for (field, id) in [("i", judgment.first), ("j", judgment.second)] {
            if id.index() >= n {
                return Err(Error::validation(
                    field,
                    format!("response index {id} out of range (prompt has {n} responses)"),
                ));
            }
        }
        let confidence = match judgment.confidence_reverse {
            Some(reverse) => debias_confidence(judgment.confidence_forward, reverse)?,
            None => {
                check_probability("conf_fwd", judgment.confidence_forward)?;
                judgment.confidence_forward
            }
        };

        let candidate = if confidence > cutoff {
            Some(PreferenceEdge {
                src: judgment.first,
                dst: judgment.second,
                weight: confidence,
            })
        } else if 1.0 - confidence > cutoff {
            Some(PreferenceEdge {
                src: judgment.second,
                dst: judgment.first,
                weight: 1.0 - confidence,
            })
        } else {
            None
        };

        let Some(edge) = candidate else { continue };
        match best.entry(edge.unordered_pair()) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(edge);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let prev = *slot.get();
                if prev.src != edge.src {
                    conflict_warnings += 1;
                }
                if edge.weight > prev.weight {
                    slot.insert(edge);
                }
            }
        }
    }

    let edges: Vec<PreferenceEdge> = best.into_values().collect();
    let graph = PreferenceGraph::new(prompt_key, prompt, responses.to_vec(), edges)?;
    Ok(BuildOutcome {
        graph,
        conflict_warnings,
    })
}

fn check_node(field: &'static str, id: ResponseId, node_count: usize) -> Result<()> {
    if id.index() >= node_count {
        return Err(Error::validation(
            field,
            format!("node {id} out of range (graph has {node_count} nodes)"),
        ));
    }
    Ok(())
}

/// Sorted adjacency lists; successor order fixes path tie-breaking.
fn adjacency(edges: &[PreferenceEdge], node_count: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); node_count];
    for e in edges {
        assert!(
            e.src.index() < node_count && e.dst.index() < node_count,
            "edge {} -> {} references a node outside 0..{node_count}",
            e.src,
            e.dst,
        );
        adj[e.src.index()].push(e.dst.index());
    }
    for successors in &mut adj {
        successors.sort_unstable();
    }
    adj
}

/// True when a directed path `from -> to` exists; reflexively true.
pub fn reachable(
    edges: &[PreferenceEdge],
    node_count: usize,
    from: ResponseId,
    to: ResponseId,
) -> Result<bool> {
    check_node("from", from, node_count)?;
    check_node("to", to, node_count)?;
    if from == to {
        return Ok(true);
    }
    let adj = adjacency(edges, node_count);
    let mut seen = vec![false; node_count];
    let mut queue = VecDeque::from([from.index()]);
    seen[from.index()] = true;
    while let Some(node) = queue.pop_front() {
        for &next in &adj[node] {
            if next == to.index() {
                return Ok(true);
            }
            if !seen[next] {
                seen[next] = true;
                queue.push_back(next);
            }
        }
    }
    Ok(false)
}

/// Edges of one shortest directed path `from -> to`, or `None` when
/// unreachable. BFS expands successors in ascending index order, so among
/// tied shortest paths the one through smaller destination indices wins.
pub fn find_path(
    edges: &[PreferenceEdge],
    node_count: usize,
    from: ResponseId,
    to: ResponseId,
) -> Result<Option<Vec<PreferenceEdge>>> {
    check_node("from", from, node_count)?;
    check_node("to", to, node_count)?;
    if from == to {
        return Ok(Some(Vec::new()));
    }
    let adj = adjacency(edges, node_count);
    let mut parent = vec![usize::MAX; node_count];
    let mut queue = VecDeque::from([from.index()]);
    parent[from.index()] = from.index();
    let mut found = false;
    'bfs: while let Some(node) = queue.pop_front() {
        for &next in &adj[node] {
            if parent[next] == usize::MAX {
                parent[next] = node;
                if next == to.index() {
                    found = true;
                    break 'bfs;
                }
                queue.push_back(next);
            }
        }
    }
    if !found {
        return Ok(None);
    }

    // Walk parents back to `from`, then look up each hop's edge weight.
    let mut hops = Vec::new();
    let mut node = to.index();
    while node != from.index() {
        hops.push((parent[node], node));
        node = parent[node];
    }
    hops.reverse();
    let weights: BTreeMap<(u32, u32), f64> = edges.iter().map(|e| (e.key(), e.weight)).collect();
    let path = hops
        .into_iter()
        .map(|(src, dst)| PreferenceEdge {
            src: ResponseId(src as u32),
            dst: ResponseId(dst as u32),
            weight: weights[&(src as u32, dst as u32)],
        })
        .collect();
    Ok(Some(path))
}

/// Complete topological order via Kahn's algorithm, or `None` when the edge
/// set contains a directed cycle. Nodes of equal rank come out in ascending
/// index order.
pub fn topological_order(edges: &[PreferenceEdge], node_count: usize) -> Option<Vec<usize>> {
    let adj = adjacency(edges, node_count);
    let mut in_degree = vec![0usize; node_count];
    for successors in &adj {
        for &next in successors {
            in_degree[next] += 1;
        }
    }
    let mut ready: VecDeque<usize> = (0..node_count).filter(|&v| in_degree[v] == 0).collect();
    let mut order = Vec::with_capacity(node_count);
    while let Some(node) = ready.pop_front() {
        order.push(node);
        for &next in &adj[node] {
            in_degree[next] -= 1;
            if in_degree[next] == 0 {
                ready.push_back(next);
            }
        }
    }
    (order.len() == node_count).then_some(order)
}

/// True iff the edge set admits a complete topological ordering.
pub fn is_dag(edges: &[PreferenceEdge], node_count: usize) -> bool {
    topological_order(edges, node_count).is_some()
}

/// One directed cycle, in edge order, if the edge set contains any.
///
/// Deterministic: sink nodes are peeled away, then the walk starts at the
/// smallest surviving node and always follows its smallest surviving
/// successor until a node repeats.
pub fn find_cycle(edges: &[PreferenceEdge], node_count: usize) -> Option<Vec<PreferenceEdge>> {
    let adj = adjacency(edges, node_count);
    let mut reverse_adj = vec![Vec::new(); node_count];
    let mut out_degree = vec![0usize; node_count];
    for (src, successors) in adj.iter().enumerate() {
        out_degree[src] = successors.len();
        for &next in successors {
            reverse_adj[next].push(src);
        }
    }
    let mut alive = vec![true; node_count];
    let mut queue: VecDeque<usize> = (0..node_count).filter(|&v| out_degree[v] == 0).collect();
    while let Some(node) = queue.pop_front() {
        alive[node] = false;
        for &prev in &reverse_adj[node] {
            out_degree[prev] -= 1;
            if out_degree[prev] == 0 && alive[prev] {
                queue.push_back(prev);
            }
        }
    }
    let start = (0..node_count).find(|&v| alive[v])?;

    // Every surviving node keeps a surviving successor, so the walk must
    // close on itself.
    let mut position = vec![usize::MAX; node_count];
    let mut walk = vec![start];
    position[start] = 0;
    let cycle_nodes = loop {
        let current = *walk.last().expect("walk is never empty");
        let next = *adj[current]
            .iter()
            .find(|&&v| alive[v])
            .expect("surviving node lost its successors");
        if position[next] != usize::MAX {
            break walk[position[next]..].to_vec();
        }
        position[next] = walk.len();
        walk.push(next);
    };

    let weights: BTreeMap<(u32, u32), f64> = edges.iter().map(|e| (e.key(), e.weight)).collect();
    let cycle = cycle_nodes
        .iter()
        .enumerate()
        .map(|(i, &src)| {
            let dst = cycle_nodes[(i + 1) % cycle_nodes.len()];
            PreferenceEdge {
                src: ResponseId(src as u32),
                dst: ResponseId(dst as u32),
                weight: weights[&(src as u32, dst as u32)],
            }
        })
        .collect();
    Some(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("response-{i}")).collect()
    }

    #[test]
    fn debias_averages_readings() {
        assert_eq!(debias_confidence(0.7, 0.7).unwrap(), 0.7);
        assert_eq!(debias_confidence(0.5, 0.5).unwrap(), 0.5);
        assert_eq!(debias_confidence(0.9, 0.6).unwrap(), 0.75);
    }

    #[test]
    fn debias_rejects_out_of_range() {
        let err = debias_confidence(1.2, 0.5).unwrap_err();
        assert!(err.to_string().contains("conf_fwd"), "{err}");
        let err = debias_confidence(0.5, -0.1).unwrap_err();
        assert!(err.to_string().contains("conf_rev"), "{err}");
        assert!(debias_confidence(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn build_drops_indifferent_judgment() {
        let judgments = vec![JudgmentRecord::new(0, 1, 0.5, Some(0.5))];
        let out = build_graph("p", "p", &texts(2), &judgments, 0.51).unwrap();
        assert_eq!(out.graph.edge_count(), 0);
        assert_eq!(out.conflict_warnings, 0);
    }

    #[test]
    fn build_emits_confident_edge() {
        let judgments = vec![JudgmentRecord::new(0, 1, 0.9, None)];
        let out = build_graph("p", "p", &texts(2), &judgments, 0.51).unwrap();
        assert_eq!(out.graph.edges(), &[PreferenceEdge::new(0, 1, 0.9)]);
    }

    #[test]
    fn build_emits_reverse_edge_for_low_confidence() {
        let judgments = vec![JudgmentRecord::new(0, 1, 0.2, None)];
        let out = build_graph("p", "p", &texts(2), &judgments, 0.51).unwrap();
        assert_eq!(out.graph.edges(), &[PreferenceEdge::new(1, 0, 0.8)]);
    }

    #[test]
    fn build_respects_threshold_band() {
        // 0.52 and 0.48 both sit inside the delta = 0.6 dead band.
        let judgments = vec![JudgmentRecord::new(0, 1, 0.52, None)];
        let out = build_graph("p", "p", &texts(2), &judgments, 0.6).unwrap();
        assert_eq!(out.graph.edge_count(), 0);
    }

    #[test]
    fn build_three_cycle() {
        let judgments = vec![
            JudgmentRecord::new(0, 1, 0.9, None),
            JudgmentRecord::new(1, 2, 0.8, None),
            JudgmentRecord::new(2, 0, 0.6, None),
        ];
        let out = build_graph("p", "p", &texts(3), &judgments, 0.51).unwrap();
        assert_eq!(
            out.graph.edges(),
            &[
                PreferenceEdge::new(0, 1, 0.9),
                PreferenceEdge::new(1, 2, 0.8),
                PreferenceEdge::new(2, 0, 0.6),
            ]
        );
        assert!(!out.graph.is_dag());
    }

    #[test]
    fn build_debiases_swapped_readings() {
        let judgments = vec![JudgmentRecord::new(0, 1, 0.9, Some(0.6))];
        let out = build_graph("p", "p", &texts(2), &judgments, 0.51).unwrap();
        assert_eq!(out.graph.edges(), &[PreferenceEdge::new(0, 1, 0.75)]);
    }

    #[test]
    fn build_keeps_higher_weight_on_conflicting_duplicates() {
        let judgments = vec![
            JudgmentRecord::new(0, 1, 0.7, None),
            JudgmentRecord::new(1, 0, 0.9, None),
        ];
        let out = build_graph("p", "p", &texts(2), &judgments, 0.51).unwrap();
        assert_eq!(out.graph.edges(), &[PreferenceEdge::new(1, 0, 0.9)]);
        assert_eq!(out.conflict_warnings, 1);
    }

    #[test]
    fn build_consistent_duplicates_keep_max_without_warning() {
        let judgments = vec![
            JudgmentRecord::new(0, 1, 0.7, None),
            JudgmentRecord::new(0, 1, 0.8, None),
        ];
        let out = build_graph("p", "p", &texts(2), &judgments, 0.51).unwrap();
        assert_eq!(out.graph.edges(), &[PreferenceEdge::new(0, 1, 0.8)]);
        assert_eq!(out.conflict_warnings, 0);
    }

    #[test]
    fn build_rejects_self_pair() {
        let judgments = vec![JudgmentRecord::new(1, 1, 0.9, None)];
        let err = build_graph("p", "p", &texts(2), &judgments, 0.51).unwrap_err();
        assert!(matches!(
            err,
            Error::Validation {
                field: "judgment",
                ..
            }
        ));
    }

    #[test]
    fn build_rejects_unknown_index_and_bad_confidence() {
        let judgments = vec![JudgmentRecord::new(0, 5, 0.9, None)];
        let err = build_graph("p", "p", &texts(2), &judgments, 0.51).unwrap_err();
        assert!(matches!(err, Error::Validation { field: "j", .. }));

        let judgments = vec![JudgmentRecord::new(0, 1, 1.5, None)];
        let err = build_graph("p", "p", &texts(2), &judgments, 0.51).unwrap_err();
        assert!(matches!(
            err,
            Error::Validation {
                field: "conf_fwd",
                ..
            }
        ));
    }

    #[test]
    fn build_rejects_bad_delta() {
        assert!(build_graph("p", "p", &texts(2), &[], 0.4).is_err());
        assert!(build_graph("p", "p", &texts(2), &[], 1.0).is_err());
    }

    #[test]
    fn reachable_examples() {
        let edges = vec![
            PreferenceEdge::new(0, 1, 0.9),
            PreferenceEdge::new(1, 2, 0.8),
        ];
        assert!(reachable(&edges, 3, ResponseId(0), ResponseId(2)).unwrap());
        assert!(!reachable(&edges, 3, ResponseId(2), ResponseId(0)).unwrap());
        assert!(reachable(&[], 3, ResponseId(0), ResponseId(0)).unwrap());
    }

    #[test]
    fn reachable_rejects_unknown_node() {
        let err = reachable(&[], 2, ResponseId(0), ResponseId(7)).unwrap_err();
        assert!(matches!(err, Error::Validation { field: "to", .. }));
    }

    #[test]
    fn find_path_examples() {
        let edges = vec![
            PreferenceEdge::new(0, 1, 0.9),
            PreferenceEdge::new(1, 2, 0.8),
        ];
        let path = find_path(&edges, 3, ResponseId(0), ResponseId(2))
            .unwrap()
            .unwrap();
        assert_eq!(path, edges);

        let edges = vec![PreferenceEdge::new(0, 1, 0.9)];
        assert!(find_path(&edges, 2, ResponseId(1), ResponseId(0))
            .unwrap()
            .is_none());
    }

    #[test]
    fn find_path_breaks_ties_toward_smaller_index() {
        // Two shortest 0 -> 3 paths; the one through node 1 wins.
        let edges = vec![
            PreferenceEdge::new(0, 1, 0.9),
            PreferenceEdge::new(0, 2, 0.8),
            PreferenceEdge::new(1, 3, 0.7),
            PreferenceEdge::new(2, 3, 0.6),
        ];
        let path = find_path(&edges, 4, ResponseId(0), ResponseId(3))
            .unwrap()
            .unwrap();
        assert_eq!(
            path,
            vec![
                PreferenceEdge::new(0, 1, 0.9),
                PreferenceEdge::new(1, 3, 0.7)
            ]
        );
    }

    #[test]
    fn find_path_reflexive_is_empty() {
        let path = find_path(&[], 1, ResponseId(0), ResponseId(0))
            .unwrap()
            .unwrap();
        assert!(path.is_empty());
    }

    #[test]
    fn is_dag_examples() {
        assert!(is_dag(&[], 3));
        let cycle = vec![
            PreferenceEdge::new(0, 1, 0.9),
            PreferenceEdge::new(1, 2, 0.8),
            PreferenceEdge::new(2, 0, 0.6),
        ];
        assert!(!is_dag(&cycle, 3));
        let triangle = vec![
            PreferenceEdge::new(0, 1, 0.9),
            PreferenceEdge::new(1, 2, 0.8),
            PreferenceEdge::new(0, 2, 0.7),
        ];
        assert!(is_dag(&triangle, 3));
    }

    #[test]
    fn find_cycle_returns_closed_walk() {
        let edges = vec![
            PreferenceEdge::new(0, 1, 0.9),
            PreferenceEdge::new(1, 2, 0.8),
            PreferenceEdge::new(2, 0, 0.6),
            PreferenceEdge::new(0, 3, 0.7),
        ];
        let cycle = find_cycle(&edges, 4).unwrap();
        assert_eq!(cycle.len(), 3);
        for (i, e) in cycle.iter().enumerate() {
            assert_eq!(e.dst, cycle[(i + 1) % cycle.len()].src);
        }
        assert!(find_cycle(&edges[..2], 4).is_none());
    }

    #[test]
    fn graphs_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<PreferenceGraph>();
        assert_send_sync::<JudgmentRecord>();
        assert_send_sync::<PreferenceEdge>();
    }

    #[test]
    fn graph_new_rejects_both_directions() {
        let err = PreferenceGraph::new(
            "p",
            "p",
            texts(2),
            vec![
                PreferenceEdge::new(0, 1, 0.9),
                PreferenceEdge::new(1, 0, 0.8),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation { field: "edges", .. }));
    }
}
