//! Contradiction-resolving traversal of a preference graph.
//!
//! The kept graph starts as a maximum-weight spanning forest. The traversal
//! then alternates two sweeps over the candidate edges until none remain: a
//! reverse sweep (ascending weight) convicts every edge whose addition would
//! close a directed cycle, recording the cycle path as its witness, and a
//! forward sweep (descending weight) admits at most one edge that connects a
//! still-incomparable node pair, discarding the transitively redundant edges
//! it passes over. Every input edge ends up kept, contradictory, or omitted.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    ascending_order, canonical_order, descending_order, find_path, topological_order,
    PreferenceEdge, PreferenceGraph, ResponseId,
};

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the two sets; false when already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Reflexive transitive closure over a fixed edge set, one bitset row per
/// node. The kept graph is acyclic throughout the traversal, so rows are
/// folded in reverse topological order; a cyclic edge set (possible when a
/// state is assembled by hand) falls back to one DFS per node.
struct Reachability {
    words: usize,
    bits: Vec<u64>,
}

impl Reachability {
    fn of(edges: &[PreferenceEdge], node_count: usize) -> Self {
        let words = node_count.div_ceil(64).max(1);
        let mut bits = vec![0u64; node_count.max(1) * words];
        let mut adj = vec![Vec::new(); node_count];
        for e in edges {
            adj[e.src.index()].push(e.dst.index());
        }
        for v in 0..node_count {
            bits[v * words + v / 64] |= 1 << (v % 64);
        }
        if let Some(order) = topological_order(edges, node_count) {
            for &v in order.iter().rev() {
                for &child in &adj[v] {
                    for w in 0..words {
                        let child_word = bits[child * words + w];
                        bits[v * words + w] |= child_word;
                    }
                }
            }
        } else {
            for v in 0..node_count {
                let mut stack = vec![v];
                while let Some(node) = stack.pop() {
                    for &next in &adj[node] {
                        let slot = v * words + next / 64;
                        let mask = 1 << (next % 64);
                        if bits[slot] & mask == 0 {
                            bits[slot] |= mask;
                            stack.push(next);
                        }
                    }
                }
            }
        }
        Reachability { words, bits }
    }

    fn reaches(&self, from: ResponseId, to: ResponseId) -> bool {
        let (f, t) = (from.index(), to.index());
        self.bits[f * self.words + t / 64] & (1 << (t % 64)) != 0
    }
}

/// Splits a graph into a maximum-weight spanning forest and the rest.
///
/// Kruskal over the undirected projection: edges are taken in descending
/// weight (ties by smaller src then dst index) and kept when they join two
/// components, directions preserved. An undirected-acyclic selection can
/// hold no directed cycle, so the forest is a valid acyclic start.
pub fn kruskal_max_spanning_forest(
    graph: &PreferenceGraph,
) -> (Vec<PreferenceEdge>, Vec<PreferenceEdge>) {
    let mut edges = graph.edges().to_vec();
    edges.sort_by(descending_order);
    let mut components = UnionFind::new(graph.node_count());
    let mut forest = Vec::new();
    let mut remaining = Vec::new();
    for e in edges {
        if components.union(e.src.index(), e.dst.index()) {
            forest.push(e);
        } else {
            remaining.push(e);
        }
    }
    (forest, remaining)
}

/// One convicted edge with the kept-graph path that closes its cycle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContradictionWitness {
    pub contradictory_edge: PreferenceEdge,
    /// Directed path `contradictory_edge.dst -> contradictory_edge.src`
    /// through the kept graph at conviction time.
    pub cycle_path: Vec<PreferenceEdge>,
}

/// Final partition of a graph's edges, plus the evidence trail.
///
/// `kept`, `contradictory`, and `omitted` partition the input edge set;
/// `heuristic` is the deduplicated subset of `kept` that appears on witness
/// cycle paths. Edge lists are in canonical (src, dst) order, witnesses in
/// discovery order, so serialization is byte-stable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverResult {
    pub prompt_key: String,
    pub node_count: usize,
    pub edge_count: usize,
    pub kept: Vec<PreferenceEdge>,
    pub contradictory: Vec<PreferenceEdge>,
    pub heuristic: Vec<PreferenceEdge>,
    pub omitted: Vec<PreferenceEdge>,
    pub witnesses: Vec<ContradictionWitness>,
    pub iteration_count: usize,
}

/// Mutable traversal state over one graph.
#[derive(Debug, Clone)]
pub struct SolverState {
    prompt_key: String,
    node_count: usize,
    input_edge_count: usize,
    kept: Vec<PreferenceEdge>,
    remaining: Vec<PreferenceEdge>,
    contradictory: Vec<PreferenceEdge>,
    heuristic: Vec<PreferenceEdge>,
    omitted: Vec<PreferenceEdge>,
    witnesses: Vec<ContradictionWitness>,
    iterations: usize,
}

impl SolverState {
    /// Initializes the kept graph with the maximum spanning forest.
    pub fn init(graph: &PreferenceGraph) -> Self {
        let (kept, remaining) = kruskal_max_spanning_forest(graph);
        SolverState {
            prompt_key: graph.prompt_key().to_string(),
            node_count: graph.node_count(),
            input_edge_count: graph.edge_count(),
            kept,
            remaining,
            contradictory: Vec::new(),
            heuristic: Vec::new(),
            omitted: Vec::new(),
            witnesses: Vec::new(),
            iterations: 0,
        }
    }

    /// Assembles a state from explicit kept and candidate edge sets, for
    /// driving the sweeps manually.
    pub fn from_parts(
        prompt_key: impl Into<String>,
        node_count: usize,
        kept: Vec<PreferenceEdge>,
        remaining: Vec<PreferenceEdge>,
    ) -> Self {
        SolverState {
            prompt_key: prompt_key.into(),
            node_count,
            input_edge_count: kept.len() + remaining.len(),
            kept,
            remaining,
            contradictory: Vec::new(),
            heuristic: Vec::new(),
            omitted: Vec::new(),
            witnesses: Vec::new(),
            iterations: 0,
        }
    }

    pub fn kept(&self) -> &[PreferenceEdge] {
        &self.kept
    }

    pub fn remaining(&self) -> &[PreferenceEdge] {
        &self.remaining
    }

    pub fn contradictory(&self) -> &[PreferenceEdge] {
        &self.contradictory
    }

    pub fn heuristic(&self) -> &[PreferenceEdge] {
        &self.heuristic
    }

    pub fn omitted(&self) -> &[PreferenceEdge] {
        &self.omitted
    }

    pub fn witnesses(&self) -> &[ContradictionWitness] {
        &self.witnesses
    }

    /// Convicts every candidate edge that would close a directed cycle.
    ///
    /// Candidates are visited in ascending weight (ties by smaller src then
    /// dst index). An edge whose destination already reaches its source in
    /// the kept graph moves to the contradictory set; one shortest cycle
    /// path becomes its witness and the path edges join the heuristic set.
    /// The kept graph itself is not modified.
    pub fn reverse_loop(&mut self) {
        if self.remaining.is_empty() {
            return;
        }
        self.remaining.sort_by(ascending_order);
        let reach = Reachability::of(&self.kept, self.node_count);
        let mut still_remaining = Vec::with_capacity(self.remaining.len());
        for edge in std::mem::take(&mut self.remaining) {
            if !reach.reaches(edge.dst, edge.src) {
                still_remaining.push(edge);
                continue;
            }
            let path = find_path(&self.kept, self.node_count, edge.dst, edge.src)
                .expect("kept-graph nodes are valid")
                .expect("reachability check promised a path");
            self.heuristic.extend(path.iter().copied());
            self.witnesses.push(ContradictionWitness {
                contradictory_edge: edge,
                cycle_path: path,
            });
            self.contradictory.push(edge);
        }
        self.remaining = still_remaining;
    }

    /// Admits at most one candidate edge that orders a still-incomparable
    /// node pair; true when an edge was added.
    ///
    /// Candidates are visited in descending weight (ties by smaller src then
    /// dst index) and leave the candidate set as they are visited. An edge
    /// whose endpoints are already ordered is transitively redundant and is
    /// omitted; the first edge between incomparable endpoints joins the kept
    /// graph and the sweep stops.
    ///
    /// Panics when a visited edge would close a cycle: the reverse sweep
    /// removes all such edges, so hitting one means the traversal logic is
    /// broken and the kept graph must not be corrupted.
    pub fn forward_loop(&mut self) -> bool {
        if self.remaining.is_empty() {
            return false;
        }
        self.remaining.sort_by(descending_order);
        let reach = Reachability::of(&self.kept, self.node_count);
        let mut added = false;
        let mut visit = std::mem::take(&mut self.remaining).into_iter();
        for edge in visit.by_ref() {
            assert!(
                !reach.reaches(edge.dst, edge.src),
                "forward sweep visited cycle-closing edge {} -> {}; run the reverse sweep first",
                edge.src,
                edge.dst,
            );
            if reach.reaches(edge.src, edge.dst) {
                self.omitted.push(edge);
            } else {
                self.kept.push(edge);
                added = true;
                break;
            }
        }
        self.remaining = visit.collect();
        added
    }

    /// Consumes the state into the final partition. Heuristic edges are
    /// deduplicated; all edge lists move to canonical order.
    pub fn into_result(self) -> SolverResult {
        let mut kept = self.kept;
        kept.sort_by(canonical_order);
        let mut contradictory = self.contradictory;
        contradictory.sort_by(canonical_order);
        let mut omitted = self.omitted;
        omitted.sort_by(canonical_order);
        let mut heuristic = self.heuristic;
        heuristic.sort_by(canonical_order);
        heuristic.dedup_by_key(|e| e.key());

        debug_assert_eq!(
            kept.len() + contradictory.len() + omitted.len() + self.remaining.len(),
            self.input_edge_count,
        );
        SolverResult {
            prompt_key: self.prompt_key,
            node_count: self.node_count,
            edge_count: self.input_edge_count,
            kept,
            contradictory,
            heuristic,
            omitted,
            witnesses: self.witnesses,
            iteration_count: self.iterations,
        }
    }
}

/// Runs the full traversal on one graph.
///
/// Alternates the reverse and forward sweeps until no candidate edges
/// remain. Terminates because every pass through the loop body shrinks the
/// candidate set: the forward sweep always consumes at least one edge when
/// any are left. Pure function of its input; identical graphs give
/// identical results.
pub fn solve(graph: &PreferenceGraph) -> SolverResult {
    let mut state = SolverState::init(graph);
    while !state.remaining.is_empty() {
        state.reverse_loop();
        state.forward_loop();
        state.iterations += 1;
    }
    state.into_result()
}

impl SolverResult {
    /// Kept edges plus each contradictory edge flipped: the corrected
    /// orientation of every judged pair that survived omission.
    pub fn realigned_edges(&self) -> Vec<PreferenceEdge> {
        let mut edges = self.kept.clone();
        edges.extend(self.contradictory.iter().map(|e| PreferenceEdge {
            src: e.dst,
            dst: e.src,
            weight: e.weight,
        }));
        edges.sort_by(canonical_order);
        edges
    }

    /// Checks that a result belongs to a graph: identity fields agree and
    /// every partition edge is an edge of the graph with the same weight.
    pub fn matches(&self, graph: &PreferenceGraph) -> Result<()> {
        if self.prompt_key != graph.prompt_key()
            || self.node_count != graph.node_count()
            || self.edge_count != graph.edge_count()
        {
            return Err(Error::validation(
                "result",
                format!(
                    "result for {:?} ({} nodes, {} edges) does not match graph {:?} ({} nodes, {} edges)",
                    self.prompt_key,
                    self.node_count,
                    self.edge_count,
                    graph.prompt_key(),
                    graph.node_count(),
                    graph.edge_count(),
                ),
            ));
        }
        // Graph edges are in canonical order, so membership is a binary
        // search away.
        for list in [
            &self.kept,
            &self.contradictory,
            &self.omitted,
            &self.heuristic,
        ] {
            for e in list.iter() {
                let known = graph
                    .edges()
                    .binary_search_by(|g| g.key().cmp(&e.key()))
                    .is_ok_and(|at| graph.edges()[at].weight == e.weight);
                if !known {
                    return Err(Error::validation(
                        "result",
                        format!(
                            "result edge {} -> {} (weight {}) is not an edge of graph {:?}",
                            e.src,
                            e.dst,
                            e.weight,
                            graph.prompt_key(),
                        ),
                    ));
                }
            }
        }
        Ok(())
    }
}
