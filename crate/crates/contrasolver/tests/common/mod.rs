//! Brute-force oracles and seeded generators shared by the integration
//! suites. Everything here is deliberately independent of the library's
//! algorithms: closures come from matrix products, cycle checks from
//! exhaustive path search, and spanning forests from subset enumeration.

#![allow(dead_code)]

use contrasolver::graph::{PreferenceEdge, PreferenceGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn texts(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("response-{i}")).collect()
}

/// Reflexive reachability closure by iterated boolean matrix product.
#[allow(clippy::needless_range_loop)]
pub fn closure_by_matrix(edges: &[PreferenceEdge], n: usize) -> Vec<Vec<bool>> {
    let mut closure = vec![vec![false; n]; n];
    for (i, row) in closure.iter_mut().enumerate() {
        row[i] = true;
    }
    for e in edges {
        closure[e.src.index()][e.dst.index()] = true;
    }
    loop {
        let mut next = closure.clone();
        for i in 0..n {
            for k in 0..n {
                if closure[i][k] {
                    for j in 0..n {
                        if closure[k][j] {
                            next[i][j] = true;
                        }
                    }
                }
            }
        }
        if next == closure {
            return closure;
        }
        closure = next;
    }
}

/// Length of the shortest directed path, from iterated adjacency products.
#[allow(clippy::needless_range_loop)]
pub fn shortest_distance(
    edges: &[PreferenceEdge],
    n: usize,
    from: usize,
    to: usize,
) -> Option<usize> {
    if from == to {
        return Some(0);
    }
    let mut adjacency = vec![vec![false; n]; n];
    for e in edges {
        adjacency[e.src.index()][e.dst.index()] = true;
    }
    let mut power = adjacency.clone();
    for steps in 1..=n {
        if power[from][to] {
            return Some(steps);
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for k in 0..n {
                if power[i][k] {
                    for j in 0..n {
                        if adjacency[k][j] {
                            next[i][j] = true;
                        }
                    }
                }
            }
        }
        power = next;
    }
    None
}

/// Exhaustive simple-cycle search over all simple paths.
pub fn has_cycle_bruteforce(edges: &[PreferenceEdge], n: usize) -> bool {
    let mut adjacency = vec![Vec::new(); n];
    for e in edges {
        adjacency[e.src.index()].push(e.dst.index());
    }

    fn dfs(adjacency: &[Vec<usize>], start: usize, node: usize, visited: &mut [bool]) -> bool {
        for &next in &adjacency[node] {
            if next == start {
                return true;
            }
            if !visited[next] {
                visited[next] = true;
                if dfs(adjacency, start, next, visited) {
                    return true;
                }
                visited[next] = false;
            }
        }
        false
    }

    (0..n).any(|start| {
        let mut visited = vec![false; n];
        visited[start] = true;
        dfs(&adjacency, start, start, &mut visited)
    })
}

/// Weights summed in descending order, so equal multisets give equal floats.
pub fn canonical_total(edges: &[PreferenceEdge]) -> f64 {
    let mut weights: Vec<f64> = edges.iter().map(|e| e.weight).collect();
    weights.sort_by(|a, b| b.total_cmp(a));
    weights.iter().sum()
}

struct TinyDsu(Vec<usize>);

impl TinyDsu {
    fn new(n: usize) -> Self {
        TinyDsu((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Maximum spanning tree weight by enumerating every (n-1)-edge subset of a
/// connected graph's undirected projection.
pub fn brute_force_max_tree_weight(graph: &PreferenceGraph) -> f64 {
    let edges = graph.edges();
    let n = graph.node_count();
    let k = n - 1;
    assert!(edges.len() >= k, "graph must be connected");
    let mut picks: Vec<usize> = (0..k).collect();
    let mut best = f64::NEG_INFINITY;
    loop {
        let mut dsu = TinyDsu::new(n);
        if picks
            .iter()
            .all(|&e| dsu.union(edges[e].src.index(), edges[e].dst.index()))
        {
            let subset: Vec<PreferenceEdge> = picks.iter().map(|&e| edges[e]).collect();
            let total = canonical_total(&subset);
            if total > best {
                best = total;
            }
        }
        // Advance to the next k-combination in lexicographic order.
        let mut slot = k;
        loop {
            if slot == 0 {
                return best;
            }
            slot -= 1;
            if picks[slot] != edges.len() - k + slot {
                break;
            }
        }
        picks[slot] += 1;
        for later in slot + 1..k {
            picks[later] = picks[later - 1] + 1;
        }
    }
}

/// Complete tournament with a random direction per pair and weights i.i.d.
/// uniform on (0.5, 1].
pub fn complete_tournament(n: usize, seed: u64) -> PreferenceGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n as u32 {
        for j in (i + 1)..n as u32 {
            let weight = 1.0 - rng.gen::<f64>() * 0.5;
            let (src, dst) = if rng.gen::<bool>() { (i, j) } else { (j, i) };
            edges.push(PreferenceEdge::new(src, dst, weight));
        }
    }
    PreferenceGraph::new(format!("t-{seed:06}-{n:02}"), "tournament", texts(n), edges).unwrap()
}

/// Complete tournament with all-distinct weights, enforced by a per-edge
/// nudge of distinct multiples of 1e-13.
pub fn complete_tournament_distinct(n: usize, seed: u64) -> PreferenceGraph {
    let base = complete_tournament(n, seed);
    let edges: Vec<PreferenceEdge> = base
        .edges()
        .iter()
        .enumerate()
        .map(|(k, e)| PreferenceEdge {
            weight: (e.weight - k as f64 * 1e-13).clamp(0.5 + 1e-9, 1.0),
            ..*e
        })
        .collect();
    let mut weights: Vec<f64> = edges.iter().map(|e| e.weight).collect();
    weights.sort_by(f64::total_cmp);
    assert!(
        weights.windows(2).all(|w| w[0] < w[1]),
        "perturbation failed to separate weights"
    );
    PreferenceGraph::new(
        base.prompt_key().to_string(),
        base.prompt().to_string(),
        texts(n),
        edges,
    )
    .unwrap()
}
