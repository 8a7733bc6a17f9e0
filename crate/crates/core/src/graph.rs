//! Simple undirected graphs with contiguous node indices.
//!
//! Nodes are `0..n`, adjacency lists are kept sorted, and the edge set is
//! stored as unordered pairs `(u, v)` with `u < v`. Self-loops and parallel
//! edges never survive construction. Unreachable distances are represented
//! explicitly as `None`, never as an in-band sentinel value.

use std::collections::HashMap;

use crate::{Error, Result};

/// Immutable simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    /// Builds a graph on `node_count` nodes from an edge iterator.
    /// Self-loops are dropped and duplicate edges collapsed.
    ///
    /// Panics if an endpoint is out of range; callers own index validity.
    pub fn from_edges(node_count: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Graph {
        let mut set: Vec<(u32, u32)> = edges
            .into_iter()
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        set.sort_unstable();
        set.dedup();
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &set {
            assert!(
                (v as usize) < node_count,
                "edge ({u}, {v}) out of range for {node_count} nodes"
            );
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            adjacency,
            edges: set,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge set as unordered pairs with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, node: u32) -> &[u32] {
        &self.adjacency[node as usize]
    }

    pub fn degree(&self, node: u32) -> usize {
        self.adjacency[node as usize].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }
}

/// Bidirectional mapping between original node labels and indices.
#[derive(Debug, Clone)]
pub struct Labels {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl Labels {
    pub fn new() -> Labels {
        Labels {
            names: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Returns the index for `name`, interning it on first appearance.
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len() as u32;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, node: u32) -> &str {
        &self.names[node as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Identity labels "0".."n-1" for generated graphs.
    pub fn numeric(n: usize) -> Labels {
        let mut labels = Labels::new();
        for i in 0..n {
            labels.intern(&i.to_string());
        }
        labels
    }
}

impl Default for Labels {
    fn default() -> Self {
        Labels::new()
    }
}

/// Result of parsing an edge-list file.
#[derive(Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub labels: Labels,
    pub dropped_self_loops: usize,
    pub dropped_duplicates: usize,
}

/// Parses a whitespace-separated edge list.
///
/// One edge per line as two label tokens; blank lines and lines starting
/// with `#` or `%` are skipped. Labels are interned in order of first
/// appearance. Self-loops and repeated edges are dropped and counted.
/// A file with no surviving nodes is an error, as is any line that does
/// not split into exactly two tokens.
pub fn load_edge_list(text: &str) -> Result<LoadedGraph> {
    let mut labels = Labels::new();
    let mut raw_edges = Vec::new();
    let mut dropped_self_loops = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected two whitespace-separated labels, got {trimmed:?}"),
                })
            }
        };
        let u = labels.intern(a);
        let v = labels.intern(b);
        if u == v {
            dropped_self_loops += 1;
        } else {
            raw_edges.push(if u < v { (u, v) } else { (v, u) });
        }
    }
    if labels.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "edge list contains no edges".to_string(),
        });
    }
    let total = raw_edges.len();
    let graph = Graph::from_edges(labels.len(), raw_edges);
    Ok(LoadedGraph {
        dropped_duplicates: total - graph.edge_count(),
        graph,
        labels,
        dropped_self_loops,
    })
}

/// Single-source shortest-path distances in hops.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    pub source: u32,
    /// `dist[v]` is `None` when `v` is unreachable from the source.
    pub dist: Vec<Option<u32>>,
}

/// Breadth-first distances from `source`. Errors if `source` is out of range.
pub fn bfs_distances(g: &Graph, source: u32) -> Result<DistanceMatrix> {
    if source as usize >= g.node_count() {
        return Err(Error::Invalid(format!(
            "source {source} out of range for {} nodes",
            g.node_count()
        )));
    }
    let mut dist = vec![None; g.node_count()];
    dist[source as usize] = Some(0);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize].expect("queued nodes have distances");
        for &v in g.neighbors(u) {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    Ok(DistanceMatrix { source, dist })
}

/// Connected components as sorted node lists, ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n as u32 {
        if seen[start as usize] {
            continue;
        }
        let mut members = Vec::new();
        seen[start as usize] = true;
        stack.push(start);
        while let Some(u) = stack.pop() {
            members.push(u);
            for &v in g.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

/// A graph restricted to a node subset, with the mapping back to the parent.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    /// `parent[i]` is the parent-graph index of subgraph node `i`.
    pub parent: Vec<u32>,
}

/// Subgraph induced by `nodes` (deduplicated, kept in ascending order).
/// Panics if a node is out of range; callers own index validity.
pub fn induced_subgraph(g: &Graph, nodes: &[u32]) -> Subgraph {
    let mut parent: Vec<u32> = nodes.to_vec();
    parent.sort_unstable();
    parent.dedup();
    let mut local = vec![u32::MAX; g.node_count()];
    for (i, &p) in parent.iter().enumerate() {
        assert!(
            (p as usize) < g.node_count(),
            "node {p} out of range for {} nodes",
            g.node_count()
        );
        local[p as usize] = i as u32;
    }
    let edges = g
        .edges()
        .iter()
        .filter_map(|&(u, v)| {
            let (lu, lv) = (local[u as usize], local[v as usize]);
            (lu != u32::MAX && lv != u32::MAX).then_some((lu, lv))
        })
        .collect::<Vec<_>>();
    Subgraph {
        graph: Graph::from_edges(parent.len(), edges),
        parent,
    }
}

/// Largest connected component (ties broken by smallest node index).
pub fn giant_component(g: &Graph) -> Subgraph {
    let components = connected_components(g);
    let giant = components
        .iter()
        .max_by_key(|c| (c.len(), std::cmp::Reverse(c[0])))
        .cloned()
        .unwrap_or_default();
    induced_subgraph(g, &giant)
}

/// Core number of every node (largest k such that the node survives in the
/// k-core), via bucket peeling in O(n + m).
pub fn core_numbers(g: &Graph) -> Vec<u32> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let mut degree: Vec<usize> = g.degrees();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    // Bucket sort nodes by degree; `position` tracks each node's slot so a
    // node can be moved when its effective degree drops.
    let mut bins = vec![0usize; max_degree + 2];
    for &d in &degree {
        bins[d] += 1;
    }
    let mut start = 0;
    for bin in bins.iter_mut() {
        let count = *bin;
        *bin = start;
        start += count;
    }
    let mut position = vec![0usize; n];
    let mut ordered = vec![0u32; n];
    for v in 0..n {
        let p = bins[degree[v]];
        position[v] = p;
        ordered[p] = v as u32;
        bins[degree[v]] += 1;
    }
    for d in (1..bins.len()).rev() {
        bins[d] = bins[d - 1];
    }
    bins[0] = 0;

    let mut core = vec![0u32; n];
    for i in 0..n {
        let v = ordered[i];
        core[v as usize] = degree[v as usize] as u32;
        for &u in g.neighbors(v) {
            let u = u as usize;
            if degree[u] > degree[v as usize] {
                // Swap u to the front of its bucket, then shrink its degree.
                let du = degree[u];
                let pu = position[u];
                let pw = bins[du];
                let w = ordered[pw];
                if u as u32 != w {
                    ordered.swap(pu, pw);
                    position[u] = pw;
                    position[w as usize] = pu;
                }
                bins[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    core
}
