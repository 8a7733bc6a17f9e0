//! Shared fixtures and independent oracle implementations for the
//! integration suites. Oracles here deliberately use different algorithms
//! from the library (brute force, enumeration, dense algebra) so agreement
//! is evidence, not tautology.
#![allow(dead_code)]

use commcent::graph::{bfs_distances, induced_subgraph};
use commcent::{Graph, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two triangles joined by one bridge edge; the canonical 6-node fixture.
pub fn two_triangles() -> Graph {
    Graph::from_edges(
        6,
        [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)],
    )
}

/// The planted two-community split of [`two_triangles`].
pub fn p2() -> Partition {
    Partition::from_assignment(&[0, 0, 0, 1, 1, 1])
}

pub fn path3() -> Graph {
    Graph::from_edges(3, [(0, 1), (1, 2)])
}

pub fn star5() -> Graph {
    Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
}

pub fn k3() -> Graph {
    Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)])
}

/// Erdos-Renyi style random graph on `n` nodes with edge probability `p`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Random graph with minimum degree 1: isolated nodes get an edge to the
/// next index.
pub fn random_graph_min_degree_one(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    assert!(n >= 2);
    let g = random_graph(rng, n, p);
    let mut edges: Vec<(u32, u32)> = g.edges().to_vec();
    for v in 0..n as u32 {
        if g.degree(v) == 0 {
            let u = (v + 1) % n as u32;
            edges.push(if v < u { (v, u) } else { (u, v) });
        }
    }
    Graph::from_edges(n, edges)
}

/// Random partition into at most `max_communities` groups.
pub fn random_partition(rng: &mut ChaCha8Rng, n: usize, max_communities: usize) -> Partition {
    let k = rng.gen_range(1..=max_communities) as u32;
    let raw: Vec<u32> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Partition::from_assignment(&raw)
}

/// Quadratic pair-count Kendall tau-b. The final expression is kept
/// identical to the library's so agreement is bitwise.
pub fn tau_pair_oracle(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut n1, mut n2) = (0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let a = x[i].partial_cmp(&x[j]).unwrap();
            let b = y[i].partial_cmp(&y[j]).unwrap();
            use std::cmp::Ordering::Equal;
            if a == Equal {
                n1 += 1;
            }
            if b == Equal {
                n2 += 1;
            }
            if a != Equal && b != Equal {
                if a == b {
                    concordant += 1;
                } else {
                    discordant += 1;
                }
            }
        }
    }
    let n0 = (n as i64) * (n as i64 - 1) / 2;
    if n0 == n1 || n0 == n2 {
        return None;
    }
    Some((concordant - discordant) as f64 / (((n0 - n1) as f64) * ((n0 - n2) as f64)).sqrt())
}

/// Betweenness by explicit enumeration of every shortest path.
pub fn betweenness_path_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut bc = vec![0.0f64; n];
    for s in 0..n as u32 {
        let dist = bfs_distances(g, s).unwrap().dist;
        for t in (s + 1)..n as u32 {
            if dist[t as usize].is_none() {
                continue;
            }
            let mut through = vec![0u64; n];
            let mut total = 0u64;
            let mut stack = Vec::new();
            enumerate_paths(g, &dist, t, s, &mut stack, &mut through, &mut total);
            for v in 0..n {
                if through[v] > 0 {
                    bc[v] += through[v] as f64 / total as f64;
                }
            }
        }
    }
    bc
}

fn enumerate_paths(
    g: &Graph,
    dist: &[Option<u32>],
    v: u32,
    s: u32,
    stack: &mut Vec<u32>,
    through: &mut [u64],
    total: &mut u64,
) {
    if v == s {
        *total += 1;
        for &w in stack.iter() {
            through[w as usize] += 1;
        }
        return;
    }
    let dv = dist[v as usize].unwrap();
    for &u in g.neighbors(v) {
        if dist[u as usize] == Some(dv - 1) {
            if u != s {
                stack.push(u);
            }
            enumerate_paths(g, dist, u, s, stack, through, total);
            if u != s {
                stack.pop();
            }
        }
    }
}

/// Laplacian energy Σ d_i (d_i + 1); integer-valued on simple graphs.
pub fn laplacian_energy(g: &Graph) -> f64 {
    g.degrees().iter().map(|&d| (d * (d + 1)) as f64).sum()
}

/// Laplacian centrality by literally deleting each node and recomputing
/// the energy.
pub fn laplacian_drop_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let base = laplacian_energy(g);
    (0..n as u32)
        .map(|v| {
            let rest: Vec<u32> = (0..n as u32).filter(|&u| u != v).collect();
            let sub = induced_subgraph(g, &rest);
            base - laplacian_energy(&sub.graph)
        })
        .collect()
}

/// Every set partition of {0, .., n-1} as a normalized assignment vector
/// (restricted growth strings), Bell(n) of them.
pub fn all_partitions(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut a = vec![0u32; n];
    fn rec(i: usize, max_used: u32, a: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == a.len() {
            out.push(a.clone());
            return;
        }
        for v in 0..=max_used + 1 {
            a[i] = v;
            rec(i + 1, max_used.max(v), a, out);
        }
    }
    if n == 0 {
        return out;
    }
    rec(1, 0, &mut a, &mut out);
    out
}

/// Draws from the discrete power law P(x) ∝ x^(-alpha) on x ≥ 1 by
/// inverting a cumulative table (tail truncated below 1e-12 of the mass).
pub fn sample_discrete_powerlaw(alpha: f64, count: usize, seed: u64) -> Vec<u64> {
    let mut cumulative = Vec::new();
    let mut total = 0.0f64;
    let mut v = 1u64;
    loop {
        let w = (v as f64).powf(-alpha);
        total += w;
        cumulative.push((v, total));
        if w / total < 1e-12 || v > 5_000_000 {
            break;
        }
        v += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u = rng.gen_range(0.0..total);
            let i = cumulative.partition_point(|&(_, c)| c < u);
            cumulative[i.min(cumulative.len() - 1)].0
        })
        .collect()
}

/// Geometric sample on {1, 2, ...} with success probability `p`.
pub fn sample_geometric(p: f64, count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u: f64 = rng.gen_range(0.0f64..1.0);
            1 + ((1.0 - u).ln() / (1.0 - p).ln()).floor() as u64
        })
        .collect()
}
