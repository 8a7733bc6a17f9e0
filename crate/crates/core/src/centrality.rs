//! Classical node centrality measures on the full graph.
//!
//! All measures return one finite score per node. Iterative measures share
//! a parameter record ([`CentralityParams`]); the rest are closed-form.
//! Scores are deterministic for a given graph, independent of thread count.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::graph::{connected_components, induced_subgraph, Graph};
use crate::{Error, Result};

/// Parameters for the iterative and parameterized measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralityParams {
    /// Katz attenuation as a fraction of 1/lambda_max.
    pub katz_fraction: f64,
    pub pagerank_damping: f64,
    pub diffusion_lambda: f64,
    pub convergence_tol: f64,
    pub max_iters: usize,
}

impl Default for CentralityParams {
    fn default() -> Self {
        CentralityParams {
            katz_fraction: 0.85,
            pagerank_damping: 0.85,
            diffusion_lambda: 1.0,
            convergence_tol: 1e-9,
            max_iters: 1000,
        }
    }
}

impl CentralityParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.katz_fraction && self.katz_fraction < 1.0) {
            return Err(Error::Invalid(format!(
                "katz_fraction {} outside (0, 1)",
                self.katz_fraction
            )));
        }
        if !(0.0 < self.pagerank_damping && self.pagerank_damping < 1.0) {
            return Err(Error::Invalid(format!(
                "pagerank_damping {} outside (0, 1)",
                self.pagerank_damping
            )));
        }
        if !self.diffusion_lambda.is_finite() || self.diffusion_lambda <= 0.0 {
            return Err(Error::Invalid(format!(
                "diffusion_lambda {} must be positive",
                self.diffusion_lambda
            )));
        }
        if !self.convergence_tol.is_finite() || self.convergence_tol <= 0.0 {
            return Err(Error::Invalid(format!(
                "convergence_tol {} must be positive",
                self.convergence_tol
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Invalid("max_iters must be at least 1".to_string()));
        }
        Ok(())
    }
}

/// The ten classical measures, in canonical report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassicalMeasure {
    Degree,
    Betweenness,
    Closeness,
    Katz,
    Pagerank,
    Subgraph,
    Mnc,
    Leverage,
    Diffusion,
    Laplacian,
}

pub const CLASSICAL_ORDER: [ClassicalMeasure; 10] = [
    ClassicalMeasure::Degree,
    ClassicalMeasure::Betweenness,
    ClassicalMeasure::Closeness,
    ClassicalMeasure::Katz,
    ClassicalMeasure::Pagerank,
    ClassicalMeasure::Subgraph,
    ClassicalMeasure::Mnc,
    ClassicalMeasure::Leverage,
    ClassicalMeasure::Diffusion,
    ClassicalMeasure::Laplacian,
];

impl ClassicalMeasure {
    pub fn id(self) -> &'static str {
        match self {
            ClassicalMeasure::Degree => "d",
            ClassicalMeasure::Betweenness => "b",
            ClassicalMeasure::Closeness => "c",
            ClassicalMeasure::Katz => "k",
            ClassicalMeasure::Pagerank => "p",
            ClassicalMeasure::Subgraph => "s",
            ClassicalMeasure::Mnc => "m",
            ClassicalMeasure::Leverage => "lev",
            ClassicalMeasure::Diffusion => "dif",
            ClassicalMeasure::Laplacian => "lap",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassicalMeasure::Degree => "degree",
            ClassicalMeasure::Betweenness => "betweenness",
            ClassicalMeasure::Closeness => "closeness",
            ClassicalMeasure::Katz => "katz",
            ClassicalMeasure::Pagerank => "pagerank",
            ClassicalMeasure::Subgraph => "subgraph",
            ClassicalMeasure::Mnc => "maximum neighborhood component",
            ClassicalMeasure::Leverage => "leverage",
            ClassicalMeasure::Diffusion => "diffusion degree",
            ClassicalMeasure::Laplacian => "laplacian",
        }
    }
}

/// One score per node plus the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub measure: String,
    pub scores: Vec<f64>,
    pub params: BTreeMap<String, f64>,
}

impl CentralityVector {
    pub fn new(measure: &str, scores: Vec<f64>) -> CentralityVector {
        CentralityVector {
            measure: measure.to_string(),
            scores,
            params: BTreeMap::new(),
        }
    }

    fn with_params(mut self, params: &[(&str, f64)]) -> CentralityVector {
        for (k, v) in params {
            self.params.insert(k.to_string(), *v);
        }
        self
    }
}

/// Dispatches a single measure by name.
pub fn classical(
    g: &Graph,
    measure: ClassicalMeasure,
    params: &CentralityParams,
) -> Result<CentralityVector> {
    params.validate()?;
    let id = measure.id();
    Ok(match measure {
        ClassicalMeasure::Degree => CentralityVector::new(id, degree(g)),
        ClassicalMeasure::Betweenness => CentralityVector::new(id, betweenness(g)),
        ClassicalMeasure::Closeness => CentralityVector::new(id, closeness(g)),
        ClassicalMeasure::Katz => CentralityVector::new(id, katz(g, params)?)
            .with_params(&[("katz_fraction", params.katz_fraction)]),
        ClassicalMeasure::Pagerank => CentralityVector::new(id, pagerank(g, params)?)
            .with_params(&[("damping", params.pagerank_damping)]),
        ClassicalMeasure::Subgraph => CentralityVector::new(id, subgraph_centrality(g)?),
        ClassicalMeasure::Mnc => CentralityVector::new(id, mnc(g)),
        ClassicalMeasure::Leverage => CentralityVector::new(id, leverage(g)),
        ClassicalMeasure::Diffusion => CentralityVector::new(id, diffusion_degree(g, params))
            .with_params(&[("lambda", params.diffusion_lambda)]),
        ClassicalMeasure::Laplacian => CentralityVector::new(id, laplacian_centrality(g)),
    })
}

/// All ten measures in canonical order.
pub fn all_classical(g: &Graph, params: &CentralityParams) -> Result<Vec<CentralityVector>> {
    CLASSICAL_ORDER
        .iter()
        .map(|&m| classical(g, m, params))
        .collect()
}

pub fn degree(g: &Graph) -> Vec<f64> {
    g.degrees().iter().map(|&d| d as f64).collect()
}

/// Shortest-path betweenness (Brandes), unnormalized, counted over
/// unordered pairs. Disconnected pairs contribute nothing.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    // Fixed-size source chunks keep the floating-point accumulation order
    // independent of the worker count.
    const CHUNK: usize = 64;
    let sources: Vec<u32> = (0..n as u32).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0f64; n];
            let mut sigma = vec![0.0f64; n];
            let mut dist = vec![-1i32; n];
            let mut delta = vec![0.0f64; n];
            let mut order = Vec::with_capacity(n);
            for &s in chunk {
                brandes_source(g, s, &mut sigma, &mut dist, &mut delta, &mut order);
                for v in 0..n {
                    if v as u32 != s {
                        acc[v] += delta[v];
                    }
                }
            }
            acc
        })
        .collect();
    let mut bc = vec![0.0f64; n];
    for partial in partials {
        for (b, p) in bc.iter_mut().zip(partial) {
            *b += p;
        }
    }
    // Each unordered pair was seen from both endpoints.
    for b in &mut bc {
        *b /= 2.0;
    }
    bc
}

fn brandes_source(
    g: &Graph,
    s: u32,
    sigma: &mut [f64],
    dist: &mut [i32],
    delta: &mut [f64],
    order: &mut Vec<u32>,
) {
    for v in 0..g.node_count() {
        sigma[v] = 0.0;
        dist[v] = -1;
        delta[v] = 0.0;
    }
    order.clear();
    sigma[s as usize] = 1.0;
    dist[s as usize] = 0;
    let mut head = 0;
    order.push(s);
    while head < order.len() {
        let u = order[head];
        head += 1;
        let du = dist[u as usize];
        for &v in g.neighbors(u) {
            if dist[v as usize] < 0 {
                dist[v as usize] = du + 1;
                order.push(v);
            }
            if dist[v as usize] == du + 1 {
                sigma[v as usize] += sigma[u as usize];
            }
        }
    }
    for &w in order.iter().rev() {
        let dw = dist[w as usize];
        let coeff = (1.0 + delta[w as usize]) / sigma[w as usize];
        for &v in g.neighbors(w) {
            if dist[v as usize] == dw - 1 {
                delta[v as usize] += sigma[v as usize] * coeff;
            }
        }
    }
}

/// Closeness with the component-size correction for disconnected graphs:
/// ((n_i - 1) / (N - 1)) * ((n_i - 1) / sum of distances), where n_i is the
/// size of the node's component. Isolated nodes score 0.
pub fn closeness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    (0..n as u32)
        .into_par_iter()
        .map(|s| {
            let d = crate::graph::bfs_distances(g, s).expect("source in range");
            let mut reach = 0u64;
            let mut total = 0u64;
            for dv in d.dist.iter().flatten() {
                reach += 1;
                total += *dv as u64;
            }
            if reach <= 1 {
                return 0.0;
            }
            let frac = (reach - 1) as f64 / (n as f64 - 1.0);
            frac * ((reach - 1) as f64 / total as f64)
        })
        .collect()
}

/// Katz centrality: the fixed point of x = a*A*x + 1 with attenuation
/// a = katz_fraction / lambda_max. Requires at least one edge.
pub fn katz(g: &Graph, params: &CentralityParams) -> Result<Vec<f64>> {
    if g.edge_count() == 0 {
        return Err(Error::Invalid(
            "katz centrality requires at least one edge".to_string(),
        ));
    }
    let lambda = spectral_radius(g, params)?;
    let a = params.katz_fraction / lambda;
    let n = g.node_count();
    let mut x = vec![1.0f64; n];
    let mut next = vec![0.0f64; n];
    for _ in 0..params.max_iters {
        let mut change: f64 = 0.0;
        for v in 0..n {
            let s: f64 = g
                .neighbors(v as u32)
                .iter()
                .map(|&u| x[u as usize])
                .sum();
            next[v] = a * s + 1.0;
            change = change.max((next[v] - x[v]).abs());
        }
        std::mem::swap(&mut x, &mut next);
        if change <= params.convergence_tol {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        what: "katz iteration",
        iters: params.max_iters,
    })
}

/// Largest adjacency eigenvalue, by power iteration on A + I run separately
/// per connected component (the shift makes the top eigenvalue simple within
/// a component, and per-component runs avoid cross-component degeneracy).
fn spectral_radius(g: &Graph, params: &CentralityParams) -> Result<f64> {
    let mut best: f64 = 0.0;
    for comp in connected_components(g) {
        if comp.len() == 1 {
            continue;
        }
        let sub = induced_subgraph(g, &comp);
        let sg = &sub.graph;
        let n = sg.node_count();
        let step = |x: &[f64], y: &mut [f64]| {
            for v in 0..n {
                let s: f64 = sg
                    .neighbors(v as u32)
                    .iter()
                    .map(|&u| x[u as usize])
                    .sum();
                y[v] = s + x[v];
            }
        };
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        let mut y = vec![0.0f64; n];
        let mut lambda = 0.0f64;
        let mut lambda_prev = f64::INFINITY;
        let mut converged = false;
        for _ in 0..params.max_iters {
            step(&x, &mut y);
            // x is unit length, so the Rayleigh quotient of A + I is x . y.
            lambda = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            if (lambda - lambda_prev).abs() <= params.convergence_tol {
                converged = true;
                break;
            }
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            for (xv, yv) in x.iter_mut().zip(&y) {
                *xv = yv / norm;
            }
            lambda_prev = lambda;
        }
        if !converged {
            // A near-degenerate top cluster keeps the quotient drifting
            // inside the cluster indefinitely. Any value in the cluster
            // serves, since only fraction / lambda is consumed downstream,
            // so accept the iterate if its eigen-residual is small: that
            // bounds the distance to a true eigenvalue at the top.
            step(&x, &mut y);
            lambda = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            let residual = x
                .iter()
                .zip(&y)
                .map(|(xv, yv)| (yv - lambda * xv) * (yv - lambda * xv))
                .sum::<f64>()
                .sqrt();
            if !(residual <= 1e-3 * lambda.max(1.0)) {
                return Err(Error::NoConvergence {
                    what: "power iteration",
                    iters: params.max_iters,
                });
            }
        }
        best = best.max(lambda - 1.0);
    }
    if best <= 0.0 {
        return Err(Error::Invalid(
            "spectral radius is zero on an edgeless graph".to_string(),
        ));
    }
    Ok(best)
}

/// PageRank with uniform teleport; dangling mass is redistributed uniformly.
/// Scores sum to 1.
pub fn pagerank(g: &Graph, params: &CentralityParams) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let d = params.pagerank_damping;
    let nf = n as f64;
    let mut p = vec![1.0 / nf; n];
    let mut next = vec![0.0f64; n];
    for _ in 0..params.max_iters {
        let dangling: f64 = (0..n)
            .filter(|&v| g.degree(v as u32) == 0)
            .map(|v| p[v])
            .sum();
        let base = (1.0 - d) / nf + d * dangling / nf;
        let mut change: f64 = 0.0;
        for v in 0..n {
            let inbound: f64 = g
                .neighbors(v as u32)
                .iter()
                .map(|&u| p[u as usize] / g.degree(u) as f64)
                .sum();
            next[v] = base + d * inbound;
            change = change.max((next[v] - p[v]).abs());
        }
        std::mem::swap(&mut p, &mut next);
        if change <= params.convergence_tol {
            return Ok(p);
        }
    }
    Err(Error::NoConvergence {
        what: "pagerank iteration",
        iters: params.max_iters,
    })
}

/// Subgraph centrality: SC(i) = (e^A)_ii, via a full symmetric
/// eigendecomposition run per connected component.
pub fn subgraph_centrality(g: &Graph) -> Result<Vec<f64>> {
    let mut scores = vec![0.0f64; g.node_count()];
    for comp in connected_components(g) {
        if comp.len() == 1 {
            // e^0 on an isolated node.
            scores[comp[0] as usize] = 1.0;
            continue;
        }
        let sub = induced_subgraph(g, &comp);
        let n = sub.graph.node_count();
        let mut a = DMatrix::<f64>::zeros(n, n);
        for &(u, v) in sub.graph.edges() {
            a[(u as usize, v as usize)] = 1.0;
            a[(v as usize, u as usize)] = 1.0;
        }
        let eigen = nalgebra::SymmetricEigen::try_new(a, f64::EPSILON, 100_000)
            .ok_or(Error::NoConvergence {
                what: "symmetric eigendecomposition",
                iters: 100_000,
            })?;
        let weights: Vec<f64> = eigen.eigenvalues.iter().map(|&l| l.exp()).collect();
        for i in 0..n {
            let mut sc = 0.0;
            for (j, w) in weights.iter().enumerate() {
                let v = eigen.eigenvectors[(i, j)];
                sc += v * v * w;
            }
            scores[sub.parent[i] as usize] = sc;
        }
    }
    Ok(scores)
}

/// Maximum neighborhood component: the size of the largest connected
/// component of the subgraph induced by a node's neighbors.
pub fn mnc(g: &Graph) -> Vec<f64> {
    (0..g.node_count() as u32)
        .map(|v| {
            let neighbors = g.neighbors(v);
            if neighbors.is_empty() {
                return 0.0;
            }
            let sub = induced_subgraph(g, neighbors);
            connected_components(&sub.graph)
                .iter()
                .map(Vec::len)
                .max()
                .unwrap_or(0) as f64
        })
        .collect()
}

/// Leverage centrality: mean relative degree advantage over the
/// neighborhood, (1/k_i) * sum over neighbors of (k_i - k_j)/(k_i + k_j).
pub fn leverage(g: &Graph) -> Vec<f64> {
    (0..g.node_count() as u32)
        .map(|v| {
            let k = g.degree(v) as f64;
            if k == 0.0 {
                return 0.0;
            }
            let s: f64 = g
                .neighbors(v)
                .iter()
                .map(|&u| {
                    let kj = g.degree(u) as f64;
                    (k - kj) / (k + kj)
                })
                .sum();
            s / k
        })
        .collect()
}

/// Diffusion degree: lambda * k_i + lambda * sum of neighbor degrees.
pub fn diffusion_degree(g: &Graph, params: &CentralityParams) -> Vec<f64> {
    let l = params.diffusion_lambda;
    (0..g.node_count() as u32)
        .map(|v| {
            let k = g.degree(v) as f64;
            let s: f64 = g.neighbors(v).iter().map(|&u| g.degree(u) as f64).sum();
            l * k + l * s
        })
        .collect()
}

/// Laplacian centrality via the closed form k_i^2 + k_i + 2 * sum of
/// neighbor degrees, equal to the graph's Laplacian energy drop when the
/// node is removed.
pub fn laplacian_centrality(g: &Graph) -> Vec<f64> {
    (0..g.node_count() as u32)
        .map(|v| {
            let k = g.degree(v) as f64;
            let s: f64 = g.neighbors(v).iter().map(|&u| g.degree(u) as f64).sum();
            k * k + k + 2.0 * s
        })
        .collect()
}
