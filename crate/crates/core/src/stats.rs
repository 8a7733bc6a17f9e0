//! Topological feature extraction and power-law fitting.
//!
//! Macroscopic features describe the whole graph; mesoscopic features
//! describe it relative to a partition. Together they form the sixteen
//! regressors of the feature study. The degree-distribution exponent is
//! fitted by discrete maximum likelihood with the lower cutoff chosen to
//! minimize the Kolmogorov-Smirnov distance, and a semi-parametric bootstrap
//! decides whether the power law is a plausible fit at all.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::{bfs_distances, giant_component, induced_subgraph, Graph};
use crate::community::community_profiles;
use crate::partition::{mixing_parameter, modularity, Partition};
use crate::{Error, Result};

/// Whole-graph features. Assortativity is undefined on regular graphs,
/// distances are undefined when the giant component is a single node, and
/// the exponent fit is undefined when the degree sequence is too small.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroFeatures {
    pub density: f64,
    pub transitivity: f64,
    pub assortativity: Option<f64>,
    pub avg_distance: Option<f64>,
    pub diameter: Option<f64>,
    pub efficiency: f64,
    pub gamma_pred: Option<f64>,
    pub ks_pass: Option<bool>,
}

/// Partition-relative features, each aggregated as an unweighted mean over
/// communities (or over nodes, for embeddedness).
#[derive(Debug, Clone, PartialEq)]
pub struct MesoFeatures {
    pub mixing_parameter: f64,
    pub modularity: f64,
    pub internal_distance: f64,
    pub internal_density: f64,
    pub max_odf: f64,
    pub avg_odf: f64,
    pub flake_odf: f64,
    pub embeddedness: f64,
    pub hub_dominance: f64,
}

/// The sixteen regression features of one network.
#[derive(Debug, Clone, PartialEq)]
pub struct TopoFeatures {
    pub macros: MacroFeatures,
    pub mesos: MesoFeatures,
}

/// Feature ids in canonical report order.
pub const FEATURE_ORDER: [&str; 16] = [
    "density",
    "transitivity",
    "assortativity",
    "avg_distance",
    "diameter",
    "efficiency",
    "gamma_pred",
    "mixing_parameter",
    "modularity",
    "internal_distance",
    "internal_density",
    "max_odf",
    "avg_odf",
    "flake_odf",
    "embeddedness",
    "hub_dominance",
];

impl TopoFeatures {
    /// Value of a feature by id; `None` marks an undefined value.
    pub fn get(&self, feature: &str) -> Option<f64> {
        match feature {
            "density" => Some(self.macros.density),
            "transitivity" => Some(self.macros.transitivity),
            "assortativity" => self.macros.assortativity,
            "avg_distance" => self.macros.avg_distance,
            "diameter" => self.macros.diameter,
            "efficiency" => Some(self.macros.efficiency),
            "gamma_pred" => self.macros.gamma_pred,
            "mixing_parameter" => Some(self.mesos.mixing_parameter),
            "modularity" => Some(self.mesos.modularity),
            "internal_distance" => Some(self.mesos.internal_distance),
            "internal_density" => Some(self.mesos.internal_density),
            "max_odf" => Some(self.mesos.max_odf),
            "avg_odf" => Some(self.mesos.avg_odf),
            "flake_odf" => Some(self.mesos.flake_odf),
            "embeddedness" => Some(self.mesos.embeddedness),
            "hub_dominance" => Some(self.mesos.hub_dominance),
            _ => None,
        }
    }
}

/// Pearson correlation; `None` when either side has zero variance or fewer
/// than two points.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        let dx = x[i] - mx;
        let dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// All macroscopic features of `g`. Requires at least two nodes.
pub fn macro_features(g: &Graph) -> Result<MacroFeatures> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::Invalid(format!(
            "macro features need at least 2 nodes, got {n}"
        )));
    }
    let m = g.edge_count() as f64;
    let density = 2.0 * m / (n as f64 * (n - 1) as f64);

    // 3 * triangles equals the edge-wise common-neighbor count; connected
    // triples are centered at each node.
    let mut three_triangles = 0u64;
    for &(u, v) in g.edges() {
        three_triangles += sorted_intersection_count(g.neighbors(u), g.neighbors(v));
    }
    let triples: u64 = g
        .degrees()
        .iter()
        .map(|&k| (k as u64) * (k as u64).saturating_sub(1) / 2)
        .sum();
    let transitivity = if triples == 0 {
        0.0
    } else {
        three_triangles as f64 / triples as f64
    };

    // Endpoint degrees over both edge orientations.
    let mut xs = Vec::with_capacity(2 * g.edge_count());
    let mut ys = Vec::with_capacity(2 * g.edge_count());
    for &(u, v) in g.edges() {
        let (ku, kv) = (g.degree(u) as f64, g.degree(v) as f64);
        xs.push(ku);
        ys.push(kv);
        xs.push(kv);
        ys.push(ku);
    }
    let assortativity = pearson(&xs, &ys);

    // One BFS per source: efficiency over all ordered pairs of the whole
    // graph, distances restricted to the giant component. Per-source sums
    // are collected in index order so the totals are bit-stable.
    let giant = giant_component(g);
    let in_giant = {
        let mut flags = vec![false; n];
        for &v in &giant.parent {
            flags[v as usize] = true;
        }
        flags
    };
    let per_source: Vec<(f64, u64, u32)> = (0..n as u32)
        .into_par_iter()
        .map(|s| {
            let dist = bfs_distances(g, s).expect("source in range").dist;
            let mut inv_sum = 0.0;
            let mut giant_sum = 0u64;
            let mut giant_max = 0u32;
            for (t, d) in dist.iter().enumerate() {
                if let Some(d) = *d {
                    if d > 0 {
                        inv_sum += 1.0 / d as f64;
                        if in_giant[s as usize] && in_giant[t] {
                            giant_sum += d as u64;
                            giant_max = giant_max.max(d);
                        }
                    }
                }
            }
            (inv_sum, giant_sum, giant_max)
        })
        .collect();
    let efficiency =
        per_source.iter().map(|t| t.0).sum::<f64>() / (n as f64 * (n - 1) as f64);
    let ng = giant.parent.len();
    let (avg_distance, diameter) = if ng < 2 {
        (None, None)
    } else {
        let total: u64 = per_source.iter().map(|t| t.1).sum();
        let max = per_source.iter().map(|t| t.2).max().unwrap_or(0);
        (
            Some(total as f64 / (ng as f64 * (ng - 1) as f64)),
            Some(max as f64),
        )
    };

    let degrees: Vec<u64> = g
        .degrees()
        .iter()
        .filter(|&&k| k > 0)
        .map(|&k| k as u64)
        .collect();
    let (gamma_pred, ks_pass) = match fit_powerlaw(&degrees) {
        Ok(fit) => (Some(fit.alpha), Some(fit.ks_pass)),
        Err(_) => (None, None),
    };

    Ok(MacroFeatures {
        density,
        transitivity,
        assortativity,
        avg_distance,
        diameter,
        efficiency,
        gamma_pred,
        ks_pass,
    })
}

fn sorted_intersection_count(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// All mesoscopic features of `g` under `p`.
pub fn meso_features(g: &Graph, p: &Partition) -> Result<MesoFeatures> {
    let mixing = mixing_parameter(g, p)?;
    let q = modularity(g, p)?;
    let profiles = community_profiles(g, p)?;

    let n_comm = p.community_count();
    let mut internal_distance = 0.0;
    let mut internal_density = 0.0;
    let mut max_odf = 0.0;
    let mut avg_odf = 0.0;
    let mut flake_odf = 0.0;
    let mut hub_dominance = 0.0;
    for c in 0..n_comm as u32 {
        let members = p.members(c);
        let nc = members.len();
        let sub = induced_subgraph(g, members);
        if nc > 1 {
            let mc = sub.graph.edge_count() as f64;
            internal_density += 2.0 * mc / (nc as f64 * (nc - 1) as f64);
            let mut dist_sum = 0u64;
            let mut pair_count = 0u64;
            for s in 0..nc as u32 {
                for d in bfs_distances(&sub.graph, s)
                    .expect("source in range")
                    .dist
                    .iter()
                    .flatten()
                {
                    if *d > 0 {
                        dist_sum += *d as u64;
                        pair_count += 1;
                    }
                }
            }
            if pair_count > 0 {
                internal_distance += dist_sum as f64 / pair_count as f64;
            }
            hub_dominance += members
                .iter()
                .map(|&v| profiles[v as usize].k_in as f64 / (nc - 1) as f64)
                .fold(0.0, f64::max);
        }
        let mut c_max_odf = 0.0f64;
        let mut c_sum_odf = 0.0;
        let mut c_flake = 0usize;
        for &v in members {
            let prof = &profiles[v as usize];
            let odf = if prof.k == 0 {
                0.0
            } else {
                prof.k_out as f64 / prof.k as f64
            };
            c_max_odf = c_max_odf.max(odf);
            c_sum_odf += odf;
            if (prof.k_in as f64) < prof.k as f64 / 2.0 {
                c_flake += 1;
            }
        }
        max_odf += c_max_odf;
        avg_odf += c_sum_odf / nc as f64;
        flake_odf += c_flake as f64 / nc as f64;
    }
    let nc_f = n_comm as f64;

    let mut emb_sum = 0.0;
    let mut emb_count = 0usize;
    for prof in &profiles {
        if prof.k > 0 {
            emb_sum += prof.k_in as f64 / prof.k as f64;
            emb_count += 1;
        }
    }
    let embeddedness = if emb_count == 0 {
        0.0
    } else {
        emb_sum / emb_count as f64
    };

    Ok(MesoFeatures {
        mixing_parameter: mixing,
        modularity: q,
        internal_distance: internal_distance / nc_f,
        internal_density: internal_density / nc_f,
        max_odf: max_odf / nc_f,
        avg_odf: avg_odf / nc_f,
        flake_odf: flake_odf / nc_f,
        embeddedness,
        hub_dominance: hub_dominance / nc_f,
    })
}

/// Macroscopic and mesoscopic features together.
pub fn topo_features(g: &Graph, p: &Partition) -> Result<TopoFeatures> {
    Ok(TopoFeatures {
        macros: macro_features(g)?,
        mesos: meso_features(g, p)?,
    })
}

/// A fitted discrete power law.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerlawFit {
    pub alpha: f64,
    pub x_min: u64,
    /// KS distance between the empirical and fitted tail CDFs.
    pub ks: f64,
    /// Bootstrap fraction of synthetic samples at least as far from their
    /// own fit as the data is from this one.
    pub p_value: f64,
    /// True when p_value >= 0.1.
    pub ks_pass: bool,
}

/// Continuous power-law MLE, alpha = 1 + n / sum ln(x / x_min).
pub fn continuous_mle_alpha(xs: &[f64], x_min: f64) -> f64 {
    let log_sum: f64 = xs.iter().map(|&x| (x / x_min).ln()).sum();
    1.0 + xs.len() as f64 / log_sum
}

/// Hurwitz zeta, sum over k >= 0 of (q + k)^-alpha: 1000 direct terms plus
/// an Euler-Maclaurin tail.
fn hurwitz_zeta(alpha: f64, q: f64) -> f64 {
    const TERMS: usize = 1000;
    let mut sum = 0.0;
    for k in 0..TERMS {
        sum += (q + k as f64).powf(-alpha);
    }
    let edge = q + TERMS as f64;
    sum + edge.powf(1.0 - alpha) / (alpha - 1.0) + 0.5 * edge.powf(-alpha)
        + alpha * edge.powf(-alpha - 1.0) / 12.0
}

/// Discrete power-law log-likelihood maximizer over alpha in (1, 20], by
/// golden-section search to 1e-6.
fn mle_alpha(n_tail: f64, log_sum: f64, x_min: u64) -> f64 {
    let neg_likelihood =
        |alpha: f64| n_tail * hurwitz_zeta(alpha, x_min as f64).ln() + alpha * log_sum;
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut lo = 1.000001;
    let mut hi = 20.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = neg_likelihood(x1);
    let mut f2 = neg_likelihood(x2);
    while hi - lo > 1e-6 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = neg_likelihood(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = neg_likelihood(x2);
        }
    }
    0.5 * (lo + hi)
}

/// KS distance between the empirical tail CDF and the fitted discrete power
/// law, evaluated at the distinct tail values.
fn ks_distance(tail: &[u64], x_min: u64, alpha: f64) -> f64 {
    let n = tail.len() as f64;
    let z = hurwitz_zeta(alpha, x_min as f64);
    let mut worst = 0.0f64;
    let mut i = 0;
    while i < tail.len() {
        let v = tail[i];
        let mut j = i;
        while j < tail.len() && tail[j] == v {
            j += 1;
        }
        let empirical = j as f64 / n;
        let fitted = 1.0 - hurwitz_zeta(alpha, (v + 1) as f64) / z;
        worst = worst.max((empirical - fitted).abs());
        i = j;
    }
    worst
}

struct TailFit {
    alpha: f64,
    x_min: u64,
    ks: f64,
}

/// Scans candidate cutoffs and keeps the one minimizing the KS distance.
/// A candidate must keep at least max(50, n/10) tail observations; without
/// the fraction floor the scan escapes into a tail too small to distinguish
/// a power law from anything else, and the goodness-of-fit gate loses all
/// power against non-power-law data. The smallest value always qualifies,
/// so the scan only fails when the sample itself is under 50 observations.
fn fit_tail(sorted: &[u64]) -> Option<TailFit> {
    let n = sorted.len();
    let floor = 50.max(n / 10);
    // log_suffix[i] = sum of ln(x) over sorted[i..].
    let mut log_suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        log_suffix[i] = log_suffix[i + 1] + (sorted[i] as f64).ln();
    }
    let mut best: Option<TailFit> = None;
    let mut i = 0;
    while i < n {
        let x_min = sorted[i];
        let tail = &sorted[i..];
        if tail.len() < floor {
            break;
        }
        let alpha = mle_alpha(tail.len() as f64, log_suffix[i], x_min);
        let ks = ks_distance(tail, x_min, alpha);
        if best.as_ref().map_or(true, |b| ks < b.ks) {
            best = Some(TailFit { alpha, x_min, ks });
        }
        while i < n && sorted[i] == x_min {
            i += 1;
        }
    }
    best
}

/// Cumulative probability table of the fitted tail distribution, for
/// inverse-CDF sampling. Truncated once the mass beyond is negligible.
fn tail_cdf_table(alpha: f64, x_min: u64) -> Vec<(u64, f64)> {
    let z = hurwitz_zeta(alpha, x_min as f64);
    let mut table = Vec::new();
    let mut cumulative = 0.0;
    let mut v = x_min;
    while cumulative < 1.0 - 1e-9 && table.len() < 2_000_000 {
        cumulative += (v as f64).powf(-alpha) / z;
        table.push((v, cumulative.min(1.0)));
        v += 1;
    }
    table
}

fn sample_from_table(table: &[(u64, f64)], u: f64) -> u64 {
    let i = table.partition_point(|&(_, c)| c < u);
    table[i.min(table.len() - 1)].0
}

/// Discrete power-law fit with bootstrap goodness of fit.
///
/// The cutoff scan follows the standard KS-minimization recipe; each of the
/// 100 bootstrap replicates resamples the body empirically and the tail from
/// the fitted law, is refitted from scratch, and counts toward the p-value
/// when its own KS distance reaches the observed one. The bootstrap stream
/// is fixed, so identical input yields an identical fit.
pub fn fit_powerlaw(values: &[u64]) -> Result<PowerlawFit> {
    if values.len() < 50 {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs at least 50 observations, got {}",
            values.len()
        )));
    }
    if values.iter().any(|&v| v == 0) {
        return Err(Error::Invalid(
            "power-law fit requires positive values".to_string(),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let fit = fit_tail(&sorted).ok_or_else(|| {
        Error::InsufficientData(
            "no cutoff candidate keeps 50 tail observations".to_string(),
        )
    })?;

    let body: Vec<u64> = sorted
        .iter()
        .copied()
        .filter(|&v| v < fit.x_min)
        .collect();
    let tail_fraction = (sorted.len() - body.len()) as f64 / sorted.len() as f64;
    let table = tail_cdf_table(fit.alpha, fit.x_min);
    let mut rng = ChaCha8Rng::seed_from_u64(0x706f_7765_726c_6177);
    let mut at_least_as_far = 0usize;
    const REPLICATES: usize = 100;
    for _ in 0..REPLICATES {
        let mut synthetic: Vec<u64> = (0..sorted.len())
            .map(|_| {
                if body.is_empty() || rng.gen::<f64>() < tail_fraction {
                    sample_from_table(&table, rng.gen::<f64>())
                } else {
                    body[rng.gen_range(0..body.len())]
                }
            })
            .collect();
        synthetic.sort_unstable();
        // A replicate too small to refit counts as maximally distant.
        let d_syn = fit_tail(&synthetic).map_or(f64::INFINITY, |f| f.ks);
        if d_syn >= fit.ks {
            at_least_as_far += 1;
        }
    }
    let p_value = at_least_as_far as f64 / REPLICATES as f64;
    Ok(PowerlawFit {
        alpha: fit.alpha,
        x_min: fit.x_min,
        ks: fit.ks,
        p_value,
        ks_pass: p_value >= 0.1,
    })
}
