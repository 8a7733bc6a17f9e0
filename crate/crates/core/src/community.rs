//! Community-aware centrality measures.
//!
//! Given a partition, every classical measure splits into a LOCAL component
//! (measured after deleting inter-community edges) and a GLOBAL component
//! (measured on the graph of inter-community edges only, scattered back to
//! the full node set). On top of those twenty come measures built directly
//! from the community structure: neighborhood community count, bridging
//! centrality, Comm centrality, community hub-bridge, community-based
//! centrality, participation coefficient, community-aware k-shell, and the
//! community-based mediator.

use std::collections::BTreeMap;

use crate::centrality::{
    classical, ClassicalMeasure, CentralityParams, CentralityVector, CLASSICAL_ORDER,
};
use crate::graph::{core_numbers, Graph};
use crate::partition::Partition;
use crate::{Error, Result};

/// Parameters for the mixed community measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedParams {
    /// Scale constant R in Comm centrality.
    pub comm_r: f64,
    /// Weight on the local k-shell term in the community-aware k-shell.
    pub kshell_alpha: f64,
}

impl Default for MixedParams {
    fn default() -> Self {
        MixedParams {
            comm_r: 100.0,
            kshell_alpha: 0.5,
        }
    }
}

impl MixedParams {
    pub fn validate(&self) -> Result<()> {
        if !self.comm_r.is_finite() || self.comm_r <= 0.0 {
            return Err(Error::Invalid(format!(
                "comm_r {} must be positive",
                self.comm_r
            )));
        }
        if !(0.0..=1.0).contains(&self.kshell_alpha) {
            return Err(Error::Invalid(format!(
                "kshell_alpha {} outside [0, 1]",
                self.kshell_alpha
            )));
        }
        Ok(())
    }
}

/// Which side of the modular decomposition a component measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Local,
    Global,
}

/// The graph split induced by a partition: intra-community edges on the full
/// node set, and inter-community edges on the nodes they touch.
#[derive(Debug, Clone)]
pub struct ModularSplit {
    /// All nodes, intra-community edges only.
    pub local: Graph,
    /// Only nodes incident to an inter-community edge, those edges only.
    pub global: Graph,
    /// Parent index of each global-graph node.
    pub global_parent: Vec<u32>,
}

/// Splits `g` into its local and global edge sets under `p`.
pub fn modular_split(g: &Graph, p: &Partition) -> Result<ModularSplit> {
    check_cover(g, p)?;
    let mut intra = Vec::new();
    let mut inter = Vec::new();
    for &(u, v) in g.edges() {
        if p.community_of(u) == p.community_of(v) {
            intra.push((u, v));
        } else {
            inter.push((u, v));
        }
    }
    let mut global_parent: Vec<u32> = inter.iter().flat_map(|&(u, v)| [u, v]).collect();
    global_parent.sort_unstable();
    global_parent.dedup();
    let mut local_index = vec![u32::MAX; g.node_count()];
    for (i, &v) in global_parent.iter().enumerate() {
        local_index[v as usize] = i as u32;
    }
    let global_edges: Vec<(u32, u32)> = inter
        .iter()
        .map(|&(u, v)| (local_index[u as usize], local_index[v as usize]))
        .collect();
    Ok(ModularSplit {
        local: Graph::from_edges(g.node_count(), intra),
        global: Graph::from_edges(global_parent.len(), global_edges),
        global_parent,
    })
}

/// One modular component of a classical measure: the measure computed on the
/// chosen side of the split, indexed on the full node set. Nodes absent from
/// the global graph score 0. A side with no edges yields all zeros for every
/// measure, so degenerate partitions stay well defined.
pub fn modular_component(
    g: &Graph,
    split: &ModularSplit,
    side: Side,
    measure: ClassicalMeasure,
    params: &CentralityParams,
) -> Result<Vec<f64>> {
    let target = match side {
        Side::Local => &split.local,
        Side::Global => &split.global,
    };
    if target.edge_count() == 0 {
        return Ok(vec![0.0; g.node_count()]);
    }
    let scores = classical(target, measure, params)?.scores;
    match side {
        Side::Local => Ok(scores),
        Side::Global => {
            let mut full = vec![0.0; g.node_count()];
            for (i, &parent) in split.global_parent.iter().enumerate() {
                full[parent as usize] = scores[i];
            }
            Ok(full)
        }
    }
}

/// Per-node adjacency broken down by neighbor community.
#[derive(Debug, Clone)]
pub struct CommunityProfile {
    pub k: u32,
    pub k_in: u32,
    pub k_out: u32,
    /// Neighbor count per community, ascending by community id, own included.
    pub per_community: Vec<(u32, u32)>,
}

/// Profiles for every node under `p`.
pub fn community_profiles(g: &Graph, p: &Partition) -> Result<Vec<CommunityProfile>> {
    check_cover(g, p)?;
    Ok((0..g.node_count() as u32)
        .map(|v| {
            let own = p.community_of(v);
            let mut per: BTreeMap<u32, u32> = BTreeMap::new();
            for &u in g.neighbors(v) {
                *per.entry(p.community_of(u)).or_insert(0) += 1;
            }
            let k = g.degree(v) as u32;
            let k_in = per.get(&own).copied().unwrap_or(0);
            CommunityProfile {
                k,
                k_in,
                k_out: k - k_in,
                per_community: per.into_iter().collect(),
            }
        })
        .collect())
}

/// Number of distinct foreign communities adjacent to each node.
pub fn nnc(g: &Graph, p: &Partition) -> Result<Vec<f64>> {
    let profiles = community_profiles(g, p)?;
    Ok(profiles
        .iter()
        .enumerate()
        .map(|(v, prof)| {
            let own = p.community_of(v as u32);
            prof.per_community
                .iter()
                .filter(|&&(c, _)| c != own)
                .count() as f64
        })
        .collect())
}

/// Bridging centrality: betweenness weighted by the bridging coefficient
/// (1/k_i) / sum over neighbors of 1/k_j. Degree-0 nodes score 0.
pub fn bridging(g: &Graph) -> Vec<f64> {
    bridging_with(g, &crate::centrality::betweenness(g))
}

/// Bridging centrality reusing an already computed betweenness vector.
pub fn bridging_with(g: &Graph, betweenness: &[f64]) -> Vec<f64> {
    (0..g.node_count() as u32)
        .map(|v| {
            let k = g.degree(v) as f64;
            if k == 0.0 {
                return 0.0;
            }
            let inv_sum: f64 = g
                .neighbors(v)
                .iter()
                .map(|&u| 1.0 / g.degree(u) as f64)
                .sum();
            betweenness[v as usize] * (1.0 / k) / inv_sum
        })
        .collect()
}

/// Comm centrality. Within each community c with boundary edge fraction
/// mu_c, a node scores (1 + mu_c) * chi + (1 - mu_c) * chi'^2 where chi and
/// chi' scale its internal and external degree by the community maxima
/// (times R). Communities with a zero maximum contribute 0 through that term.
pub fn comm_centrality(g: &Graph, p: &Partition, params: &MixedParams) -> Result<Vec<f64>> {
    params.validate()?;
    let profiles = community_profiles(g, p)?;
    let c = p.community_count();
    let mut intra = vec![0u64; c];
    let mut inter = vec![0u64; c];
    for &(u, v) in g.edges() {
        let (cu, cv) = (p.community_of(u), p.community_of(v));
        if cu == cv {
            intra[cu as usize] += 1;
        } else {
            inter[cu as usize] += 1;
            inter[cv as usize] += 1;
        }
    }
    let mut max_in = vec![0u32; c];
    let mut max_out = vec![0u32; c];
    for (v, prof) in profiles.iter().enumerate() {
        let cv = p.community_of(v as u32) as usize;
        max_in[cv] = max_in[cv].max(prof.k_in);
        max_out[cv] = max_out[cv].max(prof.k_out);
    }
    let r = params.comm_r;
    Ok(profiles
        .iter()
        .enumerate()
        .map(|(v, prof)| {
            let cv = p.community_of(v as u32) as usize;
            let incident = intra[cv] + inter[cv];
            let mu_c = if incident == 0 {
                0.0
            } else {
                inter[cv] as f64 / incident as f64
            };
            let chi = if max_in[cv] == 0 {
                0.0
            } else {
                prof.k_in as f64 / max_in[cv] as f64 * r
            };
            let chi_out = if max_out[cv] == 0 {
                0.0
            } else {
                prof.k_out as f64 / max_out[cv] as f64 * r
            };
            (1.0 + mu_c) * chi + (1.0 - mu_c) * chi_out * chi_out
        })
        .collect())
}

/// Community hub-bridge: own community size times internal degree plus
/// neighbor community count times external degree.
pub fn community_hub_bridge(g: &Graph, p: &Partition) -> Result<Vec<f64>> {
    let profiles = community_profiles(g, p)?;
    let nnc = nnc(g, p)?;
    Ok(profiles
        .iter()
        .enumerate()
        .map(|(v, prof)| {
            let size = p.members(p.community_of(v as u32)).len() as f64;
            size * prof.k_in as f64 + nnc[v] * prof.k_out as f64
        })
        .collect())
}

/// Community-based centrality: links to each community weighted by that
/// community's share of the node set.
pub fn community_based_centrality(g: &Graph, p: &Partition) -> Result<Vec<f64>> {
    let profiles = community_profiles(g, p)?;
    let n = g.node_count() as f64;
    Ok(profiles
        .iter()
        .map(|prof| {
            prof.per_community
                .iter()
                .map(|&(c, count)| count as f64 * p.members(c).len() as f64 / n)
                .sum()
        })
        .collect())
}

/// Participation coefficient: 1 - sum over communities of (k_ic / k_i)^2.
/// Degree-0 nodes score 0.
pub fn participation_coefficient(g: &Graph, p: &Partition) -> Result<Vec<f64>> {
    let profiles = community_profiles(g, p)?;
    Ok(profiles
        .iter()
        .map(|prof| {
            if prof.k == 0 {
                return 0.0;
            }
            let k = prof.k as f64;
            let herfindahl: f64 = prof
                .per_community
                .iter()
                .map(|&(_, count)| {
                    let share = count as f64 / k;
                    share * share
                })
                .sum();
            1.0 - herfindahl
        })
        .collect())
}

/// Community-aware k-shell: alpha * core number in the local graph plus
/// (1 - alpha) * core number in the global graph (0 for absent nodes).
pub fn kshell_with_community(
    g: &Graph,
    split: &ModularSplit,
    params: &MixedParams,
) -> Result<Vec<f64>> {
    params.validate()?;
    let alpha = params.kshell_alpha;
    let local_core = core_numbers(&split.local);
    let global_core = core_numbers(&split.global);
    let mut scattered = vec![0.0f64; g.node_count()];
    for (i, &parent) in split.global_parent.iter().enumerate() {
        scattered[parent as usize] = global_core[i] as f64;
    }
    Ok((0..g.node_count())
        .map(|v| alpha * local_core[v] as f64 + (1.0 - alpha) * scattered[v])
        .collect())
}

/// Community-based mediator: entropy of the internal/external degree split,
/// scaled by the node's share of total degree. Degree-0 nodes score 0.
pub fn community_based_mediator(g: &Graph, p: &Partition) -> Result<Vec<f64>> {
    let profiles = community_profiles(g, p)?;
    let two_m: f64 = 2.0 * g.edge_count() as f64;
    Ok(profiles
        .iter()
        .map(|prof| {
            if prof.k == 0 {
                return 0.0;
            }
            let k = prof.k as f64;
            let mut h = 0.0;
            for rho in [prof.k_in as f64 / k, prof.k_out as f64 / k] {
                if rho > 0.0 {
                    h -= rho * rho.ln();
                }
            }
            h * k / two_m
        })
        .collect())
}

/// The 28 community-aware measures in canonical report order: ten local
/// components, ten global components, NNC and bridging, then the six mixed
/// measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CommunityMeasure {
    Modular(Side, ClassicalMeasure),
    Nnc,
    Bridging,
    Comm,
    Chb,
    Cbc,
    Pc,
    Ksc,
    Cbm,
}

impl CommunityMeasure {
    pub fn id(self) -> &'static str {
        match self {
            CommunityMeasure::Modular(side, m) => modular_id(side, m),
            CommunityMeasure::Nnc => "nnc",
            CommunityMeasure::Bridging => "bridging",
            CommunityMeasure::Comm => "comm",
            CommunityMeasure::Chb => "chb",
            CommunityMeasure::Cbc => "cbc",
            CommunityMeasure::Pc => "pc",
            CommunityMeasure::Ksc => "ksc",
            CommunityMeasure::Cbm => "cbm",
        }
    }
}

fn modular_id(side: Side, m: ClassicalMeasure) -> &'static str {
    use ClassicalMeasure::*;
    match (side, m) {
        (Side::Local, Degree) => "d_L",
        (Side::Local, Betweenness) => "b_L",
        (Side::Local, Closeness) => "c_L",
        (Side::Local, Katz) => "k_L",
        (Side::Local, Pagerank) => "p_L",
        (Side::Local, Subgraph) => "s_L",
        (Side::Local, Mnc) => "m_L",
        (Side::Local, Leverage) => "lev_L",
        (Side::Local, Diffusion) => "dif_L",
        (Side::Local, Laplacian) => "lap_L",
        (Side::Global, Degree) => "d_G",
        (Side::Global, Betweenness) => "b_G",
        (Side::Global, Closeness) => "c_G",
        (Side::Global, Katz) => "k_G",
        (Side::Global, Pagerank) => "p_G",
        (Side::Global, Subgraph) => "s_G",
        (Side::Global, Mnc) => "m_G",
        (Side::Global, Leverage) => "lev_G",
        (Side::Global, Diffusion) => "dif_G",
        (Side::Global, Laplacian) => "lap_G",
    }
}

/// Canonical column order for the 28 community-aware measures.
pub fn community_order() -> Vec<CommunityMeasure> {
    let mut order = Vec::with_capacity(28);
    for &m in &CLASSICAL_ORDER {
        order.push(CommunityMeasure::Modular(Side::Local, m));
    }
    for &m in &CLASSICAL_ORDER {
        order.push(CommunityMeasure::Modular(Side::Global, m));
    }
    order.extend([
        CommunityMeasure::Nnc,
        CommunityMeasure::Bridging,
        CommunityMeasure::Comm,
        CommunityMeasure::Chb,
        CommunityMeasure::Cbc,
        CommunityMeasure::Pc,
        CommunityMeasure::Ksc,
        CommunityMeasure::Cbm,
    ]);
    order
}

/// Computes all 28 community-aware vectors, sharing one modular split.
pub fn all_community(
    g: &Graph,
    p: &Partition,
    cparams: &CentralityParams,
    mparams: &MixedParams,
) -> Result<Vec<CentralityVector>> {
    cparams.validate()?;
    mparams.validate()?;
    let split = modular_split(g, p)?;
    let mut out = Vec::with_capacity(28);
    for measure in community_order() {
        let vector = match measure {
            CommunityMeasure::Modular(side, m) => {
                let scores = modular_component(g, &split, side, m, cparams)?;
                let mut v = CentralityVector::new(measure.id(), scores);
                match m {
                    ClassicalMeasure::Katz => {
                        v.params
                            .insert("katz_fraction".to_string(), cparams.katz_fraction);
                    }
                    ClassicalMeasure::Pagerank => {
                        v.params
                            .insert("damping".to_string(), cparams.pagerank_damping);
                    }
                    ClassicalMeasure::Diffusion => {
                        v.params
                            .insert("lambda".to_string(), cparams.diffusion_lambda);
                    }
                    _ => {}
                }
                v
            }
            CommunityMeasure::Nnc => CentralityVector::new("nnc", nnc(g, p)?),
            CommunityMeasure::Bridging => CentralityVector::new("bridging", bridging(g)),
            CommunityMeasure::Comm => {
                let mut v = CentralityVector::new("comm", comm_centrality(g, p, mparams)?);
                v.params.insert("r".to_string(), mparams.comm_r);
                v
            }
            CommunityMeasure::Chb => CentralityVector::new("chb", community_hub_bridge(g, p)?),
            CommunityMeasure::Cbc => {
                CentralityVector::new("cbc", community_based_centrality(g, p)?)
            }
            CommunityMeasure::Pc => {
                CentralityVector::new("pc", participation_coefficient(g, p)?)
            }
            CommunityMeasure::Ksc => {
                let mut v =
                    CentralityVector::new("ksc", kshell_with_community(g, &split, mparams)?);
                v.params.insert("alpha".to_string(), mparams.kshell_alpha);
                v
            }
            CommunityMeasure::Cbm => {
                CentralityVector::new("cbm", community_based_mediator(g, p)?)
            }
        };
        out.push(vector);
    }
    Ok(out)
}

fn check_cover(g: &Graph, p: &Partition) -> Result<()> {
    if p.node_count() != g.node_count() {
        return Err(Error::Partition(format!(
            "partition covers {} nodes but the graph has {}",
            p.node_count(),
            g.node_count()
        )));
    }
    Ok(())
}
