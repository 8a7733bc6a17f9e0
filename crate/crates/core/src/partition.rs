//! Node partitions, community detection, and partition-level statistics.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Labels};
use crate::{Error, Result};

/// A partition of the node set into disjoint communities.
///
/// Community ids are normalized to `0..c` in order of first appearance by
/// node index, so structurally equal partitions compare equal regardless of
/// how their ids were originally labeled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    community_of: Vec<u32>,
    members: Vec<Vec<u32>>,
}

impl Partition {
    /// Builds a partition from a per-node community assignment.
    pub fn from_assignment(raw: &[u32]) -> Partition {
        let mut remap: Vec<Option<u32>> = vec![None; raw.len().max(raw.iter().map(|&c| c as usize + 1).max().unwrap_or(0))];
        let mut community_of = Vec::with_capacity(raw.len());
        let mut members: Vec<Vec<u32>> = Vec::new();
        for (node, &c) in raw.iter().enumerate() {
            let id = match remap[c as usize] {
                Some(id) => id,
                None => {
                    let id = members.len() as u32;
                    remap[c as usize] = Some(id);
                    members.push(Vec::new());
                    id
                }
            };
            community_of.push(id);
            members[id as usize].push(node as u32);
        }
        Partition {
            community_of,
            members,
        }
    }

    /// Puts every node in its own community.
    pub fn singletons(n: usize) -> Partition {
        Partition::from_assignment(&(0..n as u32).collect::<Vec<_>>())
    }

    /// Puts every node in one community.
    pub fn whole(n: usize) -> Partition {
        Partition::from_assignment(&vec![0; n])
    }

    pub fn node_count(&self) -> usize {
        self.community_of.len()
    }

    pub fn community_count(&self) -> usize {
        self.members.len()
    }

    pub fn community_of(&self, node: u32) -> u32 {
        self.community_of[node as usize]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.community_of
    }

    /// Members of community `c`, in ascending node order.
    pub fn members(&self, c: u32) -> &[u32] {
        &self.members[c as usize]
    }

    pub fn communities(&self) -> &[Vec<u32>] {
        &self.members
    }
}

/// Parses a partition file: one `node_label community_id` pair per line,
/// `#`/`%` comments and blank lines skipped. Requires exactly one assignment
/// for every graph node.
pub fn load_partition(text: &str, labels: &Labels) -> Result<Partition> {
    let mut raw: Vec<Option<u32>> = vec![None; labels.len()];
    let mut community_ids = Labels::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (name, community) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected `node community`, got {trimmed:?}"),
                })
            }
        };
        let node = labels.get(name).ok_or_else(|| Error::Partition(format!(
            "unknown node label {name:?} at line {}",
            lineno + 1
        )))?;
        if raw[node as usize].is_some() {
            return Err(Error::Partition(format!(
                "duplicate assignment for node {name:?}"
            )));
        }
        raw[node as usize] = Some(community_ids.intern(community));
    }
    let mut assignment = Vec::with_capacity(labels.len());
    for (node, c) in raw.iter().enumerate() {
        match c {
            Some(c) => assignment.push(*c),
            None => {
                return Err(Error::Partition(format!(
                    "node {:?} has no community assignment",
                    labels.name(node as u32)
                )))
            }
        }
    }
    Ok(Partition::from_assignment(&assignment))
}

/// Fraction of edges whose endpoints lie in different communities.
/// Errors on a graph with no edges.
pub fn mixing_parameter(g: &Graph, p: &Partition) -> Result<f64> {
    check_cover(g, p)?;
    if g.edge_count() == 0 {
        return Err(Error::Invalid(
            "mixing parameter is undefined on a graph with no edges".to_string(),
        ));
    }
    let inter = g
        .edges()
        .iter()
        .filter(|&&(u, v)| p.community_of(u) != p.community_of(v))
        .count();
    Ok(inter as f64 / g.edge_count() as f64)
}

/// Newman modularity Q = sum over communities of m_c/m - (d_c/2m)^2.
/// Errors on a graph with no edges.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    check_cover(g, p)?;
    let m = g.edge_count() as f64;
    if g.edge_count() == 0 {
        return Err(Error::Invalid(
            "modularity is undefined on a graph with no edges".to_string(),
        ));
    }
    let c = p.community_count();
    let mut internal = vec![0u64; c];
    let mut degree_sum = vec![0u64; c];
    for &(u, v) in g.edges() {
        let (cu, cv) = (p.community_of(u), p.community_of(v));
        if cu == cv {
            internal[cu as usize] += 1;
        }
    }
    for node in 0..g.node_count() as u32 {
        degree_sum[p.community_of(node) as usize] += g.degree(node) as u64;
    }
    let mut q = 0.0;
    for i in 0..c {
        let frac = internal[i] as f64 / m;
        let share = degree_sum[i] as f64 / (2.0 * m);
        q += frac - share * share;
    }
    Ok(q)
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

/// Community strength classes by mixing parameter, following the bracket
/// convention STRONG up to 0.19, MEDIUM for [0.20, 0.30], WEAK above 0.30.
/// Values below the usual 0.05 lower bracket still count as STRONG.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strength {
    Strong,
    Medium,
    Weak,
}

impl Strength {
    pub fn label(self) -> &'static str {
        match self {
            Strength::Strong => "STRONG",
            Strength::Medium => "MEDIUM",
            Strength::Weak => "WEAK",
        }
    }
}

/// A strength class together with the mixing parameter that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrengthClass {
    pub class: Strength,
    pub mu: f64,
}

/// Classifies a mixing parameter. Errors when `mu` is outside [0, 1].
pub fn classify_strength(mu: f64) -> Result<StrengthClass> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::Invalid(format!(
            "mixing parameter {mu} outside [0, 1]"
        )));
    }
    let class = if mu < 0.20 {
        Strength::Strong
    } else if mu <= 0.30 {
        Strength::Medium
    } else {
        Strength::Weak
    };
    Ok(StrengthClass { class, mu })
}

/// Louvain community detection (greedy modularity, two-phase).
///
/// Node visit order is shuffled with a seeded RNG, so results are
/// deterministic per seed. A move is taken only when it improves modularity
/// by more than 1e-7, ties between equally good target communities go to the
/// lowest community id, and the outer aggregate loop is capped at 100 passes.
/// Errors on a graph with no edges.
pub fn louvain(g: &Graph, seed: u64) -> Result<Partition> {
    const GAIN_TOL: f64 = 1e-7;
    const MAX_PASSES: usize = 100;

    if g.edge_count() == 0 {
        return Err(Error::Invalid(
            "community detection requires at least one edge".to_string(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Working weighted graph; adjacency as (neighbor, weight) pairs. A self
    // weight stores twice the internal edge weight so weighted degrees keep
    // summing to 2m across aggregation passes.
    let mut adj: Vec<Vec<(u32, f64)>> = g
        .adjacency_pairs()
        .into_iter()
        .map(|list| list.into_iter().map(|v| (v, 1.0)).collect())
        .collect();
    let mut self_weight: Vec<f64> = vec![0.0; g.node_count()];
    // members_of[working node] -> original nodes it stands for.
    let mut members_of: Vec<Vec<u32>> = (0..g.node_count() as u32).map(|v| vec![v]).collect();
    let m_edges: f64 = g.edge_count() as f64;
    let two_m: f64 = 2.0 * m_edges;

    for _pass in 0..MAX_PASSES {
        let n = adj.len();
        let k: Vec<f64> = (0..n)
            .map(|v| self_weight[v] + adj[v].iter().map(|&(_, w)| w).sum::<f64>())
            .collect();
        let mut community: Vec<u32> = (0..n as u32).collect();
        let mut total: Vec<f64> = k.clone();

        let mut order: Vec<u32> = (0..n as u32).collect();
        order.shuffle(&mut rng);

        let mut improved_any = false;
        loop {
            let mut moved = false;
            for &v in &order {
                let vc = community[v as usize];
                let kv = k[v as usize];
                total[vc as usize] -= kv;

                // Weight from v to each neighboring community, own included.
                // A BTreeMap keeps candidate order sorted by community id, so
                // exact-tie resolution below is order-independent.
                let mut link: std::collections::BTreeMap<u32, f64> =
                    std::collections::BTreeMap::new();
                link.insert(vc, 0.0);
                for &(u, w) in &adj[v as usize] {
                    if u != v {
                        *link.entry(community[u as usize]).or_insert(0.0) += w;
                    }
                }

                let base = (link[&vc] - total[vc as usize] * kv / two_m) / m_edges;
                let mut best_c = vc;
                let mut best_gain = 0.0f64;
                for (&c, &w) in &link {
                    if c == vc {
                        continue;
                    }
                    // True modularity delta for moving v into c; strict
                    // comparison plus ascending id order means equal gains
                    // resolve to the lowest community id.
                    let gain = (w - total[c as usize] * kv / two_m) / m_edges - base;
                    if gain > best_gain {
                        best_gain = gain;
                        best_c = c;
                    }
                }
                if best_gain <= GAIN_TOL {
                    best_c = vc;
                }

                total[best_c as usize] += kv;
                community[v as usize] = best_c;
                if best_c != vc {
                    moved = true;
                    improved_any = true;
                }
            }
            if !moved {
                break;
            }
        }

        if !improved_any {
            break;
        }

        // Aggregate: one node per community, ids renumbered in sorted order.
        let mut present: Vec<u32> = community.clone();
        present.sort_unstable();
        present.dedup();
        let mut dense = vec![0u32; n];
        for v in 0..n {
            dense[v] = present.binary_search(&community[v]).unwrap() as u32;
        }
        let nc = present.len();
        let mut new_adj: Vec<std::collections::BTreeMap<u32, f64>> =
            vec![std::collections::BTreeMap::new(); nc];
        let mut new_self = vec![0.0; nc];
        let mut new_members: Vec<Vec<u32>> = vec![Vec::new(); nc];
        for v in 0..n {
            let cv = dense[v];
            new_self[cv as usize] += self_weight[v];
            new_members[cv as usize].append(&mut members_of[v]);
            for &(u, w) in &adj[v] {
                let cu = dense[u as usize];
                if cu == cv {
                    // Seen from both endpoints, so internal weight lands twice.
                    new_self[cv as usize] += w;
                } else {
                    *new_adj[cv as usize].entry(cu).or_insert(0.0) += w;
                }
            }
        }
        adj = new_adj
            .into_iter()
            .map(|m| m.into_iter().collect())
            .collect();
        self_weight = new_self;
        members_of = new_members;
        for members in &mut members_of {
            members.sort_unstable();
        }
        if adj.len() == n {
            break;
        }
    }

    let mut assignment = vec![0u32; g.node_count()];
    for (c, members) in members_of.iter().enumerate() {
        for &v in members {
            assignment[v as usize] = c as u32;
        }
    }
    Ok(Partition::from_assignment(&assignment))
}

impl Graph {
    /// Adjacency as owned neighbor lists; helper for weighted-graph setup.
    fn adjacency_pairs(&self) -> Vec<Vec<u32>> {
        (0..self.node_count() as u32)
            .map(|v| self.neighbors(v).to_vec())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Two triangles a-b-c and d-e-f joined by the bridge c-d.
    pub fn two_triangles() -> Graph {
        Graph::from_edges(
            6,
            [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)],
        )
    }

    fn triangle_partition() -> Partition {
        Partition::from_assignment(&[0, 0, 0, 1, 1, 1])
    }

    #[test]
    fn normalizes_ids_by_first_appearance() {
        let p = Partition::from_assignment(&[7, 7, 2, 2, 7]);
        assert_eq!(p.assignment(), &[0, 0, 1, 1, 0]);
        assert_eq!(p.community_count(), 2);
        assert_eq!(p.members(0), &[0, 1, 4]);
    }

    #[test]
    fn mixing_parameter_counts_bridge_edges() {
        let g = two_triangles();
        let mu = mixing_parameter(&g, &triangle_partition()).unwrap();
        assert_abs_diff_eq!(mu, 1.0 / 7.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            mixing_parameter(&g, &Partition::whole(6)).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(
            mixing_parameter(&g, &Partition::singletons(6)).unwrap(),
            1.0
        );
    }

    #[test]
    fn modularity_matches_hand_computation() {
        let g = two_triangles();
        assert_abs_diff_eq!(
            modularity(&g, &triangle_partition()).unwrap(),
            5.0 / 14.0,
            epsilon = 1e-12
        );
        // Complete graph with singleton communities: Q = -sum (d_c/2m)^2.
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        assert_abs_diff_eq!(
            modularity(&k3, &Partition::singletons(3)).unwrap(),
            -1.0 / 3.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(modularity(&k3, &Partition::whole(3)).unwrap(), 0.0);
    }

    #[test]
    fn modularity_rejects_empty_graph_and_bad_cover() {
        let g = Graph::from_edges(3, []);
        assert!(modularity(&g, &Partition::whole(3)).is_err());
        let g = two_triangles();
        assert!(modularity(&g, &Partition::whole(4)).is_err());
    }

    #[test]
    fn louvain_recovers_planted_triangles() {
        let g = two_triangles();
        for seed in 0..10 {
            let p = louvain(&g, seed).unwrap();
            assert_eq!(p, triangle_partition(), "seed {seed}");
        }
    }

    #[test]
    fn louvain_is_deterministic_per_seed() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let n = 60;
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                // Planted 3-block structure with noise.
                let same = (u / 20) == (v / 20);
                let p = if same { 0.3 } else { 0.02 };
                if rng.gen::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, edges);
        let a = louvain(&g, 5).unwrap();
        let b = louvain(&g, 5).unwrap();
        assert_eq!(a, b);
        let q = modularity(&g, &a).unwrap();
        let q_singletons = modularity(&g, &Partition::singletons(n)).unwrap();
        assert!(q >= q_singletons);
        assert!((-1.0..=1.0).contains(&q));
    }

    #[test]
    fn load_partition_round_trip_and_errors() {
        let loaded = crate::graph::load_edge_list("a b\nb c\nc a\nd e\ne f\nf d\nc d\n").unwrap();
        let p = load_partition("# comment\na 0\nb 0\nc 0\nd 9\ne 9\nf 9\n", &loaded.labels)
            .unwrap();
        assert_eq!(p, triangle_partition());

        let err = load_partition("a 0\nb 0\nc 0\nd 0\ne 0\n", &loaded.labels).unwrap_err();
        assert!(matches!(err, Error::Partition(_)), "missing node: {err}");
        let err =
            load_partition("a 0\na 1\nb 0\nc 0\nd 0\ne 0\nf 0\n", &loaded.labels).unwrap_err();
        assert!(matches!(err, Error::Partition(_)), "duplicate: {err}");
        let err = load_partition("zz 0\n", &loaded.labels).unwrap_err();
        assert!(matches!(err, Error::Partition(_)), "unknown label: {err}");
    }

    #[test]
    fn strength_classes_follow_brackets() {
        assert_eq!(classify_strength(0.077).unwrap().class, Strength::Strong);
        assert_eq!(classify_strength(0.02).unwrap().class, Strength::Strong);
        assert_eq!(classify_strength(0.19).unwrap().class, Strength::Strong);
        assert_eq!(classify_strength(0.20).unwrap().class, Strength::Medium);
        assert_eq!(classify_strength(0.30).unwrap().class, Strength::Medium);
        assert_eq!(classify_strength(0.31).unwrap().class, Strength::Weak);
        assert_eq!(classify_strength(0.564).unwrap().class, Strength::Weak);
        assert!(classify_strength(1.5).is_err());
        assert!(classify_strength(-0.1).is_err());
    }
}
