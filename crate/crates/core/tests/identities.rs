//! Structural identities that must hold on arbitrary graph/partition
//! pairs: decomposition laws, degenerate-partition collapses, permutation
//! equivariance, conservation properties.

mod support;

use commcent::analysis::kendall_tau_b;
use commcent::centrality::{all_classical, CentralityParams};
use commcent::community::{all_community, modular_split, MixedParams};
use commcent::partition::{louvain, mixing_parameter, modularity};
use commcent::{Graph, Partition};
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

fn by_id<'a>(
    vectors: &'a [commcent::centrality::CentralityVector],
    id: &str,
) -> &'a commcent::centrality::CentralityVector {
    vectors.iter().find(|v| v.measure == id).unwrap()
}

#[test]
fn degree_splits_exactly_into_local_plus_global() {
    let cparams = CentralityParams::default();
    let mparams = MixedParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for round in 0..100 {
        let n = rng.gen_range(6..60);
        let p_edge = rng.gen_range(0.08..0.5);
        let g = random_graph(&mut rng, n, p_edge);
        if g.edge_count() == 0 {
            continue;
        }
        let p = random_partition(&mut rng, n, 6);
        let vectors = all_community(&g, &p, &cparams, &mparams).unwrap();
        let classical = all_classical(&g, &cparams).unwrap();
        let d = &by_id(&classical, "d").scores;
        let d_l = &by_id(&vectors, "d_L").scores;
        let d_g = &by_id(&vectors, "d_G").scores;
        for v in 0..n {
            // Integer-valued degrees: the decomposition is exact, not
            // approximate.
            assert_eq!(d_l[v] + d_g[v], d[v], "round {round} node {v}");
        }
    }
}

#[test]
fn split_edges_partition_the_edge_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    for _ in 0..50 {
        let n = rng.gen_range(4..50);
        let g = random_graph(&mut rng, n, 0.2);
        if g.edge_count() == 0 {
            continue;
        }
        let p = random_partition(&mut rng, n, 5);
        let split = modular_split(&g, &p).unwrap();
        let inter = split.global.edge_count();
        assert_eq!(split.local.edge_count() + inter, g.edge_count());
        let mu = mixing_parameter(&g, &p).unwrap();
        assert_eq!(mu, inter as f64 / g.edge_count() as f64);
    }
}

#[test]
fn single_community_collapses_local_to_classical() {
    let cparams = CentralityParams::default();
    let mparams = MixedParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    for round in 0..20 {
        let n = rng.gen_range(5..40);
        let g = random_graph_min_degree_one(&mut rng, n, 0.3);
        let p = Partition::whole(n);
        let community = all_community(&g, &p, &cparams, &mparams).unwrap();
        let classical = all_classical(&g, &cparams).unwrap();
        for cv in &classical {
            let local = by_id(&community, &format!("{}_L", cv.measure));
            // The local graph is edge-identical to the input, so the whole
            // computation replays bit for bit.
            assert_eq!(local.scores, cv.scores, "round {round} measure {}", cv.measure);
        }
        for id in ["pc", "nnc", "cbm"] {
            assert!(
                by_id(&community, id).scores.iter().all(|&v| v == 0.0),
                "round {round} {id}"
            );
        }
    }
}

#[test]
fn singleton_partition_collapses_global_to_classical() {
    let cparams = CentralityParams::default();
    let mparams = MixedParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    for round in 0..20 {
        let n = rng.gen_range(5..40);
        let g = random_graph_min_degree_one(&mut rng, n, 0.3);
        let p = Partition::singletons(n);
        let community = all_community(&g, &p, &cparams, &mparams).unwrap();
        let classical = all_classical(&g, &cparams).unwrap();
        for cv in &classical {
            let global = by_id(&community, &format!("{}_G", cv.measure));
            assert_eq!(
                global.scores, cv.scores,
                "round {round} measure {}",
                cv.measure
            );
        }
    }
}

#[test]
fn classical_measures_are_permutation_equivariant() {
    let cparams = CentralityParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(89);
    for round in 0..10 {
        let n = rng.gen_range(6..30);
        let g = random_graph_min_degree_one(&mut rng, n, 0.3);
        let mut perm: Vec<u32> = (0..n as u32).collect();
        perm.shuffle(&mut rng);
        let permuted = Graph::from_edges(
            n,
            g.edges()
                .iter()
                .map(|&(u, v)| (perm[u as usize], perm[v as usize])),
        );
        let original = all_classical(&g, &cparams).unwrap();
        let relabeled = all_classical(&permuted, &cparams).unwrap();
        for (a, b) in original.iter().zip(&relabeled) {
            for v in 0..n {
                let (x, y) = (a.scores[v], b.scores[perm[v] as usize]);
                assert!(
                    (x - y).abs() <= 1e-8 * x.abs().max(1.0),
                    "round {round} measure {} node {v}: {x} vs {y}",
                    a.measure
                );
            }
        }
    }
}

#[test]
fn pagerank_mass_is_conserved() {
    let cparams = CentralityParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    for _ in 0..20 {
        let n = rng.gen_range(3..60);
        let g = random_graph(&mut rng, n, 0.2);
        let p = commcent::centrality::pagerank(&g, &cparams).unwrap();
        let sum: f64 = p.iter().sum();
        assert!((sum - 1.0).abs() <= 1e-9, "sum {sum}");
        assert!(p.iter().all(|&v| v > 0.0));
    }
}

#[test]
fn louvain_never_does_worse_than_its_start() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for round in 0..15 {
        let n = rng.gen_range(4..50);
        let g = random_graph(&mut rng, n, 0.15);
        if g.edge_count() == 0 {
            continue;
        }
        let detected = louvain(&g, round as u64).unwrap();
        let q = modularity(&g, &detected).unwrap();
        let q_start = modularity(&g, &Partition::singletons(n)).unwrap();
        assert!(q >= q_start, "round {round}: {q} < {q_start}");
        assert!((-1.0..=1.0).contains(&q));
    }
}

#[test]
fn tau_respects_positive_affine_maps_and_negation() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..50 {
        let n = rng.gen_range(2..80);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0..6) as f64).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let scaled: Vec<f64> = x.iter().map(|v| 2.5 * v + 3.0).collect();
        let negated: Vec<f64> = x.iter().map(|v| -v).collect();
        let base = kendall_tau_b(&x, &y).unwrap();
        assert_eq!(base, kendall_tau_b(&scaled, &y).unwrap());
        assert_eq!(
            base.map(|t| -t),
            kendall_tau_b(&negated, &y).unwrap()
        );
    }
}

#[test]
fn mixed_measures_stay_in_their_ranges() {
    let cparams = CentralityParams::default();
    let mparams = MixedParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..25 {
        let n = rng.gen_range(5..50);
        let g = random_graph(&mut rng, n, 0.2);
        if g.edge_count() == 0 {
            continue;
        }
        let p = random_partition(&mut rng, n, 5);
        let c = p.community_count() as f64;
        let vectors = all_community(&g, &p, &cparams, &mparams).unwrap();
        for &v in &by_id(&vectors, "pc").scores {
            assert!(v >= 0.0 && v <= 1.0 - 1.0 / c + 1e-12, "pc {v} with {c} communities");
        }
        for id in ["cbc", "chb", "nnc", "ksc", "cbm", "bridging"] {
            for &v in &by_id(&vectors, id).scores {
                assert!(v >= 0.0, "{id} {v}");
                assert!(v.is_finite(), "{id} {v}");
            }
        }
    }
}
