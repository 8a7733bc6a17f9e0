//! Independent-oracle checks: every nontrivial algorithm is compared
//! against a second implementation built on different machinery (dense
//! linear algebra, exhaustive enumeration, naive peeling).

mod support;

use commcent::centrality::{self, CentralityParams};
use commcent::graph::{bfs_distances, core_numbers};
use commcent::lfr::{sample_powerlaw_degrees, LfrParams};
use commcent::partition::{louvain, modularity};
use commcent::{Graph, Partition};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::*;

fn adjacency(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut a = DMatrix::zeros(n, n);
    for &(u, v) in g.edges() {
        a[(u as usize, v as usize)] = 1.0;
        a[(v as usize, u as usize)] = 1.0;
    }
    a
}

#[test]
fn bfs_matches_floyd_warshall() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..30 {
        let n = 2 + (round % 7) * 7;
        let g = random_graph(&mut rng, n, 0.08);
        // Floyd-Warshall over an explicit large sentinel.
        const INF: u32 = u32::MAX / 4;
        let mut d = vec![vec![INF; n]; n];
        for v in 0..n {
            d[v][v] = 0;
        }
        for &(u, v) in g.edges() {
            d[u as usize][v as usize] = 1;
            d[v as usize][u as usize] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][k].saturating_add(d[k][j]);
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        for s in 0..n as u32 {
            let row = bfs_distances(&g, s).unwrap().dist;
            for t in 0..n {
                match row[t] {
                    Some(hops) => assert_eq!(hops, d[s as usize][t], "{s}->{t}"),
                    None => assert!(d[s as usize][t] >= INF, "{s}->{t}"),
                }
            }
        }
    }
}

#[test]
fn betweenness_matches_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for g in [two_triangles(), path3(), star5(), k3()] {
        let fast = centrality::betweenness(&g);
        let slow = betweenness_path_oracle(&g);
        for v in 0..g.node_count() {
            assert!((fast[v] - slow[v]).abs() <= 1e-9, "fixture node {v}");
        }
    }
    for round in 0..50 {
        let n = 4 + round % 9;
        let g = random_graph(&mut rng, n, 0.4);
        let fast = centrality::betweenness(&g);
        let slow = betweenness_path_oracle(&g);
        for v in 0..n {
            assert!(
                (fast[v] - slow[v]).abs() <= 1e-9,
                "round {round} node {v}: {} vs {}",
                fast[v],
                slow[v]
            );
        }
    }
}

#[test]
fn katz_matches_dense_solve() {
    let params = CentralityParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for round in 0..20 {
        let n = 4 + round % 12;
        let g = random_graph_min_degree_one(&mut rng, n, 0.3);
        let a = adjacency(&g);
        let rho = a
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let system = DMatrix::identity(n, n) - a * (params.katz_fraction / rho);
        let ones = nalgebra::DVector::from_element(n, 1.0);
        let exact = system.lu().solve(&ones).unwrap();
        let fast = centrality::katz(&g, &params).unwrap();
        for v in 0..n {
            assert!(
                (fast[v] - exact[v]).abs() <= 1e-6 * exact[v].abs(),
                "round {round} node {v}: {} vs {}",
                fast[v],
                exact[v]
            );
        }
    }
}

#[test]
fn pagerank_matches_dense_solve() {
    let params = CentralityParams::default();
    let d = params.pagerank_damping;
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for round in 0..20 {
        let n = 4 + round % 12;
        // Keep isolated nodes in some rounds: the dense system models the
        // dangling redistribution explicitly.
        let g = random_graph(&mut rng, n, if round % 3 == 0 { 0.15 } else { 0.4 });
        let nf = n as f64;
        let mut m = DMatrix::zeros(n, n);
        for v in 0..n as u32 {
            let k = g.degree(v);
            if k == 0 {
                for u in 0..n {
                    m[(u, v as usize)] = 1.0 / nf;
                }
            } else {
                for &u in g.neighbors(v) {
                    m[(u as usize, v as usize)] = 1.0 / k as f64;
                }
            }
        }
        let system = DMatrix::identity(n, n) - m * d;
        let teleport = nalgebra::DVector::from_element(n, (1.0 - d) / nf);
        let exact = system.lu().solve(&teleport).unwrap();
        let fast = centrality::pagerank(&g, &params).unwrap();
        for v in 0..n {
            assert!(
                (fast[v] - exact[v]).abs() <= 1e-8,
                "round {round} node {v}: {} vs {}",
                fast[v],
                exact[v]
            );
        }
    }
}

#[test]
fn subgraph_centrality_matches_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for round in 0..20 {
        let n = 3 + round % 10;
        let g = random_graph(&mut rng, n, 0.35);
        if g.edge_count() == 0 {
            continue;
        }
        let a = adjacency(&g);
        // diag(e^A) as the truncated Taylor series Σ A^k / k!.
        let mut term = DMatrix::<f64>::identity(n, n);
        let mut series = vec![1.0f64; n];
        for k in 1..=40 {
            term = (&term * &a) / k as f64;
            for v in 0..n {
                series[v] += term[(v, v)];
            }
        }
        let fast = centrality::subgraph_centrality(&g).unwrap();
        for v in 0..n {
            assert!(
                (fast[v] - series[v]).abs() <= 1e-9 * series[v],
                "round {round} node {v}: {} vs {}",
                fast[v],
                series[v]
            );
        }
    }
}

#[test]
fn core_numbers_match_naive_peeling() {
    fn survivors(g: &Graph, k: usize) -> Vec<bool> {
        let n = g.node_count();
        let mut alive = vec![true; n];
        loop {
            let mut removed = false;
            for v in 0..n as u32 {
                if !alive[v as usize] {
                    continue;
                }
                let deg = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| alive[u as usize])
                    .count();
                if deg < k {
                    alive[v as usize] = false;
                    removed = true;
                }
            }
            if !removed {
                return alive;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for round in 0..30 {
        let n = 3 + round % 30;
        let g = random_graph(&mut rng, n, 0.2);
        let fast = core_numbers(&g);
        let max_deg = g.degrees().iter().copied().max().unwrap_or(0);
        let mut expected = vec![0u32; n];
        for k in 1..=max_deg {
            for (v, alive) in survivors(&g, k).iter().enumerate() {
                if *alive {
                    expected[v] = k as u32;
                }
            }
        }
        assert_eq!(fast, expected, "round {round}");
    }
}

#[test]
fn louvain_recovers_planted_fixtures() {
    // Exhaustive maximum over all 203 partitions of the 6-node fixture.
    let g = two_triangles();
    let mut best_q = f64::NEG_INFINITY;
    let mut best = Vec::new();
    for assignment in all_partitions(6) {
        let p = Partition::from_assignment(&assignment);
        let q = modularity(&g, &p).unwrap();
        if q > best_q {
            best_q = q;
            best = assignment;
        }
    }
    assert_eq!(best, vec![0, 0, 0, 1, 1, 1]);
    assert!((best_q - 5.0 / 14.0).abs() <= 1e-12);
    for seed in 0..5 {
        let p = louvain(&g, seed).unwrap();
        assert_eq!(p.assignment(), &best[..], "seed {seed}");
        assert!((modularity(&g, &p).unwrap() - best_q).abs() <= 1e-12);
    }

    let disjoint = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
    for seed in 0..5 {
        let p = louvain(&disjoint, seed).unwrap();
        assert_eq!(p.assignment(), &[0, 0, 0, 1, 1, 1], "seed {seed}");
    }

    for seed in 0..5 {
        let p = louvain(&k3(), seed).unwrap();
        assert_eq!(p.community_count(), 1, "seed {seed}");
    }
}

#[test]
fn laplacian_centrality_matches_energy_drop() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for g in [two_triangles(), star5(), k3(), path3()] {
        assert_eq!(centrality::laplacian_centrality(&g), laplacian_drop_oracle(&g));
    }
    for round in 0..20 {
        let n = 4 + (round % 5) * 11;
        let g = random_graph(&mut rng, n, 0.15);
        // Both sides are integer-valued, so equality is exact.
        assert_eq!(
            centrality::laplacian_centrality(&g),
            laplacian_drop_oracle(&g),
            "round {round}"
        );
    }
}

#[test]
fn degree_sampler_has_power_law_shape() {
    let mut counts = vec![0u64; 28];
    let mut total = 0u64;
    let mut sum = 0u64;
    for seed in 0..40 {
        let params = LfrParams {
            seed,
            ..LfrParams::default()
        };
        for d in sample_powerlaw_degrees(&params).unwrap() {
            assert!((1..=27).contains(&d), "degree {d} out of range");
            counts[d] += 1;
            total += 1;
            sum += d as u64;
        }
    }
    let mean = sum as f64 / total as f64;
    assert!((mean - 8.0).abs() <= 0.2, "aggregate mean {mean}");
    // Floors of a truncated continuous power law: at most one partial bin
    // below the mode, strictly decreasing frequencies above it (where well
    // resolved).
    let mode = (1..=27).max_by_key(|&k| counts[k]).unwrap();
    let lowest = (1..=27).find(|&k| counts[k] > 0).unwrap();
    assert!(
        mode - lowest <= 1,
        "mass below the mode spans more than the partial bin: mode {mode}, lowest {lowest}"
    );
    let support: Vec<usize> = (mode..=27).filter(|&k| counts[k] >= 200).collect();
    for pair in support.windows(2) {
        assert!(
            counts[pair[0]] > counts[pair[1]],
            "counts rose from degree {} ({}) to {} ({})",
            pair[0],
            counts[pair[0]],
            pair[1],
            counts[pair[1]]
        );
    }
}
