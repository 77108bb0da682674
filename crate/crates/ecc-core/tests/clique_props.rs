mod common;

use common::{cliques_brute, omega_brute, per_edge_brute, petersen};
use ecc_core::{
    cliques_containing, count_per_edge, enumeration_budget_check, estimate_clique_count,
    expected_count, max_clique, maximal_cliques, EdgeSet, Error, Graph, Seed,
};
use proptest::prelude::*;

#[test]
fn census_matches_brute_force_on_a_fixed_graph() {
    let g = Graph::gnp(20, 0.5, Seed(2)).unwrap();
    let active = EdgeSet::full(&g);
    for j in [3u32, 4, 5] {
        let stats = count_per_edge(j, &g, &active).unwrap();
        assert_eq!(stats.n_cliques, cliques_brute(&g, j as usize).len() as u64);
        let mut max_seen = 0;
        for (u, v) in g.edges() {
            let brute = per_edge_brute(&g, j, u, v);
            assert_eq!(stats.per_edge(u, v) as u64, brute, "j={j} edge ({u},{v})");
            max_seen = max_seen.max(brute);
        }
        assert_eq!(stats.x_star_2 as u64, max_seen);
    }
}

#[test]
fn complete_graph_counts_are_binomials() {
    let n = 12usize;
    let g = Graph::gnp(n, 1.0, Seed(0)).unwrap();
    let active = EdgeSet::full(&g);
    let binom = |n: u64, k: u64| -> u64 {
        let mut acc = 1u64;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    };
    for j in [3u32, 4, 6] {
        let stats = count_per_edge(j, &g, &active).unwrap();
        assert_eq!(stats.n_cliques, binom(n as u64, j as u64));
        assert_eq!(stats.per_edge(0, 1) as u64, binom(n as u64 - 2, j as u64 - 2));
    }
}

#[test]
fn clique_stream_agrees_with_brute_force() {
    let g = Graph::gnp(14, 0.6, Seed(5)).unwrap();
    let active = EdgeSet::full(&g);
    let all: Vec<Vec<u32>> = cliques_containing(&[], 4, &g, &active)
        .unwrap()
        .map(|c| c.vertices().to_vec())
        .collect();
    assert_eq!(all, cliques_brute(&g, 4));

    let (u, v) = g.edges().next().unwrap();
    let through: Vec<Vec<u32>> = cliques_containing(&[u, v], 4, &g, &active)
        .unwrap()
        .map(|c| c.vertices().to_vec())
        .collect();
    let brute: Vec<Vec<u32>> = cliques_brute(&g, 4)
        .into_iter()
        .filter(|c| c.contains(&u) && c.contains(&v))
        .collect();
    assert_eq!(through, brute);
}

#[test]
fn clique_stream_rejects_bad_bases() {
    let g = Graph::gnp(10, 0.5, Seed(1)).unwrap();
    let active = EdgeSet::full(&g);
    assert!(cliques_containing(&[3, 3], 4, &g, &active).is_err());
    assert!(cliques_containing(&[5, 2], 4, &g, &active).is_err());
    assert!(cliques_containing(&[0, 1, 2, 3, 4], 4, &g, &active).is_err());
    assert!(cliques_containing(&[0, 20], 4, &g, &active).is_err());
    assert!(cliques_containing(&[], 0, &g, &active).is_err());
}

#[test]
fn max_clique_finds_planted_and_known_optima() {
    assert_eq!(max_clique(&petersen()).unwrap().vertices().len(), 2);
    let complete = Graph::gnp(9, 1.0, Seed(0)).unwrap();
    assert_eq!(max_clique(&complete).unwrap().vertices().len(), 9);

    // Two disjoint cliques of different sizes.
    let mut edges = Vec::new();
    for a in 0..5u32 {
        for b in a + 1..5 {
            edges.push((a, b));
        }
    }
    for a in 5..8u32 {
        for b in a + 1..8 {
            edges.push((a, b));
        }
    }
    let g = Graph::from_edges(8, &edges).unwrap();
    let best = max_clique(&g).unwrap();
    assert_eq!(best.vertices(), &[0, 1, 2, 3, 4]);
}

#[test]
fn maximal_clique_listing_is_sound_and_complete() {
    for seed in 0..20u64 {
        let g = Graph::gnp(12, 0.5, Seed(seed)).unwrap();
        let listed = maximal_cliques(&g).unwrap();
        for c in &listed {
            let vs = c.vertices();
            for (a, &u) in vs.iter().enumerate() {
                for &v in &vs[a + 1..] {
                    assert!(g.has_edge(u, v), "seed {seed}: listed set is not a clique");
                }
            }
            let extendable = (0..g.n() as u32)
                .filter(|w| !vs.contains(w))
                .any(|w| vs.iter().all(|&v| g.has_edge(v, w)));
            assert!(!extendable, "seed {seed}: listed clique is not maximal");
        }
        // Completeness: every brute-force maximal clique appears.
        let mut brute = Vec::new();
        for size in (1..=g.n()).rev() {
            for c in cliques_brute(&g, size) {
                let extendable = (0..g.n() as u32)
                    .filter(|w| !c.contains(w))
                    .any(|w| c.iter().all(|&v| g.has_edge(v, w)));
                if !extendable {
                    brute.push(c);
                }
            }
        }
        assert_eq!(listed.len(), brute.len(), "seed {seed}");
        let mut listed_sorted: Vec<Vec<u32>> =
            listed.iter().map(|c| c.vertices().to_vec()).collect();
        listed_sorted.sort();
        brute.sort();
        assert_eq!(listed_sorted, brute, "seed {seed}");
    }
}

#[test]
fn subset_sampling_estimates_the_census() {
    let g = Graph::gnp(30, 0.5, Seed(3)).unwrap();
    let active = EdgeSet::full(&g);
    let exact = count_per_edge(3, &g, &active).unwrap().n_cliques as f64;
    let est = estimate_clique_count(3, &g, &active, 200_000, Seed(9)).unwrap();
    assert!(est.std_error > 0.0);
    assert!(
        (est.estimate - exact).abs() <= 4.0 * est.std_error,
        "estimate {} vs exact {exact} (stderr {})",
        est.estimate,
        est.std_error
    );

    // On a complete graph every sample is accepted and the estimate is exact.
    let k = Graph::gnp(10, 1.0, Seed(0)).unwrap();
    let ka = EdgeSet::full(&k);
    let est = estimate_clique_count(4, &k, &ka, 1000, Seed(1)).unwrap();
    assert_eq!(est.estimate, 210.0);
    assert_eq!(est.std_error, 0.0);
}

#[test]
fn expected_count_matches_hand_values() {
    // Triangles per edge in G(100, 0.5): 98 * 0.25.
    assert!((expected_count(2, 3, 1, 100, 0.5).unwrap() - 24.5).abs() < 1e-12);
    // Whole-graph triangle expectation: C(100,3) / 8.
    let whole = expected_count(0, 3, 1, 100, 0.5).unwrap();
    assert!((whole - 161_700.0 / 8.0).abs() < 1e-9 * whole);
    // s = j leaves nothing to extend: the count is the discount factor alone.
    assert!((expected_count(3, 3, 1, 50, 0.5).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn expected_count_ratio_identity_spot_checks() {
    for &(s, j, i, n) in &[(0u32, 5u32, 1u32, 100usize), (2, 6, 3, 1000), (4, 9, 2, 100)] {
        let p = 0.5;
        let b = 1.0 / p;
        let lhs = expected_count(s + 1, j, i, n, p).unwrap() / expected_count(s, j, i, n, p).unwrap();
        let rhs = (j - s) as f64 / (n as f64 - s as f64)
            * (b * ((i - 1) as f64).exp()).powi(s as i32);
        assert!(
            ((lhs - rhs) / rhs).abs() < 1e-12,
            "s={s} j={j} i={i} n={n}: {lhs} vs {rhs}"
        );
    }
}

#[test]
fn expected_count_rejects_bad_arguments() {
    assert!(expected_count(4, 3, 1, 100, 0.5).is_err());
    assert!(expected_count(0, 3, 0, 100, 0.5).is_err());
    assert!(expected_count(0, 3, 1, 2, 0.5).is_err());
    assert!(expected_count(0, 3, 1, 100, 0.0).is_err());
    // p = 1 is a legal density: every j-subset is expected to be a clique.
    let full = expected_count(0, 3, 1, 100, 1.0).unwrap();
    assert!((full - 161_700.0).abs() < 1e-9 * full);
}

#[test]
fn budget_guard_blocks_large_enumerations() {
    let g = Graph::gnp(60, 0.5, Seed(4)).unwrap();
    let active = EdgeSet::full(&g);
    let err = enumeration_budget_check(3, &g, &active, 1, Some(0.5), 100, Seed(1)).unwrap_err();
    match &err {
        Error::Sizing(msg) => {
            assert!(msg.contains("iteration 1"), "{msg}");
            assert!(msg.contains("size 3"), "{msg}");
        }
        other => panic!("expected a sizing error, got {other:?}"),
    }
    enumeration_budget_check(3, &g, &active, 1, Some(0.5), 1_000_000, Seed(1)).unwrap();
    // Without a model density the guard estimates by sampling.
    assert!(enumeration_budget_check(3, &g, &active, 1, None, 100, Seed(1)).is_err());
    enumeration_budget_check(3, &g, &active, 1, None, 1_000_000, Seed(1)).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn per_edge_census_matches_brute_force(seed in 0u64..1000, j in 3u32..6) {
        let n = 8 + (seed % 7) as usize;
        let g = Graph::gnp(n, 0.5, Seed(seed)).unwrap();
        let active = EdgeSet::full(&g);
        let stats = count_per_edge(j, &g, &active).unwrap();
        prop_assert_eq!(stats.n_cliques, cliques_brute(&g, j as usize).len() as u64);
        for (u, v) in g.edges() {
            prop_assert_eq!(stats.per_edge(u, v) as u64, per_edge_brute(&g, j, u, v));
        }
    }

    #[test]
    fn max_clique_matches_brute_force(seed in 0u64..400) {
        let n = 8 + (seed % 9) as usize;
        let p = 0.3 + 0.05 * (seed % 9) as f64;
        let g = Graph::gnp(n, p, Seed(seed)).unwrap();
        let found = max_clique(&g).unwrap();
        let vs = found.vertices();
        for (a, &u) in vs.iter().enumerate() {
            for &v in &vs[a + 1..] {
                prop_assert!(g.has_edge(u, v));
            }
        }
        prop_assert_eq!(vs.len() as u32, omega_brute(&g));
    }
}
