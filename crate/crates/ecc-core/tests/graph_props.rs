use std::io::Cursor;

use ecc_core::{Error, Graph, Seed};
use proptest::prelude::*;

#[test]
fn gnp_is_deterministic_in_the_seed() {
    let a = Graph::gnp(60, 0.4, Seed(17)).unwrap();
    let b = Graph::gnp(60, 0.4, Seed(17)).unwrap();
    assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
    let c = Graph::gnp(60, 0.4, Seed(18)).unwrap();
    assert_ne!(a.edges().collect::<Vec<_>>(), c.edges().collect::<Vec<_>>());
}

#[test]
fn gnp_edge_count_concentrates() {
    let n = 200usize;
    let p = 0.3;
    let pairs = (n * (n - 1) / 2) as f64;
    let sigma = (pairs * p * (1.0 - p)).sqrt();
    for seed in 0..5 {
        let g = Graph::gnp(n, p, Seed(seed)).unwrap();
        let dev = (g.m() as f64 - pairs * p).abs();
        assert!(dev < 5.0 * sigma, "seed {seed}: m={} deviates {dev:.1}", g.m());
    }
}

#[test]
fn degenerate_probabilities_are_exact() {
    let empty = Graph::gnp(30, 0.0, Seed(1)).unwrap();
    assert_eq!(empty.m(), 0);
    let full = Graph::gnp(30, 1.0, Seed(1)).unwrap();
    assert_eq!(full.m(), 30 * 29 / 2);
    assert!(Graph::gnp(10, 1.5, Seed(1)).is_err());
    assert!(Graph::gnp(10, -0.1, Seed(1)).is_err());
}

#[test]
fn save_load_round_trips() {
    let g = Graph::gnp(40, 0.5, Seed(7)).unwrap();
    let mut bytes = Vec::new();
    g.save(&mut bytes).unwrap();
    let back = Graph::load(&mut Cursor::new(&bytes)).unwrap();
    assert_eq!(back.n(), g.n());
    assert_eq!(back.m(), g.m());
    assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
}

#[test]
fn load_rejects_malformed_input_with_line_numbers() {
    let cases: &[(&str, usize)] = &[
        ("not a header\n", 1),
        ("3 2 9\n", 1),
        ("3 2\n0 1\n0 2\nrubbish\n", 4),
        ("6 1\n0 9\n", 2),
        ("6 1\n1 1\n", 2),
        ("6 2\n0 1\n0 1\n", 3),
        ("", 1),
    ];
    for &(text, want_line) in cases {
        match Graph::load(&mut Cursor::new(text)) {
            Err(Error::Parse { line, .. }) => {
                assert_eq!(line, want_line, "input {text:?}")
            }
            other => panic!("input {text:?}: expected a parse error, got {other:?}"),
        }
    }
}

#[test]
fn edge_count_mismatch_is_rejected() {
    assert!(Graph::load(&mut Cursor::new("4 3\n0 1\n")).is_err());
    assert!(Graph::load(&mut Cursor::new("4 1\n0 1\n2 3\n")).is_err());
}

proptest! {
    #[test]
    fn edges_are_ordered_in_range_and_symmetric(n in 1usize..40, seed in 0u64..300) {
        let g = Graph::gnp(n, 0.5, Seed(seed)).unwrap();
        let mut degree_sum = 0usize;
        for v in 0..n as u32 {
            degree_sum += g.degree(v);
            for w in g.neighbors(v) {
                prop_assert!(g.has_edge(v, w) && g.has_edge(w, v));
            }
        }
        prop_assert_eq!(degree_sum, 2 * g.m());
        for (u, v) in g.edges() {
            prop_assert!(u < v && (v as usize) < n);
            prop_assert!(g.has_edge(u, v));
        }
    }

    #[test]
    fn density_tracks_p(seed in 0u64..50, p in 0.1f64..0.9) {
        let n = 100usize;
        let g = Graph::gnp(n, p, Seed(seed)).unwrap();
        let pairs = (n * (n - 1) / 2) as f64;
        let sigma = (pairs * p * (1.0 - p)).sqrt();
        prop_assert!((g.m() as f64 - pairs * p).abs() < 6.0 * sigma);
    }
}
