//! Brute-force oracles for cross-checking the library on tiny graphs.
//!
//! Everything here works straight from `has_edge`, with no shared code or
//! shared tricks with the algorithms under test, and is exponential on
//! purpose: correctness over speed, usable up to a dozen or so vertices.

#![allow(dead_code)]

use ecc_core::Graph;

/// All j-cliques as sorted vertex lists, in lexicographic order.
pub fn cliques_brute(g: &Graph, j: usize) -> Vec<Vec<u32>> {
    fn rec(g: &Graph, j: usize, start: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for v in start..g.n() as u32 {
            if cur.iter().all(|&u| g.has_edge(u, v)) {
                cur.push(v);
                rec(g, j, v + 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(g, j, 0, &mut Vec::new(), &mut out);
    out
}

/// Number of j-cliques containing the edge (u, v): the count of
/// (j-2)-subsets of the common neighborhood that induce cliques.
pub fn per_edge_brute(g: &Graph, j: u32, u: u32, v: u32) -> u64 {
    assert!(j >= 2 && g.has_edge(u, v));
    let common: Vec<u32> = (0..g.n() as u32)
        .filter(|&w| w != u && w != v && g.has_edge(u, w) && g.has_edge(v, w))
        .collect();
    clique_subsets(g, &common, j as usize - 2)
}

fn clique_subsets(g: &Graph, cand: &[u32], t: usize) -> u64 {
    if t == 0 {
        return 1;
    }
    if cand.len() < t {
        return 0;
    }
    let (&head, rest) = cand.split_first().unwrap();
    let filtered: Vec<u32> = rest.iter().copied().filter(|&w| g.has_edge(head, w)).collect();
    clique_subsets(g, &filtered, t - 1) + clique_subsets(g, rest, t)
}

/// Maximum clique size, by include/exclude search with a size prune.
pub fn omega_brute(g: &Graph) -> u32 {
    fn rec(g: &Graph, cand: &[u32], have: u32, best: &mut u32) {
        if have > *best {
            *best = have;
        }
        if have + cand.len() as u32 <= *best {
            return;
        }
        let (&head, rest) = cand.split_first().unwrap();
        let filtered: Vec<u32> = rest.iter().copied().filter(|&w| g.has_edge(head, w)).collect();
        rec(g, &filtered, have + 1, best);
        if !rest.is_empty() {
            rec(g, rest, have, best);
        }
    }
    if g.n() == 0 {
        return 0;
    }
    let all: Vec<u32> = (0..g.n() as u32).collect();
    let mut best = 0;
    rec(g, &all, 0, &mut best);
    best
}

/// Minimum number of cliques covering every edge, by iterative deepening
/// over covers built from maximal cliques. Exact; restricted to n <= 8.
pub fn theta1_brute(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= 8, "cover oracle is exponential; keep n at most 8");
    let edges: Vec<(u32, u32)> = g.edges().collect();
    let m = edges.len();
    if m == 0 {
        return 0;
    }

    let vertex_sets: Vec<u32> = (1u32..1 << n)
        .filter(|sub| sub.count_ones() >= 2 && is_clique_mask(g, *sub) && is_maximal_mask(g, *sub))
        .collect();
    let edge_masks: Vec<u32> = vertex_sets
        .iter()
        .map(|&sub| {
            let mut mask = 0u32;
            for (idx, &(u, v)) in edges.iter().enumerate() {
                if sub >> u & 1 == 1 && sub >> v & 1 == 1 {
                    mask |= 1 << idx;
                }
            }
            mask
        })
        .collect();
    let by_edge: Vec<Vec<u32>> = (0..m)
        .map(|e| edge_masks.iter().copied().filter(|msk| msk >> e & 1 == 1).collect())
        .collect();
    let max_per = edge_masks.iter().map(|msk| msk.count_ones()).max().unwrap();

    fn covers(uncovered: u32, k: u64, by_edge: &[Vec<u32>], max_per: u32) -> bool {
        if uncovered == 0 {
            return true;
        }
        if uncovered.count_ones().div_ceil(max_per) as u64 > k {
            return false;
        }
        let e = uncovered.trailing_zeros() as usize;
        by_edge[e].iter().any(|&msk| covers(uncovered & !msk, k - 1, by_edge, max_per))
    }

    let full: u32 = if m == 32 { u32::MAX } else { (1 << m) - 1 };
    (0u64..).find(|&k| covers(full, k, &by_edge, max_per)).unwrap()
}

fn is_clique_mask(g: &Graph, sub: u32) -> bool {
    let verts: Vec<u32> = (0..g.n() as u32).filter(|&v| sub >> v & 1 == 1).collect();
    verts
        .iter()
        .enumerate()
        .all(|(a, &u)| verts[a + 1..].iter().all(|&v| g.has_edge(u, v)))
}

fn is_maximal_mask(g: &Graph, sub: u32) -> bool {
    (0..g.n() as u32)
        .filter(|&w| sub >> w & 1 == 0)
        .all(|w| (0..g.n() as u32).any(|v| sub >> v & 1 == 1 && !g.has_edge(v, w)))
}

/// The Petersen graph: 10 vertices, 15 edges, 3-regular, triangle-free.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5u32 {
        edges.push(ordered(i, (i + 1) % 5));
        edges.push(ordered(i + 5, (i + 2) % 5 + 5));
        edges.push((i, i + 5));
    }
    Graph::from_edges(10, &edges).unwrap()
}

fn ordered(u: u32, v: u32) -> (u32, u32) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A small random graph with shape and density both varied by the seed.
pub fn small_graph(seed: u64) -> Graph {
    let n = 3 + (seed % 6) as usize;
    let p = 0.2 + 0.1 * (seed / 6 % 7) as f64;
    Graph::gnp(n, p, ecc_core::Seed(seed)).unwrap()
}
