//! Spot checks of the concentration conditions a nibble iteration leans on:
//! subset counts near their model expectations from above, and few edges far
//! below them.
//!
//! The thresholds scale like `i * n^{-1/4}` and `i * n^{-1/16}` and only bite
//! as n grows, so this module reports the measured ratios and census next to
//! those thresholds without asserting them; tests pick their own fixed
//! tolerances.

use crate::cliques::{cliques_containing, count_per_edge, enumeration_budget_check, ActiveAdj};
use crate::error::{Error, Result};
use crate::expected_count;
use crate::graph::Graph;
use crate::rng::{stream, KeyChain, KeyedRng, Seed};
use crate::{bits, EdgeSet};

/// Measured subset-count ratios and the lower-tail census for one snapshot.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    /// Iteration the snapshot belongs to (1 is the fresh graph).
    pub i: u32,
    /// Clique size counted.
    pub j: u32,
    /// Upper-tail slack the model expects: `i * n^{-1/4}`.
    pub beta_i: f64,
    /// Lower-tail slack: `i * n^{-1/16}`.
    pub gamma_i: f64,
    /// How many edges the model tolerates below the lower threshold:
    /// `i * n^{31/16}`.
    pub violation_budget: f64,
    /// Largest measured-over-expected ratio across all sampled subsets
    /// (the global count, sampled edges, sampled triangles).
    pub max_upper_ratio: f64,
    /// The global count's ratio against its expectation.
    pub count_ratio: f64,
    /// Largest sampled per-edge ratio.
    pub max_edge_ratio: f64,
    /// Largest sampled per-triangle ratio (0 when j < 3 or no triangle was
    /// found).
    pub max_triangle_ratio: f64,
    /// Active edges whose count falls below `(1 - gamma_i)` times its
    /// expectation; a full census, not a sample.
    pub violating_edge_count: u64,
    /// Edges actually sampled for the upper ratios.
    pub sampled_edges: usize,
    /// Triangles actually probed.
    pub sampled_triangles: usize,
}

/// Measures X-subset counts on a snapshot against the decayed-density model.
///
/// Samples subsets of sizes 0, 2, and 3 (the whole graph, edges, triangles)
/// and reports their count-over-expected ratios, plus a full per-edge census
/// of the lower tail. An empty snapshot reports zeros. `p` must be in (0, 1)
/// for the model expectation to exist.
#[allow(clippy::too_many_arguments)]
pub fn check_conditions(
    g: &Graph,
    active: &EdgeSet,
    iteration: u32,
    j: u32,
    p: f64,
    sampled_s: usize,
    budget: u64,
    seed: Seed,
) -> Result<ConditionReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "model expectations need p in (0, 1), got {p}"
        )));
    }
    let n = g.n();
    let nf = n as f64;
    let beta_i = iteration as f64 * nf.powf(-0.25);
    let gamma_i = iteration as f64 * nf.powf(-1.0 / 16.0);
    let violation_budget = iteration as f64 * nf.powf(31.0 / 16.0);

    enumeration_budget_check(j, g, active, iteration, Some(p), budget, seed)?;
    let stats = count_per_edge(j, g, active)?;
    let mut report = ConditionReport {
        i: iteration,
        j,
        beta_i,
        gamma_i,
        violation_budget,
        max_upper_ratio: 0.0,
        count_ratio: 0.0,
        max_edge_ratio: 0.0,
        max_triangle_ratio: 0.0,
        violating_edge_count: 0,
        sampled_edges: 0,
        sampled_triangles: 0,
    };
    if stats.m_active == 0 {
        return Ok(report);
    }

    let c0 = expected_count(0, j, iteration, n, p)?;
    let c2 = expected_count(2.min(j), j, iteration, n, p)?;
    report.count_ratio = stats.n_cliques as f64 / c0;

    let mut edges: Vec<(u32, u32)> = active.iter().collect();
    let take = sampled_s.min(edges.len());
    let mut rng = KeyedRng::from_chain(
        KeyChain::new(seed)
            .absorb(stream::TRIANGLE_PROBE)
            .absorb(iteration as u64),
    );
    for t in 0..take {
        let rest = (edges.len() - t) as u64;
        let pick = t + rng.below(rest) as usize;
        edges.swap(t, pick);
    }
    edges.truncate(take);
    report.sampled_edges = take;

    for &(u, v) in &edges {
        let ratio = stats.per_edge(u, v) as f64 / c2;
        report.max_edge_ratio = report.max_edge_ratio.max(ratio);
    }

    if j >= 3 {
        let c3 = expected_count(3, j, iteration, n, p)?;
        let adj = ActiveAdj::build(g, active);
        let mut common = vec![0u64; bits::words_for(n)];
        for &(u, v) in &edges {
            bits::and_into(&mut common, adj.row(u), adj.row(v));
            let Some(w) = bits::Ones::new(&common).next() else {
                continue;
            };
            let mut tri = [u, v, w];
            tri.sort_unstable();
            let x_t = cliques_containing(&tri, j, g, active)?.count() as f64;
            report.max_triangle_ratio = report.max_triangle_ratio.max(x_t / c3);
            report.sampled_triangles += 1;
        }
    }

    let low = (1.0 - gamma_i) * c2;
    for (u, v) in active.iter() {
        if (stats.per_edge(u, v) as f64) < low {
            report.violating_edge_count += 1;
        }
    }

    report.max_upper_ratio = report
        .count_ratio
        .max(report.max_edge_ratio)
        .max(report.max_triangle_ratio);
    Ok(report)
}
