//! Reference points for judging a cover: the counting lower bound, an exact
//! minimum-cover solver for small graphs, and a greedy baseline.

use crate::cliques::{max_clique, maximal_cliques, Clique};
use crate::cover::CliqueCover;
use crate::error::{Error, Result};
use crate::graph::{edge_index, Graph};
use crate::EdgeSet;

/// Largest graph the exact minimum-cover solver accepts, regardless of the
/// caller's cap (its edge masks are four words, 256 pair slots).
pub const EXACT_COVER_VERTEX_CEILING: usize = 22;

/// The counting lower bound and its ingredients.
#[derive(Clone, Copy, Debug)]
pub struct BoundReport {
    /// Edge count.
    pub m: u64,
    /// Clique number, found exactly.
    pub omega: u32,
    /// `ceil(m / C(omega, 2))`: no cover can be smaller, since one member
    /// covers at most `C(omega, 2)` edges.
    pub lower: u64,
    /// `(ln(1/p))^2 * p / 2` at the empirical density `p = 2m / (n(n-1))`,
    /// the constant that calibrates the `n^2 / (ln n)^2` scaling of cover
    /// size; 0 when the density is degenerate.
    pub c1_reference: f64,
}

/// Computes the counting lower bound for a cover of `g`.
///
/// This is exact but pays for an exact maximum clique search, so it is meant
/// for graphs up to a few thousand vertices.
pub fn lower_bound(g: &Graph) -> Result<BoundReport> {
    let n = g.n();
    let m = g.m() as u64;
    if m == 0 {
        return Ok(BoundReport {
            m: 0,
            omega: u32::from(n > 0),
            lower: 0,
            c1_reference: 0.0,
        });
    }
    let omega = max_clique(g)?.len() as u32;
    let per_member = omega as u64 * (omega as u64 - 1) / 2;
    let lower = m.div_ceil(per_member);
    let density = 2.0 * m as f64 / (n as f64 * (n as f64 - 1.0));
    let c1_reference = if density > 0.0 && density < 1.0 {
        let ln_b = (1.0 / density).ln();
        ln_b * ln_b * density / 2.0
    } else {
        0.0
    };
    Ok(BoundReport {
        m,
        omega,
        lower,
        c1_reference,
    })
}

type EdgeMask = [u64; 4];

fn mask_set(mask: &mut EdgeMask, idx: usize) {
    mask[idx / 64] |= 1 << (idx % 64);
}

fn mask_count(mask: &EdgeMask) -> u32 {
    mask.iter().map(|w| w.count_ones()).sum()
}

fn mask_first(mask: &EdgeMask) -> Option<usize> {
    for (wi, &w) in mask.iter().enumerate() {
        if w != 0 {
            return Some(wi * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

fn mask_subtract(mask: &EdgeMask, other: &EdgeMask) -> EdgeMask {
    [
        mask[0] & !other[0],
        mask[1] & !other[1],
        mask[2] & !other[2],
        mask[3] & !other[3],
    ]
}

fn mask_and_count(a: &EdgeMask, b: &EdgeMask) -> u32 {
    (0..4).map(|i| (a[i] & b[i]).count_ones()).sum()
}

struct ExactContext {
    masks: Vec<EdgeMask>,
    by_edge: Vec<Vec<u32>>,
    per_member: u32,
}

/// Finds a minimum edge clique cover, exactly.
///
/// Branches on the lowest-index uncovered edge: some cover member must
/// contain it, and members can always be grown to maximal cliques without
/// changing the count, so the candidates are exactly the maximal cliques
/// through that edge (tried best-coverage-first, ties to the lower clique
/// index). Prunes with `chosen + ceil(uncovered / C(omega, 2)) >= best`,
/// seeded by the greedy cover.
///
/// Errors: graphs past `vertex_cap` or past the solver's own ceiling of
/// [`EXACT_COVER_VERTEX_CEILING`] vertices are a sizing error.
pub fn exact_theta1(g: &Graph, vertex_cap: usize) -> Result<CliqueCover> {
    let n = g.n();
    if n > vertex_cap {
        return Err(Error::Sizing(format!(
            "exact cover requested with cap {vertex_cap} vertices, got {n}"
        )));
    }
    if n > EXACT_COVER_VERTEX_CEILING {
        return Err(Error::Sizing(format!(
            "exact cover solver handles at most {EXACT_COVER_VERTEX_CEILING} vertices, got {n}"
        )));
    }
    if g.m() == 0 {
        return Ok(CliqueCover::new());
    }

    let cliques: Vec<Clique> = maximal_cliques(g)?
        .into_iter()
        .filter(|c| c.len() >= 2)
        .collect();
    let table = crate::graph::pair_count(n);
    debug_assert!(table <= 256);
    let mut masks = Vec::with_capacity(cliques.len());
    let mut by_edge: Vec<Vec<u32>> = vec![Vec::new(); table];
    for (id, c) in cliques.iter().enumerate() {
        let mut mask = [0u64; 4];
        for (u, v) in c.pairs() {
            let idx = edge_index(n, u, v);
            mask_set(&mut mask, idx);
            by_edge[idx].push(id as u32);
        }
        masks.push(mask);
    }
    let omega = cliques.iter().map(|c| c.len()).max().unwrap_or(2) as u32;
    let per_member = omega * (omega - 1) / 2;

    let mut target = [0u64; 4];
    for (u, v) in g.edges() {
        mask_set(&mut target, edge_index(n, u, v));
    }

    let greedy = greedy_cover(g)?;
    let mut best_len = greedy.len();
    let mut best_ids: Option<Vec<u32>> = None;
    let ctx = ExactContext {
        masks,
        by_edge,
        per_member,
    };
    let mut chosen = Vec::new();
    search(&ctx, target, &mut chosen, &mut best_len, &mut best_ids);

    match best_ids {
        Some(ids) => {
            let mut cover = CliqueCover::new();
            for id in ids {
                cover.push(cliques[id as usize].clone());
            }
            Ok(cover)
        }
        None => Ok(greedy),
    }
}

fn search(
    ctx: &ExactContext,
    uncovered: EdgeMask,
    chosen: &mut Vec<u32>,
    best_len: &mut usize,
    best_ids: &mut Option<Vec<u32>>,
) {
    let remaining = mask_count(&uncovered);
    if remaining == 0 {
        if chosen.len() < *best_len || best_ids.is_none() {
            *best_len = chosen.len();
            *best_ids = Some(chosen.clone());
        }
        return;
    }
    let bound = chosen.len() + remaining.div_ceil(ctx.per_member) as usize;
    if bound > *best_len || (bound == *best_len && best_ids.is_some()) {
        return;
    }
    let edge = mask_first(&uncovered).expect("nonzero mask has a first bit");
    let mut candidates: Vec<u32> = ctx.by_edge[edge].clone();
    candidates.sort_by_key(|&id| {
        (
            std::cmp::Reverse(mask_and_count(&ctx.masks[id as usize], &uncovered)),
            id,
        )
    });
    for id in candidates {
        chosen.push(id);
        let next = mask_subtract(&uncovered, &ctx.masks[id as usize]);
        search(ctx, next, chosen, best_len, best_ids);
        chosen.pop();
    }
}

/// Builds a cover greedily: take the lowest-index uncovered edge, grow it to
/// a maximal clique preferring the neighbor that covers the most still
/// uncovered edges (ties to the lowest vertex id), emit, repeat.
///
/// Always valid, never minimal in general, and polynomial, so it scales far
/// past the exact solver.
pub fn greedy_cover(g: &Graph) -> Result<CliqueCover> {
    let n = g.n();
    let words = crate::bits::words_for(n);
    let mut uncovered = EdgeSet::full(g);
    let mut cover = CliqueCover::new();
    let mut cand = vec![0u64; words];
    let mut next = vec![0u64; words];
    while let Some((u, v)) = uncovered.iter().next() {
        let mut clique = vec![u, v];
        crate::bits::and_into(&mut cand, g.row(u), g.row(v));
        loop {
            let mut pick: Option<(u32, u32)> = None;
            for w in crate::bits::Ones::new(&cand) {
                let fresh = clique
                    .iter()
                    .filter(|&&k| {
                        let (a, b) = (k.min(w), k.max(w));
                        uncovered.contains(a, b)
                    })
                    .count() as u32;
                let better = match pick {
                    None => true,
                    Some((best_fresh, _)) => fresh > best_fresh,
                };
                if better {
                    pick = Some((fresh, w));
                }
            }
            let Some((_, w)) = pick else { break };
            clique.push(w);
            crate::bits::and_into(&mut next, &cand, g.row(w));
            cand.copy_from_slice(&next);
        }
        clique.sort_unstable();
        for a in 0..clique.len() {
            for b in a + 1..clique.len() {
                uncovered.remove(clique[a], clique[b]);
            }
        }
        cover.push(Clique::from_sorted(clique));
    }
    Ok(cover)
}
