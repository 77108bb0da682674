//! Exact clique enumeration against an active edge set.
//!
//! Everything here walks the same ordered search tree: a clique is visited
//! exactly once, as its vertices in increasing order. Candidate sets are
//! bitsets, so descending one level is an AND plus a mask that keeps only
//! vertices above the last one chosen.

use rayon::prelude::*;

use crate::bits;
use crate::error::{Error, Result};
use crate::graph::{edge_index, pair_base, pair_count, Graph};
use crate::rng::KeyChain;
use crate::EdgeSet;

use super::{binom2, Clique, CliqueStats};

/// Largest vertex count for which the dense per-edge table is allocated.
const PER_EDGE_TABLE_CAP: usize = 16_384;

/// Triangles probed when estimating the per-triangle maximum for j >= 4.
const TRIANGLE_PROBES: usize = 1_024;

/// Adjacency bitsets restricted to a set of active edges.
pub(crate) struct ActiveAdj {
    words: usize,
    rows: Vec<u64>,
    pair_bases: Vec<usize>,
}

impl ActiveAdj {
    pub(crate) fn build(g: &Graph, active: &EdgeSet) -> ActiveAdj {
        let n = g.n();
        let words = bits::words_for(n);
        let mut rows = vec![0u64; n * words];
        for (u, v) in active.iter() {
            debug_assert!(g.has_edge(u, v), "active set contains a non-edge");
            bits::set_bit(&mut rows[u as usize * words..][..words], v as usize);
            bits::set_bit(&mut rows[v as usize * words..][..words], u as usize);
        }
        let pair_bases = (0..n).map(|u| pair_base(n, u as u32)).collect();
        ActiveAdj {
            words,
            rows,
            pair_bases,
        }
    }

    #[inline]
    pub(crate) fn row(&self, v: u32) -> &[u64] {
        &self.rows[v as usize * self.words..][..self.words]
    }

    #[inline]
    fn pair_index(&self, u: u32, above: u32) -> usize {
        debug_assert!(above > u);
        self.pair_bases[u as usize].wrapping_add(above as usize)
    }
}

struct Scratch {
    levels: Vec<Vec<u64>>,
    cands: Vec<Vec<u32>>,
    prefix: Vec<u32>,
    chains: Vec<KeyChain>,
}

impl Scratch {
    fn new(words: usize, j: usize) -> Scratch {
        Scratch {
            levels: vec![vec![0u64; words]; j + 1],
            cands: vec![Vec::new(); j + 1],
            prefix: Vec::with_capacity(j),
            chains: vec![KeyChain::new(crate::Seed(0)); j + 1],
        }
    }

    fn enter_root(&mut self, adj: &ActiveAdj, a: u32, b: u32) {
        self.prefix.clear();
        self.prefix.push(a);
        self.prefix.push(b);
        bits::and_above_into(&mut self.levels[2], adj.row(a), adj.row(b), b as usize);
    }
}

struct Partial {
    per_edge: Vec<u32>,
    cliques: u64,
}

impl Partial {
    fn new(table: usize) -> Partial {
        Partial {
            per_edge: vec![0u32; table],
            cliques: 0,
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        for (a, b) in self.per_edge.iter_mut().zip(other.per_edge.iter()) {
            *a += *b;
        }
        self.cliques += other.cliques;
        self
    }
}

fn count_extend(adj: &ActiveAdj, j: usize, depth: usize, s: &mut Scratch, out: &mut Partial) {
    if depth == j - 1 {
        let cand = &s.levels[depth];
        let t = bits::count_ones(cand);
        if t == 0 {
            return;
        }
        out.cliques += t;
        let t32 = t as u32;
        for a in 0..s.prefix.len() {
            for b in a + 1..s.prefix.len() {
                out.per_edge[adj.pair_index(s.prefix[a], s.prefix[b])] += t32;
            }
        }
        for w in bits::Ones::new(cand) {
            for &x in &s.prefix {
                out.per_edge[adj.pair_index(x, w)] += 1;
            }
        }
        return;
    }
    let len = {
        let list = &mut s.cands[depth];
        list.clear();
        list.extend(bits::Ones::new(&s.levels[depth]));
        list.len()
    };
    for idx in 0..len {
        let c = s.cands[depth][idx];
        {
            let (lo, hi) = s.levels.split_at_mut(depth + 1);
            bits::and_above_into(&mut hi[0], &lo[depth], adj.row(c), c as usize);
        }
        s.prefix.push(c);
        count_extend(adj, j, depth + 1, s, out);
        s.prefix.pop();
    }
}

fn chunk_size(total: usize) -> usize {
    let jobs = rayon::current_num_threads() * 8;
    (total / jobs.max(1)).max(512)
}

/// Exact per-edge census of active j-cliques.
///
/// Returns, for every edge, the number of active j-cliques containing it,
/// along with the clique total, the per-edge and per-triangle maxima, and the
/// average load. A clique is active when all of its edges are. For `j = 2`
/// each active edge is its own clique. For `j > n` the census is empty.
///
/// The per-triangle maximum is exact for `j <= 3`; for larger `j` computing
/// it exactly would touch every clique once per triangle, so instead a fixed
/// sweep of triangles (first common neighbor of evenly spaced active edges)
/// is counted exactly and the largest value reported. That is a deterministic
/// lower bound on the true maximum, which is what the reported statistic is
/// for: a load reading, not a certified extreme.
///
/// Errors: `j < 2` is a precondition error; the dense table refuses graphs
/// past 16384 vertices as a sizing error.
pub fn count_per_edge(j: u32, g: &Graph, active: &EdgeSet) -> Result<CliqueStats> {
    if j < 2 {
        return Err(Error::Precondition(format!(
            "clique size must be at least 2, got {j}"
        )));
    }
    if active.n() != g.n() {
        return Err(Error::Precondition(
            "active edge set sized for a different graph".into(),
        ));
    }
    if g.n() > PER_EDGE_TABLE_CAP {
        return Err(Error::Sizing(format!(
            "per-edge table needs {} counters for n = {}; cap is n = {}",
            pair_count(g.n()),
            g.n(),
            PER_EDGE_TABLE_CAP
        )));
    }
    let n = g.n();
    let table = pair_count(n);
    let m_active = active.len() as u64;
    if j as usize > n {
        return Ok(CliqueStats::new(j, n, vec![0u32; table], 0, m_active, 0));
    }
    if j == 2 {
        let mut per_edge = vec![0u32; table];
        for (u, v) in active.iter() {
            per_edge[edge_index(n, u, v)] = 1;
        }
        return Ok(CliqueStats::new(j, n, per_edge, m_active, m_active, 0));
    }

    let adj = ActiveAdj::build(g, active);
    let roots: Vec<(u32, u32)> = active.iter().collect();
    let j_us = j as usize;
    let words = adj.words;
    let partial = roots
        .par_chunks(chunk_size(roots.len()))
        .fold(
            || Partial::new(table),
            |mut acc, chunk| {
                let mut scratch = Scratch::new(words, j_us);
                for &(a, b) in chunk {
                    scratch.enter_root(&adj, a, b);
                    count_extend(&adj, j_us, 2, &mut scratch, &mut acc);
                }
                acc
            },
        )
        .reduce(|| Partial::new(table), Partial::merge);

    debug_assert_eq!(
        partial.cliques * binom2(j as u64),
        partial.per_edge.iter().map(|&c| c as u64).sum::<u64>()
    );

    let x_star_3 = probe_x_star_3(&adj, &roots, j, partial.cliques);
    Ok(CliqueStats::new(
        j,
        n,
        partial.per_edge,
        partial.cliques,
        m_active,
        x_star_3,
    ))
}

fn probe_x_star_3(adj: &ActiveAdj, roots: &[(u32, u32)], j: u32, n_cliques: u64) -> u32 {
    if j == 2 || roots.is_empty() {
        return 0;
    }
    if j == 3 {
        return (n_cliques > 0) as u32;
    }
    let need = (j - 3) as usize;
    let mut levels = vec![vec![0u64; adj.words]; need + 1];
    let mut common = vec![0u64; adj.words];
    let stride = (roots.len() / TRIANGLE_PROBES).max(1);
    let mut best = 0u64;
    for &(a, b) in roots.iter().step_by(stride) {
        bits::and_into(&mut common, adj.row(a), adj.row(b));
        let Some(w) = bits::Ones::new(&common).next() else {
            continue;
        };
        bits::and_into(&mut levels[0], &common, adj.row(w));
        let x_t = count_chains(adj, &mut levels, 0, need);
        best = best.max(x_t);
    }
    best.min(u32::MAX as u64) as u32
}

fn count_chains(adj: &ActiveAdj, levels: &mut [Vec<u64>], depth: usize, need: usize) -> u64 {
    if need == 1 {
        return bits::count_ones(&levels[depth]);
    }
    let list: Vec<u32> = bits::Ones::new(&levels[depth]).collect();
    let mut acc = 0u64;
    for c in list {
        let (lo, hi) = levels.split_at_mut(depth + 1);
        bits::and_above_into(&mut hi[0], &lo[depth], adj.row(c), c as usize);
        acc += count_chains(adj, levels, depth + 1, need - 1);
    }
    acc
}

fn select_extend(
    adj: &ActiveAdj,
    j: usize,
    depth: usize,
    s: &mut Scratch,
    threshold: u128,
    out: &mut Vec<Clique>,
) {
    if depth == j - 1 {
        let chain = s.chains[depth];
        for w in bits::Ones::new(&s.levels[depth]) {
            if crate::rng::hits(chain.absorb(w as u64).value(), threshold) {
                let mut v = Vec::with_capacity(j);
                v.extend_from_slice(&s.prefix);
                v.push(w);
                out.push(Clique::from_sorted(v));
            }
        }
        return;
    }
    let len = {
        let list = &mut s.cands[depth];
        list.clear();
        list.extend(bits::Ones::new(&s.levels[depth]));
        list.len()
    };
    for idx in 0..len {
        let c = s.cands[depth][idx];
        {
            let (lo, hi) = s.levels.split_at_mut(depth + 1);
            bits::and_above_into(&mut hi[0], &lo[depth], adj.row(c), c as usize);
        }
        s.chains[depth + 1] = s.chains[depth].absorb(c as u64);
        s.prefix.push(c);
        select_extend(adj, j, depth + 1, s, threshold, out);
        s.prefix.pop();
    }
}

/// Walks every active j-clique and keeps each one independently when its
/// keyed draw lands under `threshold`. Output order is the enumeration order
/// (lexicographic), independent of thread count.
pub(crate) fn select_cliques(
    g: &Graph,
    active: &EdgeSet,
    j: u32,
    base: KeyChain,
    threshold: u128,
) -> Vec<Clique> {
    debug_assert!(j >= 3);
    let adj = ActiveAdj::build(g, active);
    let roots: Vec<(u32, u32)> = active.iter().collect();
    let j_us = j as usize;
    let words = adj.words;
    let picked: Vec<Vec<Clique>> = roots
        .par_chunks(chunk_size(roots.len()))
        .map(|chunk| {
            let mut scratch = Scratch::new(words, j_us);
            let mut out = Vec::new();
            for &(a, b) in chunk {
                scratch.enter_root(&adj, a, b);
                scratch.chains[2] = base.absorb(a as u64).absorb(b as u64);
                select_extend(&adj, j_us, 2, &mut scratch, threshold, &mut out);
            }
            out
        })
        .collect();
    picked.into_iter().flatten().collect()
}

#[derive(Clone, Copy, Default)]
struct OnesCursor {
    wi: usize,
    bits: u64,
}

impl OnesCursor {
    fn start(words: &[u64]) -> OnesCursor {
        OnesCursor {
            wi: 0,
            bits: words.first().copied().unwrap_or(0),
        }
    }

    fn next(&mut self, words: &[u64]) -> Option<u32> {
        loop {
            if self.bits != 0 {
                let b = self.bits.trailing_zeros();
                self.bits &= self.bits - 1;
                return Some((self.wi * bits::WORD_BITS) as u32 + b);
            }
            self.wi += 1;
            if self.wi >= words.len() {
                return None;
            }
            self.bits = words[self.wi];
        }
    }
}

/// Lazy enumeration of the active j-cliques containing a fixed base clique,
/// in lexicographic vertex order. Created by [`cliques_containing`].
pub struct CliqueStream {
    adj: ActiveAdj,
    base: Vec<u32>,
    ext_need: usize,
    levels: Vec<Vec<u64>>,
    cursors: Vec<OnesCursor>,
    ext: Vec<u32>,
    depth: usize,
    done: bool,
}

impl CliqueStream {
    fn assemble(&self, last: u32) -> Clique {
        let total = self.base.len() + self.depth + 1;
        let mut merged = Vec::with_capacity(total);
        let mut bi = 0;
        let push_ext = |merged: &mut Vec<u32>, x: u32, bi: &mut usize| {
            while *bi < self.base.len() && self.base[*bi] < x {
                merged.push(self.base[*bi]);
                *bi += 1;
            }
            merged.push(x);
        };
        for d in 0..self.depth {
            push_ext(&mut merged, self.ext[d], &mut bi);
        }
        push_ext(&mut merged, last, &mut bi);
        merged.extend_from_slice(&self.base[bi..]);
        Clique::from_sorted(merged)
    }
}

impl Iterator for CliqueStream {
    type Item = Clique;

    fn next(&mut self) -> Option<Clique> {
        if self.done {
            return None;
        }
        if self.ext_need == 0 {
            self.done = true;
            return Some(Clique::from_sorted(self.base.clone()));
        }
        loop {
            match self.cursors[self.depth].next(&self.levels[self.depth]) {
                Some(c) => {
                    if self.depth + 1 == self.ext_need {
                        return Some(self.assemble(c));
                    }
                    self.ext[self.depth] = c;
                    let (lo, hi) = self.levels.split_at_mut(self.depth + 1);
                    bits::and_above_into(&mut hi[0], &lo[self.depth], self.adj.row(c), c as usize);
                    self.depth += 1;
                    self.cursors[self.depth] = OnesCursor::start(&self.levels[self.depth]);
                }
                None => {
                    if self.depth == 0 {
                        self.done = true;
                        return None;
                    }
                    self.depth -= 1;
                }
            }
        }
    }
}

/// Streams the active j-cliques containing the base clique, lexicographically.
///
/// The base must be strictly increasing, each pair of its vertices an active
/// edge, and `base.len() <= j <= n`. An empty base streams all active
/// j-cliques; a base of size `j` streams itself. Nothing is materialized:
/// each call to `next` advances an ordered depth-first walk.
pub fn cliques_containing(
    base: &[u32],
    j: u32,
    g: &Graph,
    active: &EdgeSet,
) -> Result<CliqueStream> {
    if active.n() != g.n() {
        return Err(Error::Precondition(
            "active edge set sized for a different graph".into(),
        ));
    }
    let n = g.n();
    if j == 0 || j as usize > n {
        return Err(Error::Precondition(format!(
            "clique size {j} out of range for {n} vertices"
        )));
    }
    if base.len() > j as usize {
        return Err(Error::Precondition(format!(
            "base has {} vertices but target size is {j}",
            base.len()
        )));
    }
    for w in base.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Precondition(
                "base vertices must be strictly increasing".into(),
            ));
        }
    }
    if let Some(&last) = base.last() {
        if last as usize >= n {
            return Err(Error::Precondition(format!(
                "base vertex {last} out of range for {n} vertices"
            )));
        }
    }
    for a in 0..base.len() {
        for b in a + 1..base.len() {
            if !active.contains(base[a], base[b]) {
                return Err(Error::Precondition(format!(
                    "base is not a clique in the active set: ({}, {}) inactive",
                    base[a], base[b]
                )));
            }
        }
    }

    let adj = ActiveAdj::build(g, active);
    let ext_need = j as usize - base.len();
    let words = adj.words;
    let mut first = vec![0u64; words];
    if base.is_empty() {
        for v in 0..n {
            bits::set_bit(&mut first, v);
        }
    } else {
        first.copy_from_slice(adj.row(base[0]));
        let mut tmp = vec![0u64; words];
        for &v in &base[1..] {
            bits::and_into(&mut tmp, &first, adj.row(v));
            first.copy_from_slice(&tmp);
        }
    }
    let mut levels = vec![vec![0u64; words]; ext_need.max(1)];
    levels[0] = first;
    let cursors = vec![OnesCursor::start(&levels[0]); ext_need.max(1)];
    Ok(CliqueStream {
        adj,
        base: base.to_vec(),
        ext_need,
        levels,
        cursors,
        ext: vec![0; ext_need.max(1)],
        depth: 0,
        done: false,
    })
}
