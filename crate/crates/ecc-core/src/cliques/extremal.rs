//! Exact extremal clique searches: a branch-and-bound maximum clique and a
//! pivoting enumeration of all maximal cliques.

use crate::bits;
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::Clique;

/// Largest graph `maximal_cliques` will enumerate (the listing can be
/// exponential, and the implementation packs candidate sets into one word).
pub const MAXIMAL_VERTEX_CAP: usize = 32;

/// Largest graph `max_clique` will search.
const MAX_CLIQUE_VERTEX_CAP: usize = 8_192;

/// Finds a maximum clique, exactly, and returns its vertices in increasing
/// order.
///
/// The search relabels vertices in degeneracy order, seeds the bound with
/// greedy cliques grown from the dense end of that order, and then runs an
/// ordered branch-and-bound where each node greedily colors its candidate
/// set and prunes branches whose color class cannot beat the incumbent.
/// Vertices colored above the branch threshold are re-colored below it when
/// a single-conflict swap allows, which trims the branch list at every node.
/// The search is sequential and deterministic: equal-size maxima always
/// resolve to the same witness.
///
/// Errors: the empty graph is a precondition error; graphs past 8192 vertices
/// are a sizing error.
pub fn max_clique(g: &Graph) -> Result<Clique> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Precondition("empty graph has no cliques".into()));
    }
    if n > MAX_CLIQUE_VERTEX_CAP {
        return Err(Error::Sizing(format!(
            "maximum clique search caps at {MAX_CLIQUE_VERTEX_CAP} vertices, got {n}"
        )));
    }

    let order = degeneracy_order(g);
    let mut rank = vec![0u32; n];
    for (pos, &v) in order.iter().enumerate() {
        rank[v as usize] = pos as u32;
    }
    let words = bits::words_for(n);
    let mut radj = vec![0u64; n * words];
    for (u, v) in g.edges() {
        let (ru, rv) = (rank[u as usize] as usize, rank[v as usize] as usize);
        bits::set_bit(&mut radj[ru * words..][..words], rv);
        bits::set_bit(&mut radj[rv * words..][..words], ru);
    }

    let mut search = Search {
        radj,
        words,
        best: 0,
        witness: Vec::new(),
        r_stack: Vec::new(),
        child_p: Vec::new(),
        color_copy: Vec::new(),
        color_cand: Vec::new(),
        classes: Vec::new(),
        orders: Vec::new(),
        hi_members: Vec::new(),
    };

    for s in (n.saturating_sub(256)..n).rev() {
        search.greedy_seed(s);
    }

    let mut p0 = vec![0u64; words];
    for pos in (0..n).rev() {
        let row = &search.radj[pos * words..][..words];
        bits::and_above_into(&mut p0, row, row, pos);
        if 1 + bits::count_ones(&p0) as usize <= search.best {
            continue;
        }
        search.r_stack.clear();
        search.r_stack.push(pos as u32);
        search.expand(&mut p0, 0);
    }

    let mut vertices: Vec<u32> = search.witness.iter().map(|&pos| order[pos as usize]).collect();
    vertices.sort_unstable();
    Ok(Clique::from_sorted(vertices))
}

struct Search {
    radj: Vec<u64>,
    words: usize,
    best: usize,
    witness: Vec<u32>,
    r_stack: Vec<u32>,
    child_p: Vec<Vec<u64>>,
    color_copy: Vec<Vec<u64>>,
    color_cand: Vec<Vec<u64>>,
    classes: Vec<Vec<Vec<u64>>>,
    orders: Vec<Vec<(u32, u32)>>,
    hi_members: Vec<u32>,
}

impl Search {
    fn row(&self, pos: u32) -> &[u64] {
        &self.radj[pos as usize * self.words..][..self.words]
    }

    fn ensure(&mut self, depth: usize) {
        while self.child_p.len() <= depth {
            self.child_p.push(vec![0u64; self.words]);
            self.color_copy.push(vec![0u64; self.words]);
            self.color_cand.push(vec![0u64; self.words]);
            self.classes.push(Vec::new());
            self.orders.push(Vec::new());
        }
    }

    fn greedy_seed(&mut self, start: usize) {
        let mut clique = vec![start as u32];
        let mut cand = self.row(start as u32).to_vec();
        let mut next = vec![0u64; self.words];
        loop {
            let mut pick = None;
            let mut pick_score = 0u64;
            for v in bits::Ones::new(&cand) {
                bits::and_into(&mut next, &cand, self.row(v));
                let score = bits::count_ones(&next) + 1;
                if pick.is_none() || score > pick_score {
                    pick = Some(v);
                    pick_score = score;
                }
            }
            match pick {
                Some(v) => {
                    clique.push(v);
                    let row = self.row(v);
                    bits::and_into(&mut next, &cand, row);
                    cand.copy_from_slice(&next);
                }
                None => break,
            }
        }
        if clique.len() > self.best {
            self.best = clique.len();
            self.witness = clique;
        }
    }

    fn expand(&mut self, p: &mut [u64], depth: usize) {
        self.ensure(depth);
        let mut order = std::mem::take(&mut self.orders[depth]);
        let mut copy = std::mem::take(&mut self.color_copy[depth]);
        let mut cand = std::mem::take(&mut self.color_cand[depth]);
        let mut classes = std::mem::take(&mut self.classes[depth]);
        order.clear();

        copy.copy_from_slice(p);
        let mut colors = 0usize;
        while bits::count_ones(&copy) != 0 {
            if classes.len() == colors {
                classes.push(vec![0u64; self.words]);
            }
            let class = &mut classes[colors];
            class.iter_mut().for_each(|w| *w = 0);
            colors += 1;
            cand.copy_from_slice(&copy);
            while let Some(v) = bits::Ones::new(&cand).next() {
                bits::clear_bit(&mut cand, v as usize);
                bits::clear_bit(&mut copy, v as usize);
                bits::set_bit(class, v as usize);
                let row = &self.radj[v as usize * self.words..][..self.words];
                for (c, r) in cand.iter_mut().zip(row.iter()) {
                    *c &= !r;
                }
            }
        }

        // Vertices colored above `threshold` are the ones that will branch.
        // When such a vertex has exactly one neighbor in some low class, and
        // that neighbor fits into another class at or below the threshold,
        // swap them to pull the vertex out of the branch list.
        let threshold = self.best.saturating_sub(self.r_stack.len());
        if threshold >= 2 && colors > threshold {
            let mut members = std::mem::take(&mut self.hi_members);
            for hi in threshold..colors {
                members.clear();
                members.extend(bits::Ones::new(&classes[hi]));
                for &v in &members {
                    self.recolor(&mut classes, hi, v, threshold);
                }
            }
            self.hi_members = members;
        }

        for (ci, class) in classes[..colors].iter().enumerate() {
            let color = ci as u32 + 1;
            for v in bits::Ones::new(class) {
                order.push((v, color));
            }
        }

        let mut i = order.len();
        while i > 0 {
            i -= 1;
            let (v, color) = order[i];
            if self.r_stack.len() + color as usize <= self.best {
                break;
            }
            let mut newp = std::mem::take(&mut self.child_p[depth]);
            {
                let row = &self.radj[v as usize * self.words..][..self.words];
                bits::and_into(&mut newp, p, row);
            }
            if bits::count_ones(&newp) == 0 {
                if self.r_stack.len() + 1 > self.best {
                    self.best = self.r_stack.len() + 1;
                    self.witness = self.r_stack.clone();
                    self.witness.push(v);
                }
            } else {
                self.r_stack.push(v);
                self.expand(&mut newp, depth + 1);
                self.r_stack.pop();
            }
            self.child_p[depth] = newp;
            bits::clear_bit(p, v as usize);
        }

        self.orders[depth] = order;
        self.color_copy[depth] = copy;
        self.color_cand[depth] = cand;
        self.classes[depth] = classes;
    }

    /// Tries to move `v` (now in class index `hi`) into a class at or below
    /// the branch threshold, displacing at most one neighbor sideways.
    /// Classes stay independent sets throughout.
    fn recolor(&self, classes: &mut [Vec<u64>], hi: usize, v: u32, threshold: usize) -> bool {
        let row_v = &self.radj[v as usize * self.words..][..self.words];
        for k1 in 0..threshold - 1 {
            let mut lone: Option<usize> = None;
            let mut crowded = false;
            for (wi, (&c, &r)) in classes[k1].iter().zip(row_v).enumerate() {
                let inter = c & r;
                if inter != 0 {
                    if lone.is_some() || inter & (inter - 1) != 0 {
                        crowded = true;
                        break;
                    }
                    lone = Some(wi * 64 + inter.trailing_zeros() as usize);
                }
            }
            if crowded {
                continue;
            }
            let Some(w) = lone else {
                bits::clear_bit(&mut classes[hi], v as usize);
                bits::set_bit(&mut classes[k1], v as usize);
                return true;
            };
            let row_w = &self.radj[w * self.words..][..self.words];
            for k2 in k1 + 1..threshold {
                let conflict = classes[k2].iter().zip(row_w).any(|(&c, &r)| c & r != 0);
                if !conflict {
                    bits::clear_bit(&mut classes[k1], w);
                    bits::set_bit(&mut classes[k2], w);
                    bits::clear_bit(&mut classes[hi], v as usize);
                    bits::set_bit(&mut classes[k1], v as usize);
                    return true;
                }
            }
        }
        false
    }
}

fn degeneracy_order(g: &Graph) -> Vec<u32> {
    let n = g.n();
    let mut deg: Vec<i64> = (0..n).map(|v| g.degree(v as u32) as i64).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertices remain");
        removed[v] = true;
        order.push(v as u32);
        for w in g.neighbors(v as u32) {
            if !removed[w as usize] {
                deg[w as usize] -= 1;
            }
        }
    }
    order
}

/// Lists every maximal clique, each sorted, the list in lexicographic order.
///
/// Uses pivoting over single-word candidate sets, so the graph is capped at
/// [`MAXIMAL_VERTEX_CAP`] vertices (a sizing error past that). An isolated
/// vertex is a maximal 1-clique and is listed.
pub fn maximal_cliques(g: &Graph) -> Result<Vec<Clique>> {
    let n = g.n();
    if n > MAXIMAL_VERTEX_CAP {
        return Err(Error::Sizing(format!(
            "maximal clique listing caps at {MAXIMAL_VERTEX_CAP} vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut adj = vec![0u64; n];
    for (u, v) in g.edges() {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    let all = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    let mut r = Vec::new();
    bron_kerbosch(&mut r, all, 0, &adj, &mut out);
    out.sort();
    Ok(out)
}

fn bron_kerbosch(r: &mut Vec<u32>, p: u64, x: u64, adj: &[u64], out: &mut Vec<Clique>) {
    if p == 0 && x == 0 {
        let mut v = r.clone();
        v.sort_unstable();
        out.push(Clique::from_sorted(v));
        return;
    }
    let mut pivot = 0u32;
    let mut pivot_score = -1i64;
    let mut scan = p | x;
    while scan != 0 {
        let u = scan.trailing_zeros();
        scan &= scan - 1;
        let score = (p & adj[u as usize]).count_ones() as i64;
        if score > pivot_score {
            pivot_score = score;
            pivot = u;
        }
    }
    let mut cand = p & !adj[pivot as usize];
    let mut p = p;
    let mut x = x;
    while cand != 0 {
        let v = cand.trailing_zeros();
        cand &= cand - 1;
        r.push(v);
        bron_kerbosch(r, p & adj[v as usize], x & adj[v as usize], adj, out);
        r.pop();
        p &= !(1 << v);
        x |= 1 << v;
    }
}
