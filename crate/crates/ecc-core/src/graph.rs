//! Simple undirected graphs on dense 0-based vertices, stored as bit-matrix
//! adjacency, plus subsets of their edges addressed by a canonical edge index.

use std::io::{BufRead, Write};

use crate::bits::{self, Ones};
use crate::error::{Error, Result};
use crate::rng::{self, stream, KeyChain, Seed};

/// Hard ceiling on vertex count: the adjacency matrix is n^2 bits, so this
/// keeps a single graph under ~512 MB.
pub const MAX_VERTICES: usize = 1 << 16;

/// Canonical index of edge `(u, v)` with `u < v`: pairs ordered
/// lexicographically, so `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
#[inline(always)]
pub(crate) fn edge_index(n: usize, u: u32, v: u32) -> usize {
    let u = u as usize;
    let v = v as usize;
    u * n - u * (u + 1) / 2 + v - u - 1
}

/// Offset of the index block for edges whose lower endpoint is `u`, plus a
/// correction so `pair_base(n, u) + v` is the canonical index of `(u, v)`.
#[inline(always)]
pub(crate) fn pair_base(n: usize, u: u32) -> usize {
    let u = u as usize;
    // u*n - u(u+1)/2 - u - 1, kept in wrapping form because v > u restores it
    // to a valid index before use.
    (u * n - u * (u + 1) / 2).wrapping_sub(u + 1)
}

#[inline(always)]
pub(crate) fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Undirected graph without self-loops. Adjacency is symmetric by
/// construction; the edge count is cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    m: usize,
}

impl Graph {
    fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::Sizing(format!(
                "graph on {n} vertices exceeds the {MAX_VERTICES}-vertex ceiling"
            )));
        }
        let words = bits::words_for(n);
        Ok(Graph { n, words, adj: vec![0; n * words], m: 0 })
    }

    /// Build from an explicit edge list. Every pair must satisfy
    /// `u < v < n` and appear at most once.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: u32, v: u32) -> Result<()> {
        if u >= v || (v as usize) >= self.n {
            return Err(Error::Domain(format!(
                "edge ({u}, {v}) is not an ordered pair inside 0..{}",
                self.n
            )));
        }
        if self.has_edge(u, v) {
            return Err(Error::Domain(format!("duplicate edge ({u}, {v})")));
        }
        self.set_pair(u, v);
        self.m += 1;
        Ok(())
    }

    #[inline]
    fn set_pair(&mut self, u: u32, v: u32) {
        bits::set_bit(&mut self.adj[u as usize * self.words..], v as usize);
        bits::set_bit(&mut self.adj[v as usize * self.words..], u as usize);
    }

    /// Sample G(n, p): each of the C(n, 2) vertex pairs becomes an edge
    /// independently with probability `p`. The decision for a pair depends
    /// only on `(seed, u, v)`, so regenerating any part of the graph, in any
    /// order, gives identical bits.
    pub fn gnp(n: usize, p: f64, seed: Seed) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("edge probability {p} outside [0, 1]")));
        }
        let mut g = Self::empty(n)?;
        let threshold = rng::prob_threshold(p);
        let base = KeyChain::new(seed).absorb(stream::PAIR);
        for u in 0..n as u32 {
            let row = base.absorb(u as u64);
            for v in u + 1..n as u32 {
                if rng::hits(row.absorb(v as u64).value(), threshold) {
                    g.set_pair(u, v);
                    g.m += 1;
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        bits::test_bit(self.row(u), v as usize)
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        bits::count_ones(self.row(v)) as usize
    }

    /// Adjacency row of `v` as bit words.
    #[inline(always)]
    pub(crate) fn row(&self, v: u32) -> &[u64] {
        let s = v as usize * self.words;
        &self.adj[s..s + self.words]
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        Ones::new(self.row(v))
    }

    /// All edges as `(u, v)` with `u < v`, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n as u32).flat_map(move |u| {
            Ones::new(self.row(u)).filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// Serialize as a header line `n m` followed by one `u v` line per edge
    /// in canonical order.
    pub fn save(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "{} {}", self.n, self.m)?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    /// Parse the format written by [`Graph::save`]. Errors carry the 1-based
    /// line number of the offending line.
    pub fn load(r: &mut impl BufRead) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (n, m) = match lines.next() {
            Some((_, line)) => {
                let line = line?;
                let mut it = line.split_ascii_whitespace();
                let n: usize = parse_field(1, it.next(), "vertex count")?;
                let m: usize = parse_field(1, it.next(), "edge count")?;
                if it.next().is_some() {
                    return Err(Error::parse(1, "expected exactly two fields `n m`"));
                }
                (n, m)
            }
            None => return Err(Error::parse(1, "empty input, expected header `n m`")),
        };
        let mut g = Self::empty(n)?;
        let mut read = 0usize;
        for (idx, line) in &mut lines {
            let lineno = idx + 1;
            let line = line?;
            if read == m {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(Error::parse(lineno, format!("unexpected content after {m} edges")));
            }
            let mut it = line.split_ascii_whitespace();
            let u: u32 = parse_field(lineno, it.next(), "edge endpoint")?;
            let v: u32 = parse_field(lineno, it.next(), "edge endpoint")?;
            if it.next().is_some() {
                return Err(Error::parse(lineno, "expected exactly two fields `u v`"));
            }
            g.add_edge(u, v)
                .map_err(|e| Error::parse(lineno, e.to_string()))?;
            read += 1;
        }
        if read != m {
            return Err(Error::parse(
                read + 2,
                format!("header promised {m} edges but file has {read}"),
            ));
        }
        Ok(g)
    }
}

fn parse_field<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

/// A subset of a graph's edges, stored as one bit per canonical edge index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSet {
    n: usize,
    bits: Vec<u64>,
    len: usize,
}

impl EdgeSet {
    /// Empty set over the edge universe of an `n`-vertex graph.
    pub fn new(n: usize) -> Self {
        EdgeSet { n, bits: vec![0; bits::words_for(pair_count(n))], len: 0 }
    }

    /// The full edge set of `g`.
    pub fn full(g: &Graph) -> Self {
        let mut s = Self::new(g.n());
        for (u, v) in g.edges() {
            s.insert(u, v);
        }
        s
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, u: u32, v: u32) -> bool {
        bits::test_bit(&self.bits, edge_index(self.n, u, v))
    }

    /// Insert `(u, v)`, returning true if it was absent. Functions that take
    /// an active edge set expect it to be a subset of the graph's edges.
    pub fn insert(&mut self, u: u32, v: u32) -> bool {
        let i = edge_index(self.n, u, v);
        if bits::test_bit(&self.bits, i) {
            return false;
        }
        bits::set_bit(&mut self.bits, i);
        self.len += 1;
        true
    }

    /// Remove `(u, v)`, returning true if it was present.
    pub fn remove(&mut self, u: u32, v: u32) -> bool {
        let i = edge_index(self.n, u, v);
        if !bits::test_bit(&self.bits, i) {
            return false;
        }
        bits::clear_bit(&mut self.bits, i);
        self.len -= 1;
        true
    }

    /// Member edges as `(u, v)` pairs in canonical order.
    pub fn iter(&self) -> EdgeIter<'_> {
        EdgeIter { ones: Ones::new(&self.bits), n: self.n, u: 0, block_end: self.n.saturating_sub(1) }
    }
}

pub struct EdgeIter<'a> {
    ones: Ones<'a>,
    n: usize,
    u: usize,
    block_end: usize,
}

impl Iterator for EdgeIter<'_> {
    type Item = (u32, u32);

    #[inline]
    fn next(&mut self) -> Option<(u32, u32)> {
        let idx = self.ones.next()? as usize;
        while idx >= self.block_end {
            self.u += 1;
            self.block_end += self.n - 1 - self.u;
        }
        let base = self.u * self.n - self.u * (self.u + 1) / 2;
        let v = idx - base + self.u + 1;
        Some((self.u as u32, v as u32))
    }
}
