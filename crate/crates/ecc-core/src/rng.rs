//! Keyed, counter-based randomness.
//!
//! Every random decision in this crate is a pure function of a seed and the
//! identity of the object being decided (a vertex pair, a clique's vertex
//! list, an edge index, a sample counter). Nothing depends on evaluation
//! order, so results are identical no matter how work is chunked across
//! threads, and a decision can be re-derived lazily anywhere.

/// Seed for all randomized operations. A plain wrapper so call sites can't
/// confuse seeds with other integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const INIT_SALT: u64 = 0x243F_6A88_85A3_08D3;

/// Domain-separation tags. Distinct streams guarantee that, say, the decision
/// to keep edge (u, v) during generation can never correlate with the
/// decision to patch the same edge during a cover run.
pub(crate) mod stream {
    pub const PAIR: u64 = 1;
    pub const SELECT: u64 = 2;
    pub const PATCH: u64 = 3;
    pub const SUBSET: u64 = 4;
    pub const GUARD: u64 = 5;
    pub const EDGE_SAMPLE: u64 = 6;
    pub const REP: u64 = 7;
    pub const TRIANGLE_PROBE: u64 = 8;
    pub const CLIQUE_SAMPLE: u64 = 9;
}

/// SplitMix64 finalizer. Bijective on u64 with strong avalanche.
#[inline(always)]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// An absorbed key prefix. `Copy`, so enumeration code can hold one chain per
/// recursion depth and extend it per candidate without rehashing the prefix.
#[derive(Clone, Copy, Debug)]
pub(crate) struct KeyChain(u64);

impl KeyChain {
    #[inline]
    pub fn new(seed: Seed) -> Self {
        KeyChain(mix64(seed.0 ^ INIT_SALT))
    }

    #[inline(always)]
    #[must_use]
    pub fn absorb(self, w: u64) -> Self {
        KeyChain(mix64(self.0 ^ w.wrapping_mul(GOLDEN)))
    }

    /// Fully mixed 64-bit value for this key.
    #[inline(always)]
    pub fn value(self) -> u64 {
        self.0
    }

}

/// Threshold for `value < threshold` to occur with probability `p`
/// (to within one part in 2^53, the resolution of `p` itself).
#[inline]
pub(crate) fn prob_threshold(p: f64) -> u128 {
    if p <= 0.0 {
        0
    } else if p >= 1.0 {
        1u128 << 64
    } else {
        (p * (1u128 << 64) as f64) as u128
    }
}

/// Threshold for `value < threshold` to occur with probability exactly
/// `1/denom`, rounded to the nearest representable 64-bit cutoff.
#[inline]
pub(crate) fn inverse_threshold(denom: u64) -> u128 {
    debug_assert!(denom > 0);
    ((1u128 << 64) + (denom as u128) / 2) / denom as u128
}

#[inline(always)]
pub(crate) fn hits(value: u64, threshold: u128) -> bool {
    (value as u128) < threshold
}

/// Sequential generator for the few places that need a stream of draws
/// (shuffles, rejection sampling). Seeded from a key chain, so the stream's
/// identity is still purely key-derived.
#[derive(Clone, Debug)]
pub(crate) struct KeyedRng {
    counter: u64,
    base: u64,
}

impl KeyedRng {
    pub fn from_chain(chain: KeyChain) -> Self {
        KeyedRng { counter: 0, base: chain.value() }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.base.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform draw in `[0, n)`; `n` must be nonzero.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }
}
