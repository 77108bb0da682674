//! Fixed-width bit-vector helpers shared by the adjacency and edge-set types
//! and by the clique enumeration inner loops.

pub(crate) const WORD_BITS: usize = 64;

#[inline(always)]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[inline(always)]
pub(crate) fn set_bit(words: &mut [u64], i: usize) {
    words[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
}

#[inline(always)]
pub(crate) fn clear_bit(words: &mut [u64], i: usize) {
    words[i / WORD_BITS] &= !(1u64 << (i % WORD_BITS));
}

#[inline(always)]
pub(crate) fn test_bit(words: &[u64], i: usize) -> bool {
    words[i / WORD_BITS] >> (i % WORD_BITS) & 1 != 0
}

#[inline]
pub(crate) fn count_ones(words: &[u64]) -> u64 {
    words.iter().map(|w| w.count_ones() as u64).sum()
}

/// `dst = a & b`.
#[inline]
pub(crate) fn and_into(dst: &mut [u64], a: &[u64], b: &[u64]) {
    for ((d, &x), &y) in dst.iter_mut().zip(a).zip(b) {
        *d = x & y;
    }
}

/// `dst = a & b & { bits strictly above `above` }`.
#[inline]
pub(crate) fn and_above_into(dst: &mut [u64], a: &[u64], b: &[u64], above: usize) {
    let cut = above / WORD_BITS;
    let shift = above % WORD_BITS;
    // Mask keeps bits above `above` within the cut word; `above` itself drops.
    let keep = if shift == 63 { 0 } else { !0u64 << (shift + 1) };
    for w in 0..dst.len() {
        dst[w] = if w < cut {
            0
        } else if w == cut {
            a[w] & b[w] & keep
        } else {
            a[w] & b[w]
        };
    }
}

/// Iterator over set bit positions, ascending.
pub(crate) struct Ones<'a> {
    words: &'a [u64],
    wi: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    #[inline]
    pub fn new(words: &'a [u64]) -> Self {
        let cur = words.first().copied().unwrap_or(0);
        Ones { words, wi: 0, cur }
    }
}

impl Iterator for Ones<'_> {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        while self.cur == 0 {
            self.wi += 1;
            if self.wi >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.wi];
        }
        let tz = self.cur.trailing_zeros();
        self.cur &= self.cur - 1;
        Some((self.wi * WORD_BITS) as u32 + tz)
    }
}
