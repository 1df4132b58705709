//! Odd-only segmented sieve of Eratosthenes.
//!
//! Bit `i` of a segment stands for the odd number `2 * (half0 + i) + 1`.
//! Segments are independent; callers reduce them in segment order so results
//! do not depend on how many workers ran.

use rayon::prelude::*;

pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 20;

/// Segments handed to the worker pool per batch.
const BATCH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Integers covered per segment (must be a multiple of 128).
    pub segment_len: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_len: DEFAULT_SEGMENT_LEN,
        }
    }
}

impl SieveConfig {
    pub fn with_segment_len(segment_len: u64) -> Self {
        assert!(
            segment_len >= 128 && segment_len.is_multiple_of(128),
            "segment length must be a positive multiple of 128, got {segment_len}"
        );
        SieveConfig { segment_len }
    }

    fn half_len(&self) -> u64 {
        self.segment_len / 2
    }
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Odd primes up to `limit` by a plain (unsegmented) odd-only sieve.
pub fn small_odd_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let half = ((limit - 1) / 2) as usize; // odd numbers 3..=limit map to 1..=half
    let mut composite = vec![false; half + 1];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j <= half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    (1..=half)
        .filter(|&i| !composite[i])
        .map(|i| 2 * i as u64 + 1)
        .collect()
}

/// Sieves odd candidates with half-indices in `[half0, half1)`.
fn sieve_bits(half0: u64, half1: u64, base: &[u64]) -> Vec<u64> {
    let len = (half1 - half0) as usize;
    let words = len.div_ceil(64);
    let mut bits = vec![!0u64; words];
    if !len.is_multiple_of(64) {
        bits[words - 1] = (1u64 << (len % 64)) - 1;
    }
    if half0 == 0 {
        // the number 1
        bits[0] &= !1;
    }
    let hi_value = 2 * half1 + 1; // exclusive bound on represented values
    for &p in base {
        let sq = p * p;
        if sq >= hi_value {
            break;
        }
        let first_value = 2 * half0 + 1;
        let start = if sq >= first_value {
            sq
        } else {
            let m = first_value.div_ceil(p) * p;
            if m % 2 == 0 {
                m + p
            } else {
                m
            }
        };
        let mut j = ((start - 1) / 2 - half0) as usize;
        let step = p as usize;
        while j < len {
            bits[j >> 6] &= !(1u64 << (j & 63));
            j += step;
        }
    }
    bits
}

/// A reusable sieving context covering values below `bound`.
pub struct Segmenter {
    config: SieveConfig,
    bound: u64,
    base: Vec<u64>,
}

impl Segmenter {
    /// Prepares base primes for sieving any value `< bound`.
    pub fn new(bound: u64, config: SieveConfig) -> Self {
        Segmenter {
            config,
            bound,
            base: small_odd_primes(isqrt(bound) + 1),
        }
    }

    /// Half-index segment boundaries covering odd values in `[lo, hi)`.
    fn segments(&self, lo: u64, hi: u64) -> Vec<(u64, u64)> {
        let first = lo / 2; // half-index of the first odd value >= lo
        let last = hi / 2; // exclusive: odd values < hi
        let seg = self.config.half_len();
        let mut out = Vec::new();
        // Align to global segment boundaries so outputs are independent of lo.
        let mut s = first;
        while s < last {
            let end = ((s / seg + 1) * seg).min(last);
            out.push((s, end));
            s = end;
        }
        out
    }

    /// Applies `map` to every segment of `[lo, hi)` in parallel and returns the
    /// per-segment results in ascending segment order.
    fn map_segments<T, F>(&self, lo: u64, hi: u64, map: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64, Vec<u64>) -> T + Sync,
    {
        assert!(
            hi <= self.bound,
            "sieve range {hi} exceeds prepared bound {}",
            self.bound
        );
        let segs = self.segments(lo, hi);
        let mut out = Vec::with_capacity(segs.len());
        for batch in segs.chunks(BATCH) {
            let part: Vec<T> = batch
                .par_iter()
                .map(|&(h0, h1)| map(h0, sieve_bits(h0, h1, &self.base)))
                .collect();
            out.extend(part);
        }
        out
    }

    /// Number of primes `p` with `lo <= p < hi`.
    pub fn count(&self, lo: u64, hi: u64) -> u64 {
        if hi <= lo {
            return 0;
        }
        let two = u64::from(lo <= 2 && hi > 2);
        let counts = self.map_segments(lo, hi, |_, bits| {
            bits.iter().map(|w| u64::from(w.count_ones())).sum::<u64>()
        });
        two + counts.into_iter().sum::<u64>()
    }

    /// All primes `p` with `lo <= p < hi`, ascending.
    pub fn primes(&self, lo: u64, hi: u64) -> Vec<u64> {
        let mut out = Vec::new();
        if lo <= 2 && hi > 2 {
            out.push(2);
        }
        for chunk in self.map_segments(lo, hi, extract) {
            out.extend(chunk);
        }
        out
    }

    /// Streams primes in `[lo, bound)` segment by segment until `visit`
    /// returns false. Returns true if the visitor stopped the scan.
    pub fn scan<F: FnMut(&[u64]) -> bool>(&self, lo: u64, mut visit: F) -> bool {
        if lo <= 2 && self.bound > 2 && !visit(&[2]) {
            return true;
        }
        let span = self.config.segment_len * BATCH as u64;
        let mut start = lo;
        while start < self.bound {
            let end = start.saturating_add(span).min(self.bound);
            for chunk in self.map_segments(start, end, extract) {
                if !visit(&chunk) {
                    return true;
                }
            }
            start = end;
        }
        false
    }
}

fn extract(half0: u64, bits: Vec<u64>) -> Vec<u64> {
    let mut out = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        let mut word = word;
        while word != 0 {
            let tz = word.trailing_zeros() as u64;
            let half = half0 + (w as u64) * 64 + tz;
            out.push(2 * half + 1);
            word &= word - 1;
        }
    }
    out
}
