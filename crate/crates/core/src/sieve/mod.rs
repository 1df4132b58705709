//! Prime generation with exact absolute indexing.

mod checkpoint;
mod io;
pub mod primality;
mod segment;

pub use checkpoint::{Checkpoint, Checkpoints, VERIFY_WINDOW};
pub use segment::{isqrt, SieveConfig, DEFAULT_SEGMENT_LEN};

use segment::Segmenter;

use crate::error::{Error, Result};
use crate::unfold;

/// A run of primes `p_k, p_{k+1}, ...` (or a thinned subsequence of one) with
/// the 1-based index of its first element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSequence {
    start_index: u64,
    values: Vec<u64>,
}

impl PrimeSequence {
    /// Checks the structural invariants (not primality, which is the
    /// generator's contract).
    pub fn new(start_index: u64, values: Vec<u64>) -> Result<Self> {
        if start_index == 0 {
            return Err(Error::domain("prime sequence", "start_index is 1-based"));
        }
        if values.is_empty() {
            return Err(Error::EmptyDomain {
                stage: "prime sequence",
                message: "no values".into(),
            });
        }
        if values[0] < 2 {
            return Err(Error::domain(
                "prime sequence",
                format!("{} is below 2", values[0]),
            ));
        }
        if let Some(w) = values.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::domain(
                "prime sequence",
                format!("values not strictly increasing at {} -> {}", w[0], w[1]),
            ));
        }
        Ok(PrimeSequence {
            start_index,
            values,
        })
    }

    pub fn start_index(&self) -> u64 {
        self.start_index
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first(&self) -> u64 {
        self.values[0]
    }

    pub fn last(&self) -> u64 {
        *self.values.last().expect("sequences are nonempty")
    }

    pub fn into_values(self) -> Vec<u64> {
        self.values
    }

    /// Contiguous subrange by position, keeping absolute indexing.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        let start_index = self.start_index + range.start as u64;
        let values = self
            .values
            .get(range.clone())
            .ok_or_else(|| {
                Error::domain("prime sequence", format!("range {range:?} out of bounds"))
            })?
            .to_vec();
        PrimeSequence::new(start_index, values)
    }

    /// Keeps positions 1, 3, 5, ... (1-based).
    pub fn alternate(&self) -> PrimeSequence {
        PrimeSequence {
            start_index: self.start_index,
            values: self.values.iter().copied().step_by(2).collect(),
        }
    }
}

/// Front end over the segmented sieve.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sieve {
    config: SieveConfig,
}

impl Sieve {
    pub fn new(config: SieveConfig) -> Self {
        Sieve { config }
    }

    pub fn config(&self) -> SieveConfig {
        self.config
    }

    pub fn primes_upto(&self, limit: u64) -> Result<PrimeSequence> {
        if limit < 2 {
            return Err(Error::EmptyDomain {
                stage: "primes_upto",
                message: format!("no primes are <= {limit}"),
            });
        }
        let seg = Segmenter::new(limit + 1, self.config);
        PrimeSequence::new(1, seg.primes(0, limit + 1))
    }

    /// Exact pi(x) by streaming segment counts.
    pub fn prime_count(&self, x: u64) -> u64 {
        if x < 2 {
            return 0;
        }
        Segmenter::new(x + 1, self.config).count(0, x + 1)
    }

    pub fn first_n_primes(&self, n: u64) -> Result<PrimeSequence> {
        if n == 0 {
            return Err(Error::domain("first_n_primes", "n must be at least 1"));
        }
        let mut bound = nth_prime_upper_estimate(n)?;
        loop {
            let seg = Segmenter::new(bound + 1, self.config);
            let mut out = Vec::with_capacity(n as usize);
            let done = seg.scan(0, |chunk| {
                let take = (n as usize - out.len()).min(chunk.len());
                out.extend_from_slice(&chunk[..take]);
                out.len() < n as usize
            });
            if done {
                return PrimeSequence::new(1, out);
            }
            bound = bound.saturating_mul(2);
        }
    }

    /// Primes `p_{k+1}, ..., p_{k+count}`.
    ///
    /// The exact index of the starting point is established by counting from 2,
    /// or from the highest verified checkpoint below it when one is supplied.
    pub fn primes_after_index(
        &self,
        k: u64,
        count: u64,
        checkpoints: Option<&Checkpoints>,
    ) -> Result<PrimeSequence> {
        if count == 0 {
            return Err(Error::domain(
                "primes_after_index",
                "count must be at least 1",
            ));
        }
        if k == 0 {
            return self.first_n_primes(count);
        }

        let estimate = unfold::riemann_r_inverse(k as f64)?;
        let mut lo = ((0.97 * estimate) as u64).max(2);
        let seed = match checkpoints {
            Some(cps) => cps.seed_below(lo, k, self.config)?,
            None => None,
        };
        let (base_x, base_pi) = seed.map_or((1, 0), |c| (c.x, c.pi));
        // primes strictly below lo
        let mut below = base_pi + Segmenter::new(lo, self.config).count(base_x + 1, lo);
        while below > k {
            let lower = ((lo as f64 * 0.9) as u64).max(base_x + 1);
            if lower >= lo {
                return Err(Error::Integrity(format!(
                    "checkpoint pi({base_x}) = {base_pi} already exceeds k = {k}"
                )));
            }
            below -= Segmenter::new(lo, self.config).count(lower, lo);
            lo = lower;
        }

        let mut skip = k - below;
        let mut bound =
            ((1.03 * unfold::riemann_r_inverse((k + count) as f64)?) as u64).max(lo + 1024);
        let mut out = Vec::with_capacity(count as usize);
        let mut from = lo;
        loop {
            let seg = Segmenter::new(bound, self.config);
            let done = seg.scan(from, |chunk| {
                let mut chunk = chunk;
                if skip > 0 {
                    let s = (skip as usize).min(chunk.len());
                    skip -= s as u64;
                    chunk = &chunk[s..];
                }
                let take = (count as usize - out.len()).min(chunk.len());
                out.extend_from_slice(&chunk[..take]);
                out.len() < count as usize
            });
            if done {
                return PrimeSequence::new(k + 1, out);
            }
            from = bound;
            bound = bound.saturating_mul(2);
        }
    }
}

/// Upper estimate for p_n: the inverse of the Riemann R function inflated by 3%.
pub fn nth_prime_upper_estimate(n: u64) -> Result<u64> {
    if n < 6 {
        return Ok(13);
    }
    Ok((1.03 * unfold::riemann_r_inverse(n as f64)?).ceil() as u64)
}

pub fn primes_upto(limit: u64) -> Result<PrimeSequence> {
    Sieve::default().primes_upto(limit)
}

pub fn first_n_primes(n: u64) -> Result<PrimeSequence> {
    Sieve::default().first_n_primes(n)
}

pub fn prime_count(x: u64) -> u64 {
    Sieve::default().prime_count(x)
}

pub fn primes_after_index(k: u64, count: u64) -> Result<PrimeSequence> {
    Sieve::default().primes_after_index(k, count, None)
}
