//! Verified `(x, pi(x))` checkpoints for seeding long prime counts.
//!
//! File format: one `x<TAB>pi_x` pair per line, ascending in `x`; lines
//! starting with `#` are comments. An entry can seed a count only if the file
//! also holds an entry at most [`VERIFY_WINDOW`] below it (or the entry itself
//! lies within that distance of the origin), so the difference of the two can
//! be recounted exactly.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::segment::{Segmenter, SieveConfig};
use crate::error::{Error, Result};
use crate::unfold;

/// Width of the segment recounted when verifying an entry.
pub const VERIFY_WINDOW: u64 = 1_000_000;

/// li(2), the offset between the principal-value logarithmic integral and the
/// integral from 2.
const LI_AT_2: f64 = 1.045_163_780_117_493;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checkpoint {
    pub x: u64,
    pub pi: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Checkpoints {
    entries: Vec<Checkpoint>,
}

impl Checkpoints {
    pub fn new(mut entries: Vec<Checkpoint>) -> Result<Self> {
        entries.sort_by_key(|c| c.x);
        for pair in entries.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a.x == b.x || b.pi < a.pi || b.pi - a.pi > b.x - a.x {
                return Err(Error::Integrity(format!(
                    "checkpoints ({}, {}) and ({}, {}) are inconsistent",
                    a.x, a.pi, b.x, b.pi
                )));
            }
        }
        for c in &entries {
            check_plausible(*c)?;
        }
        Ok(Checkpoints { entries })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let (Some(x), Some(pi), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected `x<TAB>pi_x`, found {line:?}"),
                });
            };
            let parse = |s: &str| {
                s.trim().parse::<u64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    message: format!("{s:?}: {e}"),
                })
            };
            entries.push(Checkpoint {
                x: parse(x)?,
                pi: parse(pi)?,
            });
        }
        Checkpoints::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Checkpoints::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.entries {
            let _ = writeln!(out, "{}\t{}", c.x, c.pi);
        }
        out
    }

    pub fn entries(&self) -> &[Checkpoint] {
        &self.entries
    }

    /// Streams `pi(x)` from 2 and records an entry pair
    /// `(m*every - VERIFY_WINDOW, m*every)` for every multiple up to `upto`.
    pub fn generate(upto: u64, every: u64, config: SieveConfig) -> Result<Self> {
        if every <= VERIFY_WINDOW {
            return Err(Error::domain(
                "checkpoint",
                format!("stride must exceed {VERIFY_WINDOW}"),
            ));
        }
        let seg = Segmenter::new(upto + 1, config);
        let mut entries = Vec::new();
        let mut pi = 0;
        let mut done = 0;
        let mut m = 1;
        while m * every <= upto {
            let x = m * every;
            for target in [x - VERIFY_WINDOW, x] {
                pi += seg.count(done + 1, target + 1);
                done = target;
                entries.push(Checkpoint { x: target, pi });
            }
            m += 1;
        }
        Checkpoints::new(entries)
    }

    /// Largest verifiable entry with `x < limit`.
    ///
    /// The chosen entry is recounted against its partner below it, and one
    /// further randomly chosen verifiable entry is recounted as a spot check.
    /// Entries without a partner are never used as seeds.
    pub fn seed_below(
        &self,
        limit: u64,
        rng_seed: u64,
        config: SieveConfig,
    ) -> Result<Option<Checkpoint>> {
        let Some(idx) = (0..self.entries.len())
            .rev()
            .find(|&i| self.entries[i].x < limit && self.partner(i).is_some())
        else {
            return Ok(None);
        };
        self.recount(idx, config)?;

        let others: Vec<usize> = (0..self.entries.len())
            .filter(|&i| i != idx && self.partner(i).is_some())
            .collect();
        if !others.is_empty() {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            self.recount(others[rng.random_range(0..others.len())], config)?;
        }
        Ok(Some(self.entries[idx]))
    }

    fn partner(&self, idx: usize) -> Option<Checkpoint> {
        let c = self.entries[idx];
        match idx.checked_sub(1).map(|p| self.entries[p]) {
            Some(prev) if c.x - prev.x <= VERIFY_WINDOW => Some(prev),
            _ if c.x <= VERIFY_WINDOW => Some(Checkpoint { x: 1, pi: 0 }),
            _ => None,
        }
    }

    fn recount(&self, idx: usize, config: SieveConfig) -> Result<()> {
        let b = self.entries[idx];
        let a = self
            .partner(idx)
            .expect("only verifiable entries are recounted");
        let seg = Segmenter::new(b.x + 1, config);
        let local = seg.count(a.x + 1, b.x + 1);
        if local != b.pi - a.pi {
            return Err(Error::Integrity(format!(
                "checkpoint pi({}) = {} contradicts local recount: {} primes in ({}, {}] but file implies {}",
                b.x,
                b.pi,
                local,
                a.x,
                b.x,
                b.pi - a.pi
            )));
        }
        Ok(())
    }
}

/// Rejects entries violating the Riemann-hypothesis-conditional bound
/// `|pi(x) - li(x)| < sqrt(x) ln x / (8 pi)` (valid for x >= 2657), which
/// catches gross corruption without any counting.
fn check_plausible(c: Checkpoint) -> Result<()> {
    if c.pi > c.x {
        return Err(Error::Integrity(format!(
            "pi({}) = {} exceeds x",
            c.x, c.pi
        )));
    }
    if c.x < 2657 {
        return Ok(());
    }
    let x = c.x as f64;
    let li = unfold::li(x)? + LI_AT_2;
    let bound = x.sqrt() * x.ln() / (8.0 * std::f64::consts::PI);
    if (c.pi as f64 - li).abs() >= bound {
        return Err(Error::Integrity(format!(
            "pi({}) = {} is implausible: li(x) = {li:.1}, allowed deviation {bound:.1}",
            c.x, c.pi
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SieveConfig {
        SieveConfig::with_segment_len(1 << 16)
    }

    #[test]
    fn generate_and_seed() {
        let cps = Checkpoints::generate(5_000_000, 2_000_000, cfg()).unwrap();
        assert_eq!(
            cps.entries(),
            &[
                Checkpoint {
                    x: 1_000_000,
                    pi: 78_498
                },
                Checkpoint {
                    x: 2_000_000,
                    pi: 148_933
                },
                Checkpoint {
                    x: 3_000_000,
                    pi: 216_816
                },
                Checkpoint {
                    x: 4_000_000,
                    pi: 283_146
                },
            ]
        );
        let seed = cps.seed_below(3_500_000, 7, cfg()).unwrap();
        assert_eq!(
            seed,
            Some(Checkpoint {
                x: 3_000_000,
                pi: 216_816
            })
        );
        assert_eq!(cps.seed_below(500, 7, cfg()).unwrap(), None);
    }

    #[test]
    fn off_by_one_is_caught() {
        let text = "1000000\t78498\n2000000\t148934\n";
        let cps = Checkpoints::parse(text).unwrap();
        let err = cps.seed_below(3_000_000, 1, cfg()).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)), "{err}");
    }

    #[test]
    fn gross_corruption_rejected_on_parse() {
        let err = Checkpoints::parse("1000000000\t50000000\n").unwrap_err();
        assert!(matches!(err, Error::Integrity(_)));
    }

    #[test]
    fn unpaired_entries_are_not_seeds() {
        let cps = Checkpoints::parse("2000000\t148933\n").unwrap();
        assert_eq!(cps.seed_below(3_000_000, 0, cfg()).unwrap(), None);
        let near_origin = Checkpoints::parse("1000000\t78498\n").unwrap();
        assert_eq!(
            near_origin.seed_below(3_000_000, 0, cfg()).unwrap(),
            Some(Checkpoint {
                x: 1_000_000,
                pi: 78_498
            })
        );
        let wrong = Checkpoints::parse("1000000\t78497\n").unwrap();
        assert!(matches!(
            wrong.seed_below(3_000_000, 0, cfg()),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = Checkpoints::parse("# header\n100\t25\n200 46\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn text_round_trip() {
        let cps = Checkpoints::parse("100\t25\n1000\t168\n").unwrap();
        assert_eq!(Checkpoints::parse(&cps.to_text()).unwrap(), cps);
    }
}
