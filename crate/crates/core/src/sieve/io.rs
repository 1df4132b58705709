//! Text and binary encodings of [`PrimeSequence`].
//!
//! Text: optional `# start_index=<k>` header, then one decimal value per line.
//! Binary: little-endian u64 start index, u64 count, then the values.

use std::fmt::Write as _;

use super::PrimeSequence;
use crate::error::{Error, Result};

impl PrimeSequence {
    pub fn to_text(&self) -> String {
        let mut out = format!("# start_index={}\n", self.start_index());
        for v in self.values() {
            let _ = writeln!(out, "{v}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut start_index = 1;
        let mut values = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(k) = comment.trim().strip_prefix("start_index=") {
                    start_index = k.trim().parse().map_err(|e| Error::Parse {
                        line: i + 1,
                        message: format!("bad start_index {k:?}: {e}"),
                    })?;
                }
                continue;
            }
            let v = line.parse::<u64>().map_err(|e| Error::Parse {
                line: i + 1,
                message: format!("expected a prime, found {line:?}: {e}"),
            })?;
            values.push(v);
        }
        PrimeSequence::new(start_index, values)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 8 * self.len());
        out.extend_from_slice(&self.start_index().to_le_bytes());
        out.extend_from_slice(&(self.len() as u64).to_le_bytes());
        for v in self.values() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let word = |i: usize| -> Result<u64> {
            bytes
                .get(8 * i..8 * i + 8)
                .map(|b| u64::from_le_bytes(b.try_into().expect("8 bytes")))
                .ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("binary sequence truncated at word {i}"),
                })
        };
        let start_index = word(0)?;
        let count = word(1)?;
        if bytes.len() as u64 != 16 + 8 * count {
            return Err(Error::Parse {
                line: 0,
                message: format!(
                    "binary sequence declares {count} values but holds {} bytes",
                    bytes.len()
                ),
            });
        }
        let values = (0..count as usize)
            .map(|i| word(i + 2))
            .collect::<Result<Vec<_>>>()?;
        PrimeSequence::new(start_index, values)
    }
}
