//! Unfolding prime sequences with smooth approximations of the prime staircase.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::quad::{self, Tolerance};
use crate::numfmt::sig17;
use crate::sieve::PrimeSequence;

const LI_REL_TOL: f64 = 1e-12;

/// Primes unfolded per parallel work unit. Fixed so results do not depend on
/// the number of workers.
const CHUNK: usize = 8192;

/// Logarithmic integral taken from 2: `Li(x) = \int_2^x dt / ln t`.
///
/// Negative for `1 < x < 2`.
pub fn li(x: f64) -> Result<f64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::domain(
            "li",
            format!("x = {x} must be a finite value above 1"),
        ));
    }
    if x == 2.0 {
        return Ok(0.0);
    }
    // t = e^u turns the integrand into e^u / u, smooth on the scale of ln x.
    quad::integrate(
        |u: f64| u.exp() / u,
        std::f64::consts::LN_2,
        x.ln(),
        Tolerance::relative(LI_REL_TOL),
    )
}

/// Möbius function.
pub fn moebius(m: u64) -> Result<i8> {
    if m == 0 {
        return Err(Error::domain("moebius", "mu(0) is undefined"));
    }
    let mut n = m;
    let mut sign = 1i8;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return Ok(0);
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}

fn term_count(x: f64) -> u32 {
    x.log2().floor() as u32
}

/// Riemann's R function `sum_{m=1}^{floor(log2 x)} mu(m)/m Li(x^(1/m))`.
pub fn riemann_r(x: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(Error::domain("riemann_r", format!("x = {x} is below 2")));
    }
    riemann_r_truncated(x, term_count(x))
}

/// R(x) summed through `m = max_m`. Terms with `x^(1/m) <= 1` are skipped;
/// terms with `1 < x^(1/m) < 2` enter with their negative `Li` value.
pub fn riemann_r_truncated(x: f64, max_m: u32) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(Error::domain("riemann_r", format!("x = {x} is below 2")));
    }
    let mut sum = 0.0;
    for m in 1..=max_m {
        let mu = moebius(m as u64)?;
        if mu == 0 {
            continue;
        }
        let y = x.powf(1.0 / m as f64);
        if y <= 1.0 {
            continue;
        }
        sum += f64::from(mu) / m as f64 * li(y)?;
    }
    Ok(sum)
}

/// Solves `R(x) = n` by Newton iteration using `R'(x) ~ 1 / ln x`.
pub fn riemann_r_inverse(n: f64) -> Result<f64> {
    if !(n >= 1.0) {
        return Err(Error::domain(
            "riemann_r_inverse",
            format!("n = {n} is below 1"),
        ));
    }
    let mut x = if n < 6.0 {
        n + 2.0
    } else {
        n * (n.ln() + n.ln().ln())
    };
    for _ in 0..50 {
        let step = (riemann_r(x)? - n) * x.ln();
        let next = (x - step).max(2.0);
        if (next - x).abs() <= 1e-9 * x {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Incrementally evaluates `Li` along an ascending sequence of arguments.
#[derive(Debug, Clone, Copy)]
struct LiSweep {
    at: f64,
    value: f64,
}

impl LiSweep {
    fn start(x: f64) -> Result<Self> {
        Ok(LiSweep {
            at: x,
            value: li(x)?,
        })
    }

    fn advance(&mut self, x: f64) -> Result<f64> {
        debug_assert!(x >= self.at);
        if x != self.at {
            if x - self.at <= 0.01 * self.at {
                // Short panel: the 5-point rule is exact to rounding here.
                self.value += quad::gauss_legendre5(&|t: f64| 1.0 / t.ln(), self.at, x);
            } else {
                self.value = li(x)?;
            }
            self.at = x;
        }
        Ok(self.value)
    }
}

/// Evaluates R along ascending arguments, one memoized sweep per term.
struct RiemannRSweep {
    terms: Vec<(u32, f64, Option<LiSweep>)>,
}

impl RiemannRSweep {
    fn new() -> Result<Self> {
        let mut terms = Vec::new();
        for m in 1..64u32 {
            let mu = moebius(m as u64)?;
            if mu != 0 {
                terms.push((m, f64::from(mu) / m as f64, None));
            }
        }
        Ok(RiemannRSweep { terms })
    }

    fn eval(&mut self, x: f64) -> Result<f64> {
        let max_m = term_count(x);
        let mut sum = 0.0;
        for (m, coef, sweep) in &mut self.terms {
            if *m > max_m {
                break;
            }
            let y = x.powf(1.0 / *m as f64);
            let v = match sweep {
                Some(s) => s.advance(y)?,
                None => {
                    let s = LiSweep::start(y)?;
                    *sweep = Some(s);
                    s.value
                }
            };
            sum += *coef * v;
        }
        Ok(sum)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnfoldMethod {
    XOverLogX,
    Li,
    RiemannR,
    /// Random-matrix spectra unfolded by the integrated semicircle.
    Semicircle,
    /// Values supplied already unfolded.
    External,
}

impl UnfoldMethod {
    pub fn name(self) -> &'static str {
        match self {
            UnfoldMethod::XOverLogX => "X_OVER_LOG_X",
            UnfoldMethod::Li => "LI",
            UnfoldMethod::RiemannR => "RIEMANN_R",
            UnfoldMethod::Semicircle => "SEMICIRCLE",
            UnfoldMethod::External => "EXTERNAL",
        }
    }
}

impl fmt::Display for UnfoldMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UnfoldMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "x_over_log_x" | "xlogx" | "x_log_x" => Ok(UnfoldMethod::XOverLogX),
            "li" | "lilog" | "log_integral" => Ok(UnfoldMethod::Li),
            "r" | "riemann_r" | "riemann" => Ok(UnfoldMethod::RiemannR),
            "semicircle" => Ok(UnfoldMethod::Semicircle),
            "external" => Ok(UnfoldMethod::External),
            _ => Err(Error::domain(
                "unfold",
                format!("unknown unfolding method {s:?}"),
            )),
        }
    }
}

/// A strictly increasing sequence with (approximately) unit mean density.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedSequence {
    values: Vec<f64>,
    method: UnfoldMethod,
    rescaled: bool,
    source_start_index: u64,
}

impl UnfoldedSequence {
    pub fn new(values: Vec<f64>, method: UnfoldMethod, source_start_index: u64) -> Result<Self> {
        Self::build(values, method, false, source_start_index)
    }

    /// Wraps values that are unfolded already (synthetic spectra, files).
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::build(values, UnfoldMethod::External, false, 1)
    }

    fn build(
        values: Vec<f64>,
        method: UnfoldMethod,
        rescaled: bool,
        source_start_index: u64,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDomain {
                stage: "unfold",
                message: "no values".into(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(
                "unfold",
                format!("value #{} is not finite", i + 1),
            ));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::domain(
                "unfold",
                format!(
                    "values not strictly increasing at #{}: {} -> {}",
                    i + 1,
                    values[i],
                    values[i + 1]
                ),
            ));
        }
        Ok(UnfoldedSequence {
            values,
            method,
            rescaled,
            source_start_index,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn method(&self) -> UnfoldMethod {
        self.method
    }

    pub fn rescaled(&self) -> bool {
        self.rescaled
    }

    pub fn source_start_index(&self) -> u64 {
        self.source_start_index
    }

    pub fn span(&self) -> f64 {
        self.values[self.values.len() - 1] - self.values[0]
    }

    pub fn mean_spacing(&self) -> Option<f64> {
        (self.len() >= 2).then(|| self.span() / (self.len() - 1) as f64)
    }

    /// Adds `c` to every value.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        let values = self.values.iter().map(|v| v + c).collect();
        Self::build(values, self.method, self.rescaled, self.source_start_index)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# method={} rescaled={} start_index={}\n",
            self.method, self.rescaled, self.source_start_index
        );
        for &v in &self.values {
            let _ = writeln!(out, "{}", sig17(v));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut method = UnfoldMethod::External;
        let mut rescaled = false;
        let mut start = 1;
        let mut values = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            if let Some(comment) = line.strip_prefix('#') {
                // Other comment lines (e.g. provenance) are not metadata.
                if !comment.trim_start().starts_with("method=") {
                    continue;
                }
                for field in comment.split_whitespace() {
                    let Some((key, value)) = field.split_once('=') else {
                        continue;
                    };
                    match key {
                        "method" => {
                            method = value.parse().map_err(|e: Error| parse_err(e.to_string()))?
                        }
                        "rescaled" => {
                            rescaled = value
                                .parse()
                                .map_err(|_| parse_err(format!("bad rescaled flag {value:?}")))?
                        }
                        "start_index" => {
                            start = value
                                .parse()
                                .map_err(|_| parse_err(format!("bad start_index {value:?}")))?
                        }
                        _ => {}
                    }
                }
                continue;
            }
            let v = line
                .parse::<f64>()
                .map_err(|_| parse_err(format!("expected a number, found {line:?}")))?;
            values.push(v);
        }
        Self::build(values, method, rescaled, start)
    }
}

/// Maps each prime through the chosen staircase approximation.
///
/// `x / ln x` only increases from e onward, so a leading 2 is dropped under
/// [`UnfoldMethod::XOverLogX`] when more values follow.
pub fn unfold(seq: &PrimeSequence, method: UnfoldMethod) -> Result<UnfoldedSequence> {
    let primes = seq.values();
    let start = seq.start_index();
    match method {
        UnfoldMethod::XOverLogX => {
            let skip = usize::from(primes[0] == 2 && primes.len() > 1);
            let values = primes[skip..]
                .iter()
                .map(|&p| {
                    let x = p as f64;
                    x / x.ln()
                })
                .collect();
            UnfoldedSequence::new(values, method, start + skip as u64)
        }
        UnfoldMethod::Li => {
            let values = sweep_chunks(primes, |chunk| {
                let mut sweep: Option<LiSweep> = None;
                chunk
                    .iter()
                    .map(|&p| {
                        let x = p as f64;
                        match &mut sweep {
                            Some(s) => s.advance(x),
                            None => {
                                let s = LiSweep::start(x)?;
                                sweep = Some(s);
                                Ok(s.value)
                            }
                        }
                    })
                    .collect()
            })?;
            UnfoldedSequence::new(values, method, start)
        }
        UnfoldMethod::RiemannR => {
            let values = sweep_chunks(primes, |chunk| {
                let mut sweep = RiemannRSweep::new()?;
                chunk.iter().map(|&p| sweep.eval(p as f64)).collect()
            })?;
            UnfoldedSequence::new(values, method, start)
        }
        UnfoldMethod::Semicircle | UnfoldMethod::External => Err(Error::domain(
            "unfold",
            format!("{method} does not apply to prime sequences"),
        )),
    }
}

fn sweep_chunks<F>(primes: &[u64], f: F) -> Result<Vec<f64>>
where
    F: Fn(&[u64]) -> Result<Vec<f64>> + Sync,
{
    let parts: Vec<Vec<f64>> = primes.par_chunks(CHUNK).map(&f).collect::<Result<_>>()?;
    Ok(parts.concat())
}

/// Affine map to unit mean spacing starting at 0.
pub fn rescale_unit_mean(useq: &UnfoldedSequence) -> Result<UnfoldedSequence> {
    let n = useq.len();
    if n < 2 {
        return Err(Error::domain(
            "rescale",
            format!("rescaling needs at least 2 values, got {n}"),
        ));
    }
    let first = useq.values[0];
    let mean = useq.span() / (n - 1) as f64;
    let values = useq.values.iter().map(|v| (v - first) / mean).collect();
    UnfoldedSequence::build(values, useq.method, true, useq.source_start_index)
}
