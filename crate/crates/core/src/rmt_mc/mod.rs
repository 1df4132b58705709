//! Monte Carlo spectra of Gaussian random-matrix ensembles.
//!
//! Matrices are drawn in tridiagonal beta-ensemble form: diagonal entries
//! `N(0, 1)` and off-diagonal entries `χ_{β(n−1−i)} / √2`, whose spectrum
//! fills a semicircle of radius `√(2βn)`. Each draw has its own random stream
//! keyed by the draw index, so results do not depend on the worker count.

pub mod tridiag;

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;

use crate::ensembles::{EnsembleKind, Estimate};
use crate::error::{Error, Result};
use crate::numfmt::sig17;
use crate::spectral::{window_counts, CurvePoint, SpacingHistogram, Statistic, StatisticCurve};
use crate::unfold::{UnfoldMethod, UnfoldedSequence};

pub const DEFAULT_CENTRAL_FRACTION: f64 = 0.5;
/// Smallest matrix order for unfolded statistics.
pub const MIN_STATISTICS_DIM: usize = 8;

pub const TABULATION_DIM: usize = 500;
pub const TABULATION_SAMPLES: usize = 400;
pub const TABULATION_SEED: u64 = 20_080_101;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub central_fraction: f64,
}

impl McConfig {
    pub fn new(kind: EnsembleKind, dim: usize, n_samples: usize, seed: u64) -> Result<Self> {
        let config = McConfig {
            kind,
            dim,
            n_samples,
            seed,
            central_fraction: DEFAULT_CENTRAL_FRACTION,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_central_fraction(mut self, fraction: f64) -> Result<Self> {
        self.central_fraction = fraction;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if matches!(self.kind, EnsembleKind::BerryRobnik { .. }) {
            return Err(Error::domain(
                "monte carlo",
                "Berry-Robnik spectra are not sampled",
            ));
        }
        if self.dim < 2 || self.n_samples == 0 {
            return Err(Error::domain(
                "monte carlo",
                format!(
                    "need dim >= 2 and n_samples >= 1, got {} and {}",
                    self.dim, self.n_samples
                ),
            ));
        }
        if !(self.central_fraction > 0.0 && self.central_fraction <= 1.0) {
            return Err(Error::domain(
                "monte carlo",
                format!("central fraction {} not in (0, 1]", self.central_fraction),
            ));
        }
        Ok(())
    }

    fn validate_for_statistics(&self) -> Result<()> {
        self.validate()?;
        if self.dim < MIN_STATISTICS_DIM {
            return Err(Error::domain(
                "monte carlo",
                format!("dim {} below {MIN_STATISTICS_DIM}", self.dim),
            ));
        }
        Ok(())
    }
}

fn rng_for(config: &McConfig, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    rng
}

/// Eigenvalues of draw `index`, ascending. The Poisson kind gives `dim`
/// independent uniform levels on `[0, dim)`.
pub fn sample_spectrum(config: &McConfig, index: u64) -> Result<Vec<f64>> {
    config.validate()?;
    let n = config.dim;
    let mut rng = rng_for(config, index);
    let Some(beta) = config.kind.beta() else {
        let mut levels: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * n as f64).collect();
        levels.sort_by(f64::total_cmp);
        return Ok(levels);
    };
    let diag: Vec<f64> = (0..n)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut off = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let dof = (beta as usize * (n - 1 - i)) as f64;
        let chi2 = ChiSquared::new(dof).map_err(|e| Error::Numeric(e.to_string()))?;
        off.push((chi2.sample(&mut rng) / 2.0).sqrt());
    }
    tridiag::eigenvalues(&diag, &off).map_err(|e| Error::Numeric(format!("matrix {index}: {e}")))
}

/// Integrated semicircle density: expected number of levels below `x`.
pub fn semicircle_count(x: f64, dim: usize, beta: u32) -> f64 {
    let radius = (2.0 * beta as f64 * dim as f64).sqrt();
    let t = (x / radius).clamp(-1.0, 1.0);
    dim as f64 * (0.5 + (t * (1.0 - t * t).sqrt() + t.asin()) / PI)
}

/// Unfolds a spectrum and keeps the central fraction of its levels.
pub fn unfold_spectrum(config: &McConfig, spectrum: &[f64]) -> Result<UnfoldedSequence> {
    let n = spectrum.len();
    let keep = ((config.central_fraction * n as f64).round() as usize).clamp(2, n);
    let start = (n - keep) / 2;
    let central = &spectrum[start..start + keep];
    let values = match config.kind.beta() {
        Some(beta) => central
            .iter()
            .map(|&x| semicircle_count(x, n, beta))
            .collect(),
        None => central.to_vec(),
    };
    UnfoldedSequence::new(values, UnfoldMethod::Semicircle, 0)
}

fn unfolded_sample(config: &McConfig, index: u64) -> Result<UnfoldedSequence> {
    unfold_spectrum(config, &sample_spectrum(config, index)?)
}

/// Power sums of window counts taken about a fixed integer offset.
#[derive(Debug, Clone, Copy, Default)]
struct PowerSums {
    n: f64,
    s: [f64; 4],
}

impl PowerSums {
    fn of(counts: &[u32], shift: f64) -> Self {
        let mut p = PowerSums::default();
        for &c in counts {
            let x = f64::from(c) - shift;
            let (x2, x3) = (x * x, x * x * x);
            p.n += 1.0;
            p.s[0] += x;
            p.s[1] += x2;
            p.s[2] += x3;
            p.s[3] += x3 * x;
        }
        p
    }

    fn add(&mut self, other: &PowerSums) {
        self.n += other.n;
        for k in 0..4 {
            self.s[k] += other.s[k];
        }
    }

    fn statistic(&self, stat: Statistic) -> f64 {
        let [m1, m2, m3, m4] = self.s.map(|v| v / self.n);
        let mu2 = m2 - m1 * m1;
        let mu3 = m3 - 3.0 * m1 * m2 + 2.0 * m1.powi(3);
        let mu4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1.powi(4);
        stat.from_moments(mu2.max(0.0), mu3, mu4)
    }
}

fn mean_and_stderr(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let xs: Vec<f64> = xs.filter(|x| x.is_finite()).collect();
    if xs.len() < 2 {
        return (xs.first().copied().unwrap_or(f64::NAN), f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Σ², γ₁ and γ₂ averaged over draws.
///
/// Values come from the window counts of all draws pooled together; standard
/// errors from the spread of per-draw values.
pub fn mc_curves(config: &McConfig, grid: &[f64], step: f64) -> Result<[StatisticCurve; 3]> {
    config.validate_for_statistics()?;
    let per_sample: Vec<Vec<PowerSums>> = (0..config.n_samples as u64)
        .into_par_iter()
        .map(|index| {
            let useq = unfolded_sample(config, index)?;
            grid.iter()
                .map(|&l| Ok(PowerSums::of(&window_counts(&useq, l, step)?, l.round())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut min_windows = usize::MAX;
    let mut curves = Vec::with_capacity(3);
    for stat in Statistic::ALL {
        let mut points = Vec::with_capacity(grid.len());
        for (i, &l) in grid.iter().enumerate() {
            let mut pooled = PowerSums::default();
            for sample in &per_sample {
                pooled.add(&sample[i]);
            }
            min_windows = min_windows.min(pooled.n as usize);
            let (_, stderr) = mean_and_stderr(per_sample.iter().map(|s| s[i].statistic(stat)));
            points.push(CurvePoint {
                l,
                value: pooled.statistic(stat),
                stderr,
            });
        }
        curves.push(StatisticCurve::new(stat, points, step, min_windows)?);
    }
    Ok(curves.try_into().expect("three statistics"))
}

pub fn mc_statistic(
    config: &McConfig,
    statistic: Statistic,
    grid: &[f64],
    step: f64,
) -> Result<StatisticCurve> {
    let [s2, g1, g2] = mc_curves(config, grid, step)?;
    Ok(match statistic {
        Statistic::Sigma2 => s2,
        Statistic::Gamma1 => g1,
        Statistic::Gamma2 => g2,
    })
}

/// Pooled spacing histogram with a per-bin standard error across draws.
pub fn mc_nnsd(
    config: &McConfig,
    bin_width: f64,
    s_max: f64,
) -> Result<(SpacingHistogram, Vec<f64>)> {
    config.validate_for_statistics()?;
    let per_sample: Vec<Vec<f64>> = (0..config.n_samples as u64)
        .into_par_iter()
        .map(|index| {
            let useq = unfolded_sample(config, index)?;
            Ok(useq.values().windows(2).map(|w| w[1] - w[0]).collect())
        })
        .collect::<Result<_>>()?;
    let pooled: Vec<f64> = per_sample.iter().flatten().copied().collect();
    let hist = SpacingHistogram::from_spacings(&pooled, bin_width, s_max)?;
    let sample_hists = per_sample
        .iter()
        .map(|s| SpacingHistogram::from_spacings(s, bin_width, s_max))
        .collect::<Result<Vec<_>>>()?;
    let stderr = (0..hist.densities().len())
        .map(|b| mean_and_stderr(sample_hists.iter().map(|h| h.densities()[b])).1)
        .collect();
    Ok((hist, stderr))
}

/// Unfolded nearest-neighbour spacings of every draw, concatenated in draw
/// order.
pub fn mc_spacings(config: &McConfig) -> Result<Vec<f64>> {
    config.validate_for_statistics()?;
    let per_sample: Vec<Vec<f64>> = (0..config.n_samples as u64)
        .into_par_iter()
        .map(|index| {
            let useq = unfolded_sample(config, index)?;
            Ok(useq.values().windows(2).map(|w| w[1] - w[0]).collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_sample.concat())
}

/// Spacings of the complete raw spectra, without unfolding. Useful for
/// small matrices, where the semicircle does not apply.
pub fn raw_spacings(config: &McConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let per_sample: Vec<Vec<f64>> = (0..config.n_samples as u64)
        .into_par_iter()
        .map(|index| {
            let spectrum = sample_spectrum(config, index)?;
            Ok(spectrum.windows(2).map(|w| w[1] - w[0]).collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_sample.concat())
}

/// Two-level cluster function `Y₂(r) = 1 − R₂(r)`, with `R₂` estimated from
/// pairs of unfolded levels whose separation lies within `half_width` of `r`.
pub fn mc_cluster_function(
    config: &McConfig,
    r_values: &[f64],
    half_width: f64,
) -> Result<Vec<Estimate>> {
    config.validate_for_statistics()?;
    if !(half_width > 0.0) || r_values.iter().any(|&r| !(r >= half_width)) {
        return Err(Error::domain(
            "cluster function",
            "need half_width > 0 and every r >= half_width",
        ));
    }
    let per_sample: Vec<Vec<f64>> = (0..config.n_samples as u64)
        .into_par_iter()
        .map(|index| {
            let useq = unfolded_sample(config, index)?;
            let v = useq.values();
            let last = v[v.len() - 1];
            Ok(r_values
                .iter()
                .map(|&r| {
                    let (mut anchors, mut pairs) = (0usize, 0usize);
                    for (i, &x) in v.iter().enumerate() {
                        if x + r + half_width > last {
                            break;
                        }
                        anchors += 1;
                        let lo = v.partition_point(|&y| y < x + r - half_width);
                        let hi = v.partition_point(|&y| y <= x + r + half_width);
                        pairs += hi - lo.max(i + 1).min(hi);
                    }
                    1.0 - pairs as f64 / (anchors as f64 * 2.0 * half_width)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok((0..r_values.len())
        .map(|k| {
            let (value, stderr) = mean_and_stderr(per_sample.iter().map(|s| s[k]));
            Estimate { value, stderr }
        })
        .collect())
}

/// Kolmogorov-Smirnov distance between a sample and a continuous cdf.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// `L = 0.25, 0.5, ..., 10`.
pub fn tabulation_grid() -> Vec<f64> {
    (1..=40).map(|i| 0.25 * i as f64).collect()
}

/// Skewness and excess reference table for GOE, GUE and GSE, as CSV with
/// columns `kind,statistic,L,value,stderr`.
pub fn gamma_reference_csv(
    dim: usize,
    n_samples: usize,
    seed: u64,
    grid: &[f64],
    step: f64,
) -> Result<String> {
    let mut out = format!(
        "# seed={seed} dim={dim} n_samples={n_samples} window_step={step} central_fraction={DEFAULT_CENTRAL_FRACTION}\n\
         kind,statistic,L,value,stderr\n"
    );
    for kind in [EnsembleKind::Goe, EnsembleKind::Gue, EnsembleKind::Gse] {
        let config = McConfig::new(kind, dim, n_samples, seed)?;
        let [_, g1, g2] = mc_curves(&config, grid, step)?;
        for curve in [g1, g2] {
            for p in curve.points() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    kind.name(),
                    curve.statistic().name(),
                    sig17(p.l),
                    sig17(p.value),
                    sig17(p.stderr)
                );
            }
        }
    }
    Ok(out)
}
