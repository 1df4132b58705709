//! Fluctuation statistics of unfolded sequences.
//!
//! Window counts use half-open windows `[a_j, a_j + L)` with
//! `a_j = e_1 + offset + j * step`, kept while `a_j + L <= e_N`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numfmt::sig17;
use crate::unfold::UnfoldedSequence;

pub const DEFAULT_BIN_WIDTH: f64 = 0.1;
pub const DEFAULT_S_MAX: f64 = 4.0;
pub const DEFAULT_WINDOW_STEP: f64 = 0.25;
pub const ERROR_BLOCKS: usize = 20;

/// Smallest window length of a saturation scan.
pub const SATURATION_L_MIN: f64 = 0.5;
/// A plateau changes by less than this fraction per octave of L.
pub const PLATEAU_TOLERANCE: f64 = 0.05;

/// `L = 0.1, 0.2, ..., 5.0`.
pub fn standard_l_grid() -> Vec<f64> {
    linear_grid(0.1, 5.0, 0.1)
}

/// `first, first + step, ...` up to `last` inclusive (within rounding).
pub fn linear_grid(first: f64, last: f64, step: f64) -> Vec<f64> {
    let n = ((last - first) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| first + i as f64 * step).collect()
}

pub fn log_grid(first: f64, last: f64, n_points: usize) -> Vec<f64> {
    if n_points == 1 {
        return vec![first];
    }
    let ratio = (last / first).ln();
    (0..n_points)
        .map(|i| first * (ratio * i as f64 / (n_points - 1) as f64).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpacingHistogram {
    bin_width: f64,
    s_max: f64,
    densities: Vec<f64>,
    total_spacings: usize,
}

impl SpacingHistogram {
    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn total_spacings(&self) -> usize {
        self.total_spacings
    }

    /// `(s_left, s_right, density)` per bin.
    pub fn bins(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.densities.iter().enumerate().map(|(i, &d)| {
            let left = i as f64 * self.bin_width;
            (left, (left + self.bin_width).min(self.s_max), d)
        })
    }

    /// Probability mass captured by the bins.
    pub fn mass(&self) -> f64 {
        self.bins().map(|(l, r, d)| d * (r - l)).sum()
    }

    /// Index of the highest bin (first one on ties).
    pub fn mode_bin(&self) -> usize {
        let mut best = 0;
        for (i, &d) in self.densities.iter().enumerate() {
            if d > self.densities[best] {
                best = i;
            }
        }
        best
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s_left,s_right,density\n");
        for (l, r, d) in self.bins() {
            let _ = writeln!(out, "{},{},{}", sig17(l), sig17(r), sig17(d));
        }
        out
    }
}

fn spacings(useq: &UnfoldedSequence, stage: &'static str) -> Result<Vec<f64>> {
    if useq.len() < 2 {
        return Err(Error::insufficient(
            stage,
            format!("need at least 2 unfolded values, got {}", useq.len()),
        ));
    }
    Ok(useq.values().windows(2).map(|w| w[1] - w[0]).collect())
}

/// Nearest-neighbour spacing histogram normalized as a probability density
/// over all spacings; spacings beyond `s_max` count toward the normalization
/// but fall in no bin.
pub fn nnsd(useq: &UnfoldedSequence, bin_width: f64, s_max: f64) -> Result<SpacingHistogram> {
    let s = spacings(useq, "nnsd")?;
    SpacingHistogram::from_spacings(&s, bin_width, s_max)
}

impl SpacingHistogram {
    /// Histogram of precomputed spacings, normalized as in [`nnsd`].
    pub fn from_spacings(spacings: &[f64], bin_width: f64, s_max: f64) -> Result<Self> {
        if !(bin_width > 0.0) || !(s_max > 0.0) {
            return Err(Error::domain(
                "nnsd",
                format!("bin width {bin_width} and s_max {s_max} must be positive"),
            ));
        }
        if spacings.is_empty() {
            return Err(Error::insufficient("nnsd", "no spacings"));
        }
        let n_bins = ((s_max / bin_width) - 1e-9).ceil().max(1.0) as usize;
        let mut counts = vec![0usize; n_bins];
        for &x in spacings {
            if x <= s_max {
                let i = ((x / bin_width) as usize).min(n_bins - 1);
                counts[i] += 1;
            }
        }
        let total = spacings.len();
        let densities = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let width = ((i + 1) as f64 * bin_width).min(s_max) - i as f64 * bin_width;
                c as f64 / (total as f64 * width)
            })
            .collect();
        Ok(SpacingHistogram {
            bin_width,
            s_max,
            densities,
            total_spacings: total,
        })
    }
}

pub fn window_counts(useq: &UnfoldedSequence, length: f64, step: f64) -> Result<Vec<u32>> {
    window_counts_offset(useq, length, step, 0.0)
}

/// Window counts with the grid of window starts shifted by `offset`.
pub fn window_counts_offset(
    useq: &UnfoldedSequence,
    length: f64,
    step: f64,
    offset: f64,
) -> Result<Vec<u32>> {
    if !(length > 0.0) || !(step > 0.0) || !(offset >= 0.0) {
        return Err(Error::domain(
            "window counts",
            format!("need L > 0, step > 0, offset >= 0; got {length}, {step}, {offset}"),
        ));
    }
    let values = useq.values();
    let span = useq.span();
    if span <= length {
        return Err(Error::InsufficientSpan {
            stage: "window counts",
            length,
            span,
        });
    }
    let first = values[0];
    let last = values[values.len() - 1];
    let mut counts = Vec::new();
    let (mut lo, mut hi) = (0usize, 0usize);
    for j in 0.. {
        let a = first + offset + j as f64 * step;
        let b = a + length;
        if b > last {
            break;
        }
        // Starts ascend, so both boundaries only move forward.
        while lo < values.len() && values[lo] < a {
            lo += 1;
        }
        if hi < lo {
            hi = lo;
        }
        while hi < values.len() && values[hi] < b {
            hi += 1;
        }
        counts.push((hi - lo) as u32);
    }
    if counts.is_empty() {
        return Err(Error::InsufficientSpan {
            stage: "window counts",
            length: length + offset,
            span,
        });
    }
    Ok(counts)
}

fn mean_of(counts: &[u32]) -> f64 {
    counts.iter().map(|&c| f64::from(c)).sum::<f64>() / counts.len() as f64
}

/// Central moment `<(n - <n>)^j>` over the windows.
pub fn moments(counts: &[u32], j: u32) -> f64 {
    if counts.is_empty() {
        return f64::NAN;
    }
    central_moment(counts, mean_of(counts), j)
}

fn central_moment(counts: &[u32], mean: f64, j: u32) -> f64 {
    counts
        .iter()
        .map(|&c| (f64::from(c) - mean).powi(j as i32))
        .sum::<f64>()
        / counts.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    /// Number variance, `mu_2`.
    Sigma2,
    /// Skewness, `mu_3 / mu_2^(3/2)`.
    Gamma1,
    /// Excess, `mu_4 / mu_2^2 - 3`.
    Gamma2,
}

impl Statistic {
    pub const ALL: [Statistic; 3] = [Statistic::Sigma2, Statistic::Gamma1, Statistic::Gamma2];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Sigma2 => "SIGMA2",
            Statistic::Gamma1 => "GAMMA1",
            Statistic::Gamma2 => "GAMMA2",
        }
    }

    /// Evaluates the statistic from central moments `mu_2, mu_3, mu_4`.
    /// Undefined (NaN) for the shape statistics when `mu_2 = 0`.
    pub fn from_moments(self, mu2: f64, mu3: f64, mu4: f64) -> f64 {
        match self {
            Statistic::Sigma2 => mu2,
            Statistic::Gamma1 if mu2 > 0.0 => mu3 / mu2.powf(1.5),
            Statistic::Gamma2 if mu2 > 0.0 => mu4 / (mu2 * mu2) - 3.0,
            _ => f64::NAN,
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sigma2" | "numvar" | "number_variance" => Ok(Statistic::Sigma2),
            "gamma1" | "skew" | "skewness" => Ok(Statistic::Gamma1),
            "gamma2" | "excess" | "kurtosis" => Ok(Statistic::Gamma2),
            _ => Err(Error::domain(
                "statistic",
                format!("unknown statistic {s:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub l: f64,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatisticCurve {
    statistic: Statistic,
    points: Vec<CurvePoint>,
    window_step: f64,
    n_windows_per_l: usize,
}

impl StatisticCurve {
    pub fn new(
        statistic: Statistic,
        points: Vec<CurvePoint>,
        window_step: f64,
        n_windows_per_l: usize,
    ) -> Result<Self> {
        if let Some(w) = points.windows(2).find(|w| w[1].l <= w[0].l) {
            return Err(Error::domain(
                "statistic curve",
                format!("L values not increasing at {} -> {}", w[0].l, w[1].l),
            ));
        }
        if let Some(p) = points.iter().find(|p| !(p.l > 0.0)) {
            return Err(Error::domain(
                "statistic curve",
                format!("L = {} is not positive", p.l),
            ));
        }
        if statistic == Statistic::Sigma2 {
            if let Some(p) = points.iter().find(|p| p.value < 0.0) {
                return Err(Error::domain(
                    "statistic curve",
                    format!("negative number variance {} at L = {}", p.value, p.l),
                ));
            }
        }
        Ok(StatisticCurve {
            statistic,
            points,
            window_step,
            n_windows_per_l,
        })
    }

    /// Curve with zero error bars, e.g. a theory curve.
    pub fn exact(
        statistic: Statistic,
        points: impl IntoIterator<Item = (f64, f64)>,
    ) -> Result<Self> {
        let points = points
            .into_iter()
            .map(|(l, value)| CurvePoint {
                l,
                value,
                stderr: 0.0,
            })
            .collect();
        StatisticCurve::new(statistic, points, 0.0, 0)
    }

    pub fn statistic(&self) -> Statistic {
        self.statistic
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn window_step(&self) -> f64 {
        self.window_step
    }

    /// Windows behind each point (fewest over the curve, at its largest L).
    pub fn n_windows_per_l(&self) -> usize {
        self.n_windows_per_l
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("L,value,stderr\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", sig17(p.l), sig17(p.value), sig17(p.stderr));
        }
        out
    }

    pub fn from_csv(text: &str, statistic: Statistic) -> Result<Self> {
        let mut points = Vec::new();
        let mut seen_header = false;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !seen_header {
                seen_header = true;
                if line.replace(' ', "") == "L,value,stderr" {
                    continue;
                }
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| Error::Parse {
                    line: i + 1,
                    message: format!("expected a number, found {s:?}"),
                })
            };
            let (l, value, stderr) = match fields.as_slice() {
                [l, v] => (parse(l)?, parse(v)?, 0.0),
                [l, v, e] => (parse(l)?, parse(v)?, parse(e)?),
                _ => {
                    return Err(Error::Parse {
                        line: i + 1,
                        message: format!("expected `L,value,stderr`, found {line:?}"),
                    })
                }
            };
            points.push(CurvePoint { l, value, stderr });
        }
        StatisticCurve::new(statistic, points, 0.0, 0)
    }
}

/// Moments of one L: value and block standard error for each statistic.
struct WindowMoments {
    n_windows: usize,
    values: [f64; 3],
    stderrs: [f64; 3],
}

fn analyse_windows(counts: &[u32]) -> WindowMoments {
    let mean = mean_of(counts);
    let whole = |c: &[u32]| {
        let mu2 = central_moment(c, mean, 2);
        let mu3 = central_moment(c, mean, 3);
        let mu4 = central_moment(c, mean, 4);
        Statistic::ALL.map(|s| s.from_moments(mu2, mu3, mu4))
    };
    let values = {
        let mu2 = central_moment(counts, mean, 2);
        let mu3 = central_moment(counts, mean, 3);
        let mu4 = central_moment(counts, mean, 4);
        Statistic::ALL.map(|s| s.from_moments(mu2, mu3, mu4))
    };

    let blocks = ERROR_BLOCKS.min(counts.len());
    let mut per_block: Vec<[f64; 3]> = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let lo = b * counts.len() / blocks;
        let hi = (b + 1) * counts.len() / blocks;
        per_block.push(whole(&counts[lo..hi]));
    }
    let stderrs = std::array::from_fn(|k| {
        let xs: Vec<f64> = per_block
            .iter()
            .map(|v| v[k])
            .filter(|v| v.is_finite())
            .collect();
        if xs.len() < 2 {
            return if values[k].is_finite() { 0.0 } else { f64::NAN };
        }
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        (var / xs.len() as f64).sqrt()
    });
    WindowMoments {
        n_windows: counts.len(),
        values,
        stderrs,
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain("statistics", "empty L grid"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(
            "statistics",
            "L grid must be strictly increasing",
        ));
    }
    Ok(())
}

/// Computes Σ², γ₁ and γ₂ together from one set of window counts per L.
pub fn all_statistics(
    useq: &UnfoldedSequence,
    grid: &[f64],
    step: f64,
) -> Result<[StatisticCurve; 3]> {
    all_statistics_offset(useq, grid, step, 0.0)
}

pub fn all_statistics_offset(
    useq: &UnfoldedSequence,
    grid: &[f64],
    step: f64,
    offset: f64,
) -> Result<[StatisticCurve; 3]> {
    check_grid(grid)?;
    let per_l: Vec<WindowMoments> = grid
        .par_iter()
        .map(|&l| window_counts_offset(useq, l, step, offset).map(|c| analyse_windows(&c)))
        .collect::<Result<_>>()?;
    let min_windows = per_l.iter().map(|m| m.n_windows).min().unwrap_or(0);
    let curves: Vec<StatisticCurve> = Statistic::ALL
        .iter()
        .enumerate()
        .map(|(k, &stat)| {
            let points = grid
                .iter()
                .zip(&per_l)
                .map(|(&l, m)| CurvePoint {
                    l,
                    value: m.values[k],
                    stderr: m.stderrs[k],
                })
                .collect();
            StatisticCurve::new(stat, points, step, min_windows)
        })
        .collect::<Result<_>>()?;
    Ok(curves.try_into().expect("three statistics"))
}

pub fn statistic_curve(
    useq: &UnfoldedSequence,
    statistic: Statistic,
    grid: &[f64],
    step: f64,
) -> Result<StatisticCurve> {
    let [s2, g1, g2] = all_statistics(useq, grid, step)?;
    Ok(match statistic {
        Statistic::Sigma2 => s2,
        Statistic::Gamma1 => g1,
        Statistic::Gamma2 => g2,
    })
}

pub fn number_variance(useq: &UnfoldedSequence, grid: &[f64], step: f64) -> Result<StatisticCurve> {
    statistic_curve(useq, Statistic::Sigma2, grid, step)
}

pub fn skewness(useq: &UnfoldedSequence, grid: &[f64], step: f64) -> Result<StatisticCurve> {
    statistic_curve(useq, Statistic::Gamma1, grid, step)
}

pub fn excess(useq: &UnfoldedSequence, grid: &[f64], step: f64) -> Result<StatisticCurve> {
    statistic_curve(useq, Statistic::Gamma2, grid, step)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationEstimate {
    pub l_saturation: f64,
    pub plateau_value: f64,
}

/// Σ² on a logarithmic grid from [`SATURATION_L_MIN`] to `l_max`, with plateau
/// detection (see [`detect_plateau`]).
pub fn saturation_scan(
    useq: &UnfoldedSequence,
    l_max: f64,
    n_points: usize,
    step: f64,
) -> Result<(StatisticCurve, Option<SaturationEstimate>)> {
    let span = useq.span();
    if !(l_max < span / 2.0) {
        return Err(Error::InsufficientSpan {
            stage: "saturation scan",
            length: 2.0 * l_max,
            span,
        });
    }
    if !(l_max > SATURATION_L_MIN) || n_points < 2 {
        return Err(Error::domain(
            "saturation scan",
            format!("need L_max > {SATURATION_L_MIN} and at least 2 points"),
        ));
    }
    let grid = log_grid(SATURATION_L_MIN, l_max, n_points);
    let curve = number_variance(useq, &grid, step)?;
    let plateau = detect_plateau(&curve);
    Ok((curve, plateau))
}

/// Finds the smallest `L_i` such that, over all points from `L_i` to the end
/// of the scan (at least one octave), the least-squares trend of `ln Σ²`
/// against `log2 L` changes Σ² by less than [`PLATEAU_TOLERANCE`] per octave.
/// The plateau value is the mean Σ² over that tail.
pub fn detect_plateau(curve: &StatisticCurve) -> Option<SaturationEstimate> {
    let pts = curve.points();
    let last_l = pts.last()?.l;
    let limit = (1.0 + PLATEAU_TOLERANCE).ln();
    for i in 0..pts.len() {
        if (last_l / pts[i].l).log2() < 1.0 {
            break;
        }
        let tail = &pts[i..];
        if tail.iter().any(|p| !(p.value > 0.0)) {
            continue;
        }
        let xs: Vec<f64> = tail.iter().map(|p| p.l.log2()).collect();
        let ys: Vec<f64> = tail.iter().map(|p| p.value.ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let slope = sxy / sxx;
        if slope.abs() < limit {
            return Some(SaturationEstimate {
                l_saturation: pts[i].l,
                plateau_value: tail.iter().map(|p| p.value).sum::<f64>() / n,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(values: Vec<f64>) -> UnfoldedSequence {
        UnfoldedSequence::from_values(values).unwrap()
    }

    fn picket(n: usize, shift: f64) -> UnfoldedSequence {
        seq((0..n).map(|i| i as f64 + shift).collect())
    }

    #[test]
    fn picket_fence_histogram() {
        let h = nnsd(&picket(200, 0.0), 0.1, 4.0).unwrap();
        assert_eq!(h.densities().len(), 40);
        assert_eq!(h.mode_bin(), 10);
        assert!((h.densities()[10] - 10.0).abs() < 1e-12);
        assert!((h.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overflow_spacings_reduce_mass() {
        let h = nnsd(&seq(vec![0.0, 1.0, 6.0, 7.0]), 0.5, 4.0).unwrap();
        assert_eq!(h.total_spacings(), 3);
        assert!((h.mass() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn nnsd_needs_two_values() {
        let err = nnsd(&seq(vec![1.0]), 0.1, 4.0).unwrap_err();
        assert!(err.to_string().contains("nnsd"));
    }

    #[test]
    fn window_counts_picket_half() {
        let c = window_counts(&picket(100, 0.5), 0.5, 0.25).unwrap();
        assert!(c.iter().all(|&x| x <= 1));
        assert!(c.contains(&0) && c.contains(&1));
        assert!((mean_of(&c) - 0.5).abs() < 0.01);
    }

    #[test]
    fn window_counts_integer_length() {
        for l in 1..5 {
            let c = window_counts(&picket(50, 0.0), l as f64, 0.25).unwrap();
            assert!(c.iter().all(|&x| x == l), "L = {l}");
        }
    }

    #[test]
    fn window_counts_near_full_span() {
        let s = picket(40, 0.0);
        let c = window_counts(&s, s.span() - 0.25, 0.25).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|&x| (38..=40).contains(&x)));
    }

    #[test]
    fn insufficient_span() {
        let s = picket(10, 0.0);
        assert!(matches!(
            window_counts(&s, 9.0, 0.25),
            Err(Error::InsufficientSpan { .. })
        ));
        assert!(matches!(
            number_variance(&s, &[1.0, 5.0, 10.0], 0.25),
            Err(Error::InsufficientSpan { .. })
        ));
    }

    #[test]
    fn moment_examples() {
        assert_eq!(moments(&[3, 3, 3], 2), 0.0);
        assert_eq!(moments(&[3, 3, 3], 3), 0.0);
        assert_eq!(moments(&[3, 3, 3], 4), 0.0);
        assert_eq!(moments(&[0, 2, 0, 2], 2), 1.0);
        assert_eq!(moments(&[0, 2, 0, 2], 3), 0.0);
    }

    #[test]
    fn two_point_excess_is_minus_two() {
        let g = Statistic::Gamma2.from_moments(
            moments(&[0, 2, 0, 2], 2),
            moments(&[0, 2, 0, 2], 3),
            moments(&[0, 2, 0, 2], 4),
        );
        assert_eq!(g, -2.0);
    }

    #[test]
    fn picket_fence_number_variance() {
        let c = number_variance(&picket(400, 0.0), &[2.5], 0.01).unwrap();
        assert!(
            (c.points()[0].value - 0.25).abs() < 1e-3,
            "{:?}",
            c.points()
        );
    }

    #[test]
    fn symmetric_counts_have_zero_skewness() {
        let c = skewness(&picket(400, 0.0), &[2.5], 0.01).unwrap();
        assert!(c.points()[0].value.abs() < 1e-2, "{:?}", c.points());
    }

    #[test]
    fn curve_invariants() {
        let p = |l, value| CurvePoint {
            l,
            value,
            stderr: 0.0,
        };
        assert!(
            StatisticCurve::new(Statistic::Sigma2, vec![p(1.0, 0.1), p(1.0, 0.2)], 0.25, 1)
                .is_err()
        );
        assert!(StatisticCurve::new(Statistic::Sigma2, vec![p(1.0, -0.1)], 0.25, 1).is_err());
        assert!(StatisticCurve::new(Statistic::Gamma1, vec![p(1.0, -0.1)], 0.25, 1).is_ok());
    }

    #[test]
    fn csv_round_trip() {
        let c = number_variance(&picket(100, 0.0), &[0.5, 1.5], 0.25).unwrap();
        let text = c.to_csv();
        assert!(text.starts_with("L,value,stderr\n"));
        let back = StatisticCurve::from_csv(&text, Statistic::Sigma2).unwrap();
        assert_eq!(back.points(), c.points());
        let err = StatisticCurve::from_csv("L,value,stderr\n1,2,3\n2,x,1\n", Statistic::Sigma2)
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn grids() {
        let g = standard_l_grid();
        assert_eq!(g.len(), 50);
        assert!((g[49] - 5.0).abs() < 1e-12);
        let lg = log_grid(0.5, 4000.0, 40);
        assert_eq!(lg.len(), 40);
        assert!((lg[39] - 4000.0).abs() < 1e-9);
    }

    #[test]
    fn plateau_detection_on_synthetic_curves() {
        let linear = StatisticCurve::exact(
            Statistic::Sigma2,
            log_grid(0.5, 1000.0, 40).into_iter().map(|l| (l, l)),
        )
        .unwrap();
        assert_eq!(detect_plateau(&linear), None);

        let saturating = StatisticCurve::exact(
            Statistic::Sigma2,
            log_grid(0.5, 1000.0, 40)
                .into_iter()
                .map(|l| (l, l.min(50.0))),
        )
        .unwrap();
        let est = detect_plateau(&saturating).unwrap();
        assert!(
            est.l_saturation > 30.0 && est.l_saturation < 120.0,
            "{est:?}"
        );
        assert!((est.plateau_value - 50.0).abs() < 2.0);
    }

    #[test]
    fn saturation_scan_rejects_long_windows() {
        let s = picket(100, 0.0);
        assert!(saturation_scan(&s, 60.0, 10, 0.25).is_err());
        assert!(saturation_scan(&s, 40.0, 10, 0.25).is_ok());
    }
}
