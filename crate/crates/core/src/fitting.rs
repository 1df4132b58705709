//! Least-squares fit of the Berry-Robnik Poisson fraction to a number-variance
//! curve.

use serde::{Deserialize, Serialize};

use crate::ensembles::{sigma2_br, RHO1_MAX, RHO1_MIN};
use crate::error::{Error, Result};
use crate::numeric::minimize::brent;
use crate::spectral::{CurvePoint, Statistic, StatisticCurve};

pub const DEFAULT_FIT_L_MIN: f64 = 0.0;
pub const DEFAULT_FIT_L_MAX: f64 = 5.0;
pub const MIN_FIT_POINTS: usize = 10;
pub const RHO1_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrFit {
    pub rho1: f64,
    pub rss: f64,
    #[serde(rename = "l_min")]
    pub fit_l_min: f64,
    #[serde(rename = "l_max")]
    pub fit_l_max: f64,
    pub n_points: usize,
    pub weighted: bool,
    /// The minimum sits on an end of the admissible `rho1` range.
    pub at_boundary: bool,
}

fn fit_points(curve: &StatisticCurve, l_min: f64, l_max: f64) -> Result<Vec<CurvePoint>> {
    if curve.statistic() != Statistic::Sigma2 {
        return Err(Error::domain(
            "fit",
            format!("expected a SIGMA2 curve, got {}", curve.statistic()),
        ));
    }
    if !(l_min < l_max) {
        return Err(Error::domain(
            "fit",
            format!("empty range ({l_min}, {l_max}]"),
        ));
    }
    let points: Vec<CurvePoint> = curve
        .points()
        .iter()
        .copied()
        .filter(|p| p.l > l_min && p.l <= l_max)
        .collect();
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::insufficient(
            "fit",
            format!(
                "{} points in ({l_min}, {l_max}], need at least {MIN_FIT_POINTS}",
                points.len()
            ),
        ));
    }
    if points.iter().any(|p| !p.value.is_finite()) {
        return Err(Error::Numeric(
            "non-finite number variance in fit range".into(),
        ));
    }
    Ok(points)
}

fn objective(points: &[CurvePoint], rho1: f64, weighted: bool) -> f64 {
    points
        .iter()
        .map(|p| {
            let model = sigma2_br(p.l, rho1).expect("validated L and rho1");
            let r = p.value - model;
            if weighted {
                r * r / (p.stderr * p.stderr)
            } else {
                r * r
            }
        })
        .sum()
}

/// Residual sum of squares of the Berry-Robnik model at `rho1`.
pub fn residual_sum_of_squares(
    curve: &StatisticCurve,
    l_min: f64,
    l_max: f64,
    rho1: f64,
    weighted: bool,
) -> Result<f64> {
    let points = fit_points(curve, l_min, l_max)?;
    if weighted && points.iter().any(|p| !(p.stderr > 0.0)) {
        return Err(Error::domain(
            "fit",
            "weighted fit needs positive standard errors",
        ));
    }
    Ok(objective(&points, rho1, weighted))
}

/// Unweighted fit over `l_min < L <= l_max`.
pub fn fit_rho1(curve: &StatisticCurve, l_min: f64, l_max: f64) -> Result<BrFit> {
    fit(curve, l_min, l_max, false)
}

/// Fit weighted by inverse squared standard errors.
pub fn fit_rho1_weighted(curve: &StatisticCurve, l_min: f64, l_max: f64) -> Result<BrFit> {
    fit(curve, l_min, l_max, true)
}

fn fit(curve: &StatisticCurve, l_min: f64, l_max: f64, weighted: bool) -> Result<BrFit> {
    let points = fit_points(curve, l_min, l_max)?;
    if weighted && points.iter().any(|p| !(p.stderr > 0.0)) {
        return Err(Error::domain(
            "fit",
            "weighted fit needs positive standard errors",
        ));
    }
    let f = |rho1: f64| objective(&points, rho1, weighted);
    let found = brent(f, RHO1_MIN, RHO1_MAX, RHO1_TOLERANCE);
    let (mut rho1, mut rss) = (found.x, found.value);
    let mut at_boundary = false;
    for end in [RHO1_MIN, RHO1_MAX] {
        if (rho1 - end).abs() < 10.0 * RHO1_TOLERANCE {
            at_boundary = true;
            let at_end = f(end);
            if at_end <= rss {
                rho1 = end;
                rss = at_end;
            }
        }
    }
    Ok(BrFit {
        rho1,
        rss,
        fit_l_min: l_min,
        fit_l_max: l_max,
        n_points: points.len(),
        weighted,
        at_boundary,
    })
}
