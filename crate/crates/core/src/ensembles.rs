//! Reference statistics: spacing distributions and number-variance curves of
//! the Poisson and Gaussian random-matrix ensembles, and their Berry-Robnik
//! mixture.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::numeric::interp::cubic_uniform;
use crate::numeric::quad::{gauss_kronrod15, integrate, Tolerance};
use crate::numeric::special::{erfc, sine_integral};
use crate::spectral::{SpacingHistogram, Statistic};

pub const RHO1_MIN: f64 = -0.2;
pub const RHO1_MAX: f64 = 1.2;

/// Σ² tables cover `[0, SIGMA2_TABLE_MAX]` at spacing `SIGMA2_TABLE_STEP`.
pub const SIGMA2_TABLE_STEP: f64 = 0.05;
pub const SIGMA2_TABLE_MAX: f64 = 40.0;

const GAMMA_REFERENCE: &str = include_str!("../data/gamma_reference.csv");

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnsembleKind {
    Poisson,
    Goe,
    Gue,
    Gse,
    /// Poisson fraction `rho1` superposed on one GOE sequence.
    BerryRobnik {
        rho1: f64,
    },
}

impl EnsembleKind {
    pub const PURE: [EnsembleKind; 4] = [
        EnsembleKind::Poisson,
        EnsembleKind::Goe,
        EnsembleKind::Gue,
        EnsembleKind::Gse,
    ];

    pub fn berry_robnik(rho1: f64) -> Result<Self> {
        let kind = EnsembleKind::BerryRobnik { rho1 };
        kind.validate()?;
        Ok(kind)
    }

    pub fn validate(self) -> Result<()> {
        match self {
            EnsembleKind::BerryRobnik { rho1 } if !(RHO1_MIN..=RHO1_MAX).contains(&rho1) => {
                Err(Error::domain(
                    "ensemble",
                    format!("rho1 = {rho1} outside [{RHO1_MIN}, {RHO1_MAX}]"),
                ))
            }
            _ => Ok(()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::Poisson => "POISSON",
            EnsembleKind::Goe => "GOE",
            EnsembleKind::Gue => "GUE",
            EnsembleKind::Gse => "GSE",
            EnsembleKind::BerryRobnik { .. } => "BERRY_ROBNIK",
        }
    }

    /// Dyson index of the Gaussian ensembles.
    pub fn beta(self) -> Option<u32> {
        match self {
            EnsembleKind::Goe => Some(1),
            EnsembleKind::Gue => Some(2),
            EnsembleKind::Gse => Some(4),
            _ => None,
        }
    }

    fn table_index(self) -> Option<usize> {
        match self {
            EnsembleKind::Goe => Some(0),
            EnsembleKind::Gue => Some(1),
            EnsembleKind::Gse => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleKind::BerryRobnik { rho1 } => write!(f, "BERRY_ROBNIK(rho1={rho1})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    /// Accepts `poisson`, `goe`, `gue`, `gse` and `br:<rho1>` (also
    /// `berry_robnik:<rho1>`), case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "poisson" => return Ok(EnsembleKind::Poisson),
            "goe" => return Ok(EnsembleKind::Goe),
            "gue" => return Ok(EnsembleKind::Gue),
            "gse" => return Ok(EnsembleKind::Gse),
            _ => {}
        }
        if let Some((tag, value)) = lower.split_once([':', '=']) {
            if tag == "br" || tag == "berry_robnik" {
                let rho1 = value
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::domain("ensemble", format!("bad rho1 value {value:?}")))?;
                return EnsembleKind::berry_robnik(rho1);
            }
        }
        Err(Error::domain("ensemble", format!("unknown ensemble {s:?}")))
    }
}

/// Probability density of nearest-neighbour spacings at unit mean spacing.
///
/// The Gaussian ensembles use their Wigner surmises.
pub fn spacing_pdf(kind: EnsembleKind, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain(
            "spacing pdf",
            format!("spacing {s} must be >= 0"),
        ));
    }
    kind.validate()?;
    Ok(match kind {
        EnsembleKind::Poisson => (-s).exp(),
        EnsembleKind::Goe => PI * s / 2.0 * (-PI * s * s / 4.0).exp(),
        EnsembleKind::Gue => 32.0 / (PI * PI) * s * s * (-4.0 * s * s / PI).exp(),
        EnsembleKind::Gse => {
            let c = 2f64.powi(18) / (3f64.powi(6) * PI.powi(3));
            c * s.powi(4) * (-64.0 * s * s / (9.0 * PI)).exp()
        }
        EnsembleKind::BerryRobnik { rho1 } => {
            let rb = 1.0 - rho1;
            rho1 * rho1 * (-rho1 * s).exp() * erfc(PI.sqrt() * rb * s / 2.0)
                + (2.0 * rho1 * rb + PI * rb.powi(3) * s / 2.0)
                    * (-rho1 * s - PI * rb * rb * s * s / 4.0).exp()
        }
    })
}

/// Probability of a spacing in `[a, b]`.
pub fn spacing_probability(kind: EnsembleKind, a: f64, b: f64) -> Result<f64> {
    spacing_pdf(kind, a.min(b))?;
    spacing_pdf(kind, a.max(b))?;
    integrate(
        |s| spacing_pdf(kind, s).unwrap_or(0.0),
        a,
        b,
        Tolerance::relative(1e-10).with_abs(1e-15),
    )
}

/// `Σ (o_i − e_i)² / e_i` over histogram bins, with observed and expected bin
/// probabilities `o_i` and `e_i`.
pub fn chi_square_distance(hist: &SpacingHistogram, kind: EnsembleKind) -> Result<f64> {
    let mut total = 0.0;
    for (left, right, density) in hist.bins() {
        let expected = spacing_probability(kind, left, right)?;
        let observed = density * (right - left);
        if expected > 0.0 {
            total += (observed - expected).powi(2) / expected;
        } else if observed > 0.0 {
            return Ok(f64::INFINITY);
        }
    }
    Ok(total)
}

/// `sin(πr) / (πr)` and its derivative with respect to `r`.
fn sinc_pi(r: f64) -> (f64, f64) {
    let x = PI * r;
    if x.abs() < 1e-3 {
        let x2 = x * x;
        (
            1.0 - x2 / 6.0 + x2 * x2 / 120.0,
            PI * (-x / 3.0 + x * x2 / 30.0),
        )
    } else {
        let (sin, cos) = x.sin_cos();
        (sin / x, PI * (x * cos - sin) / (x * x))
    }
}

/// Two-level cluster function `Y₂(r)`.
pub fn cluster_y2(kind: EnsembleKind, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::domain(
            "cluster function",
            format!("r = {r} must be >= 0"),
        ));
    }
    Ok(match kind {
        EnsembleKind::Poisson => 0.0,
        EnsembleKind::Gue => sinc_pi(r).0.powi(2),
        EnsembleKind::Goe => {
            let (s, ds) = sinc_pi(r);
            // ∫_r^∞ sin(πt)/(πt) dt
            let tail = 0.5 - sine_integral(PI * r) / PI;
            s * s + ds * tail
        }
        EnsembleKind::Gse => {
            let (s, ds) = sinc_pi(2.0 * r);
            // d/dr s(2r) = 2 s'(2r);  ∫_0^r s(2t) dt = Si(2πr) / (2π)
            s * s - 2.0 * ds * sine_integral(2.0 * PI * r) / (2.0 * PI)
        }
        EnsembleKind::BerryRobnik { .. } => {
            return Err(Error::domain(
                "cluster function",
                "defined for POISSON, GOE, GUE and GSE only",
            ))
        }
    })
}

struct Sigma2Table {
    nodes: Vec<f64>,
}

fn sigma2_tables() -> &'static [Sigma2Table; 3] {
    static TABLES: OnceLock<[Sigma2Table; 3]> = OnceLock::new();
    TABLES.get_or_init(|| {
        [EnsembleKind::Goe, EnsembleKind::Gue, EnsembleKind::Gse].map(build_sigma2_table)
    })
}

/// Σ²(L) = L − 2(L·A(L) − B(L)) with A = ∫Y₂ and B = ∫rY₂ accumulated panel
/// by panel.
fn build_sigma2_table(kind: EnsembleKind) -> Sigma2Table {
    let n = (SIGMA2_TABLE_MAX / SIGMA2_TABLE_STEP).round() as usize;
    let y = |r: f64| cluster_y2(kind, r).expect("pure ensemble");
    let ry = |r: f64| r * y(r);
    let mut nodes = Vec::with_capacity(n + 1);
    nodes.push(0.0);
    let (mut a, mut b) = (0.0, 0.0);
    for i in 0..n {
        let lo = i as f64 * SIGMA2_TABLE_STEP;
        let hi = (i + 1) as f64 * SIGMA2_TABLE_STEP;
        a += gauss_kronrod15(&y, lo, hi).0;
        b += gauss_kronrod15(&ry, lo, hi).0;
        nodes.push(hi - 2.0 * (hi * a - b));
    }
    Sigma2Table { nodes }
}

fn sigma2_direct(kind: EnsembleKind, l: f64) -> Result<f64> {
    let tol = Tolerance {
        abs: 1e-12,
        rel: 0.0,
        max_panels: 200_000,
    };
    let integral = integrate(
        |r| (l - r) * cluster_y2(kind, r).expect("pure ensemble"),
        0.0,
        l,
        tol,
    )?;
    Ok(l - 2.0 * integral)
}

/// Number variance `Σ²(L) = L − 2∫₀ᴸ (L − r) Y₂(r) dr`.
///
/// Cached on a 0.05 grid up to L = 40 with cubic interpolation; longer
/// windows are integrated directly. Berry-Robnik kinds delegate to
/// [`sigma2_br`].
pub fn sigma2_theory(kind: EnsembleKind, l: f64) -> Result<f64> {
    if !(l >= 0.0) || !l.is_finite() {
        return Err(Error::domain(
            "sigma2 theory",
            format!("L = {l} must be >= 0"),
        ));
    }
    match kind {
        EnsembleKind::Poisson => Ok(l),
        EnsembleKind::BerryRobnik { rho1 } => {
            kind.validate()?;
            sigma2_br(l, rho1)
        }
        _ if l <= SIGMA2_TABLE_MAX => {
            let table = &sigma2_tables()[kind.table_index().expect("gaussian ensemble")];
            Ok(cubic_uniform(&table.nodes, 0.0, SIGMA2_TABLE_STEP, l).max(0.0))
        }
        _ => sigma2_direct(kind, l),
    }
}

/// Berry-Robnik number variance `ρ₁L + Σ²_GOE(max(0, (1 − ρ₁)L))`.
///
/// The Poisson term is linear, so it extends to negative `ρ₁`.
pub fn sigma2_br(l: f64, rho1: f64) -> Result<f64> {
    if !rho1.is_finite() {
        return Err(Error::domain("sigma2 br", format!("rho1 = {rho1}")));
    }
    let goe_l = ((1.0 - rho1) * l).max(0.0);
    Ok(rho1 * l + sigma2_theory(EnsembleKind::Goe, goe_l)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct GammaRow {
    l: f64,
    value: f64,
    stderr: f64,
}

/// Rows per `[GOE, GUE, GSE] x [GAMMA1, GAMMA2]`.
type GammaTable = [[Vec<GammaRow>; 2]; 3];

/// Parses a reference table with columns `kind,statistic,L,value,stderr`.
fn parse_gamma_table(text: &str) -> Result<GammaTable> {
    let mut table: GammaTable = Default::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("kind,") {
            continue;
        }
        let bad = |message: String| Error::Parse {
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [kind, stat, l, value, stderr] = fields.as_slice() else {
            return Err(bad(format!("expected 5 fields, found {}", fields.len())));
        };
        let k = kind
            .parse::<EnsembleKind>()
            .ok()
            .and_then(EnsembleKind::table_index)
            .ok_or_else(|| bad(format!("unexpected ensemble {kind:?}")))?;
        let s = match stat.parse::<Statistic>() {
            Ok(Statistic::Gamma1) => 0,
            Ok(Statistic::Gamma2) => 1,
            _ => return Err(bad(format!("unexpected statistic {stat:?}"))),
        };
        let num = |x: &str| {
            x.parse::<f64>()
                .map_err(|_| bad(format!("bad number {x:?}")))
        };
        table[k][s].push(GammaRow {
            l: num(l)?,
            value: num(value)?,
            stderr: num(stderr)?,
        });
    }
    for rows in table.iter_mut().flatten() {
        rows.sort_by(|a, b| a.l.total_cmp(&b.l));
    }
    Ok(table)
}

fn gamma_table() -> Result<&'static GammaTable> {
    static TABLE: OnceLock<std::result::Result<GammaTable, String>> = OnceLock::new();
    TABLE
        .get_or_init(|| parse_gamma_table(GAMMA_REFERENCE).map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Error::Integrity(format!("gamma reference table: {e}")))
}

/// Skewness (`order` 1) or excess (`order` 2) of window counts.
///
/// Poisson values are exact. Gaussian ensembles are interpolated linearly in
/// the shipped Monte Carlo table and carry its standard error; windows outside
/// the tabulated range are a domain error.
pub fn gamma_theory(kind: EnsembleKind, l: f64, order: u8) -> Result<Estimate> {
    if !(l > 0.0) {
        return Err(Error::domain(
            "gamma theory",
            format!("L = {l} must be > 0"),
        ));
    }
    let s = match order {
        1 => 0,
        2 => 1,
        _ => {
            return Err(Error::domain(
                "gamma theory",
                format!("order {order} not in {{1, 2}}"),
            ))
        }
    };
    if kind == EnsembleKind::Poisson {
        let value = if order == 1 { l.powf(-0.5) } else { 1.0 / l };
        return Ok(Estimate { value, stderr: 0.0 });
    }
    let Some(k) = kind.table_index() else {
        return Err(Error::domain(
            "gamma theory",
            format!("no reference curve for {kind}"),
        ));
    };
    let rows = &gamma_table()?[k][s];
    let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
        return Err(Error::Integrity(format!(
            "gamma reference table has no {} rows for {kind}",
            if order == 1 { "GAMMA1" } else { "GAMMA2" }
        )));
    };
    if l < first.l - 1e-12 || l > last.l + 1e-12 {
        return Err(Error::domain(
            "gamma theory",
            format!("L = {l} outside tabulated range [{}, {}]", first.l, last.l),
        ));
    }
    let hi = rows.partition_point(|r| r.l < l).min(rows.len() - 1);
    if hi == 0 || (rows[hi].l - l).abs() < 1e-12 {
        let r = rows[hi];
        return Ok(Estimate {
            value: r.value,
            stderr: r.stderr,
        });
    }
    let (a, b) = (rows[hi - 1], rows[hi]);
    let t = (l - a.l) / (b.l - a.l);
    Ok(Estimate {
        value: a.value + t * (b.value - a.value),
        stderr: a.stderr.max(b.stderr),
    })
}
