//! Figure and table pipelines built from the library modules.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use primechaos::ensembles::{self, EnsembleKind};
use primechaos::fitting::{self, BrFit};
use primechaos::numfmt::sig17;
use primechaos::sieve::{Checkpoints, PrimeSequence, Sieve};
use primechaos::spectral::{self, SpacingHistogram, Statistic, StatisticCurve};
use primechaos::unfold::{self, UnfoldMethod, UnfoldedSequence};
use serde::Serialize;

use crate::config::Settings;
use crate::error::CliError;

/// Primes taken after the k-th prime in the large-index rows and panels.
pub const LARGE_INDEX_COUNT: u64 = 1_000_000;

/// Largest starting index run without an explicit long-run flag or checkpoint.
pub const DESK_SCALE_K: u64 = 100_000_000;

/// Index after which the d panels start.
pub const PANEL_D_K: u64 = 1_000_000_000_000;

/// A prime subsequence request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    First(u64),
    After { k: u64, count: u64 },
    Upto(u64),
}

impl Selection {
    pub fn generate(
        self,
        settings: &Settings,
        checkpoints: Option<&Checkpoints>,
    ) -> Result<PrimeSequence, CliError> {
        let sieve = Sieve::new(settings.sieve_config());
        Ok(match self {
            Selection::First(n) => sieve.first_n_primes(n)?,
            Selection::After { k, count } => sieve.primes_after_index(k, count, checkpoints)?,
            Selection::Upto(x) => sieve.primes_upto(x)?,
        })
    }
}

/// R-unfolded primes, as used by every figure.
pub fn unfolded_primes(
    selection: Selection,
    alternate: bool,
    settings: &Settings,
    checkpoints: Option<&Checkpoints>,
) -> Result<UnfoldedSequence, CliError> {
    let mut primes = selection.generate(settings, checkpoints)?;
    if alternate {
        primes = primes.alternate();
    }
    Ok(unfold::unfold(&primes, UnfoldMethod::RiemannR)?)
}

/// Σ² of `useq` on the configured L grid.
pub fn sigma2_curve(
    useq: &UnfoldedSequence,
    settings: &Settings,
) -> Result<StatisticCurve, CliError> {
    Ok(spectral::number_variance(
        useq,
        &settings.l_grid(),
        settings.window_step,
    )?)
}

pub fn fit_curve(curve: &StatisticCurve, settings: &Settings) -> Result<BrFit, CliError> {
    Ok(fitting::fit_rho1(
        curve,
        settings.fit_l_min,
        settings.fit_l_max,
    )?)
}

/// `s,density` of a reference spacing density from 0 to `s_max`.
pub fn pdf_csv(kind: EnsembleKind, settings: &Settings) -> Result<String, CliError> {
    let mut out = String::from("s,density\n");
    let n = (settings.s_max / settings.pdf_step).round() as usize;
    for i in 0..=n {
        let s = i as f64 * settings.pdf_step;
        let _ = writeln!(
            out,
            "{},{}",
            sig17(s),
            sig17(ensembles::spacing_pdf(kind, s)?)
        );
    }
    Ok(out)
}

/// Reference values of `stat` on `grid`, as `L,value,stderr`.
///
/// Skewness and excess references exist only on the tabulated range; grid
/// points outside it are left out.
pub fn reference_curve(
    kind: EnsembleKind,
    stat: Statistic,
    grid: &[f64],
) -> Result<StatisticCurve, CliError> {
    let mut points = Vec::with_capacity(grid.len());
    for &l in grid {
        match stat {
            Statistic::Sigma2 => points.push((l, ensembles::sigma2_theory(kind, l)?, 0.0)),
            Statistic::Gamma1 | Statistic::Gamma2 => {
                let order = if stat == Statistic::Gamma1 { 1 } else { 2 };
                match ensembles::gamma_theory(kind, l, order) {
                    Ok(e) => points.push((l, e.value, e.stderr)),
                    Err(primechaos::Error::Domain { .. }) => continue,
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    if points.is_empty() {
        return Err(CliError::Usage(format!(
            "no {} reference values for {kind} on the requested L grid",
            stat.name()
        )));
    }
    let curve_points = points
        .into_iter()
        .map(|(l, value, stderr)| spectral::CurvePoint { l, value, stderr })
        .collect();
    Ok(StatisticCurve::new(stat, curve_points, 0.0, 0)?)
}

/// Figure identifier: panels `1a`..`5d` or figure `6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Panel { figure: u8, panel: char },
    Saturation,
}

impl FromStr for FigureId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim().to_ascii_lowercase();
        if s == "6" {
            return Ok(FigureId::Saturation);
        }
        let mut chars = s.chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(f @ '1'..='5'), Some(p @ 'a'..='d'), None) => Ok(FigureId::Panel {
                figure: f as u8 - b'0',
                panel: p,
            }),
            _ => Err(CliError::Usage(format!(
                "unknown figure {s:?}; expected 1a-5d or 6"
            ))),
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FigureId::Panel { figure, panel } => write!(f, "{figure}{panel}"),
            FigureId::Saturation => f.write_str("6"),
        }
    }
}

impl FigureId {
    /// Panels that start after the 10^12-th prime.
    pub fn is_long_run(self) -> bool {
        matches!(
            self,
            FigureId::Panel {
                figure: 1..=4,
                panel: 'd'
            }
        )
    }
}

/// Gate for computations beyond desk scale.
#[derive(Debug, Clone, Default)]
pub struct LongRun<'a> {
    pub allowed: bool,
    pub checkpoints: Option<&'a Checkpoints>,
}

impl LongRun<'_> {
    fn permits(&self) -> bool {
        self.allowed || self.checkpoints.is_some()
    }
}

fn panel_selection(panel: char) -> Selection {
    match panel {
        'a' => Selection::First(100),
        'b' => Selection::First(10_000),
        'c' => Selection::First(1_000_000),
        _ => Selection::After {
            k: PANEL_D_K,
            count: LARGE_INDEX_COUNT,
        },
    }
}

/// Named CSV bodies (without provenance) for one figure.
pub fn run_figure(
    id: FigureId,
    settings: &Settings,
    long_run: &LongRun,
) -> Result<Vec<(String, String)>, CliError> {
    if id.is_long_run() && !long_run.permits() {
        return Err(CliError::Usage(format!(
            "figure {id} starts after the 10^12-th prime and runs far beyond desk scale; \
             pass --checkpoint <file> (see `primechaos checkpoint`) or --allow-long-run"
        )));
    }
    let name = |series: &str| format!("fig{id}_{series}.csv");
    let mut files = Vec::new();
    match id {
        FigureId::Panel { figure: 5, panel } => {
            let useq = unfold::rescale_unit_mean(&unfolded_primes(
                Selection::First(100),
                true,
                settings,
                None,
            )?)?;
            let gse = EnsembleKind::Gse;
            match panel {
                'a' => {
                    let hist = spectral::nnsd(&useq, settings.bin_width, settings.s_max)?;
                    files.push((name("nnsd"), hist.to_csv()));
                    files.push((name("gse"), pdf_csv(gse, settings)?));
                }
                _ => {
                    let stat = match panel {
                        'b' => Statistic::Sigma2,
                        'c' => Statistic::Gamma1,
                        _ => Statistic::Gamma2,
                    };
                    let grid = settings.l_grid();
                    let curve =
                        spectral::statistic_curve(&useq, stat, &grid, settings.window_step)?;
                    files.push((name(&stat.name().to_ascii_lowercase()), curve.to_csv()));
                    files.push((name("gse"), reference_curve(gse, stat, &grid)?.to_csv()));
                }
            }
        }
        FigureId::Panel { figure, panel } => {
            let useq = unfolded_primes(
                panel_selection(panel),
                false,
                settings,
                long_run.checkpoints,
            )?;
            let grid = settings.l_grid();
            match figure {
                1 => {
                    let hist = spectral::nnsd(&useq, settings.bin_width, settings.s_max)?;
                    let fit = fit_curve(&sigma2_curve(&useq, settings)?, settings)?;
                    files.push((name("nnsd"), hist.to_csv()));
                    files.push((name("poisson"), pdf_csv(EnsembleKind::Poisson, settings)?));
                    files.push((name("goe"), pdf_csv(EnsembleKind::Goe, settings)?));
                    files.push((
                        name("berry_robnik"),
                        pdf_csv(EnsembleKind::berry_robnik(fit.rho1)?, settings)?,
                    ));
                }
                2 => {
                    let curve = sigma2_curve(&useq, settings)?;
                    let fit = fit_curve(&curve, settings)?;
                    files.push((name("sigma2"), curve.to_csv()));
                    let kinds = [
                        ("poisson", EnsembleKind::Poisson),
                        ("goe", EnsembleKind::Goe),
                        ("gue", EnsembleKind::Gue),
                        ("berry_robnik", EnsembleKind::berry_robnik(fit.rho1)?),
                    ];
                    for (series, kind) in kinds {
                        let refc = reference_curve(kind, Statistic::Sigma2, &grid)?;
                        files.push((name(series), refc.to_csv()));
                    }
                }
                _ => {
                    let stat = if figure == 3 {
                        Statistic::Gamma1
                    } else {
                        Statistic::Gamma2
                    };
                    let curve =
                        spectral::statistic_curve(&useq, stat, &grid, settings.window_step)?;
                    files.push((name(&stat.name().to_ascii_lowercase()), curve.to_csv()));
                    let kinds = [
                        ("poisson", EnsembleKind::Poisson),
                        ("goe", EnsembleKind::Goe),
                        ("gue", EnsembleKind::Gue),
                    ];
                    for (series, kind) in kinds {
                        files.push((name(series), reference_curve(kind, stat, &grid)?.to_csv()));
                    }
                }
            }
        }
        FigureId::Saturation => {
            let mut summary = String::from("sequence,l_saturation,plateau_value\n");
            let halves = [
                ("primes_1_10000", Selection::First(10_000)),
                (
                    "primes_10001_20000",
                    Selection::After {
                        k: 10_000,
                        count: 10_000,
                    },
                ),
            ];
            for (label, selection) in halves {
                let useq = unfolded_primes(selection, false, settings, None)?;
                let (curve, plateau) = spectral::saturation_scan(
                    &useq,
                    settings.saturation_l_max,
                    settings.saturation_points,
                    settings.window_step,
                )?;
                files.push((name(&format!("sigma2_{label}")), curve.to_csv()));
                let (l, v) =
                    plateau.map_or((f64::NAN, f64::NAN), |p| (p.l_saturation, p.plateau_value));
                let _ = writeln!(summary, "{label},{},{}", sig17(l), sig17(v));
            }
            files.push((name("saturation"), summary));
        }
    }
    Ok(files)
}

/// Histogram, the form the `stats --nnsd` stage writes.
pub fn nnsd(useq: &UnfoldedSequence, settings: &Settings) -> Result<SpacingHistogram, CliError> {
    Ok(spectral::nnsd(useq, settings.bin_width, settings.s_max)?)
}

/// Printed ρ₁ values for the rows that have one.
pub const PUBLISHED_RHO1: [(TableRow, f64); 11] = [
    (TableRow::First(100), -0.00181),
    (TableRow::First(1_000), 0.239504),
    (TableRow::First(10_000), 0.328879),
    (TableRow::First(100_000), 0.430437),
    (TableRow::First(1_000_000), 0.489928),
    (TableRow::After(10_000_000), 0.555921),
    (TableRow::After(100_000_000), 0.585383),
    (TableRow::After(1_000_000_000), 0.61471),
    (TableRow::After(10_000_000_000), 0.633034),
    (TableRow::After(100_000_000_000), 0.652538),
    (TableRow::After(1_000_000_000_000), 0.668721),
];

/// A row of the ρ₁ table: the first `n` primes, or the
/// [`LARGE_INDEX_COUNT`] primes after the `k`-th.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableRow {
    First(u64),
    After(u64),
}

impl TableRow {
    pub fn label(self) -> String {
        match self {
            TableRow::First(n) => format!("n={}", power_label(n)),
            TableRow::After(k) => format!("k={}", power_label(k)),
        }
    }

    pub fn published(self) -> Option<f64> {
        PUBLISHED_RHO1
            .iter()
            .find(|(r, _)| *r == self)
            .map(|(_, v)| *v)
    }

    fn selection(self) -> Selection {
        match self {
            TableRow::First(n) => Selection::First(n),
            TableRow::After(k) => Selection::After {
                k,
                count: LARGE_INDEX_COUNT,
            },
        }
    }

    fn is_long_run(self) -> bool {
        matches!(self, TableRow::After(k) if k > DESK_SCALE_K)
    }
}

fn power_label(n: u64) -> String {
    let mut p = 0;
    let mut m = n;
    while m >= 10 && m.is_multiple_of(10) {
        m /= 10;
        p += 1;
    }
    if m == 1 && p > 0 {
        format!("1e{p}")
    } else {
        n.to_string()
    }
}

/// Parses a comma-separated row specifier.
///
/// Tokens: `left` (n = 1e2..1e6), `right` (k = 1e7..1e12), `desk` (left plus
/// k = 1e7, 1e8), `all`, or single rows such as `n=1e4` and `k=1e7`.
pub fn parse_rows(spec: &str) -> Result<Vec<TableRow>, CliError> {
    let mut rows: Vec<TableRow> = Vec::new();
    let mut push = |r: TableRow| {
        if !rows.contains(&r) {
            rows.push(r);
        }
    };
    let left = || {
        PUBLISHED_RHO1
            .iter()
            .map(|(r, _)| *r)
            .filter(|r| matches!(r, TableRow::First(_)))
    };
    let right = || {
        PUBLISHED_RHO1
            .iter()
            .map(|(r, _)| *r)
            .filter(|r| matches!(r, TableRow::After(_)))
    };
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match token.to_ascii_lowercase().as_str() {
            "left" => left().for_each(&mut push),
            "right" => right().for_each(&mut push),
            "desk" => left()
                .chain(right().filter(|r| !r.is_long_run()))
                .for_each(&mut push),
            "all" => left().chain(right()).for_each(&mut push),
            t => {
                let (key, value) = t
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("bad row {token:?}")))?;
                let v = parse_count(value)
                    .ok_or_else(|| CliError::Usage(format!("bad row size in {token:?}")))?;
                match key.trim() {
                    "n" if v >= 2 => push(TableRow::First(v)),
                    "k" if v >= 1 => push(TableRow::After(v)),
                    _ => return Err(CliError::Usage(format!("bad row {token:?}"))),
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Usage(
            "empty row specifier; use e.g. `left`, `desk` or `n=1e2,k=1e7`".into(),
        ));
    }
    Ok(rows)
}

/// Integer from `1000`, `1e3` or `10^3`.
fn parse_count(s: &str) -> Option<u64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Some(v);
    }
    let (mantissa, exp) = s
        .split_once('e')
        .or_else(|| s.split_once("10^").map(|(_, e)| ("1", e)))?;
    let mantissa: u64 = mantissa.parse().ok()?;
    let exp: u32 = exp.parse().ok()?;
    10u64.checked_pow(exp)?.checked_mul(mantissa)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableEntry {
    pub sequence_label: String,
    pub rho1: f64,
    pub rss: f64,
    pub published_rho1: Option<f64>,
    pub n_points: usize,
    pub at_boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableOutcome {
    pub entries: Vec<TableEntry>,
    /// Rows skipped for lack of a long-run flag or checkpoint.
    pub skipped: Vec<String>,
}

pub fn run_table(
    rows: &[TableRow],
    settings: &Settings,
    long_run: &LongRun,
) -> Result<TableOutcome, CliError> {
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for &row in rows {
        if row.is_long_run() && !long_run.permits() {
            skipped.push(row.label());
            continue;
        }
        let useq = unfolded_primes(row.selection(), false, settings, long_run.checkpoints)?;
        let fit = fit_curve(&sigma2_curve(&useq, settings)?, settings)?;
        entries.push(TableEntry {
            sequence_label: row.label(),
            rho1: fit.rho1,
            rss: fit.rss,
            published_rho1: row.published(),
            n_points: fit.n_points,
            at_boundary: fit.at_boundary,
        });
    }
    Ok(TableOutcome { entries, skipped })
}

/// Loads a checkpoint file, naming it in errors.
pub fn load_checkpoints(path: &Path) -> Result<Checkpoints, CliError> {
    Checkpoints::load(path).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}
