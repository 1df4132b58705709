//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release -p primechaos-cli --test acceptance`.
//! Criteria listed in `DOCUMENTED_FAILURES` are reported as FAIL but do not
//! fail the run; any other failure does.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use primechaos::ensembles::{self, EnsembleKind};
use primechaos::fitting;
use primechaos::rmt_mc::{self, McConfig};
use primechaos::spectral::{self, linear_grid, Statistic, StatisticCurve};
use primechaos::unfold::{self, UnfoldMethod};
use primechaos_cli::config::Settings;
use primechaos_cli::pipelines::{self, FigureId, LongRun, Selection};

const RHO1_TOLERANCE: f64 = 0.05;
const ROBUSTNESS_TOLERANCE: f64 = 0.05;
const MODE_WINDOW: (f64, f64) = (0.6, 1.0);
const FIRST_BIN_MAX_DENSITY: f64 = 0.2;
const PDF_MOMENT_TOLERANCE: f64 = 1e-8;
const REDUCTION_TOLERANCE: f64 = 1e-12;
const GUE_ASYMPTOTIC_TOLERANCE: f64 = 1e-2;
const KS_MAX: f64 = 0.01;
const KS_DRAWS: usize = 100_000;
const MC_SIGMAS: f64 = 3.0;
const ROUND_TRIP_TOLERANCE: f64 = 1e-4;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// The first-100 histogram peaks in [0.3, 0.4) at bin width 0.1.
const DOCUMENTED_FAILURES: [u32; 1] = [3];

struct Check {
    pass: bool,
    detail: String,
}

impl Check {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Check {
            pass,
            detail: detail.into(),
        }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Check::new(false, format!("error: {e}"))
    }
}

type Outcome = Result<Check, Box<dyn std::error::Error>>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn table_rows(spec: &str) -> Result<Vec<pipelines::TableEntry>, Box<dyn std::error::Error>> {
    let rows = pipelines::parse_rows(spec)?;
    let out = pipelines::run_table(&rows, &Settings::default(), &LongRun::default())?;
    if !out.skipped.is_empty() {
        return Err(format!("rows skipped: {:?}", out.skipped).into());
    }
    Ok(out.entries)
}

fn describe(entries: &[pipelines::TableEntry]) -> String {
    entries
        .iter()
        .map(|e| {
            format!(
                "{} {:.6} (published {})",
                e.sequence_label,
                e.rho1,
                e.published_rho1.unwrap_or(f64::NAN)
            )
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn matches_published_and_increases(entries: &[pipelines::TableEntry]) -> bool {
    let close = entries.iter().all(|e| {
        e.published_rho1
            .is_some_and(|p| (e.rho1 - p).abs() <= RHO1_TOLERANCE)
    });
    let increasing = entries.windows(2).all(|w| w[1].rho1 > w[0].rho1);
    close && increasing
}

fn table_left_columns() -> Outcome {
    let entries = table_rows("left")?;
    Ok(Check::new(
        entries.len() == 5 && matches_published_and_increases(&entries),
        describe(&entries),
    ))
}

fn table_right_columns() -> Outcome {
    let entries = table_rows("k=1e7,k=1e8")?;
    Ok(Check::new(
        entries.len() == 2 && matches_published_and_increases(&entries),
        describe(&entries),
    ))
}

fn first_hundred_level_repulsion() -> Outcome {
    let settings = Settings::default();
    let useq = pipelines::unfolded_primes(Selection::First(100), false, &settings, None)?;
    let hist = pipelines::nnsd(&useq, &settings)?;
    let mode = hist.mode_bin();
    let (lo, hi) = (
        mode as f64 * hist.bin_width(),
        (mode + 1) as f64 * hist.bin_width(),
    );
    let first = hist.densities()[0];
    let mode_ok = lo >= MODE_WINDOW.0 - 1e-9 && hi <= MODE_WINDOW.1 + 1e-9;
    let first_ok = first < FIRST_BIN_MAX_DENSITY;
    Ok(Check::new(
        mode_ok && first_ok,
        format!(
            "mode bin [{lo:.1}, {hi:.1}) {}, first-bin density {first} {}",
            if mode_ok { "ok" } else { "outside [0.6, 1.0]" },
            if first_ok { "ok" } else { "too high" },
        ),
    ))
}

fn chi_square_trend() -> Outcome {
    let settings = Settings::default();
    let mut chi = Vec::new();
    for n in [100, 10_000, 1_000_000] {
        let useq = pipelines::unfolded_primes(Selection::First(n), false, &settings, None)?;
        let hist = pipelines::nnsd(&useq, &settings)?;
        chi.push(ensembles::chi_square_distance(
            &hist,
            EnsembleKind::Poisson,
        )?);
    }
    Ok(Check::new(
        chi.windows(2).all(|w| w[1] < w[0]),
        format!("chi2 to Poisson for n = 1e2, 1e4, 1e6: {chi:.5?}"),
    ))
}

fn rss(curve: &StatisticCurve, l_max: f64, kind: EnsembleKind) -> Result<f64, primechaos::Error> {
    let mut sum = 0.0;
    for p in curve.points().iter().filter(|p| p.l <= l_max) {
        sum += (p.value - ensembles::sigma2_theory(kind, p.l)?).powi(2);
    }
    Ok(sum)
}

/// Names the kind with the smallest RSS and whether it is `expected`.
fn closest(
    curve: &StatisticCurve,
    l_max: f64,
    kinds: &[EnsembleKind],
    expected: EnsembleKind,
) -> Outcome {
    let mut scores = Vec::new();
    for &k in kinds {
        scores.push((k, rss(curve, l_max, k)?));
    }
    let best = scores
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|s| s.0)
        .expect("kinds");
    let detail = scores
        .iter()
        .map(|(k, r)| format!("{k} {r:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Check::new(best == expected, format!("RSS: {detail}")))
}

fn first_hundred_number_variance() -> Outcome {
    let settings = Settings::default();
    let useq = pipelines::unfolded_primes(Selection::First(100), false, &settings, None)?;
    let curve = pipelines::sigma2_curve(&useq, &settings)?;
    closest(
        &curve,
        5.0,
        &[EnsembleKind::Goe, EnsembleKind::Poisson, EnsembleKind::Gue],
        EnsembleKind::Goe,
    )
}

fn alternate_primes_follow_gse() -> Outcome {
    let settings = Settings::default();
    let useq = unfold::rescale_unit_mean(&pipelines::unfolded_primes(
        Selection::First(100),
        true,
        &settings,
        None,
    )?)?;
    if useq.len() != 50 || useq.values()[0] != 0.0 {
        return Ok(Check::new(
            false,
            format!("unexpected sequence of {} values", useq.len()),
        ));
    }
    let curve = pipelines::sigma2_curve(&useq, &settings)?;
    closest(
        &curve,
        3.0,
        &[
            EnsembleKind::Gse,
            EnsembleKind::Goe,
            EnsembleKind::Gue,
            EnsembleKind::Poisson,
        ],
        EnsembleKind::Gse,
    )
}

fn saturation_moves_out() -> Outcome {
    let files = pipelines::run_figure(
        FigureId::Saturation,
        &Settings::default(),
        &LongRun::default(),
    )?;
    let (_, summary) = files
        .iter()
        .find(|(name, _)| name == "fig6_saturation.csv")
        .ok_or("no saturation summary")?;
    let l: Vec<f64> = summary
        .lines()
        .skip(1)
        .map(|line| {
            line.split(',')
                .nth(1)
                .and_then(|v| v.parse().ok())
                .unwrap_or(f64::NAN)
        })
        .collect();
    let pass = l.len() == 2 && l.iter().all(|v| v.is_finite()) && l[1] > l[0];
    Ok(Check::new(
        pass,
        format!(
            "L_saturation 1-10000: {:.1}, 10001-20000: {:.1}",
            l[0], l[1]
        ),
    ))
}

fn unfolding_robustness() -> Outcome {
    let settings = Settings::default();
    let primes = Selection::First(1_000_000).generate(&settings, None)?;
    let mut fits = Vec::new();
    for method in [
        UnfoldMethod::XOverLogX,
        UnfoldMethod::Li,
        UnfoldMethod::RiemannR,
    ] {
        let useq = unfold::unfold(&primes, method)?;
        fits.push((
            method,
            pipelines::fit_curve(&pipelines::sigma2_curve(&useq, &settings)?, &settings)?.rho1,
        ));
    }
    let spread = fits.iter().map(|f| f.1).fold(f64::NEG_INFINITY, f64::max)
        - fits.iter().map(|f| f.1).fold(f64::INFINITY, f64::min);
    let detail = fits
        .iter()
        .map(|(m, r)| format!("{m} {r:.6}"))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Check::new(
        spread < ROBUSTNESS_TOLERANCE,
        format!("{detail}; largest difference {spread:.4}"),
    ))
}

/// Composite Simpson rule.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        sum += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

fn ensemble_properties() -> Outcome {
    let mut worst = 0.0f64;
    let mut kinds: Vec<EnsembleKind> = EnsembleKind::PURE.to_vec();
    for rho1 in [0.1, 0.5, 0.9] {
        kinds.push(EnsembleKind::berry_robnik(rho1)?);
    }
    for &kind in &kinds {
        let pdf = |s: f64| ensembles::spacing_pdf(kind, s).expect("valid s");
        // exp(-0.1 s) is below 1e-17 at the upper end
        let norm = simpson(pdf, 0.0, 400.0, 800_000);
        let mean = simpson(|s| s * pdf(s), 0.0, 400.0, 800_000);
        worst = worst.max((norm - 1.0).abs()).max((mean - 1.0).abs());
    }
    let mut reduction = 0.0f64;
    for i in 0..=6000 {
        let s = i as f64 * 1e-3;
        let br0 = ensembles::spacing_pdf(EnsembleKind::berry_robnik(0.0)?, s)?;
        let br1 = ensembles::spacing_pdf(EnsembleKind::berry_robnik(1.0)?, s)?;
        reduction = reduction
            .max((br0 - ensembles::spacing_pdf(EnsembleKind::Goe, s)?).abs())
            .max((br1 - ensembles::spacing_pdf(EnsembleKind::Poisson, s)?).abs());
    }
    let mut poisson_exact = true;
    for l in [0.1, 0.5, 1.0, 2.5, 5.0, 17.3, 40.0, 100.0] {
        poisson_exact &= ensembles::sigma2_theory(EnsembleKind::Poisson, l)? == l;
    }
    let gue = ensembles::sigma2_theory(EnsembleKind::Gue, 10.0)?;
    let asymptotic = ((2.0 * PI * 10.0).ln() + EULER_GAMMA + 1.0) / (PI * PI);
    let gue_gap = (gue - asymptotic).abs();
    Ok(Check::new(
        worst < PDF_MOMENT_TOLERANCE
            && reduction < REDUCTION_TOLERANCE
            && poisson_exact
            && gue_gap < GUE_ASYMPTOTIC_TOLERANCE,
        format!(
            "pdf moments off by {worst:.1e}, reductions {reduction:.1e}, Poisson exact {poisson_exact}, \
             GUE(10) - asymptotic {gue_gap:.1e}"
        ),
    ))
}

fn monte_carlo_oracles() -> Outcome {
    let goe_cdf = |s: f64| 1.0 - (-PI * s * s / 4.0).exp();
    let raw = rmt_mc::raw_spacings(&McConfig::new(EnsembleKind::Goe, 2, KS_DRAWS, 1)?)?;
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    let scaled: Vec<f64> = raw.iter().map(|x| x / mean).collect();
    let ks = rmt_mc::ks_distance(&scaled, goe_cdf);

    let config = McConfig::new(EnsembleKind::Goe, 200, 400, 2)?;
    let curve = rmt_mc::mc_statistic(
        &config,
        Statistic::Sigma2,
        &linear_grid(0.5, 5.0, 0.5),
        0.25,
    )?;
    let mut worst_z = 0.0f64;
    for p in curve.points() {
        let theory = ensembles::sigma2_theory(EnsembleKind::Goe, p.l)?;
        worst_z = worst_z.max(((p.value - theory) / p.stderr).abs());
    }

    let grid = spectral::standard_l_grid();
    let mut worst_fit = 0.0f64;
    for rho1 in [0.0, 0.5, 1.0] {
        let synthetic = StatisticCurve::exact(
            Statistic::Sigma2,
            grid.iter()
                .map(|&l| (l, ensembles::sigma2_br(l, rho1).expect("valid"))),
        )?;
        let fit = fitting::fit_rho1(&synthetic, 0.0, 5.0)?;
        worst_fit = worst_fit.max((fit.rho1 - rho1).abs());
    }
    Ok(Check::new(
        ks < KS_MAX && worst_z < MC_SIGMAS && worst_fit < ROUND_TRIP_TOLERANCE,
        format!("2x2 KS {ks:.4}, dim-200 GOE max |z| {worst_z:.2}, fit round trip {worst_fit:.1e}"),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "fitted rho1, first n primes", table_left_columns),
        (2, "fitted rho1, k = 1e7 and 1e8", table_right_columns),
        (
            3,
            "first 100 primes level repulsion",
            first_hundred_level_repulsion,
        ),
        (4, "NNSD approaches Poisson", chi_square_trend),
        (
            5,
            "first 100 primes number variance is GOE",
            first_hundred_number_variance,
        ),
        (
            6,
            "alternate primes follow GSE",
            alternate_primes_follow_gse,
        ),
        (7, "number variance saturation", saturation_moves_out),
        (8, "unfolding robustness", unfolding_robustness),
        (9, "ensemble properties", ensemble_properties),
        (10, "Monte Carlo oracles", monte_carlo_oracles),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let check = run().unwrap_or_else(Check::error);
        let secs = start.elapsed().as_secs_f64();
        let verdict = match (check.pass, DOCUMENTED_FAILURES.contains(&id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (documented)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!(
            "{verdict} criterion {id:>2}: {name} [{secs:.1}s] {}",
            check.detail
        );
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
