//! Command-line pipelines reproducing prime spectral-statistics figures and
//! the mixing-parameter table as CSV and JSON artifacts.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod config;
pub mod error;
pub mod pipelines;
pub mod provenance;

use std::io::{Read as _, Write as _};
use std::path::{Path, PathBuf};

use primechaos::ensembles::EnsembleKind;
use primechaos::fitting;
use primechaos::rmt_mc;
use primechaos::sieve::{Checkpoints, PrimeSequence};
use primechaos::spectral::{self, Statistic, StatisticCurve};
use primechaos::unfold::{self, UnfoldMethod, UnfoldedSequence};

use args::{Cli, Command, GridArgs};
use config::Settings;
use error::CliError;
use pipelines::{FigureId, LongRun, Selection};
use provenance::Provenance;

/// Exit status of a completed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Some requested work was skipped.
    Partial,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Partial => 3,
        }
    }
}

/// Runs a parsed command; `command_line` is recorded in output headers.
pub fn run(cli: Cli, command_line: &str) -> Result<Outcome, CliError> {
    let mut settings = Settings::resolve(cli.config.as_deref())?;
    if let Some(t) = cli.threads {
        settings.threads = t;
    }
    if let Some(s) = cli.seed {
        settings.seed = s;
    }
    settings.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", settings.threads)))?;
    pool.install(|| dispatch(cli.command, settings, command_line))
}

fn dispatch(
    command: Command,
    mut settings: Settings,
    command_line: &str,
) -> Result<Outcome, CliError> {
    match command {
        Command::Primes(a) => {
            let selection = match (a.first, a.after, a.count, a.upto) {
                (Some(n), None, None, None) => Selection::First(n),
                (None, Some(k), Some(count), None) => Selection::After { k, count },
                (None, None, None, Some(x)) => Selection::Upto(x),
                _ => {
                    return Err(CliError::Usage(
                        "choose one of --first N, --after K --count C, --upto X".into(),
                    ))
                }
            };
            let checkpoints = a
                .checkpoint
                .as_deref()
                .map(pipelines::load_checkpoints)
                .transpose()?;
            let mut primes = selection.generate(&settings, checkpoints.as_ref())?;
            if a.alternate {
                primes = primes.alternate();
            }
            let prov = Provenance::new(command_line, &settings);
            write_output(a.output.as_deref(), &prov.stamp(&primes.to_text()))?;
        }
        Command::Unfold(a) => {
            let method: UnfoldMethod = a
                .method
                .parse()
                .map_err(|e: primechaos::Error| CliError::Usage(e.to_string()))?;
            let (text, path) = read_input(a.input.as_deref())?;
            let primes = PrimeSequence::from_text(&text).map_err(|e| input_error(&path, e))?;
            let mut useq = unfold::unfold(&primes, method)?;
            if a.rescale {
                useq = unfold::rescale_unit_mean(&useq)?;
            }
            let prov = Provenance::new(command_line, &settings);
            write_output(a.output.as_deref(), &prov.stamp(&useq.to_text()))?;
        }
        Command::Stats(a) => {
            apply_grid(&mut settings, &a.grid);
            override_opt(&mut settings.window_step, a.window_step);
            override_opt(&mut settings.bin_width, a.bin_width);
            override_opt(&mut settings.s_max, a.s_max);
            settings.validate()?;
            let (text, path) = read_input(a.input.as_deref())?;
            let useq = UnfoldedSequence::from_text(&text).map_err(|e| input_error(&path, e))?;
            let body = if a.which.nnsd {
                pipelines::nnsd(&useq, &settings)?.to_csv()
            } else {
                let stat = if a.which.numvar {
                    Statistic::Sigma2
                } else if a.which.skew {
                    Statistic::Gamma1
                } else {
                    Statistic::Gamma2
                };
                spectral::statistic_curve(&useq, stat, &settings.l_grid(), settings.window_step)?
                    .to_csv()
            };
            let prov = Provenance::new(command_line, &settings);
            write_output(a.output.as_deref(), &prov.stamp(&body))?;
        }
        Command::Curves(a) => {
            apply_grid(&mut settings, &a.grid);
            override_opt(&mut settings.s_max, a.s_max);
            settings.validate()?;
            let kind: EnsembleKind = a
                .kind
                .parse()
                .map_err(|e: primechaos::Error| CliError::Usage(e.to_string()))?;
            let body = if a.statistic.eq_ignore_ascii_case("nnsd") {
                pipelines::pdf_csv(kind, &settings)?
            } else {
                let stat: Statistic = a
                    .statistic
                    .parse()
                    .map_err(|e: primechaos::Error| CliError::Usage(e.to_string()))?;
                pipelines::reference_curve(kind, stat, &settings.l_grid())?.to_csv()
            };
            let prov = Provenance::new(command_line, &settings);
            write_output(a.output.as_deref(), &prov.stamp(&body))?;
        }
        Command::Fit(a) => {
            override_opt(&mut settings.fit_l_min, a.lmin);
            override_opt(&mut settings.fit_l_max, a.lmax);
            settings.validate()?;
            let (text, path) = read_input(a.input.as_deref())?;
            let curve = StatisticCurve::from_csv(&text, Statistic::Sigma2)
                .map_err(|e| input_error(&path, e))?;
            let fit = if a.weighted {
                fitting::fit_rho1_weighted(&curve, settings.fit_l_min, settings.fit_l_max)?
            } else {
                pipelines::fit_curve(&curve, &settings)?
            };
            write_output(a.output.as_deref(), &(to_json(&fit)? + "\n"))?;
        }
        Command::Figure(a) => {
            let id: FigureId = a.id.parse()?;
            let checkpoints = a
                .checkpoint
                .as_deref()
                .map(pipelines::load_checkpoints)
                .transpose()?;
            let long_run = LongRun {
                allowed: a.allow_long_run,
                checkpoints: checkpoints.as_ref(),
            };
            let files = pipelines::run_figure(id, &settings, &long_run)?;
            std::fs::create_dir_all(&a.output).map_err(|e| CliError::io(&a.output, e))?;
            let prov = Provenance::new(command_line, &settings);
            for (name, body) in files {
                let path = a.output.join(name);
                write_output(Some(&path), &prov.stamp(&body))?;
                println!("{}", path.display());
            }
        }
        Command::Table(a) => {
            let rows = pipelines::parse_rows(&a.rows)?;
            let checkpoints = a
                .checkpoint
                .as_deref()
                .map(pipelines::load_checkpoints)
                .transpose()?;
            let long_run = LongRun {
                allowed: a.allow_long_run,
                checkpoints: checkpoints.as_ref(),
            };
            let out = pipelines::run_table(&rows, &settings, &long_run)?;
            for e in &out.entries {
                let published = e.published_rho1.map_or("-".to_string(), |v| v.to_string());
                eprintln!(
                    "{:>8}  rho1 = {:.6}  published = {published}",
                    e.sequence_label, e.rho1
                );
            }
            for label in &out.skipped {
                eprintln!(
                    "warning: skipped row {label}; it needs --allow-long-run or --checkpoint"
                );
            }
            write_output(a.output.as_deref(), &(to_json(&out.entries)? + "\n"))?;
            if !out.skipped.is_empty() {
                return Ok(Outcome::Partial);
            }
        }
        Command::McTabulate(a) => {
            let body = rmt_mc::gamma_reference_csv(
                a.dim,
                a.samples,
                settings.seed,
                &rmt_mc::tabulation_grid(),
                settings.window_step,
            )?;
            let prov = Provenance::new(command_line, &settings).with_seed(settings.seed);
            write_output(a.output.as_deref(), &prov.stamp(&body))?;
        }
        Command::Checkpoint(a) => {
            let cps = Checkpoints::generate(a.upto, a.every, settings.sieve_config())?;
            let prov = Provenance::new(command_line, &settings);
            write_output(a.output.as_deref(), &prov.stamp(&cps.to_text()))?;
        }
    }
    Ok(Outcome::Success)
}

fn override_opt<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// A step given without a first point also moves the first point to the step.
fn apply_grid(settings: &mut Settings, grid: &GridArgs) {
    override_opt(&mut settings.l_grid_first, grid.lmin.or(grid.step));
    override_opt(&mut settings.l_grid_last, grid.lmax);
    override_opt(&mut settings.l_grid_step, grid.step);
}

fn input_error(path: &Option<PathBuf>, source: primechaos::Error) -> CliError {
    match path {
        Some(p) => CliError::Input {
            path: p.clone(),
            source,
        },
        None => CliError::Input {
            path: PathBuf::from("<stdin>"),
            source,
        },
    }
}

fn read_input(path: Option<&Path>) -> Result<(String, Option<PathBuf>), CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            Ok((text, Some(p.to_path_buf())))
        }
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::io(Path::new("<stdin>"), e))?;
            Ok((text, None))
        }
    }
}

fn write_output(path: Option<&Path>, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::write(p, body).map_err(|e| CliError::io(p, e)),
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Usage(format!("cannot encode JSON: {e}")))
}
