//! `key = value` configuration with defaults for every pipeline parameter.

use std::fmt::Write as _;
use std::path::Path;

use primechaos::fitting::{DEFAULT_FIT_L_MAX, DEFAULT_FIT_L_MIN};
use primechaos::rmt_mc::TABULATION_SEED;
use primechaos::sieve::{SieveConfig, DEFAULT_SEGMENT_LEN};
use primechaos::spectral::{self, DEFAULT_BIN_WIDTH, DEFAULT_S_MAX, DEFAULT_WINDOW_STEP};

use crate::error::CliError;

/// Environment variable naming a configuration file.
pub const CONFIG_ENV: &str = "PRIMECHAOS_CONFIG";

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub bin_width: f64,
    pub s_max: f64,
    pub window_step: f64,
    pub l_grid_first: f64,
    pub l_grid_last: f64,
    pub l_grid_step: f64,
    pub fit_l_min: f64,
    pub fit_l_max: f64,
    /// Spacing between points of reference spacing densities.
    pub pdf_step: f64,
    pub saturation_l_max: f64,
    pub saturation_points: usize,
    pub segment_len: u64,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            bin_width: DEFAULT_BIN_WIDTH,
            s_max: DEFAULT_S_MAX,
            window_step: DEFAULT_WINDOW_STEP,
            l_grid_first: 0.1,
            l_grid_last: 5.0,
            l_grid_step: 0.1,
            fit_l_min: DEFAULT_FIT_L_MIN,
            fit_l_max: DEFAULT_FIT_L_MAX,
            pdf_step: 0.01,
            saturation_l_max: 4000.0,
            saturation_points: 40,
            segment_len: DEFAULT_SEGMENT_LEN,
            threads: 0,
            seed: TABULATION_SEED,
        }
    }
}

impl Settings {
    pub const KEYS: [&'static str; 14] = [
        "bin_width",
        "s_max",
        "window_step",
        "l_grid_first",
        "l_grid_last",
        "l_grid_step",
        "fit_l_min",
        "fit_l_max",
        "pdf_step",
        "saturation_l_max",
        "saturation_points",
        "segment_len",
        "threads",
        "seed",
    ];

    /// Defaults overridden by the lines of `text`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut settings = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config line {}: expected `key = value`, found {line:?}",
                    i + 1
                )));
            };
            settings
                .set(key.trim(), value.trim())
                .map_err(|m| CliError::Usage(format!("config line {}: {m}", i + 1)))?;
        }
        Ok(settings)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Settings::parse(&text).map_err(|e| match e {
            CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Explicit path, else the environment variable, else defaults.
    pub fn resolve(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(p) => Settings::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Settings::load(Path::new(&p)),
                _ => Ok(Settings::default()),
            },
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value
                .parse()
                .map_err(|_| format!("{key}: cannot parse {value:?}"))
        }
        match key {
            "bin_width" => self.bin_width = num(key, value)?,
            "s_max" => self.s_max = num(key, value)?,
            "window_step" => self.window_step = num(key, value)?,
            "l_grid_first" => self.l_grid_first = num(key, value)?,
            "l_grid_last" => self.l_grid_last = num(key, value)?,
            "l_grid_step" => self.l_grid_step = num(key, value)?,
            "fit_l_min" => self.fit_l_min = num(key, value)?,
            "fit_l_max" => self.fit_l_max = num(key, value)?,
            "pdf_step" => self.pdf_step = num(key, value)?,
            "saturation_l_max" => self.saturation_l_max = num(key, value)?,
            "saturation_points" => self.saturation_points = num(key, value)?,
            "segment_len" => self.segment_len = num(key, value)?,
            "threads" => self.threads = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Usage(m));
        let positive = [
            ("bin_width", self.bin_width),
            ("s_max", self.s_max),
            ("window_step", self.window_step),
            ("l_grid_first", self.l_grid_first),
            ("l_grid_step", self.l_grid_step),
            ("pdf_step", self.pdf_step),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{key} must be positive, got {v}"));
            }
        }
        if !(self.s_max >= self.bin_width) {
            return bad(format!(
                "s_max = {} is below bin_width = {}",
                self.s_max, self.bin_width
            ));
        }
        if !(self.l_grid_last >= self.l_grid_first && self.l_grid_last.is_finite()) {
            return bad(format!(
                "L grid [{}, {}] is empty",
                self.l_grid_first, self.l_grid_last
            ));
        }
        if !(self.fit_l_min >= 0.0 && self.fit_l_max > self.fit_l_min) {
            return bad(format!(
                "fit range ({}, {}] is empty",
                self.fit_l_min, self.fit_l_max
            ));
        }
        if !(self.saturation_l_max > spectral::SATURATION_L_MIN) || self.saturation_points < 2 {
            return bad(format!(
                "saturation scan needs saturation_l_max > {} and at least 2 points",
                spectral::SATURATION_L_MIN
            ));
        }
        if self.segment_len < 128 || !self.segment_len.is_multiple_of(128) {
            return bad(format!(
                "segment_len must be a positive multiple of 128, got {}",
                self.segment_len
            ));
        }
        Ok(())
    }

    pub fn l_grid(&self) -> Vec<f64> {
        spectral::linear_grid(self.l_grid_first, self.l_grid_last, self.l_grid_step)
    }

    pub fn sieve_config(&self) -> SieveConfig {
        SieveConfig::with_segment_len(self.segment_len)
    }

    /// `key=value` pairs in a fixed order.
    pub fn to_line(&self) -> String {
        let mut out = String::new();
        for key in Self::KEYS {
            if !out.is_empty() {
                out.push(' ');
            }
            let _ = write!(out, "{key}={}", self.value_of(key));
        }
        out
    }

    fn value_of(&self, key: &str) -> String {
        match key {
            "bin_width" => self.bin_width.to_string(),
            "s_max" => self.s_max.to_string(),
            "window_step" => self.window_step.to_string(),
            "l_grid_first" => self.l_grid_first.to_string(),
            "l_grid_last" => self.l_grid_last.to_string(),
            "l_grid_step" => self.l_grid_step.to_string(),
            "fit_l_min" => self.fit_l_min.to_string(),
            "fit_l_max" => self.fit_l_max.to_string(),
            "pdf_step" => self.pdf_step.to_string(),
            "saturation_l_max" => self.saturation_l_max.to_string(),
            "saturation_points" => self.saturation_points.to_string(),
            "segment_len" => self.segment_len.to_string(),
            "threads" => self.threads.to_string(),
            "seed" => self.seed.to_string(),
            _ => unreachable!("unknown key {key}"),
        }
    }
}
