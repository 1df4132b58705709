//! `#` header lines stamped on every CSV artifact.

use crate::config::Settings;

#[derive(Debug, Clone)]
pub struct Provenance {
    pub command_line: String,
    pub settings: Settings,
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(command_line: impl Into<String>, settings: &Settings) -> Self {
        Provenance {
            command_line: command_line.into(),
            settings: settings.clone(),
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn header(&self) -> String {
        let mut out = format!(
            "# primechaos {}\n# command: {}\n# config: {}\n",
            env!("CARGO_PKG_VERSION"),
            self.command_line,
            self.settings.to_line()
        );
        if let Some(seed) = self.seed {
            out.push_str(&format!("# seed: {seed}\n"));
        }
        out
    }

    /// `body` with the header prepended.
    pub fn stamp(&self, body: &str) -> String {
        let mut out = self.header();
        out.push_str(body);
        out
    }
}

/// Lines of `text` that are not `#` comments.
pub fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}
