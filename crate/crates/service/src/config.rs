//! Service configuration: a TOML file with `RIGHTS_*` environment overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use rights_core::graph::Iri;
use rights_core::{parse_timestamp, Timestamp};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClockMode {
    System,
    Fixed,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceConfig {
    #[serde(default = "default_listen")]
    pub listen_address: String,
    #[serde(default = "default_data_dir")]
    pub data_directory: PathBuf,
    /// Seed vocabulary is used when unset.
    #[serde(default)]
    pub vocab_path: Option<PathBuf>,
    pub controller_iri: String,
    #[serde(default = "default_clock_mode")]
    pub clock_mode: ClockMode,
    /// Initial time in fixed mode.
    #[serde(default)]
    pub fixed_start: Option<String>,
    /// Seconds the fixed clock advances per mutation.
    #[serde(default = "default_step")]
    pub fixed_step_seconds: i64,
    /// Turtle file of `dpv:Process` descriptions.
    #[serde(default)]
    pub processes_path: Option<PathBuf>,
}

fn default_listen() -> String {
    "127.0.0.1:8080".into()
}

fn default_data_dir() -> PathBuf {
    PathBuf::from("data")
}

fn default_clock_mode() -> ClockMode {
    ClockMode::System
}

fn default_step() -> i64 {
    1
}

pub const ENV_PREFIX: &str = "RIGHTS_";

impl ServiceConfig {
    pub fn new(controller_iri: impl Into<String>, data_directory: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            listen_address: default_listen(),
            data_directory: data_directory.into(),
            vocab_path: None,
            controller_iri: controller_iri.into(),
            clock_mode: ClockMode::System,
            fixed_start: None,
            fixed_step_seconds: default_step(),
            processes_path: None,
        }
    }

    /// Read `path`, then apply overrides from the process environment.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut config: ServiceConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        config.apply_overrides(std::env::vars())?;
        config.check()?;
        Ok(config)
    }

    pub fn apply_overrides(&mut self, vars: impl IntoIterator<Item = (String, String)>) -> anyhow::Result<()> {
        for (key, value) in vars {
            let Some(name) = key.strip_prefix(ENV_PREFIX) else { continue };
            match name.to_ascii_lowercase().as_str() {
                "listen_address" => self.listen_address = value,
                "data_directory" => self.data_directory = value.into(),
                "vocab_path" => self.vocab_path = Some(value.into()),
                "controller_iri" => self.controller_iri = value,
                "clock_mode" => {
                    self.clock_mode = match value.as_str() {
                        "system" => ClockMode::System,
                        "fixed" => ClockMode::Fixed,
                        other => bail!("{key}: unknown clock mode {other:?}"),
                    }
                }
                "fixed_start" => self.fixed_start = Some(value),
                "fixed_step_seconds" => {
                    self.fixed_step_seconds = value.parse().with_context(|| format!("{key} must be an integer"))?
                }
                "processes_path" => self.processes_path = Some(value.into()),
                // Other RIGHTS_* variables (e.g. RIGHTS_LOG) are not config keys.
                _ => {}
            }
        }
        Ok(())
    }

    pub fn check(&self) -> anyhow::Result<()> {
        self.controller()?;
        if self.fixed_start()?.is_none() && self.clock_mode == ClockMode::Fixed {
            bail!("fixed_start is required when clock_mode is \"fixed\"");
        }
        if self.fixed_step_seconds < 1 {
            bail!("fixed_step_seconds must be at least 1");
        }
        Ok(())
    }

    pub fn controller(&self) -> anyhow::Result<Iri> {
        Iri::new(self.controller_iri.clone()).map_err(|e| anyhow::anyhow!("controller_iri: {e}"))
    }

    pub fn fixed_start(&self) -> anyhow::Result<Option<Timestamp>> {
        match &self.fixed_start {
            None => Ok(None),
            Some(s) => parse_timestamp(s)
                .map(Some)
                .ok_or_else(|| anyhow::anyhow!("fixed_start: not an RFC 3339 timestamp: {s:?}")),
        }
    }
}
