//! Defaults read from the file named by `--config` or `LABOV_CONFIG`. Flags win.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use labov_core::lint::LintConfig;
use labov_core::seg::{BedMode, DEFAULT_NT};
use labov_core::wizard::Chart;
use serde::Deserialize;

use crate::Format;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub nt: Option<usize>,
    pub bed_mode: Option<BedMode>,
    /// Lint settings file, relative to the config file.
    pub rules: Option<PathBuf>,
    /// Chart definition file, relative to the config file.
    pub chart: Option<PathBuf>,
    pub port: Option<u16>,
    #[serde(default, deserialize_with = "format")]
    pub format: Option<Format>,
}

fn format<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Format>, D::Error> {
    match Option::<String>::deserialize(d)?.as_deref() {
        None => Ok(None),
        Some("table") => Ok(Some(Format::Table)),
        Some("json") => Ok(Some(Format::Json)),
        Some(other) => Err(serde::de::Error::custom(format!("format must be table or json, got {other:?}"))),
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config> {
        let Some(path) = path else { return Ok(Config::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let mut c: Config = serde_json::from_str(&text).with_context(|| format!("config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        c.rules = c.rules.map(|p| base.join(p));
        c.chart = c.chart.map(|p| base.join(p));
        Ok(c)
    }

    pub fn nt(&self, flag: Option<usize>) -> usize {
        flag.or(self.nt).unwrap_or(DEFAULT_NT)
    }

    pub fn bed_mode(&self, flag: Option<BedMode>) -> BedMode {
        flag.or(self.bed_mode).unwrap_or_default()
    }

    pub fn lint(&self, flag: Option<&Path>) -> Result<LintConfig> {
        let Some(path) = flag.or(self.rules.as_deref()) else { return Ok(LintConfig::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read rules {}", path.display()))?;
        let c: LintConfig = serde_json::from_str(&text).with_context(|| format!("rules {}", path.display()))?;
        c.check().map_err(anyhow::Error::msg).with_context(|| format!("rules {}", path.display()))?;
        Ok(c)
    }

    pub fn chart(&self, flag: Option<&Path>) -> Result<Chart> {
        let Some(path) = flag.or(self.chart.as_deref()) else { return Ok(Chart::builtin().clone()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read chart {}", path.display()))?;
        Chart::from_json(&text).map_err(anyhow::Error::msg).with_context(|| format!("chart {}", path.display()))
    }
}
