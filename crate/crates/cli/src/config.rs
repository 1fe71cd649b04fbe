//! `epistrict.json` and its merge with command-line flags.

use std::path::{Path, PathBuf};

use epistrict_core::moyal::MoyalConfig;
use epistrict_core::{Kind, Prime};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_CONFIG: &str = "epistrict.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Rational,
    Float,
    PrimeField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub d: u64,
    pub n: usize,
    /// Unset means the subcommand's own default.
    pub backend: Option<Backend>,
    pub grid: MoyalConfig,
    pub seed: u64,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { d: 3, n: 1, backend: None, grid: MoyalConfig::default(), seed: 0, output: OutputConfig::default() }
    }
}

impl RunConfig {
    /// Reads `path`, or `epistrict.json` in the working directory when it
    /// exists, or falls back to defaults.
    pub fn load(path: Option<&Path>) -> Result<RunConfig, CliError> {
        let path = match path {
            Some(p) => p.to_path_buf(),
            None if Path::new(DEFAULT_CONFIG).is_file() => PathBuf::from(DEFAULT_CONFIG),
            None => return Ok(RunConfig::default()),
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    pub fn prime(&self) -> Result<Prime, CliError> {
        Prime::new(self.d).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Scalar kind for the backend, with `default` when none is set.
    pub fn kind(&self, default: Backend) -> Result<Kind, CliError> {
        Ok(match self.backend.unwrap_or(default) {
            Backend::Rational => Kind::Rational,
            Backend::Float => Kind::Float,
            Backend::PrimeField => Kind::Zd(self.prime()?),
        })
    }

    /// The prime field, rejecting any other backend.
    pub fn field(&self) -> Result<Prime, CliError> {
        match self.backend {
            None | Some(Backend::PrimeField) => self.prime(),
            Some(b) => Err(CliError::Usage(format!("this subcommand needs the prime_field backend, not {b:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_config_fills_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"d": 5, "grid": {"n": 64}}"#).unwrap();
        assert_eq!(c.d, 5);
        assert_eq!(c.n, 1);
        assert_eq!(c.grid.n, 64);
        assert_eq!(c.grid.hbar, MoyalConfig::default().hbar);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"dd": 5}"#).is_err());
    }

    #[test]
    fn backend_selection() {
        let mut c = RunConfig::default();
        assert_eq!(c.kind(Backend::Rational).unwrap(), Kind::Rational);
        c.backend = Some(Backend::Float);
        assert!(c.field().is_err());
        c.d = 9;
        c.backend = None;
        assert!(c.field().is_err());
    }
}
