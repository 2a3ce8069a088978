//! Run configuration: tolerances, λ-grid size and seed, output format.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::histories::EPS_CONSISTENCY;
use crate::infoloc::{ChannelTolerance, LambdaGrid};
use crate::qmath::{EPS_NORM, EPS_SUPPORT};

/// Environment variable that overrides the seed from any other source.
pub const SEED_ENV: &str = "HISTLOC_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "text" => Ok(OutputFormat::Text),
            other => Err(Error::Config(format!("unknown format `{other}` (expected json or text)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    pub eps_norm: f64,
    pub eps_consistency: f64,
    pub eps_support: f64,
    pub lambda_grid_size: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            eps_norm: EPS_NORM,
            eps_consistency: EPS_CONSISTENCY,
            eps_support: EPS_SUPPORT,
            lambda_grid_size: 64,
            seed: 42,
            format: OutputFormat::Text,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

impl Config {
    /// Sets one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "eps_norm" => self.eps_norm = parse(key, value)?,
            "eps_consistency" => self.eps_consistency = parse(key, value)?,
            "eps_support" => self.eps_support = parse(key, value)?,
            "lambda_grid_size" => self.lambda_grid_size = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "format" => self.format = value.parse()?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a `key = value` file on top of `self`. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn merge_file_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Applies the seed override from the environment, if set.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<()> {
        if let Some(v) = lookup(SEED_ENV) {
            self.seed = parse(SEED_ENV, v.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps_norm", self.eps_norm),
            ("eps_consistency", self.eps_consistency),
            ("eps_support", self.eps_support),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("`{name}` must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> LambdaGrid {
        LambdaGrid::standard(self.seed, self.lambda_grid_size)
    }

    pub fn channel_tolerance(&self) -> ChannelTolerance {
        ChannelTolerance { eps: self.eps_support, eps_support: self.eps_support }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = Config::default();
        assert_eq!((c.eps_norm, c.eps_consistency, c.eps_support), (1e-10, 1e-9, 1e-9));
        assert_eq!((c.lambda_grid_size, c.seed), (64, 42));
        c.validate().unwrap();
    }

    #[test]
    fn file_then_env() {
        let mut c = Config::default();
        c.merge_file_text("# comment\nseed = 7\n\nlambda_grid_size=8\nformat = json\n").unwrap();
        assert_eq!((c.seed, c.lambda_grid_size, c.format), (7, 8, OutputFormat::Json));
        c.apply_env(|k| (k == SEED_ENV).then(|| "99".to_string())).unwrap();
        assert_eq!(c.seed, 99);
    }

    #[test]
    fn bad_input_is_rejected() {
        let mut c = Config::default();
        assert!(c.merge_file_text("seed 7").is_err());
        assert!(c.merge_file_text("colour = red").is_err());
        c.eps_norm = 0.0;
        assert!(c.validate().is_err());
    }
}
