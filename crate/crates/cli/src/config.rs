//! `key = value` run configuration with `#` comments.
//!
//! A [`RunConfig`] is built from a file, from command-line flags, or both;
//! [`RunConfig::overlay`] lets flag values win.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use solenoid_xsec_core::limits::RegimeThresholds;
use solenoid_xsec_core::units::UnitSystem;
use thiserror::Error;

/// Environment variable naming a default configuration file.
pub const CONFIG_ENV: &str = "SOLENOID_XSEC_CONFIG";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: String, line: usize },
    #[error("{path}:{line}: unknown key `{key}`")]
    UnknownKey {
        path: String,
        line: usize,
        key: String,
    },
    #[error("{path}:{line}: invalid value `{value}` for `{key}`")]
    BadValue {
        path: String,
        line: usize,
        key: String,
        value: String,
    },
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    #[default]
    Cgs,
    Natural,
}

impl Units {
    pub fn system(self) -> UnitSystem {
        match self {
            Units::Cgs => UnitSystem::cgs(),
            Units::Natural => UnitSystem::natural(),
        }
    }
}

impl FromStr for Units {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cgs" => Ok(Units::Cgs),
            "natural" => Ok(Units::Natural),
            _ => Err(format!(
                "unknown unit system `{s}` (expected cgs or natural)"
            )),
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Units::Cgs => "cgs",
            Units::Natural => "natural",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

macro_rules! run_config {
    ($($field:ident: $ty:ty),* $(,)?) => {
        /// Every setting is optional; commands supply their own defaults.
        #[derive(Debug, Clone, Default, PartialEq)]
        pub struct RunConfig {
            $(pub $field: Option<$ty>,)*
        }

        impl RunConfig {
            /// Recognized configuration keys.
            pub const KEYS: &'static [&'static str] = &[$(stringify!($field)),*];

            /// Values from `other` replace those in `self`. Setting one key of
            /// an alternative pair (`energy_mev`/`momentum`, `flux`/`quanta`)
            /// in `other` also clears its partner from `self`.
            pub fn overlay(mut self, other: RunConfig) -> RunConfig {
                if other.energy_mev.is_some() || other.momentum.is_some() {
                    self.energy_mev = None;
                    self.momentum = None;
                }
                if other.flux.is_some() || other.quanta.is_some() {
                    self.flux = None;
                    self.quanta = None;
                }
                RunConfig {
                    $($field: other.$field.or(self.$field),)*
                }
            }

            fn set(&mut self, key: &str, value: &str) -> Result<bool, ()> {
                match key {
                    $(stringify!($field) => {
                        self.$field = Some(value.parse::<$ty>().map_err(|_| ())?);
                        Ok(true)
                    })*
                    _ => Ok(false),
                }
            }
        }
    };
}

run_config! {
    units: Units,
    formula: String,
    energy_mev: f64,
    momentum: f64,
    theta: f64,
    r0_cm: f64,
    flux: f64,
    quanta: i64,
    f: u8,
    lambda_i: i32,
    lambda_f: i32,
    theta_min: f64,
    theta_points: usize,
    points: usize,
    smin: f64,
    smax: f64,
    samples: usize,
    seed: u64,
    tol: f64,
    format: Format,
    out: PathBuf,
    summary: PathBuf,
    small_x_threshold: f64,
    asymptotic_threshold: f64,
    flux_ratio_threshold: f64,
}

impl RunConfig {
    pub fn parse_str(text: &str, origin: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                path: origin.to_owned(),
                line: line_no,
            })?;
            let (key, value) = (key.trim(), value.trim());
            match cfg.set(key, value) {
                Ok(true) => {}
                Ok(false) => {
                    return Err(ConfigError::UnknownKey {
                        path: origin.to_owned(),
                        line: line_no,
                        key: key.to_owned(),
                    })
                }
                Err(()) => {
                    return Err(ConfigError::BadValue {
                        path: origin.to_owned(),
                        line: line_no,
                        key: key.to_owned(),
                        value: value.to_owned(),
                    })
                }
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        RunConfig::parse_str(&text, &path.display().to_string())
    }

    pub fn thresholds(&self) -> RegimeThresholds {
        let d = RegimeThresholds::default();
        RegimeThresholds {
            small_x: self.small_x_threshold.unwrap_or(d.small_x),
            asymptotic: self.asymptotic_threshold.unwrap_or(d.asymptotic),
            flux_ratio: self.flux_ratio_threshold.unwrap_or(d.flux_ratio),
        }
    }
}
