//! Flat `key = value` job files.
//!
//! ```text
//! # lengths in mm, frequencies in GHz
//! geometry = circ
//! substrate.eps_r = 2.32
//! substrate.h_mm = 0.8
//! f_design_ghz = 39
//! ```
//!
//! Command-line flags are merged over the file before resolution.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mmpatch::media::{DEFAULT_SIGMA, DEFAULT_TAN_DELTA};
use mmpatch::response::DEFAULT_REFERENCE_IMPEDANCE;
use mmpatch::WidthRule;

use crate::error::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "geometry",
    "substrate.eps_r",
    "substrate.h_mm",
    "substrate.tan_delta",
    "substrate.sigma",
    "f_design_ghz",
    "model_variant",
    "target_ohm",
    "sweep.f_start_ghz",
    "sweep.f_stop_ghz",
    "sweep.points",
    "sweep.zref",
    "rect.L_mm",
    "rect.W_mm",
    "rect.feed_offset_mm",
    "rect.width_rule",
    "circ.a_mm",
    "circ.rho0_mm",
    "pattern.step_deg",
    "output.format",
    "output.path",
];

const DEFAULT_SWEEP_POINTS: usize = 401;
const DEFAULT_SWEEP_SPAN: f64 = 0.05;
const DEFAULT_PATTERN_STEP_DEG: f64 = 1.0;
const DEFAULT_TARGET_OHM: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Rect,
    Circ,
}

impl Geometry {
    pub fn as_str(&self) -> &'static str {
        match self {
            Geometry::Rect => "rect",
            Geometry::Circ => "circ",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Raw entries from a job file, later overlaid with flags.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected `key = value`", n + 1))
            })?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::Config(format!(
                    "line {}: unknown key `{}`",
                    n + 1,
                    key
                )));
            }
            if entries
                .insert(key.to_string(), value.trim().to_string())
                .is_some()
            {
                return Err(CliError::Config(format!(
                    "line {}: duplicate key `{}`",
                    n + 1,
                    key
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        debug_assert!(KNOWN_KEYS.contains(&key));
        self.entries.insert(key.to_string(), value.to_string());
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("`{}`: cannot parse `{}`", key, v))),
        }
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.get(key)?
            .ok_or_else(|| CliError::Config(format!("missing required key `{}`", key)))
    }
}

/// A fully resolved job in SI units.
#[derive(Debug, Clone)]
pub struct Job {
    pub geometry: Geometry,
    pub eps_r: f64,
    pub h: f64,
    pub tan_delta: f64,
    pub sigma: f64,
    pub f_design: f64,
    pub variant: String,
    pub target: f64,
    pub zref: f64,
    pub f_start: f64,
    pub f_stop: f64,
    pub points: usize,
    pub rect_length: Option<f64>,
    pub rect_width: Option<f64>,
    pub rect_feed_offset: Option<f64>,
    pub width_rule: WidthRule,
    pub circ_radius: Option<f64>,
    pub circ_feed_radius: Option<f64>,
    pub pattern_step: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Keys that fell back to a default value.
    pub defaults_applied: Vec<&'static str>,
}

impl Job {
    pub fn resolve(raw: &RawConfig) -> Result<Self, CliError> {
        let mut defaults_applied = Vec::new();
        let mut or_default = |key: &'static str, v: Option<f64>, d: f64| {
            v.unwrap_or_else(|| {
                defaults_applied.push(key);
                d
            })
        };

        let geometry = match raw.require::<String>("geometry")?.as_str() {
            "rect" => Geometry::Rect,
            "circ" => Geometry::Circ,
            other => {
                return Err(CliError::Config(format!(
                    "geometry must be rect or circ, got `{}`",
                    other
                )))
            }
        };
        let mm = |v: Option<f64>| v.map(|x| x * 1e-3);
        let f_design = raw.require::<f64>("f_design_ghz")? * 1e9;
        let tan_delta = or_default(
            "substrate.tan_delta",
            raw.get("substrate.tan_delta")?,
            DEFAULT_TAN_DELTA,
        );
        let sigma = or_default(
            "substrate.sigma",
            raw.get("substrate.sigma")?,
            DEFAULT_SIGMA,
        );
        let zref = or_default(
            "sweep.zref",
            raw.get("sweep.zref")?,
            DEFAULT_REFERENCE_IMPEDANCE,
        );
        let target = or_default("target_ohm", raw.get("target_ohm")?, DEFAULT_TARGET_OHM);
        let f_start = or_default(
            "sweep.f_start_ghz",
            raw.get::<f64>("sweep.f_start_ghz")?.map(|x| x * 1e9),
            f_design * (1.0 - DEFAULT_SWEEP_SPAN),
        );
        let f_stop = or_default(
            "sweep.f_stop_ghz",
            raw.get::<f64>("sweep.f_stop_ghz")?.map(|x| x * 1e9),
            f_design * (1.0 + DEFAULT_SWEEP_SPAN),
        );
        let step_deg = or_default(
            "pattern.step_deg",
            raw.get("pattern.step_deg")?,
            DEFAULT_PATTERN_STEP_DEG,
        );
        let points = match raw.get::<usize>("sweep.points")? {
            Some(p) => p,
            None => {
                defaults_applied.push("sweep.points");
                DEFAULT_SWEEP_POINTS
            }
        };
        let variant = match raw.get::<String>("model_variant")? {
            Some(v) => v,
            None => {
                defaults_applied.push("model_variant");
                String::new()
            }
        };
        let width_rule = match raw.get::<String>("rect.width_rule")?.as_deref() {
            None => {
                defaults_applied.push("rect.width_rule");
                WidthRule::default()
            }
            Some("inverse-sqrt") => WidthRule::InverseSqrt,
            Some("printed") => WidthRule::Printed,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "rect.width_rule must be inverse-sqrt or printed, got `{}`",
                    other
                )))
            }
        };
        let format = match raw.get::<String>("output.format")?.as_deref() {
            None | Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "output.format must be csv or json, got `{}`",
                    other
                )))
            }
        };

        Ok(Self {
            geometry,
            eps_r: raw.require("substrate.eps_r")?,
            h: raw.require::<f64>("substrate.h_mm")? * 1e-3,
            tan_delta,
            sigma,
            f_design,
            variant,
            target,
            zref,
            f_start,
            f_stop,
            points,
            rect_length: mm(raw.get("rect.L_mm")?),
            rect_width: mm(raw.get("rect.W_mm")?),
            rect_feed_offset: mm(raw.get("rect.feed_offset_mm")?),
            width_rule,
            circ_radius: mm(raw.get("circ.a_mm")?),
            circ_feed_radius: mm(raw.get("circ.rho0_mm")?),
            pattern_step: step_deg.to_radians(),
            format,
            out: raw.get::<String>("output.path")?.map(PathBuf::from),
            defaults_applied,
        })
    }
}
