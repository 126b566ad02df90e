//! Run configuration: defaults, JSON config file, flag overrides.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use su2pulse::{Envelope, SchemeKind};

use crate::CliError;

/// Grid specification `min:max:count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.min + step * k as f64).collect()
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::usage(format!(
                "--grid: expected MIN:MAX:COUNT, got '{text}'"
            )));
        }
        let min: f64 = parts[0]
            .parse()
            .map_err(|_| CliError::usage(format!("--grid: bad MIN '{}'", parts[0])))?;
        let max: f64 = parts[1]
            .parse()
            .map_err(|_| CliError::usage(format!("--grid: bad MAX '{}'", parts[1])))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| CliError::usage(format!("--grid: bad COUNT '{}'", parts[2])))?;
        Ok(GridSpec { min, max, count })
    }
}

/// Fields as they appear in a config file or on the command line, all
/// optional; flags override file values, defaults fill the rest.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub levels: Option<usize>,
    pub scheme: Option<String>,
    pub pulses: Option<usize>,
    pub delta: Option<f64>,
    pub envelope: Option<String>,
    pub initial_level: Option<usize>,
    pub samples: Option<usize>,
    pub grid: Option<GridSpec>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl PartialConfig {
    /// `other` wins where set.
    pub fn overridden_by(self, other: PartialConfig) -> PartialConfig {
        PartialConfig {
            levels: other.levels.or(self.levels),
            scheme: other.scheme.or(self.scheme),
            pulses: other.pulses.or(self.pulses),
            delta: other.delta.or(self.delta),
            envelope: other.envelope.or(self.envelope),
            initial_level: other.initial_level.or(self.initial_level),
            samples: other.samples.or(self.samples),
            grid: other.grid.or(self.grid),
            out: other.out.or(self.out),
            svg: other.svg.or(self.svg),
        }
    }
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub levels: usize,
    pub scheme: String,
    pub pulses: usize,
    pub delta: f64,
    pub envelope: String,
    pub initial_level: usize,
    pub samples: usize,
    pub grid: GridSpec,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl RunConfig {
    pub fn scheme_kind(&self) -> SchemeKind {
        self.scheme.parse().expect("validated at resolve time")
    }

    pub fn envelope_kind(&self) -> Envelope {
        match self.envelope.as_str() {
            "gaussian" => Envelope::Gaussian,
            _ => Envelope::Rectangular,
        }
    }
}

fn default_pulse_count(kind: SchemeKind) -> usize {
    match kind {
        SchemeKind::Single => 1,
        SchemeKind::Nmr => 3,
        SchemeKind::Broadband | SchemeKind::Narrowband => 5,
        SchemeKind::Passband => 7,
    }
}

pub fn resolve(partial: PartialConfig) -> Result<RunConfig, CliError> {
    let levels = partial.levels.unwrap_or(3);
    if levels < 2 {
        return Err(CliError::usage(format!(
            "--levels: need at least 2 levels, got {levels}"
        )));
    }

    let scheme_text = partial.scheme.unwrap_or_else(|| "single".to_string());
    let kind: SchemeKind = scheme_text
        .parse()
        .map_err(|e| CliError::usage(format!("--scheme: {e}")))?;

    let pulses = partial.pulses.unwrap_or_else(|| default_pulse_count(kind));
    match kind {
        SchemeKind::Single => {
            if pulses > 1 {
                return Err(CliError::usage(format!(
                    "--pulses: the single scheme takes 0 or 1 pulses, got {pulses}"
                )));
            }
        }
        SchemeKind::Nmr => {
            if pulses != 3 && pulses != 0 {
                return Err(CliError::usage(format!(
                    "--pulses: the NMR scheme has exactly 3 pulses, got {pulses}"
                )));
            }
        }
        _ => {
            if pulses != 0 && (pulses % 2 == 0 || pulses > 25) {
                return Err(CliError::usage(format!(
                    "--pulses: composite schedules need an odd count within 1..=25, got {pulses}"
                )));
            }
        }
    }

    let delta = partial.delta.unwrap_or(0.0);
    if !delta.is_finite() || delta.abs() > PI {
        return Err(CliError::usage(format!(
            "--delta: area error must lie in [-pi, pi], got {delta}"
        )));
    }

    let envelope_text = partial.envelope.unwrap_or_else(|| "rectangular".to_string());
    match envelope_text.as_str() {
        "rectangular" | "gaussian" => {}
        other => {
            return Err(CliError::usage(format!(
                "--envelope: expected rectangular or gaussian, got '{other}'"
            )))
        }
    }

    let initial_level = partial.initial_level.unwrap_or(1);
    if initial_level < 1 || initial_level > levels {
        return Err(CliError::usage(format!(
            "--initial-level: level {initial_level} out of range 1..={levels}"
        )));
    }

    let samples = partial.samples.unwrap_or(200);
    if samples < 2 {
        return Err(CliError::usage(format!(
            "--samples: need at least 2 samples per pulse, got {samples}"
        )));
    }

    let grid = partial.grid.unwrap_or(GridSpec {
        min: -PI,
        max: PI,
        count: 401,
    });
    if grid.count < 1 {
        return Err(CliError::usage("--grid: COUNT must be at least 1".to_string()));
    }
    if !(grid.min.is_finite() && grid.max.is_finite()) || grid.min > grid.max {
        return Err(CliError::usage(format!(
            "--grid: need finite MIN <= MAX, got {}:{}",
            grid.min, grid.max
        )));
    }
    if grid.min < -PI - 1e-12 || grid.max > PI + 1e-12 {
        return Err(CliError::usage(format!(
            "--grid: area errors must lie in [-pi, pi], got {}:{}",
            grid.min, grid.max
        )));
    }

    Ok(RunConfig {
        levels,
        scheme: scheme_text,
        pulses,
        delta,
        envelope: envelope_text,
        initial_level,
        samples,
        grid,
        out: partial.out,
        svg: partial.svg,
    })
}

pub fn load_config_file(path: &std::path::Path) -> Result<PartialConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("--config: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("--config: invalid JSON in {}: {e}", path.display())))
}
