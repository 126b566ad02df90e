//! Pulse descriptions: area, phase, detuning, temporal envelope.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gl5, gl5_composite};

/// Temporal shape of a pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Envelope {
    /// Constant Rabi frequency `area / duration`.
    Rectangular,
    /// Gaussian centered at `duration/2` with σ = duration/8, truncated at
    /// ±4σ (the pulse window) and rescaled so its integral equals `area`.
    Gaussian,
}

/// One pulse: area `A = ∫Ω dt`, carrier phase φ, detuning Δ, envelope, duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    area: f64,
    phase: f64,
    detuning: f64,
    envelope: Envelope,
    duration: f64,
}

impl PulseSpec {
    pub fn new(
        area: f64,
        phase: f64,
        detuning: f64,
        envelope: Envelope,
        duration: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("area", area),
            ("phase", phase),
            ("detuning", detuning),
            ("duration", duration),
        ] {
            if !v.is_finite() {
                return Err(Error::numeric(format!("pulse {name} must be finite, got {v}")));
            }
        }
        if area < 0.0 {
            return Err(Error::invalid(format!("pulse area must be >= 0, got {area}")));
        }
        if duration <= 0.0 {
            return Err(Error::invalid(format!(
                "pulse duration must be > 0, got {duration}"
            )));
        }
        Ok(PulseSpec {
            area,
            phase,
            detuning,
            envelope,
            duration,
        })
    }

    /// Resonant rectangular pulse of unit duration.
    pub fn rectangular(area: f64, phase: f64) -> Result<Self> {
        PulseSpec::new(area, phase, 0.0, Envelope::Rectangular, 1.0)
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    pub fn envelope(&self) -> Envelope {
        self.envelope
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn with_envelope(mut self, envelope: Envelope) -> Self {
        self.envelope = envelope;
        self
    }

    pub fn with_detuning(self, detuning: f64) -> Result<Self> {
        PulseSpec::new(self.area, self.phase, detuning, self.envelope, self.duration)
    }

    /// Instantaneous Rabi frequency at time `t ∈ [0, duration]` from pulse start.
    pub fn rabi_frequency_at(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.duration).contains(&t) {
            return Err(Error::OutOfRange {
                what: "pulse time".into(),
                value: t,
                min: 0.0,
                max: self.duration,
            });
        }
        Ok(match self.envelope {
            Envelope::Rectangular => self.area / self.duration,
            Envelope::Gaussian => {
                let norm = gl5_composite(&|u| self.gaussian_shape(u), 0.0, self.duration, 64);
                self.area * self.gaussian_shape(t) / norm
            }
        })
    }

    fn gaussian_shape(&self, t: f64) -> f64 {
        let sigma = self.duration / 8.0;
        let centered = t - self.duration / 2.0;
        (-centered * centered / (2.0 * sigma * sigma)).exp()
    }

    /// Pulse area on each of `n` equal sub-intervals of the pulse. The
    /// entries sum to `area` exactly, so a resonant piecewise-constant
    /// evolution reproduces the full-area rotation.
    pub(crate) fn substep_areas(&self, n: usize) -> Vec<f64> {
        debug_assert!(n >= 1);
        match self.envelope {
            Envelope::Rectangular => vec![self.area / n as f64; n],
            Envelope::Gaussian => {
                let dt = self.duration / n as f64;
                let raw: Vec<f64> = (0..n)
                    .map(|k| gl5(&|u| self.gaussian_shape(u), k as f64 * dt, (k + 1) as f64 * dt))
                    .collect();
                let total: f64 = raw.iter().sum();
                if total <= 0.0 {
                    return vec![self.area / n as f64; n];
                }
                raw.into_iter().map(|r| r * self.area / total).collect()
            }
        }
    }
}

/// An ordered pulse train with a human-readable label.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeSequence {
    pulses: Vec<PulseSpec>,
    label: String,
}

impl CompositeSequence {
    pub fn new(pulses: Vec<PulseSpec>, label: impl Into<String>) -> Result<Self> {
        if pulses.is_empty() {
            return Err(Error::invalid("composite sequence must contain at least one pulse"));
        }
        Ok(CompositeSequence {
            pulses,
            label: label.into(),
        })
    }

    pub fn pulses(&self) -> &[PulseSpec] {
        &self.pulses
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        false // enforced non-empty at construction
    }

    pub fn total_duration(&self) -> f64 {
        self.pulses.iter().map(|p| p.duration()).sum()
    }
}
