//! Two-level SU(2) propagators in Cayley–Klein form.
//!
//! Any two-level propagator is `[[a, b·e^{−iφ}], [−b*·e^{iφ}, a*]]` with
//! `|a|² + |b|² = 1`. The pair (a, b) is computed phase-free; the carrier
//! phase φ is folded into b when the matrix (or its N-level lift) is built.

use crate::error::{Error, Result};
use crate::pulse::{Envelope, PulseSpec};
use crate::{C64, CMatrix};

const NORM_TOL: f64 = 1e-12;

/// The complex pair (a, b) parametrizing a two-level SU(2) propagator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CayleyKlein {
    a: C64,
    b: C64,
}

impl CayleyKlein {
    pub fn new(a: C64, b: C64) -> Result<Self> {
        if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::numeric("Cayley-Klein parameters must be finite"));
        }
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!(
                "Cayley-Klein parameters must satisfy |a|^2 + |b|^2 = 1, got {norm}"
            )));
        }
        Ok(CayleyKlein { a, b })
    }

    pub fn identity() -> Self {
        CayleyKlein {
            a: C64::new(1.0, 0.0),
            b: C64::new(0.0, 0.0),
        }
    }

    /// Cayley–Klein parameters of a single pulse.
    ///
    /// Rectangular envelopes use the constant-coupling closed form with
    /// `Ω_R = √(Δ² + Ω_0²)`, `Ω_0 = area/duration`. A resonant Gaussian
    /// depends only on the accumulated area, so the same closed form applies;
    /// a detuned Gaussian is integrated piecewise with 200 sub-steps.
    pub fn from_pulse(pulse: &PulseSpec) -> Result<Self> {
        Self::from_pulse_sampled(pulse, 200)
    }

    /// As [`CayleyKlein::from_pulse`] with an explicit sub-step count for the
    /// piecewise (detuned, non-rectangular) branch.
    pub fn from_pulse_sampled(pulse: &PulseSpec, substeps: usize) -> Result<Self> {
        if substeps < 2 {
            return Err(Error::invalid(format!(
                "substeps must be >= 2, got {substeps}"
            )));
        }
        match pulse.envelope() {
            Envelope::Rectangular => Ok(rotation_ck(pulse.area(), pulse.detuning(), pulse.duration())),
            Envelope::Gaussian if pulse.detuning() == 0.0 => {
                Ok(rotation_ck(pulse.area(), 0.0, pulse.duration()))
            }
            Envelope::Gaussian => {
                let dt = pulse.duration() / substeps as f64;
                let mut acc = CayleyKlein::identity();
                for da in pulse.substep_areas(substeps) {
                    acc = rotation_ck(da, pulse.detuning(), dt).after(&acc);
                }
                Ok(acc)
            }
        }
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    /// Composition `self ∘ earlier` (this propagator applied second),
    /// re-extracted in Cayley–Klein form.
    pub fn after(&self, earlier: &CayleyKlein) -> CayleyKlein {
        let (a1, b1) = (self.a, self.b);
        let (a2, b2) = (earlier.a, earlier.b);
        CayleyKlein {
            a: a1 * a2 - b1 * b2.conj(),
            b: a1 * b2 + b1 * a2.conj(),
        }
    }

    /// Two-level transfer probability |b|².
    pub fn transfer_probability(&self) -> f64 {
        self.b.norm_sqr()
    }
}

/// Closed-form Cayley–Klein pair for constant coupling `Ω_0 = area/duration`
/// and constant detuning over `duration`:
///
///   a = cos(Ω_R t/2) − i (Δ/Ω_R) sin(Ω_R t/2),
///   b = i (Ω_0/Ω_R) sin(Ω_R t/2),   Ω_R = √(Δ² + Ω_0²).
pub(crate) fn rotation_ck(area: f64, detuning: f64, duration: f64) -> CayleyKlein {
    let omega0 = area / duration;
    let omega_r = (detuning * detuning + omega0 * omega0).sqrt();
    if omega_r == 0.0 {
        return CayleyKlein::identity();
    }
    let half = 0.5 * omega_r * duration;
    let (s, c) = half.sin_cos();
    CayleyKlein {
        a: C64::new(c, -detuning / omega_r * s),
        b: C64::new(0.0, omega0 / omega_r * s),
    }
}

/// The 2×2 propagator `[[a, b·e^{−iφ}], [−b*·e^{iφ}, a*]]`.
pub fn su2_propagator(ck: &CayleyKlein, phase: f64) -> CMatrix {
    let e_m = C64::from_polar(1.0, -phase);
    let e_p = C64::from_polar(1.0, phase);
    CMatrix::from_row_slice(
        2,
        2,
        &[
            ck.a(),
            ck.b() * e_m,
            -ck.b().conj() * e_p,
            ck.a().conj(),
        ],
    )
}
