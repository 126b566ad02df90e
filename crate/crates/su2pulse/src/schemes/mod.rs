//! Composite-pulse schemes: sequence constructors, the phase-schedule
//! solver, transfer probabilities, and robustness profile scans.

mod cache;
mod series;
pub mod solver;

pub use cache::{CacheEntry, PhaseCache, SolverSettings};
pub use solver::{
    composite_transfer_probability, fd_flatness_coefficient, solve_bb_phases, solve_nb_phases,
    solve_pb_phases, Anchor,
};

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::sequence_propagator;
use crate::pulse::{CompositeSequence, Envelope, PulseSpec};
use crate::spin::Spin;

/// Composite excitation scheme families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Single,
    Nmr,
    Broadband,
    Narrowband,
    Passband,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::Single,
        SchemeKind::Nmr,
        SchemeKind::Broadband,
        SchemeKind::Narrowband,
        SchemeKind::Passband,
    ];

    pub fn is_solved(self) -> bool {
        matches!(
            self,
            SchemeKind::Broadband | SchemeKind::Narrowband | SchemeKind::Passband
        )
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SchemeKind::Single => "single",
            SchemeKind::Nmr => "nmr",
            SchemeKind::Broadband => "broadband",
            SchemeKind::Narrowband => "narrowband",
            SchemeKind::Passband => "passband",
        };
        f.write_str(s)
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(SchemeKind::Single),
            "nmr" => Ok(SchemeKind::Nmr),
            "broadband" | "bb" => Ok(SchemeKind::Broadband),
            "narrowband" | "nb" => Ok(SchemeKind::Narrowband),
            "passband" | "pb" => Ok(SchemeKind::Passband),
            other => Err(Error::invalid(format!(
                "unknown scheme '{other}' (expected single, nmr, broadband, narrowband or passband)"
            ))),
        }
    }
}

/// A solved (or canonical) phase schedule for M equal-area pulses.
///
/// The first phase is normalized to 0 (global-phase freedom); broadband and
/// narrowband schedules are palindromic, `phases[k] = phases[M+1−k]`.
/// `flat_order` is the first non-vanishing even order of the transfer-profile
/// deviation at the scheme's anchor area (π for flat-top schemes, 0 for
/// flat-bottom; the minimum of the two for passband).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSchedule {
    kind: SchemeKind,
    phases: Vec<f64>,
    flat_order: usize,
}

impl PhaseSchedule {
    pub fn new(kind: SchemeKind, phases: Vec<f64>, flat_order: usize) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::invalid("phase schedule must contain at least one phase"));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::numeric("phases must be finite"));
        }
        if phases[0].abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "first phase must be normalized to 0, got {}",
                phases[0]
            )));
        }
        let m = phases.len();
        if matches!(kind, SchemeKind::Broadband | SchemeKind::Narrowband) {
            for k in 0..m {
                if (phases[k] - phases[m - 1 - k]).abs() > 1e-9 {
                    return Err(Error::invalid(format!(
                        "{kind} schedule must be palindromic (phase {} != phase {})",
                        k + 1,
                        m - k
                    )));
                }
            }
        }
        Ok(PhaseSchedule {
            kind,
            phases,
            flat_order,
        })
    }

    /// One exact π pulse.
    pub fn single() -> Self {
        PhaseSchedule {
            kind: SchemeKind::Single,
            phases: vec![0.0],
            flat_order: 2,
        }
    }

    /// The three-pulse NMR inversion scheme (phases 0, π/2, 0). Its profile
    /// deviation starts at fourth order in the area error.
    pub fn nmr() -> Self {
        PhaseSchedule {
            kind: SchemeKind::Nmr,
            phases: vec![0.0, FRAC_PI_2, 0.0],
            flat_order: 4,
        }
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn count(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn flat_order(&self) -> usize {
        self.flat_order
    }
}

/// 1→N transfer probability sampled over a grid of pulse-area errors δ.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    deltas: Vec<f64>,
    probabilities: Vec<f64>,
    levels: usize,
    pulse_count: usize,
    kind: SchemeKind,
}

impl ProfileCurve {
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn pulse_count(&self) -> usize {
        self.pulse_count
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    /// Full width of the region where the curve stays at or above `level`.
    pub fn width_at(&self, level: f64) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (d, p) in self.deltas.iter().zip(&self.probabilities) {
            if *p >= level {
                lo = lo.min(*d);
                hi = hi.max(*d);
            }
        }
        if hi >= lo {
            hi - lo
        } else {
            0.0
        }
    }
}

/// The default profile grid: 401 uniform points over δ ∈ [−π, π].
pub fn default_profile_grid() -> Vec<f64> {
    let n = 401;
    (0..n)
        .map(|k| -PI + 2.0 * PI * k as f64 / (n - 1) as f64)
        .collect()
}

/// The three-pulse NMR inversion sequence with a systematic area error:
/// areas (π/2, π, π/2) scaled by (π+δ)/π, phases (0, π/2, 0).
pub fn nmr_sequence(area_error: f64) -> Result<CompositeSequence> {
    nmr_sequence_with_envelope(area_error, Envelope::Rectangular)
}

pub fn nmr_sequence_with_envelope(
    area_error: f64,
    envelope: Envelope,
) -> Result<CompositeSequence> {
    check_area_error(area_error)?;
    let scale = (PI + area_error) / PI;
    let pulses = vec![
        PulseSpec::new(FRAC_PI_2 * scale, 0.0, 0.0, envelope, 1.0)?,
        PulseSpec::new(PI * scale, FRAC_PI_2, 0.0, envelope, 1.0)?,
        PulseSpec::new(FRAC_PI_2 * scale, 0.0, 0.0, envelope, 1.0)?,
    ];
    CompositeSequence::new(pulses, format!("nmr(delta={area_error})"))
}

fn check_area_error(area_error: f64) -> Result<()> {
    if !area_error.is_finite() || area_error.abs() > PI {
        return Err(Error::OutOfRange {
            what: "area error delta".into(),
            value: area_error,
            min: -PI,
            max: PI,
        });
    }
    Ok(())
}

/// Materialize a scheme as a pulse train. Every nominal area is scaled by
/// (π+δ)/π; composite schedules produce M pulses of nominal area π with the
/// schedule's phases.
pub fn build_sequence(
    kind: SchemeKind,
    schedule: &PhaseSchedule,
    area_error: f64,
    envelope: Envelope,
) -> Result<CompositeSequence> {
    if schedule.kind() != kind {
        return Err(Error::invalid(format!(
            "schedule kind {} does not match requested scheme {kind}",
            schedule.kind()
        )));
    }
    check_area_error(area_error)?;
    match kind {
        SchemeKind::Nmr => nmr_sequence_with_envelope(area_error, envelope),
        SchemeKind::Single => {
            let pulse = PulseSpec::new(PI + area_error, 0.0, 0.0, envelope, 1.0)?;
            CompositeSequence::new(vec![pulse], format!("single(delta={area_error})"))
        }
        SchemeKind::Broadband | SchemeKind::Narrowband | SchemeKind::Passband => {
            let scale = (PI + area_error) / PI;
            let pulses = schedule
                .phases()
                .iter()
                .map(|&phi| PulseSpec::new(PI * scale, phi, 0.0, envelope, 1.0))
                .collect::<Result<Vec<_>>>()?;
            CompositeSequence::new(
                pulses,
                format!("{kind}(M={}, delta={area_error})", schedule.count()),
            )
        }
    }
}

/// |⟨to|U_seq|from⟩|² (levels are 1-based).
pub fn transition_probability(
    spin: Spin,
    seq: &CompositeSequence,
    from_level: usize,
    to_level: usize,
) -> Result<f64> {
    let n = spin.levels();
    for (name, level) in [("from_level", from_level), ("to_level", to_level)] {
        if level < 1 || level > n {
            return Err(Error::invalid(format!(
                "{name} {level} out of range 1..={n}"
            )));
        }
    }
    let u = sequence_propagator(spin, seq)?;
    Ok(u[(to_level - 1, from_level - 1)].norm_sqr().clamp(0.0, 1.0))
}

/// The level exchanged with `m` under SU(2)-symmetric inversion: N − m + 1.
pub fn palindromic_target(spin: Spin, m: usize) -> Result<usize> {
    let n = spin.levels();
    if m < 1 || m > n {
        return Err(Error::invalid(format!("level {m} out of range 1..={n}")));
    }
    Ok(n - m + 1)
}

/// 1→N transfer probability at each area error in `delta_grid`.
pub fn profile_scan(
    spin: Spin,
    kind: SchemeKind,
    schedule: &PhaseSchedule,
    delta_grid: &[f64],
) -> Result<ProfileCurve> {
    if delta_grid.is_empty() {
        return Err(Error::invalid("profile grid must be non-empty"));
    }
    let n = spin.levels();
    let mut probabilities = Vec::with_capacity(delta_grid.len());
    for &delta in delta_grid {
        let seq = build_sequence(kind, schedule, delta, Envelope::Rectangular)?;
        probabilities.push(transition_probability(spin, &seq, 1, n)?);
    }
    Ok(ProfileCurve {
        deltas: delta_grid.to_vec(),
        probabilities,
        levels: n,
        pulse_count: schedule.count(),
        kind,
    })
}
