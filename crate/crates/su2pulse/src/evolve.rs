//! Time-resolved evolution of N-level states under pulse sequences.

use crate::error::{Error, Result};
use crate::pulse::CompositeSequence;
use crate::spin::Spin;
use crate::state::StateVector;
use crate::su2::{rotation_ck, CayleyKlein};
use crate::wigner::wigner_d;
use crate::CMatrix;

/// Sampled evolution: times, states, and derived populations.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<StateVector>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// |ψ_n|² per sample, one row per time.
    pub fn populations(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(|s| s.populations()).collect()
    }

    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory is never empty")
    }
}

/// Evolve `state` through `seq`, sampling each pulse on `samples_per_pulse`
/// equal sub-intervals.
///
/// Every sub-interval advances the state by the D-matrix lift of the exact
/// constant-coupling propagator for that sub-interval; rectangular pulses are
/// therefore exact at every sample, and non-rectangular envelopes are
/// piecewise-constant in the sub-interval-averaged Rabi frequency. Since the
/// sub-interval areas sum to the pulse area exactly, a resonant endpoint
/// depends only on the accumulated area regardless of envelope.
pub fn evolve_state(
    state: &StateVector,
    seq: &CompositeSequence,
    samples_per_pulse: usize,
) -> Result<Trajectory> {
    if samples_per_pulse < 2 {
        return Err(Error::invalid(format!(
            "samples_per_pulse must be >= 2, got {samples_per_pulse}"
        )));
    }
    let spin = Spin::new(state.levels())?;

    let mut times = Vec::with_capacity(1 + seq.len() * samples_per_pulse);
    let mut states = Vec::with_capacity(times.capacity());
    let mut t = 0.0f64;
    times.push(t);
    states.push(state.clone());

    for pulse in seq.pulses() {
        let dt = pulse.duration() / samples_per_pulse as f64;
        for da in pulse.substep_areas(samples_per_pulse) {
            let ck = rotation_ck(da, pulse.detuning(), dt);
            let u = wigner_d(spin, &ck, pulse.phase())?;
            let next = states.last().unwrap().propagated(&u);
            t += dt;
            times.push(t);
            states.push(next);
        }
    }
    Ok(Trajectory { times, states })
}

/// Whole-sequence N×N propagator via the D-matrix lift (one lift per pulse).
pub fn sequence_propagator(spin: Spin, seq: &CompositeSequence) -> Result<CMatrix> {
    let n = spin.levels();
    let mut u = CMatrix::identity(n, n);
    for pulse in seq.pulses() {
        let ck = CayleyKlein::from_pulse(pulse)?;
        u = wigner_d(spin, &ck, pulse.phase())? * u;
    }
    Ok(u)
}
