//! Composite-pulse population transfer in N-level systems with SU(2) symmetry.
//!
//! An N-level ladder whose couplings follow `Ω_n = Ω_0·√(n(N−n))` behaves as a
//! single spin `j = (N−1)/2`: the full N×N propagator is the Wigner D-matrix
//! lift of a two-level SU(2) propagator. This crate builds on that structure:
//!
//! - [`su2`] / [`wigner`]: Cayley–Klein parameters of a driven two-level
//!   system and their lift to N levels,
//! - [`hamiltonian`]: ladder Hamiltonians and a matrix-exponential propagator
//!   that serves as an independent cross-check of the lift,
//! - [`evolve`]: time-resolved state evolution under pulse sequences,
//! - [`schemes`]: composite-pulse sequences (NMR three-pulse scheme and
//!   numerically solved broadband / narrowband / passband phase schedules)
//!   plus robustness profile scans,
//! - [`majorana`]: the stellar representation of N-level states as `2j`
//!   points on the unit sphere, with point tracking along trajectories.
//!
//! Conventions: a propagator is `e^{+iHt}`; pulse areas are accumulated Rabi
//! frequency, so a resonant pulse of area π fully inverts 1 → N for every N;
//! pulse phases enter as `b → b·e^{−iφ}` at lift time.

pub mod error;
pub mod evolve;
pub mod hamiltonian;
pub mod majorana;
pub mod pulse;
pub mod schemes;
pub mod spin;
pub mod state;
pub mod su2;
pub mod wigner;

mod quadrature;

pub use error::{Error, Result};
pub use evolve::{evolve_state, sequence_propagator, Trajectory};
pub use hamiltonian::{cook_shore_hamiltonian, expm_hermitian};
pub use majorana::{
    majorana_polynomial, polynomial_roots, rigid_rotation_deviation, roots_to_constellation,
    state_constellation, track_trajectory, MajoranaConstellation, MajoranaPolynomial, PointTracks,
    RootSet, SpherePoint,
};
pub use pulse::{CompositeSequence, Envelope, PulseSpec};
pub use schemes::{
    build_sequence, default_profile_grid, nmr_sequence, palindromic_target, profile_scan,
    solve_bb_phases, solve_nb_phases, solve_pb_phases, transition_probability, PhaseCache,
    PhaseSchedule, ProfileCurve, SchemeKind,
};
pub use spin::Spin;
pub use state::StateVector;
pub use su2::{su2_propagator, CayleyKlein};
pub use wigner::wigner_d;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix (propagators, Hamiltonians).
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex vector (state amplitudes).
pub type CVector = nalgebra::DVector<C64>;

/// Largest element of `|M†M − I|`; zero for a perfect unitary.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let gram = m.adjoint() * m;
    let mut worst = 0.0f64;
    for i in 0..n {
        for k in 0..n {
            let expect = if i == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((gram[(i, k)] - expect).norm());
        }
    }
    worst
}
