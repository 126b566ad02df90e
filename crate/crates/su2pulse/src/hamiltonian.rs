//! Ladder Hamiltonians and the matrix-exponential propagator.
//!
//! [`expm_hermitian`] goes through a Hermitian eigendecomposition and is the
//! independent cross-check for the Wigner D-matrix lift: the two routes agree
//! on final populations for SU(2)-symmetric ladders.

use crate::error::{Error, Result};
use crate::spin::Spin;
use crate::{C64, CMatrix};

/// N-level ladder with couplings `H_{n,n+1} = Ω_n/2`, `Ω_n = Ω_0·√(n(N−n))`,
/// and diagonal detunings `Δ_n = n·Δ_0 + D_0`.
///
/// With these couplings the ladder lies in the SU(2) span (plus a multiple of
/// the identity), which is what makes the D-matrix lift exact. `d0` shifts
/// every level equally and only contributes a global phase.
pub fn cook_shore_hamiltonian(spin: Spin, omega0: C64, delta0: f64, d0: f64) -> CMatrix {
    let n = spin.levels();
    let mut h = CMatrix::zeros(n, n);
    for level in 1..n {
        let coupling = omega0 * 0.5 * ((level * (n - level)) as f64).sqrt();
        h[(level - 1, level)] = coupling;
        h[(level, level - 1)] = coupling.conj();
    }
    for level in 1..=n {
        h[(level - 1, level - 1)] = C64::new(level as f64 * delta0 + d0, 0.0);
    }
    h
}

/// Propagator `e^{+iHt}` via Hermitian eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let n = h.nrows();
    if n != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.ncols(),
        });
    }
    let scale = h.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let mut defect = 0.0f64;
    for i in 0..n {
        for k in 0..n {
            defect = defect.max((h[(i, k)] - h[(k, i)].conj()).norm());
        }
    }
    if defect > 1e-10 * scale.max(1.0) {
        return Err(Error::invalid(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    let eig = h
        .clone()
        .try_symmetric_eigen(f64::EPSILON, (200 * n).max(800))
        .ok_or_else(|| Error::Eigendecomposition {
            what: format!("Hermitian QR did not converge for a {n}x{n} matrix (|H| ~ {scale:e})"),
        })?;
    let v = eig.eigenvectors;
    let mut phases = CMatrix::zeros(n, n);
    for k in 0..n {
        phases[(k, k)] = C64::from_polar(1.0, eig.eigenvalues[k] * t);
    }
    Ok(&v * phases * v.adjoint())
}
