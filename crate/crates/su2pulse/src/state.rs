//! N-level state vectors.

use crate::error::{Error, Result};
use crate::{C64, CMatrix, CVector};

const NORM_TOL: f64 = 1e-12;

/// Unit-norm vector of N complex amplitudes, level index n = 1..N.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: CVector,
}

impl StateVector {
    /// Wrap amplitudes that are already unit-norm (within 1e−12).
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::InvalidDimension { levels: amps.len() });
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() {
            return Err(Error::numeric("state amplitudes must be finite"));
        }
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!(
                "state must be unit-norm, got |psi|^2 = {norm_sq}"
            )));
        }
        Ok(StateVector {
            amps: CVector::from_vec(amps),
        })
    }

    /// Normalize arbitrary amplitudes; rejects the zero vector.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::InvalidDimension { levels: amps.len() });
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::invalid("cannot normalize a zero or non-finite state"));
        }
        let scaled = amps.into_iter().map(|z| z / norm).collect();
        Ok(StateVector {
            amps: CVector::from_vec(scaled),
        })
    }

    /// Basis state ψ_level of an N-level system (level is 1-based).
    pub fn basis(levels: usize, level: usize) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidDimension { levels });
        }
        if level < 1 || level > levels {
            return Err(Error::invalid(format!(
                "initial level {level} out of range 1..={levels}"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); levels];
        amps[level - 1] = C64::new(1.0, 0.0);
        Ok(StateVector {
            amps: CVector::from_vec(amps),
        })
    }

    pub fn levels(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    /// |ψ_n|² for n = 1..N.
    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Apply a propagator without re-validating the norm.
    pub(crate) fn propagated(&self, u: &CMatrix) -> StateVector {
        StateVector {
            amps: u * &self.amps,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_states() {
        let s = StateVector::basis(3, 1).unwrap();
        assert_eq!(s.populations(), vec![1.0, 0.0, 0.0]);
        assert!(StateVector::basis(3, 0).is_err());
        assert!(StateVector::basis(3, 4).is_err());
        assert!(StateVector::basis(1, 1).is_err());
    }

    #[test]
    fn norm_validation() {
        let ok = StateVector::new(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
        assert!(ok.is_ok());
        let bad = StateVector::new(vec![C64::new(1.0, 0.0), C64::new(0.1, 0.0)]);
        assert!(bad.is_err());
        let zero = StateVector::normalized(vec![C64::new(0.0, 0.0); 3]);
        assert!(zero.is_err());
    }
}
