//! Truncated Taylor series in the area error δ, used by the phase solver.
//!
//! Around either anchor (pulse area π or 0) the entries of every composite
//! propagator are entire functions of δ whose leading coefficients decide the
//! flatness of the transfer profile. Working with exact truncated series
//! avoids the conditioning problems of high-order numerical differentiation.

use crate::C64;

/// Polynomial in δ truncated at a fixed degree; `c[k]` multiplies δ^k.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Series {
    pub c: Vec<C64>,
}

impl Series {
    pub fn zeros(cap: usize) -> Self {
        Series {
            c: vec![C64::new(0.0, 0.0); cap + 1],
        }
    }

    pub fn degree_cap(&self) -> usize {
        self.c.len() - 1
    }

    pub fn mul(&self, other: &Series) -> Series {
        let cap = self.degree_cap();
        let mut out = Series::zeros(cap);
        for i in 0..=cap {
            if self.c[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..=cap - i {
                out.c[i + j] += self.c[i] * other.c[j];
            }
        }
        out
    }

    pub fn add(&self, other: &Series) -> Series {
        let mut out = self.clone();
        for (o, s) in out.c.iter_mut().zip(&other.c) {
            *o += s;
        }
        out
    }

    pub fn scale(&self, z: C64) -> Series {
        Series {
            c: self.c.iter().map(|v| v * z).collect(),
        }
    }

    /// Coefficient-wise conjugate; equals the conjugate function for real δ.
    pub fn conj(&self) -> Series {
        Series {
            c: self.c.iter().map(|v| v.conj()).collect(),
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Taylor series of sin(δ/2).
pub(crate) fn sin_half(cap: usize) -> Series {
    let mut s = Series::zeros(cap);
    for k in (1..=cap).step_by(2) {
        let sign = if ((k - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        s.c[k] = C64::new(sign / (factorial(k) * 2f64.powi(k as i32)), 0.0);
    }
    s
}

/// Taylor series of cos(δ/2).
pub(crate) fn cos_half(cap: usize) -> Series {
    let mut s = Series::zeros(cap);
    for k in (0..=cap).step_by(2) {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        s.c[k] = C64::new(sign / (factorial(k) * 2f64.powi(k as i32)), 0.0);
    }
    s
}

/// 2×2 matrix of truncated series.
pub(crate) type SeriesMat = [[Series; 2]; 2];

pub(crate) fn mat_mul(x: &SeriesMat, y: &SeriesMat) -> SeriesMat {
    let f = |i: usize, j: usize| x[i][0].mul(&y[0][j]).add(&x[i][1].mul(&y[1][j]));
    [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]]
}
