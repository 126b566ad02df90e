//! Wigner D-matrix lift of a two-level propagator to N levels.

use crate::error::{Error, Result};
use crate::spin::Spin;
use crate::su2::CayleyKlein;
use crate::{C64, CMatrix};

/// ln(k!) for k = 0..=n.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = 0.0f64;
    table.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// The (2j+1)-dimensional representation D^{(j)}[a, b·e^{−iφ}].
///
/// Rows and columns are indexed by m = −j..j mapped to levels 1..N, so the
/// j = 1/2 case reduces exactly to [`crate::su2_propagator`]. Matrix elements
/// follow the factorial sum over all μ that keep every factorial argument
/// non-negative; factorials are evaluated in log space, which is why the
/// dimension is capped at [`Spin::MAX_LEVELS`].
pub fn wigner_d(spin: Spin, ck: &CayleyKlein, phase: f64) -> Result<CMatrix> {
    let n = spin.levels();
    if n > Spin::MAX_LEVELS {
        return Err(Error::SpinTooLarge {
            levels: n,
            max: Spin::MAX_LEVELS,
        });
    }
    let tj = spin.two_j();
    let lnf = ln_factorials(tj);

    let a = ck.a();
    let b = ck.b() * C64::from_polar(1.0, -phase);
    let ac = a.conj();
    let mbc = -b.conj();

    // Power tables: exponents never exceed 2j.
    let pow = |z: C64| -> Vec<C64> {
        let mut v = Vec::with_capacity(tj + 1);
        let mut acc = C64::new(1.0, 0.0);
        for _ in 0..=tj {
            v.push(acc);
            acc *= z;
        }
        v
    };
    let a_pow = pow(a);
    let ac_pow = pow(ac);
    let b_pow = pow(b);
    let mbc_pow = pow(mbc);

    let mut d = CMatrix::zeros(n, n);
    for row in 0..n {
        // row ↔ m = row − j  (as 2m = 2·row − 2j)
        for col in 0..n {
            // col ↔ m' = col − j
            let mu_lo = col.saturating_sub(row);
            let mu_hi = (tj - row).min(col);
            let mut entry = C64::new(0.0, 0.0);
            for mu in mu_lo..=mu_hi {
                let p = tj - row - mu; // j − m − μ
                let q = col - mu; // j + m' − μ
                let r = mu;
                let s = row + mu - col; // m − m' + μ
                let ln_coef = 0.5 * (lnf[tj - row] + lnf[row] + lnf[tj - col] + lnf[col])
                    - lnf[p]
                    - lnf[q]
                    - lnf[r]
                    - lnf[s];
                entry += ln_coef.exp() * a_pow[p] * ac_pow[q] * b_pow[r] * mbc_pow[s];
            }
            d[(row, col)] = entry;
        }
    }
    Ok(d)
}
