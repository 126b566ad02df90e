//! Dense polynomial root finding: companion matrix, shifted Hessenberg QR,
//! one Newton polish per root.

use crate::C64;

/// All roots of Σ coeffs[i]·x^i. The leading coefficient must be nonzero
/// (callers strip negligible leading/trailing terms first). Best-effort:
/// callers validate residuals.
pub(super) fn roots(coeffs: &[C64]) -> Vec<C64> {
    let deg = coeffs.len() - 1;
    match deg {
        0 => Vec::new(),
        1 => vec![-coeffs[0] / coeffs[1]],
        2 => quadratic(coeffs[2], coeffs[1], coeffs[0]),
        _ => {
            let lead = coeffs[deg];
            let monic: Vec<C64> = coeffs[..deg].iter().map(|&c| c / lead).collect();
            let mut eigs = companion_eigenvalues(&monic);
            for x in eigs.iter_mut() {
                *x = newton_polish(&monic, *x);
            }
            eigs
        }
    }
}

/// Roots of ax² + bx + c, stable against cancellation.
fn quadratic(a: C64, b: C64, c: C64) -> Vec<C64> {
    let disc = b * b - 4.0 * a * c;
    let mut sq = disc.sqrt();
    // Pick the sign that avoids cancellation in b + sq.
    if (b + sq).norm() < (b - sq).norm() {
        sq = -sq;
    }
    let q = -0.5 * (b + sq);
    if q.norm() == 0.0 {
        // b = 0 and disc = 0: double root at 0 of ax².
        return vec![C64::new(0.0, 0.0), -b / a];
    }
    vec![q / a, c / q]
}

/// Eigenvalues of the companion matrix of x^d + monic[d−1]x^{d−1} + … +
/// monic[0] via explicit single-shift QR on the Hessenberg form.
fn companion_eigenvalues(monic: &[C64]) -> Vec<C64> {
    let d = monic.len();
    let zero = C64::new(0.0, 0.0);
    let mut h = vec![vec![zero; d]; d];
    for i in 0..d {
        h[i][d - 1] = -monic[i];
        if i + 1 < d {
            h[i + 1][i] = C64::new(1.0, 0.0);
        }
    }

    let mut eigs = Vec::with_capacity(d);
    let mut hi = d - 1;
    let mut sweeps_on_block = 0usize;
    let mut total_sweeps = 0usize;
    let max_total = 100 * d + 200;

    loop {
        // Deflate negligible subdiagonals.
        let mut k = hi;
        let mut lo = 0;
        while k > 0 {
            let scale = h[k - 1][k - 1].norm() + h[k][k].norm();
            if h[k][k - 1].norm() <= f64::EPSILON * scale.max(1e-300) {
                h[k][k - 1] = zero;
                lo = k;
                break;
            }
            k -= 1;
        }

        if lo == hi {
            eigs.push(h[hi][hi]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            sweeps_on_block = 0;
            continue;
        }
        if hi - lo == 1 {
            let (e1, e2) = eig2(h[lo][lo], h[lo][hi], h[hi][lo], h[hi][hi]);
            eigs.push(e1);
            eigs.push(e2);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            sweeps_on_block = 0;
            continue;
        }

        if total_sweeps >= max_total {
            // Stalled: emit the current diagonal of the active block; the
            // caller's residual check decides whether that is acceptable.
            for i in lo..=hi {
                eigs.push(h[i][i]);
            }
            break;
        }

        // Wilkinson shift from the trailing 2×2, with a deterministic
        // exceptional shift when a block stalls.
        let (e1, e2) = eig2(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
        let mut mu = if (e1 - h[hi][hi]).norm() < (e2 - h[hi][hi]).norm() {
            e1
        } else {
            e2
        };
        if sweeps_on_block > 0 && sweeps_on_block % 12 == 0 {
            mu += C64::new(h[hi][hi - 1].norm(), 0.0);
        }

        qr_sweep(&mut h, lo, hi, mu);
        sweeps_on_block += 1;
        total_sweeps += 1;
    }
    eigs
}

/// One explicit shifted QR sweep on the Hessenberg block [lo, hi].
fn qr_sweep(h: &mut [Vec<C64>], lo: usize, hi: usize, mu: C64) {
    let n = hi - lo + 1;
    for i in lo..=hi {
        h[i][i] -= mu;
    }
    // Left Givens rotations zeroing the subdiagonal: Q^H (H − μI) = R.
    let mut rotations = Vec::with_capacity(n - 1);
    for k in lo..hi {
        let (c, s) = givens(h[k][k], h[k + 1][k]);
        for col in k..=hi {
            let top = h[k][col];
            let bot = h[k + 1][col];
            h[k][col] = c * top + s * bot;
            h[k + 1][col] = -s.conj() * top + c * bot;
        }
        rotations.push((c, s));
    }
    // Right multiplication: R·Q restores Hessenberg form.
    for (idx, (c, s)) in rotations.iter().enumerate() {
        let k = lo + idx;
        let row_end = (k + 2).min(hi);
        for row in lo..=row_end {
            let left = h[row][k];
            let right = h[row][k + 1];
            h[row][k] = c * left + s.conj() * right;
            h[row][k + 1] = -s * left + c * right;
        }
    }
    for i in lo..=hi {
        h[i][i] += mu;
    }
}

/// Complex Givens pair (c real, s complex) with [c s; −s̄ c]·[f g]ᵀ = [r 0]ᵀ.
fn givens(f: C64, g: C64) -> (C64, C64) {
    let fn_ = f.norm();
    let gn = g.norm();
    if gn == 0.0 {
        return (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    }
    if fn_ == 0.0 {
        return (C64::new(0.0, 0.0), g.conj() / gn);
    }
    let r = fn_.hypot(gn);
    let c = C64::new(fn_ / r, 0.0);
    let s = f * g.conj() / (fn_ * r);
    (c, s)
}

/// Eigenvalues of [[a, b], [c, d]].
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let mut sq = disc;
    if (tr + sq).norm() < (tr - sq).norm() {
        sq = -sq;
    }
    let e1 = 0.5 * (tr + sq);
    // e1·e2 = det; avoids cancellation for the smaller eigenvalue.
    let e2 = if e1.norm() > 0.0 { det / e1 } else { 0.5 * (tr - sq) };
    (e1, e2)
}

/// One Newton step on the monic polynomial, kept only if it improves |P|.
fn newton_polish(monic: &[C64], x: C64) -> C64 {
    let d = monic.len();
    let eval = |z: C64| -> (C64, C64) {
        let mut p = C64::new(1.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for i in (0..d).rev() {
            dp = dp * z + p;
            p = p * z + monic[i];
        }
        (p, dp)
    };
    let (p0, dp0) = eval(x);
    if dp0.norm() == 0.0 {
        return x;
    }
    let candidate = x - p0 / dp0;
    let (p1, _) = eval(candidate);
    if p1.norm() < p0.norm() {
        candidate
    } else {
        x
    }
}
