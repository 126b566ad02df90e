//! Stellar (Majorana) representation of N-level states.
//!
//! A spin-S state maps to 2S points on the unit sphere: the roots of a
//! characteristic polynomial, sent through the stereographic relation
//! `x = tan(θ/2)·e^{iφ}` (missing roots live at infinity, θ = π). SU(2)
//! evolution rotates the whole constellation rigidly.
//!
//! The polynomial here is the coherent-state overlap form: level n carries
//! the power N−n (so ψ₁ maps to the North pole) and the sign (−1)^{n−1},
//! which makes the j = 1/2 point coincide with the usual Bloch vector.

mod roots;
mod tracking;

pub use tracking::{rigid_rotation_deviation, track_trajectory, PointTracks};

use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::C64;

/// Characteristic polynomial of a state; `coeffs[i]` multiplies x^i and the
/// binomial weight √C(2S, i) is already folded in.
#[derive(Debug, Clone, PartialEq)]
pub struct MajoranaPolynomial {
    coeffs: Vec<C64>,
}

impl MajoranaPolynomial {
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// 2S (one less than the number of levels).
    pub fn two_s(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Roots of a Majorana polynomial: the finite ones plus the count at infinity
/// from degree deficiency. Total cardinality is always 2S.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    finite: Vec<C64>,
    at_infinity: usize,
}

impl RootSet {
    pub fn finite(&self) -> &[C64] {
        &self.finite
    }

    pub fn at_infinity(&self) -> usize {
        self.at_infinity
    }

    pub fn total(&self) -> usize {
        self.finite.len() + self.at_infinity
    }
}

/// A point on the unit sphere; φ is normalized to [0, 2π) and to exactly 0
/// at the poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    theta: f64,
    phi: f64,
}

impl SpherePoint {
    pub fn new(theta: f64, phi: f64) -> Self {
        let theta = theta.clamp(0.0, std::f64::consts::PI);
        let phi = if theta == 0.0 || theta == std::f64::consts::PI {
            0.0
        } else {
            phi.rem_euclid(std::f64::consts::TAU)
        };
        SpherePoint { theta, phi }
    }

    /// Stereographic image of a finite root: θ = 2·atan|x|, φ = arg x.
    pub fn from_root(x: C64) -> Self {
        SpherePoint::new(2.0 * x.norm().atan(), x.arg())
    }

    /// The point at infinity: the South pole.
    pub fn south() -> Self {
        SpherePoint {
            theta: std::f64::consts::PI,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Great-circle (central-angle) distance to another point.
    pub fn angle_to(&self, other: &SpherePoint) -> f64 {
        let a = self.unit_vector();
        let b = other.unit_vector();
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let cross_norm = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        cross_norm.atan2(dot)
    }
}

/// Multiset of exactly 2S sphere points (with multiplicity).
#[derive(Debug, Clone, PartialEq)]
pub struct MajoranaConstellation {
    points: Vec<SpherePoint>,
}

impl MajoranaConstellation {
    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points ordered by (θ, φ); a canonical form for comparisons.
    pub fn sorted(&self) -> MajoranaConstellation {
        let mut points = self.points.clone();
        points.sort_by(|p, q| {
            p.theta
                .total_cmp(&q.theta)
                .then(p.phi.total_cmp(&q.phi))
        });
        MajoranaConstellation { points }
    }
}

/// Majorana polynomial of a state: coefficient of x^{N−n} is
/// (−1)^{n−1}·√C(2S, N−n)·ψ_n.
pub fn majorana_polynomial(state: &StateVector) -> Result<MajoranaPolynomial> {
    let n = state.levels();
    let two_s = n - 1;
    let norm: f64 = state.populations().iter().sum();
    if norm == 0.0 {
        return Err(Error::invalid("cannot build a Majorana polynomial of the zero vector"));
    }
    let mut coeffs = vec![C64::new(0.0, 0.0); n];
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        let level = idx + 1;
        let power = n - level;
        let sign = if level % 2 == 1 { 1.0 } else { -1.0 };
        coeffs[power] = sign * binomial(two_s, power).sqrt() * amp;
    }
    Ok(MajoranaPolynomial { coeffs })
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// All 2S roots: companion-matrix eigenvalues with one Newton polish per
/// finite root; degree deficiency contributes roots at infinity and stripped
/// trailing coefficients contribute exact roots at the origin.
pub fn polynomial_roots(p: &MajoranaPolynomial) -> Result<RootSet> {
    let two_s = p.two_s();
    let max_abs = p.coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if max_abs == 0.0 {
        return Err(Error::invalid("all polynomial coefficients vanish"));
    }
    let strip = 1e-13 * max_abs;

    let mut hi = p.coeffs.len() - 1;
    while hi > 0 && p.coeffs[hi].norm() <= strip {
        hi -= 1;
    }
    let mut lo = 0;
    while lo < hi && p.coeffs[lo].norm() <= strip {
        lo += 1;
    }

    let mut at_infinity = two_s - hi;
    let mut finite: Vec<C64> = vec![C64::new(0.0, 0.0); lo];

    if hi > lo {
        let mid = &p.coeffs[lo..=hi];
        finite.extend(roots::roots(mid));
    }

    let repaired = coalesce_clusters(&mut finite, &mut at_infinity, &p.coeffs);
    finite.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let mut worst = 0.0f64;
    for &x in &finite {
        if x.norm() == 0.0 || repaired.contains(&root_key(x)) {
            // Exact by construction, or a multiplicity cluster validated by
            // the derivative cascade (a k-fold root's backward residual
            // scales as the k-th root of the coefficient noise).
            continue;
        }
        let value = p.eval(x).norm();
        let mut scale = 0.0f64;
        let mut xp = 1.0f64;
        for c in &p.coeffs {
            scale += c.norm() * xp;
            xp *= x.norm();
        }
        worst = worst.max(value / scale.max(max_abs));
    }
    if worst > 1e-9 {
        return Err(Error::RootsDidNotConverge { residual: worst });
    }

    Ok(RootSet {
        finite,
        at_infinity,
    })
}

fn root_key(x: C64) -> (u64, u64) {
    (x.re.to_bits(), x.im.to_bits())
}

/// Angular radius within which roots are tested for a common multiplicity.
/// Matches the separation below which the root map is documented as
/// ill-conditioned.
const CLUSTER_RADIUS: f64 = 0.1;

/// Tolerance of the multiplicity confirmation cascade. Evolution noise on
/// the state amplifies to scaled derivative residuals around 1e−8 at a
/// multiple root, while k generically distinct roots inside the cluster
/// radius leave residuals above ~1e−3.
const CLUSTER_CONFIRM_TOL: f64 = 1e-6;

/// Repair the conditioning of multiple roots; returns the set of confirmed
/// cluster centers (bit-keys of the finite ones).
///
/// A k-fold root scatters into a ring of radius ~ε^{1/k} under coefficient
/// rounding (visible on the sphere for k ≥ 4), and near the South pole the
/// leading-coefficient strip can even send part of a cluster to infinity.
/// Both repairs use the same fact: the k-fold root is a simple,
/// well-conditioned root of the (k−1)-th derivative. Clusters near the South
/// pole are refined in the inverted coordinate w = 1/x, where the pole is an
/// ordinary point and roots at infinity sit at w = 0. Clusters whose
/// multiplicity is not confirmed by the vanishing of all lower scaled
/// derivatives (genuinely distinct close roots) are left alone.
fn coalesce_clusters(
    finite: &mut Vec<C64>,
    at_infinity: &mut usize,
    coeffs: &[C64],
) -> std::collections::BTreeSet<(u64, u64)> {
    let mut repaired = std::collections::BTreeSet::new();
    let total = finite.len() + *at_infinity;
    if total < 2 {
        return repaired;
    }

    // Sphere positions of all 2S roots; `None` marks points at infinity.
    let members: Vec<(Option<C64>, SpherePoint)> = finite
        .iter()
        .map(|&x| (Some(x), SpherePoint::from_root(x)))
        .chain(std::iter::repeat((None, SpherePoint::south())).take(*at_infinity))
        .collect();

    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..total {
        for j in (i + 1)..total {
            if members[i].1.angle_to(&members[j].1) < CLUSTER_RADIUS {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut clusters: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..total {
        let r = find(&mut parent, i);
        clusters.entry(r).or_default().push(i);
    }

    let mut new_finite: Vec<C64> = Vec::with_capacity(finite.len());
    let mut new_infinity = 0usize;
    for cluster in clusters.values() {
        let k = cluster.len();
        let keep = |new_finite: &mut Vec<C64>, new_infinity: &mut usize| {
            for &i in cluster {
                match members[i].0 {
                    Some(x) => new_finite.push(x),
                    None => *new_infinity += 1,
                }
            }
        };
        if k < 2 {
            keep(&mut new_finite, &mut new_infinity);
            continue;
        }
        if cluster.iter().all(|&i| members[i].0.is_none()) {
            new_infinity += k; // exact by the degree deficiency
            continue;
        }

        // South-side clusters (and any cluster containing a point at
        // infinity) are handled in the inverted chart.
        let mean_theta: f64 =
            cluster.iter().map(|&i| members[i].1.theta()).sum::<f64>() / k as f64;
        let inverted = mean_theta > std::f64::consts::FRAC_PI_2
            || cluster.iter().any(|&i| members[i].0.is_none());
        let chart_coeffs: Vec<C64> = if inverted {
            coeffs.iter().rev().copied().collect()
        } else {
            coeffs.to_vec()
        };
        let chart_value = |x: Option<C64>| -> C64 {
            match (x, inverted) {
                (Some(v), false) => v,
                (Some(v), true) => 1.0 / v,
                (None, _) => C64::new(0.0, 0.0),
            }
        };

        let seed = cluster.iter().map(|&i| chart_value(members[i].0)).sum::<C64>() / k as f64;
        let mut center = seed;
        for _ in 0..8 {
            let d = derivatives_at(&chart_coeffs, center, k);
            if d[k].norm() == 0.0 {
                break;
            }
            // d[j] = P^{(j)}/j!, so the Newton step for P^{(k−1)} is
            // d[k−1]/(k·d[k]).
            let step = d[k - 1] / d[k] / k as f64;
            center -= step;
            if step.norm() <= 1e-15 * (1.0 + center.norm()) {
                break;
            }
        }
        let d = derivatives_at(&chart_coeffs, center, k);
        let confirmed = center.is_finite()
            && (0..k).all(|j| {
                d[j].norm() <= CLUSTER_CONFIRM_TOL * derivative_scale(&chart_coeffs, center, j)
            });
        if !confirmed {
            keep(&mut new_finite, &mut new_infinity);
            continue;
        }

        if inverted && center.norm() < 1e-300 {
            new_infinity += k;
        } else {
            let x = if inverted { 1.0 / center } else { center };
            repaired.insert(root_key(x));
            new_finite.extend(std::iter::repeat(x).take(k));
        }
    }

    *finite = new_finite;
    *at_infinity = new_infinity;
    repaired
}

/// P(x), P'(x), …, P^{(m)}(x), each divided by j! (Taylor coefficients at x).
fn derivatives_at(coeffs: &[C64], x: C64, m: usize) -> Vec<C64> {
    let mut d = vec![C64::new(0.0, 0.0); m + 1];
    for &c in coeffs.iter().rev() {
        for j in (1..=m).rev() {
            d[j] = d[j] * x + d[j - 1];
        }
        d[0] = d[0] * x + c;
    }
    d
}

/// Backward-error scale Σ|c_i|·C(i,j)·|x|^{i−j} for the j-th Taylor
/// coefficient of P at x.
fn derivative_scale(coeffs: &[C64], x: C64, j: usize) -> f64 {
    let ax = x.norm();
    let mut scale = 0.0f64;
    for (i, c) in coeffs.iter().enumerate() {
        if i < j {
            continue;
        }
        scale += c.norm() * binomial(i, j) * ax.powi((i - j) as i32);
    }
    scale.max(coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max))
}

/// Map a complete root multiset onto the sphere.
pub fn roots_to_constellation(roots: &RootSet) -> MajoranaConstellation {
    let mut points: Vec<SpherePoint> = roots
        .finite
        .iter()
        .map(|&x| SpherePoint::from_root(x))
        .collect();
    points.extend(std::iter::repeat(SpherePoint::south()).take(roots.at_infinity));
    MajoranaConstellation { points }
}

/// Constellation of a state (polynomial, roots, sphere map in one step).
pub fn state_constellation(state: &StateVector) -> Result<MajoranaConstellation> {
    let poly = majorana_polynomial(state)?;
    let roots = polynomial_roots(&poly)?;
    Ok(roots_to_constellation(&roots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ground_state_polynomial_is_top_power() {
        // spin 1, ψ = (1,0,0) → P(x) = x².
        let state = StateVector::basis(3, 1).unwrap();
        let p = majorana_polynomial(&state).unwrap();
        assert_eq!(p.two_s(), 2);
        assert!((p.coeffs()[2] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(p.coeffs()[0].norm() < 1e-15);
        assert!(p.coeffs()[1].norm() < 1e-15);
    }

    #[test]
    fn middle_level_carries_binomial_weight() {
        // spin 1, ψ = (0,1,0): weight √C(2,1) = √2 on x¹ (sign from the
        // orientation convention).
        let state = StateVector::basis(3, 2).unwrap();
        let p = majorana_polynomial(&state).unwrap();
        assert!((p.coeffs()[1].norm() - 2.0f64.sqrt()).abs() < 1e-15);
        assert!((p.coeffs()[1] + c(2.0f64.sqrt(), 0.0)).norm() < 1e-15);

        // spin 2, ψ₂: weight √C(4,3) = 2 on x³.
        let state = StateVector::basis(5, 2).unwrap();
        let p = majorana_polynomial(&state).unwrap();
        assert!((p.coeffs()[3].norm() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn root_multiset_examples() {
        // P(x) = x² → {0, 0}.
        let state = StateVector::basis(3, 1).unwrap();
        let roots = polynomial_roots(&majorana_polynomial(&state).unwrap()).unwrap();
        assert_eq!(roots.finite().len(), 2);
        assert_eq!(roots.at_infinity(), 0);
        assert!(roots.finite().iter().all(|x| x.norm() < 1e-15));

        // Degree deficiency 1 → {0, ∞}.
        let state = StateVector::basis(3, 2).unwrap();
        let roots = polynomial_roots(&majorana_polynomial(&state).unwrap()).unwrap();
        assert_eq!(roots.finite().len(), 1);
        assert_eq!(roots.at_infinity(), 1);
        assert!(roots.finite()[0].norm() < 1e-15);
    }

    #[test]
    fn unit_root_hits_equator() {
        let p = SpherePoint::from_root(c(1.0, 0.0));
        assert!((p.theta() - PI / 2.0).abs() < 1e-15);
        assert_eq!(p.phi(), 0.0);
    }

    #[test]
    fn pole_conventions_for_all_small_systems() {
        for n in 2..=9usize {
            let north = state_constellation(&StateVector::basis(n, 1).unwrap()).unwrap();
            assert_eq!(north.len(), n - 1);
            assert!(north.points().iter().all(|p| p.theta() == 0.0 && p.phi() == 0.0));

            let south = state_constellation(&StateVector::basis(n, n).unwrap()).unwrap();
            assert!(south.points().iter().all(|p| p.theta() == PI && p.phi() == 0.0));
        }
    }

    #[test]
    fn antipodal_pair_for_middle_level() {
        let con = state_constellation(&StateVector::basis(3, 2).unwrap())
            .unwrap()
            .sorted();
        assert_eq!(con.points()[0].theta(), 0.0);
        assert_eq!(con.points()[1].theta(), PI);
    }

    #[test]
    fn bloch_vector_coincidence_for_spin_half() {
        // For j = 1/2 the single Majorana point is the Bloch vector.
        for k in 0..40 {
            let theta = 0.07 + 0.075 * k as f64; // avoid exact poles
            let phi = (1.3 * k as f64).rem_euclid(std::f64::consts::TAU);
            let state = StateVector::new(vec![
                c((theta / 2.0).cos(), 0.0),
                C64::from_polar((theta / 2.0).sin(), phi),
            ])
            .unwrap();
            let con = state_constellation(&state).unwrap();
            assert_eq!(con.len(), 1);
            let p = con.points()[0];
            assert!((p.theta() - theta).abs() < 1e-12, "theta {} vs {theta}", p.theta());
            let dphi = (p.phi() - phi).rem_euclid(std::f64::consts::TAU);
            assert!(dphi.min(std::f64::consts::TAU - dphi) < 1e-12, "phi {} vs {phi}", p.phi());
        }
    }

    #[test]
    fn reconstruction_from_roots() {
        // Random spin-2 states: expanding the monic polynomial from the
        // computed roots must reproduce the (normalized) coefficients.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let amps: Vec<C64> = (0..5)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let state = StateVector::normalized(amps).unwrap();
            let p = majorana_polynomial(&state).unwrap();
            let roots = polynomial_roots(&p).unwrap();
            if roots.at_infinity() > 0 {
                continue; // directly reconstructible cases only
            }
            let lead = p.coeffs()[4];
            let mut poly = vec![c(1.0, 0.0)];
            for &r in roots.finite() {
                let mut next = vec![c(0.0, 0.0); poly.len() + 1];
                for (i, &pc) in poly.iter().enumerate() {
                    next[i + 1] += pc;
                    next[i] -= pc * r;
                }
                poly = next;
            }
            for (i, &pc) in poly.iter().enumerate() {
                let expect = p.coeffs()[i] / lead;
                assert!(
                    (pc - expect).norm() < 1e-8,
                    "coefficient {i}: {pc} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn root_map_stability_for_separated_roots() {
        // Perturbing a state by ~1e−10 moves well-separated points by < 1e−4.
        let amps = vec![c(0.6, 0.1), c(0.3, -0.4), c(0.5, 0.2), c(-0.2, 0.3)];
        let state = StateVector::normalized(amps.clone()).unwrap();
        let base = state_constellation(&state).unwrap().sorted();
        let mut sep = f64::INFINITY;
        for (i, p) in base.points().iter().enumerate() {
            for q in base.points().iter().skip(i + 1) {
                sep = sep.min(p.angle_to(q));
            }
        }
        assert!(sep > 0.1, "fixture must have separated roots, sep = {sep}");

        let mut perturbed = amps;
        perturbed[1] += c(1e-10, -1e-10);
        let moved = state_constellation(&StateVector::normalized(perturbed).unwrap())
            .unwrap()
            .sorted();
        for (p, q) in base.points().iter().zip(moved.points()) {
            assert!(p.angle_to(q) < 1e-4);
        }
    }
}
