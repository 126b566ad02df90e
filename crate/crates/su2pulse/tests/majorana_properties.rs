//! Constellation-level invariants: SU(2) evolution acts on Majorana points as
//! a rigid rotation, and tracked trajectories reproduce the documented
//! pole-to-pole motions.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use su2pulse::{
    build_sequence, evolve_state, nmr_sequence, rigid_rotation_deviation, sequence_propagator,
    solve_bb_phases, state_constellation, track_trajectory, C64, CompositeSequence, Envelope,
    PhaseSchedule, PulseSpec, SchemeKind, SpherePoint, Spin, StateVector,
};

fn bb5() -> &'static PhaseSchedule {
    static CELL: OnceLock<PhaseSchedule> = OnceLock::new();
    CELL.get_or_init(|| solve_bb_phases(5).unwrap())
}

fn random_state(rng: &mut ChaCha8Rng, levels: usize) -> StateVector {
    let amps: Vec<C64> = (0..levels)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(amps).unwrap()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Rotation mapping the orthonormal frame of (u1, u2) onto that of (v1, v2).
fn frame_rotation(u1: [f64; 3], u2: [f64; 3], v1: [f64; 3], v2: [f64; 3]) -> [[f64; 3]; 3] {
    let frame = |a: [f64; 3], b: [f64; 3]| {
        let e1 = normalize(a);
        let proj = b[0] * e1[0] + b[1] * e1[1] + b[2] * e1[2];
        let e2 = normalize([b[0] - proj * e1[0], b[1] - proj * e1[1], b[2] - proj * e1[2]]);
        let e3 = cross(e1, e2);
        [e1, e2, e3]
    };
    let f = frame(u1, u2);
    let g = frame(v1, v2);
    // R = G·Fᵀ with frames stored row-wise as basis vectors.
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = (0..3).map(|k| g[k][i] * f[k][j]).sum();
        }
    }
    r
}

fn apply(r: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
        r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
        r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2],
    ]
}

fn angle_between(a: [f64; 3], b: [f64; 3]) -> f64 {
    let c = cross(a, b);
    let cn = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    let d = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    cn.atan2(d)
}

/// Greedy matching of rotated source points onto target points; all must
/// land within `tol`.
fn constellations_match(rotated: &[[f64; 3]], target: &[SpherePoint], tol: f64) -> bool {
    let mut used = vec![false; target.len()];
    for p in rotated {
        let mut best = usize::MAX;
        let mut best_angle = f64::INFINITY;
        for (i, q) in target.iter().enumerate() {
            if used[i] {
                continue;
            }
            let a = angle_between(*p, q.unit_vector());
            if a < best_angle {
                best_angle = a;
                best = i;
            }
        }
        if best == usize::MAX || best_angle > tol {
            return false;
        }
        used[best] = true;
    }
    true
}

#[test]
fn unitary_evolution_rotates_constellations_rigidly() {
    // 500 random state/propagator pairs: fit the rotation from two
    // well-separated points, then every other point must follow it.
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    let mut fitted = 0usize;
    for _ in 0..500 {
        let levels = rng.random_range(3..=7usize);
        let spin = Spin::new(levels).unwrap();
        let state = random_state(&mut rng, levels);

        let pulse = PulseSpec::new(
            rng.random_range(0.1..2.0 * PI),
            rng.random_range(0.0..2.0 * PI),
            rng.random_range(-1.5..1.5),
            Envelope::Rectangular,
            1.0,
        )
        .unwrap();
        let seq = CompositeSequence::new(vec![pulse], "u").unwrap();
        let u = sequence_propagator(spin, &seq).unwrap();
        let evolved = StateVector::new((u * state.amplitudes()).iter().copied().collect()).unwrap();

        let before = state_constellation(&state).unwrap();
        let after = state_constellation(&evolved).unwrap();

        // Pick two source points separated by a workable angle.
        let pts = before.points();
        let mut pair = None;
        'outer: for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let sep = pts[i].angle_to(&pts[j]);
                if sep > 0.3 && sep < PI - 0.3 {
                    pair = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = pair else { continue };
        let (u1, u2) = (pts[i].unit_vector(), pts[j].unit_vector());
        let sep = pts[i].angle_to(&pts[j]);

        // Try every target pair with the same separation until one rotation
        // explains the whole constellation.
        let mut ok = false;
        let tpts = after.points();
        'fit: for k in 0..tpts.len() {
            for l in 0..tpts.len() {
                if k == l {
                    continue;
                }
                if (tpts[k].angle_to(&tpts[l]) - sep).abs() > 1e-6 {
                    continue;
                }
                let r = frame_rotation(u1, u2, tpts[k].unit_vector(), tpts[l].unit_vector());
                let rotated: Vec<[f64; 3]> =
                    pts.iter().map(|p| apply(&r, p.unit_vector())).collect();
                if constellations_match(&rotated, tpts, 1e-7) {
                    ok = true;
                    break 'fit;
                }
            }
        }
        assert!(ok, "no rigid rotation explains the evolved constellation");
        fitted += 1;
    }
    assert!(fitted > 400, "too few usable cases: {fitted}");
}

#[test]
fn composite_trajectories_stay_rigid() {
    // Spec examples: an antipodal pair under any composite sequence, and a
    // palindromic NMR transfer, keep all pairwise distances.
    let nmr = nmr_sequence(0.0).unwrap();
    let traj = evolve_state(&StateVector::basis(5, 2).unwrap(), &nmr, 100).unwrap();
    let tracks = track_trajectory(&traj).unwrap();
    assert!(rigid_rotation_deviation(&tracks) <= 1e-8);

    let bb = build_sequence(SchemeKind::Broadband, bb5(), 0.1, Envelope::Rectangular).unwrap();
    let traj = evolve_state(&StateVector::basis(3, 2).unwrap(), &bb, 100).unwrap();
    let tracks = track_trajectory(&traj).unwrap();
    assert!(rigid_rotation_deviation(&tracks) <= 1e-8);
}

#[test]
fn bb5_tracks_run_north_to_south() {
    // Five π pulses steer both overlapping points from the North to the
    // South pole; per-pulse segment boundaries are the sample indices.
    let seq = build_sequence(SchemeKind::Broadband, bb5(), 0.0, Envelope::Rectangular).unwrap();
    let samples = 120;
    let traj = evolve_state(&StateVector::basis(3, 1).unwrap(), &seq, samples).unwrap();
    let tracks = track_trajectory(&traj).unwrap();
    assert_eq!(tracks.point_count(), 2);
    assert_eq!(tracks.times().len(), 5 * samples + 1);
    for track in tracks.tracks() {
        assert_eq!(track[0].theta(), 0.0);
        let final_theta = track.last().unwrap().theta();
        assert!((final_theta - PI).abs() < 1e-4, "final θ = {final_theta}");
    }
    assert!(rigid_rotation_deviation(&tracks) <= 1e-8);
}

#[test]
fn nmr_tracks_end_at_the_south_pole() {
    let traj = evolve_state(&StateVector::basis(3, 1).unwrap(), &nmr_sequence(0.0).unwrap(), 100)
        .unwrap();
    let tracks = track_trajectory(&traj).unwrap();
    for track in tracks.tracks() {
        assert_eq!(track[0].theta(), 0.0);
        let end = track.last().unwrap().theta();
        assert!((end - PI).abs() < 1e-6, "final θ = {end}");
    }
}

#[test]
fn stationary_state_yields_constant_antipodal_tracks() {
    // A zero-area pulse leaves ψ₂ of a three-level system alone: one track
    // pinned to each pole.
    let idle = CompositeSequence::new(
        vec![PulseSpec::new(0.0, 0.0, 0.0, Envelope::Rectangular, 1.0).unwrap()],
        "idle",
    )
    .unwrap();
    let traj = evolve_state(&StateVector::basis(3, 2).unwrap(), &idle, 10).unwrap();
    let tracks = track_trajectory(&traj).unwrap();
    let thetas: Vec<f64> = tracks.tracks().iter().map(|t| t[0].theta()).collect();
    assert_eq!(thetas, vec![0.0, PI]);
    for track in tracks.tracks() {
        for p in track {
            assert_eq!(p.theta(), track[0].theta());
        }
    }
}

#[test]
fn tracking_rejects_empty_or_mixed_input() {
    let idle = CompositeSequence::new(
        vec![PulseSpec::new(0.0, 0.0, 0.0, Envelope::Rectangular, 1.0).unwrap()],
        "idle",
    )
    .unwrap();
    let traj = evolve_state(&StateVector::basis(2, 1).unwrap(), &idle, 5).unwrap();
    let tracks = track_trajectory(&traj).unwrap();
    assert_eq!(tracks.point_count(), 1);
    assert_eq!(rigid_rotation_deviation(&tracks), 0.0);
}
