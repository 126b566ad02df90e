//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them). Tolerances are pinned in the
//! assertions.

use std::f64::consts::PI;
use std::process::Command;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use su2pulse::{
    build_sequence, cook_shore_hamiltonian, default_profile_grid, evolve_state, expm_hermitian,
    nmr_sequence, profile_scan, rigid_rotation_deviation, solve_bb_phases, solve_nb_phases,
    solve_pb_phases, state_constellation, track_trajectory, transition_probability, wigner_d,
    CayleyKlein, CompositeSequence, Envelope, PhaseSchedule, PulseSpec, SchemeKind, Spin,
    StateVector,
};

fn pass(criterion: usize, name: &str) {
    println!("[acceptance] criterion {criterion:2} {name}: PASS");
}

fn bb(m: usize) -> &'static PhaseSchedule {
    static BB5: OnceLock<PhaseSchedule> = OnceLock::new();
    static BB15: OnceLock<PhaseSchedule> = OnceLock::new();
    match m {
        5 => BB5.get_or_init(|| solve_bb_phases(5).unwrap()),
        15 => BB15.get_or_init(|| solve_bb_phases(15).unwrap()),
        _ => unreachable!(),
    }
}

fn nb5() -> &'static PhaseSchedule {
    static CELL: OnceLock<PhaseSchedule> = OnceLock::new();
    CELL.get_or_init(|| solve_nb_phases(5).unwrap())
}

fn pb7() -> &'static PhaseSchedule {
    static CELL: OnceLock<PhaseSchedule> = OnceLock::new();
    CELL.get_or_init(|| solve_pb_phases(7).unwrap())
}

fn random_unit_pair(rng: &mut ChaCha8Rng) -> CayleyKlein {
    let split = rng.random_range(0.0..1.0f64);
    let pa = rng.random_range(0.0..2.0 * PI);
    let pb = rng.random_range(0.0..2.0 * PI);
    CayleyKlein::new(
        C64::from_polar(split.sqrt(), pa),
        C64::from_polar((1.0 - split).sqrt(), pb),
    )
    .unwrap()
}

#[test]
fn criterion_01_wigner_d_fidelity() {
    let spin = Spin::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0);
    let r2 = 2.0f64.sqrt();
    for _ in 0..100 {
        let ck = random_unit_pair(&mut rng);
        let (a, b) = (ck.a(), ck.b());
        let d = wigner_d(spin, &ck, 0.0).unwrap();
        // The explicit three-level matrix; its lower-left entry is
        // (−b*)² = +b*² (the printed sign there breaks unitarity).
        let expect = [
            [a * a, r2 * a * b, b * b],
            [
                -r2 * a * b.conj(),
                C64::new(a.norm_sqr() - b.norm_sqr(), 0.0),
                r2 * a.conj() * b,
            ],
            [
                b.conj() * b.conj(),
                -r2 * a.conj() * b.conj(),
                a.conj() * a.conj(),
            ],
        ];
        for (i, row) in expect.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert!(
                    (d[(i, j)] - e).norm() < 1e-12,
                    "entry ({i},{j}): {} vs {e}",
                    d[(i, j)]
                );
            }
        }
    }
    pass(1, "Wigner D fidelity (explicit j=1 matrix, 100 random pairs)");
}

#[test]
fn criterion_02_ladder_fixture() {
    let spin = Spin::new(3).unwrap();
    let h = cook_shore_hamiltonian(spin, C64::new(PI, 0.0), 0.0, 0.0);
    let w = PI / 2.0f64.sqrt();
    for (i, j) in [(0usize, 1usize), (1, 2)] {
        assert!((h[(i, j)] - C64::new(w, 0.0)).norm() < 1e-14);
    }
    let mut values: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    for (got, expect) in values.iter().zip([-PI, 0.0, PI]) {
        assert!((got - expect).abs() < 1e-10, "eigenvalue {got} vs {expect}");
    }
    let u = expm_hermitian(&h, 1.0).unwrap();
    let p3 = u[(2, 0)].norm_sqr();
    assert!(p3 >= 1.0 - 1e-10, "inversion population {p3}");
    pass(2, "three-level π/√2 ladder fixture (eigenvalues and inversion)");
}

#[test]
fn criterion_03_single_pulse_inversion() {
    for levels in [2usize, 3, 5, 9] {
        let seq = CompositeSequence::new(
            vec![PulseSpec::rectangular(PI, 0.0).unwrap()],
            "pi",
        )
        .unwrap();
        let traj = evolve_state(&StateVector::basis(levels, 1).unwrap(), &seq, 100).unwrap();
        let p = traj.final_state().populations()[levels - 1];
        assert!(p >= 1.0 - 1e-10, "N={levels}: transfer {p}");
    }
    pass(3, "resonant area-π pulse fully inverts N = 2, 3, 5, 9");
}

#[test]
fn criterion_04_nmr_robustness() {
    for levels in [2usize, 3, 5] {
        let spin = Spin::new(levels).unwrap();
        let p30 =
            transition_probability(spin, &nmr_sequence(PI / 30.0).unwrap(), 1, levels).unwrap();
        let p10 =
            transition_probability(spin, &nmr_sequence(PI / 10.0).unwrap(), 1, levels).unwrap();
        assert!(p30 >= 0.99, "N={levels}: transfer at δ=π/30 is {p30}");
        assert!(p10 >= 0.96, "N={levels}: transfer at δ=π/10 is {p10}");
    }
    pass(4, "NMR composite fidelity (≥0.99 at π/30, ≥0.96 at π/10; N = 2, 3, 5)");
}

#[test]
fn criterion_05_broadband_inversion() {
    let spin3 = Spin::new(3).unwrap();
    let seq =
        build_sequence(SchemeKind::Broadband, bb(5), 0.3 * PI, Envelope::Rectangular).unwrap();
    let p = transition_probability(spin3, &seq, 1, 3).unwrap();
    assert!(p >= 0.99, "M=5, N=3 at δ=0.3π: {p}");

    let spin5 = Spin::new(5).unwrap();
    let seq =
        build_sequence(SchemeKind::Broadband, bb(15), 0.4 * PI, Envelope::Rectangular).unwrap();
    let p = transition_probability(spin5, &seq, 1, 5).unwrap();
    assert!(p >= 0.99, "M=15, N=5 at δ=0.4π: {p}");
    pass(5, "broadband inversion (M=5 N=3 at 0.3π; M=15 N=5 at 0.4π)");
}

#[test]
fn criterion_06_profile_power_law() {
    let grid = default_profile_grid();
    let schedules: Vec<(&PhaseSchedule, SchemeKind)> = vec![
        (bb(5), SchemeKind::Broadband),
        (bb(15), SchemeKind::Broadband),
        (nb5(), SchemeKind::Narrowband),
        (pb7(), SchemeKind::Passband),
    ];
    for (schedule, kind) in schedules {
        let base = profile_scan(Spin::new(2).unwrap(), kind, schedule, &grid).unwrap();
        for levels in [3usize, 5, 9] {
            let curve = profile_scan(Spin::new(levels).unwrap(), kind, schedule, &grid).unwrap();
            let two_j = (levels - 1) as i32;
            for (k, (p, p2)) in curve
                .probabilities()
                .iter()
                .zip(base.probabilities())
                .enumerate()
            {
                assert!(
                    (p - p2.powi(two_j)).abs() < 1e-10,
                    "{kind} M={} N={levels} grid point {k}",
                    schedule.count()
                );
            }
        }
    }
    pass(6, "stored-schedule profiles equal the N=2 profile to the power 2j");
}

#[test]
fn criterion_07_lift_vs_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC7);
    for case in 0..200 {
        let levels = rng.random_range(2..=9usize);
        let spin = Spin::new(levels).unwrap();
        let m = rng.random_range(1..=5usize);
        let pulses: Vec<PulseSpec> = (0..m)
            .map(|_| {
                PulseSpec::new(
                    rng.random_range(0.0..2.0 * PI),
                    rng.random_range(0.0..2.0 * PI),
                    0.0,
                    Envelope::Rectangular,
                    1.0,
                )
                .unwrap()
            })
            .collect();
        let seq = CompositeSequence::new(pulses.clone(), "rand").unwrap();
        let initial = StateVector::basis(levels, rng.random_range(1..=levels)).unwrap();

        let lift = evolve_state(&initial, &seq, 4).unwrap();
        let lift_pops = lift.final_state().populations();

        let mut u = nalgebra::DMatrix::<C64>::identity(levels, levels);
        for p in &pulses {
            let omega0 = C64::from_polar(p.area() / p.duration(), -p.phase());
            let h = cook_shore_hamiltonian(spin, omega0, 0.0, 0.0);
            u = expm_hermitian(&h, p.duration()).unwrap() * u;
        }
        let direct = u * initial.amplitudes();
        for (k, amp) in direct.iter().enumerate() {
            assert!(
                (amp.norm_sqr() - lift_pops[k]).abs() < 1e-9,
                "case {case}, N={levels}, population {k}"
            );
        }
    }
    pass(7, "D-matrix lift vs direct exponentiation on 200 random sequences");
}

#[test]
fn criterion_08_palindromic_transfer() {
    let spin5 = Spin::new(5).unwrap();
    let p = transition_probability(spin5, &nmr_sequence(0.0).unwrap(), 2, 4).unwrap();
    assert!(p >= 0.999, "NMR ψ2→ψ4 in N=5: {p}");

    let spin9 = Spin::new(9).unwrap();
    let seq = build_sequence(SchemeKind::Broadband, bb(15), 0.0, Envelope::Rectangular).unwrap();
    let p28 = transition_probability(spin9, &seq, 2, 8).unwrap();
    let p37 = transition_probability(spin9, &seq, 3, 7).unwrap();
    assert!(p28 >= 0.99, "BB15 ψ2→ψ8 in N=9: {p28}");
    assert!(p37 >= 0.99, "BB15 ψ3→ψ7 in N=9: {p37}");
    pass(8, "palindromic transfers (NMR 2↔4 in N=5; BB15 2↔8 and 3↔7 in N=9)");
}

#[test]
fn criterion_09_majorana_conventions_and_rigidity() {
    // Pole conventions.
    for levels in 2..=9usize {
        let north = state_constellation(&StateVector::basis(levels, 1).unwrap()).unwrap();
        assert_eq!(north.len(), levels - 1);
        assert!(north.points().iter().all(|p| p.theta() == 0.0));
    }
    let mid = state_constellation(&StateVector::basis(3, 2).unwrap()).unwrap().sorted();
    assert_eq!(mid.points()[0].theta(), 0.0);
    assert!((mid.points()[1].theta() - PI).abs() < 1e-15);

    // Rigidity over every trajectory the suite simulates.
    let mut suite: Vec<(CompositeSequence, usize, usize)> = Vec::new();
    for levels in [2usize, 3, 5, 9] {
        suite.push((
            CompositeSequence::new(vec![PulseSpec::rectangular(PI, 0.0).unwrap()], "pi").unwrap(),
            levels,
            1,
        ));
    }
    suite.push((nmr_sequence(0.0).unwrap(), 5, 1));
    suite.push((nmr_sequence(0.0).unwrap(), 5, 2));
    suite.push((nmr_sequence(PI / 30.0).unwrap(), 5, 1));
    for delta in [0.0, 0.3 * PI] {
        suite.push((
            build_sequence(SchemeKind::Broadband, bb(5), delta, Envelope::Rectangular).unwrap(),
            3,
            1,
        ));
    }
    for start in [2usize, 3] {
        suite.push((
            build_sequence(SchemeKind::Broadband, bb(15), 0.0, Envelope::Rectangular).unwrap(),
            9,
            start,
        ));
    }
    for (seq, levels, start) in suite {
        let traj = evolve_state(&StateVector::basis(levels, start).unwrap(), &seq, 100).unwrap();
        let tracks = track_trajectory(&traj).unwrap();
        let dev = rigid_rotation_deviation(&tracks);
        assert!(
            dev <= 1e-8,
            "N={levels}, start ψ{start}, {}: deviation {dev:e}",
            seq.label()
        );
    }
    pass(9, "Majorana pole conventions and ≤1e−8 rigid-rotation deviation");
}

#[test]
fn criterion_10_flatness_and_narrowband_windows() {
    // Every solved flat-top schedule with M ≥ 3 is flatter than a single pulse.
    for m in [3usize, 5, 7, 15] {
        let schedule = solve_bb_phases(m).unwrap();
        assert!(
            schedule.flat_order() > 2,
            "M={m}: flat order {}",
            schedule.flat_order()
        );
    }

    // Narrowband suppression: the window with P < 1e−4 around zero area is
    // strictly wider than the single pulse's, and it does not shrink with N,
    // while the complementary pass band narrows strictly.
    let grid: Vec<f64> = (0..2001).map(|k| -PI + PI * k as f64 / 1000.0).collect();
    let suppressed_halfwidth = |probs: &[f64]| -> f64 {
        // contiguous run of P < 1e−4 starting at δ = −π (area 0)
        let mut width = 0.0;
        for (d, p) in grid.iter().zip(probs) {
            if *p < 1e-4 {
                width = d + PI;
            } else {
                break;
            }
        }
        width
    };
    let passband_width = |probs: &[f64]| -> f64 {
        grid.iter()
            .zip(probs)
            .filter(|(_, p)| **p >= 0.01)
            .count() as f64
            * (PI / 1000.0)
    };

    let single2 = profile_scan(
        Spin::new(2).unwrap(),
        SchemeKind::Single,
        &PhaseSchedule::single(),
        &grid,
    )
    .unwrap();
    let mut last_pass = f64::INFINITY;
    let mut last_supp = 0.0;
    for levels in [2usize, 3, 5, 9] {
        let curve = profile_scan(Spin::new(levels).unwrap(), SchemeKind::Narrowband, nb5(), &grid)
            .unwrap();
        let supp = suppressed_halfwidth(curve.probabilities());
        let pass_w = passband_width(curve.probabilities());
        if levels == 2 {
            let single_supp = suppressed_halfwidth(single2.probabilities());
            assert!(
                supp > single_supp,
                "NB window {supp} not wider than single-pulse {single_supp}"
            );
        }
        assert!(supp >= last_supp, "suppression window shrank at N={levels}");
        assert!(pass_w < last_pass, "pass band failed to narrow at N={levels}");
        last_supp = supp;
        last_pass = pass_w;
    }
    pass(10, "flat orders exceed 2 and narrowband windows narrow with N");
}

#[test]
fn criterion_11_cli_determinism() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("phases.json");
    let runs: Vec<Vec<&str>> = vec![
        vec!["simulate", "--levels", "5", "--scheme", "nmr", "--delta", "0.104", "--samples", "50"],
        vec!["profile", "--levels", "3", "--scheme", "broadband", "--pulses", "5",
             "--grid", "-1.0:1.0:101"],
        vec!["majorana", "--levels", "3", "--scheme", "broadband", "--pulses", "5",
             "--samples", "40"],
        vec!["solve-phases", "--scheme", "passband", "--pulses", "7"],
    ];
    for args in runs {
        let once = Command::new(env!("CARGO_BIN_EXE_su2pulse"))
            .current_dir(dir.path())
            .env("SU2PULSE_CACHE", &cache)
            .args(&args)
            .output()
            .unwrap();
        assert!(
            once.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&once.stderr)
        );
        let again = Command::new(env!("CARGO_BIN_EXE_su2pulse"))
            .current_dir(dir.path())
            .env("SU2PULSE_CACHE", &cache)
            .args(&args)
            .output()
            .unwrap();
        assert!(again.status.success());
        assert_eq!(
            once.stdout, again.stdout,
            "{args:?}: outputs differ between identical runs"
        );
    }
    pass(11, "byte-identical CLI outputs across repeated warm-cache runs");
}
