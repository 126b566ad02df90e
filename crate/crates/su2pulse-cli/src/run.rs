//! Subcommand implementations: assemble sequences, run the core library,
//! shape the results as CSV (and SVG for the sphere view).

use su2pulse::{
    build_sequence, evolve_state, profile_scan, track_trajectory, CompositeSequence, Envelope,
    PhaseCache, PhaseSchedule, PulseSpec, SchemeKind, Spin, StateVector,
};

use crate::config::RunConfig;
use crate::csv::{Cell, CsvDocument};
use crate::CliError;

fn schedule_for(
    kind: SchemeKind,
    pulses: usize,
    cache: &PhaseCache,
) -> Result<PhaseSchedule, CliError> {
    match kind {
        SchemeKind::Single => Ok(PhaseSchedule::single()),
        SchemeKind::Nmr => Ok(PhaseSchedule::nmr()),
        SchemeKind::Broadband | SchemeKind::Narrowband | SchemeKind::Passband => {
            cache.solve_or_load(kind, pulses).map_err(CliError::from)
        }
    }
}

/// The pulse train for a run. A pulse count of 0 is the documented idle run:
/// one zero-area pulse, i.e. free evolution over one time unit.
fn scheme_sequence(cfg: &RunConfig, cache: &PhaseCache) -> Result<CompositeSequence, CliError> {
    if cfg.pulses == 0 {
        let idle = PulseSpec::new(0.0, 0.0, 0.0, Envelope::Rectangular, 1.0)
            .map_err(CliError::from)?;
        return CompositeSequence::new(vec![idle], "idle").map_err(CliError::from);
    }
    let kind = cfg.scheme_kind();
    let schedule = schedule_for(kind, cfg.pulses, cache)?;
    build_sequence(kind, &schedule, cfg.delta, cfg.envelope_kind()).map_err(CliError::from)
}

/// Time-resolved populations: columns `time,pop_1..pop_N`.
pub fn run_simulate(cfg: &RunConfig, cache: &PhaseCache) -> Result<CsvDocument, CliError> {
    let seq = scheme_sequence(cfg, cache)?;
    let initial = StateVector::basis(cfg.levels, cfg.initial_level).map_err(CliError::from)?;
    let traj = evolve_state(&initial, &seq, cfg.samples).map_err(CliError::from)?;

    let mut header = vec!["time".to_string()];
    header.extend((1..=cfg.levels).map(|n| format!("pop_{n}")));
    let mut doc = CsvDocument::new(header);
    for (t, state) in traj.times().iter().zip(traj.states()) {
        let mut row = Vec::with_capacity(cfg.levels + 1);
        row.push(Cell::Float(*t));
        row.extend(state.populations().into_iter().map(Cell::Float));
        doc.push_row(row);
    }
    Ok(doc)
}

/// Robustness profile: columns `delta,probability`, one row per grid point.
pub fn run_profile(cfg: &RunConfig, cache: &PhaseCache) -> Result<CsvDocument, CliError> {
    if cfg.pulses == 0 {
        return Err(CliError::usage(
            "--pulses: a profile scan needs at least one pulse".to_string(),
        ));
    }
    let kind = cfg.scheme_kind();
    let schedule = schedule_for(kind, cfg.pulses, cache)?;
    let spin = Spin::new(cfg.levels).map_err(CliError::from)?;
    let curve = profile_scan(spin, kind, &schedule, &cfg.grid.points()).map_err(CliError::from)?;

    let mut doc = CsvDocument::new(vec!["delta".to_string(), "probability".to_string()]);
    for (d, p) in curve.deltas().iter().zip(curve.probabilities()) {
        doc.push_row(vec![Cell::Float(*d), Cell::Float(*p)]);
    }
    Ok(doc)
}

/// Majorana point tracks: columns `time,point_index,theta,phi`; optionally a
/// rendered SVG of the sphere.
pub fn run_majorana(
    cfg: &RunConfig,
    cache: &PhaseCache,
) -> Result<(CsvDocument, Option<String>), CliError> {
    let seq = scheme_sequence(cfg, cache)?;
    let initial = StateVector::basis(cfg.levels, cfg.initial_level).map_err(CliError::from)?;
    let traj = evolve_state(&initial, &seq, cfg.samples).map_err(CliError::from)?;
    let tracks = track_trajectory(&traj).map_err(CliError::from)?;

    let mut doc = CsvDocument::new(vec![
        "time".to_string(),
        "point_index".to_string(),
        "theta".to_string(),
        "phi".to_string(),
    ]);
    for (k, t) in tracks.times().iter().enumerate() {
        for (idx, track) in tracks.tracks().iter().enumerate() {
            doc.push_row(vec![
                Cell::Float(*t),
                Cell::Int(idx as i64),
                Cell::Float(track[k].theta()),
                Cell::Float(track[k].phi()),
            ]);
        }
    }
    let svg = cfg.svg.is_some().then(|| crate::svg::render_tracks(&tracks));
    Ok((doc, svg))
}

/// Solve (or load) a composite schedule: columns `k,phase`; updates the cache.
pub fn run_solve_phases(cfg: &RunConfig, cache: &PhaseCache) -> Result<CsvDocument, CliError> {
    let kind = cfg.scheme_kind();
    if !kind.is_solved() {
        return Err(CliError::usage(format!(
            "--scheme: solve-phases needs broadband, narrowband or passband, got {kind}"
        )));
    }
    if cfg.pulses == 0 {
        return Err(CliError::usage(
            "--pulses: a schedule needs at least one pulse".to_string(),
        ));
    }
    let schedule = cache.solve_or_load(kind, cfg.pulses).map_err(CliError::from)?;
    let mut doc = CsvDocument::new(vec!["k".to_string(), "phase".to_string()]);
    for (k, phase) in schedule.phases().iter().enumerate() {
        doc.push_row(vec![Cell::Int(k as i64 + 1), Cell::Float(*phase)]);
    }
    Ok(doc)
}
