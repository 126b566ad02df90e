//! Point-identity tracking of Majorana constellations along a trajectory.

use super::{state_constellation, MajoranaConstellation, SpherePoint};
use crate::error::{Error, Result};
use crate::evolve::Trajectory;

/// 2S point tracks sharing one time axis; `tracks[i][k]` is point i at
/// sample k.
#[derive(Debug, Clone)]
pub struct PointTracks {
    times: Vec<f64>,
    tracks: Vec<Vec<SpherePoint>>,
}

impl PointTracks {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn tracks(&self) -> &[Vec<SpherePoint>] {
        &self.tracks
    }

    pub fn point_count(&self) -> usize {
        self.tracks.len()
    }
}

/// Exact min-cost assignments are enumerated for up to this many points.
const EXACT_ASSIGNMENT_LIMIT: usize = 8;

/// Track constellation points along a trajectory.
///
/// Each step is matched to the previous one by the assignment minimizing the
/// total great-circle displacement (exact enumeration for 2S ≤ 8, greedy
/// nearest-neighbor beyond). Ties keep the previous track indices, so
/// coincident points (e.g. a ψ₁ start) stay on their tracks.
pub fn track_trajectory(traj: &Trajectory) -> Result<PointTracks> {
    if traj.is_empty() {
        return Err(Error::invalid("cannot track an empty trajectory"));
    }
    let levels = traj.states()[0].levels();
    let n_pts = levels - 1;

    let mut constellations = Vec::with_capacity(traj.len());
    for state in traj.states() {
        if state.levels() != levels {
            return Err(Error::DimensionMismatch {
                expected: levels,
                got: state.levels(),
            });
        }
        constellations.push(state_constellation(state)?);
    }

    let mut tracks: Vec<Vec<SpherePoint>> = vec![Vec::with_capacity(traj.len()); n_pts];
    let first = constellations[0].sorted();
    for (track, &point) in tracks.iter_mut().zip(first.points()) {
        track.push(point);
    }

    for constellation in &constellations[1..] {
        let previous: Vec<SpherePoint> = tracks.iter().map(|t| *t.last().unwrap()).collect();
        let assignment = match_points(&previous, constellation);
        for (i, track) in tracks.iter_mut().enumerate() {
            track.push(constellation.points()[assignment[i]]);
        }
    }

    Ok(PointTracks {
        times: traj.times().to_vec(),
        tracks,
    })
}

/// For each previous point, the index of its matched new point.
fn match_points(previous: &[SpherePoint], next: &MajoranaConstellation) -> Vec<usize> {
    let n = previous.len();
    let cost: Vec<Vec<f64>> = previous
        .iter()
        .map(|p| next.points().iter().map(|q| p.angle_to(q)).collect())
        .collect();

    // Identity shortcut: if keeping indices already reaches the row-minimum
    // lower bound, it is optimal and, being lexicographically first, also the
    // stable choice for ties.
    let identity_cost: f64 = (0..n).map(|i| cost[i][i]).sum();
    let lower_bound: f64 = cost
        .iter()
        .map(|row| row.iter().copied().fold(f64::INFINITY, f64::min))
        .sum();
    if identity_cost <= lower_bound + 1e-15 {
        return (0..n).collect();
    }

    if n <= EXACT_ASSIGNMENT_LIMIT {
        exact_assignment(&cost)
    } else {
        greedy_assignment(&cost)
    }
}

/// Depth-first enumeration in lexicographic order with branch-and-bound;
/// the first assignment attaining the minimum is kept, which preserves
/// previous indices on ties.
fn exact_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let mut best = f64::INFINITY;
    let mut best_assign = (0..n).collect::<Vec<_>>();
    let mut used = vec![false; n];
    let mut current = vec![0usize; n];

    fn dfs(
        row: usize,
        partial: f64,
        cost: &[Vec<f64>],
        used: &mut [bool],
        current: &mut [usize],
        best: &mut f64,
        best_assign: &mut [usize],
    ) {
        let n = cost.len();
        if partial >= *best {
            return;
        }
        if row == n {
            *best = partial;
            best_assign.copy_from_slice(current);
            return;
        }
        for col in 0..n {
            if used[col] {
                continue;
            }
            used[col] = true;
            current[row] = col;
            dfs(row + 1, partial + cost[row][col], cost, used, current, best, best_assign);
            used[col] = false;
        }
    }

    dfs(0, 0.0, cost, &mut used, &mut current, &mut best, &mut best_assign);
    best_assign
}

fn greedy_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let mut taken = vec![false; n];
    let mut out = vec![0usize; n];
    for row in 0..n {
        let mut pick = usize::MAX;
        let mut pick_cost = f64::INFINITY;
        for (col, taken) in taken.iter().enumerate() {
            if !taken && cost[row][col] < pick_cost {
                pick = col;
                pick_cost = cost[row][col];
            }
        }
        taken[pick] = true;
        out[row] = pick;
    }
    out
}

/// Maximum change, over time and over point pairs, of the pairwise
/// great-circle distances relative to the first sample. SU(2)-generated
/// evolution rotates the constellation rigidly, so this stays at rounding
/// level; a single point (or none) gives 0 by convention.
pub fn rigid_rotation_deviation(tracks: &PointTracks) -> f64 {
    let n = tracks.point_count();
    if n < 2 || tracks.times.is_empty() {
        return 0.0;
    }
    let samples = tracks.times.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let d0 = tracks.tracks[i][0].angle_to(&tracks.tracks[j][0]);
            for k in 1..samples {
                let d = tracks.tracks[i][k].angle_to(&tracks.tracks[j][k]);
                worst = worst.max((d - d0).abs());
            }
        }
    }
    worst
}
