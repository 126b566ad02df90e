//! Orthographic sphere projection of Majorana point tracks.
//!
//! Fixed 600×600 viewport, view along the −x axis with the North pole up.
//! Front-hemisphere segments are solid, back-hemisphere segments dashed.
//! Presentational output only.

use std::fmt::Write as _;

use su2pulse::PointTracks;

const SIZE: f64 = 600.0;
const RADIUS: f64 = 260.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
];

fn project(v: [f64; 3]) -> (f64, f64, bool) {
    let u = SIZE / 2.0 + RADIUS * v[1];
    let w = SIZE / 2.0 - RADIUS * v[2];
    (u, w, v[0] >= 0.0)
}

pub fn render_tracks(tracks: &PointTracks) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIZE} {SIZE}\" width=\"{SIZE}\" height=\"{SIZE}\">"
    );
    out.push_str(
        "<style>.front{fill:none;stroke-width:2}.back{fill:none;stroke-width:1.2;stroke-dasharray:4 3;opacity:.55}</style>\n",
    );
    let _ = writeln!(
        out,
        "<circle cx=\"{}\" cy=\"{}\" r=\"{RADIUS}\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>",
        SIZE / 2.0,
        SIZE / 2.0
    );
    // Equator guide (projects to a horizontal line segment).
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ccc\" stroke-width=\"0.7\"/>",
        SIZE / 2.0 - RADIUS,
        SIZE / 2.0,
        SIZE / 2.0 + RADIUS,
        SIZE / 2.0
    );

    for (idx, track) in tracks.tracks().iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        // Split into runs of constant hemisphere so dash styles apply.
        let mut run: Vec<(f64, f64)> = Vec::new();
        let mut run_front = true;
        let flush = |run: &mut Vec<(f64, f64)>, front: bool, out: &mut String| {
            if run.len() >= 2 {
                let class = if front { "front" } else { "back" };
                let points: Vec<String> =
                    run.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    out,
                    "<polyline class=\"{class}\" stroke=\"{color}\" points=\"{}\"/>",
                    points.join(" ")
                );
            }
            run.clear();
        };
        for (k, point) in track.iter().enumerate() {
            let (x, y, front) = project(point.unit_vector());
            if k == 0 {
                run_front = front;
            }
            if front != run_front {
                run.push((x, y)); // close the run at the crossing sample
                flush(&mut run, run_front, &mut out);
                run_front = front;
            }
            run.push((x, y));
        }
        flush(&mut run, run_front, &mut out);

        if let Some(first) = track.first() {
            let (x, y, _) = project(first.unit_vector());
            let _ = writeln!(
                out,
                "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"{color}\"/>"
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
