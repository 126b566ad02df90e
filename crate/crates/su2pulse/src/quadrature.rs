//! Small fixed-order Gauss–Legendre quadrature for smooth envelopes.

/// 5-point Gauss–Legendre nodes (on [-1, 1]) and weights.
const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

/// ∫_a^b f dt with a single 5-point panel.
pub fn gl5<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in GL5_NODES.iter().zip(GL5_WEIGHTS.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// ∫_a^b f dt with `panels` equal 5-point panels.
pub fn gl5_composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(1);
    let step = (b - a) / n as f64;
    (0..n)
        .map(|k| gl5(f, a + k as f64 * step, a + (k + 1) as f64 * step))
        .sum()
}
