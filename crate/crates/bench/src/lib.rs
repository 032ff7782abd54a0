//! Shared inputs for the criterion benchmarks.

use std::f64::consts::TAU;

use phaselock::{PhaseKind, PhaseSeries};

/// Frequency-modulated 40 Hz carrier sampled at 1 kHz.
pub fn fm_signal(n: usize, offset: f64) -> Vec<f64> {
    let dt = 1e-3;
    (0..n)
        .map(|i| {
            let t = i as f64 * dt;
            (TAU * 40.0 * t + 6.0 * (TAU * 0.37 * t).sin() + offset).sin()
        })
        .collect()
}

/// Wrapped phases of two drifting oscillators with a weak mutual pull.
pub fn drifting_phases(n: usize) -> (PhaseSeries, PhaseSeries) {
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for i in 0..n {
        let d = (b - a).sin();
        a += 0.31 + 0.05 * d + 0.02 * (i as f64 * 0.013).sin();
        b += 0.30 - 0.05 * d;
        xs.push(a.rem_euclid(TAU));
        ys.push(b.rem_euclid(TAU));
    }
    (
        PhaseSeries::new(xs, 1.0, PhaseKind::WrappedPhase).expect("finite"),
        PhaseSeries::new(ys, 1.0, PhaseKind::WrappedPhase).expect("finite"),
    )
}
