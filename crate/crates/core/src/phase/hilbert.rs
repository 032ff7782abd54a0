//! Discrete analytic signal and instantaneous phase.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::circular::{wrap, PhaseKind, PhaseSeries};
use crate::error::{Error, Result};

/// Fraction of samples dropped at each end after the transform.
pub const EDGE_DISCARD: f64 = 0.05;

const MIN_LEN: usize = 64;

/// Retained part of an analytic signal. Sample `k` corresponds to index
/// `offset + k` of the input.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSeries {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub dt: f64,
    pub edge_discard: f64,
    pub offset: usize,
}

impl AnalyticSeries {
    pub fn new(re: Vec<f64>, im: Vec<f64>, dt: f64, edge_discard: f64, offset: usize) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::InvalidInput("real and imaginary parts differ in length".into()));
        }
        if !(0.0..=0.25).contains(&edge_discard) {
            return Err(Error::InvalidInput(format!("edge discard {edge_discard} outside [0, 0.25]")));
        }
        Ok(Self { re, im, dt, edge_discard, offset })
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn amplitude(&self) -> Vec<f64> {
        self.re.iter().zip(&self.im).map(|(r, i)| r.hypot(*i)).collect()
    }
}

/// Full-length analytic signal of the mean-removed input (no edge discard).
pub(crate) fn analytic_full(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = x.iter().map(|v| Complex64::new(v - mean, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    // keep DC (and Nyquist for even n), double positive, zero negative
    let half = n / 2;
    let positive_end = if n.is_multiple_of(2) { half } else { half + 1 };
    for c in &mut buf[1..positive_end] {
        *c *= 2.0;
    }
    for c in &mut buf[half + 1..] {
        *c = Complex64::new(0.0, 0.0);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

pub fn analytic_signal(signal: &PhaseSeries) -> Result<AnalyticSeries> {
    let x = signal.samples();
    if x.len() < MIN_LEN {
        return Err(Error::InsufficientData(format!(
            "analytic signal needs at least {MIN_LEN} samples, got {}",
            x.len()
        )));
    }
    let full = analytic_full(x);
    let cut = (x.len() as f64 * EDGE_DISCARD).floor() as usize;
    let kept = &full[cut..x.len() - cut];
    AnalyticSeries::new(
        kept.iter().map(|c| c.re).collect(),
        kept.iter().map(|c| c.im).collect(),
        signal.dt(),
        EDGE_DISCARD,
        cut,
    )
}

pub fn instantaneous_phase(a: &AnalyticSeries) -> Result<PhaseSeries> {
    let mut out = Vec::with_capacity(a.len());
    for (k, (&re, &im)) in a.re.iter().zip(&a.im).enumerate() {
        if re == 0.0 && im == 0.0 {
            return Err(Error::UndefinedPhase { index: a.offset + k });
        }
        out.push(wrap(im.atan2(re)));
    }
    PhaseSeries::new(out, a.dt, PhaseKind::WrappedPhase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn ang_diff(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(TAU);
        d.min(TAU - d)
    }

    fn raw(v: Vec<f64>) -> PhaseSeries {
        PhaseSeries::new(v, 1e-3, PhaseKind::RawSignal).unwrap()
    }

    /// Circular convolution with the periodic discrete Hilbert kernel,
    /// `h[m] = (2/N) cot(pi m / N)` for odd `m`, zero for even `m` (N even).
    fn hilbert_by_convolution(x: &[f64]) -> Vec<f64> {
        let n = x.len();
        assert!(n.is_multiple_of(2));
        let mean = x.iter().sum::<f64>() / n as f64;
        let kernel: Vec<f64> =
            (0..n).map(|m| if m % 2 == 1 { 2.0 / n as f64 / (PI * m as f64 / n as f64).tan() } else { 0.0 }).collect();
        (0..n).map(|i| (0..n).map(|m| kernel[m] * (x[(i + n - m) % n] - mean)).sum()).collect()
    }

    #[test]
    fn cosine_becomes_unit_phasor() {
        let w = TAU * 7.3 / 1000.0;
        let x: Vec<f64> = (0..4000).map(|i| (w * i as f64).cos()).collect();
        let a = analytic_signal(&raw(x)).unwrap();
        let amp = a.amplitude();
        let n = amp.len();
        for (k, v) in amp.iter().enumerate().take(9 * n / 10).skip(n / 10) {
            assert!((v - 1.0).abs() < 0.02, "amp {v} at {k}");
        }
        let ph = instantaneous_phase(&a).unwrap();
        for k in n / 10..9 * n / 10 {
            let t = (a.offset + k) as f64;
            assert!(ang_diff(ph.samples()[k], w * t) < 0.02);
        }
    }

    #[test]
    fn sine_lags_by_quarter_turn() {
        let w = TAU * 11.0 / 2048.0;
        let x: Vec<f64> = (0..2048).map(|i| (w * i as f64).sin()).collect();
        let a = analytic_signal(&raw(x)).unwrap();
        let ph = instantaneous_phase(&a).unwrap();
        for (k, p) in ph.samples().iter().enumerate() {
            let t = (a.offset + k) as f64;
            assert!(ang_diff(*p, w * t - FRAC_PI_2) < 1e-9);
        }
    }

    #[test]
    fn two_tone_matches_convolution_oracle() {
        let n = 1024;
        let x: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64;
                (TAU * 13.0 * t).cos() + 0.6 * (TAU * 29.0 * t + 0.4).sin()
            })
            .collect();
        let h = hilbert_by_convolution(&x);
        let a = analytic_signal(&raw(x.clone())).unwrap();
        let ph = instantaneous_phase(&a).unwrap();
        let mean = x.iter().sum::<f64>() / n as f64;
        let mut worst = 0.0f64;
        for (k, p) in ph.samples().iter().enumerate() {
            let i = a.offset + k;
            assert!((a.re[k] - (x[i] - mean)).abs() < 1e-12);
            worst = worst.max(ang_diff(*p, h[i].atan2(x[i] - mean)));
        }
        assert!(worst < 1e-3, "max phase deviation {worst}");
    }

    #[test]
    fn real_part_is_preserved() {
        let x: Vec<f64> = (0..777).map(|i| ((i * 31) % 17) as f64 + (i as f64 * 0.1).sin()).collect();
        let full = analytic_full(&x);
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        for (c, v) in full.iter().zip(&x) {
            assert!((c.re - (v - mean)).abs() < 1e-10);
        }
    }

    #[test]
    fn edge_discard_and_errors() {
        let x: Vec<f64> = (0..200).map(|i| (i as f64 * 0.3).cos()).collect();
        let a = analytic_signal(&raw(x)).unwrap();
        assert_eq!(a.offset, 10);
        assert_eq!(a.len(), 180);
        assert!(analytic_signal(&raw(vec![1.0; 63])).is_err());
        let z = AnalyticSeries::new(vec![1.0, 0.0], vec![0.0, 0.0], 1.0, 0.0, 5).unwrap();
        assert_eq!(instantaneous_phase(&z).unwrap_err(), Error::UndefinedPhase { index: 6 });
        let c = AnalyticSeries::new(vec![2.0; 4], vec![0.0; 4], 1.0, 0.0, 0).unwrap();
        assert!(instantaneous_phase(&c).unwrap().samples().iter().all(|&p| p == 0.0));
        assert!(AnalyticSeries::new(vec![1.0], vec![1.0], 1.0, 0.3, 0).is_err());
    }
}
