//! Zero-phase Butterworth band-pass.
//!
//! A second-order analog Butterworth low-pass prototype is shifted to a
//! band-pass (fourth order overall), discretized with the prewarped bilinear
//! transform and run as a cascade of two biquads. [`BandpassFilter::filtfilt`]
//! applies it forward and then backward, which squares the magnitude
//! response and cancels the phase.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::circular::{PhaseKind, PhaseSeries};
use crate::error::{Error, Result};

const PROTOTYPE_ORDER: usize = 2;

/// `y = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2) x`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Biquad {
    fn response(&self, z_inv: Complex64) -> Complex64 {
        let z2 = z_inv * z_inv;
        (self.b[0] + self.b[1] * z_inv + self.b[2] * z2) / (1.0 + self.a[0] * z_inv + self.a[1] * z2)
    }

    fn dc_gain(&self) -> f64 {
        (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[0] + self.a[1])
    }

    /// Transposed direct-form II state for a constant input `x` held forever.
    fn steady_state(&self, x: f64) -> [f64; 2] {
        let y = self.dc_gain() * x;
        let z2 = self.b[2] * x - self.a[1] * y;
        let z1 = self.b[1] * x - self.a[0] * y + z2;
        [z1, z2]
    }

    #[inline]
    fn step(&self, state: &mut [f64; 2], x: f64) -> f64 {
        let y = self.b[0] * x + state[0];
        state[0] = self.b[1] * x - self.a[0] * y + state[1];
        state[1] = self.b[2] * x - self.a[1] * y;
        y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandpassFilter {
    pub sections: Vec<Biquad>,
    pub fs: f64,
    pub lo_hz: f64,
    pub hi_hz: f64,
}

impl BandpassFilter {
    pub fn design(lo_hz: f64, hi_hz: f64, fs: f64) -> Result<Self> {
        let nyquist = fs / 2.0;
        if !(lo_hz > 0.0 && lo_hz < hi_hz && hi_hz < nyquist) {
            return Err(Error::InvalidInput(format!(
                "band ({lo_hz}, {hi_hz}) Hz must satisfy 0 < lo < hi < Nyquist = {nyquist} Hz"
            )));
        }
        let fs2 = 2.0 * fs;
        let w_lo = fs2 * (PI * lo_hz / fs).tan();
        let w_hi = fs2 * (PI * hi_hz / fs).tan();
        let w0 = (w_lo * w_hi).sqrt();
        let bw = w_hi - w_lo;

        let mut sections = Vec::with_capacity(PROTOTYPE_ORDER);
        // upper-half-plane prototype pole; its conjugate supplies the partner
        // of every band-pass pole
        let proto = Complex64::from_polar(1.0, PI * (PROTOTYPE_ORDER as f64 + 1.0) / (2.0 * PROTOTYPE_ORDER as f64));
        let half = proto * bw / 2.0;
        let root = (half * half - w0 * w0).sqrt();
        for s in [half + root, half - root] {
            let z = (fs2 + s) / (fs2 - s);
            sections.push(Biquad { b: [1.0, 0.0, -1.0], a: [-2.0 * z.re, z.norm_sqr()] });
        }

        let mut filt = Self { sections, fs, lo_hz, hi_hz };
        // unity gain at the digital image of the analog center frequency
        let f_center = fs / PI * (w0 / fs2).atan();
        let g = filt.response(f_center).norm();
        let per_section = g.powf(-1.0 / filt.sections.len() as f64);
        for sec in &mut filt.sections {
            for b in &mut sec.b {
                *b *= per_section;
            }
        }
        Ok(filt)
    }

    /// Single-pass complex frequency response at `f` Hz.
    pub fn response(&self, f: f64) -> Complex64 {
        let z_inv = Complex64::from_polar(1.0, -2.0 * PI * f / self.fs);
        self.sections.iter().map(|s| s.response(z_inv)).product()
    }

    /// Magnitude of the forward-backward response.
    pub fn zero_phase_gain(&self, f: f64) -> f64 {
        self.response(f).norm_sqr()
    }

    /// One causal pass, starting from the steady state for `x[0]`.
    pub fn filter(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        let Some(&x0) = x.first() else {
            return out;
        };
        let mut level = x0;
        for sec in &self.sections {
            let mut state = sec.steady_state(level);
            level *= sec.dc_gain();
            for v in out.iter_mut() {
                *v = sec.step(&mut state, *v);
            }
        }
        out
    }

    fn pad_len(&self, n: usize) -> usize {
        // three periods of the lower band edge
        let want = (3.0 * self.fs / self.lo_hz).ceil() as usize;
        want.min(n.saturating_sub(1))
    }

    /// Forward-backward filtering with odd-reflection padding at both ends.
    pub fn filtfilt(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        if n < 2 {
            return x.to_vec();
        }
        let pad = self.pad_len(n);
        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|i| 2.0 * x[0] - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));

        let mut y = self.filter(&ext);
        y.reverse();
        let mut y = self.filter(&y);
        y.reverse();
        y.drain(..pad);
        y.truncate(n);
        y
    }

    /// Coefficient table: one row per biquad.
    pub fn write_coefficients_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "section,b0,b1,b2,a0,a1,a2")?;
        for (i, s) in self.sections.iter().enumerate() {
            writeln!(w, "{i},{:?},{:?},{:?},1.0,{:?},{:?}", s.b[0], s.b[1], s.b[2], s.a[0], s.a[1])?;
        }
        Ok(())
    }
}

/// Zero-phase band-pass of a raw signal whose `dt` is in seconds.
pub fn bandpass(signal: &PhaseSeries, lo_hz: f64, hi_hz: f64) -> Result<PhaseSeries> {
    if signal.kind() != PhaseKind::RawSignal {
        return Err(Error::InvalidInput("band-pass expects a raw signal".into()));
    }
    let filt = BandpassFilter::design(lo_hz, hi_hz, 1.0 / signal.dt())?;
    PhaseSeries::new(filt.filtfilt(signal.samples()), signal.dt(), PhaseKind::RawSignal)
}
