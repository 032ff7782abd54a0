//! Circular-statistics primitives and phase-series containers.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resultant lengths below this carry no usable preferred angle.
pub const DEGENERACY_THRESHOLD: f64 = 0.05;

/// An angle in radians, always held in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub fn new(radians: f64) -> Result<Self> {
        wrap_angle(radians)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Rotate by `delta` radians, rewrapping.
    pub fn rotate(self, delta: f64) -> Result<Self> {
        wrap_angle(self.0 + delta)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

/// Reduce `x` modulo 2π into `[0, 2π)`.
pub fn wrap_angle(x: f64) -> Result<Angle> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    Ok(Angle(wrap(x)))
}

/// Unchecked wrap used on hot paths where finiteness is already known.
#[inline]
pub(crate) fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid of a tiny negative number rounds up to exactly 2π
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed representative of an angular increment in `(-π, π]`.
#[inline]
pub(crate) fn principal_increment(d: f64) -> f64 {
    let w = wrap(d);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseKind {
    WrappedPhase,
    UnwrappedPhase,
    RawSignal,
}

/// A uniformly sampled scalar or phase time series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSeries {
    samples: Vec<f64>,
    dt: f64,
    kind: PhaseKind,
}

impl PhaseSeries {
    pub fn new(samples: Vec<f64>, dt: f64, kind: PhaseKind) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidInput(format!("sample interval must be positive, got {dt}")));
        }
        if samples.len() < 2 {
            return Err(Error::InsufficientData(format!("series needs at least 2 samples, got {}", samples.len())));
        }
        if let Some(&bad) = samples.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        if kind == PhaseKind::WrappedPhase {
            if let Some(&bad) = samples.iter().find(|&&v| !(0.0..TAU).contains(&v)) {
                return Err(Error::Domain { value: bad, domain: "[0, 2pi)" });
            }
        }
        Ok(Self { samples, dt, kind })
    }

    /// Wrap arbitrary finite angles into a wrapped-phase series.
    pub fn from_angles(angles: impl IntoIterator<Item = f64>, dt: f64) -> Result<Self> {
        let samples = angles.into_iter().map(|a| wrap_angle(a).map(Angle::value)).collect::<Result<Vec<_>>>()?;
        Self::new(samples, dt, PhaseKind::WrappedPhase)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn kind(&self) -> PhaseKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample rate in Hz when `dt` is expressed in milliseconds.
    pub fn rate_hz_from_ms(&self) -> f64 {
        1000.0 / self.dt
    }
}

/// Remove 2π jumps so that consecutive differences lie in `(-π, π]`.
pub fn unwrap(series: &PhaseSeries) -> Result<PhaseSeries> {
    if series.kind != PhaseKind::WrappedPhase {
        return Err(Error::InvalidInput("unwrap expects a wrapped-phase series".into()));
    }
    let samples = unwrap_slice(&series.samples);
    PhaseSeries::new(samples, series.dt, PhaseKind::UnwrappedPhase)
}

pub(crate) fn unwrap_slice(wrapped: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(wrapped.len());
    let Some(&first) = wrapped.first() else {
        return out;
    };
    out.push(first);
    let mut acc = first;
    for w in wrapped.windows(2) {
        acc += principal_increment(w[1] - w[0]);
        out.push(acc);
    }
    out
}

/// Mean direction and resultant length of a set of angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircStats {
    pub mean_angle: Angle,
    pub resultant_length: f64,
    pub n: usize,
}

impl CircStats {
    /// Statistics without the degeneracy guard.
    pub fn compute(angles: &[f64]) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InsufficientData("circular statistics of an empty set".into()));
        }
        let (mut s, mut c) = (0.0, 0.0);
        for &a in angles {
            if !a.is_finite() {
                return Err(Error::NonFinite(a));
            }
            let (sa, ca) = a.sin_cos();
            s += sa;
            c += ca;
        }
        let n = angles.len();
        let resultant_length = ((s * s + c * c).sqrt() / n as f64).min(1.0);
        Ok(Self { mean_angle: Angle(wrap(s.atan2(c))), resultant_length, n })
    }

    pub fn is_degenerate(&self) -> bool {
        self.resultant_length < DEGENERACY_THRESHOLD
    }
}

/// Circular mean with the no-preferred-angle guard applied.
pub fn circular_mean(angles: &[f64]) -> Result<CircStats> {
    let stats = CircStats::compute(angles)?;
    if stats.is_degenerate() {
        return Err(Error::NoPreferredAngle { resultant: stats.resultant_length });
    }
    Ok(stats)
}
