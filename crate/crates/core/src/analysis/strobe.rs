use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::circular::{unwrap_slice, wrap, Angle, PhaseKind, PhaseSeries};
use crate::error::{Error, Result};

/// Phase of `x` sampled once per upward checkpoint crossing of `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrobedPhases {
    pub samples: Vec<f64>,
    /// Crossing times in units of the input `dt`, measured from sample 0.
    pub times: Vec<f64>,
    pub checkpoint: Angle,
    pub source: String,
}

impl StrobedPhases {
    pub fn new(samples: Vec<f64>, checkpoint: Angle, source: impl Into<String>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InsufficientData(format!("{} strobed samples, need at least 2", samples.len())));
        }
        if let Some(&bad) = samples.iter().find(|v| !(0.0..TAU).contains(*v)) {
            return Err(Error::Domain { value: bad, domain: "[0, 2pi)" });
        }
        let times = (0..samples.len()).map(|i| i as f64).collect();
        Ok(Self { samples, times, checkpoint, source: source.into() })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CrossingMode {
    /// Crossing instant found by linear interpolation of the unwrapped
    /// reference phase; `x` interpolated on its lift at that instant.
    #[default]
    Interpolated,
    /// Take `x` at the first sample at or past the crossing.
    SampleAligned,
}

/// Record `phase_x` each time `phase_y` crosses `checkpoint` from below.
pub fn strobe(
    phase_x: &PhaseSeries,
    phase_y: &PhaseSeries,
    checkpoint: Angle,
    mode: CrossingMode,
) -> Result<StrobedPhases> {
    for s in [phase_x, phase_y] {
        if s.kind() != PhaseKind::WrappedPhase {
            return Err(Error::InvalidInput("strobing expects wrapped phase series".into()));
        }
    }
    if phase_x.len() != phase_y.len() || phase_x.dt() != phase_y.dt() {
        return Err(Error::InvalidInput("phase series differ in length or sample interval".into()));
    }
    let uy = unwrap_slice(phase_y.samples());
    let ux = unwrap_slice(phase_x.samples());
    let c = checkpoint.value();
    let level = |u: f64| ((u - c) / TAU).floor();

    let mut samples = Vec::new();
    let mut times = Vec::new();
    let mut prev_level = level(uy[0]);
    for k in 0..uy.len() - 1 {
        let next_level = level(uy[k + 1]);
        if next_level > prev_level {
            let target = c + TAU * next_level;
            let (x, t) = match mode {
                CrossingMode::Interpolated => {
                    let frac = (target - uy[k]) / (uy[k + 1] - uy[k]);
                    (ux[k] + frac * (ux[k + 1] - ux[k]), k as f64 + frac)
                }
                CrossingMode::SampleAligned => (ux[k + 1], (k + 1) as f64),
            };
            samples.push(wrap(x));
            times.push(t);
        }
        prev_level = next_level;
    }
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!("{} upward checkpoint crossings, need at least 2", samples.len())));
    }
    Ok(StrobedPhases { samples, times, checkpoint, source: String::new() })
}
