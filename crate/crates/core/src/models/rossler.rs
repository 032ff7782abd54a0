//! Two linearly coupled Rössler oscillators.
//!
//! State layout: `[x1, y1, z1, x2, y2, z2]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::integrate::VectorField;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RosslerParams {
    pub omega1: f64,
    pub omega2: f64,
    /// Coupling into oscillator 1; zero for unidirectional drive 1 -> 2.
    pub eps1: f64,
    pub eps2: f64,
}

impl RosslerParams {
    pub fn new(omega1: f64, omega2: f64, eps1: f64, eps2: f64) -> Result<Self> {
        if !(omega1 > 0.0 && omega2 > 0.0) {
            return Err(Error::InvalidInput("Rössler frequencies must be positive".into()));
        }
        if !(eps1 >= 0.0 && eps2 >= 0.0) {
            return Err(Error::InvalidInput("Rössler couplings must be non-negative".into()));
        }
        Ok(Self { omega1, omega2, eps1, eps2 })
    }

    pub fn bidirectional(omega1: f64, omega2: f64, eps: f64) -> Result<Self> {
        Self::new(omega1, omega2, eps, eps)
    }

    pub fn unidirectional(omega1: f64, omega2: f64, eps: f64) -> Result<Self> {
        Self::new(omega1, omega2, 0.0, eps)
    }
}

#[inline]
pub fn rossler_derivs(s: &[f64; 6], p: &RosslerParams) -> [f64; 6] {
    let [x1, y1, z1, x2, y2, z2] = *s;
    [
        -p.omega1 * y1 - z1 + p.eps1 * (x2 - x1),
        p.omega1 * x1 + 0.15 * y1,
        0.2 + z1 * (x1 - 10.0),
        -p.omega2 * y2 - z2 + p.eps2 * (x1 - x2),
        p.omega2 * x2 + 0.15 * y2,
        0.2 + z2 * (x2 - 10.0),
    ]
}

#[derive(Debug, Clone, Copy)]
pub struct RosslerSystem(pub RosslerParams);

impl VectorField<6> for RosslerSystem {
    fn derivs(&self, s: &[f64; 6]) -> [f64; 6] {
        rossler_derivs(s, &self.0)
    }

    fn names(&self) -> Vec<String> {
        ["x1", "y1", "z1", "x2", "y2", "z2"].map(String::from).to_vec()
    }
}
