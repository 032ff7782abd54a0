//! Two linearly coupled Lorenz oscillators with frequency detuning.
//!
//! State layout: `[x1, y1, z1, x2, y2, z2]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::integrate::VectorField;

pub(crate) const LORENZ_R: f64 = 36.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorenzParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub eps: f64,
}

impl LorenzParams {
    pub fn new(gamma1: f64, gamma2: f64, eps: f64) -> Result<Self> {
        if !(LORENZ_R + gamma1 > 1.0 && LORENZ_R + gamma2 > 1.0) {
            return Err(Error::InvalidInput("detuning leaves no off-origin fixed points".into()));
        }
        if !(eps >= 0.0) {
            return Err(Error::InvalidInput("Lorenz coupling must be non-negative".into()));
        }
        Ok(Self { gamma1, gamma2, eps })
    }

    pub fn gamma(&self, which: usize) -> f64 {
        if which == 1 {
            self.gamma1
        } else {
            self.gamma2
        }
    }
}

#[inline]
pub fn lorenz_derivs(s: &[f64; 6], p: &LorenzParams) -> [f64; 6] {
    let [x1, y1, z1, x2, y2, z2] = *s;
    [
        10.0 * (y1 - x1) + p.eps * (x2 - x1),
        (LORENZ_R + p.gamma1) * x1 - y1 - x1 * z1,
        -3.0 * z1 + x1 * y1,
        10.0 * (y2 - x2) + p.eps * (x1 - x2),
        (LORENZ_R + p.gamma2) * x2 - y2 - x2 * z2,
        -3.0 * z2 + x2 * y2,
    ]
}

#[derive(Debug, Clone, Copy)]
pub struct LorenzSystem(pub LorenzParams);

impl VectorField<6> for LorenzSystem {
    fn derivs(&self, s: &[f64; 6]) -> [f64; 6] {
        lorenz_derivs(s, &self.0)
    }

    fn names(&self) -> Vec<String> {
        ["x1", "y1", "z1", "x2", "y2", "z2"].map(String::from).to_vec()
    }
}
