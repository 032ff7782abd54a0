//! Geometric phases read directly off state coordinates.
//!
//! All angles use the two-argument arctangent so the half-plane is kept.

use serde::{Deserialize, Serialize};

use crate::circular::Angle;
use crate::error::{Error, Result};
use crate::models::LorenzParams;

/// Angle of `(x, y)` about the origin.
pub fn protophase_rossler(x: f64, y: f64) -> Result<Angle> {
    if x == 0.0 && y == 0.0 {
        return Err(Error::UndefinedPhase { index: 0 });
    }
    Angle::new(y.atan2(x))
}

/// Center of rotation of one Lorenz oscillator in the `(u, z)` plane,
/// `u = sqrt(x^2 + y^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorenzPhaseRef {
    pub u_hat: f64,
    pub z_hat: f64,
}

/// Off-origin fixed point of oscillator `which` (1 or 2), projected onto
/// the `(u, z)` plane: `x = y = ±sqrt(3 c)`, `z = c` with `c = 35.5 + γ`.
pub fn lorenz_fixed_point(p: &LorenzParams, which: u8) -> Result<LorenzPhaseRef> {
    let gamma = match which {
        1 => p.gamma1,
        2 => p.gamma2,
        _ => return Err(Error::InvalidInput(format!("oscillator index {which} must be 1 or 2"))),
    };
    let c = 35.5 + gamma;
    if !(c > 0.0) {
        return Err(Error::Domain { value: c, domain: "35.5 + gamma > 0" });
    }
    Ok(LorenzPhaseRef { u_hat: (6.0 * c).sqrt(), z_hat: c })
}

pub fn phase_lorenz(x: f64, y: f64, z: f64, r: &LorenzPhaseRef) -> Result<Angle> {
    let du = x.hypot(y) - r.u_hat;
    let dz = z - r.z_hat;
    if du == 0.0 && dz == 0.0 {
        return Err(Error::UndefinedPhase { index: 0 });
    }
    Angle::new(dz.atan2(du))
}

/// Rotate `(x2, y2)` by `-phi1`: the co-rotating frame of the drive.
pub fn ring_transform(x2: f64, y2: f64, phi1: f64) -> (f64, f64) {
    let (s, c) = phi1.sin_cos();
    (x2 * c + y2 * s, -x2 * s + y2 * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    #[test]
    fn rossler_axes() {
        assert_eq!(protophase_rossler(1.0, 0.0).unwrap().value(), 0.0);
        assert!((protophase_rossler(0.0, 1.0).unwrap().value() - FRAC_PI_2).abs() < 1e-15);
        assert!((protophase_rossler(-1.0, -1.0).unwrap().value() - 1.25 * PI).abs() < 1e-15);
        assert!(protophase_rossler(0.0, 0.0).is_err());
    }

    #[test]
    fn lorenz_reference() {
        let p = LorenzParams::new(1.5, -1.5, 0.0).unwrap();
        let r1 = lorenz_fixed_point(&p, 1).unwrap();
        assert!((r1.u_hat - 222f64.sqrt()).abs() < 1e-12 && r1.z_hat == 37.0);
        let r2 = lorenz_fixed_point(&p, 2).unwrap();
        assert!((r2.u_hat - 204f64.sqrt()).abs() < 1e-12 && r2.z_hat == 34.0);
        let bad = LorenzParams { gamma1: -35.5, gamma2: 0.0, eps: 0.0 };
        assert!(lorenz_fixed_point(&bad, 1).is_err());
        assert!(lorenz_fixed_point(&p, 3).is_err());
    }

    #[test]
    fn lorenz_phase_axes() {
        let r = LorenzPhaseRef { u_hat: 222f64.sqrt(), z_hat: 37.0 };
        // u = u_hat + 1 with y = 0
        assert!(phase_lorenz(r.u_hat + 1.0, 0.0, 37.0, &r).unwrap().value().abs() < 1e-12);
        assert!((phase_lorenz(r.u_hat, 0.0, 38.0, &r).unwrap().value() - FRAC_PI_2).abs() < 1e-12);
        assert!(phase_lorenz(r.u_hat, 0.0, 37.0, &r).is_err());
    }

    #[test]
    fn lorenz_phase_against_direct_atan2() {
        let r = LorenzPhaseRef { u_hat: 14.0, z_hat: 36.0 };
        let (x, y, z): (f64, f64, f64) = (-7.5, -12.25, 21.0);
        let u = (x * x + y * y).sqrt();
        let mut expect = (z - 36.0f64).atan2(u - 14.0);
        if expect < 0.0 {
            expect += TAU;
        }
        assert!((phase_lorenz(x, y, z, &r).unwrap().value() - expect).abs() < 1e-14);
    }

    #[test]
    fn ring_examples() {
        assert_eq!(ring_transform(0.3, -0.7, 0.0), (0.3, -0.7));
        let (a, b) = ring_transform(1.0, 0.0, FRAC_PI_2);
        assert!(a.abs() < 1e-15 && (b + 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn ring_is_isometry_and_invertible(x in -50.0f64..50.0, y in -50.0f64..50.0, phi in -10.0f64..10.0) {
            let (a, b) = ring_transform(x, y, phi);
            prop_assert!((a.hypot(b) - x.hypot(y)).abs() < 1e-10);
            let (c, d) = ring_transform(a, b, -phi);
            prop_assert!((c - x).abs() < 1e-10 && (d - y).abs() < 1e-10);
        }

        #[test]
        fn protophase_ignores_full_turns(r in 0.1f64..10.0, ang in 0.0f64..TAU, turns in -3i32..3) {
            let shifted = ang + TAU * turns as f64;
            let a = protophase_rossler(r * ang.cos(), r * ang.sin()).unwrap().value();
            let b = protophase_rossler(r * shifted.cos(), r * shifted.sin()).unwrap().value();
            let d = (a - b).abs();
            prop_assert!(d < 1e-9 || (TAU - d) < 1e-9);
        }
    }
}
