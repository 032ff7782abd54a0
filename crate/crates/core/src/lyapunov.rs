//! Lyapunov exponents of the coupled skew tent maps.
//!
//! On the synchronized subspace `x = y` the dynamics reduce to the single
//! map, whose exponent is the entropy-like `λ(a) = -a ln a - (1-a) ln(1-a)`.
//! Perturbations across the diagonal are additionally scaled by `1 - 2ε`
//! every step.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::tent_derivative;
use crate::seed::rng_from_seed;

/// A Lyapunov exponent that may be `-∞` when the coupling annihilates
/// transverse perturbations outright.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    Finite(f64),
    NegInfinity,
}

impl Exponent {
    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(v) => Some(v),
            Exponent::NegInfinity => None,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::NEG_INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovPair {
    pub lambda_parallel: f64,
    pub lambda_perp: Exponent,
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("skew parameter a={a} must lie in (0, 1)")))
    }
}

pub fn lambda_parallel(a: f64) -> Result<f64> {
    check_a(a)?;
    Ok(-a * a.ln() - (1.0 - a) * (-a).ln_1p())
}

pub fn lambda_perp(a: f64, eps: f64) -> Result<Exponent> {
    let lp = lambda_parallel(a)?;
    let scale = (1.0 - 2.0 * eps).abs();
    if scale == 0.0 {
        return Ok(Exponent::NegInfinity);
    }
    Ok(Exponent::Finite(lp + scale.ln()))
}

pub fn lyapunov_pair(a: f64, eps: f64) -> Result<LyapunovPair> {
    Ok(LyapunovPair { lambda_parallel: lambda_parallel(a)?, lambda_perp: lambda_perp(a, eps)? })
}

/// Coupling at which the synchronized state loses transverse stability.
pub fn epsilon_c(a: f64) -> Result<f64> {
    check_a(a)?;
    Ok(0.5 - 0.5 * a.powf(a) * (1.0 - a).powf(1.0 - a))
}

/// Coupling that sets the transverse exponent to `ln k`.
pub fn epsilon_for_log_k(a: f64, k: f64) -> Result<f64> {
    check_a(a)?;
    if !(k > 0.0) {
        return Err(Error::InvalidInput(format!("k={k} must be positive")));
    }
    Ok(0.5 * (1.0 - k * a.powf(a) * (1.0 - a).powf(1.0 - a)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericalExponent {
    pub value: Exponent,
    /// Times the orbit landed on the kink or an endpoint and was nudged.
    pub perturbations: usize,
}

/// Fewest iterations accepted by [`numerical_lambda_perp`].
pub const MIN_LYAPUNOV_ITERATIONS: usize = 100_000;

const TRANSIENT: usize = 1000;
const NUDGE: f64 = 1e-12;

/// Orbit average of `ln|(1 - 2ε) f'(a, x)|` along the single-map dynamics.
pub fn numerical_lambda_perp(a: f64, eps: f64, n_iter: usize, seed: u64) -> Result<NumericalExponent> {
    check_a(a)?;
    if n_iter < MIN_LYAPUNOV_ITERATIONS {
        return Err(Error::InvalidInput(format!("need at least 1e5 iterations, got {n_iter}")));
    }
    let scale = (1.0 - 2.0 * eps).abs();
    if scale == 0.0 {
        return Ok(NumericalExponent { value: Exponent::NegInfinity, perturbations: 0 });
    }
    let mut rng = rng_from_seed(seed);
    let mut x: f64 = rng.random_range(0.01..0.99);
    let mut perturbations = 0;
    let mut sum = 0.0;
    for i in 0..TRANSIENT + n_iter {
        // exact hits on the kink or the endpoints would lock the float orbit
        // onto 0; nudge off them
        if x == a || x <= 0.0 || x >= 1.0 {
            x = (x + if x >= 1.0 { -NUDGE } else { NUDGE }).clamp(NUDGE, 1.0 - NUDGE);
            perturbations += 1;
        }
        if i >= TRANSIENT {
            sum += tent_derivative(a, x).abs().ln();
        }
        x = if x <= a { x / a } else { (1.0 - x) / (1.0 - a) };
    }
    Ok(NumericalExponent { value: Exponent::Finite(sum / n_iter as f64 + scale.ln()), perturbations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    #[test]
    fn lambda_parallel_values() {
        assert!((lambda_parallel(0.5).unwrap() - LN_2).abs() < 1e-15);
        assert!((lambda_parallel(0.3).unwrap() - lambda_parallel(0.7).unwrap()).abs() < 1e-15);
        // -0.3 ln 0.3 - 0.7 ln 0.7 from 30-digit arithmetic
        assert!((lambda_parallel(0.3).unwrap() - 0.610_864_302_054_893_5).abs() < 1e-12);
        assert!(lambda_parallel(0.0).is_err());
        assert!(lambda_parallel(1.0).is_err());
    }

    #[test]
    fn threshold_values() {
        assert!((epsilon_c(0.3).unwrap() - 0.2286).abs() < 5e-5);
        assert!((epsilon_c(0.5).unwrap() - 0.25).abs() < 1e-15);
        let a = 0.3;
        assert!(lambda_perp(a, epsilon_c(a).unwrap()).unwrap().as_f64().abs() < 1e-14);
        assert_eq!(lambda_perp(a, 0.0).unwrap().as_f64(), lambda_parallel(a).unwrap());
        assert_eq!(lambda_perp(a, 0.5).unwrap(), Exponent::NegInfinity);
    }

    #[test]
    fn log_k_setup() {
        for a in [0.125, 0.2, 0.35] {
            for k in [1.05, 1.25, 1.45] {
                let eps = epsilon_for_log_k(a, k).unwrap();
                assert!((lambda_perp(a, eps).unwrap().as_f64() - k.ln()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn numerical_matches_closed_form() {
        let r = numerical_lambda_perp(0.5, 0.25, 1_000_000, 1).unwrap();
        assert!(r.value.as_f64().abs() < 5e-3);
        let r = numerical_lambda_perp(0.3, 0.0, 1_000_000, 2).unwrap();
        assert!((r.value.as_f64() - lambda_parallel(0.3).unwrap()).abs() < 5e-3);
        assert_eq!(numerical_lambda_perp(0.3, 0.5, 1_000_000, 2).unwrap().value, Exponent::NegInfinity);
        assert!(numerical_lambda_perp(0.3, 0.1, 10, 2).is_err());
    }

    #[test]
    fn decreasing_in_eps() {
        let mut prev = f64::INFINITY;
        for i in 0..500 {
            let eps = i as f64 * 0.001;
            let v = lambda_perp(0.27, eps).unwrap().as_f64();
            assert!(v < prev);
            prev = v;
        }
    }

    proptest! {
        #[test]
        fn symmetric_about_half(a in 0.001f64..0.999, eps in 0.0f64..0.499) {
            prop_assert!((lambda_parallel(a).unwrap() - lambda_parallel(1.0 - a).unwrap()).abs() < 1e-12);
            prop_assert!((lambda_perp(a, eps).unwrap().as_f64() - lambda_perp(1.0 - a, eps).unwrap().as_f64()).abs() < 1e-12);
            prop_assert!((epsilon_c(a).unwrap() - epsilon_c(1.0 - a).unwrap()).abs() < 1e-12);
            prop_assert!(lambda_parallel(a).unwrap() > 0.0);
        }
    }
}
