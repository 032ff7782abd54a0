use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalingLaw {
    /// `log <l>` against `log(eps_crit - eps)`; slope near `-1/2`.
    TypeI,
    /// `ln <l>` against `sqrt(eps_crit - eps)`.
    Eyelet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub law: ScalingLaw,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n: usize,
}

pub const MIN_FIT_POINTS: usize = 4;

/// Ordinary least squares `y = intercept + slope x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = x.len();
    if n != y.len() || n < 2 {
        return Err(Error::InvalidInput("fit needs two equal-length series of at least 2 points".into()));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidInput("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).min(1.0) };
    Ok((slope, my - slope * mx, r2))
}

pub fn scaling_fit(eps: &[f64], laminar: &[f64], law: ScalingLaw, eps_crit: f64) -> Result<ScalingFit> {
    if eps.len() != laminar.len() {
        return Err(Error::InvalidInput("coupling and laminar series differ in length".into()));
    }
    if eps.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!("{} points, need at least {MIN_FIT_POINTS}", eps.len())));
    }
    if let Some(&e) = eps.iter().find(|&&e| !(e < eps_crit)) {
        return Err(Error::Domain { value: e, domain: "eps < eps_crit" });
    }
    if let Some(&l) = laminar.iter().find(|&&l| !(l.is_finite() && l > 0.0)) {
        return Err(Error::Domain { value: l, domain: "finite positive laminar length" });
    }
    let x: Vec<f64> = eps
        .iter()
        .map(|&e| match law {
            ScalingLaw::TypeI => (eps_crit - e).ln(),
            ScalingLaw::Eyelet => (eps_crit - e).sqrt(),
        })
        .collect();
    let y: Vec<f64> = laminar.iter().map(|l| l.ln()).collect();
    let (slope, intercept, r_squared) = linear_fit(&x, &y)?;
    Ok(ScalingFit { law, slope, intercept, r_squared, n: eps.len() })
}
