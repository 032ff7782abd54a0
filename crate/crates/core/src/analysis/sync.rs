use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// Squared modulus of the mean phasor of the phase difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyncIndex {
    pub gamma: f64,
    pub n: usize,
}

pub fn gamma_index(theta: &[f64]) -> Result<SyncIndex> {
    if theta.is_empty() {
        return Err(Error::InsufficientData("synchronization index of an empty sequence".into()));
    }
    let (mut s, mut c) = (0.0, 0.0);
    for &t in theta {
        let (st, ct) = t.sin_cos();
        s += st;
        c += ct;
    }
    let n = theta.len() as f64;
    let gamma = ((s * s + c * c) / (n * n)).clamp(0.0, 1.0);
    Ok(SyncIndex { gamma, n: theta.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Significance {
    pub gamma: f64,
    pub threshold_95: f64,
    pub significant: bool,
}

pub const MIN_SIGNIFICANCE_SAMPLES: usize = 100;
pub const MIN_SURROGATES: usize = 100;

/// Compare the index of `phase_x - phase_y` against surrogates in which
/// `phase_y` is circularly shifted by a uniform lag in `[N/4, 3N/4]`.
pub fn locking_significance(phase_x: &[f64], phase_y: &[f64], n_surrogates: usize, seed: u64) -> Result<Significance> {
    let n = phase_x.len();
    if n != phase_y.len() {
        return Err(Error::InvalidInput("phase sequences differ in length".into()));
    }
    if n < MIN_SIGNIFICANCE_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "significance needs at least {MIN_SIGNIFICANCE_SAMPLES} samples, got {n}"
        )));
    }
    if n_surrogates < MIN_SURROGATES {
        return Err(Error::InvalidInput(format!("need at least {MIN_SURROGATES} surrogates, got {n_surrogates}")));
    }
    let px: Vec<Complex64> = phase_x.iter().map(|&a| Complex64::from_polar(1.0, a)).collect();
    let py: Vec<Complex64> = phase_y.iter().map(|&a| Complex64::from_polar(1.0, -a)).collect();
    let index_at = |shift: usize| -> f64 {
        let (head, tail) = py.split_at(shift);
        let sum: Complex64 = px.iter().zip(tail.iter().chain(head)).map(|(a, b)| a * b).sum();
        (sum.norm_sqr() / (n as f64 * n as f64)).clamp(0.0, 1.0)
    };
    let gamma = index_at(0);
    let mut rng = rng_from_seed(seed);
    let mut surrogate: Vec<f64> = (0..n_surrogates).map(|_| index_at(rng.random_range(n / 4..=3 * n / 4))).collect();
    surrogate.sort_by(f64::total_cmp);
    let threshold_95 = percentile_nearest_rank(&surrogate, 0.95);
    Ok(Significance { gamma, threshold_95, significant: gamma > threshold_95 })
}

fn percentile_nearest_rank(sorted: &[f64], q: f64) -> f64 {
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}
