//! Two Hodgkin-Huxley type cells coupled through inhibitory synapses.
//!
//! State layout: `[v1, m1, h1, n1, s1, v2, m2, h2, n2, s2]`, voltages in mV,
//! time in ms. Cell `i` receives the synaptic current
//! `g_syn_i (v_i - v_syn) s_j` from the other cell `j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::integrate::VectorField;

pub const HH_DIM: usize = 10;

/// Below this magnitude of the exponent argument the rate is taken from its
/// series expansion instead of the `0/0` quotient.
const SINGULAR_BAND: f64 = 1e-4;

const GATE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HHParams {
    pub cm: f64,
    pub g_na: f64,
    pub e_na: f64,
    pub g_k: f64,
    pub e_k: f64,
    pub g_l: f64,
    pub e_l: f64,
    pub v_syn: f64,
    pub i0: f64,
    pub phi: f64,
    pub theta_v: f64,
    pub sigma_s: f64,
    pub alpha_syn: f64,
    pub beta_syn: f64,
    pub g_syn1: f64,
    pub g_syn2: f64,
    /// Standard deviation of the white-noise current added to each cell.
    pub noise_std: f64,
}

impl Default for HHParams {
    fn default() -> Self {
        Self {
            cm: 1.0,
            g_na: 120.0,
            e_na: 50.0,
            g_k: 36.0,
            e_k: -77.0,
            g_l: 0.3,
            e_l: -54.4,
            v_syn: -85.0,
            i0: 10.0,
            phi: 0.35,
            theta_v: 0.0,
            sigma_s: 5.0,
            alpha_syn: 2.0,
            beta_syn: 0.05,
            g_syn1: 0.1,
            g_syn2: 0.1,
            noise_std: 2.12,
        }
    }
}

impl HHParams {
    pub fn with_coupling(g_syn1: f64, g_syn2: f64, noise_std: f64) -> Result<Self> {
        let p = Self { g_syn1, g_syn2, noise_std, ..Self::default() };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let conductances = [self.g_na, self.g_k, self.g_l, self.g_syn1, self.g_syn2];
        if conductances.iter().any(|g| !(*g >= 0.0)) {
            return Err(Error::InvalidInput("conductances must be non-negative".into()));
        }
        if !(self.cm > 0.0) {
            return Err(Error::InvalidInput("membrane capacitance must be positive".into()));
        }
        if !(self.noise_std >= 0.0) || !(self.sigma_s > 0.0) {
            return Err(Error::InvalidInput("noise and sigmoid widths must be non-negative/positive".into()));
        }
        Ok(())
    }
}

/// `u / (1 - exp(-u))`, continuous through `u = 0`.
#[inline]
fn u_over_one_minus_exp(u: f64) -> f64 {
    if u.abs() < SINGULAR_BAND {
        1.0 + u / 2.0 + u * u / 12.0
    } else {
        u / -(-u).exp_m1()
    }
}

#[inline]
pub fn alpha_n(v: f64) -> f64 {
    // 0.01 (v+55) / (1 - exp(-(v+55)/10)) = 0.1 * u / (1 - e^-u)
    0.1 * u_over_one_minus_exp((v + 55.0) / 10.0)
}

#[inline]
pub fn beta_n(v: f64) -> f64 {
    0.125 * (-(v + 65.0) / 80.0).exp()
}

#[inline]
pub fn alpha_m(v: f64) -> f64 {
    u_over_one_minus_exp((v + 40.0) / 10.0)
}

#[inline]
pub fn beta_m(v: f64) -> f64 {
    4.0 * (-(v + 65.0) / 18.0).exp()
}

#[inline]
pub fn alpha_h(v: f64) -> f64 {
    0.07 * (-(v + 65.0) / 20.0).exp()
}

#[inline]
pub fn beta_h(v: f64) -> f64 {
    1.0 / (1.0 + (-(v + 35.0) / 10.0).exp())
}

#[inline]
pub fn h_inf(x: f64, sigma_s: f64) -> f64 {
    1.0 / (1.0 + (-x / sigma_s).exp())
}

#[inline]
fn cell_derivs(cell: &[f64], other_s: f64, g_syn: f64, w: f64, p: &HHParams) -> [f64; 5] {
    let (v, m, h, n, s) = (cell[0], cell[1], cell[2], cell[3], cell[4]);
    let i_l = p.g_l * (v - p.e_l);
    let i_na = p.g_na * m * m * m * h * (v - p.e_na);
    let n2 = n * n;
    let i_k = p.g_k * n2 * n2 * (v - p.e_k);
    let i_syn = g_syn * (v - p.v_syn) * other_s;
    let dv = (-i_l - i_na - i_k - i_syn + w + p.i0) / p.cm;
    let gate = |a: f64, b: f64, x: f64| p.phi * (a * (1.0 - x) - b * x);
    [
        dv,
        gate(alpha_m(v), beta_m(v), m),
        gate(alpha_h(v), beta_h(v), h),
        gate(alpha_n(v), beta_n(v), n),
        p.alpha_syn * (1.0 - s) * h_inf(v - p.theta_v, p.sigma_s) - p.beta_syn * s,
    ]
}

/// Right-hand side with explicit per-cell input currents `noise`.
pub fn hh_derivs(state: &[f64; HH_DIM], p: &HHParams, noise: [f64; 2]) -> Result<[f64; HH_DIM]> {
    check_gates(state).map_err(|reason| Error::IntegrationFailure { step: 0, reason })?;
    Ok(hh_derivs_unchecked(state, p, noise))
}

#[inline]
fn hh_derivs_unchecked(state: &[f64; HH_DIM], p: &HHParams, noise: [f64; 2]) -> [f64; HH_DIM] {
    let a = cell_derivs(&state[..5], state[9], p.g_syn1, noise[0], p);
    let b = cell_derivs(&state[5..], state[4], p.g_syn2, noise[1], p);
    let mut out = [0.0; HH_DIM];
    out[..5].copy_from_slice(&a);
    out[5..].copy_from_slice(&b);
    out
}

fn check_gates(state: &[f64; HH_DIM]) -> std::result::Result<(), String> {
    for (k, &x) in state.iter().enumerate() {
        if k % 5 != 0 && !(-GATE_TOLERANCE..=1.0 + GATE_TOLERANCE).contains(&x) {
            return Err(format!("gating variable {k} = {x} left [0, 1]"));
        }
    }
    Ok(())
}

/// Integrable form: the white-noise current enters `v'` as
/// `noise_std * xi / sqrt(dt)`, which the Euler-Maruyama step realizes as an
/// increment of standard deviation `noise_std * sqrt(dt) / cm`.
#[derive(Debug, Clone, Copy)]
pub struct HHSystem(pub HHParams);

impl HHSystem {
    /// Cells at rest-like values with steady-state gates; the second cell is
    /// offset so the pair does not start synchronized.
    pub fn default_initial_state(&self) -> [f64; HH_DIM] {
        let cell = |v: f64| {
            let ss = |a: f64, b: f64| a / (a + b);
            [v, ss(alpha_m(v), beta_m(v)), ss(alpha_h(v), beta_h(v)), ss(alpha_n(v), beta_n(v)), 0.0]
        };
        let mut s = [0.0; HH_DIM];
        s[..5].copy_from_slice(&cell(-65.0));
        s[5..].copy_from_slice(&cell(-50.0));
        s
    }
}

impl VectorField<HH_DIM> for HHSystem {
    fn derivs(&self, s: &[f64; HH_DIM]) -> [f64; HH_DIM] {
        hh_derivs_unchecked(s, &self.0, [0.0, 0.0])
    }

    fn diffusion(&self) -> [f64; HH_DIM] {
        let mut g = [0.0; HH_DIM];
        g[0] = self.0.noise_std / self.0.cm;
        g[5] = self.0.noise_std / self.0.cm;
        g
    }

    fn check(&self, s: &[f64; HH_DIM]) -> std::result::Result<(), String> {
        check_gates(s)
    }

    fn names(&self) -> Vec<String> {
        ["v1", "m1", "h1", "n1", "s1", "v2", "m2", "h2", "n2", "s2"].map(String::from).to_vec()
    }
}
