use std::ops::ControlFlow;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

use super::io::Trajectory;

/// Right-hand side of an `N`-dimensional system, with an optional additive
/// noise term for the stochastic integrator.
pub trait VectorField<const N: usize> {
    fn derivs(&self, state: &[f64; N]) -> [f64; N];

    /// Per-component diffusion coefficient `g` in `dX = f dt + g dW`.
    fn diffusion(&self) -> [f64; N] {
        [0.0; N]
    }

    /// Model-specific sanity check applied after every step.
    fn check(&self, _state: &[f64; N]) -> std::result::Result<(), String> {
        Ok(())
    }

    fn names(&self) -> Vec<String>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Classical fixed-step fourth-order Runge-Kutta.
    Rk4,
    /// Forward Euler (deterministic part of Euler-Maruyama).
    Euler,
    /// Euler-Maruyama with `sqrt(dt)`-scaled Gaussian increments.
    EulerMaruyama,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub transient_steps: usize,
    pub seed: u64,
    pub method: Method,
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidInput(format!("dt must be positive, got {}", self.dt)));
        }
        if self.transient_steps >= self.n_steps {
            return Err(Error::InvalidInput(format!(
                "transient steps {} must be below total steps {}",
                self.transient_steps, self.n_steps
            )));
        }
        Ok(())
    }
}

#[inline]
fn axpy<const N: usize>(base: &[f64; N], k: &[f64; N], h: f64) -> [f64; N] {
    let mut out = *base;
    for i in 0..N {
        out[i] += h * k[i];
    }
    out
}

#[inline]
pub(crate) fn rk4_step<const N: usize, F: VectorField<N> + ?Sized>(sys: &F, s: &[f64; N], dt: f64) -> [f64; N] {
    let k1 = sys.derivs(s);
    let k2 = sys.derivs(&axpy(s, &k1, 0.5 * dt));
    let k3 = sys.derivs(&axpy(s, &k2, 0.5 * dt));
    let k4 = sys.derivs(&axpy(s, &k3, dt));
    let mut out = *s;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrate and hand every post-transient state to `visit`, which may stop
/// the run early. `visit` receives the 1-based step index and the state.
/// Returns the last state reached.
pub fn integrate_with<const N: usize, F, V>(
    sys: &F,
    init: [f64; N],
    config: &IntegratorConfig,
    mut visit: V,
) -> Result<[f64; N]>
where
    F: VectorField<N> + ?Sized,
    V: FnMut(usize, &[f64; N]) -> ControlFlow<()>,
{
    config.validate()?;
    if init.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence { step: 0 });
    }
    let dt = config.dt;
    let sqrt_dt = dt.sqrt();
    let g = sys.diffusion();
    let noisy: Vec<usize> = (0..N).filter(|&i| g[i] != 0.0).collect();
    let mut rng = rng_from_seed(config.seed);

    let mut s = init;
    for step in 1..=config.n_steps {
        s = match config.method {
            Method::Rk4 => rk4_step(sys, &s, dt),
            Method::Euler | Method::EulerMaruyama => {
                let mut next = axpy(&s, &sys.derivs(&s), dt);
                if config.method == Method::EulerMaruyama {
                    for &i in &noisy {
                        let xi: f64 = StandardNormal.sample(&mut rng);
                        next[i] += g[i] * sqrt_dt * xi;
                    }
                }
                next
            }
        };
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { step });
        }
        sys.check(&s).map_err(|reason| Error::IntegrationFailure { step, reason })?;
        if step > config.transient_steps && visit(step, &s).is_break() {
            break;
        }
    }
    Ok(s)
}

/// Integrate and collect the post-transient trajectory.
pub fn integrate<const N: usize, F: VectorField<N> + ?Sized>(
    sys: &F,
    init: [f64; N],
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    let keep = config.n_steps.saturating_sub(config.transient_steps);
    let mut columns = vec![Vec::with_capacity(keep); N];
    integrate_with(sys, init, config, |_, s| {
        for (col, v) in columns.iter_mut().zip(s) {
            col.push(*v);
        }
        ControlFlow::Continue(())
    })?;
    let t0 = (config.transient_steps + 1) as f64 * config.dt;
    Trajectory::new(sys.names(), t0, config.dt, columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Harmonic;

    impl VectorField<2> for Harmonic {
        fn derivs(&self, s: &[f64; 2]) -> [f64; 2] {
            [s[1], -s[0]]
        }
        fn names(&self) -> Vec<String> {
            vec!["q".into(), "p".into()]
        }
    }

    struct Drifting {
        sigma: f64,
    }

    impl VectorField<1> for Drifting {
        fn derivs(&self, s: &[f64; 1]) -> [f64; 1] {
            [-0.5 * s[0] + 1.0]
        }
        fn diffusion(&self) -> [f64; 1] {
            [self.sigma]
        }
        fn names(&self) -> Vec<String> {
            vec!["v".into()]
        }
    }

    fn cfg(dt: f64, n: usize, method: Method) -> IntegratorConfig {
        IntegratorConfig { dt, n_steps: n, transient_steps: 0, seed: 1, method }
    }

    fn harmonic_error(dt: f64, t_end: f64) -> f64 {
        let n = (t_end / dt).round() as usize;
        let end =
            integrate_with(&Harmonic, [1.0, 0.0], &cfg(dt, n, Method::Rk4), |_, _| ControlFlow::Continue(())).unwrap();
        let t = n as f64 * dt;
        ((end[0] - t.cos()).powi(2) + (end[1] + t.sin()).powi(2)).sqrt()
    }

    #[test]
    fn rk4_energy_drift() {
        let tr = integrate(&Harmonic, [1.0, 0.0], &cfg(0.01, 10_000, Method::Rk4)).unwrap();
        let (q, p) = (tr.column(0), tr.column(1));
        let e_end = 0.5 * (q[q.len() - 1].powi(2) + p[p.len() - 1].powi(2));
        assert!(((e_end - 0.5) / 0.5).abs() < 1e-6);
        assert_eq!(tr.len(), 10_000);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let e1 = harmonic_error(0.1, 10.0);
        let e2 = harmonic_error(0.05, 10.0);
        let ratio = e1 / e2;
        assert!((8.0..32.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn zero_noise_euler_maruyama_equals_euler() {
        let sys = Drifting { sigma: 0.0 };
        let a = integrate(&sys, [0.3], &cfg(0.01, 500, Method::Euler)).unwrap();
        let b = integrate(&sys, [0.3], &cfg(0.01, 500, Method::EulerMaruyama)).unwrap();
        assert_eq!(a.column(0), b.column(0));
    }

    #[test]
    fn stochastic_run_is_seeded() {
        let sys = Drifting { sigma: 0.7 };
        let a = integrate(&sys, [0.3], &cfg(0.01, 500, Method::EulerMaruyama)).unwrap();
        let b = integrate(&sys, [0.3], &cfg(0.01, 500, Method::EulerMaruyama)).unwrap();
        assert_eq!(a.column(0), b.column(0));
        let mut c2 = cfg(0.01, 500, Method::EulerMaruyama);
        c2.seed = 2;
        let c = integrate(&sys, [0.3], &c2).unwrap();
        assert_ne!(a.column(0), c.column(0));
    }

    #[test]
    fn transient_is_dropped() {
        let mut c = cfg(0.01, 100, Method::Rk4);
        c.transient_steps = 40;
        let tr = integrate(&Harmonic, [1.0, 0.0], &c).unwrap();
        assert_eq!(tr.len(), 60);
        assert!((tr.t0() - 0.41).abs() < 1e-12);
        c.transient_steps = 100;
        assert!(integrate(&Harmonic, [1.0, 0.0], &c).is_err());
    }

    struct Blowup;
    impl VectorField<1> for Blowup {
        fn derivs(&self, s: &[f64; 1]) -> [f64; 1] {
            [s[0] * s[0]]
        }
        fn names(&self) -> Vec<String> {
            vec!["x".into()]
        }
    }

    #[test]
    fn divergence_reports_step() {
        let err = integrate(&Blowup, [1.0], &cfg(0.1, 1000, Method::Rk4)).unwrap_err();
        assert!(matches!(err, Error::Divergence { step } if step > 1));
    }
}
