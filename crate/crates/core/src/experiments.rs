//! End-to-end sweep points: simulate a system, extract phases, analyze.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{analyze_map, analyze_pipeline, AnalysisConfig, AnalysisReport};
use crate::circular::{principal_increment, wrap, PhaseKind, PhaseSeries};
use crate::error::{Error, Result};
use crate::lyapunov::{epsilon_for_log_k, lambda_perp, numerical_lambda_perp, Exponent};
use crate::models::{
    coupled_tent_step, integrate_with, CoupledMapState, HHParams, HHSystem, IntegratorConfig, LorenzParams,
    LorenzSystem, Method, RosslerParams, RosslerSystem, TentParams, Trajectory, VectorField,
};
use crate::phase::{analytic_signal, bandpass, instantaneous_phase, lorenz_fixed_point, LorenzPhaseRef};
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemKind {
    Tent,
    RosslerBi,
    RosslerUni,
    Lorenz,
    Hh,
}

impl SystemKind {
    pub const ALL: [SystemKind; 5] =
        [SystemKind::Tent, SystemKind::RosslerBi, SystemKind::RosslerUni, SystemKind::Lorenz, SystemKind::Hh];

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Tent => "tent",
            SystemKind::RosslerBi => "rossler-bi",
            SystemKind::RosslerUni => "rossler-uni",
            SystemKind::Lorenz => "lorenz",
            SystemKind::Hh => "hh",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown system '{s}'")))
    }
}

/// How long to run a flow: integrate until the reference oscillator has
/// made `target_strobes` upward checkpoint crossings, or `max_time` passes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowRun {
    pub dt: f64,
    pub transient_time: f64,
    pub target_strobes: usize,
    pub max_time: f64,
    /// Keep every `store_every`-th phase sample.
    pub store_every: usize,
}

impl FlowRun {
    pub fn desk() -> Self {
        Self { dt: 0.01, transient_time: 500.0, target_strobes: 20_000, max_time: 1.0e6, store_every: 5 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || self.store_every == 0 || self.target_strobes < 2 {
            return Err(Error::InvalidInput("flow run needs dt > 0, store_every >= 1, target >= 2".into()));
        }
        if !(self.max_time > self.transient_time) {
            return Err(Error::InvalidInput("max time must exceed the transient".into()));
        }
        Ok(())
    }
}

/// Noisy neuron run: integration at `dt` ms, decimation to the filter rate,
/// gamma-band filtering and Hilbert phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HhRun {
    pub dt: f64,
    pub transient_time: f64,
    pub target_cycles: usize,
    pub max_time: f64,
    pub decimate: usize,
    pub band_lo: f64,
    pub band_hi: f64,
}

impl HhRun {
    pub fn desk() -> Self {
        Self {
            dt: 0.01,
            transient_time: 500.0,
            target_cycles: 20_000,
            max_time: 2.0e6,
            decimate: 10,
            band_lo: 30.0,
            band_hi: 80.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SystemSpec {
    Tent { a: f64, eps: f64, n_iter: usize, discard: usize, center: f64 },
    Rossler { params: RosslerParams, run: FlowRun },
    Lorenz { params: LorenzParams, run: FlowRun },
    Hh { params: HHParams, run: HhRun },
}

impl SystemSpec {
    /// Parameter values as they appear in result rows.
    pub fn param_list(&self) -> Vec<(String, f64)> {
        let kv = |pairs: &[(&str, f64)]| pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        match self {
            SystemSpec::Tent { a, eps, .. } => kv(&[("a", *a), ("eps", *eps)]),
            SystemSpec::Rossler { params: p, .. } => {
                kv(&[("omega1", p.omega1), ("omega2", p.omega2), ("eps1", p.eps1), ("eps2", p.eps2)])
            }
            SystemSpec::Lorenz { params: p, .. } => kv(&[("gamma1", p.gamma1), ("gamma2", p.gamma2), ("eps", p.eps)]),
            SystemSpec::Hh { params: p, .. } => {
                kv(&[("g_syn1", p.g_syn1), ("g_syn2", p.g_syn2), ("noise_std", p.noise_std)])
            }
        }
    }
}

/// Add relative jitter of size `1e-3` to every coordinate.
fn jitter<const N: usize>(base: [f64; N], seed: u64) -> [f64; N] {
    let mut rng = rng_from_seed(seed ^ 0x5EED_1417);
    base.map(|v| v + 1e-3 * v.abs().max(1.0) * rng.random_range(-1.0..1.0))
}

pub const ROSSLER_INIT: [f64; 6] = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0];
pub const LORENZ_INIT: [f64; 6] = [5.0, 5.0, 30.0, -5.0, -5.0, 30.0];

/// Online count of upward checkpoint crossings of a wrapped phase.
struct CrossingCounter {
    unwrapped: f64,
    last: f64,
    level: f64,
    checkpoint: f64,
    count: usize,
}

impl CrossingCounter {
    fn new(first: f64, checkpoint: f64) -> Self {
        Self { unwrapped: first, last: first, level: ((first - checkpoint) / TAU).floor(), checkpoint, count: 0 }
    }

    fn push(&mut self, phase: f64) {
        self.unwrapped += principal_increment(phase - self.last);
        self.last = phase;
        let level = ((self.unwrapped - self.checkpoint) / TAU).floor();
        if level > self.level {
            self.count += (level - self.level) as usize;
        }
        self.level = self.level.max(level);
    }
}

/// Integrate a flow past its transient and hand every `store_every`-th
/// state to `sink` until the reference phase has crossed the checkpoint
/// often enough.
fn flow_run<const N: usize, F, P, S>(
    sys: &F,
    init: [f64; N],
    run: &FlowRun,
    checkpoint: f64,
    phases: P,
    mut sink: S,
) -> Result<()>
where
    F: VectorField<N>,
    P: Fn(&[f64; N]) -> (f64, f64),
    S: FnMut(&[f64; N], (f64, f64)),
{
    run.validate()?;
    let transient = (run.transient_time / run.dt).round() as usize;
    let cfg = IntegratorConfig {
        dt: run.dt,
        n_steps: (run.max_time / run.dt).round() as usize,
        transient_steps: transient,
        seed: 0,
        method: Method::Rk4,
    };
    let mut counter: Option<CrossingCounter> = None;
    // two extra crossings absorb decimation at the ends
    let want = run.target_strobes + 2;
    integrate_with(sys, init, &cfg, |step, s| {
        let ph = phases(s);
        match counter.as_mut() {
            None => counter = Some(CrossingCounter::new(ph.1, checkpoint)),
            Some(c) => c.push(ph.1),
        }
        if (step - transient - 1).is_multiple_of(run.store_every) {
            sink(s, ph);
        }
        if counter.as_ref().is_some_and(|c| c.count >= want) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(())
}

fn flow_phases<const N: usize, F, P>(
    sys: &F,
    init: [f64; N],
    run: &FlowRun,
    checkpoint: f64,
    phases: P,
) -> Result<(PhaseSeries, PhaseSeries)>
where
    F: VectorField<N>,
    P: Fn(&[f64; N]) -> (f64, f64),
{
    let (mut px, mut py) = (Vec::new(), Vec::new());
    flow_run(sys, init, run, checkpoint, phases, |_, (a, b)| {
        px.push(a);
        py.push(b);
    })?;
    let dt = run.dt * run.store_every as f64;
    Ok((PhaseSeries::new(px, dt, PhaseKind::WrappedPhase)?, PhaseSeries::new(py, dt, PhaseKind::WrappedPhase)?))
}

fn flow_trajectory<const N: usize, F, P>(
    sys: &F,
    init: [f64; N],
    run: &FlowRun,
    checkpoint: f64,
    phases: P,
) -> Result<Trajectory>
where
    F: VectorField<N>,
    P: Fn(&[f64; N]) -> (f64, f64),
{
    let mut columns = vec![Vec::new(); N];
    flow_run(sys, init, run, checkpoint, phases, |s, _| {
        for (c, v) in columns.iter_mut().zip(s) {
            c.push(*v);
        }
    })?;
    let dt = run.dt * run.store_every as f64;
    Trajectory::new(sys.names(), run.transient_time + run.dt, dt, columns)
}

fn rossler_angles(s: &[f64; 6]) -> (f64, f64) {
    (wrap(s[1].atan2(s[0])), wrap(s[4].atan2(s[3])))
}

pub fn rossler_phases(
    p: &RosslerParams,
    run: &FlowRun,
    seed: u64,
    checkpoint: f64,
) -> Result<(PhaseSeries, PhaseSeries)> {
    let sys = RosslerSystem(*p);
    flow_phases(&sys, jitter(ROSSLER_INIT, seed), run, checkpoint, rossler_angles)
}

fn lorenz_angle(s: &[f64], r: &LorenzPhaseRef) -> f64 {
    wrap((s[2] - r.z_hat).atan2(s[0].hypot(s[1]) - r.u_hat))
}

pub fn lorenz_phases(
    p: &LorenzParams,
    run: &FlowRun,
    seed: u64,
    checkpoint: f64,
) -> Result<(PhaseSeries, PhaseSeries)> {
    let (r1, r2) = (lorenz_fixed_point(p, 1)?, lorenz_fixed_point(p, 2)?);
    let sys = LorenzSystem(*p);
    flow_phases(&sys, jitter(LORENZ_INIT, seed), run, checkpoint, |s| {
        (lorenz_angle(&s[..3], &r1), lorenz_angle(&s[3..], &r2))
    })
}

/// Membrane voltages sampled at the filter rate (`dt * decimate` ms).
pub fn hh_voltages(p: &HHParams, run: &HhRun, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    p.validate()?;
    if run.decimate == 0 || !(run.dt > 0.0) {
        return Err(Error::InvalidInput("HH run needs dt > 0 and decimate >= 1".into()));
    }
    let sys = HHSystem(*p);
    let transient = (run.transient_time / run.dt).round() as usize;
    let cfg = IntegratorConfig {
        dt: run.dt,
        n_steps: (run.max_time / run.dt).round() as usize,
        transient_steps: transient,
        seed,
        method: Method::EulerMaruyama,
    };
    // spikes of cell 2 stand in for cycles; the edge discard of the Hilbert
    // step drops about a tenth of them
    let want = run.target_cycles + run.target_cycles / 8 + 4;
    let (mut v1, mut v2) = (Vec::new(), Vec::new());
    let mut spikes = 0usize;
    let mut prev = f64::NEG_INFINITY;
    // gates stay at their steady state; only the voltages are perturbed
    let mut init = sys.default_initial_state();
    let v = jitter([init[0], init[5]], seed);
    (init[0], init[5]) = (v[0], v[1]);
    integrate_with(&sys, init, &cfg, |step, s| {
        if prev < 0.0 && s[5] >= 0.0 {
            spikes += 1;
        }
        prev = s[5];
        if (step - transient - 1).is_multiple_of(run.decimate) {
            v1.push(s[0]);
            v2.push(s[5]);
        }
        if spikes >= want {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok((v1, v2))
}

/// Gamma-band Hilbert phases of both voltages.
pub fn hh_phases(p: &HHParams, run: &HhRun, seed: u64) -> Result<(PhaseSeries, PhaseSeries)> {
    let (v1, v2) = hh_voltages(p, run, seed)?;
    let dt_ms = run.dt * run.decimate as f64;
    signal_phases(v1, v2, dt_ms * 1e-3, Some((run.band_lo, run.band_hi)))
}

/// Phases of two raw channels sampled every `dt_s` seconds, optionally
/// band-passed first.
pub fn signal_phases(
    a: Vec<f64>,
    b: Vec<f64>,
    dt_s: f64,
    band: Option<(f64, f64)>,
) -> Result<(PhaseSeries, PhaseSeries)> {
    let phase = |v: Vec<f64>| -> Result<PhaseSeries> {
        let mut s = PhaseSeries::new(v, dt_s, PhaseKind::RawSignal)?;
        if let Some((lo, hi)) = band {
            s = bandpass(&s, lo, hi)?;
        }
        instantaneous_phase(&analytic_signal(&s)?)
    };
    Ok((phase(a)?, phase(b)?))
}

/// Coordinates of the coupled maps after the transient, from a seeded
/// uniform initial point.
pub fn tent_orbit(a: f64, eps: f64, n_iter: usize, discard: usize, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = TentParams::new(a, eps)?;
    if discard >= n_iter {
        return Err(Error::InvalidInput(format!("discard {discard} must be below iterations {n_iter}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut s = CoupledMapState::new(rng.random::<f64>(), rng.random::<f64>())?;
    let (mut x, mut y) = (Vec::with_capacity(n_iter - discard), Vec::with_capacity(n_iter - discard));
    for i in 0..n_iter {
        s = coupled_tent_step(s, &p);
        if i >= discard {
            x.push(s.x);
            y.push(s.y);
        }
    }
    Ok((x, y))
}

/// Simulate one sweep point and run the analysis on it.
pub fn run_point(spec: &SystemSpec, seed: u64, cfg: &AnalysisConfig) -> Result<AnalysisReport> {
    let cp = cfg.checkpoint.value();
    match spec {
        SystemSpec::Tent { a, eps, n_iter, discard, center } => {
            let (x, y) = tent_orbit(*a, *eps, *n_iter, *discard, seed)?;
            analyze_map(&x, &y, *center, cfg)
        }
        SystemSpec::Rossler { params, run } => {
            let (px, py) = rossler_phases(params, run, seed, cp)?;
            analyze_pipeline(&px, &py, cfg)
        }
        SystemSpec::Lorenz { params, run } => {
            let (px, py) = lorenz_phases(params, run, seed, cp)?;
            analyze_pipeline(&px, &py, cfg)
        }
        SystemSpec::Hh { params, run } => {
            let (px, py) = hh_phases(params, run, seed)?;
            analyze_pipeline(&px, &py, cfg)
        }
    }
}

/// Post-transient trajectory of one system, as analyzed by [`run_point`]:
/// map coordinates for the tent maps, full states for the flows and the
/// two membrane voltages (ms time base) for the neurons.
pub fn simulate(spec: &SystemSpec, seed: u64, checkpoint: f64) -> Result<Trajectory> {
    match spec {
        SystemSpec::Tent { a, eps, n_iter, discard, .. } => {
            let (x, y) = tent_orbit(*a, *eps, *n_iter, *discard, seed)?;
            Trajectory::new(vec!["x".into(), "y".into()], *discard as f64 + 1.0, 1.0, vec![x, y])
        }
        SystemSpec::Rossler { params, run } => {
            flow_trajectory(&RosslerSystem(*params), jitter(ROSSLER_INIT, seed), run, checkpoint, rossler_angles)
        }
        SystemSpec::Lorenz { params, run } => {
            let (r1, r2) = (lorenz_fixed_point(params, 1)?, lorenz_fixed_point(params, 2)?);
            flow_trajectory(&LorenzSystem(*params), jitter(LORENZ_INIT, seed), run, checkpoint, |s| {
                (lorenz_angle(&s[..3], &r1), lorenz_angle(&s[3..], &r2))
            })
        }
        SystemSpec::Hh { params, run } => {
            let (v1, v2) = hh_voltages(params, run, seed)?;
            let dt = run.dt * run.decimate as f64;
            Trajectory::new(vec!["v1".into(), "v2".into()], run.transient_time + run.dt, dt, vec![v1, v2])
        }
    }
}

/// One point of the map stability grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovGridRow {
    pub a: f64,
    pub k: f64,
    pub eps: f64,
    pub lambda_perp: f64,
    pub lambda_perp_numerical: f64,
    pub report: std::result::Result<AnalysisReport, Error>,
}

pub fn lyapunov_grid_point(
    a: f64,
    k: f64,
    n_lyap: usize,
    n_iter: usize,
    discard: usize,
    seed: u64,
    cfg: &AnalysisConfig,
) -> Result<LyapunovGridRow> {
    let eps = epsilon_for_log_k(a, k)?;
    let lambda = match lambda_perp(a, eps)? {
        Exponent::Finite(v) => v,
        Exponent::NegInfinity => f64::NEG_INFINITY,
    };
    let num = numerical_lambda_perp(a, eps, n_lyap, seed)?;
    let spec = SystemSpec::Tent { a, eps, n_iter, discard, center: 0.0 };
    let report = run_point(&spec, seed, cfg);
    Ok(LyapunovGridRow { a, k, eps, lambda_perp: lambda, lambda_perp_numerical: num.value.as_f64(), report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::strobe;
    use crate::circular::Angle;

    #[test]
    fn system_names_round_trip() {
        for k in SystemKind::ALL {
            assert_eq!(k.name().parse::<SystemKind>().unwrap(), k);
        }
        assert!("duffing".parse::<SystemKind>().is_err());
    }

    #[test]
    fn crossing_counter_counts_turns() {
        let mut c = CrossingCounter::new(0.1, 0.0);
        for i in 1..=1000 {
            c.push(wrap(0.1 + 0.05 * i as f64));
        }
        assert_eq!(c.count, ((0.1 + 50.0) / TAU).floor() as usize);
    }

    #[test]
    fn rossler_run_reaches_target() {
        let p = RosslerParams::bidirectional(1.015, 0.985, 0.02).unwrap();
        let run = FlowRun { target_strobes: 300, ..FlowRun::desk() };
        let (px, py) = rossler_phases(&p, &run, 1, 0.0).unwrap();
        let s = strobe(&px, &py, Angle::ZERO, Default::default()).unwrap();
        assert!((run.target_strobes..run.target_strobes + 4).contains(&s.len()), "{}", s.len());
    }

    #[test]
    fn seeds_change_initial_conditions_only_slightly() {
        let a = jitter(ROSSLER_INIT, 1);
        let b = jitter(ROSSLER_INIT, 2);
        assert_ne!(a, b);
        for i in 0..6 {
            assert!((a[i] - ROSSLER_INIT[i]).abs() <= 1e-3 * ROSSLER_INIT[i].abs().max(1.0));
        }
    }

    #[test]
    fn simulated_voltages_feed_the_same_pipeline() {
        let p = HHParams::with_coupling(0.1, 0.2, 0.0).unwrap();
        let run = HhRun { target_cycles: 150, ..HhRun::desk() };
        let traj = simulate(&SystemSpec::Hh { params: p, run }, 3, 0.0).unwrap();
        let (v1, v2) = hh_voltages(&p, &run, 3).unwrap();
        assert_eq!(traj.column_by_name("v1").unwrap(), &v1[..]);
        assert_eq!(traj.column_by_name("v2").unwrap(), &v2[..]);
        assert!((traj.dt() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn flow_trajectory_matches_phases() {
        let p = RosslerParams::bidirectional(1.015, 0.985, 0.02).unwrap();
        let run = FlowRun { target_strobes: 50, ..FlowRun::desk() };
        let traj = simulate(&SystemSpec::Rossler { params: p, run }, 9, 0.0).unwrap();
        let (px, _) = rossler_phases(&p, &run, 9, 0.0).unwrap();
        assert_eq!(traj.len(), px.len());
        let (x, y) = (traj.column_by_name("x1").unwrap(), traj.column_by_name("y1").unwrap());
        for i in [0, px.len() / 2, px.len() - 1] {
            assert_eq!(wrap(y[i].atan2(x[i])), px.samples()[i]);
        }
    }

    #[test]
    fn tent_point_is_deterministic() {
        let spec = SystemSpec::Tent { a: 0.3, eps: 0.1, n_iter: 20_000, discard: 1000, center: 0.0 };
        let cfg = AnalysisConfig::default();
        let a = run_point(&spec, 4, &cfg).unwrap();
        let b = run_point(&spec, 4, &cfg).unwrap();
        assert_eq!(a, b);
    }
}
