//! Sweep planning and execution.
//!
//! Point `i` (row-major over the sweep axes, first axis outermost) runs with
//! seed `point_seed(master, i)`; the same seed drives the initial-condition
//! jitter, the noise and the surrogate gate of that point and is written to
//! the `seed` column.

use std::collections::BTreeMap;
use std::io::Write;

use phaselock::analysis::export::{failure_row, header, report_row};
use phaselock::analysis::{AnalysisConfig, CrossingMode};
use phaselock::circular::wrap_angle;
use phaselock::experiments::{lyapunov_grid_point, run_point, FlowRun, HhRun, SystemKind, SystemSpec};
use phaselock::lyapunov::MIN_LYAPUNOV_ITERATIONS;
use phaselock::models::{HHParams, LorenzParams, RosslerParams, TentParams};
use phaselock::seed::point_seed;
use rayon::prelude::*;

use crate::config::{AnalysisSettings, ExperimentConfig};
use crate::error::CliError;

pub const LYAPUNOV_COLUMNS: &[&str] = &["a", "k", "eps", "lambda_perp", "lambda_perp_numerical"];

fn defaults(system: SystemKind) -> &'static [(&'static str, f64)] {
    match system {
        SystemKind::Tent => &[("a", 0.3), ("eps", 0.1), ("center", 0.0)],
        SystemKind::RosslerBi => &[("omega1", 1.015), ("omega2", 0.985), ("eps", 0.02)],
        SystemKind::RosslerUni => &[("omega1", 0.93), ("omega2", 0.95), ("eps", 0.035)],
        SystemKind::Lorenz => &[("gamma1", 1.5), ("gamma2", -1.5), ("eps", 8.0)],
        SystemKind::Hh => &[("g_syn1", 0.1), ("g_syn2", 0.1), ("noise_std", 2.12), ("i0", 10.0)],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Analysis(SystemSpec),
    /// Tent maps parameterized by the stability factor `k`.
    Lyapunov {
        a: f64,
        k: f64,
        n_lyap: usize,
        n_iter: usize,
        discard: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub index: usize,
    pub seed: u64,
    pub values: BTreeMap<String, f64>,
    pub job: Job,
}

#[derive(Debug, Clone)]
pub struct Plan {
    pub system: SystemKind,
    pub analysis: AnalysisSettings,
    pub points: Vec<Point>,
    pub lyapunov: bool,
}

fn count(cfg: &ExperimentConfig, key: &str, default: f64) -> Result<usize, CliError> {
    let v = cfg.integrator.get(key).copied().unwrap_or(default);
    if v.fract() != 0.0 || v > usize::MAX as f64 {
        return Err(CliError::Invalid(format!("integrator `{key}` must be a whole number, got {v}")));
    }
    Ok(v as usize)
}

fn real(cfg: &ExperimentConfig, key: &str, default: f64) -> f64 {
    cfg.integrator.get(key).copied().unwrap_or(default)
}

fn flow_run(cfg: &ExperimentConfig) -> Result<FlowRun, CliError> {
    let d = FlowRun::desk();
    let f = cfg.scale.factor();
    Ok(FlowRun {
        dt: real(cfg, "dt", d.dt),
        transient_time: real(cfg, "transient", d.transient_time),
        target_strobes: count(cfg, "strobes", d.target_strobes as f64)? * f,
        max_time: real(cfg, "max_time", d.max_time) * f as f64,
        store_every: count(cfg, "store_every", d.store_every as f64)?,
    })
}

fn hh_run(cfg: &ExperimentConfig) -> Result<HhRun, CliError> {
    let d = HhRun::desk();
    let f = cfg.scale.factor();
    Ok(HhRun {
        dt: real(cfg, "dt", d.dt),
        transient_time: real(cfg, "transient", d.transient_time),
        target_cycles: count(cfg, "cycles", d.target_cycles as f64)? * f,
        max_time: real(cfg, "max_time", d.max_time) * f as f64,
        decimate: count(cfg, "decimate", d.decimate as f64)?,
        band_lo: real(cfg, "band_lo", d.band_lo),
        band_hi: real(cfg, "band_hi", d.band_hi),
    })
}

fn job(cfg: &ExperimentConfig, v: &BTreeMap<String, f64>) -> Result<Job, CliError> {
    let g = |k: &str| v[k];
    let spec = match cfg.system {
        SystemKind::Tent => {
            let n_iter = count(cfg, "iterations", 350_000.0)?;
            let discard = count(cfg, "discard", 50_000.0)?;
            if discard >= n_iter {
                return Err(CliError::Invalid(format!("discard {discard} must be below iterations {n_iter}")));
            }
            if let Some(&k) = v.get("k") {
                let n_lyap = count(cfg, "lyapunov_iterations", 1.0e6)?;
                if n_lyap < MIN_LYAPUNOV_ITERATIONS {
                    return Err(CliError::Invalid(format!(
                        "lyapunov_iterations {n_lyap} is below the minimum {MIN_LYAPUNOV_ITERATIONS}"
                    )));
                }
                phaselock::lyapunov::epsilon_for_log_k(g("a"), k)?;
                return Ok(Job::Lyapunov { a: g("a"), k, n_lyap, n_iter, discard });
            }
            TentParams::new(g("a"), g("eps"))?;
            SystemSpec::Tent { a: g("a"), eps: g("eps"), n_iter, discard, center: g("center") }
        }
        SystemKind::RosslerBi => SystemSpec::Rossler {
            params: RosslerParams::bidirectional(g("omega1"), g("omega2"), g("eps"))?,
            run: flow_run(cfg)?,
        },
        SystemKind::RosslerUni => SystemSpec::Rossler {
            params: RosslerParams::unidirectional(g("omega1"), g("omega2"), g("eps"))?,
            run: flow_run(cfg)?,
        },
        SystemKind::Lorenz => {
            SystemSpec::Lorenz { params: LorenzParams::new(g("gamma1"), g("gamma2"), g("eps"))?, run: flow_run(cfg)? }
        }
        SystemKind::Hh => {
            let p = HHParams { i0: g("i0"), ..HHParams::with_coupling(g("g_syn1"), g("g_syn2"), g("noise_std"))? };
            p.validate()?;
            SystemSpec::Hh { params: p, run: hh_run(cfg)? }
        }
    };
    Ok(Job::Analysis(spec))
}

/// Resolve every sweep point. All validation happens here, before anything
/// is simulated.
pub fn plan(cfg: &ExperimentConfig) -> Result<Plan, CliError> {
    let mut base: BTreeMap<String, f64> = defaults(cfg.system).iter().map(|(k, v)| (k.to_string(), *v)).collect();
    let uses_k = cfg.params.contains_key("k") || cfg.sweeps.iter().any(|a| a.variable == "k");
    if uses_k {
        base.remove("eps");
    }
    base.extend(cfg.params.iter().map(|(k, v)| (k.clone(), *v)));

    let mut grid: Vec<BTreeMap<String, f64>> = vec![base];
    for axis in &cfg.sweeps {
        let vals = axis.values();
        if vals.is_empty() {
            return Err(CliError::Invalid(format!("sweep over `{}` has no points", axis.variable)));
        }
        grid = grid
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |x| {
                    let mut q = p.clone();
                    q.insert(axis.variable.clone(), *x);
                    q
                })
            })
            .collect();
    }
    if !(cfg.analysis.checkpoint.is_finite()) {
        return Err(CliError::Invalid("checkpoint must be finite".into()));
    }
    let points = grid
        .into_iter()
        .enumerate()
        .map(|(index, values)| {
            let job = job(cfg, &values)?;
            Ok(Point { index, seed: point_seed(cfg.seed, index as u64), values, job })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Plan { system: cfg.system, analysis: cfg.analysis.clone(), points, lyapunov: uses_k })
}

pub fn analysis_config(s: &AnalysisSettings, seed: u64) -> AnalysisConfig {
    AnalysisConfig {
        checkpoint: wrap_angle(s.checkpoint).expect("checkpoint is finite"),
        crossing: if s.crossing == "sample-aligned" { CrossingMode::SampleAligned } else { CrossingMode::Interpolated },
        n_surrogates: s.surrogates,
        surrogate_seed: seed,
        max_duration: s.max_duration,
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub header: String,
    pub rows: Vec<String>,
    /// Index and error of every point that produced a failure row.
    pub failures: Vec<(usize, phaselock::Error)>,
}

impl SweepOutput {
    pub fn numerical_failures(&self) -> usize {
        self.failures.iter().filter(|(_, e)| e.is_numerical()).count()
    }

    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.header)?;
        for r in &self.rows {
            writeln!(w, "{r}")?;
        }
        w.flush()
    }
}

fn opt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        String::new()
    }
}

fn run_one(plan: &Plan, p: &Point) -> (String, Option<phaselock::Error>) {
    let cfg = analysis_config(&plan.analysis, p.seed);
    let system = plan.system.name();
    match &p.job {
        Job::Analysis(spec) => {
            let params = spec.param_list();
            match run_point(spec, p.seed, &cfg) {
                Ok(r) => (report_row(system, &params, p.seed, &r), None),
                Err(e) => (failure_row(system, &params, p.seed, &e), Some(e)),
            }
        }
        Job::Lyapunov { a, k, n_lyap, n_iter, discard } => {
            match lyapunov_grid_point(*a, *k, *n_lyap, *n_iter, *discard, p.seed, &cfg) {
                Ok(row) => {
                    let params = vec![("a".to_string(), row.a), ("eps".to_string(), row.eps)];
                    let prefix =
                        [row.a, row.k, row.eps, row.lambda_perp, row.lambda_perp_numerical].map(opt_num).join(",");
                    match &row.report {
                        Ok(r) => (format!("{prefix},{}", report_row(system, &params, p.seed, r)), None),
                        Err(e) => (format!("{prefix},{}", failure_row(system, &params, p.seed, e)), Some(e.clone())),
                    }
                }
                Err(e) => {
                    let params = vec![("a".to_string(), *a)];
                    let prefix = format!("{},{},,,", opt_num(*a), opt_num(*k));
                    (format!("{prefix}{}", failure_row(system, &params, p.seed, &e)), Some(e))
                }
            }
        }
    }
}

/// Run every point on `workers` threads (all cores when `None`) and return
/// the rows in sweep order.
pub fn execute(plan: &Plan, workers: Option<usize>) -> Result<SweepOutput, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Invalid(format!("cannot start worker pool: {e}")))?;
    let results: Vec<(String, Option<phaselock::Error>)> =
        pool.install(|| plan.points.par_iter().map(|p| run_one(plan, p)).collect());
    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (i, (row, err)) in results.into_iter().enumerate() {
        rows.push(row);
        if let Some(e) = err {
            failures.push((i, e));
        }
    }
    let header = if plan.lyapunov { format!("{},{}", LYAPUNOV_COLUMNS.join(","), header()) } else { header() };
    Ok(SweepOutput { header, rows, failures })
}

pub fn run_sweep(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<SweepOutput, CliError> {
    execute(&plan(cfg)?, workers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{SweepAxis, SweepRange};

    fn tent(sweeps: Vec<SweepAxis>) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(SystemKind::Tent);
        c.integrator.insert("iterations".into(), 20_000.0);
        c.integrator.insert("discard".into(), 1000.0);
        c.sweeps = sweeps;
        c
    }

    #[test]
    fn grid_is_row_major_with_derived_seeds() {
        let c = tent(vec![
            SweepAxis { variable: "a".into(), range: SweepRange::Values(vec![0.3, 0.7]) },
            SweepAxis { variable: "eps".into(), range: SweepRange::Values(vec![0.05, 0.1, 0.2]) },
        ]);
        let p = plan(&c).unwrap();
        assert_eq!(p.points.len(), 6);
        assert_eq!(p.points[1].values["a"], 0.3);
        assert_eq!(p.points[1].values["eps"], 0.1);
        assert_eq!(p.points[3].values["a"], 0.7);
        assert_eq!(p.points[4].seed, point_seed(0, 4));
    }

    #[test]
    fn invalid_point_fails_before_running() {
        let c = tent(vec![SweepAxis { variable: "eps".into(), range: SweepRange::Values(vec![0.1, 0.6]) }]);
        assert!(plan(&c).is_err());
        let mut c = ExperimentConfig::new(SystemKind::RosslerBi);
        c.integrator.insert("strobes".into(), 10.5);
        assert!(matches!(plan(&c), Err(CliError::Invalid(_))));
    }

    #[test]
    fn single_point_single_row() {
        let c = tent(vec![]);
        let out = run_sweep(&c, Some(1)).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert!(out.rows[0].ends_with(",ok"), "{}", out.rows[0]);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let c = tent(vec![SweepAxis { variable: "eps".into(), range: SweepRange::Values(vec![0.0, 0.08, 0.12]) }]);
        let a = run_sweep(&c, Some(1)).unwrap();
        let b = run_sweep(&c, Some(3)).unwrap();
        assert_eq!(a.rows, b.rows);
        // uncoupled maps fail the locking gate but still produce a row
        assert!(a.rows[0].contains("no overall phase locking"));
        assert_eq!(a.failures.len(), 1);
        assert_eq!(a.numerical_failures(), 0);
    }

    #[test]
    fn lyapunov_rows_carry_exponents() {
        let mut c = tent(vec![SweepAxis { variable: "k".into(), range: SweepRange::Values(vec![1.1]) }]);
        c.integrator.insert("lyapunov_iterations".into(), 100_000.0);
        let out = run_sweep(&c, Some(1)).unwrap();
        assert!(out.header.starts_with("a,k,eps,lambda_perp,lambda_perp_numerical,system"));
        let f: Vec<&str> = out.rows[0].split(',').collect();
        let lam: f64 = f[3].parse().unwrap();
        assert!((lam - 1.1f64.ln()).abs() < 1e-12);
        assert_eq!(out.header.split(',').count(), f.len());
    }
}
