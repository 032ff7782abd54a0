//! Experiment configuration files.
//!
//! A config is plain text made of sections and `key = value` lines:
//!
//! ```text
//! # comment lines start with '#'
//! [experiment]
//! system = rossler-bi
//! seed = 42
//! scale = desk
//! output = results.csv
//!
//! [params]
//! omega1 = 1.015
//! omega2 = 0.985
//!
//! [sweep]
//! variable = eps
//! start = 0.02
//! stop = 0.0275
//! step = 0.0005
//!
//! [integrator]
//! strobes = 20000
//!
//! [analysis]
//! surrogates = 100
//! ```
//!
//! Grammar:
//!
//! - Blank lines and lines whose first non-space character is `#` are
//!   ignored. There are no trailing comments.
//! - `[experiment]`, `[params]`, `[integrator]` and `[analysis]` may each
//!   appear once. `[sweep]` may appear up to twice; two sweeps form a grid
//!   with the first one as the outer loop.
//! - Every other line is `key = value`. Keys are case-sensitive, a key may
//!   appear once per section, and keys not listed below are errors.
//! - Numbers use Rust `f64` syntax; lists are comma-separated.
//!
//! | section | keys |
//! |---|---|
//! | `experiment` | `system` (required), `seed`, `scale` (`desk`/`full`), `output` |
//! | `params` | system parameters, see [`param_keys`] |
//! | `sweep` | `variable` and either `values` or `start`, `stop`, `step` |
//! | `integrator` | see [`integrator_keys`] |
//! | `analysis` | `checkpoint`, `surrogates`, `crossing` (`interpolated`/`sample-aligned`), `max_duration` |

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use phaselock::experiments::SystemKind;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Desk,
    Full,
}

impl Scale {
    /// Multiplier applied to flow strobe counts and neuron cycle counts.
    pub fn factor(self) -> usize {
        match self {
            Scale::Desk => 1,
            Scale::Full => 10,
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Desk => "desk",
            Scale::Full => "full",
        })
    }
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "desk" => Ok(Scale::Desk),
            "full" => Ok(Scale::Full),
            _ => Err(format!("unknown scale '{s}', expected desk or full")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepRange {
    Range { start: f64, stop: f64, step: f64 },
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub variable: String,
    pub range: SweepRange,
}

impl SweepAxis {
    /// Points of the axis. Range points are `start + i step` rounded to 12
    /// decimals, up to and including `stop`.
    pub fn values(&self) -> Vec<f64> {
        match &self.range {
            SweepRange::Values(v) => v.clone(),
            SweepRange::Range { start, stop, step } => {
                let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..n).map(|i| round12(start + i as f64 * step)).collect()
            }
        }
    }
}

fn round12(v: f64) -> f64 {
    let r = (v * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisSettings {
    pub checkpoint: f64,
    pub surrogates: usize,
    pub crossing: String,
    pub max_duration: usize,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        Self { checkpoint: 0.0, surrogates: 100, crossing: "interpolated".into(), max_duration: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub system: SystemKind,
    pub seed: u64,
    pub scale: Scale,
    pub output: Option<PathBuf>,
    pub params: BTreeMap<String, f64>,
    pub sweeps: Vec<SweepAxis>,
    pub integrator: BTreeMap<String, f64>,
    pub analysis: AnalysisSettings,
}

impl ExperimentConfig {
    pub fn new(system: SystemKind) -> Self {
        Self {
            system,
            seed: 0,
            scale: Scale::Desk,
            output: None,
            params: BTreeMap::new(),
            sweeps: Vec::new(),
            integrator: BTreeMap::new(),
            analysis: AnalysisSettings::default(),
        }
    }
}

/// Parameter names accepted in `[params]` and as sweep variables.
pub fn param_keys(system: SystemKind) -> &'static [&'static str] {
    match system {
        SystemKind::Tent => &["a", "eps", "k", "center"],
        SystemKind::RosslerBi | SystemKind::RosslerUni => &["omega1", "omega2", "eps"],
        SystemKind::Lorenz => &["gamma1", "gamma2", "eps"],
        SystemKind::Hh => &["g_syn1", "g_syn2", "noise_std", "i0"],
    }
}

/// Keys accepted in `[integrator]`.
///
/// Maps: `iterations`, `discard`, `lyapunov_iterations`. Flows: `dt`,
/// `transient`, `strobes`, `store_every`, `max_time`. Neurons: `dt`,
/// `transient`, `cycles`, `max_time`, `decimate`, `band_lo`, `band_hi`.
pub fn integrator_keys(system: SystemKind) -> &'static [&'static str] {
    match system {
        SystemKind::Tent => &["iterations", "discard", "lyapunov_iterations"],
        SystemKind::RosslerBi | SystemKind::RosslerUni | SystemKind::Lorenz => {
            &["dt", "transient", "strobes", "store_every", "max_time"]
        }
        SystemKind::Hh => &["dt", "transient", "cycles", "max_time", "decimate", "band_lo", "band_hi"],
    }
}

const EXPERIMENT_KEYS: &[&str] = &["system", "seed", "scale", "output"];
const SWEEP_KEYS: &[&str] = &["variable", "values", "start", "stop", "step"];
const ANALYSIS_KEYS: &[&str] = &["checkpoint", "surrogates", "crossing", "max_duration"];

/// One section as read from the file, with the line of each entry.
#[derive(Debug, Clone, Default)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<(String, String, usize)>,
}

impl Section {
    fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.entries.iter().find(|(k, _, _)| k == key).map(|(_, v, l)| (v.as_str(), *l))
    }
}

fn config_err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Config { line, message: message.into() }
}

fn split_sections(text: &str) -> Result<Vec<Section>, CliError> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            sections.push(Section { name: name.trim().to_string(), line, entries: Vec::new() });
            continue;
        }
        let Some((k, v)) = t.split_once('=') else {
            return Err(config_err(line, format!("expected `key = value` or `[section]`, found `{t}`")));
        };
        let Some(sec) = sections.last_mut() else {
            return Err(config_err(line, "entry before the first section"));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(config_err(line, "empty key or value"));
        }
        if sec.get(k).is_some() {
            return Err(config_err(line, format!("duplicate key `{k}` in [{}]", sec.name)));
        }
        sec.entries.push((k.to_string(), v.to_string(), line));
    }
    Ok(sections)
}

fn check_keys(sec: &Section, allowed: &[&str]) -> Result<(), CliError> {
    for (k, _, line) in &sec.entries {
        if !allowed.contains(&k.as_str()) {
            return Err(config_err(
                *line,
                format!("unknown key `{k}` in [{}]; expected one of: {}", sec.name, allowed.join(", ")),
            ));
        }
    }
    Ok(())
}

fn num<T: FromStr>(v: &str, line: usize, what: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| config_err(line, format!("cannot parse `{v}` as {what}")))
}

fn finite(v: &str, line: usize) -> Result<f64, CliError> {
    let x: f64 = num(v, line, "a number")?;
    if !x.is_finite() {
        return Err(config_err(line, format!("`{v}` is not finite")));
    }
    Ok(x)
}

/// Parse only the `[analysis]` section (other sections must be absent or
/// `[experiment]`, whose `seed` is returned). Used when analyzing files.
pub fn parse_analysis(text: &str) -> Result<(AnalysisSettings, Option<u64>), CliError> {
    let mut settings = AnalysisSettings::default();
    let mut seed = None;
    for sec in split_sections(text)? {
        match sec.name.as_str() {
            "analysis" => settings = analysis_section(&sec)?,
            "experiment" => {
                check_keys(&sec, &["seed"])?;
                if let Some((v, l)) = sec.get("seed") {
                    seed = Some(num(v, l, "an unsigned integer")?);
                }
            }
            other => return Err(config_err(sec.line, format!("section [{other}] is not used when analyzing a file"))),
        }
    }
    Ok((settings, seed))
}

fn analysis_section(sec: &Section) -> Result<AnalysisSettings, CliError> {
    check_keys(sec, ANALYSIS_KEYS)?;
    let mut a = AnalysisSettings::default();
    if let Some((v, l)) = sec.get("checkpoint") {
        a.checkpoint = finite(v, l)?;
    }
    if let Some((v, l)) = sec.get("surrogates") {
        a.surrogates = num(v, l, "a count")?;
        if a.surrogates < phaselock::analysis::MIN_SURROGATES {
            return Err(config_err(l, format!("need at least {} surrogates", phaselock::analysis::MIN_SURROGATES)));
        }
    }
    if let Some((v, l)) = sec.get("crossing") {
        if !matches!(v, "interpolated" | "sample-aligned") {
            return Err(config_err(l, format!("unknown crossing mode `{v}`")));
        }
        a.crossing = v.to_string();
    }
    if let Some((v, l)) = sec.get("max_duration") {
        a.max_duration = num(v, l, "a count")?;
        if a.max_duration < phaselock::analysis::N_BINS {
            return Err(config_err(l, format!("max_duration must be at least {}", phaselock::analysis::N_BINS)));
        }
    }
    Ok(a)
}

fn sweep_section(sec: &Section, system: SystemKind) -> Result<SweepAxis, CliError> {
    check_keys(sec, SWEEP_KEYS)?;
    let (variable, vline) = sec.get("variable").ok_or_else(|| config_err(sec.line, "[sweep] needs `variable`"))?;
    if !param_keys(system).contains(&variable) {
        return Err(config_err(vline, format!("`{variable}` is not a parameter of {system}")));
    }
    let has_range = ["start", "stop", "step"].iter().any(|k| sec.get(k).is_some());
    let range = match (sec.get("values"), has_range) {
        (Some(_), true) => return Err(config_err(sec.line, "[sweep] takes either `values` or a range, not both")),
        (Some((v, l)), false) => {
            let vals = v.split(',').map(|x| finite(x.trim(), l)).collect::<Result<Vec<_>, _>>()?;
            SweepRange::Values(vals)
        }
        (None, true) => {
            let get = |k: &str| -> Result<f64, CliError> {
                let (v, l) = sec.get(k).ok_or_else(|| config_err(sec.line, format!("[sweep] range needs `{k}`")))?;
                finite(v, l)
            };
            let (start, stop, step) = (get("start")?, get("stop")?, get("step")?);
            if !(step > 0.0) {
                return Err(config_err(sec.get("step").map_or(sec.line, |s| s.1), "step must be positive"));
            }
            if stop < start {
                return Err(config_err(sec.get("stop").map_or(sec.line, |s| s.1), "empty range: stop < start"));
            }
            SweepRange::Range { start, stop, step }
        }
        (None, false) => return Err(config_err(sec.line, "[sweep] needs `values` or `start`/`stop`/`step`")),
    };
    Ok(SweepAxis { variable: variable.to_string(), range })
}

impl FromStr for ExperimentConfig {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        let sections = split_sections(text)?;
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        for s in &sections {
            let limit = match s.name.as_str() {
                "experiment" | "params" | "integrator" | "analysis" => 1,
                "sweep" => 2,
                other => return Err(config_err(s.line, format!("unknown section [{other}]"))),
            };
            let n = seen.entry(s.name.as_str()).or_default();
            *n += 1;
            if *n > limit {
                return Err(config_err(s.line, format!("too many [{}] sections", s.name)));
            }
        }
        let exp = sections
            .iter()
            .find(|s| s.name == "experiment")
            .ok_or_else(|| config_err(0, "missing [experiment] section"))?;
        check_keys(exp, EXPERIMENT_KEYS)?;
        let (sys, sl) = exp.get("system").ok_or_else(|| config_err(exp.line, "[experiment] needs `system`"))?;
        let system: SystemKind = sys.parse().map_err(|_| config_err(sl, format!("unknown system `{sys}`")))?;
        let mut cfg = ExperimentConfig::new(system);
        if let Some((v, l)) = exp.get("seed") {
            cfg.seed = num(v, l, "an unsigned integer")?;
        }
        if let Some((v, l)) = exp.get("scale") {
            cfg.scale = v.parse().map_err(|e: String| config_err(l, e))?;
        }
        cfg.output = exp.get("output").map(|(v, _)| PathBuf::from(v));

        for sec in &sections {
            match sec.name.as_str() {
                "params" => {
                    check_keys(sec, param_keys(system))?;
                    for (k, v, l) in &sec.entries {
                        cfg.params.insert(k.clone(), finite(v, *l)?);
                    }
                }
                "integrator" => {
                    check_keys(sec, integrator_keys(system))?;
                    for (k, v, l) in &sec.entries {
                        let x = finite(v, *l)?;
                        if !(x >= 0.0) {
                            return Err(config_err(*l, format!("`{k}` must be non-negative")));
                        }
                        cfg.integrator.insert(k.clone(), x);
                    }
                }
                "analysis" => cfg.analysis = analysis_section(sec)?,
                "sweep" => {
                    let axis = sweep_section(sec, system)?;
                    if cfg.params.contains_key(&axis.variable) {
                        return Err(config_err(sec.line, format!("`{}` is both fixed and swept", axis.variable)));
                    }
                    if cfg.sweeps.iter().any(|a| a.variable == axis.variable) {
                        return Err(config_err(sec.line, format!("`{}` is swept twice", axis.variable)));
                    }
                    cfg.sweeps.push(axis);
                }
                _ => {}
            }
        }
        if system == SystemKind::Tent {
            let set = |k: &str| cfg.params.contains_key(k) || cfg.sweeps.iter().any(|a| a.variable == k);
            if set("eps") && set("k") {
                return Err(config_err(0, "tent configs set either `eps` or the stability factor `k`, not both"));
            }
        }
        Ok(cfg)
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        let _ = writeln!(s, "[experiment]\nsystem = {}\nseed = {}\nscale = {}", self.system, self.seed, self.scale);
        if let Some(o) = &self.output {
            let _ = writeln!(s, "output = {}", o.display());
        }
        if !self.params.is_empty() {
            let _ = writeln!(s, "\n[params]");
            for (k, v) in &self.params {
                let _ = writeln!(s, "{k} = {}", fmt_f64(*v));
            }
        }
        for axis in &self.sweeps {
            let _ = writeln!(s, "\n[sweep]\nvariable = {}", axis.variable);
            match &axis.range {
                SweepRange::Range { start, stop, step } => {
                    let _ = writeln!(
                        s,
                        "start = {}\nstop = {}\nstep = {}",
                        fmt_f64(*start),
                        fmt_f64(*stop),
                        fmt_f64(*step)
                    );
                }
                SweepRange::Values(v) => {
                    let list: Vec<String> = v.iter().map(|x| fmt_f64(*x)).collect();
                    let _ = writeln!(s, "values = {}", list.join(", "));
                }
            }
        }
        if !self.integrator.is_empty() {
            let _ = writeln!(s, "\n[integrator]");
            for (k, v) in &self.integrator {
                let _ = writeln!(s, "{k} = {}", fmt_f64(*v));
            }
        }
        let a = &self.analysis;
        let _ = writeln!(
            s,
            "\n[analysis]\ncheckpoint = {}\nsurrogates = {}\ncrossing = {}\nmax_duration = {}",
            fmt_f64(a.checkpoint),
            a.surrogates,
            a.crossing,
            a.max_duration
        );
        f.write_str(&s)
    }
}
