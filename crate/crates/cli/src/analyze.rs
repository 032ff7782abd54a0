use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;
use std::str::FromStr;

use phaselock::analysis::export::{failure_row, header, report_row};
use phaselock::analysis::{analyze_pipeline, AnalysisReport};
use phaselock::experiments::signal_phases;
use phaselock::models::{Trajectory, BINARY_MAGIC};
use phaselock::{Error, PhaseSeries};

use crate::config::AnalysisSettings;
use crate::error::CliError;
use crate::sweep::analysis_config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    /// Binary when the file starts with the magic bytes, CSV otherwise.
    #[default]
    Auto,
    Csv,
    Binary,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Self::Auto),
            "csv" => Ok(Self::Csv),
            "bin" | "binary" => Ok(Self::Binary),
            _ => Err(format!("unknown format '{s}', expected auto, csv or bin")),
        }
    }
}

/// What the two channels hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputKind {
    /// Raw oscillatory signals; phases come from the analytic signal.
    #[default]
    Signal,
    /// Phases in radians, any branch.
    Phase,
}

impl FromStr for InputKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "signal" => Ok(Self::Signal),
            "phase" => Ok(Self::Phase),
            _ => Err(format!("unknown input kind '{s}', expected signal or phase")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub format: InputFormat,
    pub kind: InputKind,
    /// Column names; the first two data columns when `None`.
    pub channels: Option<(String, String)>,
    /// Band-pass edges in Hz, applied to signals before the Hilbert step.
    pub band: Option<(f64, f64)>,
    /// Seconds per unit of the file's time column.
    pub seconds_per_unit: f64,
    pub settings: AnalysisSettings,
    pub seed: u64,
}

pub fn read_trajectory(path: &Path, format: InputFormat) -> Result<Trajectory, CliError> {
    let mut bytes = Vec::new();
    File::open(path).and_then(|f| BufReader::new(f).read_to_end(&mut bytes)).map_err(|e| CliError::io(path, e))?;
    let binary = match format {
        InputFormat::Auto => bytes.starts_with(BINARY_MAGIC),
        InputFormat::Binary => true,
        InputFormat::Csv => false,
    };
    let parsed = if binary { Trajectory::read_binary(&bytes[..]) } else { Trajectory::read_csv(&bytes[..]) };
    parsed.map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

#[derive(Debug, Clone)]
pub struct AnalyzeOutput {
    pub header: String,
    pub row: String,
    /// `None` when the locking gate failed.
    pub report: Option<AnalysisReport>,
}

fn channel<'a>(t: &'a Trajectory, name: &str) -> Result<&'a [f64], CliError> {
    t.column_by_name(name)
        .ok_or_else(|| CliError::Data(format!("no column `{name}`; available: {}", t.names().join(", "))))
}

pub fn analyze_trajectory(t: &Trajectory, opts: &AnalyzeOptions) -> Result<AnalyzeOutput, CliError> {
    let (a, b) = match &opts.channels {
        Some((x, y)) => (channel(t, x)?, channel(t, y)?),
        None if t.names().len() >= 2 => (t.column(0), t.column(1)),
        None => return Err(CliError::Data("need two data columns".into())),
    };
    if !(opts.seconds_per_unit > 0.0) {
        return Err(CliError::Invalid("time unit must be positive".into()));
    }
    let dt_s = t.dt() * opts.seconds_per_unit;
    let (px, py) = match opts.kind {
        InputKind::Signal => signal_phases(a.to_vec(), b.to_vec(), dt_s, opts.band)?,
        InputKind::Phase => {
            if opts.band.is_some() {
                return Err(CliError::Invalid("band-pass applies to signals, not phases".into()));
            }
            (PhaseSeries::from_angles(a.iter().copied(), dt_s)?, PhaseSeries::from_angles(b.iter().copied(), dt_s)?)
        }
    };
    let cfg = analysis_config(&opts.settings, opts.seed);
    let params = vec![("dt".to_string(), t.dt())];
    match analyze_pipeline(&px, &py, &cfg) {
        Ok(r) => {
            Ok(AnalyzeOutput { header: header(), row: report_row("file", &params, opts.seed, &r), report: Some(r) })
        }
        Err(e @ Error::NoLocking { .. }) => {
            Ok(AnalyzeOutput { header: header(), row: failure_row("file", &params, opts.seed, &e), report: None })
        }
        Err(e) => Err(e.into()),
    }
}
