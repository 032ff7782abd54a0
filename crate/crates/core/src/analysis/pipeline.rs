use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::desync::{
    desync_events, desync_histogram, estimate_histogram_from_rates, laminar_run_count, mean_laminar_empirical,
    mean_laminar_from_rates, DesyncHistogram, HistogramFlavor, Laminar, DEFAULT_MAX_DURATION,
};
use super::partition::{build_return_map, fit_partition, tent_return_map, RegionPartition, ReturnMap};
use super::rates::{transition_rates, TransitionRates};
use super::strobe::{strobe, CrossingMode};
use super::sync::{locking_significance, Significance, SyncIndex};
use crate::circular::{Angle, PhaseSeries};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub checkpoint: Angle,
    pub crossing: CrossingMode,
    pub n_surrogates: usize,
    pub surrogate_seed: u64,
    pub max_duration: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            checkpoint: Angle::ZERO,
            crossing: CrossingMode::Interpolated,
            n_surrogates: 100,
            surrogate_seed: 0,
            max_duration: DEFAULT_MAX_DURATION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub sync: SyncIndex,
    pub significance: Significance,
    pub n_strobes: usize,
    pub partition: RegionPartition,
    pub map: ReturnMap,
    pub rates: TransitionRates,
    pub events: Vec<usize>,
    pub empirical: DesyncHistogram,
    /// `None` when a rate needed by the estimate is undefined.
    pub markov: Option<DesyncHistogram>,
    pub simple: Option<DesyncHistogram>,
    pub laminar_empirical: Option<Laminar>,
    pub laminar_rate: Option<Laminar>,
    pub laminar_runs: usize,
}

fn gate(x: &[f64], y: &[f64], cfg: &AnalysisConfig) -> Result<(SyncIndex, Significance)> {
    let sig = locking_significance(x, y, cfg.n_surrogates, cfg.surrogate_seed)?;
    if !sig.significant {
        return Err(Error::NoLocking { gamma: sig.gamma, threshold: sig.threshold_95 });
    }
    Ok((SyncIndex { gamma: sig.gamma, n: x.len() }, sig))
}

fn finish(
    sync: SyncIndex,
    significance: Significance,
    n_strobes: usize,
    partition: RegionPartition,
    map: ReturnMap,
    cfg: &AnalysisConfig,
) -> Result<AnalysisReport> {
    let rates = transition_rates(&map)?;
    let events = desync_events(&map)?;
    let empirical = desync_histogram(&events);
    let estimate = |flavor| match estimate_histogram_from_rates(&rates, cfg.max_duration, flavor) {
        Ok(h) => Ok(Some(h)),
        Err(Error::UndefinedRate(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let markov = estimate(HistogramFlavor::RateMarkov)?;
    let simple = estimate(HistogramFlavor::RateSimple)?;
    Ok(AnalysisReport {
        sync,
        significance,
        n_strobes,
        laminar_empirical: mean_laminar_empirical(&map).ok(),
        laminar_rate: mean_laminar_from_rates(&rates).ok(),
        laminar_runs: laminar_run_count(&map),
        partition,
        map,
        rates,
        events,
        empirical,
        markov,
        simple,
    })
}

/// Strobe, gate on significant locking, partition and measure.
pub fn analyze_pipeline(phase_x: &PhaseSeries, phase_y: &PhaseSeries, cfg: &AnalysisConfig) -> Result<AnalysisReport> {
    let strobed = strobe(phase_x, phase_y, cfg.checkpoint, cfg.crossing)?;
    let (sync, sig) = gate(phase_x.samples(), phase_y.samples(), cfg)?;
    let partition = fit_partition(&strobed)?;
    let map = build_return_map(&strobed, &partition)?;
    finish(sync, sig, strobed.len(), partition, map, cfg)
}

/// Map variant: every iterate is a sample, the phase difference is
/// `theta = y - x` and the partition is centered on `center`.
pub fn analyze_map(x: &[f64], y: &[f64], center: f64, cfg: &AnalysisConfig) -> Result<AnalysisReport> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput("map coordinates differ in length".into()));
    }
    let px: Vec<f64> = x.iter().map(|v| PI * v).collect();
    let py: Vec<f64> = y.iter().map(|v| PI * v).collect();
    let (sync, sig) = gate(&px, &py, cfg)?;
    let theta: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - a).collect();
    let map = tent_return_map(&theta, center)?;
    let partition = RegionPartition::new(Angle::new(crate::circular::wrap(PI * (center + 1.0)))?);
    finish(sync, sig, theta.len(), partition, map, cfg)
}
