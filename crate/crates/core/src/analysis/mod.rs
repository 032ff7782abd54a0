//! Return-map analysis of intermittent phase locking.
//!
//! [`strobe`] samples the phase of `x` at checkpoint crossings of `y`;
//! [`fit_partition`] and [`build_return_map`] recenter the samples on the
//! preferred angle and label consecutive pairs with [`Region`]s;
//! [`transition_rates`], [`desync_events`] and the histogram and laminar
//! functions summarize how the labels evolve. [`analyze_pipeline`] chains
//! all of it behind the surrogate significance gate.

mod desync;
pub mod export;
mod partition;
mod pipeline;
mod rates;
mod scaling;
mod strobe;
mod sync;

pub use desync::{
    desync_events, desync_histogram, estimate_histogram_from_rates, laminar_run_count, markov_duration_mass,
    mean_laminar_empirical, mean_laminar_from_rates, simple_duration_mass, DesyncHistogram, HistogramFlavor, Laminar,
    DEFAULT_MAX_DURATION, N_BINS,
};
pub use partition::{
    build_return_map, fit_partition, in_sync, tent_recentered, tent_return_map, Region, RegionPartition, ReturnMap,
};
pub use pipeline::{analyze_map, analyze_pipeline, AnalysisConfig, AnalysisReport};
pub use rates::{transition_rates, SubRates, TransitionRates, R3_LOW_CONFIDENCE};
pub use scaling::{linear_fit, scaling_fit, ScalingFit, ScalingLaw, MIN_FIT_POINTS};
pub use strobe::{strobe, CrossingMode, StrobedPhases};
pub use sync::{gamma_index, locking_significance, Significance, SyncIndex, MIN_SIGNIFICANCE_SAMPLES, MIN_SURROGATES};
