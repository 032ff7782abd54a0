//! Detection and characterization of the fine temporal structure of
//! intermittent phase locking between two oscillators.
//!
//! The analysis samples the phase of one oscillator each time the other
//! crosses a checkpoint, builds the first-return map of those samples,
//! partitions it into four regions around the preferred locking angle and
//! measures how the system moves between them: transition rates,
//! desynchronization durations and laminar lengths.
//!
//! Model generators for coupled skew tent maps, Rössler and Lorenz
//! oscillators and a pair of inhibitory Hodgkin-Huxley neurons live in
//! [`models`]; phase extraction in [`phase`]; the method itself in
//! [`analysis`]; closed-form map exponents in [`lyapunov`]; end-to-end
//! sweep points in [`experiments`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod circular;
mod error;
pub mod experiments;
pub mod lyapunov;
pub mod models;
pub mod phase;
pub mod seed;

pub use analysis::{
    DesyncHistogram, HistogramFlavor, Region, RegionPartition, ReturnMap, StrobedPhases, SyncIndex, TransitionRates,
};
pub use circular::{wrap_angle, Angle, CircStats, PhaseKind, PhaseSeries};
pub use error::{Error, Result};
