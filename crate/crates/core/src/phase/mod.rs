//! Phase extraction: geometric protophases for the flows and the
//! band-pass + analytic-signal pipeline for recorded signals.

mod filter;
mod hilbert;
mod protophase;

pub use filter::{bandpass, BandpassFilter, Biquad};
pub use hilbert::{analytic_signal, instantaneous_phase, AnalyticSeries, EDGE_DISCARD};
pub use protophase::{lorenz_fixed_point, phase_lorenz, protophase_rossler, ring_transform, LorenzPhaseRef};
