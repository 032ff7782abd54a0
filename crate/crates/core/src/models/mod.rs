//! Generators for the coupled test systems and the fixed-step integrators
//! that drive them.

mod hh;
mod integrate;
mod io;
mod lorenz;
mod rossler;
mod tent;

pub use hh::{alpha_h, alpha_m, alpha_n, beta_h, beta_m, beta_n, h_inf, hh_derivs, HHParams, HHSystem, HH_DIM};
pub use integrate::{integrate, integrate_with, IntegratorConfig, Method, VectorField};
pub use io::{ParseError, Trajectory, BINARY_MAGIC};
pub use lorenz::{lorenz_derivs, LorenzParams, LorenzSystem};
pub use rossler::{rossler_derivs, RosslerParams, RosslerSystem};
pub use tent::{coupled_tent_step, tent_derivative, tent_f, tent_theta_series, CoupledMapState, MapScalar, TentParams};
