//! The fixed-point operator `𝒯` and the outer iteration.
//!
//! `𝒯` maps a temperature `θ` to the potential `φ(θ)` of the electric
//! problem with `σ(θ)` frozen, then to the solution `Θ` of the thermal
//! problem with `k(θ)`, `σ(θ)`, `α_s(θ)` frozen and the radiation term kept
//! nonlinear in `Θ`. A fixed point `θ = 𝒯(θ)` together with `φ(θ)` is a
//! discrete solution of the coupled problem.

pub mod picard;
pub mod presets;
pub mod problem;
pub mod solvers;

use thiserror::Error;

use crate::fem::FemError;

pub use picard::{default_initial_guess, picard_solve, PicardOptions, PicardResult, SolveReport};
pub use presets::{preset, small_data_problem, table_model, PRESET_NAMES, STEFAN_BOLTZMANN};
pub use problem::{boundary_fn_norm, for_each_boundary_point, ExtraSources, ProblemData, SpatialFn, VectorFn};
pub use solvers::{
    electric_flux, operator_t, solve_electric, solve_thermal, thermal_flux, thermal_gamma_data, NewtonInfo,
    SolverSettings,
};

#[derive(Debug, Error)]
pub enum CouplingError {
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error("invalid problem data: {0}")]
    InvalidData(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("Newton iteration diverged: {reason}")]
    NewtonDivergence { reason: String, residuals: Vec<f64> },
    #[error("fixed-point iteration did not converge in {} outer iterations", .0.report.outer_iterations)]
    NotConverged(Box<PicardResult>),
}
