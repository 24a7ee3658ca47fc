//! P1 finite elements: coefficients, assembly, linear solves and field norms.

pub mod assembly;
pub mod coefficients;
pub mod field;
pub mod quadrature;
pub mod solve;
pub mod sparse;

use thiserror::Error;

pub use assembly::{
    assemble_diffusion, assemble_edge_load, assemble_flux_load, assemble_radiation, assemble_surface_load, node_weights,
    radiation_system, Parallelism,
};
pub use coefficients::{CoefficientModel, ScalarFn, Tensor2, TensorFn};
pub use field::{boundary_lq_norm, grad_lp_norm, norms, FieldNorms, FieldP1};
pub use solve::{solve_spd, solve_spd_info, Constraint, SolveInfo};
pub use sparse::SparseSymMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FemError {
    #[error("assembly failed on element {element}: {detail}")]
    Assembly { element: usize, detail: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("right-hand side not orthogonal to constants (relative mean {ratio:e})")]
    Compatibility { ratio: f64 },
    #[error("linear solver failed: {detail}")]
    Solver { detail: String, history: Vec<f64> },
    #[error("coefficient check failed: {0}")]
    Coefficient(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
