//! P1 finite elements for the steady coupled thermoelectric problem with
//! radiative (`|θ|^{ℓ-2}θ`) boundary conditions, together with the constants
//! of its existence theory and audits of the a priori estimates.

// `!(x > 0.0)` style guards also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod coupling;
pub mod expr;
pub mod fem;
pub mod mesh;
pub mod verify;
