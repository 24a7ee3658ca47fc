//! Audits of discrete solutions: a-priori estimates, entropy production and
//! manufactured-solution convergence.
//!
//! Every check is a pure reader of the fields it is given. A failed check is
//! a report, not an error: discretization error can in principle break a
//! continuum inequality, so results carry both sides and the inputs used.

pub mod entropy;
pub mod estimates;
pub mod mms;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::constants::ConstantsError;
use crate::coupling::{CouplingError, ProblemData};
use crate::expr::ExprError;
use crate::fem::{CoefficientModel, FemError, FieldP1};
use crate::mesh::TriMesh;

pub use entropy::{entropy_audit, EntropyAudit, ENTROPY_TOL};
pub use estimates::{
    check_electric_energy_estimate, check_energy_estimate, check_gradient_estimate, check_supess, eps_max,
    Equation,
};
pub use mms::{manufactured_data, mms_convergence, MmsOptions, MmsRow, MmsTable};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("domain error: {0}")]
    Domain(String),
}

/// A discrete solution `(θ, φ)` on its mesh.
#[derive(Debug, Clone, Copy)]
pub struct Solution<'a> {
    pub mesh: &'a TriMesh,
    pub theta: &'a FieldP1,
    pub phi: &'a FieldP1,
}

impl<'a> Solution<'a> {
    pub fn new(mesh: &'a TriMesh, theta: &'a FieldP1, phi: &'a FieldP1) -> Result<Self, VerifyError> {
        let n = mesh.num_nodes();
        for (name, f) in [("theta", theta), ("phi", phi)] {
            if f.len() != n {
                return Err(VerifyError::Domain(format!(
                    "{name} has {} values but the mesh has {n} nodes",
                    f.len()
                )));
            }
        }
        Ok(Self { mesh, theta, phi })
    }
}

/// Outcome of comparing the two sides of an estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckResult {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`
    pub margin: f64,
    pub pass: bool,
    /// `false` when the hypotheses of the estimate do not hold; `pass` is then meaningless.
    pub applicable: bool,
    /// Set when the verdict depends on a non-constructive user parameter.
    pub conditional_on: Option<String>,
    pub notes: Vec<String>,
    pub inputs: Map<String, Value>,
}

impl BoundCheckResult {
    /// `pass ⇔ rhs - lhs ≥ -1e-9·max(1, |rhs|)`
    pub fn compare(name: &str, lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin,
            pass: margin >= -1e-9 * rhs.abs().max(1.0),
            applicable: true,
            conditional_on: None,
            notes: Vec::new(),
            inputs: Map::new(),
        }
    }

    pub fn inapplicable(name: &str, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            pass: false,
            applicable: false,
            conditional_on: None,
            notes: vec![reason.into()],
            inputs: Map::new(),
        }
    }

    pub fn with_input(mut self, key: &str, value: f64) -> Self {
        self.inputs.insert(key.into(), json!(value));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Applicable and failed.
    pub fn failed(&self) -> bool {
        self.applicable && !self.pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AuditOptions {
    /// Poincaré constant to use instead of the convex-domain bound.
    pub poincare: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub checks: Vec<BoundCheckResult>,
    pub entropy: EntropyAudit,
}

impl AuditReport {
    /// Every applicable check passes and the entropy minimum is above `-ENTROPY_TOL`.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| !c.failed()) && self.entropy.passes()
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "lhs": c.lhs,
                    "rhs": c.rhs,
                    "margin": c.margin,
                    "pass": c.pass,
                    "applicable": c.applicable,
                    "conditional_on": c.conditional_on,
                    "notes": c.notes,
                    "inputs": c.inputs,
                })
            })
            .collect();
        json!({
            "all_pass": self.all_pass(),
            "checks": checks,
            "entropy": {
                "min": self.entropy.min,
                "negative_count": self.entropy.negative_count,
                "excluded_count": self.entropy.excluded_count,
                "pass": self.entropy.passes(),
            },
        })
    }
}

/// Runs every audit on `sol`: both energy estimates, the `L∞` estimate, the
/// gradient estimate for both equations at `ε = 0` and `ε = eps_max/2`, and
/// the entropy audit.
pub fn run_audits(
    sol: &Solution<'_>,
    coeffs: &CoefficientModel,
    data: &ProblemData,
    opts: &AuditOptions,
) -> Result<AuditReport, VerifyError> {
    let mut checks = vec![
        check_energy_estimate(sol, coeffs, data, opts)?,
        check_electric_energy_estimate(sol, coeffs, data)?,
        check_supess(sol, coeffs, data)?,
    ];
    for eq in [Equation::Thermal, Equation::Electric] {
        if eq == Equation::Thermal && !sol.mesh.has_tag(crate::mesh::BoundaryTag::Gamma) {
            checks.push(BoundCheckResult::inapplicable(
                "gradient_thermal",
                "the thermal problem needs a radiative boundary",
            ));
            continue;
        }
        let e_max = eps_max(coeffs, data, eq)?;
        for eps in [0.0, 0.5 * e_max] {
            checks.push(check_gradient_estimate(sol, coeffs, data, eq, eps)?);
        }
    }
    Ok(AuditReport {
        checks,
        entropy: entropy_audit(sol.mesh, sol.theta, sol.phi, coeffs),
    })
}
