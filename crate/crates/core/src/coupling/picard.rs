//! Relaxed fixed-point iteration `θ_{m+1} = (1-ω)θ_m + ω𝒯(θ_m)`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::problem::ProblemData;
use super::solvers::{operator_t, solve_electric, SolverSettings};
use super::CouplingError;
use crate::fem::{norms, CoefficientModel, FieldNorms, FieldP1};
use crate::mesh::TriMesh;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PicardOptions {
    /// Stop once `‖θ_{m+1}-θ_m‖_{1,p,ℓ} ≤ tol`.
    pub tol: f64,
    pub max_outer: usize,
    /// Relaxation `ω ∈ (0,1]`.
    pub relax: f64,
    pub settings: SolverSettings,
    /// Invariant-ball radius to monitor, when the smallness condition holds.
    pub ball_radius: Option<f64>,
    /// Record wall time in the report. Off by default so reports are reproducible.
    pub record_time: bool,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_outer: 50,
            relax: 1.0,
            settings: SolverSettings::default(),
            ball_radius: None,
            record_time: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub converged: bool,
    pub outer_iterations: usize,
    pub tol: f64,
    pub relax: f64,
    /// `‖θ_{m+1}-θ_m‖_{1,p,ℓ}` per outer iteration.
    pub update_norms: Vec<f64>,
    /// Ratios of successive update norms.
    pub contraction_ratios: Vec<f64>,
    /// Every recorded ratio is below 1.
    pub contraction_observed: bool,
    /// `‖θ_{m+1}‖_{1,p,ℓ}` per outer iteration.
    pub iterate_norms: Vec<f64>,
    pub newton_iterations: Vec<usize>,
    pub newton_final_residuals: Vec<f64>,
    pub theta_norms: FieldNorms,
    pub phi_norms: FieldNorms,
    pub ball_radius: Option<f64>,
    pub iterates_within_ball: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    pub notes: Vec<String>,
}

impl SolveReport {
    pub fn monotone_updates(&self) -> bool {
        self.update_norms.windows(2).all(|w| w[1] <= w[0])
    }
}

#[derive(Debug, Clone)]
pub struct PicardResult {
    pub theta: FieldP1,
    pub phi: FieldP1,
    pub report: SolveReport,
}

/// Runs the fixed-point iteration from `init`.
///
/// Exceeding `max_outer` yields [`CouplingError::NotConverged`], which still
/// carries the last fields and the report.
pub fn picard_solve(
    mesh: &TriMesh,
    coeffs: &CoefficientModel,
    data: &ProblemData,
    init: &FieldP1,
    opts: &PicardOptions,
) -> Result<PicardResult, CouplingError> {
    if !(opts.tol > 0.0) {
        return Err(CouplingError::InvalidData(format!("tol must be positive, got {}", opts.tol)));
    }
    if !(opts.relax > 0.0 && opts.relax <= 1.0) {
        return Err(CouplingError::InvalidData(format!("relax must lie in (0, 1], got {}", opts.relax)));
    }
    if init.len() != mesh.num_nodes() {
        return Err(CouplingError::InvalidData("initial field does not match the mesh".into()));
    }
    data.validate(mesh)?;
    let start = Instant::now();
    let (p, ell) = (data.p(), data.ell());
    let s = &opts.settings;

    let mut theta = init.clone();
    let mut update_norms = Vec::new();
    let mut iterate_norms = Vec::new();
    let mut newton_iterations = Vec::new();
    let mut newton_final_residuals = Vec::new();
    let mut converged = false;
    for _ in 0..opts.max_outer {
        let (big_theta, _, info) = operator_t(mesh, coeffs, &theta, data, s)?;
        newton_iterations.push(info.iterations);
        newton_final_residuals.push(*info.residuals.last().unwrap_or(&0.0));
        let next = theta.relax(&big_theta, opts.relax);
        let upd = norms(mesh, &next.sub(&theta), p, ell).v_norm;
        if !upd.is_finite() {
            return Err(CouplingError::InvalidData("non-finite update norm".into()));
        }
        update_norms.push(upd);
        iterate_norms.push(norms(mesh, &next, p, ell).v_norm);
        theta = next;
        if upd <= opts.tol {
            converged = true;
            break;
        }
    }
    let phi = solve_electric(mesh, coeffs, &theta, data, s)?;

    let contraction_ratios: Vec<f64> = update_norms
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
        .collect();
    let contraction_observed = contraction_ratios.iter().all(|&r| r < 1.0);
    let mut notes = Vec::new();
    let iterates_within_ball = opts.ball_radius.map(|r| {
        let inside = iterate_norms.iter().all(|&n| n <= r);
        if !contraction_observed {
            notes.push("update norms did not decrease at every step although the smallness condition holds".into());
        }
        inside
    });
    if !converged {
        notes.push(format!("no convergence within {} outer iterations", opts.max_outer));
    }
    let report = SolveReport {
        converged,
        outer_iterations: update_norms.len(),
        tol: opts.tol,
        relax: opts.relax,
        update_norms,
        contraction_ratios,
        contraction_observed,
        iterate_norms,
        newton_iterations,
        newton_final_residuals,
        theta_norms: norms(mesh, &theta, p, ell),
        phi_norms: norms(mesh, &phi, p, ell),
        ball_radius: opts.ball_radius,
        iterates_within_ball,
        wall_time_s: opts.record_time.then(|| start.elapsed().as_secs_f64()),
        notes,
    };
    let result = PicardResult { theta, phi, report };
    if converged {
        Ok(result)
    } else {
        Err(CouplingError::NotConverged(Box::new(result)))
    }
}

/// Default initial guess: the constant mean of `θ_e` over `Γ`.
pub fn default_initial_guess(mesh: &TriMesh, data: &ProblemData) -> FieldP1 {
    FieldP1::constant(mesh, data.theta_e_mean(mesh))
}
