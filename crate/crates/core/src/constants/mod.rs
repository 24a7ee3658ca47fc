//! Closed-form constants and bound functions for the a-priori estimates.
//!
//! Everything here is a pure function of its inputs. The sub-modules group
//! the formulas by where they are used:
//!
//! * [`embedding`]: Sobolev, trace, Morrey and Poincaré type constants;
//! * [`gehring`]: reverse-Hölder constants, the exponent thresholds and the
//!   `Z₁`, `Z₂` factors of the gradient estimate;
//! * [`smallness`]: the `L∞` constants, `M₁ … M₆`, the self-map bound `𝒬(R)`
//!   and the invariant-ball radius;
//! * [`report`]: the assembled [`ConstantsReport`] and its serializations.

pub mod embedding;
pub mod gamma;
pub mod gehring;
pub mod report;
pub mod smallness;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use embedding::{
    convex_poincare_constant, morrey_constant, poincare_product_constant, sobolev_constant,
    sobolev_constant_ell, trace_constant, trace_constant_2n_over_n1, trace_constant_ell,
};
pub use gamma::gamma_fn;
pub use gehring::{gehring_kappa, upsilon_thresholds, z_factors, GehringConstants, UpsilonThresholds};
pub use report::{ConstantsReport, ReportValue, SpecialValueCheck};
pub use smallness::{
    find_ball_radius, smallness_q, supess_constants, BallRadius, SmallnessModel, SupessConstants,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstantsError {
    #[error("{what}: domain error: {detail}")]
    Domain { what: &'static str, detail: String },
    #[error("invalid input `{field}`: {detail}")]
    InvalidInput { field: &'static str, detail: String },
}

pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> ConstantsError {
    ConstantsError::Domain {
        what,
        detail: detail.into(),
    }
}

fn invalid(field: &'static str, detail: impl Into<String>) -> ConstantsError {
    ConstantsError::InvalidInput {
        field,
        detail: detail.into(),
    }
}

/// Exponents and free parameters entering the estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentSet {
    /// Spatial dimension.
    pub n: usize,
    /// Gradient integrability exponent.
    pub p: f64,
    /// Boundary growth exponent (5 for Stefan–Boltzmann, 2 for Newton cooling).
    pub ell: f64,
    /// Integrability margin of the data.
    pub delta: f64,
    /// Integrability exponent of the Neumann data.
    pub s: f64,
    /// Free exponent of the `L∞` estimate, must exceed `2p/(p-2)`.
    pub alpha: f64,
    /// Young parameter paired with the interior source; 0 when the source vanishes.
    pub nu3: f64,
}

impl ExponentSet {
    /// Two-dimensional exponents with `α = 4p/(p-2)`, `δ = 1`, `s = 3`.
    pub fn planar(p: f64, ell: f64, nu3: f64) -> Self {
        Self {
            n: 2,
            p,
            ell,
            delta: 1.0,
            s: 3.0,
            alpha: Self::default_alpha(p),
            nu3,
        }
    }

    /// Twice the admissible infimum `2p/(p-2)`; infinite for `p <= 2`.
    pub fn default_alpha(p: f64) -> f64 {
        if p > 2.0 {
            4.0 * p / (p - 2.0)
        } else {
            f64::INFINITY
        }
    }

    /// `ν₃ = 1` for a nonzero interior source, else 0.
    pub fn default_nu3(has_interior_source: bool) -> f64 {
        if has_interior_source {
            1.0
        } else {
            0.0
        }
    }

    /// Conjugate exponent `ℓ' = ℓ/(ℓ-1)`.
    pub fn ell_conj(&self) -> f64 {
        self.ell / (self.ell - 1.0)
    }

    pub fn validate(&self) -> Result<(), ConstantsError> {
        if self.n < 2 {
            return Err(invalid("n", format!("dimension must be >= 2, got {}", self.n)));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(invalid("p", format!("must satisfy p > 1, got {}", self.p)));
        }
        if !(self.ell >= 2.0) || !self.ell.is_finite() {
            return Err(invalid("ell", format!("must satisfy ell >= 2, got {}", self.ell)));
        }
        if !(self.delta > 0.0) {
            return Err(invalid("delta", format!("must be positive, got {}", self.delta)));
        }
        if !(self.s >= 2.0) {
            return Err(invalid("s", format!("must satisfy s >= 2, got {}", self.s)));
        }
        if !(self.nu3 >= 0.0) {
            return Err(invalid("nu3", format!("must be nonnegative, got {}", self.nu3)));
        }
        if self.p > 2.0 && !(self.alpha > 2.0 * self.p / (self.p - 2.0)) {
            return Err(invalid(
                "alpha",
                format!(
                    "must exceed 2p/(p-2) = {}, got {}",
                    2.0 * self.p / (self.p - 2.0),
                    self.alpha
                ),
            ));
        }
        Ok(())
    }
}

/// Ellipticity and growth bounds of the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientBounds {
    /// `a_#`: ellipticity of the generic leading tensor.
    pub a_lo: f64,
    /// `a^#`: entrywise bound of the generic leading tensor.
    pub a_hi: f64,
    pub k_lo: f64,
    pub k_hi: f64,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    /// `α^#`: bound on the Seebeck coefficient.
    pub alpha_seebeck_hi: f64,
    pub b_lo: f64,
    pub b_hi: f64,
    pub gamma_hi: f64,
}

impl CoefficientBounds {
    /// All bounds equal to one; the generic pair mirrors the thermal tensor.
    pub fn unit() -> Self {
        Self {
            a_lo: 1.0,
            a_hi: 1.0,
            k_lo: 1.0,
            k_hi: 1.0,
            sigma_lo: 1.0,
            sigma_hi: 1.0,
            alpha_seebeck_hi: 1.0,
            b_lo: 1.0,
            b_hi: 1.0,
            gamma_hi: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), ConstantsError> {
        let fields = [
            ("a_lo", self.a_lo),
            ("a_hi", self.a_hi),
            ("k_lo", self.k_lo),
            ("k_hi", self.k_hi),
            ("sigma_lo", self.sigma_lo),
            ("sigma_hi", self.sigma_hi),
            ("alpha_seebeck_hi", self.alpha_seebeck_hi),
            ("b_lo", self.b_lo),
            ("b_hi", self.b_hi),
            ("gamma_hi", self.gamma_hi),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(name, format!("must be positive and finite, got {v}")));
            }
        }
        for (lo_name, lo, hi) in [
            ("a_lo", self.a_lo, self.a_hi),
            ("k_lo", self.k_lo, self.k_hi),
            ("sigma_lo", self.sigma_lo, self.sigma_hi),
            ("b_lo", self.b_lo, self.b_hi),
        ] {
            if lo > hi {
                return Err(invalid(lo_name, format!("lower bound {lo} exceeds upper bound {hi}")));
            }
        }
        Ok(())
    }
}

/// Measures of the domain and its boundary parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometrySummary {
    /// `|Ω|`
    pub vol_omega: f64,
    /// `|∂Ω|`
    pub meas_boundary: f64,
    /// `|Γ|`, the radiative part.
    pub meas_gamma: f64,
    /// `|Γ_N|`, the Neumann part.
    pub meas_gamma_n: f64,
    pub diameter: f64,
    /// Covering radius `r_#`.
    pub r_sharp: f64,
    /// Set when `r_sharp` came from the mesh heuristic rather than the user.
    pub r_sharp_heuristic: bool,
}

impl GeometrySummary {
    pub fn with_r_sharp(mut self, r_sharp: f64) -> Self {
        self.r_sharp = r_sharp;
        self.r_sharp_heuristic = false;
        self
    }

    pub fn validate(&self) -> Result<(), ConstantsError> {
        for (name, v) in [
            ("vol_omega", self.vol_omega),
            ("meas_boundary", self.meas_boundary),
            ("diameter", self.diameter),
            ("r_sharp", self.r_sharp),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(name, format!("must be positive and finite, got {v}")));
            }
        }
        if !(self.meas_gamma >= 0.0) || self.meas_gamma > self.meas_boundary * (1.0 + 1e-12) {
            return Err(invalid(
                "meas_gamma",
                format!(
                    "must lie in [0, |∂Ω| = {}], got {}",
                    self.meas_boundary, self.meas_gamma
                ),
            ));
        }
        Ok(())
    }
}

/// Norms of the boundary data that enter `𝒬(R)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DataNorms {
    /// `‖g‖_{p,Γ_N}`
    pub g_p_gamma_n: f64,
    /// `‖θ_e‖_{ℓ,Γ}`
    pub theta_e_ell_gamma: f64,
    /// `‖θ_e‖_{(ℓ-1)p,Γ}`
    pub theta_e_lm1p_gamma: f64,
}

/// Everything the constants engine needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsInputs {
    pub bounds: CoefficientBounds,
    pub exps: ExponentSet,
    pub geom: GeometrySummary,
    pub data: DataNorms,
}

impl ConstantsInputs {
    pub fn validate(&self) -> Result<(), ConstantsError> {
        self.bounds.validate()?;
        self.exps.validate()?;
        self.geom.validate()?;
        for (name, v) in [
            ("g_p_gamma_n", self.data.g_p_gamma_n),
            ("theta_e_ell_gamma", self.data.theta_e_ell_gamma),
            ("theta_e_lm1p_gamma", self.data.theta_e_lm1p_gamma),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(invalid(name, format!("must be a finite nonnegative norm, got {v}")));
            }
        }
        Ok(())
    }
}
