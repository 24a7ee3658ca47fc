//! Material coefficients as functions of position and temperature.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::FemError;
use crate::constants::CoefficientBounds;
use crate::mesh::Point;

/// Symmetric 2×2 tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tensor2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Tensor2 {
    pub const fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Self { xx, xy, yy }
    }

    pub const fn iso(a: f64) -> Self {
        Self::new(a, 0.0, a)
    }

    pub const fn diag(a: f64, b: f64) -> Self {
        Self::new(a, 0.0, b)
    }

    pub fn scale(self, c: f64) -> Self {
        Self::new(c * self.xx, c * self.xy, c * self.yy)
    }

    pub fn apply(self, v: [f64; 2]) -> [f64; 2] {
        [self.xx * v[0] + self.xy * v[1], self.xy * v[0] + self.yy * v[1]]
    }

    /// `uᵀ A v`
    pub fn bilinear(self, u: [f64; 2], v: [f64; 2]) -> f64 {
        let av = self.apply(v);
        u[0] * av[0] + u[1] * av[1]
    }

    pub fn eigenvalues(self) -> (f64, f64) {
        let m = 0.5 * (self.xx + self.yy);
        let r = (0.5 * (self.xx - self.yy)).hypot(self.xy);
        (m - r, m + r)
    }

    pub fn max_abs_entry(self) -> f64 {
        self.xx.abs().max(self.xy.abs()).max(self.yy.abs())
    }

    pub fn is_finite(self) -> bool {
        self.xx.is_finite() && self.xy.is_finite() && self.yy.is_finite()
    }
}

pub type TensorFn = Arc<dyn Fn(Point, f64) -> Tensor2 + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(Point, f64) -> f64 + Send + Sync>;

/// Coefficients `k`, `σ`, `α_s`, `f_λ`, `γ` with their declared bounds.
///
/// The Peltier coefficient is derived, never stored: `Π(x,T) = T·α_s(x,T)`.
#[derive(Clone)]
pub struct CoefficientModel {
    pub name: String,
    pub k: TensorFn,
    pub sigma: TensorFn,
    pub alpha_s: ScalarFn,
    pub f_lambda: ScalarFn,
    pub gamma: ScalarFn,
    pub bounds: CoefficientBounds,
}

impl fmt::Debug for CoefficientModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientModel")
            .field("name", &self.name)
            .field("bounds", &self.bounds)
            .finish_non_exhaustive()
    }
}

impl CoefficientModel {
    /// Constant isotropic coefficients.
    pub fn constant(k: f64, sigma: f64, alpha_s: f64, f_lambda: f64, gamma: f64) -> Self {
        let bounds = CoefficientBounds {
            a_lo: k,
            a_hi: k,
            k_lo: k,
            k_hi: k,
            sigma_lo: sigma,
            sigma_hi: sigma,
            alpha_seebeck_hi: alpha_s.abs(),
            b_lo: f_lambda,
            b_hi: f_lambda,
            gamma_hi: gamma.abs(),
        };
        Self {
            name: "constant-isotropic".into(),
            k: Arc::new(move |_, _| Tensor2::iso(k)),
            sigma: Arc::new(move |_, _| Tensor2::iso(sigma)),
            alpha_s: Arc::new(move |_, _| alpha_s),
            f_lambda: Arc::new(move |_, _| f_lambda),
            gamma: Arc::new(move |_, _| gamma),
            bounds,
        }
    }

    pub fn peltier(&self, x: Point, t: f64) -> f64 {
        t * (self.alpha_s)(x, t)
    }

    /// Checks the declared bounds on every `(x, T)` sample pair: ellipticity
    /// from below, entrywise bounds from above.
    pub fn validate_sampled(&self, points: &[Point], temps: &[f64]) -> Result<(), FemError> {
        let b = &self.bounds;
        let tol = |v: f64| 1e-12 * v.abs().max(1.0);
        let fail = |what: &str, x: Point, t: f64, detail: String| {
            Err(FemError::Coefficient(format!(
                "{what} violates its bounds at x = ({}, {}), T = {t}: {detail}",
                x[0], x[1]
            )))
        };
        for &x in points {
            for &t in temps {
                for (what, tensor, lo, hi) in [
                    ("k", (self.k)(x, t), b.k_lo, b.k_hi),
                    ("sigma", (self.sigma)(x, t), b.sigma_lo, b.sigma_hi),
                ] {
                    if !tensor.is_finite() {
                        return fail(what, x, t, "non-finite".into());
                    }
                    let (emin, _) = tensor.eigenvalues();
                    if emin < lo - tol(lo) {
                        return fail(what, x, t, format!("ellipticity {emin} below {lo}"));
                    }
                    let entry = tensor.max_abs_entry();
                    if entry > hi + tol(hi) {
                        return fail(what, x, t, format!("entry {entry} above {hi}"));
                    }
                }
                let a = (self.alpha_s)(x, t);
                if !a.is_finite() || a.abs() > b.alpha_seebeck_hi + tol(b.alpha_seebeck_hi) {
                    return fail("alpha_s", x, t, format!("|{a}| > {}", b.alpha_seebeck_hi));
                }
                let fl = (self.f_lambda)(x, t);
                if !fl.is_finite() || fl < b.b_lo - tol(b.b_lo) || fl > b.b_hi + tol(b.b_hi) {
                    return fail("f_lambda", x, t, format!("{fl} outside [{}, {}]", b.b_lo, b.b_hi));
                }
                let g = (self.gamma)(x, t);
                if !g.is_finite() || g.abs() > b.gamma_hi + tol(b.gamma_hi) {
                    return fail("gamma", x, t, format!("|{g}| > {}", b.gamma_hi));
                }
            }
        }
        Ok(())
    }
}
