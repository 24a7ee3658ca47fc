//! Boundary data, exponents and optional manufactured sources.

use std::fmt;
use std::sync::Arc;

use super::CouplingError;
use crate::constants::ExponentSet;
use crate::fem::quadrature::gauss3_unit;
use crate::mesh::{BoundaryTag, Point, TriMesh};

pub type SpatialFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>;

/// Extra loads added to the weak forms; used to manufacture exact solutions.
#[derive(Clone, Default)]
pub struct ExtraSources {
    /// `∫_Ω G·∇v` on the thermal right side.
    pub thermal_flux: Option<VectorFn>,
    /// `∫_Γ s v` on the thermal right side.
    pub thermal_gamma: Option<SpatialFn>,
    /// `∫_Ω H·∇w` on the electric right side.
    pub electric_flux: Option<VectorFn>,
}

/// Data of the coupled problem.
#[derive(Clone)]
pub struct ProblemData {
    /// Normal current density on `Γ_N`.
    pub g: SpatialFn,
    /// External temperature on `Γ`.
    pub theta_e: SpatialFn,
    pub exps: ExponentSet,
    /// Covering radius used by the gradient audit; `None` selects the mesh default.
    pub r_sharp: Option<f64>,
    pub extra: ExtraSources,
}

impl fmt::Debug for ProblemData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemData")
            .field("exps", &self.exps)
            .field("r_sharp", &self.r_sharp)
            .finish_non_exhaustive()
    }
}

impl ProblemData {
    pub fn new(g: impl Fn(Point) -> f64 + Send + Sync + 'static, theta_e: impl Fn(Point) -> f64 + Send + Sync + 'static, exps: ExponentSet) -> Self {
        Self {
            g: Arc::new(g),
            theta_e: Arc::new(theta_e),
            exps,
            r_sharp: None,
            extra: ExtraSources::default(),
        }
    }

    /// `g = 0`, `θ_e = 0`.
    pub fn zero(exps: ExponentSet) -> Self {
        Self::new(|_| 0.0, |_| 0.0, exps)
    }

    pub fn ell(&self) -> f64 {
        self.exps.ell
    }

    pub fn p(&self) -> f64 {
        self.exps.p
    }

    /// Checks `ℓ ≥ 2`, `∫_{Γ_N} g = 0` and `θ_e ≥ 0` at the boundary quadrature points.
    pub fn validate(&self, mesh: &TriMesh) -> Result<(), CouplingError> {
        if !(self.exps.ell >= 2.0) {
            return Err(CouplingError::InvalidData(format!("ell must be >= 2, got {}", self.exps.ell)));
        }
        if !(self.exps.p > 1.0) {
            return Err(CouplingError::InvalidData(format!("p must be > 1, got {}", self.exps.p)));
        }
        let (mut int_g, mut int_abs) = (0.0, 0.0);
        for_each_boundary_point(mesh, BoundaryTag::GammaN, |x, w| {
            let v = (self.g)(x);
            int_g += w * v;
            int_abs += w * v.abs();
        });
        if !int_g.is_finite() || int_g.abs() > 1e-10 * int_abs {
            return Err(CouplingError::InvalidData(format!(
                "Neumann data must have zero integral over Γ_N, got {int_g:e} (∫|g| = {int_abs:e})"
            )));
        }
        let mut bad = None;
        for_each_boundary_point(mesh, BoundaryTag::Gamma, |x, _| {
            let v = (self.theta_e)(x);
            if bad.is_none() && !(v >= 0.0 && v.is_finite()) {
                bad = Some((x, v));
            }
        });
        if let Some((x, v)) = bad {
            return Err(CouplingError::InvalidData(format!(
                "theta_e must be nonnegative, got {v} at ({}, {})",
                x[0], x[1]
            )));
        }
        Ok(())
    }

    /// Length-weighted mean of `θ_e` over `Γ`, or 0 without `Γ`.
    pub fn theta_e_mean(&self, mesh: &TriMesh) -> f64 {
        let (mut s, mut len) = (0.0, 0.0);
        for_each_boundary_point(mesh, BoundaryTag::Gamma, |x, w| {
            s += w * (self.theta_e)(x);
            len += w;
        });
        if len > 0.0 {
            s / len
        } else {
            0.0
        }
    }

    /// `‖g‖_{q,Γ_N}`
    pub fn g_norm(&self, mesh: &TriMesh, q: f64) -> f64 {
        boundary_fn_norm(mesh, BoundaryTag::GammaN, q, |x| (self.g)(x))
    }

    /// `‖θ_e‖_{q,Γ}`
    pub fn theta_e_norm(&self, mesh: &TriMesh, q: f64) -> f64 {
        boundary_fn_norm(mesh, BoundaryTag::Gamma, q, |x| (self.theta_e)(x))
    }
}

/// Calls `f(x, weight)` at the 3-point Gauss points of every edge carrying `tag`.
pub fn for_each_boundary_point(mesh: &TriMesh, tag: BoundaryTag, mut f: impl FnMut(Point, f64)) {
    let nodes = mesh.nodes();
    for e in mesh.edges_with_tag(tag) {
        let (pa, pb) = (nodes[e.nodes[0]], nodes[e.nodes[1]]);
        let len = mesh.edge_length(e);
        for (s, w) in gauss3_unit() {
            f([pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])], w * len);
        }
    }
}

/// `(∫_{tag} |f|^q ds)^{1/q}` by 3-point Gauss.
pub fn boundary_fn_norm(mesh: &TriMesh, tag: BoundaryTag, q: f64, f: impl Fn(Point) -> f64) -> f64 {
    let mut s = 0.0;
    for_each_boundary_point(mesh, tag, |x, w| s += w * f(x).abs().powf(q));
    s.powf(1.0 / q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{unit_square_mesh, SquareBoundary};

    #[test]
    fn compatibility_of_neumann_data() {
        let m = unit_square_mesh(4, SquareBoundary::LeftRightNeumann).unwrap();
        let exps = ExponentSet::planar(3.0, 5.0, 0.0);
        let ok = ProblemData::new(|x| 0.1 * (1.0 - 2.0 * x[0]), |_| 1.0, exps);
        assert!(ok.validate(&m).is_ok());
        let bad = ProblemData::new(|_| 1.0, |_| 1.0, exps);
        assert!(bad.validate(&m).is_err());
        let neg = ProblemData::new(|_| 0.0, |x| x[0] - 0.5, exps);
        assert!(neg.validate(&m).is_err());
    }

    #[test]
    fn boundary_norms() {
        let m = unit_square_mesh(4, SquareBoundary::LeftNeumann).unwrap();
        let d = ProblemData::new(|_| 0.0, |_| 2.0, ExponentSet::planar(3.0, 5.0, 0.0));
        assert!((d.theta_e_mean(&m) - 2.0).abs() < 1e-14);
        assert!((d.theta_e_norm(&m, 2.0) - 2.0 * 3f64.sqrt()).abs() < 1e-13);
        assert_eq!(d.g_norm(&m, 3.0), 0.0);
    }
}
