//! Per-element entropy production
//! `σ_s = ∇θᵀk∇θ/θ² + (α_s∇θ+∇φ)ᵀσ(α_s∇θ+∇φ)/θ`.

use serde::{Deserialize, Serialize};

use crate::fem::{CoefficientModel, FieldP1};
use crate::mesh::TriMesh;

/// Slack below zero tolerated on the minimum.
pub const ENTROPY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyAudit {
    /// `σ_s` per element, `None` where the element mean of `θ` is not positive.
    pub values: Vec<Option<f64>>,
    /// Minimum over included elements.
    pub min: Option<f64>,
    pub negative_count: usize,
    pub excluded_count: usize,
}

impl EntropyAudit {
    /// `min σ_s ≥ -ENTROPY_TOL`; vacuous when every element is excluded.
    pub fn passes(&self) -> bool {
        self.min.is_none_or(|m| m >= -ENTROPY_TOL)
    }
}

/// Coefficients are frozen at the centroid and the element mean of `θ`,
/// which is also the `θ` in the denominators.
pub fn entropy_audit(mesh: &TriMesh, theta: &FieldP1, phi: &FieldP1, coeffs: &CoefficientModel) -> EntropyAudit {
    let mut values = Vec::with_capacity(mesh.num_triangles());
    let (mut min, mut negative_count, mut excluded_count) = (None::<f64>, 0, 0);
    for t in 0..mesh.num_triangles() {
        let tm = theta.element_mean(mesh, t);
        if !(tm > 0.0) {
            values.push(None);
            excluded_count += 1;
            continue;
        }
        let c = mesh.centroid(t);
        let (gt, gp) = (theta.gradient(mesh, t), phi.gradient(mesh, t));
        let alpha = (coeffs.alpha_s)(c, tm);
        let j = [alpha * gt[0] + gp[0], alpha * gt[1] + gp[1]];
        let s = (coeffs.k)(c, tm).bilinear(gt, gt) / (tm * tm) + (coeffs.sigma)(c, tm).bilinear(j, j) / tm;
        if s < 0.0 {
            negative_count += 1;
        }
        min = Some(min.map_or(s, |m| m.min(s)));
        values.push(Some(s));
    }
    EntropyAudit {
        values,
        min,
        negative_count,
        excluded_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::Tensor2;
    use crate::mesh::{unit_square_mesh, SquareBoundary};

    #[test]
    fn constant_fields_produce_nothing() {
        let m = unit_square_mesh(4, SquareBoundary::AllRadiative).unwrap();
        let c = CoefficientModel::constant(2.0, 3.0, 0.1, 1.0, 1.0);
        let a = entropy_audit(&m, &FieldP1::constant(&m, 5.0), &FieldP1::constant(&m, -1.0), &c);
        assert!(a.values.iter().all(|v| *v == Some(0.0)));
        assert_eq!((a.min, a.negative_count, a.excluded_count), (Some(0.0), 0, 0));
    }

    #[test]
    fn zero_current_leaves_only_conduction() {
        let m = unit_square_mesh(4, SquareBoundary::AllRadiative).unwrap();
        let mut c = CoefficientModel::constant(1.0, 1.0, 0.5, 1.0, 1.0);
        c.k = std::sync::Arc::new(|_, _| Tensor2::new(2.0, 0.5, 1.0));
        let th = FieldP1::from_fn(&m, |x, y| 3.0 + x + 2.0 * y).unwrap();
        let ph = FieldP1::from_fn(&m, |x, y| -0.5 * (x + 2.0 * y)).unwrap();
        let a = entropy_audit(&m, &th, &ph, &c);
        for t in 0..m.num_triangles() {
            let tm = th.element_mean(&m, t);
            let expected = Tensor2::new(2.0, 0.5, 1.0).bilinear([1.0, 2.0], [1.0, 2.0]) / (tm * tm);
            assert!((a.values[t].unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn nonpositive_elements_are_excluded() {
        let m = unit_square_mesh(2, SquareBoundary::AllRadiative).unwrap();
        let c = CoefficientModel::constant(1.0, 1.0, 0.0, 1.0, 1.0);
        let th = FieldP1::from_fn(&m, |x, _| x - 0.5).unwrap();
        let a = entropy_audit(&m, &th, &FieldP1::zeros(&m), &c);
        assert_eq!(a.excluded_count, a.values.iter().filter(|v| v.is_none()).count());
        assert!(a.excluded_count > 0 && a.excluded_count < m.num_triangles());
        assert!(a.passes());
    }
}
