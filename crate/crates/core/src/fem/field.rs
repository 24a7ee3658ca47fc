//! Piecewise-linear fields, their norms and CSV I/O.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::quadrature::gauss3_unit;
use super::FemError;
use crate::mesh::{BoundaryTag, TriMesh};

/// Nodal values of a continuous P1 field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldP1 {
    values: Vec<f64>,
}

impl FieldP1 {
    pub fn new(mesh: &TriMesh, values: Vec<f64>) -> Result<Self, FemError> {
        if values.len() != mesh.num_nodes() {
            return Err(FemError::Dimension {
                expected: mesh.num_nodes(),
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(FemError::NonFinite(format!("field value at node {i}")));
        }
        Ok(Self { values })
    }

    pub fn zeros(mesh: &TriMesh) -> Self {
        Self::constant(mesh, 0.0)
    }

    pub fn constant(mesh: &TriMesh, c: f64) -> Self {
        Self {
            values: vec![c; mesh.num_nodes()],
        }
    }

    /// Nodal interpolant of `f`.
    pub fn from_fn(mesh: &TriMesh, f: impl Fn(f64, f64) -> f64) -> Result<Self, FemError> {
        Self::new(mesh, mesh.nodes().iter().map(|p| f(p[0], p[1])).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn element_mean(&self, mesh: &TriMesh, t: usize) -> f64 {
        let [a, b, c] = mesh.triangles()[t];
        (self.values[a] + self.values[b] + self.values[c]) / 3.0
    }

    pub fn gradient(&self, mesh: &TriMesh, t: usize) -> [f64; 2] {
        let g = mesh.shape_gradients(t);
        let tri = mesh.triangles()[t];
        let mut out = [0.0; 2];
        for k in 0..3 {
            out[0] += self.values[tri[k]] * g[k][0];
            out[1] += self.values[tri[k]] * g[k][1];
        }
        out
    }

    /// Value at barycentric coordinates `l` of triangle `t`.
    pub fn eval_bary(&self, mesh: &TriMesh, t: usize, l: [f64; 3]) -> f64 {
        let tri = mesh.triangles()[t];
        l[0] * self.values[tri[0]] + l[1] * self.values[tri[1]] + l[2] * self.values[tri[2]]
    }

    /// `(1/|Ω|)∫_Ω v`.
    pub fn area_mean(&self, mesh: &TriMesh) -> f64 {
        let mut s = 0.0;
        for t in 0..mesh.num_triangles() {
            s += mesh.triangle_area(t) * self.element_mean(mesh, t);
        }
        s / mesh.area()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `(1-ω)·self + ω·other`
    pub fn relax(&self, other: &Self, omega: f64) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| if omega == 1.0 { *b } else { (1.0 - omega) * a + omega * b })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add_scalar(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// CSV with header `node,x,y,value`, 17 significant digits.
    pub fn to_csv(&self, mesh: &TriMesh) -> String {
        let mut s = String::from("node,x,y,value\n");
        for (i, (p, v)) in mesh.nodes().iter().zip(&self.values).enumerate() {
            let _ = writeln!(s, "{i},{:.16e},{:.16e},{:.16e}", p[0], p[1], v);
        }
        s
    }

    pub fn from_csv(mesh: &TriMesh, text: &str) -> Result<Self, FemError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "node,x,y,value" => {}
            _ => return Err(FemError::Parse { line: 1, msg: "expected header `node,x,y,value`".into() }),
        }
        let mut values = vec![f64::NAN; mesh.num_nodes()];
        let mut seen = 0usize;
        for (ln, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let err = |msg: String| FemError::Parse { line: ln + 1, msg };
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(err(format!("expected 4 fields, found {}", parts.len())));
            }
            let node: usize = parts[0].parse().map_err(|_| err(format!("bad node id `{}`", parts[0])))?;
            let v: f64 = parts[3].parse().map_err(|_| err(format!("bad value `{}`", parts[3])))?;
            if node >= values.len() {
                return Err(err(format!("node {node} outside mesh")));
            }
            values[node] = v;
            seen += 1;
        }
        if seen != mesh.num_nodes() {
            return Err(FemError::Dimension {
                expected: mesh.num_nodes(),
                found: seen,
            });
        }
        Self::new(mesh, values)
    }
}

/// Norms of a P1 field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldNorms {
    /// `‖∇v‖_{p,Ω}`
    pub wp_seminorm: f64,
    /// `‖v‖_{ℓ,Γ}`
    pub boundary_l_ell: f64,
    /// `max |v|`, exact for P1.
    pub sup: f64,
    /// `‖v‖_{1,p,ℓ} = ‖∇v‖_{p,Ω} + ‖v‖_{ℓ,Γ}`
    pub v_norm: f64,
}

pub fn grad_lp_norm(mesh: &TriMesh, field: &FieldP1, p: f64) -> f64 {
    let mut s = 0.0;
    for t in 0..mesh.num_triangles() {
        let g = field.gradient(mesh, t);
        s += g[0].hypot(g[1]).powf(p) * mesh.triangle_area(t);
    }
    s.powf(1.0 / p)
}

/// `‖v‖_{q}` on the edges carrying `tag`, 3-point Gauss per edge.
pub fn boundary_lq_norm(mesh: &TriMesh, field: &FieldP1, q: f64, tag: BoundaryTag) -> f64 {
    let v = field.values();
    let mut s = 0.0;
    for e in mesh.edges_with_tag(tag) {
        let len = mesh.edge_length(e);
        let (a, b) = (v[e.nodes[0]], v[e.nodes[1]]);
        for (t, w) in gauss3_unit() {
            s += w * len * ((1.0 - t) * a + t * b).abs().powf(q);
        }
    }
    s.powf(1.0 / q)
}

pub fn norms(mesh: &TriMesh, field: &FieldP1, p: f64, ell: f64) -> FieldNorms {
    let wp = grad_lp_norm(mesh, field, p);
    let bl = boundary_lq_norm(mesh, field, ell, BoundaryTag::Gamma);
    FieldNorms {
        wp_seminorm: wp,
        boundary_l_ell: bl,
        sup: field.max_abs(),
        v_norm: wp + bl,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{unit_square_mesh, SquareBoundary};

    #[test]
    fn linear_field_has_unit_gradient_norm() {
        let m = unit_square_mesh(4, SquareBoundary::AllRadiative).unwrap();
        let v = FieldP1::from_fn(&m, |x, _| x).unwrap();
        for p in [1.5, 2.0, 3.0, 7.0] {
            assert!((grad_lp_norm(&m, &v, p) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_field_norms() {
        let m = unit_square_mesh(3, SquareBoundary::LeftNeumann).unwrap();
        let v = FieldP1::constant(&m, -2.0);
        let n = norms(&m, &v, 3.0, 5.0);
        assert_eq!(n.wp_seminorm, 0.0);
        assert!((n.boundary_l_ell - 2.0 * 3f64.powf(0.2)).abs() < 1e-13);
        assert_eq!(n.sup, 2.0);
    }

    #[test]
    fn quadratic_gradient_norm_converges() {
        let m = unit_square_mesh(32, SquareBoundary::AllRadiative).unwrap();
        let v = FieldP1::from_fn(&m, |x, _| x * x).unwrap();
        let g2 = grad_lp_norm(&m, &v, 2.0).powi(2);
        assert!((g2 / (4.0 / 3.0) - 1.0).abs() < 0.02, "{g2}");
    }

    #[test]
    fn csv_round_trip_and_mean() {
        let m = unit_square_mesh(2, SquareBoundary::AllRadiative).unwrap();
        let v = FieldP1::from_fn(&m, |x, y| x + 2.0 * y + 0.1).unwrap();
        let back = FieldP1::from_csv(&m, &v.to_csv(&m)).unwrap();
        assert_eq!(back, v);
        assert!((v.area_mean(&m) - 1.6).abs() < 1e-14);
        assert!(FieldP1::from_csv(&m, "node,x,y,value\n0,0,0,1\n").is_err());
        assert!(FieldP1::new(&m, vec![f64::NAN; 9]).is_err());
    }
}
