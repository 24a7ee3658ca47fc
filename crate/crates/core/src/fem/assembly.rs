//! Element and boundary assembly.
//!
//! Element contributions may be computed in parallel; the final summation
//! always runs sequentially in element order, so both modes give
//! bit-identical results.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coefficients::Tensor2;
use super::field::FieldP1;
use super::quadrature::{barycentric_point, dunavant7, gauss3_unit};
use super::sparse::SparseSymMatrix;
use super::FemError;
use crate::mesh::{BoundaryTag, Point, TriMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Parallelism {
    #[default]
    Sequential,
    Parallel,
}

fn map_elements<T, F>(n: usize, mode: Parallelism, f: F) -> Result<Vec<T>, FemError>
where
    T: Send,
    F: Fn(usize) -> Result<T, FemError> + Sync + Send,
{
    match mode {
        Parallelism::Sequential => (0..n).map(f).collect(),
        Parallelism::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

/// P1 stiffness matrix of `-div(A∇u)` with `A` frozen per element at
/// `(centroid, mean nodal temperature)`.
pub fn assemble_diffusion<F>(
    mesh: &TriMesh,
    tensor_fn: F,
    temp: &FieldP1,
    mode: Parallelism,
) -> Result<SparseSymMatrix, FemError>
where
    F: Fn(Point, f64) -> Tensor2 + Sync + Send,
{
    let blocks = map_elements(mesh.num_triangles(), mode, |t| {
        let a = tensor_fn(mesh.centroid(t), temp.element_mean(mesh, t));
        if !a.is_finite() {
            return Err(FemError::Assembly {
                element: t,
                detail: format!("non-finite tensor {a:?}"),
            });
        }
        let g = mesh.shape_gradients(t);
        let area = mesh.triangle_area(t);
        let mut k = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                k[i][j] = area * a.bilinear(g[i], g[j]);
                k[j][i] = k[i][j];
            }
        }
        Ok((mesh.triangles()[t], k))
    })?;
    Ok(SparseSymMatrix::from_blocks(mesh.num_nodes(), &blocks))
}

/// `b_i = ∫_Ω F·∇φ_i` for a vector density `F(t, x)` on element `t`, by the
/// 7-point rule.
pub fn assemble_flux_load<F>(mesh: &TriMesh, flux: F, mode: Parallelism) -> Result<Vec<f64>, FemError>
where
    F: Fn(usize, Point, [f64; 3]) -> [f64; 2] + Sync + Send,
{
    let rule = dunavant7();
    let locals = map_elements(mesh.num_triangles(), mode, |t| {
        let pts = mesh.triangle_points(t);
        let mut mean = [0.0; 2];
        for &(l, w) in &rule {
            let f = flux(t, barycentric_point(&pts, l), l);
            mean[0] += w * f[0];
            mean[1] += w * f[1];
        }
        if !mean[0].is_finite() || !mean[1].is_finite() {
            return Err(FemError::Assembly {
                element: t,
                detail: "non-finite volume flux".into(),
            });
        }
        let g = mesh.shape_gradients(t);
        let area = mesh.triangle_area(t);
        let mut b = [0.0; 3];
        for i in 0..3 {
            b[i] = area * (mean[0] * g[i][0] + mean[1] * g[i][1]);
        }
        Ok((mesh.triangles()[t], b))
    })?;
    let mut out = vec![0.0; mesh.num_nodes()];
    for (tri, b) in locals {
        for k in 0..3 {
            out[tri[k]] += b[k];
        }
    }
    Ok(out)
}

/// `b_i = ∫_{tag} ρ φ_i ds`, 3-point Gauss per edge.
pub fn assemble_surface_load<F>(mesh: &TriMesh, density: F, tag: BoundaryTag) -> Vec<f64>
where
    F: Fn(Point) -> f64,
{
    assemble_edge_load(mesh, |x, _, _| density(x), tag)
}

/// As [`assemble_surface_load`], with the density also receiving the edge
/// endpoints and the local coordinate `s ∈ [0,1]` of the quadrature point.
pub fn assemble_edge_load<F>(mesh: &TriMesh, density: F, tag: BoundaryTag) -> Vec<f64>
where
    F: Fn(Point, [usize; 2], f64) -> f64,
{
    let mut b = vec![0.0; mesh.num_nodes()];
    let nodes = mesh.nodes();
    for e in mesh.edges_with_tag(tag) {
        let [i, j] = e.nodes;
        let (pa, pb) = (nodes[i], nodes[j]);
        let len = mesh.edge_length(e);
        for (s, w) in gauss3_unit() {
            let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
            let r = w * len * density(x, e.nodes, s);
            b[i] += r * (1.0 - s);
            b[j] += r * s;
        }
    }
    b
}

/// Residual and Jacobian of the radiation term on `Γ`:
/// `r_i = ∫_Γ f_λ(x,θ)|Θ|^{ℓ-2}Θ φ_i ds`,
/// `J_ij = (ℓ-1)∫_Γ f_λ(x,θ)|Θ|^{ℓ-2} φ_i φ_j ds`.
pub fn assemble_radiation<F>(
    mesh: &TriMesh,
    f_lambda: F,
    temp_for_coeff: &FieldP1,
    state: &FieldP1,
    ell: f64,
) -> Result<(Vec<f64>, SparseSymMatrix), FemError>
where
    F: Fn(Point, f64) -> f64,
{
    radiation_system(mesh, f_lambda, temp_for_coeff, state, ell, 0.0)
}

/// As [`assemble_radiation`], with `|Θ|` replaced by `max(|Θ|, floor)` in the
/// Jacobian only. A positive floor keeps Newton steps well posed at `Θ = 0`.
pub fn radiation_system<F>(
    mesh: &TriMesh,
    f_lambda: F,
    temp_for_coeff: &FieldP1,
    state: &FieldP1,
    ell: f64,
    jac_floor: f64,
) -> Result<(Vec<f64>, SparseSymMatrix), FemError>
where
    F: Fn(Point, f64) -> f64,
{
    if !(ell >= 2.0) {
        return Err(FemError::Domain(format!("radiation exponent must be >= 2, got {ell}")));
    }
    let nodes = mesh.nodes();
    let (th, u) = (temp_for_coeff.values(), state.values());
    let mut r = vec![0.0; mesh.num_nodes()];
    let mut blocks = Vec::new();
    for (k, e) in mesh.boundary_edges().iter().enumerate() {
        if e.tag != BoundaryTag::Gamma {
            continue;
        }
        let [i, j] = e.nodes;
        let (pa, pb) = (nodes[i], nodes[j]);
        let len = mesh.edge_length(e);
        let mut m = [[0.0; 2]; 2];
        for (s, w) in gauss3_unit() {
            let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
            let temp = (1.0 - s) * th[i] + s * th[j];
            let v = (1.0 - s) * u[i] + s * u[j];
            let fl = f_lambda(x, temp);
            if !fl.is_finite() {
                return Err(FemError::Assembly {
                    element: k,
                    detail: format!("non-finite f_lambda on boundary edge at ({}, {})", x[0], x[1]),
                });
            }
            let wl = w * len * fl;
            let flux = v.abs().powf(ell - 2.0) * v;
            r[i] += wl * flux * (1.0 - s);
            r[j] += wl * flux * s;
            let d = (ell - 1.0) * wl * v.abs().max(jac_floor).powf(ell - 2.0);
            let phi = [1.0 - s, s];
            for a in 0..2 {
                for b in 0..2 {
                    m[a][b] += d * phi[a] * phi[b];
                }
            }
        }
        blocks.push(([i, j], m));
    }
    Ok((r, SparseSymMatrix::from_blocks(mesh.num_nodes(), &blocks)))
}

/// `c_i = ∫_Ω φ_i`, the weights of the zero-mean constraint.
pub fn node_weights(mesh: &TriMesh) -> Vec<f64> {
    let mut c = vec![0.0; mesh.num_nodes()];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let a = mesh.triangle_area(t) / 3.0;
        for &i in tri {
            c[i] += a;
        }
    }
    c
}
