//! Symmetric positive (semi)definite linear solves.

use super::sparse::SparseSymMatrix;
use super::FemError;

/// Relative residual required of every accepted solve.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Relative size of `Σb` above which a zero-mean solve is rejected.
pub const COMPATIBILITY_TOL: f64 = 1e-8;
/// Below this dimension a failed iterative solve falls back to Cholesky.
pub const DIRECT_FALLBACK_DIM: usize = 2000;

#[derive(Debug, Clone, Copy)]
pub enum Constraint<'a> {
    None,
    /// `Σ c_i x_i = 0` with `c_i = ∫φ_i`; the matrix kernel must be the constants.
    ZeroMean(&'a [f64]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveInfo {
    pub iterations: usize,
    pub relative_residual: f64,
    pub direct_fallback: bool,
}

pub fn solve_spd(a: &SparseSymMatrix, b: &[f64], constraint: Constraint<'_>) -> Result<Vec<f64>, FemError> {
    solve_spd_info(a, b, constraint).map(|(x, _)| x)
}

/// Preconditioned conjugate gradients with a Cholesky fallback.
///
/// The zero-mean case solves the bordered system `[A c; cᵀ 0]` through the
/// equivalent definite system `(A + β ccᵀ)x = b - λc`, `λ = Σb/Σc`.
pub fn solve_spd_info(
    a: &SparseSymMatrix,
    b: &[f64],
    constraint: Constraint<'_>,
) -> Result<(Vec<f64>, SolveInfo), FemError> {
    let n = a.dim();
    if b.len() != n {
        return Err(FemError::Dimension { expected: n, found: b.len() });
    }
    if let Some(i) = b.iter().position(|v| !v.is_finite()) {
        return Err(FemError::NonFinite(format!("right-hand side entry {i}")));
    }
    let mut rhs = b.to_vec();
    let mut border: Option<(&[f64], f64)> = None;
    if let Constraint::ZeroMean(c) = constraint {
        if c.len() != n {
            return Err(FemError::Dimension { expected: n, found: c.len() });
        }
        let sum_b: f64 = b.iter().sum();
        let abs_b: f64 = b.iter().map(|v| v.abs()).sum();
        if abs_b > 0.0 && sum_b.abs() / abs_b > COMPATIBILITY_TOL {
            return Err(FemError::Compatibility {
                ratio: sum_b.abs() / abs_b,
            });
        }
        let sum_c: f64 = c.iter().sum();
        let lambda = sum_b / sum_c;
        for (r, ci) in rhs.iter_mut().zip(c) {
            *r -= lambda * ci;
        }
        let trace: f64 = a.diag().iter().sum();
        let beta = if trace > 0.0 { trace / (sum_c * sum_c) } else { 1.0 };
        border = Some((c, beta));
    }
    let rhs_norm = norm(&rhs);
    if rhs_norm == 0.0 {
        return Ok((
            vec![0.0; n],
            SolveInfo {
                iterations: 0,
                relative_residual: 0.0,
                direct_fallback: false,
            },
        ));
    }
    let apply = |x: &[f64], y: &mut [f64]| {
        a.matvec_into(x, y);
        if let Some((c, beta)) = border {
            let s = beta * dot(c, x);
            for (yi, ci) in y.iter_mut().zip(c) {
                *yi += s * ci;
            }
        }
    };
    let mut diag = a.diag();
    if let Some((c, beta)) = border {
        for (d, ci) in diag.iter_mut().zip(c) {
            *d += beta * ci * ci;
        }
    }
    let (mut x, mut iterations, mut history) = pcg(&apply, &rhs, &diag, 1e-13, 20 * n + 200);
    let mut rel = true_residual(&apply, &x, &rhs) / rhs_norm;
    // restart from the true residual when the recurrence drifted
    for _ in 0..3 {
        if rel <= RESIDUAL_TOL {
            break;
        }
        let mut ax = vec![0.0; n];
        apply(&x, &mut ax);
        let r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let (d, it, h) = pcg(&apply, &r, &diag, 1e-13, 20 * n + 200);
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += di;
        }
        iterations += it;
        history.extend(h.iter().map(|v| v * rel));
        rel = true_residual(&apply, &x, &rhs) / rhs_norm;
    }
    let mut direct_fallback = false;
    if !(rel <= RESIDUAL_TOL) && n < DIRECT_FALLBACK_DIM {
        let mut dense = a.to_dense();
        if let Some((c, beta)) = border {
            for i in 0..n {
                for j in 0..n {
                    dense[i][j] += beta * c[i] * c[j];
                }
            }
        }
        if let Some(sol) = cholesky_solve(dense, &rhs) {
            x = sol;
            rel = true_residual(&apply, &x, &rhs) / rhs_norm;
            direct_fallback = true;
        }
    }
    if !(rel <= RESIDUAL_TOL) {
        return Err(FemError::Solver {
            detail: format!("relative residual {rel:e} above {RESIDUAL_TOL:e} after {iterations} iterations"),
            history,
        });
    }
    if let Some((c, _)) = border {
        let shift = dot(c, &x) / c.iter().sum::<f64>();
        x.iter_mut().for_each(|v| *v -= shift);
    }
    Ok((
        x,
        SolveInfo {
            iterations,
            relative_residual: rel,
            direct_fallback,
        },
    ))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn true_residual(apply: &impl Fn(&[f64], &mut [f64]), x: &[f64], b: &[f64]) -> f64 {
    let mut ax = vec![0.0; x.len()];
    apply(x, &mut ax);
    ax.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

fn pcg(
    apply: &impl Fn(&[f64], &mut [f64]),
    b: &[f64],
    diag: &[f64],
    rtol: f64,
    max_iter: usize,
) -> (Vec<f64>, usize, Vec<f64>) {
    let n = b.len();
    let inv: Vec<f64> = diag.iter().map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 }).collect();
    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv).map(|(a, b)| a * b).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut history = vec![1.0];
    for it in 1..=max_iter {
        apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return (x, it, history);
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rel = norm(&r) / bnorm;
        history.push(rel);
        if rel <= rtol {
            return (x, it, history);
        }
        for i in 0..n {
            z[i] = r[i] * inv[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    (x, max_iter, history)
}

fn cholesky_solve(mut m: Vec<Vec<f64>>, b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for j in 0..n {
        let mut d = m[j][j];
        for k in 0..j {
            d -= m[j][k] * m[j][k];
        }
        if !(d > 0.0) {
            return None;
        }
        let d = d.sqrt();
        m[j][j] = d;
        for i in j + 1..n {
            let mut s = m[i][j];
            for k in 0..j {
                s -= m[i][k] * m[j][k];
            }
            m[i][j] = s / d;
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= m[i][k] * y[k];
        }
        y[i] /= m[i][i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= m[k][i] * y[k];
        }
        y[i] /= m[i][i];
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::assembly::{assemble_diffusion, node_weights, Parallelism};
    use crate::fem::{FieldP1, Tensor2};
    use crate::mesh::{unit_square_mesh, SquareBoundary};

    #[test]
    fn identity_solve() {
        let b = vec![1.0, -2.0, 3.5];
        assert_eq!(solve_spd(&SparseSymMatrix::identity(3), &b, Constraint::None).unwrap(), b);
    }

    #[test]
    fn hand_three_by_three() {
        // [[4,1,0],[1,3,1],[0,1,2]] has determinant 18 and inverse
        // (1/18)[[5,-2,1],[-2,8,-4],[1,-4,11]]
        let a = SparseSymMatrix::from_blocks(
            3,
            &[([0usize, 1, 2], [[4.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]])],
        );
        let b = [1.0, 2.0, 3.0];
        let x = solve_spd(&a, &b, Constraint::None).unwrap();
        let inv = [[5.0, -2.0, 1.0], [-2.0, 8.0, -4.0], [1.0, -4.0, 11.0]];
        for i in 0..3 {
            let e: f64 = (0..3).map(|j| inv[i][j] * b[j]).sum::<f64>() / 18.0;
            assert!((x[i] - e).abs() < 1e-12);
        }
    }

    fn neumann_laplacian(m: usize) -> (crate::mesh::TriMesh, SparseSymMatrix) {
        let mesh = unit_square_mesh(m, SquareBoundary::AllNeumann).unwrap();
        let k = assemble_diffusion(&mesh, |_, _| Tensor2::iso(1.0), &FieldP1::zeros(&mesh), Parallelism::Sequential)
            .unwrap();
        (mesh, k)
    }

    #[test]
    fn zero_mean_neumann() {
        let (mesh, k) = neumann_laplacian(8);
        let c = node_weights(&mesh);
        let x = solve_spd(&k, &vec![0.0; mesh.num_nodes()], Constraint::ZeroMean(&c)).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));

        let exact = FieldP1::from_fn(&mesh, |x, y| x * x - y + 0.3 * x * y).unwrap();
        let b = k.matvec(exact.values());
        let x = solve_spd(&k, &b, Constraint::ZeroMean(&c)).unwrap();
        let shift = exact.area_mean(&mesh);
        for (xi, ei) in x.iter().zip(exact.values()) {
            assert!((xi - (ei - shift)).abs() < 1e-9);
        }
        let mean: f64 = x.iter().zip(&c).map(|(a, b)| a * b).sum();
        assert!(mean.abs() < 1e-12);
        let r: Vec<f64> = k.matvec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
        assert!(norm(&r) / norm(&b) <= RESIDUAL_TOL);
    }

    #[test]
    fn incompatible_rhs_is_rejected() {
        let (mesh, k) = neumann_laplacian(4);
        let c = node_weights(&mesh);
        let b = vec![1.0; mesh.num_nodes()];
        assert!(matches!(
            solve_spd(&k, &b, Constraint::ZeroMean(&c)),
            Err(FemError::Compatibility { .. })
        ));
    }

    #[test]
    fn cholesky_matches_cg() {
        let a = vec![vec![4.0, 1.0], vec![1.0, 3.0]];
        let x = cholesky_solve(a, &[1.0, 2.0]).unwrap();
        assert!((x[0] - 1.0 / 11.0).abs() < 1e-15 && (x[1] - 7.0 / 11.0).abs() < 1e-15);
        assert!(cholesky_solve(vec![vec![0.0]], &[1.0]).is_none());
    }
}
