//! The auxiliary electric and thermal problems and the operator `𝒯`.

use serde::{Deserialize, Serialize};

use super::problem::ProblemData;
use super::CouplingError;
use crate::fem::{
    assemble_diffusion, assemble_edge_load, assemble_flux_load, node_weights, radiation_system, solve_spd_info,
    CoefficientModel, Constraint, FieldP1, Parallelism,
};
use crate::mesh::{BoundaryTag, Point, TriMesh};

/// Inner solver settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub parallelism: Parallelism,
    /// Relative residual at which Newton stops.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Consecutive residual increases treated as divergence.
    pub newton_growth_limit: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            parallelism: Parallelism::Sequential,
            newton_tol: 1e-10,
            newton_max_iter: 50,
            newton_growth_limit: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonInfo {
    pub iterations: usize,
    /// Relative residual after each iteration, starting with the initial guess.
    pub residuals: Vec<f64>,
}

/// Potential `φ` with zero mean solving the electric problem for a frozen `θ`.
pub fn solve_electric(
    mesh: &TriMesh,
    coeffs: &CoefficientModel,
    theta: &FieldP1,
    data: &ProblemData,
    settings: &SolverSettings,
) -> Result<FieldP1, CouplingError> {
    let a = assemble_diffusion(mesh, |x, t| (coeffs.sigma)(x, t), theta, settings.parallelism)?;
    let mut b = assemble_flux_load(
        mesh,
        |t, x, _| electric_flux(mesh, coeffs, theta, data, t, x),
        settings.parallelism,
    )?;
    let gl = assemble_edge_load(mesh, |x, _, _| (data.g)(x), BoundaryTag::GammaN);
    for (bi, gi) in b.iter_mut().zip(gl) {
        *bi += gi;
    }
    let c = node_weights(mesh);
    let (phi, _) = solve_spd_info(&a, &b, Constraint::ZeroMean(&c))?;
    Ok(FieldP1::new(mesh, phi)?)
}

/// Volume flux `-α_sσ∇θ (+ H)` of the electric problem on element `t`.
pub fn electric_flux(
    mesh: &TriMesh,
    coeffs: &CoefficientModel,
    theta: &FieldP1,
    data: &ProblemData,
    t: usize,
    x: Point,
) -> [f64; 2] {
    let (c, tm) = (mesh.centroid(t), theta.element_mean(mesh, t));
    let s = (coeffs.sigma)(c, tm).scale((coeffs.alpha_s)(c, tm));
    let f = s.apply(theta.gradient(mesh, t));
    let mut out = [-f[0], -f[1]];
    if let Some(h) = &data.extra.electric_flux {
        let hv = h(x);
        out[0] += hv[0];
        out[1] += hv[1];
    }
    out
}

/// Volume flux `-σ(α_s(θ+φ)∇θ + φ∇φ) (+ G)` of the thermal problem at the
/// point with barycentric coordinates `l` in element `t`.
#[allow(clippy::too_many_arguments)]
pub fn thermal_flux(
    mesh: &TriMesh,
    coeffs: &CoefficientModel,
    theta: &FieldP1,
    phi: &FieldP1,
    data: &ProblemData,
    t: usize,
    x: Point,
    l: [f64; 3],
) -> [f64; 2] {
    let (c, tm) = (mesh.centroid(t), theta.element_mean(mesh, t));
    let sigma = (coeffs.sigma)(c, tm);
    let alpha = (coeffs.alpha_s)(c, tm);
    let (gt, gp) = (theta.gradient(mesh, t), phi.gradient(mesh, t));
    let (tv, pv) = (theta.eval_bary(mesh, t, l), phi.eval_bary(mesh, t, l));
    let w = [alpha * (tv + pv) * gt[0] + pv * gp[0], alpha * (tv + pv) * gt[1] + pv * gp[1]];
    let f = sigma.apply(w);
    let mut out = [-f[0], -f[1]];
    if let Some(g) = &data.extra.thermal_flux {
        let gv = g(x);
        out[0] += gv[0];
        out[1] += gv[1];
    }
    out
}

/// Boundary datum `h = γθ_e^{ℓ-1} (+ s)` on `Γ`, with `γ` frozen at temperature `t`.
pub fn thermal_gamma_data(coeffs: &CoefficientModel, data: &ProblemData, x: Point, t: f64) -> f64 {
    let te = (data.theta_e)(x);
    let mut v = (coeffs.gamma)(x, t) * te.abs().powf(data.ell() - 2.0) * te;
    if let Some(src) = &data.extra.thermal_gamma {
        v += src(x);
    }
    v
}

/// Right side of the thermal problem for frozen `(θ, φ)`.
fn thermal_load(
    mesh: &TriMesh,
    coeffs: &CoefficientModel,
    theta: &FieldP1,
    phi: &FieldP1,
    data: &ProblemData,
    settings: &SolverSettings,
) -> Result<Vec<f64>, CouplingError> {
    let th = theta.values();
    let mut b = assemble_edge_load(
        mesh,
        |x, [i, j], s| thermal_gamma_data(coeffs, data, x, (1.0 - s) * th[i] + s * th[j]),
        BoundaryTag::Gamma,
    );
    let vol = assemble_flux_load(
        mesh,
        |t, x, l| thermal_flux(mesh, coeffs, theta, phi, data, t, x, l),
        settings.parallelism,
    )?;
    for (bi, vi) in b.iter_mut().zip(vol) {
        *bi += vi;
    }
    Ok(b)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Temperature `Θ` solving the thermal problem for frozen `(θ, φ)`.
///
/// The radiation term is resolved by damped Newton starting from `θ`.
pub fn solve_thermal(
    mesh: &TriMesh,
    coeffs: &CoefficientModel,
    theta: &FieldP1,
    phi: &FieldP1,
    data: &ProblemData,
    settings: &SolverSettings,
) -> Result<(FieldP1, NewtonInfo), CouplingError> {
    if !mesh.has_tag(BoundaryTag::Gamma) {
        return Err(CouplingError::Precondition(
            "the thermal problem needs a nonempty radiative boundary Γ".into(),
        ));
    }
    let ell = data.ell();
    let k = assemble_diffusion(mesh, |x, t| (coeffs.k)(x, t), theta, settings.parallelism)?;
    let b = thermal_load(mesh, coeffs, theta, phi, data, settings)?;
    let f_lambda = |x: crate::mesh::Point, t: f64| (coeffs.f_lambda)(x, t);

    let residual = |u: &FieldP1, floor: f64| -> Result<(Vec<f64>, _), CouplingError> {
        let (r, j) = radiation_system(mesh, f_lambda, theta, u, ell, floor)?;
        let ku = k.matvec(u.values());
        let f: Vec<f64> = ku.iter().zip(&r).zip(&b).map(|((a, r), b)| a + r - b).collect();
        Ok((f, j))
    };

    let theta_e_max = mesh
        .boundary_edges()
        .iter()
        .filter(|e| e.tag == BoundaryTag::Gamma)
        .flat_map(|e| e.nodes)
        .map(|i| (data.theta_e)(mesh.nodes()[i]).abs())
        .fold(0.0f64, f64::max);

    let mut u = theta.clone();
    let (mut f, _) = residual(&u, 0.0)?;
    let scale = norm(&b).max(norm(&f));
    let mut rn = norm(&f);
    let mut residuals = vec![if scale > 0.0 { rn / scale } else { 0.0 }];
    let mut growth = 0usize;
    let mut iterations = 0usize;
    while rn > settings.newton_tol * scale {
        if iterations >= settings.newton_max_iter {
            return Err(CouplingError::NewtonDivergence {
                reason: format!("no convergence in {} iterations", settings.newton_max_iter),
                residuals,
            });
        }
        iterations += 1;
        let gamma_max = mesh
            .boundary_edges()
            .iter()
            .filter(|e| e.tag == BoundaryTag::Gamma)
            .flat_map(|e| e.nodes)
            .map(|i| u.values()[i].abs())
            .fold(0.0f64, f64::max);
        let level = gamma_max.max(theta_e_max);
        let floor = if level > 0.0 { 0.1 * level } else { 1.0 };
        let (_, jac) = residual(&u, floor)?;
        let system = k.add(&jac);
        let neg: Vec<f64> = f.iter().map(|v| -v).collect();
        let (delta, _) = solve_spd_info(&system, &neg, Constraint::None)?;

        // halve on residual increase; after 30 halvings keep the last trial
        let mut step = 1.0;
        let mut accepted = None;
        for halvings in 0..=30 {
            let trial: Vec<f64> = u.values().iter().zip(&delta).map(|(a, d)| a + step * d).collect();
            let trial = FieldP1::new(mesh, trial)?;
            let (ft, _) = residual(&trial, 0.0)?;
            let tn = norm(&ft);
            if tn < rn || halvings == 30 {
                accepted = Some((trial, ft, tn));
                break;
            }
            step *= 0.5;
        }
        let (nu, nf, nn) = accepted.expect("loop always accepts its last trial");
        if nn >= rn {
            growth += 1;
        } else {
            growth = 0;
        }
        u = nu;
        f = nf;
        rn = nn;
        residuals.push(rn / scale);
        if growth >= settings.newton_growth_limit {
            return Err(CouplingError::NewtonDivergence {
                reason: format!("residual grew over {growth} consecutive steps"),
                residuals,
            });
        }
    }
    Ok((u, NewtonInfo { iterations, residuals }))
}

/// One application of `𝒯`: `θ ↦ φ(θ) ↦ Θ`.
pub fn operator_t(
    mesh: &TriMesh,
    coeffs: &CoefficientModel,
    theta: &FieldP1,
    data: &ProblemData,
    settings: &SolverSettings,
) -> Result<(FieldP1, FieldP1, NewtonInfo), CouplingError> {
    let phi = solve_electric(mesh, coeffs, theta, data, settings)?;
    let (big_theta, info) = solve_thermal(mesh, coeffs, theta, &phi, data, settings)?;
    Ok((big_theta, phi, info))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ExponentSet;
    use crate::fem::Tensor2;
    use crate::mesh::{unit_square_mesh, SquareBoundary};
    use std::sync::Arc;

    fn exps(ell: f64) -> ExponentSet {
        ExponentSet::planar(3.0, ell, 0.0)
    }

    #[test]
    fn constant_theta_without_current_gives_zero_potential() {
        let m = unit_square_mesh(6, SquareBoundary::LeftRightNeumann).unwrap();
        let c = CoefficientModel::constant(1.0, 1.0, 0.3, 1.0, 1.0);
        let th = FieldP1::constant(&m, 3.0);
        let phi = solve_electric(&m, &c, &th, &ProblemData::zero(exps(5.0)), &SolverSettings::default()).unwrap();
        assert!(phi.max_abs() == 0.0);
    }

    #[test]
    fn seebeck_potential_is_affine_in_temperature() {
        let m = unit_square_mesh(8, SquareBoundary::LeftNeumann).unwrap();
        let a = 0.37;
        let c = CoefficientModel::constant(1.0, 1.0, a, 1.0, 1.0);
        let th = FieldP1::from_fn(&m, |x, y| 1.0 + x * x + 0.5 * (3.0 * y).sin()).unwrap();
        let phi = solve_electric(&m, &c, &th, &ProblemData::zero(exps(5.0)), &SolverSettings::default()).unwrap();
        let mean = th.area_mean(&m);
        for (p, t) in phi.values().iter().zip(th.values()) {
            assert!((p + a * (t - mean)).abs() < 1e-9, "{p} vs {}", -a * (t - mean));
        }
    }

    #[test]
    fn pure_current_potential_is_odd() {
        let m = unit_square_mesh(8, SquareBoundary::LeftRightNeumann).unwrap();
        let c = CoefficientModel::constant(1.0, 1.0, 0.0, 1.0, 1.0);
        let data = ProblemData::new(|x| if x[0] < 0.5 { 1.0 } else { -1.0 }, |_| 0.0, exps(5.0));
        let th = FieldP1::zeros(&m);
        let phi = solve_electric(&m, &c, &th, &data, &SolverSettings::default()).unwrap();
        let n = 9;
        for j in 0..n {
            for i in 0..n {
                let (a, b) = (phi.values()[j * n + i], phi.values()[j * n + (n - 1 - i)]);
                assert!((a + b).abs() < 1e-9);
            }
        }
        assert!(phi.values()[0] > 0.0);
    }

    #[test]
    fn trivial_thermal_solutions() {
        let m = unit_square_mesh(6, SquareBoundary::AllRadiative).unwrap();
        let s = SolverSettings::default();
        let c = CoefficientModel::constant(1.0, 1.0, 0.0, 1.0, 1.0);
        let zero = FieldP1::zeros(&m);
        let (u, _) = solve_thermal(&m, &c, &zero, &zero, &ProblemData::zero(exps(5.0)), &s).unwrap();
        assert_eq!(u.max_abs(), 0.0);

        let robin = ProblemData::new(|_| 0.0, |_| 1.0, exps(2.0));
        let (u, _) = solve_thermal(&m, &c, &zero, &zero, &robin, &s).unwrap();
        assert!(u.values().iter().all(|v| (v - 1.0).abs() < 1e-9));

        let rad = ProblemData::new(|_| 0.0, |_| 2.0, exps(5.0));
        let (u, info) = solve_thermal(&m, &c, &zero, &zero, &rad, &s).unwrap();
        assert!(u.values().iter().all(|v| (v - 2.0).abs() < 1e-8), "{info:?}");
    }

    #[test]
    fn thermal_requires_radiative_boundary() {
        let m = unit_square_mesh(2, SquareBoundary::AllNeumann).unwrap();
        let c = CoefficientModel::constant(1.0, 1.0, 0.0, 1.0, 1.0);
        let z = FieldP1::zeros(&m);
        let r = solve_thermal(&m, &c, &z, &z, &ProblemData::zero(exps(5.0)), &SolverSettings::default());
        assert!(matches!(r, Err(CouplingError::Precondition(_))));
    }

    #[test]
    fn operator_is_deterministic_and_fixes_zero() {
        let m = unit_square_mesh(6, SquareBoundary::LeftNeumann).unwrap();
        let mut c = CoefficientModel::constant(1.0, 1.0, 0.1, 1.0, 1.0);
        c.k = Arc::new(|x, t| Tensor2::new(1.0 + 0.1 * t * t, 0.1, 1.0 + x[0]));
        let s = SolverSettings::default();
        let zero = FieldP1::zeros(&m);
        let (t0, p0, _) = operator_t(&m, &c, &zero, &ProblemData::zero(exps(5.0)), &s).unwrap();
        assert_eq!((t0.max_abs(), p0.max_abs()), (0.0, 0.0));

        let data = ProblemData::new(|_| 0.0, |x| 1.0 + 0.2 * x[0], exps(5.0));
        let th = FieldP1::from_fn(&m, |x, y| 1.0 + 0.1 * x * y).unwrap();
        let a = operator_t(&m, &c, &th, &data, &s).unwrap();
        let b = operator_t(&m, &c, &th, &data, &s).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }
}
