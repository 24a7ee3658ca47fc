//! Energy, `L∞` and higher-integrability estimates evaluated on discrete fields.
//!
//! The thermal equation is audited with `A = k(θ)`, `b(Θ) = f_λ|Θ|^{ℓ-2}Θ`,
//! `h = γθ_e^{ℓ-1}` and volume flux `𝐟 = -σ(α_s(θ+φ)∇θ + φ∇φ)`; the electric
//! equation with `A = σ(θ)`, `𝐟 = -α_sσ∇θ` and Neumann data `g`. Both have
//! `f = 0`. Manufactured sources, when present, are folded into `𝐟` and `h`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AuditOptions, BoundCheckResult, Solution, VerifyError};
use crate::constants::gehring::eps_pole;
use crate::constants::{
    convex_poincare_constant, sobolev_constant, sobolev_constant_ell, supess_constants, trace_constant,
    trace_constant_2n_over_n1, trace_constant_ell, upsilon_thresholds, z_factors, CoefficientBounds,
};
use crate::coupling::{electric_flux, thermal_flux, thermal_gamma_data, ProblemData};
use crate::fem::quadrature::{barycentric_point, dunavant7, gauss3_unit};
use crate::fem::{boundary_lq_norm, grad_lp_norm, CoefficientModel, FieldP1};
use crate::mesh::{geometry_summary, BoundaryTag, Point, TriMesh};

const N: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equation {
    Thermal,
    Electric,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::Thermal => "thermal",
            Equation::Electric => "electric",
        })
    }
}

/// Bounds with the generic pair `(a_#, a^#)` set to those of the leading tensor of `eq`.
fn equation_bounds(coeffs: &CoefficientModel, eq: Equation) -> CoefficientBounds {
    let mut b = coeffs.bounds;
    (b.a_lo, b.a_hi) = match eq {
        Equation::Thermal => (b.k_lo, b.k_hi),
        Equation::Electric => (b.sigma_lo, b.sigma_hi),
    };
    b
}

/// `Σ_T |T| Σ_w w·f(t, x, λ)` with the 7-point rule.
fn volume_integral(mesh: &TriMesh, f: impl Fn(usize, Point, [f64; 3]) -> f64) -> f64 {
    let rule = dunavant7();
    let mut s = 0.0;
    for t in 0..mesh.num_triangles() {
        let pts = mesh.triangle_points(t);
        let local: f64 = rule.iter().map(|&(l, w)| w * f(t, barycentric_point(&pts, l), l)).sum();
        s += mesh.triangle_area(t) * local;
    }
    s
}

/// `∫_{tag} f(x, u(x)) ds` with 3-point Gauss per edge and `u` interpolated.
fn boundary_integral(mesh: &TriMesh, tag: BoundaryTag, u: &FieldP1, f: impl Fn(Point, f64) -> f64) -> f64 {
    let (nodes, v) = (mesh.nodes(), u.values());
    let mut s = 0.0;
    for e in mesh.edges_with_tag(tag) {
        let [i, j] = e.nodes;
        let len = mesh.edge_length(e);
        for (r, w) in gauss3_unit() {
            let x = [
                nodes[i][0] + r * (nodes[j][0] - nodes[i][0]),
                nodes[i][1] + r * (nodes[j][1] - nodes[i][1]),
            ];
            s += w * len * f(x, (1.0 - r) * v[i] + r * v[j]);
        }
    }
    s
}

fn flux_lq_norm(mesh: &TriMesh, q: f64, flux: impl Fn(usize, Point, [f64; 3]) -> [f64; 2]) -> f64 {
    volume_integral(mesh, |t, x, l| {
        let f = flux(t, x, l);
        f[0].hypot(f[1]).powf(q)
    })
    .powf(1.0 / q)
}

fn h_lq_norm(sol: &Solution<'_>, coeffs: &CoefficientModel, data: &ProblemData, q: f64) -> f64 {
    boundary_integral(sol.mesh, BoundaryTag::Gamma, sol.theta, |x, t| {
        thermal_gamma_data(coeffs, data, x, t).abs().powf(q)
    })
    .powf(1.0 / q)
}

fn thermal_flux_fn<'a>(
    sol: &'a Solution<'a>,
    coeffs: &'a CoefficientModel,
    data: &'a ProblemData,
) -> impl Fn(usize, Point, [f64; 3]) -> [f64; 2] + 'a {
    move |t, x, l| thermal_flux(sol.mesh, coeffs, sol.theta, sol.phi, data, t, x, l)
}

fn electric_flux_fn<'a>(
    sol: &'a Solution<'a>,
    coeffs: &'a CoefficientModel,
    data: &'a ProblemData,
) -> impl Fn(usize, Point, [f64; 3]) -> [f64; 2] + 'a {
    move |t, x, _| electric_flux(sol.mesh, coeffs, sol.theta, data, t, x)
}

/// Energy estimate of the thermal equation:
/// `a_#/2‖∇Θ‖₂² + b_#/ℓ'‖Θ‖^ℓ_{ℓ,Γ} ≤ (ℓ-1)/(ℓ b_#^{1/(ℓ-1)})(‖h‖_{ℓ',Γ}+ℰ(1,1))^{ℓ/(ℓ-1)}
/// + (‖𝐟‖₂ + ℰ(|Ω|^{1/n}, |Ω|^{1/2+(1/n-1)/s}))²/(2a_#)`.
pub fn check_energy_estimate(
    sol: &Solution<'_>,
    coeffs: &CoefficientModel,
    data: &ProblemData,
    opts: &AuditOptions,
) -> Result<BoundCheckResult, VerifyError> {
    const NAME: &str = "energy_thermal";
    let mesh = sol.mesh;
    if !mesh.has_tag(BoundaryTag::Gamma) {
        return Ok(BoundCheckResult::inapplicable(NAME, "requires meas(Γ) > 0"));
    }
    let b = &coeffs.bounds;
    let (a, b_lo, ell, s) = (b.k_lo, b.b_lo, data.ell(), data.exps.s);
    let ell_conj = ell / (ell - 1.0);
    let geom = geometry_summary(mesh);

    let grad2 = grad_lp_norm(mesh, sol.theta, 2.0);
    let trace_ell = boundary_lq_norm(mesh, sol.theta, ell, BoundaryTag::Gamma);
    let lhs = 0.5 * a * grad2 * grad2 + b_lo / ell_conj * trace_ell.powf(ell);

    let flux = flux_lq_norm(mesh, 2.0, thermal_flux_fn(sol, coeffs, data));
    let h = h_lq_norm(sol, coeffs, data, ell_conj);

    let nf = N as f64;
    let (q_s, q_k) = (2.0 * nf / (nf + 2.0), nf * s / (nf * (s - 1.0) + 1.0));
    let convex = mesh.is_convex();
    let poincare = |q: f64| match opts.poincare {
        Some(p) => Ok(p),
        None => convex_poincare_constant(q, geom.diameter),
    };
    let s_ell = sobolev_constant_ell(q_s, N, poincare(q_s)?, geom.meas_gamma, ell)?;
    let k_ell = trace_constant_ell(q_k, N, poincare(q_k)?, geom.meas_gamma, ell)?;
    // no scalar source and no Neumann flux in the thermal equation
    let (f_norm, g_norm) = (0.0, 0.0);
    let e = |ca: f64, cb: f64| ca * s_ell * f_norm + cb * k_ell * g_norm;
    let vol = geom.vol_omega;
    let rhs = (ell - 1.0) / (ell * b_lo.powf(1.0 / (ell - 1.0))) * (h + e(1.0, 1.0)).powf(ell / (ell - 1.0))
        + (flux + e(vol.powf(1.0 / nf), vol.powf(0.5 + (1.0 / nf - 1.0) / s))).powi(2) / (2.0 * a);

    let mut r = BoundCheckResult::compare(NAME, lhs, rhs)
        .with_input("a_lo", a)
        .with_input("b_lo", b_lo)
        .with_input("ell", ell)
        .with_input("s", s)
        .with_input("grad_l2", grad2)
        .with_input("trace_l_ell", trace_ell)
        .with_input("flux_l2", flux)
        .with_input("h_l_ell_conj", h)
        .with_input("s_q_ell", s_ell)
        .with_input("k_q_ell", k_ell);
    if opts.poincare.is_none() && !convex {
        r = r.with_note("non-convex mesh: Poincaré constant from the diameter bound is heuristic");
    }
    Ok(r)
}

/// Energy estimate of the electric equation:
/// `‖∇φ‖₂ ≤ (‖𝐟‖₂ + |Ω|^{1/n}S_{2n/(n+2)}‖f‖₂ + |Ω|^{1/2+(1/n-1)/s}K_{ns/(n(s-1)+1)}‖g‖_{s,Γ_N})/a_#`.
pub fn check_electric_energy_estimate(
    sol: &Solution<'_>,
    coeffs: &CoefficientModel,
    data: &ProblemData,
) -> Result<BoundCheckResult, VerifyError> {
    let mesh = sol.mesh;
    let (a, s) = (coeffs.bounds.sigma_lo, data.exps.s);
    let nf = N as f64;
    let vol = mesh.area();
    let lhs = grad_lp_norm(mesh, sol.phi, 2.0);
    let flux = flux_lq_norm(mesh, 2.0, electric_flux_fn(sol, coeffs, data));
    let g = data.g_norm(mesh, s);
    let s_q = sobolev_constant(2.0 * nf / (nf + 2.0), N)?;
    let k_q = trace_constant(nf * s / (nf * (s - 1.0) + 1.0), N)?;
    let f_norm = 0.0;
    let rhs = (flux + vol.powf(1.0 / nf) * s_q * f_norm + vol.powf(0.5 + (1.0 / nf - 1.0) / s) * k_q * g) / a;
    Ok(BoundCheckResult::compare("energy_electric", lhs, rhs)
        .with_note("the trace term uses the whole-space constant with the gradient seminorm, which need not bound zero-mean functions on a bounded domain")
        .with_input("a_lo", a)
        .with_input("s", s)
        .with_input("flux_l2", flux)
        .with_input("g_l_s", g)
        .with_input("k_q", k_q))
}

/// `L∞` estimate of the thermal equation: `max|Θ| ≤ 1 + 𝒵₁‖𝐟‖_{p,Ω} + 𝒵₂‖h‖_{p,Γ}`.
pub fn check_supess(
    sol: &Solution<'_>,
    coeffs: &CoefficientModel,
    data: &ProblemData,
) -> Result<BoundCheckResult, VerifyError> {
    const NAME: &str = "supess_thermal";
    let mesh = sol.mesh;
    let (p, alpha) = (data.exps.p, data.exps.alpha);
    if !mesh.has_tag(BoundaryTag::Gamma) {
        return Ok(BoundCheckResult::inapplicable(NAME, "requires meas(Γ) > 0"));
    }
    if !(p > N as f64) {
        return Ok(BoundCheckResult::inapplicable(NAME, format!("requires p > n, got p = {p}")));
    }
    if !(alpha > 2.0 * p / (p - 2.0)) || !alpha.is_finite() {
        return Ok(BoundCheckResult::inapplicable(
            NAME,
            format!("requires alpha > 2p/(p-2), got alpha = {alpha}"),
        ));
    }
    let b = &coeffs.bounds;
    let z = supess_constants(b.k_lo, b.b_lo, &data.exps, &geometry_summary(mesh))?;
    let lhs = sol.theta.max_abs();
    let flux = flux_lq_norm(mesh, p, thermal_flux_fn(sol, coeffs, data));
    let h = h_lq_norm(sol, coeffs, data, p);
    let rhs = 1.0 + z.zcal1 * flux + z.zcal2 * h;
    Ok(BoundCheckResult::compare(NAME, lhs, rhs)
        .with_input("p", p)
        .with_input("alpha", alpha)
        .with_input("zcal", z.zcal)
        .with_input("zcal1", z.zcal1)
        .with_input("zcal2", z.zcal2)
        .with_input("flux_l_p", flux)
        .with_input("h_l_p", h))
}

/// `υ_U` of `eq`.
fn upsilon(coeffs: &CoefficientModel, data: &ProblemData, eq: Equation) -> Result<f64, VerifyError> {
    Ok(upsilon_thresholds(&equation_bounds(coeffs, eq), data.exps.nu3, N)?.boundary)
}

/// `min(δ, 4/((n+2)(υ_U-1)))` for the leading tensor of `eq`.
pub fn eps_max(coeffs: &CoefficientModel, data: &ProblemData, eq: Equation) -> Result<f64, VerifyError> {
    Ok(data.exps.delta.min(eps_pole(upsilon(coeffs, data, eq)?, N)))
}

/// Global higher-integrability estimate at margin `eps`, comparing
/// `‖∇u‖^{2+ε}_{2+ε}` against the assembled right side with `Z₁`, `Z₂`,
/// `ℱ(a_#)` and `ℋ(a_#, b^#)` (or `𝒢(a_#)` for the electric equation).
///
/// The result depends on `r_#`, taken from the data or the mesh default, and
/// is labeled accordingly.
pub fn check_gradient_estimate(
    sol: &Solution<'_>,
    coeffs: &CoefficientModel,
    data: &ProblemData,
    eq: Equation,
    eps: f64,
) -> Result<BoundCheckResult, VerifyError> {
    let mesh = sol.mesh;
    let ups = upsilon(coeffs, data, eq)?;
    let e_max = data.exps.delta.min(eps_pole(ups, N));
    if !(eps >= 0.0 && eps < e_max) {
        return Err(VerifyError::Domain(format!("eps must lie in [0, {e_max:e}), got {eps:e}")));
    }
    let (z1, z2) = z_factors(eps, ups, N)?;
    let bounds = equation_bounds(coeffs, eq);
    let a = bounds.a_lo;
    let nf = N as f64;
    let q = 2.0 + eps;
    let u = match eq {
        Equation::Thermal => sol.theta,
        Equation::Electric => sol.phi,
    };

    let lhs: f64 = (0..mesh.num_triangles())
        .map(|t| {
            let g = u.gradient(mesh, t);
            g[0].hypot(g[1]).powf(q) * mesh.triangle_area(t)
        })
        .sum();
    let grad2 = grad_lp_norm(mesh, u, 2.0);

    // scalar source term of ℱ is absent: f = 0 in both equations
    let f_scale = a.powf(-0.5) * (2.0 / a + 2.0).sqrt();
    let f_int = match eq {
        Equation::Thermal => flux_lq_norm(mesh, q, thermal_flux_fn(sol, coeffs, data)),
        Equation::Electric => flux_lq_norm(mesh, q, electric_flux_fn(sol, coeffs, data)),
    }
    .powf(q)
        * f_scale.powf(q);

    let h_scale = 2.0 * trace_constant_2n_over_n1(N)? / a.sqrt() * (2.0 / a + 2f64.powf(-1.0 / nf)).sqrt();
    let sup = u.max_abs();
    let b_hi = bounds.b_hi;
    let ell = data.ell();
    let h_int = match eq {
        // g = 0 on Γ_N for the thermal equation
        Equation::Thermal => boundary_integral(mesh, BoundaryTag::Gamma, sol.theta, |x, t| {
            (h_scale * (thermal_gamma_data(coeffs, data, x, t) + b_hi * sup.powf(ell - 1.0)).abs()).powf(q)
        }),
        Equation::Electric => boundary_integral(mesh, BoundaryTag::GammaN, sol.theta, |x, _| {
            (h_scale * (data.g)(x).abs()).powf(q)
        }),
    };

    let (r_sharp, r_label) = match data.r_sharp {
        Some(r) => (r, format!("r_sharp = {r:e} (user supplied)")),
        None => {
            let r = mesh.default_r_sharp();
            (r, format!("r_sharp = {r:e} (mesh default, heuristic)"))
        }
    };
    if !(r_sharp > 0.0) {
        return Err(VerifyError::Domain(format!("r_sharp must be positive, got {r_sharp}")));
    }
    let term_grad = (8.0 / r_sharp.powf(nf)).powf(eps / 2.0) * z1 * grad2.powf(q);
    let term_f = (2f64.powf((nf + 1.0) * eps / 2.0) * z1 + z2) * f_int;
    let term_h = (z1 + z2) * h_int;
    let rhs = (2f64.powf(nf) + 1.0) * (term_grad + term_f + term_h);

    let mut r = BoundCheckResult::compare(&format!("gradient_{eq}(eps={eps:e})"), lhs, rhs)
        .with_input("eps", eps)
        .with_input("eps_max", e_max)
        .with_input("upsilon", ups)
        .with_input("z1", z1)
        .with_input("z2", z2)
        .with_input("r_sharp", r_sharp)
        .with_input("grad_l2", grad2)
        .with_input("f_term", f_int)
        .with_input("h_term", h_int)
        .with_input("sup", sup);
    r.conditional_on = Some(r_label);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ExponentSet;
    use crate::coupling::presets::constant_isotropic;
    use crate::coupling::{operator_t, SolverSettings};
    use crate::mesh::{unit_square_mesh, SquareBoundary};

    fn zero_case() -> (TriMesh, CoefficientModel, ProblemData, FieldP1) {
        let m = unit_square_mesh(6, SquareBoundary::LeftNeumann).unwrap();
        let c = constant_isotropic();
        let d = ProblemData::zero(ExponentSet::planar(3.0, 5.0, 0.0));
        let z = FieldP1::zeros(&m);
        (m, c, d, z)
    }

    #[test]
    fn zero_data_gives_zero_sides() {
        let (m, c, d, z) = zero_case();
        let sol = Solution::new(&m, &z, &z).unwrap();
        let e = check_energy_estimate(&sol, &c, &d, &AuditOptions::default()).unwrap();
        assert_eq!((e.lhs, e.rhs), (0.0, 0.0));
        assert!(e.pass);
        let s = check_supess(&sol, &c, &d).unwrap();
        assert_eq!((s.lhs, s.rhs), (0.0, 1.0));
        for eq in [Equation::Thermal, Equation::Electric] {
            let g = check_gradient_estimate(&sol, &c, &d, eq, 0.0).unwrap();
            assert_eq!((g.lhs, g.rhs), (0.0, 0.0));
            assert!(g.pass && g.conditional_on.is_some());
        }
    }

    #[test]
    fn eps_out_of_range_is_a_domain_error() {
        let (m, c, d, z) = zero_case();
        let sol = Solution::new(&m, &z, &z).unwrap();
        let e_max = eps_max(&c, &d, Equation::Thermal).unwrap();
        assert!(check_gradient_estimate(&sol, &c, &d, Equation::Thermal, e_max).is_err());
        assert!(check_gradient_estimate(&sol, &c, &d, Equation::Thermal, -1e-12).is_err());
    }

    #[test]
    fn linear_equilibrium_energy_sides_agree() {
        // ℓ = 2, Θ ≡ θ_e: a_#/2·0 + b_#/2·θ²|Γ| against γ²θ²|Γ|/(2b_#)
        let m = unit_square_mesh(4, SquareBoundary::AllRadiative).unwrap();
        let c = CoefficientModel::constant(1.0, 1.0, 0.0, 2.0, 2.0);
        let d = ProblemData::new(|_| 0.0, |_| 3.0, ExponentSet::planar(3.0, 2.0, 0.0));
        let th = FieldP1::constant(&m, 3.0);
        let ph = FieldP1::zeros(&m);
        let sol = Solution::new(&m, &th, &ph).unwrap();
        let r = check_energy_estimate(&sol, &c, &d, &AuditOptions::default()).unwrap();
        assert!((r.lhs - 2.0 / 2.0 * 9.0 * 4.0).abs() < 1e-12);
        assert!((r.rhs - 36.0 * 4.0 / 4.0).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn gradient_rhs_grows_with_b_upper() {
        let m = unit_square_mesh(6, SquareBoundary::LeftRightNeumann).unwrap();
        let d = ProblemData::new(
            |x| 0.1 * (1.0 - 2.0 * x[0]),
            |x| 1.0 + 0.2 * x[0],
            ExponentSet::planar(3.0, 5.0, 0.0),
        );
        let c = constant_isotropic();
        let (th, ph, _) = operator_t(&m, &c, &FieldP1::constant(&m, 1.0), &d, &SolverSettings::default()).unwrap();
        let sol = Solution::new(&m, &th, &ph).unwrap();
        let mut last = 0.0;
        for b_hi in [1.0, 2.0, 5.0] {
            let mut cc = c.clone();
            cc.bounds.b_hi = b_hi;
            let r = check_gradient_estimate(&sol, &cc, &d, Equation::Thermal, 0.0).unwrap();
            assert!(r.rhs >= last);
            last = r.rhs;
        }
    }
}
