//! Manufactured-solution convergence study on the unit square.
//!
//! Sources are generated in divergence form: for exact fields `θ*`, `φ*`
//! (with `φ*` shifted to zero mean) the thermal problem receives the volume
//! flux `G = k∇θ* + σ(α_s(θ*+φ*)∇θ* + φ*∇φ*)` and the boundary source
//! `f_λ|θ*|^{ℓ-2}θ*` on `Γ` with `θ_e = 0`; the electric problem receives
//! `H = σ∇φ* + α_sσ∇θ*` with `g = 0`. The exact pair then satisfies both
//! weak forms. Gradients come from central differences.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::constants::report::fmt_sig17;
use crate::constants::ExponentSet;
use crate::coupling::{picard_solve, ExtraSources, PicardOptions, PicardResult, ProblemData};
use crate::expr::Expr;
use crate::fem::quadrature::{barycentric_point, dunavant7};
use crate::fem::{CoefficientModel, FieldP1};
use crate::mesh::{unit_square_mesh, SquareBoundary, TriMesh};

/// Errors below this are treated as exact reproduction; rates are then not meaningful.
pub const EXACT_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MmsOptions {
    pub exps: ExponentSet,
    pub boundary: SquareBoundary,
    pub picard: PicardOptions,
    /// Central-difference step for the exact gradients.
    pub fd_step: f64,
}

impl Default for MmsOptions {
    fn default() -> Self {
        Self {
            exps: ExponentSet::planar(3.0, 2.0, 0.0),
            boundary: SquareBoundary::LeftNeumann,
            picard: PicardOptions {
                tol: 1e-11,
                ..PicardOptions::default()
            },
            fd_step: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MmsRow {
    pub level: usize,
    pub m: usize,
    pub h: f64,
    pub err_h1_theta: f64,
    pub err_l2_theta: f64,
    pub err_h1_phi: f64,
    pub err_l2_phi: f64,
    /// Smaller of the two fields' observed `H¹` rates against the previous level.
    pub rate_h1: Option<f64>,
    pub rate_l2: Option<f64>,
    pub outer_iterations: usize,
}

impl MmsRow {
    fn exact(&self) -> bool {
        [self.err_h1_theta, self.err_l2_theta, self.err_h1_phi, self.err_l2_phi]
            .iter()
            .all(|&e| e <= EXACT_FLOOR)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MmsTable {
    pub rows: Vec<MmsRow>,
    pub notes: Vec<String>,
}

impl MmsTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("level,h,err_h1_theta,err_l2_theta,err_h1_phi,err_l2_phi,rate_h1,rate_l2\n");
        let opt = |v: Option<f64>| v.map(fmt_sig17).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                r.level,
                fmt_sig17(r.h),
                fmt_sig17(r.err_h1_theta),
                fmt_sig17(r.err_l2_theta),
                fmt_sig17(r.err_h1_phi),
                fmt_sig17(r.err_l2_phi),
                opt(r.rate_h1),
                opt(r.rate_l2)
            );
        }
        s
    }

    /// Every refinement reaches the given rates, or reproduces the exact fields.
    pub fn meets(&self, min_h1: f64, min_l2: f64) -> bool {
        self.rows.iter().skip(1).all(|r| {
            r.exact() || (r.rate_h1.is_some_and(|v| v >= min_h1) && r.rate_l2.is_some_and(|v| v >= min_l2))
        })
    }
}

/// Mean of `e` over the mesh by the 7-point rule.
fn mean_over(mesh: &TriMesh, e: &Expr) -> f64 {
    let rule = dunavant7();
    let mut s = 0.0;
    for t in 0..mesh.num_triangles() {
        let pts = mesh.triangle_points(t);
        let local: f64 = rule
            .iter()
            .map(|&(l, w)| {
                let x = barycentric_point(&pts, l);
                w * e.eval(x[0], x[1])
            })
            .sum();
        s += mesh.triangle_area(t) * local;
    }
    s / mesh.area()
}

/// Problem data whose exact solution is `(θ*, φ* - c)`, `c` the mean of `φ*`
/// over `mesh`; returns the data and `c`.
pub fn manufactured_data(
    mesh: &TriMesh,
    coeffs: &CoefficientModel,
    exact_theta: &Expr,
    exact_phi: &Expr,
    opts: &MmsOptions,
) -> (ProblemData, f64) {
    let shift = mean_over(mesh, exact_phi);
    let (th, ph) = (Arc::new(exact_theta.clone()), Arc::new(exact_phi.clone()));
    let h = opts.fd_step;
    let ell = opts.exps.ell;

    let (c, t, p) = (coeffs.clone(), th.clone(), ph.clone());
    let thermal_flux = Arc::new(move |x: [f64; 2]| {
        let (tv, pv) = (t.eval(x[0], x[1]), p.eval(x[0], x[1]) - shift);
        let (gt, gp) = (t.gradient(x[0], x[1], h), p.gradient(x[0], x[1], h));
        let alpha = (c.alpha_s)(x, tv);
        let cond = (c.k)(x, tv).apply(gt);
        let w = [alpha * (tv + pv) * gt[0] + pv * gp[0], alpha * (tv + pv) * gt[1] + pv * gp[1]];
        let joule = (c.sigma)(x, tv).apply(w);
        [cond[0] + joule[0], cond[1] + joule[1]]
    });
    let (c, t) = (coeffs.clone(), th.clone());
    let thermal_gamma = Arc::new(move |x: [f64; 2]| {
        let tv = t.eval(x[0], x[1]);
        (c.f_lambda)(x, tv) * tv.abs().powf(ell - 2.0) * tv
    });
    let (c, t, p) = (coeffs.clone(), th, ph);
    let electric_flux = Arc::new(move |x: [f64; 2]| {
        let tv = t.eval(x[0], x[1]);
        let (gt, gp) = (t.gradient(x[0], x[1], h), p.gradient(x[0], x[1], h));
        let alpha = (c.alpha_s)(x, tv);
        (c.sigma)(x, tv).apply([gp[0] + alpha * gt[0], gp[1] + alpha * gt[1]])
    });

    let mut data = ProblemData::zero(opts.exps);
    data.extra = ExtraSources {
        thermal_flux: Some(thermal_flux),
        thermal_gamma: Some(thermal_gamma),
        electric_flux: Some(electric_flux),
    };
    (data, shift)
}

/// `(‖∇(u_h - u)‖₂, ‖u_h - u‖₂)` for the exact `u = e - shift`.
fn errors(mesh: &TriMesh, uh: &FieldP1, e: &Expr, shift: f64, fd_step: f64) -> (f64, f64) {
    let rule = dunavant7();
    let (mut h1, mut l2) = (0.0, 0.0);
    for t in 0..mesh.num_triangles() {
        let pts = mesh.triangle_points(t);
        let area = mesh.triangle_area(t);
        let g = uh.gradient(mesh, t);
        for &(l, w) in &rule {
            let x = barycentric_point(&pts, l);
            let d = uh.eval_bary(mesh, t, l) - (e.eval(x[0], x[1]) - shift);
            let ge = e.gradient(x[0], x[1], fd_step);
            l2 += area * w * d * d;
            h1 += area * w * ((g[0] - ge[0]).powi(2) + (g[1] - ge[1]).powi(2));
        }
    }
    (h1.sqrt(), l2.sqrt())
}

fn rate(prev: f64, cur: f64, h_prev: f64, h: f64) -> f64 {
    (prev / cur).ln() / (h_prev / h).ln()
}

/// Solves the manufactured problem on `unit_square_mesh(m)` for each `m` in
/// `levels` and tabulates errors and observed rates.
///
/// Non-monotone error decrease is recorded in the notes, not raised.
pub fn mms_convergence(
    coeffs: &CoefficientModel,
    exact_theta: &Expr,
    exact_phi: &Expr,
    levels: &[usize],
    opts: &MmsOptions,
) -> Result<MmsTable, VerifyError> {
    if levels.len() < 3 {
        return Err(VerifyError::Domain(format!("need at least 3 levels, got {}", levels.len())));
    }
    if levels[0] == 0 || levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(VerifyError::Domain(format!("levels must be positive and increasing, got {levels:?}")));
    }
    let mut rows: Vec<MmsRow> = Vec::with_capacity(levels.len());
    let mut notes = Vec::new();
    for (level, &m) in levels.iter().enumerate() {
        let mesh = unit_square_mesh(m, opts.boundary).map_err(|e| VerifyError::Domain(e.to_string()))?;
        let (data, shift) = manufactured_data(&mesh, coeffs, exact_theta, exact_phi, opts);
        let PicardResult { theta, phi, report } =
            picard_solve(&mesh, coeffs, &data, &FieldP1::zeros(&mesh), &opts.picard)?;
        let (err_h1_theta, err_l2_theta) = errors(&mesh, &theta, exact_theta, 0.0, opts.fd_step);
        let (err_h1_phi, err_l2_phi) = errors(&mesh, &phi, exact_phi, shift, opts.fd_step);
        let h = 1.0 / m as f64;
        let (rate_h1, rate_l2) = match rows.last() {
            Some(p) => {
                let r = |a: f64, b: f64| rate(a, b, p.h, h);
                if err_h1_theta > p.err_h1_theta || err_h1_phi > p.err_h1_phi {
                    notes.push(format!("H1 error did not decrease from m = {} to m = {m}", p.m));
                }
                if err_l2_theta > p.err_l2_theta || err_l2_phi > p.err_l2_phi {
                    notes.push(format!("L2 error did not decrease from m = {} to m = {m}", p.m));
                }
                (
                    Some(r(p.err_h1_theta, err_h1_theta).min(r(p.err_h1_phi, err_h1_phi))),
                    Some(r(p.err_l2_theta, err_l2_theta).min(r(p.err_l2_phi, err_l2_phi))),
                )
            }
            None => (None, None),
        };
        rows.push(MmsRow {
            level,
            m,
            h,
            err_h1_theta,
            err_l2_theta,
            err_h1_phi,
            err_l2_phi,
            rate_h1,
            rate_l2,
            outer_iterations: report.outer_iterations,
        });
    }
    Ok(MmsTable { rows, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::presets::constant_isotropic;

    #[test]
    fn linear_fields_are_reproduced() {
        let th = Expr::parse("1 + 0.5*x - 0.25*y").unwrap();
        let ph = Expr::parse("0.3*x + 0.7*y").unwrap();
        let t = mms_convergence(&constant_isotropic(), &th, &ph, &[2, 4, 8], &MmsOptions::default()).unwrap();
        for r in &t.rows {
            assert!(r.exact(), "{r:?}");
        }
        assert!(t.meets(0.9, 1.8));
        assert_eq!(t.to_csv().lines().count(), 4);
    }

    #[test]
    fn rejects_short_or_unsorted_levels() {
        let e = Expr::parse("x").unwrap();
        let o = MmsOptions::default();
        assert!(mms_convergence(&constant_isotropic(), &e, &e, &[4, 8], &o).is_err());
        assert!(mms_convergence(&constant_isotropic(), &e, &e, &[4, 8, 8], &o).is_err());
    }
}
