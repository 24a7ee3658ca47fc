//! Built-in coefficient sets and a reference small-data problem.

use std::sync::Arc;

use super::problem::ProblemData;
use super::CouplingError;
use crate::constants::{CoefficientBounds, ExponentSet};
use crate::fem::{CoefficientModel, Tensor2};
use crate::mesh::{unit_square_mesh, SquareBoundary, TriMesh};

/// Stefan–Boltzmann constant, W·m⁻²·K⁻⁴.
pub const STEFAN_BOLTZMANN: f64 = 5.67e-8;

pub const PRESET_NAMES: [&str; 4] = [
    "constant-isotropic",
    "bismuth-telluride-like",
    "discontinuous-checkerboard",
    "stefan-boltzmann",
];

pub fn preset(name: &str) -> Result<CoefficientModel, CouplingError> {
    match name {
        "constant-isotropic" => Ok(constant_isotropic()),
        "bismuth-telluride-like" => Ok(bismuth_telluride_like()),
        "discontinuous-checkerboard" => Ok(discontinuous_checkerboard()),
        "stefan-boltzmann" => Ok(stefan_boltzmann()),
        _ => Err(CouplingError::InvalidData(format!(
            "unknown coefficient preset `{name}`; available: {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

/// `k = σ = I`, `α_s = 0.05`, `f_λ = γ = 1`.
pub fn constant_isotropic() -> CoefficientModel {
    CoefficientModel::constant(1.0, 1.0, 0.05, 1.0, 1.0)
}

fn clamp_t(t: f64) -> f64 {
    t.clamp(200.0, 500.0)
}

/// Anisotropic, temperature dependent coefficients shaped like a
/// Bi₂Te₃ alloy around room temperature (SI units). The temperature
/// dependence is frozen outside `[200, 500]` K.
pub fn bismuth_telluride_like() -> CoefficientModel {
    let kxx = |t: f64| 1.2 + 1e-5 * (clamp_t(t) - 300.0).powi(2);
    let sxx = |t: f64| 1.1e5 * (300.0 / clamp_t(t)).powf(1.5);
    let emissivity = 0.85;
    CoefficientModel {
        name: "bismuth-telluride-like".into(),
        k: Arc::new(move |_, t| Tensor2::diag(kxx(t), 0.6 * kxx(t))),
        sigma: Arc::new(move |_, t| Tensor2::diag(sxx(t), 0.4 * sxx(t))),
        alpha_s: Arc::new(|_, t| 2.2e-4 - 1e-9 * (clamp_t(t) - 350.0).powi(2)),
        f_lambda: Arc::new(move |_, _| STEFAN_BOLTZMANN * emissivity),
        gamma: Arc::new(move |_, _| STEFAN_BOLTZMANN * emissivity),
        bounds: CoefficientBounds {
            a_lo: 0.72,
            a_hi: 1.6,
            k_lo: 0.72,
            k_hi: 1.6,
            sigma_lo: 2.0e4,
            sigma_hi: 2.03e5,
            alpha_seebeck_hi: 2.2e-4,
            b_lo: STEFAN_BOLTZMANN * emissivity,
            b_hi: STEFAN_BOLTZMANN * emissivity,
            gamma_hi: STEFAN_BOLTZMANN * emissivity,
        },
    }
}

fn black_cell(x: [f64; 2]) -> bool {
    let (i, j) = ((4.0 * x[0]).floor() as i64, (4.0 * x[1]).floor() as i64);
    (i + j).rem_euclid(2) == 0
}

/// Piecewise-constant coefficients on a 4×4 checkerboard of `[0,1]²`.
pub fn discontinuous_checkerboard() -> CoefficientModel {
    CoefficientModel {
        name: "discontinuous-checkerboard".into(),
        k: Arc::new(|x, _| if black_cell(x) { Tensor2::new(10.0, 2.0, 4.0) } else { Tensor2::iso(1.0) }),
        sigma: Arc::new(|x, _| if black_cell(x) { Tensor2::iso(5.0) } else { Tensor2::diag(1.0, 2.0) }),
        alpha_s: Arc::new(|x, _| if black_cell(x) { 0.05 } else { -0.02 }),
        f_lambda: Arc::new(|_, _| 1.0),
        gamma: Arc::new(|_, _| 1.0),
        bounds: CoefficientBounds {
            a_lo: 1.0,
            a_hi: 10.0,
            k_lo: 1.0,
            k_hi: 10.0,
            sigma_lo: 1.0,
            sigma_hi: 5.0,
            alpha_seebeck_hi: 0.05,
            b_lo: 1.0,
            b_hi: 1.0,
            gamma_hi: 1.0,
        },
    }
}

/// A weakly conducting radiating plate: `f_λ = σ_SB·ε(T)`, `γ = σ_SB·ε(T)`
/// with `ε(T) = 0.8 + 0.1 tanh((T-300)/100)`; meant for `ℓ = 5`.
pub fn stefan_boltzmann() -> CoefficientModel {
    let eps = |t: f64| 0.8 + 0.1 * ((t - 300.0) / 100.0).tanh();
    CoefficientModel {
        name: "stefan-boltzmann".into(),
        k: Arc::new(|_, _| Tensor2::iso(1.5)),
        sigma: Arc::new(|_, _| Tensor2::iso(10.0)),
        alpha_s: Arc::new(|_, _| 2.0e-4),
        f_lambda: Arc::new(move |_, t| STEFAN_BOLTZMANN * eps(t)),
        gamma: Arc::new(move |_, t| STEFAN_BOLTZMANN * eps(t)),
        bounds: CoefficientBounds {
            a_lo: 1.5,
            a_hi: 1.5,
            k_lo: 1.5,
            k_hi: 1.5,
            sigma_lo: 10.0,
            sigma_hi: 10.0,
            alpha_seebeck_hi: 2.0e-4,
            b_lo: STEFAN_BOLTZMANN * 0.7,
            b_hi: STEFAN_BOLTZMANN * 0.9,
            gamma_hi: STEFAN_BOLTZMANN * 0.9,
        },
    }
}

/// Reference small-data radiative problem on the unit square.
///
/// Left and right edges carry `g = 0.1(1-2x)`, top and bottom radiate
/// towards `θ_e = 1 + 0.2x` with `ℓ = 5`; coefficients are
/// [`constant_isotropic`].
pub fn small_data_problem(m: usize) -> (TriMesh, CoefficientModel, ProblemData) {
    let mesh = unit_square_mesh(m, SquareBoundary::LeftRightNeumann).expect("m >= 1");
    let data = ProblemData::new(
        |x| 0.1 * (1.0 - 2.0 * x[0]),
        |x| 1.0 + 0.2 * x[0],
        ExponentSet::planar(3.0, 5.0, 0.0),
    );
    (mesh, constant_isotropic(), data)
}

/// Isotropic, temperature-tabulated coefficients.
///
/// One row per line, `T k sigma alpha_s f_lambda gamma`; `#` starts a
/// comment. Values are interpolated linearly in `T` and held constant
/// outside the table. The bounds are the column extrema, which the
/// interpolant never leaves.
pub fn table_model(name: &str, text: &str) -> Result<CoefficientModel, CouplingError> {
    let bad = |line: usize, msg: String| CouplingError::InvalidData(format!("coefficient table line {line}: {msg}"));
    let mut rows: Vec<[f64; 6]> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| bad(i + 1, format!("{e}")))?;
        let row: [f64; 6] = vals
            .try_into()
            .map_err(|v: Vec<f64>| bad(i + 1, format!("expected 6 columns, got {}", v.len())))?;
        if row.iter().any(|v| !v.is_finite()) || row[1] <= 0.0 || row[2] <= 0.0 || row[4] <= 0.0 {
            return Err(bad(i + 1, "values must be finite with k, sigma, f_lambda > 0".into()));
        }
        if rows.last().is_some_and(|r| r[0] >= row[0]) {
            return Err(bad(i + 1, "temperatures must increase".into()));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CouplingError::InvalidData("coefficient table is empty".into()));
    }
    let lo = |c: usize| rows.iter().map(|r| r[c]).fold(f64::INFINITY, f64::min);
    let hi = |c: usize| rows.iter().map(|r| r[c].abs()).fold(0.0, f64::max);
    let bounds = CoefficientBounds {
        a_lo: lo(1).min(lo(2)),
        a_hi: hi(1).max(hi(2)),
        k_lo: lo(1),
        k_hi: hi(1),
        sigma_lo: lo(2),
        sigma_hi: hi(2),
        alpha_seebeck_hi: hi(3),
        b_lo: lo(4),
        b_hi: hi(4),
        gamma_hi: hi(5),
    };
    let rows = Arc::new(rows);
    let col = |c: usize| {
        let rows = rows.clone();
        move |t: f64| {
            let i = rows.partition_point(|r| r[0] <= t);
            if i == 0 {
                return rows[0][c];
            }
            if i == rows.len() {
                return rows[i - 1][c];
            }
            let (a, b) = (&rows[i - 1], &rows[i]);
            let s = (t - a[0]) / (b[0] - a[0]);
            (1.0 - s) * a[c] + s * b[c]
        }
    };
    let (k, sigma, alpha, fl, gamma) = (col(1), col(2), col(3), col(4), col(5));
    Ok(CoefficientModel {
        name: name.into(),
        k: Arc::new(move |_, t| Tensor2::iso(k(t))),
        sigma: Arc::new(move |_, t| Tensor2::iso(sigma(t))),
        alpha_s: Arc::new(move |_, t| alpha(t)),
        f_lambda: Arc::new(move |_, t| fl(t)),
        gamma: Arc::new(move |_, t| gamma(t)),
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_respect_their_bounds() {
        let mut pts = Vec::new();
        for i in 0..9 {
            for j in 0..9 {
                pts.push([i as f64 / 8.0 + 0.01, j as f64 / 8.0 + 0.01]);
            }
        }
        let temps = [-50.0, 0.0, 1.0, 150.0, 250.0, 300.0, 350.0, 450.0, 700.0];
        for name in PRESET_NAMES {
            let c = preset(name).unwrap();
            c.validate_sampled(&pts, &temps).unwrap_or_else(|e| panic!("{name}: {e}"));
            c.bounds.validate().unwrap();
        }
        assert!(preset("nope").is_err());
    }

    #[test]
    fn table_interpolates_and_clamps() {
        let t = table_model("t", "# T k sigma alpha f gamma\n100 1 2 0.1 1 1\n200 3 2 -0.3 2 1\n").unwrap();
        assert_eq!((t.k)([0.0, 0.0], 150.0), Tensor2::iso(2.0));
        assert_eq!((t.k)([0.0, 0.0], 0.0), Tensor2::iso(1.0));
        assert_eq!((t.alpha_s)([0.0, 0.0], 500.0), -0.3);
        assert_eq!((t.bounds.k_lo, t.bounds.k_hi, t.bounds.alpha_seebeck_hi), (1.0, 3.0, 0.3));
        t.validate_sampled(&[[0.5, 0.5]], &[0.0, 120.0, 170.0, 900.0]).unwrap();
        assert!(table_model("t", "100 1 2 0.1 1\n").is_err());
        assert!(table_model("t", "100 1 2 0.1 1 1\n50 1 2 0.1 1 1\n").is_err());
        assert!(table_model("t", "").is_err());
    }

    #[test]
    fn checkerboard_is_discontinuous() {
        let c = discontinuous_checkerboard();
        assert_ne!((c.k)([0.1, 0.1], 0.0), (c.k)([0.3, 0.1], 0.0));
    }
}
