//! `L∞` constants, the `M₁ … M₆` family and the self-map bound `𝒬(R)`.

use serde::{Deserialize, Serialize};

use super::embedding::{morrey_constant, sobolev_constant, trace_constant};
use super::gehring::upsilon_thresholds;
use super::{domain, ConstantsError, ConstantsInputs, ExponentSet, GeometrySummary};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupessConstants {
    /// `𝒵`
    pub zcal: f64,
    /// `𝒵₁(a_#, b_#)`, multiplies `‖f‖_{p,Ω}`.
    pub zcal1: f64,
    /// `𝒵₂(a_#, b_#)`, multiplies `‖h‖_{p,Γ}`.
    pub zcal2: f64,
}

/// Constants of the `L∞` bound `ess sup |u| <= 1 + 𝒵₁‖f‖ + 𝒵₂‖h‖`.
pub fn supess_constants(
    a_lo: f64,
    b_lo: f64,
    exps: &ExponentSet,
    geom: &GeometrySummary,
) -> Result<SupessConstants, ConstantsError> {
    let (p, alpha, n) = (exps.p, exps.alpha, exps.n);
    if !(p > n as f64) {
        return Err(domain("supess_constants", format!("requires p > n, got p = {p}")));
    }
    if !(alpha > 2.0 * p / (p - 2.0)) || !alpha.is_finite() {
        return Err(domain(
            "supess_constants",
            format!("requires alpha > 2p/(p-2) = {}, got {alpha}", 2.0 * p / (p - 2.0)),
        ));
    }
    if !(a_lo > 0.0) || !(b_lo > 0.0) {
        return Err(domain("supess_constants", "requires a_# > 0 and b_# > 0"));
    }
    let q = 2.0 * alpha / (alpha + 2.0);
    let num = alpha * (p - 2.0) + 2.0 * p;
    let den = alpha * (p - 2.0) - 2.0 * p;
    let vol = geom.vol_omega;
    let zcal = 2f64.powf(num / den)
        * (vol + geom.meas_boundary).powf(den / (4.0 * p * alpha))
        * (sobolev_constant(q, n)? + trace_constant(q, n)?);
    let vol_a = vol.powf(1.0 / (2.0 * alpha));
    let root_ab = (a_lo * b_lo).sqrt();
    Ok(SupessConstants {
        zcal,
        zcal1: (vol_a / a_lo + 1.0 / root_ab) * vol.powf((p - 2.0) / (4.0 * p)) * zcal,
        zcal2: (1.0 / b_lo + vol_a / root_ab) * zcal,
    })
}

/// The `M` constants and the pieces of `𝒬(R)` that do not depend on `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallnessModel {
    pub upsilon: f64,
    pub p_max: f64,
    pub c_inf: f64,
    /// `K_{2p/(2p-1)}` by its formula.
    pub k_trace: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub m5: f64,
    pub m6: f64,
    /// `𝒵₁(k_#, b_#)`
    pub zcal1_k: f64,
    /// `𝒵₂(k_#, b_#)`
    pub zcal2_k: f64,
    /// `𝒬(0)`
    pub q_const: f64,
    /// Coefficient of `R^{2(ℓ-1)}`.
    pub q_coef_pow: f64,
    /// Coefficient of `R^{4/ℓ}`.
    pub q_coef_frac: f64,
    /// Coefficient of `R²`.
    pub q_coef_sq: f64,
    pub ell: f64,
    /// Whether `‖g‖_{p,Γ_N} < 1`.
    pub g_small: bool,
}

impl SmallnessModel {
    /// Evaluates the `M` family for planar inputs with `2 < p < p_max`.
    pub fn new(inputs: &ConstantsInputs) -> Result<Self, ConstantsError> {
        inputs.validate()?;
        let ConstantsInputs {
            bounds: b,
            exps,
            geom,
            data,
        } = inputs;
        if exps.n != 2 {
            return Err(domain("smallness_q", format!("only defined for n = 2, got {}", exps.n)));
        }
        let upsilon = upsilon_thresholds(b, exps.nu3, 2)?
            .coupled
            .expect("planar threshold");
        let p = exps.p;
        let ell = exps.ell;
        let p_max = 2.0 + 1.0 / (upsilon - 1.0);
        let gap = p - 1.0 - upsilon * (p - 2.0);
        if !(p > 2.0) || !(gap > 0.0) {
            return Err(domain(
                "smallness_q",
                format!("M constants need 2 < p < p_max = {p_max}, got p = {p}"),
            ));
        }
        let c_inf = morrey_constant(p, 2, geom.vol_omega)?;
        let k_trace = trace_constant(2.0 * p / (2.0 * p - 1.0), 2)?;

        let vol = geom.vol_omega;
        let r_pow = geom.r_sharp.powf(2.0 / p - 1.0);
        let five = 5f64.powf(1.0 / p);
        let gap_p = gap.powf(1.0 / p);
        let p_conj = p / (p - 1.0);
        let ell_conj = exps.ell_conj();
        let thomson_like = (2f64.powf(3.0 * (p - 2.0) / 2.0) + upsilon * (p - 1.0)).powf(1.0 / p);
        let plain = (1.0 + upsilon * (p - 1.0)).powf(1.0 / p);
        let sqrt8 = 2f64.powf(1.5);

        let m1 = sqrt8 * five
            * (vol.powf(1.0 / (2.0 * p_conj)) * k_trace * r_pow
                + plain * (1.0 + b.sigma_lo).sqrt())
            / (gap_p * b.sigma_lo);
        let m2 = sqrt8 * five * b.sigma_hi * b.alpha_seebeck_hi
            * (vol.powf(0.5 - 1.0 / p) * r_pow + thomson_like * (1.0 + b.sigma_lo).sqrt())
            / (gap_p * b.sigma_lo);
        let m3 = 2.0 * five
            * (2f64.powf(2.0 - 3.0 / p)
                * r_pow
                * b.gamma_hi.powf(ell_conj / 2.0)
                * b.b_lo.powf(-1.0 / (2.0 * (ell - 1.0))))
            / (gap_p * b.k_lo.sqrt());
        let m4 = 2.0 * five * plain * (2.0 / b.k_lo + 1.0).sqrt() / (gap_p * b.k_lo.sqrt());
        let m5 = sqrt8 * five
            * (r_pow * vol.powf(0.5 - 1.0 / p) + thomson_like * (1.0 + b.k_lo).sqrt())
            / (gap_p * b.k_lo);
        let m12 = m1 + m2;
        let m6 = b.alpha_seebeck_hi * (1.0 + m12) + m12 * m12;

        let sup = supess_constants(b.k_lo, b.b_lo, exps, geom)?;
        let te_ell = data.theta_e_ell_gamma;
        let te_lm1p_pow = data.theta_e_lm1p_gamma.powf(ell - 1.0);
        let gamma_term = 2f64.powf(ell - 2.0) * b.b_hi * m4 * geom.meas_gamma.powf(1.0 / p);

        let q_const = m3 * te_ell.powf(ell / 2.0)
            + m4 * b.gamma_hi * te_lm1p_pow
            + (b.gamma_hi / b.b_lo).powf(1.0 / (ell - 1.0)) * te_ell
            + gamma_term * (1.0 + sup.zcal2 * b.gamma_hi * te_lm1p_pow).powf(ell - 1.0);
        let q_coef_pow = gamma_term * (sup.zcal1 * b.sigma_hi * c_inf * m6).powf(ell - 1.0);
        let q_coef_frac = (ell_conj * vol.powf(1.0 - 2.0 / p) / (2.0 * b.b_lo * b.k_lo))
            .powf(1.0 / ell)
            * (b.sigma_hi * c_inf).powf(2.0 / ell)
            * m6.powf(2.0 / ell);
        let q_coef_sq = c_inf * b.sigma_hi * m5 * m6;

        let model = Self {
            upsilon,
            p_max,
            c_inf,
            k_trace,
            m1,
            m2,
            m3,
            m4,
            m5,
            m6,
            zcal1_k: sup.zcal1,
            zcal2_k: sup.zcal2,
            q_const,
            q_coef_pow,
            q_coef_frac,
            q_coef_sq,
            ell,
            g_small: data.g_p_gamma_n < 1.0,
        };
        let all = [m1, m2, m3, m4, m5, m6, q_const, q_coef_pow, q_coef_frac, q_coef_sq];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(domain("smallness_q", "non-finite constant in the M family"));
        }
        Ok(model)
    }

    /// `𝒬(R)` for `R >= 0`.
    pub fn q(&self, r: f64) -> f64 {
        let r = r.max(0.0);
        self.q_const
            + self.q_coef_pow * r.powf(2.0 * (self.ell - 1.0))
            + self.q_coef_frac * r.powf(4.0 / self.ell)
            + self.q_coef_sq * r * r
    }
}

/// `𝒬(R)` evaluated from scratch.
pub fn smallness_q(r: f64, inputs: &ConstantsInputs) -> Result<f64, ConstantsError> {
    if !(r >= 0.0) {
        return Err(domain("smallness_q", format!("requires R >= 0, got {r}")));
    }
    Ok(SmallnessModel::new(inputs)?.q(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BallRadius {
    /// `𝒬(R) = R` with `R < 1`.
    Found { radius: f64, residual: f64 },
    /// `𝒬(1) >= 1`: the smallness condition fails.
    NotSmall { q_at_one: f64 },
}

impl BallRadius {
    pub fn radius(&self) -> Option<f64> {
        match self {
            BallRadius::Found { radius, .. } => Some(*radius),
            BallRadius::NotSmall { .. } => None,
        }
    }
}

/// Root of `𝒬(R) - R` on `[0, 1]` by bisection, when `𝒬(1) < 1`.
pub fn find_ball_radius(q: impl Fn(f64) -> f64) -> BallRadius {
    let q_at_one = q(1.0);
    if !(q_at_one < 1.0) {
        return BallRadius::NotSmall { q_at_one };
    }
    let f = |r: f64| q(r) - r;
    if f(0.0) <= 0.0 {
        return BallRadius::Found {
            radius: 0.0,
            residual: f(0.0).abs(),
        };
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (radius, residual) = if f(lo).abs() <= f(hi).abs() {
        (lo, f(lo).abs())
    } else {
        (hi, f(hi).abs())
    };
    BallRadius::Found { radius, residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{CoefficientBounds, DataNorms};

    fn geom_unit() -> GeometrySummary {
        GeometrySummary {
            vol_omega: 1.0,
            meas_boundary: 4.0,
            meas_gamma: 2.0,
            meas_gamma_n: 2.0,
            diameter: 2f64.sqrt(),
            r_sharp: 0.05,
            r_sharp_heuristic: false,
        }
    }

    fn unit_inputs() -> ConstantsInputs {
        let upsilon = upsilon_thresholds(&CoefficientBounds::unit(), 0.0, 2)
            .unwrap()
            .coupled
            .unwrap();
        let p = 2.0 + 0.5 / (upsilon - 1.0);
        ConstantsInputs {
            bounds: CoefficientBounds::unit(),
            exps: ExponentSet::planar(p, 5.0, 0.0),
            geom: geom_unit(),
            data: DataNorms {
                g_p_gamma_n: 0.1,
                theta_e_ell_gamma: 0.2,
                theta_e_lm1p_gamma: 0.2,
            },
        }
    }

    #[test]
    fn constant_map_fixed_point() {
        match find_ball_radius(|_| 0.5) {
            BallRadius::Found { radius, residual } => {
                assert!((radius - 0.5).abs() < 1e-15);
                assert!(residual < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            find_ball_radius(|r| 1.0 + r),
            BallRadius::NotSmall { q_at_one: 2.0 }
        );
    }

    #[test]
    fn supess_monotone_in_a() {
        let exps = ExponentSet {
            alpha: 13.0,
            ..ExponentSet::planar(3.0, 5.0, 0.0)
        };
        let g = GeometrySummary {
            meas_boundary: 1.0,
            ..geom_unit()
        };
        let base = supess_constants(1.0, 1.0, &exps, &g).unwrap();
        let stiffer = supess_constants(1.5, 1.0, &exps, &g).unwrap();
        assert!(stiffer.zcal1 < base.zcal1);
        assert!(base.zcal > 0.0 && base.zcal1 > 0.0 && base.zcal2 > 0.0);
        let bad = ExponentSet {
            alpha: 6.0,
            ..exps
        };
        assert!(supess_constants(1.0, 1.0, &bad, &g).is_err());
    }

    #[test]
    fn unit_bounds_smallness_fails() {
        let inputs = unit_inputs();
        let model = SmallnessModel::new(&inputs).unwrap();
        assert!(model.q(0.0) > 0.0);
        assert!(model.q(1.0) >= 1.0);
        assert!(matches!(find_ball_radius(|r| model.q(r)), BallRadius::NotSmall { .. }));
        let mut prev = model.q(0.0);
        for i in 1..=100 {
            let cur = model.q(i as f64 / 100.0);
            assert!(cur >= prev);
            prev = cur;
        }
    }

    #[test]
    fn outside_regime_is_rejected() {
        let mut inputs = unit_inputs();
        inputs.exps = ExponentSet::planar(2.5, 5.0, 0.0);
        assert!(SmallnessModel::new(&inputs).is_err());
    }
}
