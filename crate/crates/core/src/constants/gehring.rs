//! Reverse-Hölder constants, higher-integrability thresholds and the
//! `Z₁`, `Z₂` factors of the global gradient estimate.

use serde::{Deserialize, Serialize};

use super::embedding::{poincare_product_constant, sobolev_constant};
use super::{domain, CoefficientBounds, ConstantsError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GehringConstants {
    /// `ϰ = (8ⁿ+1)·λ`
    pub kappa: f64,
    /// `λ = 2^{3np}(B^{1/p}+1)^p`
    pub lambda: f64,
}

/// Constants of the Gehring-type lemma for a reverse-Hölder constant `b`.
pub fn gehring_kappa(b: f64, p: f64, n: usize) -> Result<GehringConstants, ConstantsError> {
    if !(b >= 0.0) || !b.is_finite() {
        return Err(domain("gehring_kappa", format!("requires B >= 0, got {b}")));
    }
    if !(p > 1.0) {
        return Err(domain("gehring_kappa", format!("requires p > 1, got {p}")));
    }
    let nf = n as f64;
    let lambda = 2f64.powf(3.0 * nf * p) * (b.powf(1.0 / p) + 1.0).powf(p);
    Ok(GehringConstants {
        kappa: (8f64.powf(nf) + 1.0) * lambda,
        lambda,
    })
}

/// Upper end of the admissible range `ε < 4/((n+2)(υ-1))`.
pub fn eps_pole(upsilon: f64, n: usize) -> f64 {
    if upsilon > 1.0 {
        4.0 / ((n as f64 + 2.0) * (upsilon - 1.0))
    } else {
        f64::INFINITY
    }
}

/// `(Z₁(υ), Z₂(υ))` at integrability margin `eps`.
pub fn z_factors(eps: f64, upsilon: f64, n: usize) -> Result<(f64, f64), ConstantsError> {
    let pole = eps_pole(upsilon, n);
    if !(eps >= 0.0) || eps >= pole {
        return Err(domain(
            "z_factors",
            format!("requires 0 <= eps < {pole}, got {eps}"),
        ));
    }
    let nf = n as f64;
    let denom = 4.0 - (nf + 2.0) * (upsilon - 1.0) * eps;
    let scale = 2f64.powf(nf * (1.0 + eps / 2.0));
    let z1 = 4.0 / denom * scale;
    let z2 = upsilon * (4.0 + (nf + 2.0) * eps) / denom * scale;
    Ok((z1, z2))
}

/// Exponent thresholds of the higher-integrability results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpsilonThresholds {
    /// `υ_I`, interior estimate.
    pub interior: f64,
    /// `υ_U`, estimate up to the boundary.
    pub boundary: f64,
    /// `υ` of the coupled existence result; only defined in the plane.
    pub coupled: Option<f64>,
    /// Reverse-Hölder constant behind `υ_I`.
    pub b_interior: f64,
    /// Reverse-Hölder constant behind `υ_U`.
    pub b_boundary: f64,
}

/// Thresholds for the generic tensor pair `(a_#, a^#)` of `bounds`.
///
/// The interior and boundary variants differ in the inner bracket
/// (`4(a^#)²/a_# + 1` against `8(a^#)²/a_# + 2`); both are kept as is.
pub fn upsilon_thresholds(
    bounds: &CoefficientBounds,
    nu3: f64,
    n: usize,
) -> Result<UpsilonThresholds, ConstantsError> {
    bounds.validate()?;
    if !(nu3 >= 0.0) {
        return Err(domain("upsilon_thresholds", format!("requires nu3 >= 0, got {nu3}")));
    }
    let nf = n as f64;
    let p_const = poincare_product_constant(2.0 * nf / (nf + 2.0), n)?;
    let (a_lo, a_hi) = (bounds.a_lo, bounds.a_hi);
    let prefactor = (8f64.powf(nf) + 1.0) * 2f64.powf(6.0 * nf);
    let threshold = |inner: f64| {
        let root = 2.0 * p_const * (2.0 / a_lo).sqrt() * inner.sqrt() + 1.0;
        prefactor * root * root
    };
    let inner_i = 4.0 * a_hi * a_hi / a_lo + 1.0 + nu3 / 2.0;
    let inner_u = 8.0 * a_hi * a_hi / a_lo + 2.0 + nu3 / 2.0;
    let coupled = if n == 2 {
        let s1 = sobolev_constant(1.0, 2)?;
        let ratio = |lo: f64, hi: f64| (4.0 * hi * hi + lo).sqrt() / lo;
        let worst = ratio(bounds.sigma_lo, bounds.sigma_hi).max(ratio(bounds.k_lo, bounds.k_hi));
        let root = 6.0 * 2f64.sqrt() * s1 * worst + 1.0;
        Some(65.0 * 4096.0 * root * root)
    } else {
        None
    };
    Ok(UpsilonThresholds {
        interior: threshold(inner_i),
        boundary: threshold(inner_u),
        coupled,
        b_interior: 8.0 / a_lo * inner_i * p_const * p_const,
        b_boundary: 8.0 / a_lo * inner_u * p_const * p_const,
    })
}
