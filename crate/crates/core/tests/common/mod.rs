//! Independent re-evaluation of the closed-form constants.
//!
//! Gamma comes from the Stirling series after an upward shift instead of the
//! Lanczos sum used by the library, and every constant is written out from
//! its formula in log form where that is natural.

#![allow(dead_code)]

use std::f64::consts::PI;

use thermoflux::constants::{CoefficientBounds, ConstantsInputs};

/// `ln Γ(x)` for `x > 0` by Stirling's series at `x + 40`.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0);
    let shift = 40.0;
    let z = x + shift;
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))));
    let stirling = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series;
    let mut correction = 0.0;
    for k in 0..shift as usize {
        correction += (x + k as f64).ln();
    }
    stirling - correction
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

pub fn s_q(q: f64, n: f64) -> f64 {
    if q == 1.0 {
        return (-0.5 * PI.ln() - n.ln() + ln_gamma(1.0 + n / 2.0) / n).exp();
    }
    let ln_ratio = ln_gamma(1.0 + n / 2.0) + ln_gamma(n) - ln_gamma(n / q) - ln_gamma(1.0 + n - n / q);
    (-0.5 * PI.ln() - n.ln() / q + (1.0 - 1.0 / q) * ((q - 1.0) / (n - q)).ln() + ln_ratio / n).exp()
}

pub fn k_q(q: f64, n: f64) -> f64 {
    let a = q * (n - 1.0) / (2.0 * (q - 1.0));
    let b = (n - 1.0) / (2.0 * (q - 1.0));
    let ln = 0.5 * (1.0 - q) * PI.ln()
        + (q - 1.0) * ((q - 1.0) / (n - q)).ln()
        + (q - 1.0) / (n - 1.0) * (ln_gamma(a) - ln_gamma(b));
    ln.exp()
}

pub fn k_2n_over_n1(n: f64) -> f64 {
    ((ln_gamma(n) - (n - 1.0) * (PI.sqrt() * n).ln() - ln_gamma((n + 1.0) / 2.0)) / (n + 1.0)).exp()
}

pub fn p_sqrtn(q: f64, n: f64) -> f64 {
    if q == 1.0 {
        return 3.0 * s_q(1.0, 2.0);
    }
    s_q(q, n) * (1.0 + 2.0 * n.sqrt() * q * (PI / q).sin() * (q - 1.0).powf(-1.0 / q) / PI)
}

pub fn c_inf(p: f64, n: f64, vol: f64) -> f64 {
    let ln_omega = 0.5 * n * PI.ln() - ln_gamma(n / 2.0 + 1.0);
    let p_conj = p / (p - 1.0);
    (-n.ln() / p - ln_omega / n + ((p - 1.0) / (p - n)).ln() / p_conj + (1.0 / n - 1.0 / p) * vol.ln()).exp()
}

/// `(ϰ, λ)`
pub fn kappa_lambda(b: f64, p: f64, n: f64) -> (f64, f64) {
    let lambda = 2f64.powf(3.0 * n * p) * (b.powf(1.0 / p) + 1.0).powf(p);
    ((8f64.powf(n) + 1.0) * lambda, lambda)
}

pub fn z12(eps: f64, ups: f64, n: f64) -> (f64, f64) {
    let d = 4.0 - (n + 2.0) * (ups - 1.0) * eps;
    let f = 2f64.powf(n * (1.0 + eps / 2.0));
    (4.0 / d * f, ups * (4.0 + (n + 2.0) * eps) / d * f)
}

fn pq_n(n: f64) -> f64 {
    p_sqrtn(2.0 * n / (n + 2.0), n)
}

pub fn upsilon_i(b: &CoefficientBounds, nu3: f64, n: f64) -> f64 {
    let r = 2.0 * pq_n(n) * (2.0 / b.a_lo).sqrt() * (4.0 * b.a_hi.powi(2) / b.a_lo + 1.0 + nu3 / 2.0).sqrt() + 1.0;
    (8f64.powf(n) + 1.0) * 2f64.powf(6.0 * n) * r * r
}

pub fn upsilon_u(b: &CoefficientBounds, nu3: f64, n: f64) -> f64 {
    let r = 2.0 * pq_n(n) * (2.0 / b.a_lo).sqrt() * (8.0 * b.a_hi.powi(2) / b.a_lo + 2.0 + nu3 / 2.0).sqrt() + 1.0;
    (8f64.powf(n) + 1.0) * 2f64.powf(6.0 * n) * r * r
}

/// Reverse-Hölder constant behind `υ_U`.
pub fn b_boundary(b: &CoefficientBounds, nu3: f64, n: f64) -> f64 {
    8.0 / b.a_lo * (8.0 * b.a_hi.powi(2) / b.a_lo + 2.0 + nu3 / 2.0) * pq_n(n).powi(2)
}

pub fn upsilon(b: &CoefficientBounds) -> f64 {
    let worst = ((4.0 * b.sigma_hi.powi(2) + b.sigma_lo).sqrt() / b.sigma_lo)
        .max((4.0 * b.k_hi.powi(2) + b.k_lo).sqrt() / b.k_lo);
    let r = 6.0 * 2f64.sqrt() * s_q(1.0, 2.0) * worst + 1.0;
    65.0 * 2f64.powi(12) * r * r
}

/// `(𝒵, 𝒵₁, 𝒵₂)` at `(a, b)`.
pub fn zcal(a: f64, b: f64, p: f64, alpha: f64, vol: f64, meas_bd: f64) -> (f64, f64, f64) {
    let q = 2.0 * alpha / (alpha + 2.0);
    let e = alpha * (p - 2.0);
    let z = 2f64.powf((e + 2.0 * p) / (e - 2.0 * p))
        * (vol + meas_bd).powf((e - 2.0 * p) / (4.0 * p * alpha))
        * (s_q(q, 2.0) + k_q(q, 2.0));
    let va = vol.powf(1.0 / (2.0 * alpha));
    let z1 = (va / a + 1.0 / (a * b).sqrt()) * vol.powf((p - 2.0) / (4.0 * p)) * z;
    let z2 = (1.0 / b + va / (a * b).sqrt()) * z;
    (z, z1, z2)
}

#[derive(Debug, Clone, Copy)]
pub struct MFamily {
    pub m: [f64; 6],
    pub q0: f64,
    pub q1: f64,
}

/// `M₁ … M₆` and `𝒬(0)`, `𝒬(1)` for planar inputs.
pub fn m_family(inp: &ConstantsInputs) -> MFamily {
    let b = &inp.bounds;
    let (p, ell, vol) = (inp.exps.p, inp.exps.ell, inp.geom.vol_omega);
    let ups = upsilon(b);
    let den = (p - 1.0 - ups * (p - 2.0)).powf(1.0 / p);
    let r = inp.geom.r_sharp.powf(2.0 / p - 1.0);
    let f5 = 5f64.powf(1.0 / p);
    let p_conj = p / (p - 1.0);
    let ellc = ell / (ell - 1.0);
    let br1 = (1.0 + ups * (p - 1.0)).powf(1.0 / p);
    let br2 = (2f64.powf(3.0 * (p - 2.0) / 2.0) + ups * (p - 1.0)).powf(1.0 / p);
    let k_tr = k_q(2.0 * p / (2.0 * p - 1.0), 2.0);

    let m1 = 2f64.powf(1.5) * f5 * (vol.powf(1.0 / (2.0 * p_conj)) * k_tr * r + br1 * (1.0 + b.sigma_lo).sqrt())
        / (den * b.sigma_lo);
    let m2 = 2f64.powf(1.5) * f5 * b.sigma_hi * b.alpha_seebeck_hi
        * (vol.powf(0.5 - 1.0 / p) * r + br2 * (1.0 + b.sigma_lo).sqrt())
        / (den * b.sigma_lo);
    let m3 = 2.0 * f5 * 2f64.powf(2.0 - 3.0 / p) * r * b.gamma_hi.powf(ellc / 2.0)
        * b.b_lo.powf(-1.0 / (2.0 * (ell - 1.0)))
        / (den * b.k_lo.sqrt());
    let m4 = 2.0 * f5 * br1 * (2.0 / b.k_lo + 1.0).sqrt() / (den * b.k_lo.sqrt());
    let m5 = 2f64.powf(1.5) * f5 * (r * vol.powf(0.5 - 1.0 / p) + br2 * (1.0 + b.k_lo).sqrt()) / (den * b.k_lo);
    let m6 = b.alpha_seebeck_hi * (1.0 + m1 + m2) + (m1 + m2).powi(2);

    let ci = c_inf(p, 2.0, vol);
    let (_, z1, z2) = zcal(b.k_lo, b.b_lo, p, inp.exps.alpha, vol, inp.geom.meas_boundary);
    let te_l = inp.data.theta_e_ell_gamma;
    let te_p = inp.data.theta_e_lm1p_gamma.powf(ell - 1.0);
    let pre = 2f64.powf(ell - 2.0) * b.b_hi * m4 * inp.geom.meas_gamma.powf(1.0 / p);
    let q = |rr: f64| {
        m3 * te_l.powf(ell / 2.0)
            + m4 * b.gamma_hi * te_p
            + (b.gamma_hi / b.b_lo).powf(1.0 / (ell - 1.0)) * te_l
            + pre * (1.0 + z2 * b.gamma_hi * te_p).powf(ell - 1.0)
            + pre * (z1 * b.sigma_hi * ci * m6).powf(ell - 1.0) * rr.powf(2.0 * (ell - 1.0))
            + (ellc * vol.powf(1.0 - 2.0 / p) / (2.0 * b.b_lo * b.k_lo)).powf(1.0 / ell)
                * (b.sigma_hi * ci).powf(2.0 / ell)
                * m6.powf(2.0 / ell)
                * rr.powf(4.0 / ell)
            + ci * b.sigma_hi * m5 * m6 * rr * rr
    };
    MFamily {
        m: [m1, m2, m3, m4, m5, m6],
        q0: q(0.0),
        q1: q(1.0),
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}
