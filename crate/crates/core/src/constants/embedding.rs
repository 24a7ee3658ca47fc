//! Sobolev, trace, Morrey and Poincaré constants.

use std::f64::consts::PI;

use super::gamma::{gamma_fn, ln_gamma};
use super::{domain, ConstantsError};

/// Best constant `S_q` of `W^{1,q} ↪ L^{q*}` in dimension `n`.
///
/// `q = 1` returns the limit constant `π^{-1/2} n^{-1} Γ(1+n/2)^{1/n}`.
pub fn sobolev_constant(q: f64, n: usize) -> Result<f64, ConstantsError> {
    let nf = n as f64;
    if !(q >= 1.0) || !q.is_finite() || q >= nf {
        return Err(domain(
            "sobolev_constant",
            format!("requires 1 <= q < n, got q = {q}, n = {n}"),
        ));
    }
    if q == 1.0 {
        return Ok(PI.powf(-0.5) / nf * gamma_fn(1.0 + nf / 2.0)?.powf(1.0 / nf));
    }
    let ratio = gamma_fn(1.0 + nf / 2.0)? * gamma_fn(nf)?
        / (gamma_fn(nf / q)? * gamma_fn(1.0 + nf - nf / q)?);
    Ok(PI.powf(-0.5)
        * nf.powf(-1.0 / q)
        * ((q - 1.0) / (nf - q)).powf(1.0 - 1.0 / q)
        * ratio.powf(1.0 / nf))
}

/// Best constant `K_q` of the trace embedding `W^{1,q} ↪ L^{q_*}(∂Ω)`, `1 < q < n`.
pub fn trace_constant(q: f64, n: usize) -> Result<f64, ConstantsError> {
    let nf = n as f64;
    if !(q > 1.0) || !q.is_finite() || q >= nf {
        return Err(domain(
            "trace_constant",
            format!("requires 1 < q < n, got q = {q}, n = {n}"),
        ));
    }
    let qm1 = q - 1.0;
    // arguments grow like 1/(q-1); take the ratio through logs
    let ln_ratio = ln_gamma(q * (nf - 1.0) / (2.0 * qm1))? - ln_gamma((nf - 1.0) / (2.0 * qm1))?;
    Ok(PI.powf((1.0 - q) / 2.0)
        * (qm1 / (nf - q)).powf(qm1)
        * (ln_ratio * qm1 / (nf - 1.0)).exp())
}

/// Closed form of `K_{2n/(n+1)}`.
pub fn trace_constant_2n_over_n1(n: usize) -> Result<f64, ConstantsError> {
    if n < 2 {
        return Err(domain("trace_constant_2n_over_n1", format!("requires n >= 2, got {n}")));
    }
    let nf = n as f64;
    let e = 1.0 / (nf + 1.0);
    Ok(gamma_fn(nf)?.powf(e)
        * ((PI.sqrt() * nf).powf(nf - 1.0) * gamma_fn((nf + 1.0) / 2.0)?).powf(-e))
}

/// `P_{√n,q}`, the constant of the localized mean-oscillation estimate on cubes.
pub fn poincare_product_constant(q: f64, n: usize) -> Result<f64, ConstantsError> {
    if q == 1.0 {
        if n == 2 {
            return Ok(3.0 * sobolev_constant(1.0, 2)?);
        }
        return Err(domain(
            "poincare_product_constant",
            format!("q = 1 is only available for n = 2, got n = {n}"),
        ));
    }
    if !(q > 1.0) {
        return Err(domain(
            "poincare_product_constant",
            format!("requires q >= 1, got {q}"),
        ));
    }
    let sq = sobolev_constant(q, n)?;
    let nf = n as f64;
    Ok(sq * (1.0 + 2.0 * nf.sqrt() * q * (PI / q).sin() * (q - 1.0).powf(-1.0 / q) / PI))
}

/// Continuity constant of `W^{1,p} ↪ L^∞` for `p > n` on a domain of volume `vol`.
pub fn morrey_constant(p: f64, n: usize, vol: f64) -> Result<f64, ConstantsError> {
    let nf = n as f64;
    if !(p > nf) || !p.is_finite() {
        return Err(domain("morrey_constant", format!("requires p > n, got p = {p}, n = {n}")));
    }
    if !(vol > 0.0) {
        return Err(domain("morrey_constant", format!("volume must be positive, got {vol}")));
    }
    let omega_n = PI.powf(nf / 2.0) / gamma_fn(nf / 2.0 + 1.0)?;
    let p_conj = p / (p - 1.0);
    Ok(nf.powf(-1.0 / p)
        * omega_n.powf(-1.0 / nf)
        * ((p - 1.0) / (p - nf)).powf(1.0 / p_conj)
        * vol.powf(1.0 / nf - 1.0 / p))
}

/// Poincaré bound for a convex domain of diameter `d`.
pub fn convex_poincare_constant(q: f64, diameter: f64) -> Result<f64, ConstantsError> {
    if !(q >= 1.0) || !(diameter > 0.0) {
        return Err(domain(
            "convex_poincare_constant",
            format!("requires q >= 1 and d > 0, got q = {q}, d = {diameter}"),
        ));
    }
    if q == 1.0 {
        return Ok(diameter / 2.0);
    }
    Ok(diameter * q * (PI / q).sin() * (q - 1.0).powf(-1.0 / q) / (2.0 * PI))
}

fn ell_factor(
    q: f64,
    n: usize,
    poincare: f64,
    meas_gamma: f64,
    ell: f64,
) -> Result<f64, ConstantsError> {
    if !(meas_gamma > 0.0) {
        return Err(domain("ell_factor", "requires |Γ| > 0"));
    }
    let a = 1.0 + poincare * 2f64.powf((n as f64 - 1.0) * (1.0 - 1.0 / q));
    let b = poincare * meas_gamma.powf(1.0 / q - 1.0 / ell);
    Ok(a.max(b))
}

/// `S_{q,ℓ}`: Sobolev constant relative to the `‖·‖_{1,q,ℓ}` norm.
pub fn sobolev_constant_ell(
    q: f64,
    n: usize,
    poincare: f64,
    meas_gamma: f64,
    ell: f64,
) -> Result<f64, ConstantsError> {
    Ok(sobolev_constant(q, n)? * ell_factor(q, n, poincare, meas_gamma, ell)?)
}

/// `K_{q,ℓ}`: trace constant relative to the `‖·‖_{1,q,ℓ}` norm.
pub fn trace_constant_ell(
    q: f64,
    n: usize,
    poincare: f64,
    meas_gamma: f64,
    ell: f64,
) -> Result<f64, ConstantsError> {
    Ok(trace_constant(q, n)? * ell_factor(q, n, poincare, meas_gamma, ell)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn sobolev_limit_constant() {
        assert!(rel(sobolev_constant(1.0, 2).unwrap(), 0.282_094_791_773_878_1) < 1e-13);
        // π^{-1/2}·(1/3)·Γ(5/2)^{1/3}
        let expected = PI.powf(-0.5) / 3.0 * (0.75 * PI.sqrt()).powf(1.0 / 3.0);
        assert!(rel(sobolev_constant(1.0, 3).unwrap(), expected) < 1e-13);
        assert!(sobolev_constant(2.0, 2).is_err());
        assert!(sobolev_constant(0.5, 2).is_err());
    }

    #[test]
    fn sobolev_two_n_over_n_plus_two_closed_form() {
        // S_{2n/(n+2)} = π^{-1/2} n^{(2-3n)/(2n)} (n-2)^{(n-2)/(2n)} [Γ(n)/Γ(n/2)]^{1/n}
        for n in [3usize, 4, 5] {
            let nf = n as f64;
            let closed = PI.powf(-0.5)
                * nf.powf((2.0 - 3.0 * nf) / (2.0 * nf))
                * (nf - 2.0).powf((nf - 2.0) / (2.0 * nf))
                * (gamma_fn(nf).unwrap() / gamma_fn(nf / 2.0).unwrap()).powf(1.0 / nf);
            let q = 2.0 * nf / (nf + 2.0);
            assert!(rel(sobolev_constant(q, n).unwrap(), closed) < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn trace_four_thirds() {
        let k = trace_constant(4.0 / 3.0, 2).unwrap();
        assert!(rel(k, PI.powf(-1.0 / 3.0)) < 1e-12);
        assert!(rel(trace_constant_2n_over_n1(2).unwrap(), k) < 1e-12);
        assert!(trace_constant(1.0, 2).is_err());
        assert!(trace_constant(2.0, 2).is_err());
    }

    #[test]
    fn trace_closed_form_matches_general_in_3d() {
        let general = trace_constant(1.5, 3).unwrap();
        assert!(rel(trace_constant_2n_over_n1(3).unwrap(), general) < 1e-12);
    }

    #[test]
    fn poincare_product() {
        let s1 = sobolev_constant(1.0, 2).unwrap();
        assert!(rel(poincare_product_constant(1.0, 2).unwrap(), 3.0 * s1) < 1e-15);
        assert!(poincare_product_constant(1.0, 3).is_err());
        // S_2 does not exist in the plane, so q = 2 is only valid from n = 3 on
        assert!(poincare_product_constant(2.0, 2).is_err());
        let s2 = sobolev_constant(2.0, 3).unwrap();
        let expected = s2 * (1.0 + 4.0 * 3f64.sqrt() / PI);
        assert!(rel(poincare_product_constant(2.0, 3).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn morrey() {
        let c = morrey_constant(3.0, 2, 1.0).unwrap();
        assert!(rel(c, 2f64.powf(1.0 / 3.0) / PI.sqrt()) < 1e-13);
        let c2 = morrey_constant(3.0, 2, 2.0).unwrap();
        assert!(rel(c2 / c, 2f64.powf(1.0 / 6.0)) < 1e-13);
        assert!(morrey_constant(2.0, 2, 1.0).is_err());
    }

    #[test]
    fn convex_poincare_is_continuous_at_one() {
        let d = 1.7;
        let at_one = convex_poincare_constant(1.0, d).unwrap();
        let near = convex_poincare_constant(1.0 + 1e-9, d).unwrap();
        assert!(rel(near, at_one) < 1e-6);
        // q = 2: d·2·1·1/(2π) = d/π
        assert!(rel(convex_poincare_constant(2.0, d).unwrap(), d / PI) < 1e-15);
    }
}
