//! The assembled constants report and its text/JSON forms.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::embedding::{
    morrey_constant, poincare_product_constant, sobolev_constant, trace_constant,
    trace_constant_2n_over_n1,
};
use super::gehring::{eps_pole, gehring_kappa, upsilon_thresholds, z_factors};
use super::smallness::{find_ball_radius, supess_constants, BallRadius, SmallnessModel};
use super::{ConstantsError, ConstantsInputs};

/// Relative difference above which a quoted special value counts as a mismatch.
pub const MISMATCH_REL_TOL: f64 = 1e-9;

/// A formula value next to a separately quoted closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialValueCheck {
    pub name: String,
    pub formula_value: f64,
    pub quoted_value: f64,
    pub rel_diff: f64,
    pub mismatch: bool,
}

impl SpecialValueCheck {
    pub fn new(name: &str, formula_value: f64, quoted_value: f64) -> Self {
        let rel_diff = ((formula_value - quoted_value) / formula_value).abs();
        Self {
            name: name.to_owned(),
            formula_value,
            quoted_value,
            rel_diff,
            mismatch: rel_diff > MISMATCH_REL_TOL,
        }
    }
}

/// One value in the flat report.
#[derive(Debug, Clone, PartialEq)]
pub enum ReportValue {
    Number(f64),
    Flag(bool),
    Text(String),
    Missing,
}

impl From<f64> for ReportValue {
    fn from(v: f64) -> Self {
        ReportValue::Number(v)
    }
}

impl From<Option<f64>> for ReportValue {
    fn from(v: Option<f64>) -> Self {
        v.map_or(ReportValue::Missing, ReportValue::Number)
    }
}

impl From<bool> for ReportValue {
    fn from(v: bool) -> Self {
        ReportValue::Flag(v)
    }
}

/// Formats with 17 significant digits.
pub fn fmt_sig17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub inputs: ConstantsInputs,
    /// Exponent `2α/(α+2)` at which `S_q`, `K_q` of the `L∞` bound are taken.
    pub q_embedding: Option<f64>,
    pub s_q: Option<f64>,
    pub k_q: Option<f64>,
    pub s_1: f64,
    pub k_2n_over_n1: f64,
    /// `P_{√n, 2n/(n+2)}`
    pub p_sqrtn_q: f64,
    pub c_inf: Option<f64>,
    /// `ϰ` for the boundary reverse-Hölder constant at `p = 2`.
    pub kappa: f64,
    pub lambda: f64,
    pub upsilon_i: f64,
    pub upsilon_u: f64,
    pub upsilon: Option<f64>,
    pub eps_max: f64,
    /// Margin at which `Z₁`, `Z₂` are reported (half of `eps_max`).
    pub eps_audit: f64,
    pub z1: f64,
    pub z2: f64,
    pub p_max: Option<f64>,
    pub zcal: Option<f64>,
    pub zcal1: Option<f64>,
    pub zcal2: Option<f64>,
    pub smallness: Option<SmallnessModel>,
    pub q0: Option<f64>,
    pub q1: Option<f64>,
    pub ball: Option<BallRadius>,
    pub s1_check: Option<SpecialValueCheck>,
    pub k43_check: SpecialValueCheck,
    pub warnings: Vec<String>,
}

impl ConstantsReport {
    /// Evaluates every constant that the inputs admit.
    ///
    /// Invalid inputs are errors. Constants outside their range of definition
    /// (e.g. `p <= n` for the Morrey constant, `p >= p_max` for `𝒬`) are left
    /// empty and recorded in `warnings`.
    pub fn evaluate(inputs: &ConstantsInputs) -> Result<Self, ConstantsError> {
        inputs.validate()?;
        let ConstantsInputs {
            bounds, exps, geom, ..
        } = inputs;
        let n = exps.n;
        let nf = n as f64;
        let mut warnings = Vec::new();

        let s_1 = sobolev_constant(1.0, n)?;
        let k_2n_over_n1 = trace_constant_2n_over_n1(n)?;
        let p_sqrtn_q = poincare_product_constant(2.0 * nf / (nf + 2.0), n)?;
        let thresholds = upsilon_thresholds(bounds, exps.nu3, n)?;
        let gehring = gehring_kappa(thresholds.b_boundary, 2.0, n)?;
        let eps_max = exps.delta.min(eps_pole(thresholds.boundary, n));
        let eps_audit = 0.5 * eps_max;
        let (z1, z2) = z_factors(eps_audit, thresholds.boundary, n)?;
        let p_max = thresholds.coupled.map(|u| 2.0 + 1.0 / (u - 1.0));

        let mut note = |r: Result<f64, ConstantsError>| match r {
            Ok(v) => Some(v),
            Err(e) => {
                warnings.push(e.to_string());
                None
            }
        };
        let c_inf = note(morrey_constant(exps.p, n, geom.vol_omega));
        let (q_embedding, s_q, k_q) = if exps.alpha.is_finite() {
            let q = 2.0 * exps.alpha / (exps.alpha + 2.0);
            (Some(q), note(sobolev_constant(q, n)), note(trace_constant(q, n)))
        } else {
            (None, None, None)
        };
        let (zcal, zcal1, zcal2) = match supess_constants(bounds.a_lo, bounds.b_lo, exps, geom) {
            Ok(s) => (Some(s.zcal), Some(s.zcal1), Some(s.zcal2)),
            Err(e) => {
                warnings.push(e.to_string());
                (None, None, None)
            }
        };
        let smallness = match SmallnessModel::new(inputs) {
            Ok(m) => Some(m),
            Err(e) => {
                warnings.push(e.to_string());
                None
            }
        };
        let q0 = smallness.map(|m| m.q(0.0));
        let q1 = smallness.map(|m| m.q(1.0));
        let ball = smallness.map(|m| find_ball_radius(|r| m.q(r)));
        if let Some(m) = &smallness {
            if !m.g_small {
                warnings.push(format!(
                    "Neumann data smallness fails: ‖g‖_p = {} >= 1",
                    inputs.data.g_p_gamma_n
                ));
            }
        }

        let s1_check = (n == 2).then(|| {
            SpecialValueCheck::new("S_1", s_1, PI.powf(-0.25) * 2f64.powf(-1.5))
        });
        let k43_check = SpecialValueCheck::new("K_4/3", trace_constant(4.0 / 3.0, 2)?, 1.0 / PI);

        Ok(Self {
            inputs: *inputs,
            q_embedding,
            s_q,
            k_q,
            s_1,
            k_2n_over_n1,
            p_sqrtn_q,
            c_inf,
            kappa: gehring.kappa,
            lambda: gehring.lambda,
            upsilon_i: thresholds.interior,
            upsilon_u: thresholds.boundary,
            upsilon: thresholds.coupled,
            eps_max,
            eps_audit,
            z1,
            z2,
            p_max,
            zcal,
            zcal1,
            zcal2,
            smallness,
            q0,
            q1,
            ball,
            s1_check,
            k43_check,
            warnings,
        })
    }

    /// `𝒬(1) < 1`, when `𝒬` is evaluable.
    pub fn smallness_holds(&self) -> Option<bool> {
        self.q1.map(|q| q < 1.0)
    }

    /// Ordered `(name, value)` pairs shared by the text and JSON forms.
    pub fn entries(&self) -> Vec<(String, ReportValue)> {
        let i = &self.inputs;
        let mut out: Vec<(String, ReportValue)> = Vec::new();
        let mut put = |k: &str, v: ReportValue| out.push((k.to_owned(), v));
        put("n", (i.exps.n as f64).into());
        put("p", i.exps.p.into());
        put("ell", i.exps.ell.into());
        put("delta", i.exps.delta.into());
        put("s", i.exps.s.into());
        put("alpha", i.exps.alpha.into());
        put("nu3", i.exps.nu3.into());
        put("a_lo", i.bounds.a_lo.into());
        put("a_hi", i.bounds.a_hi.into());
        put("k_lo", i.bounds.k_lo.into());
        put("k_hi", i.bounds.k_hi.into());
        put("sigma_lo", i.bounds.sigma_lo.into());
        put("sigma_hi", i.bounds.sigma_hi.into());
        put("alpha_seebeck_hi", i.bounds.alpha_seebeck_hi.into());
        put("b_lo", i.bounds.b_lo.into());
        put("b_hi", i.bounds.b_hi.into());
        put("gamma_hi", i.bounds.gamma_hi.into());
        put("vol_omega", i.geom.vol_omega.into());
        put("meas_boundary", i.geom.meas_boundary.into());
        put("meas_gamma", i.geom.meas_gamma.into());
        put("meas_gamma_n", i.geom.meas_gamma_n.into());
        put("diameter", i.geom.diameter.into());
        put("r_sharp", i.geom.r_sharp.into());
        put("r_sharp_heuristic", i.geom.r_sharp_heuristic.into());
        put("g_norm_p_gamma_n", i.data.g_p_gamma_n.into());
        put("theta_e_norm_ell_gamma", i.data.theta_e_ell_gamma.into());
        put("theta_e_norm_lm1p_gamma", i.data.theta_e_lm1p_gamma.into());

        put("q_embedding", self.q_embedding.into());
        put("S_q", self.s_q.into());
        put("K_q", self.k_q.into());
        put("S_1", self.s_1.into());
        put("K_2n_over_n1", self.k_2n_over_n1.into());
        put("P_sqrtn_q", self.p_sqrtn_q.into());
        put("C_inf", self.c_inf.into());
        put("kappa", self.kappa.into());
        put("lambda", self.lambda.into());
        put("upsilon_I", self.upsilon_i.into());
        put("upsilon_U", self.upsilon_u.into());
        put("upsilon", self.upsilon.into());
        put("eps_max", self.eps_max.into());
        put("eps_audit", self.eps_audit.into());
        put("Z1", self.z1.into());
        put("Z2", self.z2.into());
        put("p_max", self.p_max.into());
        put("p_max_minus_2", self.upsilon.map(|u| 1.0 / (u - 1.0)).into());
        put("Zcal", self.zcal.into());
        put("Zcal1", self.zcal1.into());
        put("Zcal2", self.zcal2.into());
        let m = self.smallness;
        put("K_2p_over_2p1", m.map(|m| m.k_trace).into());
        put("M1", m.map(|m| m.m1).into());
        put("M2", m.map(|m| m.m2).into());
        put("M3", m.map(|m| m.m3).into());
        put("M4", m.map(|m| m.m4).into());
        put("M5", m.map(|m| m.m5).into());
        put("M6", m.map(|m| m.m6).into());
        put("Zcal1_k", m.map(|m| m.zcal1_k).into());
        put("Zcal2_k", m.map(|m| m.zcal2_k).into());
        put("Q0", self.q0.into());
        put("Q1", self.q1.into());
        match self.smallness_holds() {
            Some(b) => put("smallness_holds", b.into()),
            None => put("smallness_holds", ReportValue::Missing),
        }
        put("g_smallness_holds", (i.data.g_p_gamma_n < 1.0).into());
        match &self.ball {
            Some(BallRadius::Found { radius, residual }) => {
                put("ball_radius", (*radius).into());
                put("ball_residual", (*residual).into());
            }
            Some(BallRadius::NotSmall { .. }) => {
                put("ball_radius", ReportValue::Text("none".into()));
                put("ball_residual", ReportValue::Missing);
            }
            None => {
                put("ball_radius", ReportValue::Missing);
                put("ball_residual", ReportValue::Missing);
            }
        }
        if let Some(c) = &self.s1_check {
            put("S_1_formula", c.formula_value.into());
            put("S_1_quoted", c.quoted_value.into());
            put("S_1_rel_diff", c.rel_diff.into());
            put("S_1_mismatch", c.mismatch.into());
        }
        let c = &self.k43_check;
        put("K_4_3_formula", c.formula_value.into());
        put("K_4_3_quoted", c.quoted_value.into());
        put("K_4_3_rel_diff", c.rel_diff.into());
        put("K_4_3_mismatch", c.mismatch.into());
        put("regime_warning", (!self.warnings.is_empty()).into());
        out
    }

    /// `name = value` lines, numbers with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.entries() {
            let v = match v {
                ReportValue::Number(x) => fmt_sig17(x),
                ReportValue::Flag(b) => b.to_string(),
                ReportValue::Text(t) => t,
                ReportValue::Missing => "none".to_owned(),
            };
            let _ = writeln!(s, "{k} = {v}");
        }
        for w in &self.warnings {
            let _ = writeln!(s, "# warning: {w}");
        }
        s
    }

    /// JSON object with the same keys as [`Self::to_text`] plus a `warnings` array.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (k, v) in self.entries() {
            let v = match v {
                ReportValue::Number(x) => serde_json::Number::from_f64(x)
                    .map(serde_json::Value::Number)
                    .unwrap_or_else(|| serde_json::Value::String(format!("{x}"))),
                ReportValue::Flag(b) => serde_json::Value::Bool(b),
                ReportValue::Text(t) => serde_json::Value::String(t),
                ReportValue::Missing => serde_json::Value::Null,
            };
            map.insert(k, v);
        }
        map.insert(
            "warnings".into(),
            serde_json::Value::Array(
                self.warnings
                    .iter()
                    .map(|w| serde_json::Value::String(w.clone()))
                    .collect(),
            ),
        );
        serde_json::Value::Object(map)
    }
}
