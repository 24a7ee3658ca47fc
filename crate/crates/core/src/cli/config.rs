//! `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::CliError;
use crate::constants::{CoefficientBounds, ExponentSet};
use crate::coupling::{preset, table_model, PicardOptions, ProblemData, SolverSettings};
use crate::expr::Expr;
use crate::fem::{CoefficientModel, Parallelism};
use crate::mesh::{load_mesh, unit_square_mesh, SquareBoundary, TriMesh};
use crate::verify::{AuditOptions, MmsOptions};

/// Every key the configuration accepts, with its meaning.
pub const KEYS: &[(&str, &str)] = &[
    ("mesh", "mesh file path, or `unit-square` (default)"),
    ("m", "cells per side of the unit square (default 16)"),
    ("boundary", "unit-square boundary split: all-radiative | left-neumann | left-right-neumann (default) | all-neumann"),
    ("coefficients", "coefficient preset name (default constant-isotropic)"),
    ("coefficients_table", "path of a `T k sigma alpha_s f_lambda gamma` table; overrides `coefficients`"),
    ("bounds", "`unit` replaces the coefficient bounds by unit bounds"),
    ("a_lo", "bound override"),
    ("a_hi", "bound override"),
    ("k_lo", "bound override"),
    ("k_hi", "bound override"),
    ("sigma_lo", "bound override"),
    ("sigma_hi", "bound override"),
    ("alpha_seebeck_hi", "bound override"),
    ("b_lo", "bound override"),
    ("b_hi", "bound override"),
    ("gamma_hi", "bound override"),
    ("g", "Neumann data on Γ_N: constant or expression in x, y (default 0)"),
    ("theta_e", "external temperature on Γ: constant or expression (default 0)"),
    ("initial", "initial temperature: constant or expression (default: mean of theta_e)"),
    ("ell", "radiation exponent (default 5)"),
    ("p", "integrability exponent (default 3)"),
    ("alpha", "exponent of the L∞ estimate (default 4p/(p-2))"),
    ("nu3", "weight of the scalar source (default 0)"),
    ("delta", "data integrability margin (default 1)"),
    ("s", "Neumann data exponent (default 3)"),
    ("r_sharp", "covering radius for the gradient audit (default: mesh heuristic)"),
    ("poincare", "Poincaré constant override for the energy audit"),
    ("tol", "outer tolerance (default 1e-8)"),
    ("max_outer", "outer iteration cap (default 50)"),
    ("relax", "relaxation in (0, 1] (default 1)"),
    ("newton_tol", "Newton relative residual tolerance (default 1e-10)"),
    ("newton_max_iter", "Newton iteration cap (default 50)"),
    ("parallel", "element-parallel assembly: true | false (default false)"),
    ("timing", "record wall time in the solve report: true | false (default false)"),
    ("exact_theta", "manufactured temperature (default sin(pi*x)*sin(pi*y)+2)"),
    ("exact_phi", "manufactured potential (default cos(pi*x)*cos(pi*y))"),
    ("levels", "comma-separated unit-square resolutions (default 8,16,32)"),
    ("min_rate_h1", "required H1 rate (default 0.9)"),
    ("min_rate_l2", "required L2 rate (default 1.8)"),
];

/// Parsed configuration: key → (value, origin).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, (String, String)>,
    base_dir: PathBuf,
}

fn check_key(key: &str, origin: &str) -> Result<(), CliError> {
    if KEYS.iter().any(|(k, _)| *k == key) {
        Ok(())
    } else {
        Err(CliError::Input(format!("{origin}: unknown key `{key}`")))
    }
}

fn split_pair<'a>(line: &'a str, origin: &str) -> Result<(&'a str, &'a str), CliError> {
    let (k, v) = line
        .split_once('=')
        .ok_or_else(|| CliError::Input(format!("{origin}: expected `key = value`")))?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() || v.is_empty() {
        return Err(CliError::Input(format!("{origin}: empty key or value")));
    }
    check_key(k, origin)?;
    Ok((k, v))
}

impl Config {
    /// Parses `key = value` lines; `#` starts a comment. Relative paths in
    /// the result resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path, source: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{source}:{}", i + 1);
            let (k, v) = split_pair(line, &origin)?;
            if entries.insert(k.to_string(), (v.to_string(), origin.clone())).is_some() {
                return Err(CliError::Input(format!("{origin}: duplicate key `{k}`")));
            }
        }
        Ok(Self {
            entries,
            base_dir: base_dir.to_path_buf(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base, &path.display().to_string())
    }

    /// Applies `key=value` overrides on top of the file.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<(), CliError> {
        for o in overrides {
            let origin = format!("--set {o}");
            let (k, v) = split_pair(o, &origin)?;
            self.entries.insert(k.to_string(), (v.to_string(), origin));
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn origin(&self, key: &str) -> &str {
        self.entries.get(key).map_or("default", |(_, o)| o.as_str())
    }

    fn parse_value<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::Input(format!("{}: invalid value `{v}` for `{key}`: {e}", self.origin(key))))
            })
            .transpose()
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.parse_value(key)?.unwrap_or(default))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(|v| self.base_dir.join(v))
    }

    pub fn expr(&self, key: &str, default: &str) -> Result<Expr, CliError> {
        let src = self.get(key).unwrap_or(default);
        Expr::parse(src).map_err(|e| CliError::Input(format!("{}: `{key}`: {e}", self.origin(key))))
    }

    pub fn exps(&self) -> Result<ExponentSet, CliError> {
        let p = self.f64_or("p", 3.0)?;
        let mut e = ExponentSet::planar(p, self.f64_or("ell", 5.0)?, self.f64_or("nu3", 0.0)?);
        e.alpha = self.f64_or("alpha", ExponentSet::default_alpha(p))?;
        e.delta = self.f64_or("delta", e.delta)?;
        e.s = self.f64_or("s", e.s)?;
        e.validate().map_err(|e| CliError::Input(e.to_string()))?;
        Ok(e)
    }

    pub fn boundary(&self) -> Result<SquareBoundary, CliError> {
        match self.get("boundary").unwrap_or("left-right-neumann") {
            "all-radiative" => Ok(SquareBoundary::AllRadiative),
            "left-neumann" => Ok(SquareBoundary::LeftNeumann),
            "left-right-neumann" => Ok(SquareBoundary::LeftRightNeumann),
            "all-neumann" => Ok(SquareBoundary::AllNeumann),
            other => Err(CliError::Input(format!("{}: unknown boundary `{other}`", self.origin("boundary")))),
        }
    }

    pub fn mesh(&self) -> Result<TriMesh, CliError> {
        match self.get("mesh") {
            None | Some("unit-square") => {
                let m: usize = self.parse_value("m")?.unwrap_or(16);
                unit_square_mesh(m, self.boundary()?).map_err(|e| CliError::Input(e.to_string()))
            }
            Some(_) => {
                let path = self.path("mesh").expect("key present");
                load_mesh(&path).map_err(|e| CliError::Input(format!("mesh {}: {e}", path.display())))
            }
        }
    }

    pub fn coefficients(&self) -> Result<CoefficientModel, CliError> {
        let mut c = match self.path("coefficients_table") {
            Some(path) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
                table_model(&path.display().to_string(), &text).map_err(|e| CliError::Input(e.to_string()))?
            }
            None => preset(self.get("coefficients").unwrap_or("constant-isotropic"))
                .map_err(|e| CliError::Input(e.to_string()))?,
        };
        match self.get("bounds") {
            None => {}
            Some("unit") => c.bounds = CoefficientBounds::unit(),
            Some(other) => {
                return Err(CliError::Input(format!("{}: unknown bounds `{other}`", self.origin("bounds"))));
            }
        }
        let b = &mut c.bounds;
        for (key, slot) in [
            ("a_lo", &mut b.a_lo),
            ("a_hi", &mut b.a_hi),
            ("k_lo", &mut b.k_lo),
            ("k_hi", &mut b.k_hi),
            ("sigma_lo", &mut b.sigma_lo),
            ("sigma_hi", &mut b.sigma_hi),
            ("alpha_seebeck_hi", &mut b.alpha_seebeck_hi),
            ("b_lo", &mut b.b_lo),
            ("b_hi", &mut b.b_hi),
            ("gamma_hi", &mut b.gamma_hi),
        ] {
            if let Some(v) = self.parse_value(key)? {
                *slot = v;
            }
        }
        c.bounds.validate().map_err(|e| CliError::Input(e.to_string()))?;
        Ok(c)
    }

    pub fn data(&self) -> Result<ProblemData, CliError> {
        let (g, te) = (self.expr("g", "0")?, self.expr("theta_e", "0")?);
        let mut d = ProblemData::new(move |x| g.eval(x[0], x[1]), move |x| te.eval(x[0], x[1]), self.exps()?);
        d.r_sharp = self.parse_value("r_sharp")?;
        Ok(d)
    }

    pub fn initial(&self) -> Result<Option<Expr>, CliError> {
        self.get("initial").map(|_| self.expr("initial", "0")).transpose()
    }

    pub fn picard(&self) -> Result<PicardOptions, CliError> {
        let d = PicardOptions::default();
        let s = SolverSettings::default();
        Ok(PicardOptions {
            tol: self.f64_or("tol", d.tol)?,
            max_outer: self.parse_value("max_outer")?.unwrap_or(d.max_outer),
            relax: self.f64_or("relax", d.relax)?,
            settings: SolverSettings {
                parallelism: if self.parse_value("parallel")?.unwrap_or(false) {
                    Parallelism::Parallel
                } else {
                    Parallelism::Sequential
                },
                newton_tol: self.f64_or("newton_tol", s.newton_tol)?,
                newton_max_iter: self.parse_value("newton_max_iter")?.unwrap_or(s.newton_max_iter),
                ..s
            },
            ball_radius: None,
            record_time: self.parse_value("timing")?.unwrap_or(false),
        })
    }

    pub fn audit(&self) -> Result<AuditOptions, CliError> {
        Ok(AuditOptions {
            poincare: self.parse_value("poincare")?,
        })
    }

    pub fn mms(&self) -> Result<MmsOptions, CliError> {
        let mut o = MmsOptions {
            exps: self.exps()?,
            boundary: self.boundary()?,
            ..MmsOptions::default()
        };
        let p = self.picard()?;
        o.picard.max_outer = p.max_outer;
        o.picard.relax = p.relax;
        o.picard.settings = p.settings;
        if let Some(tol) = self.parse_value("tol")? {
            o.picard.tol = tol;
        }
        Ok(o)
    }

    pub fn levels(&self) -> Result<Vec<usize>, CliError> {
        self.get("levels")
            .unwrap_or("8,16,32")
            .split(',')
            .map(|v| {
                v.trim()
                    .parse()
                    .map_err(|e| CliError::Input(format!("{}: invalid level `{v}`: {e}", self.origin("levels"))))
            })
            .collect()
    }

    pub fn min_rates(&self) -> Result<(f64, f64), CliError> {
        Ok((self.f64_or("min_rate_h1", 0.9)?, self.f64_or("min_rate_l2", 1.8)?))
    }
}
