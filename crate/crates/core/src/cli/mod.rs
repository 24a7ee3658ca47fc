//! Command-line driver: `thermoflux <command> --config <path> [--out <dir>] [--set key=value]...`
//!
//! Exit codes: 0 success, 1 input or configuration error, 2 solver
//! non-convergence, 3 audit or rate failure.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::json;
use thiserror::Error;

pub use config::Config;
use output::{fields_vtk, read_field, write_file};

use crate::constants::{ConstantsInputs, ConstantsReport, DataNorms};
use crate::coupling::{default_initial_guess, picard_solve, CouplingError, PicardResult};
use crate::fem::{FemError, FieldP1};
use crate::mesh::{geometry_summary, BoundaryTag};
use crate::verify::{mms_convergence, run_audits, Solution, VerifyError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Audit(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Solver(_) => 2,
            CliError::Audit(_) => 3,
        }
    }
}

impl From<CouplingError> for CliError {
    fn from(e: CouplingError) -> Self {
        match &e {
            CouplingError::InvalidData(_) | CouplingError::Precondition(_) => CliError::Input(e.to_string()),
            CouplingError::Fem(f) => f.clone().into(),
            CouplingError::NewtonDivergence { .. } | CouplingError::NotConverged(_) => CliError::Solver(e.to_string()),
        }
    }
}

impl From<FemError> for CliError {
    fn from(e: FemError) -> Self {
        match e {
            FemError::Solver { .. } | FemError::NonFinite(_) => CliError::Solver(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Coupling(c) => c.into(),
            VerifyError::Fem(f) => f.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Fixed-point solve; writes theta.csv, phi.csv, solve_report.json, fields.vtk
    Solve,
    /// Evaluates the constants; writes constants_report.txt and .json
    Constants,
    /// Audits a previous solve; writes audit_report.json
    Verify,
    /// Manufactured-solution convergence study; writes mms_rates.csv
    Mms,
}

#[derive(Debug, Parser)]
#[command(name = "thermoflux", version, about = "Coupled thermoelectric solver with radiation boundary conditions")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Run configuration, `key = value` per line
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Override a configuration key
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("thermoflux: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(args: &Args) -> Result<(), CliError> {
    let mut cfg = Config::load(&args.config)?;
    cfg.apply_overrides(&args.overrides)?;
    match args.command {
        Command::Solve => cmd_solve(&cfg, &args.out),
        Command::Constants => cmd_constants(&cfg, &args.out),
        Command::Verify => cmd_verify(&cfg, &args.out),
        Command::Mms => cmd_mms(&cfg, &args.out),
    }
}

/// Inputs of the constants engine derived from the configuration.
pub fn constants_inputs(cfg: &Config) -> Result<ConstantsInputs, CliError> {
    let mesh = cfg.mesh()?;
    let bounds = cfg.coefficients()?.bounds;
    let data = cfg.data()?;
    let exps = data.exps;
    let mut geom = geometry_summary(&mesh);
    if let Some(r) = data.r_sharp {
        geom = geom.with_r_sharp(r);
    }
    let inputs = ConstantsInputs {
        bounds,
        exps,
        geom,
        data: DataNorms {
            g_p_gamma_n: data.g_norm(&mesh, exps.p),
            theta_e_ell_gamma: data.theta_e_norm(&mesh, exps.ell),
            theta_e_lm1p_gamma: data.theta_e_norm(&mesh, (exps.ell - 1.0) * exps.p),
        },
    };
    inputs.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(inputs)
}

pub fn cmd_solve(cfg: &Config, out: &Path) -> Result<(), CliError> {
    let mesh = cfg.mesh()?;
    let coeffs = cfg.coefficients()?;
    let data = cfg.data()?;
    data.validate(&mesh)?;
    if !mesh.has_tag(BoundaryTag::Gamma) {
        return Err(CliError::Input("the mesh has no radiative boundary Γ".into()));
    }
    let mut opts = cfg.picard()?;
    // monitor the invariant ball when the smallness condition holds
    if let Ok(report) = constants_inputs(cfg).and_then(|i| {
        ConstantsReport::evaluate(&i).map_err(|e| CliError::Input(e.to_string()))
    }) {
        opts.ball_radius = report.ball.and_then(|b| b.radius());
    }
    let init = match cfg.initial()? {
        Some(e) => FieldP1::from_fn(&mesh, |x, y| e.eval(x, y))?,
        None => default_initial_guess(&mesh, &data),
    };
    let (result, converged) = match picard_solve(&mesh, &coeffs, &data, &init, &opts) {
        Ok(r) => (r, true),
        Err(CouplingError::NotConverged(r)) => (*r, false),
        Err(e) => return Err(e.into()),
    };
    let PicardResult { theta, phi, report } = &result;
    write_file(out, "theta.csv", &theta.to_csv(&mesh))?;
    write_file(out, "phi.csv", &phi.to_csv(&mesh))?;
    write_file(out, "fields.vtk", &fields_vtk(&mesh, theta, phi))?;
    let doc = json!({
        "coefficients": coeffs.name,
        "nodes": mesh.num_nodes(),
        "triangles": mesh.num_triangles(),
        "report": report,
    });
    write_file(out, "solve_report.json", &(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"))?;
    println!(
        "solve: {} after {} outer iterations, last update {:e}",
        if converged { "converged" } else { "NOT converged" },
        report.outer_iterations,
        report.update_norms.last().copied().unwrap_or(0.0)
    );
    if converged {
        Ok(())
    } else {
        Err(CliError::Solver(format!(
            "no convergence within {} outer iterations; fields written",
            opts.max_outer
        )))
    }
}

pub fn cmd_constants(cfg: &Config, out: &Path) -> Result<(), CliError> {
    let inputs = constants_inputs(cfg)?;
    let report = ConstantsReport::evaluate(&inputs).map_err(|e| CliError::Input(e.to_string()))?;
    write_file(out, "constants_report.txt", &report.to_text())?;
    write_file(
        out,
        "constants_report.json",
        &(serde_json::to_string_pretty(&report.to_json()).expect("serializable") + "\n"),
    )?;
    let fmt = |v: Option<f64>| v.map_or("none".to_string(), |x| format!("{x:e}"));
    println!(
        "constants: upsilon = {}, p_max = {}, Q(1) = {}, smallness {}",
        fmt(report.upsilon),
        fmt(report.p_max),
        fmt(report.q1),
        match report.smallness_holds() {
            Some(true) => "holds",
            Some(false) => "fails",
            None => "not evaluated",
        }
    );
    Ok(())
}

pub fn cmd_verify(cfg: &Config, out: &Path) -> Result<(), CliError> {
    let mesh = cfg.mesh()?;
    let coeffs = cfg.coefficients()?;
    let data = cfg.data()?;
    data.validate(&mesh)?;
    let theta = read_field(&mesh, out, "theta.csv")?;
    let phi = read_field(&mesh, out, "phi.csv")?;
    let sol = Solution::new(&mesh, &theta, &phi)?;
    let report = run_audits(&sol, &coeffs, &data, &cfg.audit()?)?;
    write_file(
        out,
        "audit_report.json",
        &(serde_json::to_string_pretty(&report.to_json()).expect("serializable") + "\n"),
    )?;
    for c in &report.checks {
        let verdict = match (c.applicable, c.pass) {
            (false, _) => "n/a ",
            (true, true) => "pass",
            (true, false) => "FAIL",
        };
        println!("{verdict} {:<44} lhs {:e} rhs {:e}", c.name, c.lhs, c.rhs);
    }
    println!(
        "{} entropy min {:?} ({} excluded)",
        if report.entropy.passes() { "pass" } else { "FAIL" },
        report.entropy.min,
        report.entropy.excluded_count
    );
    if report.all_pass() {
        Ok(())
    } else {
        Err(CliError::Audit("at least one applicable audit failed; see audit_report.json".into()))
    }
}

pub fn cmd_mms(cfg: &Config, out: &Path) -> Result<(), CliError> {
    let coeffs = cfg.coefficients()?;
    let (th, ph) = (
        cfg.expr("exact_theta", "sin(pi*x)*sin(pi*y)+2")?,
        cfg.expr("exact_phi", "cos(pi*x)*cos(pi*y)")?,
    );
    let table = mms_convergence(&coeffs, &th, &ph, &cfg.levels()?, &cfg.mms()?)?;
    write_file(out, "mms_rates.csv", &table.to_csv())?;
    print!("{}", table.to_csv());
    for n in &table.notes {
        println!("note: {n}");
    }
    let (h1, l2) = cfg.min_rates()?;
    if table.meets(h1, l2) {
        Ok(())
    } else {
        Err(CliError::Audit(format!("observed rates below ({h1}, {l2})")))
    }
}
