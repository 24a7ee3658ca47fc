//! Estimate audits and the entropy check on a solved small-data problem.

use thermoflux::coupling::{default_initial_guess, picard_solve, small_data_problem, PicardOptions};
use thermoflux::verify::{run_audits, AuditOptions, Solution};

fn main() {
    let (mesh, coeffs, data) = small_data_problem(16);
    let init = default_initial_guess(&mesh, &data);
    let r = picard_solve(&mesh, &coeffs, &data, &init, &PicardOptions::default()).unwrap();
    let sol = Solution::new(&mesh, &r.theta, &r.phi).unwrap();
    let report = run_audits(&sol, &coeffs, &data, &AuditOptions::default()).unwrap();
    for c in &report.checks {
        let verdict = if !c.applicable { "n/a" } else if c.pass { "pass" } else { "FAIL" };
        println!("{verdict:>4} {:<44} lhs {:.4e} rhs {:.4e}", c.name, c.lhs, c.rhs);
        if let Some(cond) = &c.conditional_on {
            println!("     conditional on {cond}");
        }
        for n in &c.notes {
            println!("     note: {n}");
        }
    }
    println!("entropy production min {:?}, {} negative", report.entropy.min, report.entropy.negative_count);
}
