//! Fixed-point iteration on the reference small-data problem, with and
//! without relaxation.

use thermoflux::coupling::{default_initial_guess, picard_solve, small_data_problem, PicardOptions};
use thermoflux::fem::norms;

fn main() {
    let (mesh, coeffs, data) = small_data_problem(16);
    let init = default_initial_guess(&mesh, &data);
    let mut fields = Vec::new();
    for relax in [1.0, 0.5] {
        let opts = PicardOptions { relax, max_outer: 200, ..PicardOptions::default() };
        let r = picard_solve(&mesh, &coeffs, &data, &init, &opts).unwrap();
        println!("relax = {relax}: {} iterations", r.report.outer_iterations);
        for (i, u) in r.report.update_norms.iter().enumerate() {
            println!("  {i:>3} {u:.3e}");
        }
        println!("  theta range [{:.6}, {:.6}]", min(r.theta.values()), max(r.theta.values()));
        fields.push(r.theta);
    }
    let diff = norms(&mesh, &fields[0].sub(&fields[1]), data.p(), data.ell()).v_norm;
    println!("difference of the two fixed points: {diff:.3e}");
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}
