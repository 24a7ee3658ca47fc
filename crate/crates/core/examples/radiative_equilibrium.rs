//! With no current and a uniform exterior temperature the Stefan–Boltzmann
//! balance `|Θ|³Θ = θ_e⁴` is reached by the constant field.

use thermoflux::constants::ExponentSet;
use thermoflux::coupling::presets::constant_isotropic;
use thermoflux::coupling::{picard_solve, PicardOptions, ProblemData};
use thermoflux::fem::FieldP1;
use thermoflux::mesh::{unit_square_mesh, SquareBoundary};

fn main() {
    let mesh = unit_square_mesh(16, SquareBoundary::AllRadiative).unwrap();
    let data = ProblemData::new(|_| 0.0, |_| 2.0, ExponentSet::planar(3.0, 5.0, 0.0));
    let init = FieldP1::constant(&mesh, 0.5);
    let r = picard_solve(&mesh, &constant_isotropic(), &data, &init, &PicardOptions::default()).unwrap();
    let err = r.theta.values().iter().map(|t| (t - 2.0).abs()).fold(0.0, f64::max);
    println!("outer iterations: {}", r.report.outer_iterations);
    println!("Newton iterations per step: {:?}", r.report.newton_iterations);
    println!("max |Θ - 2| = {err:e}, max |φ| = {:e}", r.phi.max_abs());
}
