//! A weakly conducting plate at room temperature with Stefan–Boltzmann
//! radiation and an emissivity that varies with temperature.

use thermoflux::constants::ExponentSet;
use thermoflux::coupling::presets::stefan_boltzmann;
use thermoflux::coupling::{picard_solve, PicardOptions, ProblemData};
use thermoflux::fem::FieldP1;
use thermoflux::mesh::{unit_square_mesh, SquareBoundary};
use thermoflux::verify::entropy_audit;

fn main() {
    let mesh = unit_square_mesh(16, SquareBoundary::LeftRightNeumann).unwrap();
    let coeffs = stefan_boltzmann();
    let data = ProblemData::new(|x| 50.0 * (1.0 - 2.0 * x[0]), |_| 300.0, ExponentSet::planar(3.0, 5.0, 0.0));
    let init = FieldP1::constant(&mesh, 300.0);
    let r = picard_solve(&mesh, &coeffs, &data, &init, &PicardOptions::default()).unwrap();
    let v = r.theta.values();
    println!("outer iterations: {}", r.report.outer_iterations);
    println!(
        "theta in [{:.3}, {:.3}] K, phi in [{:.4}, {:.4}] V",
        v.iter().copied().fold(f64::INFINITY, f64::min),
        v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        r.phi.values().iter().copied().fold(f64::INFINITY, f64::min),
        r.phi.values().iter().copied().fold(f64::NEG_INFINITY, f64::max)
    );
    let audit = entropy_audit(&mesh, &r.theta, &r.phi, &coeffs);
    println!("entropy production min {:?}", audit.min);
}
