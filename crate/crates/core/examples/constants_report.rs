//! Constants of the existence theory for all-unit coefficient bounds on the
//! unit square, with `p` halfway inside the admissible window.

use thermoflux::constants::{upsilon_thresholds, CoefficientBounds, ConstantsInputs, ConstantsReport, DataNorms, ExponentSet};
use thermoflux::mesh::{geometry_summary, unit_square_mesh, SquareBoundary};

fn main() {
    let bounds = CoefficientBounds::unit();
    let ups = upsilon_thresholds(&bounds, 0.0, 2).unwrap().coupled.unwrap();
    let p = 2.0 + 0.5 / (ups - 1.0);
    let mesh = unit_square_mesh(16, SquareBoundary::LeftRightNeumann).unwrap();
    let inputs = ConstantsInputs {
        bounds,
        exps: ExponentSet::planar(p, 5.0, 0.0),
        geom: geometry_summary(&mesh),
        data: DataNorms {
            g_p_gamma_n: 0.1,
            theta_e_ell_gamma: 2f64.powf(0.2),
            theta_e_lm1p_gamma: 2f64.powf(1.0 / (4.0 * p)),
        },
    };
    let report = ConstantsReport::evaluate(&inputs).unwrap();
    print!("{}", report.to_text());
    println!("smallness holds: {:?}", report.smallness_holds());
}
