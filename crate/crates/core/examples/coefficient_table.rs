//! Temperature-dependent coefficients from a table, solved on a plate that
//! radiates on top and bottom and carries a current through its sides.

use thermoflux::constants::ExponentSet;
use thermoflux::coupling::{picard_solve, table_model, PicardOptions, ProblemData};
use thermoflux::fem::FieldP1;
use thermoflux::mesh::{unit_square_mesh, SquareBoundary};

const TABLE: &str = "# T      k     sigma  alpha_s  f_lambda  gamma
0.5    1.2   1.5    0.02     0.8       0.8
1.0    1.0   1.2    0.04     1.0       1.0
1.5    0.9   1.0    0.05     1.1       1.1
2.0    0.8   0.9    0.06     1.2       1.2
";

fn main() {
    let coeffs = table_model("demo-table", TABLE).unwrap();
    println!("bounds: {:?}", coeffs.bounds);
    let mesh = unit_square_mesh(16, SquareBoundary::LeftRightNeumann).unwrap();
    let data = ProblemData::new(
        |x| 0.2 * (1.0 - 2.0 * x[0]),
        |x| 1.0 + 0.5 * x[0],
        ExponentSet::planar(3.0, 5.0, 0.0),
    );
    let init = FieldP1::constant(&mesh, 1.0);
    let r = picard_solve(&mesh, &coeffs, &data, &init, &PicardOptions::default()).unwrap();
    println!("converged in {} outer iterations", r.report.outer_iterations);
    let v = r.theta.values();
    println!(
        "theta in [{:.5}, {:.5}], |phi| <= {:.5}",
        v.iter().copied().fold(f64::INFINITY, f64::min),
        v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        r.phi.max_abs()
    );
}
