//! Observed convergence rates against a smooth manufactured solution.

use thermoflux::coupling::presets::constant_isotropic;
use thermoflux::expr::Expr;
use thermoflux::verify::{mms_convergence, MmsOptions};

fn main() {
    let theta = Expr::parse("sin(pi*x)*sin(pi*y) + 2").unwrap();
    let phi = Expr::parse("cos(pi*x)*cos(pi*y)").unwrap();
    let table = mms_convergence(&constant_isotropic(), &theta, &phi, &[8, 16, 32], &MmsOptions::default()).unwrap();
    print!("{}", table.to_csv());
    println!("meets (0.9, 1.8): {}", table.meets(0.9, 1.8));
}
