use proptest::prelude::*;

use thermoflux::constants::{gamma_fn, ExponentSet};
use thermoflux::coupling::ProblemData;
use thermoflux::fem::assembly::assemble_radiation;
use thermoflux::fem::{CoefficientModel, FieldP1, Tensor2};
use thermoflux::mesh::{unit_square_mesh, SquareBoundary, TriMesh};
use thermoflux::verify::{check_gradient_estimate, entropy_audit, Equation, Solution};

fn mesh() -> TriMesh {
    unit_square_mesh(3, SquareBoundary::LeftNeumann).unwrap()
}

fn field(mesh: &TriMesh, v: &[f64]) -> FieldP1 {
    FieldP1::new(mesh, v[..mesh.num_nodes()].to_vec()).unwrap()
}

fn ell_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![Just(2.0), Just(3.0), Just(5.0)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gamma_recurrence(x in 0.05f64..30.0) {
        let (a, b) = (gamma_fn(x + 1.0).unwrap(), x * gamma_fn(x).unwrap());
        prop_assert!(((a - b) / a).abs() < 1e-13);
    }

    #[test]
    fn radiation_is_monotone(
        u in prop::collection::vec(-3.0f64..3.0, 16),
        v in prop::collection::vec(-3.0f64..3.0, 16),
        ell in ell_strategy(),
    ) {
        let m = mesh();
        let temp = FieldP1::constant(&m, 1.0);
        let f = |x: [f64; 2], _t: f64| 1.0 + x[0];
        let (ru, _) = assemble_radiation(&m, f, &temp, &field(&m, &u), ell).unwrap();
        let (rv, _) = assemble_radiation(&m, f, &temp, &field(&m, &v), ell).unwrap();
        let pairing: f64 = ru.iter().zip(&rv).zip(u.iter().zip(&v)).map(|((a, b), (x, y))| (a - b) * (x - y)).sum();
        prop_assert!(pairing >= -1e-12);
    }

    #[test]
    fn radiation_jacobian_matches_differences(u in prop::collection::vec(-2.0f64..2.0, 16), ell in ell_strategy()) {
        let m = mesh();
        let temp = FieldP1::constant(&m, 1.0);
        let f = |_: [f64; 2], _t: f64| 2.0;
        let (_, jac) = assemble_radiation(&m, f, &temp, &field(&m, &u), ell).unwrap();
        let jac = jac.to_dense();
        let (mut num, mut den) = (0.0, 0.0);
        for j in 0..m.num_nodes() {
            let h = 1e-6;
            let mut up = u.clone();
            let mut dn = u.clone();
            up[j] += h;
            dn[j] -= h;
            let rp = assemble_radiation(&m, f, &temp, &field(&m, &up), ell).unwrap().0;
            let rm = assemble_radiation(&m, f, &temp, &field(&m, &dn), ell).unwrap().0;
            for i in 0..m.num_nodes() {
                num += ((rp[i] - rm[i]) / (2.0 * h) - jac[i][j]).powi(2);
                den += jac[i][j].powi(2);
            }
        }
        prop_assert!(den == 0.0 || (num / den).sqrt() <= 1e-5);
    }

    #[test]
    fn entropy_is_nonnegative(
        t in prop::collection::vec(0.1f64..5.0, 16),
        p in prop::collection::vec(-3.0f64..3.0, 16),
        kxy in -0.9f64..0.9,
        alpha in -1.0f64..1.0,
    ) {
        let m = mesh();
        let mut c = CoefficientModel::constant(1.0, 2.0, alpha, 1.0, 1.0);
        c.k = std::sync::Arc::new(move |_, _| Tensor2::new(1.0, kxy, 1.0));
        let a = entropy_audit(&m, &field(&m, &t), &field(&m, &p), &c);
        prop_assert_eq!(a.excluded_count, 0);
        prop_assert!(a.passes() && a.negative_count == 0);
    }

    #[test]
    fn gradient_bound_grows_with_data_and_b(
        b_hi in 1.0f64..3.0,
        db in 0.0f64..2.0,
        g in 0.0f64..1.0,
        dg in 0.0f64..1.0,
        te in 0.0f64..1.5,
        dte in 0.0f64..1.0,
        eq in prop_oneof![Just(Equation::Thermal), Just(Equation::Electric)],
    ) {
        let m = mesh();
        let th = FieldP1::from_fn(&m, |x, y| 1.0 + 0.3 * x - 0.2 * y).unwrap();
        let ph = FieldP1::from_fn(&m, |x, y| 0.1 * (x + y - 1.0)).unwrap();
        let sol = Solution::new(&m, &th, &ph).unwrap();
        let rhs = |b: f64, g: f64, te: f64| {
            let mut c = CoefficientModel::constant(1.0, 1.0, 0.1, 1.0, 1.0);
            c.bounds.b_hi = b;
            let data = ProblemData::new(move |_| g, move |_| te, ExponentSet::planar(3.0, 5.0, 0.0));
            check_gradient_estimate(&sol, &c, &data, eq, 0.0).unwrap().rhs
        };
        let base = rhs(b_hi, g, te);
        let tol = 1e-12 * base.abs();
        prop_assert!(rhs(b_hi + db, g, te) >= base - tol);
        prop_assert!(rhs(b_hi, g + dg, te) >= base - tol);
        prop_assert!(rhs(b_hi, g, te + dte) >= base - tol);
    }
}

#[test]
fn operator_is_deterministic() {
    use thermoflux::coupling::{operator_t, small_data_problem, SolverSettings};
    use thermoflux::fem::assembly::Parallelism;
    let (m, c, d) = small_data_problem(8);
    let init = FieldP1::constant(&m, 1.0);
    let seq = SolverSettings::default();
    let par = SolverSettings { parallelism: Parallelism::Parallel, ..seq };
    let a = operator_t(&m, &c, &init, &d, &seq).unwrap();
    let b = operator_t(&m, &c, &init, &d, &seq).unwrap();
    let p = operator_t(&m, &c, &init, &d, &par).unwrap();
    assert_eq!(a.0, b.0);
    assert_eq!(a.0, p.0);
    assert_eq!(a.1, p.1);
}
