mod support;

use kgwell::specfun::{bessel_imag_order, bessel_j_imag};
use num_complex::Complex64;
use support::oracles::bessel_ode_oracle;

const X_START: f64 = 0.1;

fn grid() -> Vec<f64> {
    let mut xs = vec![0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 11.9, 12.5, 15.0, 20.0, 30.0, 40.0, 50.0];
    xs.sort_by(f64::total_cmp);
    xs
}

/// Largest error relative to the Hankel-type envelope sqrt(|J|² + |Y|²), which
/// has no zeros.
fn worst_error(kappa: f64) -> f64 {
    let start = bessel_imag_order(kappa, X_START).unwrap();
    let xs = grid();
    let j_ref = bessel_ode_oracle(kappa, X_START, start.j_val, start.j_der, &xs, 1e-13);
    let y_ref = bessel_ode_oracle(kappa, X_START, start.y_val, start.y_der, &xs, 1e-13);
    let mut worst = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let got = bessel_imag_order(kappa, x).unwrap();
        let env = (j_ref[i].0.norm_sqr() + y_ref[i].0.norm_sqr()).sqrt();
        let ej = (got.j_val - j_ref[i].0).norm() / env;
        let ey = (got.y_val - y_ref[i].0).norm() / env;
        worst = worst.max(ej).max(ey);
    }
    worst
}

#[test]
fn series_agrees_with_ode_oracle() {
    for kappa in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
        let e = worst_error(kappa);
        println!("kappa={kappa:5} worst relative error {e:.3e}");
        assert!(e <= 1e-8, "kappa={kappa}: {e:e}");
    }
}

#[test]
fn kappa_two_at_three() {
    let start = bessel_imag_order(2.0, X_START).unwrap();
    let r = bessel_ode_oracle(2.0, X_START, start.j_val, start.j_der, &[3.0], 1e-13);
    let got = bessel_j_imag(2.0, 3.0).unwrap();
    assert!((got - r[0].0).norm() <= 1e-8 * r[0].0.norm());
    let _: Complex64 = got;
}
