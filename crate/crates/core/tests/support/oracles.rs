//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the code path it is used to check.

#![allow(dead_code)]

use kgwell::Complex64;

/// Dormand-Prince 5(4) with error control, integrating the Bessel equation of
/// order `iκ` in `s = ln x`:  `f_ss = -(e^{2s} + κ²) f`.
///
/// Starts from `(f, x f')` at `x_start` and returns `(f, f')` at each target
/// (targets must be increasing and `>= x_start`).
pub fn bessel_ode_oracle(
    kappa: f64,
    x_start: f64,
    f0: Complex64,
    df0: Complex64,
    targets: &[f64],
    rtol: f64,
) -> Vec<(Complex64, Complex64)> {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let k2 = kappa * kappa;
    let rhs = |s: f64, y: [Complex64; 2]| -> [Complex64; 2] { [y[1], -y[0] * ((2.0 * s).exp() + k2)] };

    let mut s = x_start.ln();
    let mut y = [f0, df0 * x_start];
    let mut h: f64 = 1e-4;
    let mut out = Vec::with_capacity(targets.len());
    for &xt in targets {
        let st = xt.ln();
        while s < st {
            let hh = h.min(st - s);
            let mut k = [[Complex64::new(0.0, 0.0); 2]; 7];
            for i in 0..7 {
                let mut yi = y;
                for j in 0..i {
                    yi[0] += hh * A[i][j] * k[j][0];
                    yi[1] += hh * A[i][j] * k[j][1];
                }
                k[i] = rhs(s + C[i] * hh, yi);
            }
            let mut y5 = y;
            let mut err = 0.0f64;
            for c in 0..2 {
                let mut e = Complex64::new(0.0, 0.0);
                for i in 0..7 {
                    y5[c] += hh * B5[i] * k[i][c];
                    e += hh * (B5[i] - B4[i]) * k[i][c];
                }
                err = err.max(e.norm());
            }
            let scale = rtol * (y[0].norm() + y[1].norm()).max(1e-300);
            let ratio = err / scale;
            if ratio <= 1.0 {
                s += hh;
                y = y5;
            }
            let fac = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            h = hh * fac;
        }
        out.push((y[0], y[1] / xt));
    }
    out
}

/// Composite Gauss-Legendre-free trapezoid on a fine uniform grid, adequate for
/// smooth rapidly decaying integrands (trapezoid is spectrally accurate there).
pub fn trapezoid<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = 0.5 * (f(a) + f(b));
    for i in 1..n {
        s += f(a + i as f64 * h);
    }
    s * h
}
