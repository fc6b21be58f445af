//! Bessel functions `J_{iκ}(x)` and `Y_{iκ}(x)` of purely imaginary order.
//!
//! For `x <= SERIES_X_MAX` both come from the ascending series
//!
//! ```text
//! J_ν(x) = Σ_j (-1)^j (x/2)^(2j+ν) / (j! Γ(j+1+ν)),   ν = ±iκ
//! ```
//!
//! and `Y_{iκ} = (J_{iκ} cos(iκπ) - J_{-iκ}) / sin(iκπ)`, i.e. the principal
//! connection formula with `cos(iκπ) = cosh(κπ)` and `sin(iκπ) = i sinh(κπ)`.
//! Past `SERIES_X_MAX` the series cancels badly (its largest term grows like
//! `e^x`), so the pair `(f, f')` is carried forward with classical RK4 on
//! `x² f'' + x f' + (x² + κ²) f = 0`.
//!
//! `κ = 0` is the ordinary pair `J_0`, `Y_0`; the connection formula is 0/0
//! there. Accuracy of `Y` degrades like `1e-16/κ` for tiny nonzero `κ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::log_gamma_complex;
use crate::error::{Error, Result};

pub const KAPPA_MAX: f64 = 50.0;
pub const SERIES_X_MAX: f64 = 12.0;

const MAX_TERMS: usize = 200;
const SERIES_RTOL: f64 = 1e-17;
// RK4 step is RK_PHASE_STEP / (local oscillation rate)
const RK_PHASE_STEP: f64 = 4e-3;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Values and x-derivatives of `J_{iκ}(x)` and `Y_{iκ}(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagOrderBesselValue {
    pub j_val: Complex64,
    pub y_val: Complex64,
    pub j_der: Complex64,
    pub y_der: Complex64,
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("Bessel argument x", x, "0 < x < inf"))
    }
}

/// `J_{iκ}(x)` for signed `κ`, `|κ| <= KAPPA_MAX`.
pub fn bessel_j_imag(kappa: f64, x: f64) -> Result<Complex64> {
    check_x(x)?;
    if !(kappa.abs() <= KAPPA_MAX) {
        return Err(Error::domain("Bessel order |kappa|", kappa, "|kappa| <= 50"));
    }
    let xs = x.min(SERIES_X_MAX);
    let mut state = [j_series(kappa, xs)?];
    if x > xs {
        continue_ode(kappa, xs, x, &mut state);
    }
    finite(state[0].0, "J_{ik}")
}

pub fn bessel_imag_order(kappa: f64, x: f64) -> Result<ImagOrderBesselValue> {
    check_x(x)?;
    if !(0.0..=KAPPA_MAX).contains(&kappa) {
        return Err(Error::domain("Bessel order kappa", kappa, "0 <= kappa <= 50"));
    }
    let xs = x.min(SERIES_X_MAX);

    if kappa == 0.0 {
        let mut state = [j_series(0.0, xs)?, y0_series(xs)];
        if x > xs {
            continue_ode(0.0, xs, x, &mut state);
        }
        let [(j, jd), (y, yd)] = state;
        return Ok(ImagOrderBesselValue {
            j_val: finite(j, "J_0")?,
            y_val: finite(y, "Y_0")?,
            j_der: jd,
            y_der: yd,
        });
    }

    let mut state = [j_series(kappa, xs)?, j_series(-kappa, xs)?];
    if x > xs {
        continue_ode(kappa, xs, x, &mut state);
    }
    let [(jp, jpd), (jm, jmd)] = state;
    // Y = -i (J_{iκ} coth(κπ) - J_{-iκ} / sinh(κπ))
    let coth = 1.0 / (kappa * PI).tanh();
    let csch = 1.0 / (kappa * PI).sinh();
    let y = -I * (jp * coth - jm * csch);
    let yd = -I * (jpd * coth - jmd * csch);
    Ok(ImagOrderBesselValue {
        j_val: finite(jp, "J_{ik}")?,
        y_val: finite(y, "Y_{ik}")?,
        j_der: jpd,
        y_der: yd,
    })
}

fn finite(z: Complex64, what: &'static str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Overflow(what))
    }
}

/// Series value and derivative of `J_{iκ}(x)`.
fn j_series(kappa: f64, x: f64) -> Result<(Complex64, Complex64)> {
    let order = Complex64::new(0.0, kappa);
    let half = 0.5 * x;
    let lead_log = order * half.ln() - log_gamma_complex(order + 1.0)?;
    if lead_log.re > 700.0 {
        return Err(Error::Overflow("J_{ik} series"));
    }
    let mut term = lead_log.exp();
    let mut sum = term;
    let mut dsum = term * order;
    let q = half * half;
    for j in 1..MAX_TERMS {
        let jf = j as f64;
        term *= -q / (jf * (order + jf));
        sum += term;
        dsum += term * (order + 2.0 * jf);
        if jf > half && term.norm() < SERIES_RTOL * sum.norm() {
            break;
        }
    }
    Ok((sum, dsum / x))
}

/// `Y_0` from `(2/π)[(ln(x/2) + γ) J_0(x) + Σ_{k>=1} (-1)^{k+1} H_k (x²/4)^k / (k!)²]`.
fn y0_series(x: f64) -> (Complex64, Complex64) {
    let half = 0.5 * x;
    let q = half * half;
    let (mut j0, mut j0d) = (1.0, 0.0);
    let (mut s, mut sd) = (0.0, 0.0);
    let mut t = 1.0;
    let mut harmonic = 0.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        t *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        j0 += t;
        j0d += t * 2.0 * kf;
        s -= harmonic * t;
        sd -= harmonic * t * 2.0 * kf;
        if kf > half && t.abs() < SERIES_RTOL * j0.abs().max(s.abs()) {
            break;
        }
    }
    j0d /= x;
    sd /= x;
    let log_part = half.ln() + EULER_GAMMA;
    let y = 2.0 / PI * (log_part * j0 + s);
    let yd = 2.0 / PI * (j0 / x + log_part * j0d + sd);
    (Complex64::new(y, 0.0), Complex64::new(yd, 0.0))
}

/// Carry `(f, f')` pairs from `x0` to `x1 > x0` along the Bessel equation of
/// order `iκ`.
fn continue_ode<const N: usize>(kappa: f64, x0: f64, x1: f64, state: &mut [(Complex64, Complex64); N]) {
    let k2 = kappa * kappa;
    let rate = (1.0 + k2 / (x0 * x0)).sqrt();
    let steps = ((x1 - x0) * rate / RK_PHASE_STEP).ceil().max(1.0) as usize;
    let h = (x1 - x0) / steps as f64;

    let accel = |x: f64, f: Complex64, d: Complex64| -> Complex64 { -d / x - f * (1.0 + k2 / (x * x)) };

    for s in 0..steps {
        let x = x0 + s as f64 * h;
        let xm = x + 0.5 * h;
        let xe = x + h;
        for (f, d) in state.iter_mut() {
            let (f0, d0) = (*f, *d);
            let k1f = d0;
            let k1d = accel(x, f0, d0);
            let k2f = d0 + 0.5 * h * k1d;
            let k2d = accel(xm, f0 + 0.5 * h * k1f, k2f);
            let k3f = d0 + 0.5 * h * k2d;
            let k3d = accel(xm, f0 + 0.5 * h * k2f, k3f);
            let k4f = d0 + h * k3d;
            let k4d = accel(xe, f0 + h * k3f, k4f);
            *f = f0 + h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
            *d = d0 + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Real-order J_0 by its plain series, independent of the complex path.
    fn j0_oracle(x: f64) -> f64 {
        let q = x * x / 4.0;
        let mut t = 1.0;
        let mut s = 1.0;
        for k in 1..80 {
            t *= -q / (k * k) as f64;
            s += t;
        }
        s
    }

    #[test]
    fn order_zero_values() {
        let b = bessel_imag_order(0.0, 1.0).unwrap();
        assert!((b.j_val.re - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((b.j_val.re - j0_oracle(1.0)).abs() < 1e-15);
        assert!((b.y_val.re - 0.088_256_964_215_676_96).abs() < 1e-14);
        // J_0' = -J_1, Y_0' = -Y_1
        assert!((b.j_der.re + 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((b.y_der.re - 0.781_212_821_300_288_7).abs() < 1e-14);
        let tiny = bessel_imag_order(0.0, 1e-8).unwrap();
        assert!((tiny.j_val.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn order_zero_continuation() {
        // J_0(20), Y_0(20), J_0(50)
        let b = bessel_imag_order(0.0, 20.0).unwrap();
        assert!((b.j_val.re - 0.167_024_664_340_583_2).abs() < 1e-10);
        assert!((b.y_val.re - 0.062_640_596_809_383_9).abs() < 1e-10);
        let b = bessel_imag_order(0.0, 50.0).unwrap();
        assert!((b.j_val.re - 0.055_812_327_669_251_6).abs() < 1e-10);
    }

    #[test]
    fn conjugate_order() {
        for kappa in [0.5, 1.0, 2.0, 5.0, 20.0] {
            for x in [0.1, 1.0, 7.0, 15.0, 40.0] {
                let a = bessel_j_imag(kappa, x).unwrap();
                let b = bessel_j_imag(-kappa, x).unwrap();
                assert!((a - b.conj()).norm() <= 1e-12 * a.norm(), "k={kappa} x={x}");
            }
        }
    }

    #[test]
    fn connection_matches_direct_j() {
        let v = bessel_imag_order(2.0, 3.0).unwrap();
        let j = bessel_j_imag(2.0, 3.0).unwrap();
        assert_eq!(v.j_val, j);
        // reference values for J_{2i}(3), Y_{2i}(3)
        let jr = Complex64::new(0.092_147_806_138_901_8, 4.858_508_321_180_97);
        let yr = Complex64::new(4.876_688_243_246_96, -0.091_804_286_141_190_9);
        assert!((v.j_val - jr).norm() < 1e-12 * jr.norm());
        assert!((v.y_val - yr).norm() < 1e-12 * yr.norm());
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_imag_order(1.0, 0.0).is_err());
        assert!(bessel_imag_order(1.0, -1.0).is_err());
        assert!(bessel_imag_order(-1.0, 1.0).is_err());
        assert!(bessel_imag_order(60.0, 1.0).is_err());
        assert!(bessel_j_imag(60.0, 1.0).is_err());
    }

    #[test]
    fn ode_residual_is_second_order() {
        // x² f'' + x f' + (x² + κ²) f with 5-point stencils of step h = 1e-3 x
        for kappa in [0.5, 1.0, 2.0, 5.0, 10.0] {
            for x in [0.5, 1.0, 5.0, 20.0] {
                let h = 1e-3 * x;
                let f = |s: f64| bessel_j_imag(kappa, s).unwrap();
                let (fm2, fm1, f0, fp1, fp2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
                let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
                let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
                let r = x * x * d2 + x * d1 + (x * x + kappa * kappa) * f0;
                let scale = f0.norm() * (x * x + kappa * kappa);
                assert!(r.norm() <= 1e-5 * scale, "k={kappa} x={x} r={}", r.norm() / scale);
            }
        }
    }
}
