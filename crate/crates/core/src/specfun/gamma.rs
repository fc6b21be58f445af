use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

// B_{2k} / (2k (2k - 1)) for k = 1..=9
const STIRLING: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
];

const SHIFT_RADIUS: f64 = 15.0;

/// `ln Γ(z)` for complex `z`.
///
/// For `Re z >= 1/2` the imaginary part is the continuous branch that is real
/// on the positive axis. Left of that the reflection formula is used and the
/// imaginary part is only defined modulo 2π.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("log-gamma argument", z.re, "finite"));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole(z.re));
    }
    if z.re < 0.5 {
        // ln Γ(z) = ln π - ln sin(πz) - ln Γ(1 - z)
        let s = (z * PI).sin();
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - right_half(Complex64::new(1.0, 0.0) - z));
    }
    Ok(right_half(z))
}

fn right_half(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    if w.norm() < SHIFT_RADIUS {
        let n = (SHIFT_RADIUS - z.re).ceil().max(0.0) as usize;
        for k in 0..n {
            shift += (z + k as f64).ln();
        }
        w = z + n as f64;
    }
    stirling(w) - shift
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}
