//! Special functions used by the exact mode solutions.

mod bessel;
mod gamma;

pub use bessel::{bessel_imag_order, bessel_j_imag, ImagOrderBesselValue, KAPPA_MAX, SERIES_X_MAX};
pub use gamma::log_gamma_complex;

/// Error function (absolute error below 1e-16 on the real line).
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Maclaurin series for |x| <= 2, Laplace continued fraction for erfc
    /// beyond; both summed independently of libm.
    fn erf_oracle(x: f64) -> f64 {
        let a = x.abs();
        let v = if a <= 2.0 {
            let mut term = a;
            let mut sum = a;
            for n in 1..100 {
                let n = n as f64;
                term *= -a * a / n;
                sum += term / (2.0 * n + 1.0);
            }
            2.0 / std::f64::consts::PI.sqrt() * sum
        } else {
            // erfc(a) = exp(-a^2)/sqrt(pi) * 1/(a + 1/2/(a + 1/(a + 3/2/(a + ...))))
            let mut f = a;
            for k in (1..4000).rev() {
                f = a + (k as f64 / 2.0) / f;
            }
            1.0 - (-a * a).exp() / std::f64::consts::PI.sqrt() / f
        };
        v.copysign(x)
    }

    #[test]
    fn erf_values() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(6.0) - 1.0).abs() <= 1e-14);
        assert!((erf(1.0) - 0.8427007929497149).abs() <= 1e-15);
        assert!((erf_oracle(1.0) - 0.8427007929497149).abs() <= 1e-15);
    }

    #[test]
    fn erf_matches_oracle_and_is_odd() {
        for i in 0..=600 {
            let x = -6.0 + 0.02 * i as f64;
            assert!((erf(x) - erf_oracle(x)).abs() <= 1e-14, "x={x}");
            assert_eq!(erf(-x), -erf(x));
            assert!(erf(x).abs() <= 1.0);
        }
    }
}
