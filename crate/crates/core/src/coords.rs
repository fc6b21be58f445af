//! Flat Minkowski coordinates, hyperbolic upper-half-plane coordinates and the
//! receding wall.
//!
//! Every map first shifts time by `t' = t - t0 + L0/nu`, which puts the apex of
//! the wall's worldline (the point where `L` would vanish) at the origin. In
//! the shifted frame the forward lightcone is sliced by hyperbolae
//! `rho^2 = t'^2 - x^2` and a point on a slice is labelled by
//! `v = (t' + x) / rho`, so that `t' = rho (v^2 + 1) / 2v` and
//! `x = rho (v^2 - 1) / 2v`. The left wall `x = 0` sits at `v = 1`, the
//! receding wall at the fixed value `v = Λ(nu)`.

use crate::error::{Error, Result};

/// Position of the receding wall in hyperbolic coordinates, `sqrt((1+nu)/(1-nu))`.
pub fn lambda_of_nu(nu: f64) -> Result<f64> {
    check_speed(nu)?;
    Ok(((1.0 + nu) / (1.0 - nu)).sqrt())
}

pub(crate) fn check_speed(nu: f64) -> Result<()> {
    if nu > 0.0 && nu < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("wall speed nu", nu, "0 < nu < 1"))
    }
}

/// Wall speed, initial well length and initial time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallConfig {
    nu: f64,
    l0: f64,
    t0: f64,
}

impl WallConfig {
    pub fn new(nu: f64, l0: f64, t0: f64) -> Result<Self> {
        check_speed(nu)?;
        if !(l0 > 0.0 && l0.is_finite()) {
            return Err(Error::domain("initial length L0", l0, "L0 > 0"));
        }
        if !t0.is_finite() {
            return Err(Error::domain("initial time t0", t0, "finite"));
        }
        Ok(WallConfig { nu, l0, t0 })
    }

    /// Configuration whose lightcone apex sits at the origin (`L0 = nu t0`),
    /// so that `t' = t`.
    pub fn apex_at_origin(nu: f64, t0: f64) -> Result<Self> {
        WallConfig::new(nu, nu * t0, t0)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn l0(&self) -> f64 {
        self.l0
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn lambda(&self) -> f64 {
        ((1.0 + self.nu) / (1.0 - self.nu)).sqrt()
    }

    /// `t' = t - t0 + L0/nu`.
    pub fn shifted_time(&self, t: f64) -> f64 {
        t - self.t0 + self.l0 / self.nu
    }

    /// Inverse of [`WallConfig::shifted_time`].
    pub fn unshifted_time(&self, t_shifted: f64) -> f64 {
        t_shifted + self.t0 - self.l0 / self.nu
    }

    /// `L(t)` without the `t >= t0` check; valid wherever `t' > 0`.
    pub fn length_at(&self, t: f64) -> f64 {
        self.l0 + self.nu * (t - self.t0)
    }

    pub fn contains(&self, p: FlatPoint) -> bool {
        let l = self.length_at(p.t);
        l > 0.0 && p.x >= 0.0 && p.x <= l
    }
}

/// Wall length `L(t) = L0 + nu (t - t0)` for `t >= t0`.
pub fn wall_position(cfg: &WallConfig, t: f64) -> Result<f64> {
    if !(t >= cfg.t0) {
        return Err(Error::domain("time t", t, "t >= t0"));
    }
    Ok(cfg.length_at(t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatPoint {
    pub t: f64,
    pub x: f64,
}

impl FlatPoint {
    pub fn new(t: f64, x: f64) -> Self {
        FlatPoint { t, x }
    }
}

/// Point on the slice `rho` of the forward lightcone, at upper-half-plane
/// coordinate `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypPoint {
    pub rho: f64,
    pub v: f64,
}

impl HypPoint {
    pub fn new(rho: f64, v: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::domain("hyperbolic radius rho", rho, "rho > 0"));
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain("half-plane coordinate v", v, "v > 0"));
        }
        Ok(HypPoint { rho, v })
    }

    /// From the log coordinates `tau = ln rho`, `u = ln v`.
    pub fn from_log(tau: f64, u: f64) -> Result<Self> {
        HypPoint::new(tau.exp(), u.exp())
    }

    pub fn tau(&self) -> f64 {
        self.rho.ln()
    }

    pub fn u(&self) -> f64 {
        self.v.ln()
    }

    /// `(gamma_t, gamma_x)` on the unit hyperbola.
    pub fn unit_hyperbola(&self) -> (f64, f64) {
        let inv = 1.0 / (2.0 * self.v);
        ((self.v * self.v + 1.0) * inv, (self.v * self.v - 1.0) * inv)
    }
}

pub fn flat_to_hyp(cfg: &WallConfig, p: FlatPoint) -> Result<HypPoint> {
    let ts = cfg.shifted_time(p.t);
    let plus = ts + p.x;
    let minus = ts - p.x;
    if !(plus > 0.0 && minus > 0.0) {
        return Err(Error::Lightcone {
            t_shifted: ts,
            x: p.x,
        });
    }
    // Factored form keeps rho^2 accurate close to the cone.
    let rho = (plus * minus).sqrt();
    Ok(HypPoint { rho, v: plus / rho })
}

pub fn hyp_to_flat(cfg: &WallConfig, p: HypPoint) -> Result<FlatPoint> {
    let p = HypPoint::new(p.rho, p.v)?;
    let (gt, gx) = p.unit_hyperbola();
    Ok(FlatPoint {
        t: cfg.unshifted_time(p.rho * gt),
        x: p.rho * gx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn half() -> WallConfig {
        WallConfig::new(0.5, 1.0, 0.0).unwrap()
    }

    #[test]
    fn lambda_values() {
        assert_relative_eq!(lambda_of_nu(0.5).unwrap(), 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(lambda_of_nu(49.0 / 50.0).unwrap(), 99f64.sqrt(), max_relative = 1e-14);
        assert!((lambda_of_nu(1e-12).unwrap() - 1.0).abs() < 1e-11);
        for bad in [0.0, -0.1, 1.0, 1.5, f64::NAN] {
            assert!(lambda_of_nu(bad).is_err());
        }
    }

    #[test]
    fn lambda_monotone() {
        let mut prev = 1.0;
        for i in 1..100 {
            let l = lambda_of_nu(i as f64 / 100.0).unwrap();
            assert!(l > prev);
            prev = l;
        }
    }

    #[test]
    fn wall_length() {
        let c = half();
        assert_eq!(wall_position(&c, 0.0).unwrap(), 1.0);
        assert_eq!(wall_position(&c, 2.0).unwrap(), 2.0);
        let l = wall_position(&c, 3.0).unwrap();
        assert_eq!(l, 2.5);
        assert_eq!(c.shifted_time(3.0), 5.0);
        assert_eq!(c.nu() * c.shifted_time(3.0), l);
        assert!(wall_position(&c, -0.1).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(WallConfig::new(1.5, 1.0, 0.0).is_err());
        assert!(WallConfig::new(0.5, 0.0, 0.0).is_err());
        assert!(WallConfig::new(0.5, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn worked_example() {
        // apex at the origin so that t' = t
        let c = WallConfig::apex_at_origin(0.5, 1.0).unwrap();
        let h = flat_to_hyp(&c, FlatPoint::new(5.0, 3.0)).unwrap();
        assert_relative_eq!(h.rho, 4.0, max_relative = 1e-15);
        assert_relative_eq!(h.v, 2.0, max_relative = 1e-15);
        let f = hyp_to_flat(&c, HypPoint::new(4.0, 2.0).unwrap()).unwrap();
        assert_relative_eq!(f.t, 5.0, max_relative = 1e-15);
        assert_relative_eq!(f.x, 3.0, max_relative = 1e-15);

        let axis = flat_to_hyp(&c, FlatPoint::new(7.5, 0.0)).unwrap();
        assert_eq!(axis.v, 1.0);
        assert_relative_eq!(axis.rho, 7.5);
        let back = hyp_to_flat(&c, HypPoint::new(7.5, 1.0).unwrap()).unwrap();
        assert_eq!(back.x, 0.0);
        assert_relative_eq!(back.t, 7.5);
    }

    #[test]
    fn lightcone_rejected() {
        let c = half();
        // t' = 2 at t = 0
        assert!(matches!(
            flat_to_hyp(&c, FlatPoint::new(0.0, 2.0)),
            Err(Error::Lightcone { .. })
        ));
        assert!(flat_to_hyp(&c, FlatPoint::new(0.0, -3.0)).is_err());
        assert!(hyp_to_flat(&c, HypPoint { rho: 0.0, v: 1.0 }).is_err());
        assert!(hyp_to_flat(&c, HypPoint { rho: 1.0, v: -1.0 }).is_err());
    }

    #[test]
    fn wall_worldline_is_constant_v() {
        let c = half();
        let lam = c.lambda();
        for i in 1..=120 {
            let t = 0.05 * i as f64;
            let h = flat_to_hyp(&c, FlatPoint::new(t, c.length_at(t))).unwrap();
            assert!((h.v - lam).abs() <= 1e-13 * lam, "t={t} v={}", h.v);
        }
        let c = WallConfig::new(0.3, 2.0, -1.0).unwrap();
        for i in 1..=100 {
            let t = -1.0 + 0.1 * i as f64;
            let h = flat_to_hyp(&c, FlatPoint::new(t, c.length_at(t))).unwrap();
            assert!((h.v - c.lambda()).abs() <= 1e-13 * c.lambda());
        }
    }

    #[test]
    fn v_increases_with_x() {
        let c = half();
        let mut prev = 0.0;
        for i in 0..=50 {
            let x = i as f64 / 50.0;
            let v = flat_to_hyp(&c, FlatPoint::new(0.0, x)).unwrap().v;
            assert!(v > prev);
            prev = v;
        }
    }

    proptest! {
        #[test]
        fn round_trip(nu in 0.01f64..0.99, l0 in 0.1f64..10.0, t0 in -5.0f64..5.0,
                      dt in 0.0f64..20.0, frac in 0.0f64..1.0) {
            let c = WallConfig::new(nu, l0, t0).unwrap();
            let t = t0 + dt;
            let x = frac * c.length_at(t);
            let h = flat_to_hyp(&c, FlatPoint::new(t, x)).unwrap();
            let ts = c.shifted_time(t);
            prop_assert!((h.rho * h.rho - (ts * ts - x * x)).abs() <= 1e-12 * ts * ts);
            prop_assert!(h.v >= 1.0 && h.v <= c.lambda() * (1.0 + 1e-14));
            let f = hyp_to_flat(&c, h).unwrap();
            let scale = ts.abs().max(t.abs()).max(1.0);
            prop_assert!((f.t - t).abs() <= 1e-12 * scale);
            prop_assert!((f.x - x).abs() <= 1e-12 * scale);
        }

        #[test]
        fn lambda_squared(nu in 1e-6f64..0.999) {
            let l = lambda_of_nu(nu).unwrap();
            let exact = (1.0 + nu) / (1.0 - nu);
            prop_assert!((l * l - exact).abs() <= 1e-14 * exact);
        }
    }
}
