use num_complex::Complex64;

use super::EvolutionRecord;
use crate::coords::{flat_to_hyp, hyp_to_flat, FlatPoint, HypPoint, WallConfig};
use crate::error::{Error, Result};
use crate::field::{ComplexField, Frame};

const EDGE_TOL: f64 = 1e-12;

/// Pointwise `|ψ|²` discrepancy between two records over their common region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossReport {
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Largest `|ψ|²` of the reference over the compared points.
    pub peak: f64,
    pub points: usize,
}

impl CrossReport {
    pub fn max_rel(&self) -> f64 {
        self.max_abs / self.peak
    }

    pub fn mean_rel(&self) -> f64 {
        self.mean_abs / self.peak
    }
}

/// Value and derivative of the cubic Lagrange interpolant of `f` at
/// coordinate `q` on a grid starting at 0 with spacing `h`.
fn cubic(f: &[Complex64], h: f64, q: f64) -> (Complex64, Complex64) {
    let n = f.len();
    let s = q / h;
    let i0 = (s.floor() as i64 - 1).clamp(0, n as i64 - 4) as usize;
    let r = s - i0 as f64;
    let (a, b, c, d) = (r, r - 1.0, r - 2.0, r - 3.0);
    let w = [-b * c * d / 6.0, a * c * d / 2.0, -a * b * d / 2.0, a * b * c / 6.0];
    let dw = [
        -(c * d + b * d + b * c) / 6.0,
        (c * d + a * d + a * c) / 2.0,
        -(b * d + a * d + a * b) / 2.0,
        (b * c + a * c + a * b) / 6.0,
    ];
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for j in 0..4 {
        v += f[i0 + j] * w[j];
        dv += f[i0 + j] * dw[j];
    }
    (v, dv / h)
}

fn hermite(s: f64, dt: f64, y0: Complex64, d0: Complex64, y1: Complex64, d1: Complex64) -> Complex64 {
    let s2 = s * s;
    let s3 = s2 * s;
    y0 * (2.0 * s3 - 3.0 * s2 + 1.0) + d0 * (dt * (s3 - 2.0 * s2 + s)) + y1 * (3.0 * s2 - 2.0 * s3) + d1 * (dt * (s3 - s2))
}

struct Reference<'a> {
    rec: &'a EvolutionRecord,
    cfg: &'a WallConfig,
    times: Vec<f64>,
}

impl Reference<'_> {
    /// `(time, coordinate)` of a flat point in the reference frame, if it
    /// lies inside the reference's walls.
    fn locate(&self, p: FlatPoint) -> Option<(f64, f64)> {
        match self.rec.frame() {
            Frame::Flat => {
                let l = self.cfg.length_at(p.t);
                let xi = p.x / l;
                (xi >= -EDGE_TOL && xi <= 1.0 + EDGE_TOL).then_some((p.t, xi.clamp(0.0, 1.0)))
            }
            Frame::Hyperbolic => {
                let h = flat_to_hyp(self.cfg, p).ok()?;
                let u = h.u();
                let top = self.cfg.lambda().ln();
                (u >= -EDGE_TOL && u <= top + EDGE_TOL).then_some((h.rho, u.clamp(0.0, top)))
            }
        }
    }

    /// `ψ` and its derivative in the reference's time at fixed coordinate.
    fn at_snapshot(&self, snap: &ComplexField, coord: f64) -> (Complex64, Complex64) {
        let g = snap.grid();
        match self.rec.frame() {
            Frame::Flat => {
                let x = coord * g.end();
                let (v, vx) = cubic(snap.psi(), g.step(), x);
                let (vt, _) = cubic(snap.dpsi(), g.step(), x);
                // d/dt at fixed ξ
                (v, vt + vx * (coord * self.rec.nu()))
            }
            Frame::Hyperbolic => {
                let (v, _) = cubic(snap.psi(), g.step(), coord);
                let (vt, _) = cubic(snap.dpsi(), g.step(), coord);
                (v, vt / snap.time())
            }
        }
    }

    fn value(&self, time: f64, coord: f64) -> Option<Complex64> {
        let first = *self.times.first()?;
        let last = *self.times.last()?;
        let tol = EDGE_TOL * last.abs().max(1.0);
        if time < first - tol || time > last + tol {
            return None;
        }
        let snaps = self.rec.snapshots();
        let k = self.times.partition_point(|&t| t <= time);
        let k = k.max(1) - 1;
        if (time - self.times[k]).abs() <= tol {
            return Some(self.at_snapshot(&snaps[k], coord).0);
        }
        if k + 1 >= snaps.len() {
            return if (time - last).abs() <= tol {
                Some(self.at_snapshot(&snaps[k], coord).0)
            } else {
                None
            };
        }
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let (y0, d0) = self.at_snapshot(&snaps[k], coord);
        let (y1, d1) = self.at_snapshot(&snaps[k + 1], coord);
        Some(hermite((time - t0) / (t1 - t0), t1 - t0, y0, d0, y1, d1))
    }
}

/// Compares every node of every `probe` snapshot with the `reference`
/// record interpolated at the same spacetime point (cubic in space, cubic
/// Hermite in time). Either record may be in either frame; `cfg` fixes the
/// map between them.
pub fn cross_validate(probe: &EvolutionRecord, reference: &EvolutionRecord, cfg: &WallConfig) -> Result<CrossReport> {
    let r = Reference {
        rec: reference,
        cfg,
        times: reference.snapshots().iter().map(|s| s.time()).collect(),
    };
    let mut max_abs: f64 = 0.0;
    let mut sum = 0.0;
    let mut peak: f64 = 0.0;
    let mut points = 0usize;
    for snap in probe.snapshots() {
        for (i, c) in snap.grid().coords().enumerate() {
            let p = match probe.frame() {
                Frame::Flat => FlatPoint::new(snap.time(), c),
                Frame::Hyperbolic => match HypPoint::new(snap.time(), c.exp()).and_then(|h| hyp_to_flat(cfg, h)) {
                    Ok(p) => p,
                    Err(_) => continue,
                },
            };
            let Some((time, coord)) = r.locate(p) else { continue };
            let Some(v) = r.value(time, coord) else { continue };
            let reference_density = v.norm_sqr();
            let diff = (snap.psi()[i].norm_sqr() - reference_density).abs();
            max_abs = max_abs.max(diff);
            peak = peak.max(reference_density);
            sum += diff;
            points += 1;
        }
    }
    if points == 0 {
        return Err(Error::InsufficientOverlap(
            "no probe sample falls inside the reference record's span".into(),
        ));
    }
    Ok(CrossReport {
        max_abs,
        mean_abs: sum / points as f64,
        peak,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_exact_on_cubics() {
        let h = 0.25;
        let f: Vec<Complex64> = (0..9)
            .map(|i| {
                let x = i as f64 * h;
                Complex64::new(x * x * x - x, 2.0 * x * x)
            })
            .collect();
        for q in [0.0, 0.1, 0.77, 1.0, 1.9, 2.0] {
            let (v, d) = cubic(&f, h, q);
            assert!((v - Complex64::new(q * q * q - q, 2.0 * q * q)).norm() < 1e-13);
            assert!((d - Complex64::new(3.0 * q * q - 1.0, 4.0 * q)).norm() < 1e-12);
        }
    }

    #[test]
    fn hermite_exact_on_cubics() {
        let y = |t: f64| Complex64::new(t * t * t, -t);
        let dy = |t: f64| Complex64::new(3.0 * t * t, -1.0);
        let (a, b) = (0.5, 1.25);
        for s in [0.0, 0.3, 0.5, 1.0] {
            let t = a + s * (b - a);
            let v = hermite(s, b - a, y(a), dy(a), y(b), dy(b));
            assert!((v - y(t)).norm() < 1e-14);
        }
    }
}
