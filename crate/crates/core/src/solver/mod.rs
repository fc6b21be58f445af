//! Time-domain integrators for the field in the well.
//!
//! [`evolve_strip`] works in `(τ, u) = (ln ρ, ln v)`, where the walls are
//! static at `u = 0` and `u = ln Λ` and the equation reads
//! `∂²_τψ = ∂²_uψ - m² e^{2τ} ψ`. The mass term comes from
//! `∂²_t - ∂²_x = ρ^{-2}(∂²_τ - ∂²_u)` on the forward lightcone.
//!
//! [`evolve_moving_wall`] stays in flat coordinates and follows the wall with
//! `ξ = x/L(t)`, which pins both walls at `ξ = 0, 1`.
//!
//! Both return an [`EvolutionRecord`]; [`cross_validate`] maps one record into
//! the other's frame and compares `|ψ|²`.

mod compare;
mod moving;
mod redshift;
mod strip;

pub use compare::{cross_validate, CrossReport};
pub use moving::{evolve_moving_wall, MovingWallSolverConfig};
pub use redshift::{measure_redshift, reflection_events, RedshiftMeasurement, ReflectionEvent};
pub use strip::{evolve_strip, StripSolverConfig};

use crate::error::{Error, Result};
use crate::field::{ComplexField, Frame};

/// One row of the diagnostics series.
///
/// `time` is `t` for flat runs and `ρ` for strip runs; `wall`, `centroid` and
/// `width` are in the run's spatial coordinate (`x` or `u`). For strip runs
/// `energy` is the `τ`-generator `½∫(|∂_τψ|² + |∂_uψ|² + m²e^{2τ}|ψ|²) du`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticSample {
    pub time: f64,
    pub norm: f64,
    pub energy: f64,
    pub wall: f64,
    pub centroid: f64,
    pub width: f64,
}

impl DiagnosticSample {
    /// `energy / norm`.
    pub fn energy_per_norm(&self) -> f64 {
        self.energy / self.norm
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionRecord {
    frame: Frame,
    nu: f64,
    mass: f64,
    snapshots: Vec<ComplexField>,
    diagnostics: Vec<DiagnosticSample>,
    steps: usize,
}

impl EvolutionRecord {
    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn snapshots(&self) -> &[ComplexField] {
        &self.snapshots
    }

    pub fn diagnostics(&self) -> &[DiagnosticSample] {
        &self.diagnostics
    }

    /// Number of time steps taken.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn last(&self) -> &ComplexField {
        self.snapshots.last().expect("records hold at least one snapshot")
    }

    /// Largest relative deviation of the KG norm from its first value.
    pub fn norm_drift(&self) -> f64 {
        let n0 = match self.diagnostics.first() {
            Some(d) => d.norm,
            None => return 0.0,
        };
        self.diagnostics
            .iter()
            .map(|d| ((d.norm - n0) / n0).abs())
            .fold(0.0, f64::max)
    }
}

/// Sorted, deduplicated snapshot times inside `[start, end]`; both ends if
/// none were requested.
fn snapshot_schedule(requested: &[f64], start: f64, end: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && end.is_finite() && end > start) {
        return Err(Error::Config(format!("time span ({start}, {end}) is not increasing")));
    }
    if requested.is_empty() {
        return Ok(vec![start, end]);
    }
    let tol = 1e-12 * start.abs().max(end.abs()).max(1.0);
    let mut out = Vec::with_capacity(requested.len());
    for &t in requested {
        if !(t >= start - tol && t <= end + tol) {
            return Err(Error::Config(format!("snapshot time {t} outside span [{start}, {end}]")));
        }
        out.push(t.clamp(start, end));
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= tol);
    Ok(out)
}

fn check_cfl(cfl: f64) -> Result<()> {
    if !(cfl > 0.0) {
        return Err(Error::Config(format!("Courant number must be positive, got {cfl}")));
    }
    if cfl > 1.0 {
        return Err(Error::Cfl { courant: cfl, limit: 1.0 });
    }
    Ok(())
}

fn check_points(n: usize) -> Result<()> {
    if n < crate::field::MIN_SAMPLES {
        return Err(Error::Config(format!(
            "need at least {} grid points, got {n}",
            crate::field::MIN_SAMPLES
        )));
    }
    Ok(())
}

fn check_mass(m: f64) -> Result<()> {
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Error::domain("mass m", m, "m >= 0"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule() {
        assert_eq!(snapshot_schedule(&[], 0.0, 1.0).unwrap(), vec![0.0, 1.0]);
        assert_eq!(snapshot_schedule(&[0.5, 0.25, 0.5], 0.0, 1.0).unwrap(), vec![0.25, 0.5]);
        assert!(snapshot_schedule(&[1.5], 0.0, 1.0).is_err());
        assert!(snapshot_schedule(&[], 1.0, 1.0).is_err());
        assert_eq!(snapshot_schedule(&[1.0 + 1e-14], 0.0, 1.0).unwrap(), vec![1.0]);
    }

    #[test]
    fn cfl_limits() {
        assert!(check_cfl(1.0).is_ok());
        assert!(matches!(check_cfl(1.2), Err(Error::Cfl { .. })));
        assert!(check_cfl(0.0).is_err());
    }
}
