use num_complex::Complex64;

use super::{check_cfl, check_mass, check_points, snapshot_schedule, DiagnosticSample, EvolutionRecord};
use crate::coords::lambda_of_nu;
use crate::error::{Error, Result};
use crate::field::{ComplexField, Frame, UniformGrid, DEFAULT_BOUNDARY_TOL};
use crate::products::{density_moments, kg_norm};
use crate::quad::simpson;

const MAX_GROWTH: f64 = 0.1;

/// Leapfrog on the static strip `u ∈ [0, ln Λ]`.
///
/// `n_u` counts grid points, walls included. Snapshot times are given in
/// `τ = ln ρ`; the snapshots themselves are stamped with `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StripSolverConfig {
    pub nu: f64,
    pub n_u: usize,
    pub cfl: f64,
    pub tau_span: (f64, f64),
    pub mass: f64,
    pub snapshot_taus: Vec<f64>,
    /// Diagnostics every this many steps, plus at every snapshot.
    pub diag_every: usize,
    /// Largest `|ψ|` accepted on the walls of the initial data before pinning.
    pub boundary_tol: f64,
}

impl StripSolverConfig {
    pub fn new(nu: f64, n_u: usize, tau_span: (f64, f64)) -> Self {
        StripSolverConfig {
            nu,
            n_u,
            cfl: 0.5,
            tau_span,
            mass: 0.0,
            snapshot_taus: Vec::new(),
            diag_every: 8,
            boundary_tol: DEFAULT_BOUNDARY_TOL,
        }
    }

    pub fn grid(&self) -> Result<UniformGrid> {
        UniformGrid::new(0.0, lambda_of_nu(self.nu)?.ln(), self.n_u)
    }

    fn validate(&self) -> Result<(UniformGrid, Vec<f64>)> {
        let grid = self.grid()?;
        check_points(self.n_u)?;
        check_cfl(self.cfl)?;
        check_mass(self.mass)?;
        let (start, end) = self.tau_span;
        let schedule = snapshot_schedule(&self.snapshot_taus, start, end)?;
        let du = grid.step();
        let dtau = self.cfl * du;
        let stiff = 4.0 / (du * du) + (self.mass * end.exp()).powi(2);
        let courant = 0.5 * dtau * stiff.sqrt();
        if courant > 1.0 {
            return Err(Error::Cfl { courant, limit: 1.0 });
        }
        Ok((grid, schedule))
    }
}

fn accel(psi: &[Complex64], out: &mut [Complex64], inv_du2: f64, m2: f64) {
    let n = psi.len();
    out[0] = Complex64::new(0.0, 0.0);
    out[n - 1] = Complex64::new(0.0, 0.0);
    for i in 1..n - 1 {
        out[i] = (psi[i - 1] - 2.0 * psi[i] + psi[i + 1]) * inv_du2 - psi[i] * m2;
    }
}

struct Diag<'a> {
    grid: &'a UniformGrid,
    mass: f64,
    wall: f64,
}

impl Diag<'_> {
    fn field(&self, tau: f64, psi: &[Complex64], pi: &[Complex64]) -> Result<ComplexField> {
        ComplexField::new(Frame::Hyperbolic, tau.exp(), *self.grid, psi.to_vec(), pi.to_vec())
    }

    fn sample(&self, tau: f64, f: &ComplexField) -> DiagnosticSample {
        let h = self.grid.step();
        let n = f.len();
        let m2 = (self.mass * tau.exp()).powi(2);
        let psi = f.psi();
        let dens: Vec<f64> = (0..n)
            .map(|i| {
                let du = if i == 0 {
                    (psi[1] - psi[0]) / h
                } else if i == n - 1 {
                    (psi[n - 1] - psi[n - 2]) / h
                } else {
                    (psi[i + 1] - psi[i - 1]) / (2.0 * h)
                };
                0.5 * (f.dpsi()[i].norm_sqr() + du.norm_sqr() + m2 * psi[i].norm_sqr())
            })
            .collect();
        let (centroid, width) = density_moments(f);
        DiagnosticSample {
            time: f.time(),
            norm: kg_norm(f),
            energy: simpson(&dens, h),
            wall: self.wall,
            centroid,
            width,
        }
    }
}

/// Evolves `init` (hyperbolic frame, stamped `ρ = e^{τ_start}`, carrying
/// `∂_τψ`) with velocity-Verlet leapfrog. Wall values are pinned to zero.
pub fn evolve_strip(config: &StripSolverConfig, init: &ComplexField) -> Result<EvolutionRecord> {
    let (grid, schedule) = config.validate()?;
    let (start, end) = config.tau_span;
    if init.frame() != Frame::Hyperbolic {
        return Err(Error::GridMismatch("strip solver needs hyperbolic initial data".into()));
    }
    if !init.grid().matches(&grid) {
        return Err(Error::GridMismatch(format!("initial grid {:?} vs strip grid {:?}", init.grid(), grid)));
    }
    let rho0 = start.exp();
    if (init.time() - rho0).abs() > 1e-12 * rho0 {
        return Err(Error::GridMismatch(format!(
            "initial data at rho = {} but span starts at rho = {rho0}",
            init.time()
        )));
    }
    init.check_dirichlet(config.boundary_tol)?;

    let n = grid.len();
    let du = grid.step();
    let inv_du2 = 1.0 / (du * du);
    let dtau = config.cfl * du;
    let m = config.mass;
    let diag = Diag {
        grid: &grid,
        mass: m,
        wall: grid.end(),
    };

    let mut psi = init.psi().to_vec();
    let mut pi = init.dpsi().to_vec();
    for v in [&mut psi, &mut pi] {
        v[0] = Complex64::new(0.0, 0.0);
        v[n - 1] = Complex64::new(0.0, 0.0);
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    let mut tau = start;
    let mut steps = 0usize;
    let mut snapshots = Vec::with_capacity(schedule.len());
    let mut diagnostics = Vec::new();
    let mut next = 0usize;

    let f0 = diag.field(tau, &psi, &pi)?;
    let d0 = diag.sample(tau, &f0);
    let norm0 = d0.norm;
    diagnostics.push(d0);
    if schedule[0] <= start {
        snapshots.push(f0);
        next = 1;
    }

    let m2_at = |t: f64| (m * t.exp()).powi(2);
    accel(&psi, &mut acc, inv_du2, m2_at(tau));
    while next < schedule.len() || tau < end {
        let target = if next < schedule.len() { schedule[next] } else { end };
        let remaining = target - tau;
        let (h, lands) = if remaining <= dtau * (1.0 + 1e-9) {
            (remaining, true)
        } else {
            (dtau, false)
        };
        for i in 1..n - 1 {
            pi[i] += acc[i] * (0.5 * h);
            psi[i] += pi[i] * h;
        }
        tau = if lands { target } else { tau + h };
        accel(&psi, &mut acc, inv_du2, m2_at(tau));
        for i in 1..n - 1 {
            pi[i] += acc[i] * (0.5 * h);
        }
        steps += 1;

        let snap = lands && next < schedule.len();
        if snap || steps % config.diag_every.max(1) == 0 {
            let f = diag.field(tau, &psi, &pi).map_err(|_| Error::Instability {
                time: tau.exp(),
                growth: f64::INFINITY,
            })?;
            let d = diag.sample(tau, &f);
            check_growth(norm0, d.norm, d.time)?;
            diagnostics.push(d);
            if snap {
                snapshots.push(f);
                next += 1;
            }
        }
    }

    Ok(EvolutionRecord {
        frame: Frame::Hyperbolic,
        nu: config.nu,
        mass: m,
        snapshots,
        diagnostics,
        steps,
    })
}

pub(super) fn check_growth(norm0: f64, norm: f64, time: f64) -> Result<()> {
    if !norm.is_finite() {
        return Err(Error::Instability {
            time,
            growth: f64::INFINITY,
        });
    }
    if norm0.abs() > 1e-300 {
        let growth = norm.abs() / norm0.abs();
        if growth > 1.0 + MAX_GROWTH {
            return Err(Error::Instability { time, growth });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn bump(u: f64, c: f64, w: f64) -> (f64, f64) {
        let s = (u - c) / w;
        if s.abs() >= 1.0 {
            (0.0, 0.0)
        } else {
            let b = (1.0 - s * s).powi(4);
            (b, -8.0 * s * (1.0 - s * s).powi(3) / w)
        }
    }

    #[test]
    fn validation() {
        let c = StripSolverConfig::new(0.5, 64, (0.0, 1.0));
        let g = c.grid().unwrap();
        let z = ComplexField::sample(Frame::Hyperbolic, 1.0, g, |_| Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)))).unwrap();
        assert!(evolve_strip(&c, &z).is_ok());

        let mut bad = c.clone();
        bad.cfl = 1.5;
        assert!(matches!(evolve_strip(&bad, &z), Err(Error::Cfl { .. })));
        let mut bad = c.clone();
        bad.cfl = 1.0;
        bad.mass = 50.0;
        assert!(matches!(evolve_strip(&bad, &z), Err(Error::Cfl { .. })));
        let mut bad = c.clone();
        bad.nu = 1.2;
        assert!(evolve_strip(&bad, &z).is_err());

        let ones = ComplexField::sample(Frame::Hyperbolic, 1.0, g, |_| Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)))).unwrap();
        assert!(matches!(evolve_strip(&c, &ones), Err(Error::NonDirichlet { .. })));
        let late = ComplexField::sample(Frame::Hyperbolic, 2.0, g, |_| Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)))).unwrap();
        assert!(evolve_strip(&c, &late).is_err());
    }

    #[test]
    fn pulse_translates() {
        let mut c = StripSolverConfig::new(0.9, 2049, (0.0, 0.4));
        let g = c.grid().unwrap();
        c.snapshot_taus = vec![0.0, 0.4];
        let (uc, w) = (0.4, 0.15);
        let init = ComplexField::sample(Frame::Hyperbolic, 1.0, g, |u| {
            let (b, db) = bump(u, uc, w);
            Ok((Complex64::new(b, 0.0), Complex64::new(-db, 0.0)))
        })
        .unwrap();
        let rec = evolve_strip(&c, &init).unwrap();
        let last = rec.last();
        assert!((last.time() - 0.4f64.exp()).abs() < 1e-14);
        let mut err: f64 = 0.0;
        for (i, u) in g.coords().enumerate() {
            err = err.max((last.psi()[i].re - bump(u - 0.4, uc, w).0).abs());
        }
        assert!(err < 1e-4, "err={err}");
        assert!(last.psi()[0].norm() == 0.0 && last.psi()[g.len() - 1].norm() == 0.0);
    }

    #[test]
    fn standing_wave_period() {
        // sin(k u) e^{-ikτ} with k = π/ln Λ
        let mut c = StripSolverConfig::new(0.5, 513, (0.0, 0.0));
        let g = c.grid().unwrap();
        let k = PI / g.end();
        c.tau_span = (0.0, 2.0 * PI / k);
        let init = ComplexField::sample(Frame::Hyperbolic, 1.0, g, |u| {
            let s = Complex64::new((k * u).sin(), 0.0);
            Ok((s, Complex64::new(0.0, -k) * s))
        })
        .unwrap();
        let rec = evolve_strip(&c, &init).unwrap();
        let err = rec
            .last()
            .psi()
            .iter()
            .zip(init.psi())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-4, "err={err}");
        assert!(rec.norm_drift() < 1e-6);
    }
}
