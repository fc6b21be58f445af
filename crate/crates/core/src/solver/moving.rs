use num_complex::Complex64;

use super::strip::check_growth;
use super::{check_cfl, check_mass, check_points, snapshot_schedule, DiagnosticSample, EvolutionRecord};
use crate::coords::WallConfig;
use crate::error::{Error, Result};
use crate::field::{ComplexField, Frame, UniformGrid, DEFAULT_BOUNDARY_TOL};
use crate::products::{density_moments, energy_expectation, kg_norm};

/// RK4 in flat time on the comoving grid `ξ = x/L(t) ∈ [0, 1]`.
///
/// The state is `(F, W)` with `F(t, ξ) = ψ(t, ξL(t))` and `W = L ∂_tψ`
/// (time derivative at fixed `x`); both vanish on the walls. Snapshots are
/// returned on the physical grid `x ∈ [0, L(t)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MovingWallSolverConfig {
    pub wall: WallConfig,
    pub n_xi: usize,
    /// Fraction of `Δξ L(t)/(1 + ν)`, the step that follows the fastest
    /// characteristic `(1 + ξν)/L`.
    pub cfl: f64,
    pub t_span: (f64, f64),
    pub mass: f64,
    pub snapshot_times: Vec<f64>,
    pub diag_every: usize,
    pub boundary_tol: f64,
}

impl MovingWallSolverConfig {
    pub fn new(wall: WallConfig, n_xi: usize, t_span: (f64, f64)) -> Self {
        MovingWallSolverConfig {
            wall,
            n_xi,
            cfl: 0.5,
            t_span,
            mass: 0.0,
            snapshot_times: Vec::new(),
            diag_every: 16,
            boundary_tol: DEFAULT_BOUNDARY_TOL,
        }
    }

    /// Physical grid at time `t`.
    pub fn grid_at(&self, t: f64) -> Result<UniformGrid> {
        UniformGrid::new(0.0, self.wall.length_at(t), self.n_xi)
    }

    fn validate(&self) -> Result<Vec<f64>> {
        check_points(self.n_xi)?;
        check_cfl(self.cfl)?;
        check_mass(self.mass)?;
        let (start, end) = self.t_span;
        let schedule = snapshot_schedule(&self.snapshot_times, start, end)?;
        if !(self.wall.length_at(start) > 0.0) {
            return Err(Error::Config(format!("well has no extent at t = {start}")));
        }
        Ok(schedule)
    }
}

struct System {
    nu: f64,
    m2: f64,
    dxi: f64,
    wall: WallConfig,
}

impl System {
    /// `Ḟ = W/L + a D F`, `Ẇ = D(aW) + D²F/L - L m² F` with `a = ξν/L` and
    /// centered `D`, `D²`. These are the Euler-Lagrange equations of the
    /// discretized action `Σ Δξ [L|Ḟ - aDF|² - |D₊F|²/L - L m²|F|²]`, so the
    /// discrete charge `iΔξ Σ (F* W - F W*)` is conserved exactly.
    fn rhs(&self, t: f64, f: &[Complex64], w: &[Complex64], df: &mut [Complex64], dw: &mut [Complex64]) {
        let n = f.len();
        let l = self.wall.length_at(t);
        let inv_l = 1.0 / l;
        let h = self.dxi;
        let (c1, c2) = (0.5 / h, 1.0 / (h * h));
        let a = |i: usize| i as f64 * h * self.nu * inv_l;
        df[0] = Complex64::new(0.0, 0.0);
        dw[0] = Complex64::new(0.0, 0.0);
        df[n - 1] = Complex64::new(0.0, 0.0);
        dw[n - 1] = Complex64::new(0.0, 0.0);
        for i in 1..n - 1 {
            let f_xi = (f[i + 1] - f[i - 1]) * c1;
            let f_xixi = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * c2;
            // wall values of aW are zero
            let aw_next = if i + 1 == n - 1 { Complex64::new(0.0, 0.0) } else { w[i + 1] * a(i + 1) };
            let aw_prev = if i == 1 { Complex64::new(0.0, 0.0) } else { w[i - 1] * a(i - 1) };
            df[i] = w[i] * inv_l + f_xi * a(i);
            dw[i] = (aw_next - aw_prev) * c1 + f_xixi * inv_l - f[i] * (l * self.m2);
        }
    }

    /// Physical field at `t`; `∂_tψ = W/L`.
    fn physical(&self, t: f64, f: &[Complex64], w: &[Complex64]) -> Result<ComplexField> {
        let l = self.wall.length_at(t);
        let dpsi = w.iter().map(|v| v / l).collect();
        ComplexField::new(Frame::Flat, t, UniformGrid::new(0.0, l, f.len())?, f.to_vec(), dpsi)
    }

    fn sample(&self, f: &ComplexField) -> Result<DiagnosticSample> {
        let (centroid, width) = density_moments(f);
        Ok(DiagnosticSample {
            time: f.time(),
            norm: kg_norm(f),
            energy: energy_expectation(f)?,
            wall: f.grid().end(),
            centroid,
            width,
        })
    }
}

/// Evolves flat initial data given at `t_span.0` on `x ∈ [0, L]` with
/// `n_xi` points, carrying `∂_tψ`.
pub fn evolve_moving_wall(config: &MovingWallSolverConfig, init: &ComplexField) -> Result<EvolutionRecord> {
    let schedule = config.validate()?;
    let (start, end) = config.t_span;
    if init.frame() != Frame::Flat {
        return Err(Error::GridMismatch("moving-wall solver needs flat initial data".into()));
    }
    let grid0 = config.grid_at(start)?;
    if !init.grid().matches(&grid0) {
        return Err(Error::GridMismatch(format!("initial grid {:?} vs well grid {:?}", init.grid(), grid0)));
    }
    if (init.time() - start).abs() > 1e-12 * start.abs().max(1.0) {
        return Err(Error::GridMismatch(format!("initial data at t = {} but span starts at {start}", init.time())));
    }
    init.check_dirichlet(config.boundary_tol)?;

    let n = config.n_xi;
    let sys = System {
        nu: config.wall.nu(),
        m2: config.mass * config.mass,
        dxi: 1.0 / (n - 1) as f64,
        wall: config.wall,
    };
    let zero = Complex64::new(0.0, 0.0);
    let mut f = init.psi().to_vec();
    f[0] = zero;
    f[n - 1] = zero;
    let l0 = config.wall.length_at(start);
    let mut w: Vec<Complex64> = init.dpsi().iter().map(|v| v * l0).collect();
    w[0] = zero;
    w[n - 1] = zero;

    let mut t = start;
    let mut steps = 0usize;
    let mut snapshots = Vec::with_capacity(schedule.len());
    let mut diagnostics = Vec::new();
    let mut next = 0usize;
    let f0 = sys.physical(t, &f, &w)?;
    let d0 = sys.sample(&f0)?;
    let norm0 = d0.norm;
    diagnostics.push(d0);
    if schedule[0] <= start {
        snapshots.push(f0);
        next = 1;
    }

    let mut k = [(); 4].map(|_| (vec![zero; n], vec![zero; n]));
    let mut fs = vec![zero; n];
    let mut ws = vec![zero; n];
    let speed = 1.0 + sys.nu;
    while next < schedule.len() || t < end {
        let target = if next < schedule.len() { schedule[next] } else { end };
        let nominal = config.cfl * sys.dxi * config.wall.length_at(t) / speed;
        let remaining = target - t;
        let (h, lands) = if remaining <= nominal * (1.0 + 1e-9) {
            (remaining, true)
        } else {
            (nominal, false)
        };

        for s in 0..4 {
            let (ts, wf) = match s {
                0 => (t, 0.0),
                1 | 2 => (t + 0.5 * h, 0.5 * h),
                _ => (t + h, h),
            };
            if s == 0 {
                let (a, b) = &mut k[0];
                sys.rhs(ts, &f, &w, a, b);
            } else {
                {
                    let (kf, kp) = &k[s - 1];
                    for i in 0..n {
                        fs[i] = f[i] + kf[i] * wf;
                        ws[i] = w[i] + kp[i] * wf;
                    }
                }
                let (a, b) = &mut k[s];
                sys.rhs(ts, &fs, &ws, a, b);
            }
        }
        for i in 1..n - 1 {
            f[i] += (k[0].0[i] + 2.0 * (k[1].0[i] + k[2].0[i]) + k[3].0[i]) * (h / 6.0);
            w[i] += (k[0].1[i] + 2.0 * (k[1].1[i] + k[2].1[i]) + k[3].1[i]) * (h / 6.0);
        }
        t = if lands { target } else { t + h };
        steps += 1;

        let snap = lands && next < schedule.len();
        if snap || steps % config.diag_every.max(1) == 0 {
            let field = sys.physical(t, &f, &w).map_err(|_| Error::Instability {
                time: t,
                growth: f64::INFINITY,
            })?;
            let d = sys.sample(&field)?;
            check_growth(norm0, d.norm, t)?;
            diagnostics.push(d);
            if snap {
                snapshots.push(field);
                next += 1;
            }
        }
    }

    Ok(EvolutionRecord {
        frame: Frame::Flat,
        nu: sys.nu,
        mass: config.mass,
        snapshots,
        diagnostics,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn static_limit_standing_mode() {
        // ν = 1e-8: the well is [0, 1] to 1e-8 over the run
        let wall = WallConfig::new(1e-8, 1.0, 0.0).unwrap();
        let mut c = MovingWallSolverConfig::new(wall, 513, (0.0, 2.0));
        c.snapshot_times = vec![1.0, 2.0];
        let init = ComplexField::sample(Frame::Flat, 0.0, c.grid_at(0.0).unwrap(), |x| {
            let s = Complex64::new((2.0 * PI * x).sin(), 0.0);
            Ok((s, Complex64::new(0.0, -2.0 * PI) * s))
        })
        .unwrap();
        let rec = evolve_moving_wall(&c, &init).unwrap();
        for snap in rec.snapshots() {
            let t = snap.time();
            let l = wall.length_at(t);
            let err = snap
                .grid()
                .coords()
                .zip(snap.psi())
                .map(|(x, v)| (v - Complex64::from_polar((2.0 * PI * x / l).sin(), -2.0 * PI * t)).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-3, "t={t} err={err}");
        }
        assert!(rec.norm_drift() < 1e-6);
    }

    #[test]
    fn rejects_bad_input() {
        let wall = WallConfig::new(0.5, 1.0, 0.0).unwrap();
        let c = MovingWallSolverConfig::new(wall, 65, (0.0, 1.0));
        let ones = ComplexField::sample(Frame::Flat, 0.0, c.grid_at(0.0).unwrap(), |_| Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)))).unwrap();
        assert!(matches!(evolve_moving_wall(&c, &ones), Err(Error::NonDirichlet { .. })));
        let mut bad = c.clone();
        bad.cfl = 2.0;
        assert!(matches!(evolve_moving_wall(&bad, &ones), Err(Error::Cfl { .. })));
        let wrong = ComplexField::sample(Frame::Flat, 0.0, UniformGrid::new(0.0, 2.0, 65).unwrap(), |_| Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)))).unwrap();
        assert!(matches!(evolve_moving_wall(&c, &wrong), Err(Error::GridMismatch(_))));
    }
}
