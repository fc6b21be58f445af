//! Sampled fields on uniform grids.
//!
//! A flat-frame field lives on `x ∈ [0, L(t)]` at a fixed time `t` and carries
//! `∂_t ψ`. A hyperbolic-frame field lives on `u = ln v ∈ [0, ln Λ]` at a fixed
//! `ρ` and carries `ρ ∂_ρ ψ = ∂_τ ψ` (with `τ = ln ρ`).

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 8;
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-10;
const GRID_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    Flat,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    start: f64,
    step: f64,
    len: usize,
}

impl UniformGrid {
    pub fn new(start: f64, end: f64, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidField(format!("grid needs at least 2 points, got {len}")));
        }
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(Error::InvalidField(format!("grid bounds [{start}, {end}] not increasing")));
        }
        Ok(UniformGrid {
            start,
            step: (end - start) / (len - 1) as f64,
            len,
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.start + self.step * (self.len - 1) as f64
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn coord(&self, i: usize) -> f64 {
        if i + 1 == self.len {
            self.end()
        } else {
            self.start + self.step * i as f64
        }
    }

    pub fn coords(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.coord(i))
    }

    /// Same length and node positions to 1e-12 relative to the span.
    pub fn matches(&self, other: &UniformGrid) -> bool {
        let span = (self.end() - self.start).abs().max(f64::MIN_POSITIVE);
        self.len == other.len
            && (self.start - other.start).abs() <= GRID_RTOL * span
            && (self.step - other.step).abs() <= GRID_RTOL * self.step.abs()
    }
}

/// `ψ` and its time-like derivative sampled on a grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    frame: Frame,
    time: f64,
    grid: UniformGrid,
    psi: Vec<Complex64>,
    dpsi: Vec<Complex64>,
}

impl ComplexField {
    /// `time` is `t` for flat fields and `ρ` for hyperbolic ones.
    pub fn new(frame: Frame, time: f64, grid: UniformGrid, psi: Vec<Complex64>, dpsi: Vec<Complex64>) -> Result<Self> {
        if psi.len() != grid.len() || dpsi.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "grid has {} points but psi/dpsi have {}/{}",
                grid.len(),
                psi.len(),
                dpsi.len()
            )));
        }
        if grid.len() < MIN_SAMPLES {
            return Err(Error::InvalidField(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                grid.len()
            )));
        }
        if frame == Frame::Hyperbolic && !(time > 0.0) {
            return Err(Error::domain("hyperbolic time stamp rho", time, "rho > 0"));
        }
        if psi.iter().chain(&dpsi).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidField("non-finite sample".into()));
        }
        Ok(ComplexField {
            frame,
            time,
            grid,
            psi,
            dpsi,
        })
    }

    /// Samples `f(coord) -> (ψ, dψ)` at every grid node.
    pub fn sample<F>(frame: Frame, time: f64, grid: UniformGrid, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<(Complex64, Complex64)>,
    {
        let mut psi = Vec::with_capacity(grid.len());
        let mut dpsi = Vec::with_capacity(grid.len());
        for c in grid.coords() {
            let (p, d) = f(c)?;
            psi.push(p);
            dpsi.push(d);
        }
        ComplexField::new(frame, time, grid, psi, dpsi)
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn psi(&self) -> &[Complex64] {
        &self.psi
    }

    pub fn dpsi(&self) -> &[Complex64] {
        &self.dpsi
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn boundary_max(&self) -> f64 {
        self.psi[0].norm().max(self.psi[self.len() - 1].norm())
    }

    pub fn check_dirichlet(&self, tol: f64) -> Result<()> {
        let b = self.boundary_max();
        if b <= tol {
            Ok(())
        } else {
            Err(Error::NonDirichlet { value: b, tol })
        }
    }

    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// `(φ, χ)` with `ψ = φ + χ`, `i ∂_t ψ = φ - χ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoComponentField {
    pub(crate) frame: Frame,
    pub(crate) time: f64,
    pub(crate) grid: UniformGrid,
    pub(crate) phi: Vec<Complex64>,
    pub(crate) chi: Vec<Complex64>,
}

impl TwoComponentField {
    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn phi(&self) -> &[Complex64] {
        &self.phi
    }

    pub fn chi(&self) -> &[Complex64] {
        &self.chi
    }

    /// `(ψ, ∂_t ψ)` recovered from the two components.
    pub fn reconstruct(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let minus_i = Complex64::new(0.0, -1.0);
        let psi = self.phi.iter().zip(&self.chi).map(|(p, c)| p + c).collect();
        let dpsi = self.phi.iter().zip(&self.chi).map(|(p, c)| (p - c) * minus_i).collect();
        (psi, dpsi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_exact() {
        let g = UniformGrid::new(0.0, 3f64.sqrt().ln(), 1025).unwrap();
        assert_eq!(g.coord(0), 0.0);
        assert_eq!(g.coord(1024), 3f64.sqrt().ln());
        assert!(UniformGrid::new(1.0, 1.0, 10).is_err());
        assert!(UniformGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn field_validation() {
        let g = UniformGrid::new(0.0, 1.0, 8).unwrap();
        let z = vec![Complex64::new(0.0, 0.0); 8];
        assert!(ComplexField::new(Frame::Flat, 0.0, g, z.clone(), z.clone()).is_ok());
        assert!(ComplexField::new(Frame::Flat, 0.0, g, z[..7].to_vec(), z.clone()).is_err());
        assert!(ComplexField::new(Frame::Hyperbolic, 0.0, g, z.clone(), z.clone()).is_err());
        let small = UniformGrid::new(0.0, 1.0, 7).unwrap();
        assert!(ComplexField::new(Frame::Flat, 0.0, small, z[..7].to_vec(), z[..7].to_vec()).is_err());
    }

    #[test]
    fn dirichlet_check() {
        let g = UniformGrid::new(0.0, 1.0, 9).unwrap();
        let f = ComplexField::sample(Frame::Flat, 0.0, g, |x| {
            Ok((Complex64::new((std::f64::consts::PI * x).sin(), 0.0), Complex64::new(0.0, 0.0)))
        })
        .unwrap();
        assert!(f.check_dirichlet(DEFAULT_BOUNDARY_TOL).is_ok());
        let g2 = UniformGrid::new(0.0, 1.0, 9).unwrap();
        let f = ComplexField::sample(Frame::Flat, 0.0, g2, |_| Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)))).unwrap();
        assert!(matches!(f.check_dirichlet(1e-10), Err(Error::NonDirichlet { .. })));
    }
}
