//! Positive-frequency Gaussian wavepacket of the massless field,
//!
//! `ψ(t, x) = A ∫ dp exp(-c²(p - p0)²/2 + i(p(x - x0) - |p|(t - t_ref)))`.
//!
//! The momentum integral is done with 16-point Gauss-Legendre panels over
//! `p0 ± 10/c`, split at `p = 0` where `ω = |p|` has its kink.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::coords::{hyp_to_flat, FlatPoint, HypPoint, WallConfig};
use crate::error::{Error, Result};
use crate::field::{ComplexField, Frame, UniformGrid};
use crate::quad::gauss_legendre;
use crate::specfun::erf;

const WINDOW: f64 = 10.0;
const GL_ORDER: usize = 16;
const PANEL_PHASE: f64 = 6.0;

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    p0: f64,
    width_c: f64,
    x0: f64,
    t_ref: f64,
}

impl PacketSpec {
    pub fn new(p0: f64, width_c: f64) -> Result<Self> {
        if !p0.is_finite() {
            return Err(Error::domain("central momentum p0", p0, "finite"));
        }
        if !(width_c > 0.0 && width_c.is_finite()) {
            return Err(Error::domain("packet width c", width_c, "c > 0"));
        }
        Ok(PacketSpec {
            p0,
            width_c,
            x0: 0.0,
            t_ref: 0.0,
        })
    }

    pub fn with_offset(mut self, x0: f64) -> Self {
        self.x0 = x0;
        self
    }

    /// Time at which the packet has its Gaussian profile centred on `x0`.
    pub fn with_t_ref(mut self, t_ref: f64) -> Self {
        self.t_ref = t_ref;
        self
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn width_c(&self) -> f64 {
        self.width_c
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn t_ref(&self) -> f64 {
        self.t_ref
    }

    /// Standard deviation of the momentum-space Gaussian `e^{-c²(p-p0)²/2}`.
    pub fn momentum_std(&self) -> f64 {
        1.0 / self.width_c
    }
}

/// `A = (c/√π)(e^{-c²p0²} + √π p0 c erf(p0 c))^{-1/2}`.
///
/// With this `A` the Klein-Gordon self-product of the packet is 4; see
/// [`normalized_amplitude`].
pub fn amplitude(spec: &PacketSpec) -> f64 {
    let c = spec.width_c;
    let pc = spec.p0 * c;
    let bracket = (-pc * pc).exp() + PI.sqrt() * pc * erf(pc);
    c / PI.sqrt() / bracket.sqrt()
}

/// Amplitude giving Klein-Gordon norm 1, `A/2`. Used by [`evaluate`].
pub fn normalized_amplitude(spec: &PacketSpec) -> f64 {
    0.5 * amplitude(spec)
}

/// `ψ`, `∂_tψ` and `∂_xψ` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketValue {
    pub psi: Complex64,
    pub d_time: Complex64,
    pub d_space: Complex64,
}

/// `(ψ, ∂_tψ)` of the unit-norm packet.
pub fn evaluate(spec: &PacketSpec, p: FlatPoint) -> (Complex64, Complex64) {
    let v = evaluate_full(spec, p);
    (v.psi, v.d_time)
}

pub fn evaluate_full(spec: &PacketSpec, p: FlatPoint) -> PacketValue {
    evaluate_refined(spec, p, 1)
}

/// As [`evaluate_full`] with every momentum panel split into `refine` parts.
pub fn evaluate_refined(spec: &PacketSpec, p: FlatPoint, refine: usize) -> PacketValue {
    let c = spec.width_c;
    let dx = p.x - spec.x0;
    let dt = p.t - spec.t_ref;
    let lo = spec.p0 - WINDOW / c;
    let hi = spec.p0 + WINDOW / c;
    let rate = dx.abs() + dt.abs();
    let max_width = if rate > 0.0 { (1.0 / c).min(PANEL_PHASE / rate) } else { 1.0 / c };

    let mut acc = [Complex64::new(0.0, 0.0); 3];
    let mut segment = |a: f64, b: f64| {
        if b <= a {
            return;
        }
        let panels = ((b - a) / max_width).ceil().max(1.0) as usize * refine.max(1);
        let width = (b - a) / panels as f64;
        let (nodes, weights) = rule();
        for k in 0..panels {
            let mid = a + (k as f64 + 0.5) * width;
            for (z, w) in nodes.iter().zip(weights) {
                let q = mid + 0.5 * width * z;
                let omega = q.abs();
                let g = (-0.5 * c * c * (q - spec.p0).powi(2)).exp();
                let e = Complex64::from_polar(g * w * 0.5 * width, q * dx - omega * dt);
                acc[0] += e;
                acc[1] += e * Complex64::new(0.0, -omega);
                acc[2] += e * Complex64::new(0.0, q);
            }
        }
    };
    if lo < 0.0 && hi > 0.0 {
        segment(lo, 0.0);
        segment(0.0, hi);
    } else {
        segment(lo, hi);
    }
    let a = normalized_amplitude(spec);
    PacketValue {
        psi: acc[0] * a,
        d_time: acc[1] * a,
        d_space: acc[2] * a,
    }
}

/// Packet on `x ∈ [0, L(t)]` with `n` samples, carrying `∂_tψ`.
pub fn sample_flat(spec: &PacketSpec, cfg: &WallConfig, t: f64, n: usize) -> Result<ComplexField> {
    let l = cfg.length_at(t);
    let grid = UniformGrid::new(0.0, l, n)?;
    ComplexField::sample(Frame::Flat, t, grid, |x| Ok(evaluate(spec, FlatPoint::new(t, x))))
}

/// Packet on the slice `ρ`, `u ∈ [0, ln Λ]` with `n` samples, carrying
/// `∂_τψ = t'∂_tψ + x∂_xψ`.
pub fn sample_hyp(spec: &PacketSpec, cfg: &WallConfig, rho: f64, n: usize) -> Result<ComplexField> {
    let grid = UniformGrid::new(0.0, cfg.lambda().ln(), n)?;
    ComplexField::sample(Frame::Hyperbolic, rho, grid, |u| {
        let f = hyp_to_flat(cfg, HypPoint::new(rho, u.exp())?)?;
        let v = evaluate_full(spec, f);
        let ts = cfg.shifted_time(f.t);
        Ok((v.psi, ts * v.d_time + f.x * v.d_space))
    })
}

/// `∫ g² p² dp / ∫ g² |p| dp` with `g² = e^{-c²(p-p0)²}`, closed form.
pub fn mean_energy(spec: &PacketSpec) -> f64 {
    let c = spec.width_c;
    let p0 = spec.p0;
    let s = c * p0;
    // ∫ |p| g² dp and ∫ p² g² dp
    let first = ((-s * s).exp() + PI.sqrt() * s * erf(s)) / (c * c);
    let second = PI.sqrt() / c * (p0 * p0 + 0.5 / (c * c));
    second / first
}
