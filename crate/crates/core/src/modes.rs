//! Exact solutions of the moving-wall problem.
//!
//! In the log coordinates `τ = ln ρ`, `u = ln v` the well is the static strip
//! `0 <= u <= ln Λ(ν)` and the massless equation is the plain wave equation
//! `∂²_τ Ψ = ∂²_u Ψ`. Dirichlet walls select `sin(k_n u)` with
//! `k_n = nπ / ln Λ(ν)`:
//!
//! * massless: `Ψ_n = sin(k_n u) e^{-i k_n τ} / sqrt(nπ)`,
//! * massive:  `Φ_n = C sin(k_n u) [a_J J_{ik_n}(mρ) + a_Y Y_{ik_n}(mρ)]`.
//!
//! `Ψ_n` has Klein-Gordon norm 1; `Φ_n` is scaled to norm ±1, the sign being
//! fixed by the choice of `(a_J, a_Y)`. A real solution is
//! obtained from either family by taking the real part ([`ModeValue::real`]).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coords::{flat_to_hyp, FlatPoint, HypPoint, WallConfig};
use crate::error::{Error, Result};
use crate::field::{ComplexField, Frame, UniformGrid};
use crate::quad::simpson;
use crate::specfun::bessel_imag_order;

const I: Complex64 = Complex64::new(0.0, 1.0);
// relative slack on well membership tests
const EDGE_RTOL: f64 = 1e-12;
const NORM_SAMPLES: usize = 2049;
const DEGENERATE_PRODUCT: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    n: u32,
    mass: f64,
    cfg: WallConfig,
    a_j: Complex64,
    a_y: Complex64,
}

impl ModeSpec {
    pub fn new(n: u32, mass: f64, cfg: WallConfig) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("quantum number n", 0.0, "n >= 1"));
        }
        if !(mass >= 0.0 && mass.is_finite()) {
            return Err(Error::domain("mass m", mass, "m >= 0"));
        }
        Ok(ModeSpec {
            n,
            mass,
            cfg,
            a_j: Complex64::new(1.0, 0.0),
            a_y: Complex64::new(1.0, 0.0),
        })
    }

    pub fn massless(n: u32, cfg: WallConfig) -> Result<Self> {
        ModeSpec::new(n, 0.0, cfg)
    }

    /// Weights of `J_{ik}` and `Y_{ik}` in the massive radial factor.
    pub fn with_coefficients(mut self, a_j: Complex64, a_y: Complex64) -> Self {
        self.a_j = a_j;
        self.a_y = a_y;
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn wall(&self) -> &WallConfig {
        &self.cfg
    }

    pub fn coefficients(&self) -> (Complex64, Complex64) {
        (self.a_j, self.a_y)
    }

    pub fn wavenumber(&self) -> f64 {
        self.n as f64 * PI / self.cfg.lambda().ln()
    }
}

/// `k_n = nπ / ln Λ(ν)`.
pub fn k_of_n(spec: &ModeSpec) -> f64 {
    spec.wavenumber()
}

/// Mode value with its first derivatives. In the hyperbolic frame the
/// derivatives are along `τ` and `u`, in the flat frame along `t` and `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeValue {
    pub psi: Complex64,
    pub d_time: Complex64,
    pub d_space: Complex64,
}

impl ModeValue {
    pub fn real(self) -> ModeValue {
        ModeValue {
            psi: self.psi.re.into(),
            d_time: self.d_time.re.into(),
            d_space: self.d_space.re.into(),
        }
    }
}

fn check_strip(cfg: &WallConfig, u: f64) -> Result<()> {
    let width = cfg.lambda().ln();
    if u >= -EDGE_RTOL * width && u <= width * (1.0 + EDGE_RTOL) {
        Ok(())
    } else {
        Err(Error::domain("strip coordinate u = ln v", u, "0 <= u <= ln Λ"))
    }
}

fn check_well(cfg: &WallConfig, p: FlatPoint) -> Result<()> {
    if !(p.t >= cfg.t0()) {
        return Err(Error::domain("time t", p.t, "t >= t0"));
    }
    let l = cfg.length_at(p.t);
    if p.x >= -EDGE_RTOL * l && p.x <= l * (1.0 + EDGE_RTOL) {
        Ok(())
    } else {
        Err(Error::domain("position x", p.x, "0 <= x <= L(t)"))
    }
}

/// Converts `(ψ, ψ_τ, ψ_u)` at a flat point to `(ψ, ψ_t, ψ_x)`.
fn hyp_to_flat_derivatives(cfg: &WallConfig, p: FlatPoint, h: ModeValue) -> ModeValue {
    let ts = cfg.shifted_time(p.t);
    let rho2 = (ts + p.x) * (ts - p.x);
    ModeValue {
        psi: h.psi,
        d_time: (h.d_time * ts - h.d_space * p.x) / rho2,
        d_space: (h.d_space * ts - h.d_time * p.x) / rho2,
    }
}

/// Shared evaluation and sampling for the exact solutions.
pub trait ExactSolution {
    fn wall(&self) -> &WallConfig;

    /// Value and `(∂_τ, ∂_u)` derivatives at `τ = ln ρ`, `u = ln v`.
    fn eval_log(&self, tau: f64, u: f64) -> Result<ModeValue>;

    fn eval_hyp(&self, p: HypPoint) -> Result<ModeValue> {
        self.eval_log(p.rho.ln(), p.v.ln())
    }

    /// Value and `(∂_t, ∂_x)` derivatives at a point of the well.
    fn eval_flat(&self, p: FlatPoint) -> Result<ModeValue> {
        check_well(self.wall(), p)?;
        let h = flat_to_hyp(self.wall(), p)?;
        let v = self.eval_hyp(h)?;
        Ok(hyp_to_flat_derivatives(self.wall(), p, v))
    }

    /// Flat-frame field on `n` uniform points of `[0, L(t)]`.
    fn sample_flat(&self, t: f64, n: usize) -> Result<ComplexField> {
        let grid = UniformGrid::new(0.0, self.wall().length_at(t), n)?;
        ComplexField::sample(Frame::Flat, t, grid, |x| {
            let v = self.eval_flat(FlatPoint::new(t, x))?;
            Ok((v.psi, v.d_time))
        })
    }

    /// Hyperbolic-frame field on `n` uniform points of `u ∈ [0, ln Λ]`.
    fn sample_hyp(&self, rho: f64, n: usize) -> Result<ComplexField> {
        let grid = UniformGrid::new(0.0, self.wall().lambda().ln(), n)?;
        let tau = rho.ln();
        ComplexField::sample(Frame::Hyperbolic, rho, grid, |u| {
            let v = self.eval_log(tau, u)?;
            Ok((v.psi, v.d_time))
        })
    }
}

/// Massless mode `Ψ_n`.
#[derive(Debug, Clone, Copy)]
pub struct MasslessMode {
    spec: ModeSpec,
    k: f64,
    amp: f64,
}

impl MasslessMode {
    pub fn new(spec: ModeSpec) -> Result<Self> {
        if spec.mass != 0.0 {
            return Err(Error::domain("mass m of massless mode", spec.mass, "m = 0"));
        }
        Ok(MasslessMode {
            spec,
            k: spec.wavenumber(),
            amp: 1.0 / (spec.n as f64 * PI).sqrt(),
        })
    }

    pub fn spec(&self) -> &ModeSpec {
        &self.spec
    }

    /// The same mode written as right- and left-moving pieces,
    /// `[(t'-x)^{-ik} - (t'+x)^{-ik}] / (2i sqrt(nπ))`, differentiated
    /// directly in `(t, x)`.
    pub fn eval_flat_characteristic(&self, p: FlatPoint) -> Result<ModeValue> {
        check_well(&self.spec.cfg, p)?;
        let ts = self.spec.cfg.shifted_time(p.t);
        let plus = ts + p.x;
        let minus = ts - p.x;
        let k = self.k;
        let right = (-I * k * minus.ln()).exp();
        let left = (-I * k * plus.ln()).exp();
        let pref = self.amp / (2.0 * I);
        let d_right = -I * k / minus * right;
        let d_left = -I * k / plus * left;
        Ok(ModeValue {
            psi: pref * (right - left),
            d_time: pref * (d_right - d_left),
            d_space: pref * (-d_right - d_left),
        })
    }
}

impl ExactSolution for MasslessMode {
    fn wall(&self) -> &WallConfig {
        &self.spec.cfg
    }

    fn eval_log(&self, tau: f64, u: f64) -> Result<ModeValue> {
        check_strip(&self.spec.cfg, u)?;
        let k = self.k;
        let phase = (-I * k * tau).exp() * self.amp;
        let (s, c) = (k * u).sin_cos();
        let psi = phase * s;
        Ok(ModeValue {
            psi,
            d_time: -I * k * psi,
            d_space: phase * (k * c),
        })
    }
}

/// `Ψ_n(ρ, v) = sin(k_n ln v) exp(-i k_n ln ρ) / sqrt(nπ)` inside the strip
/// `1 <= v <= Λ`.
pub fn massless_mode_hyp(spec: &ModeSpec, p: HypPoint) -> Result<Complex64> {
    let p = HypPoint::new(p.rho, p.v)?;
    Ok(MasslessMode::new(*spec)?.eval_hyp(p)?.psi)
}

/// `Ψ_n(t, x)` in flat coordinates:
/// `sin[(k/2) ln((t'+x)/(t'-x))] exp[-i (k/2) ln(t'² - x²)] / sqrt(nπ)`.
pub fn massless_mode_flat(spec: &ModeSpec, p: FlatPoint) -> Result<Complex64> {
    let m = MasslessMode::new(*spec)?;
    check_well(&spec.cfg, p)?;
    let ts = spec.cfg.shifted_time(p.t);
    let plus = ts + p.x;
    let minus = ts - p.x;
    let half_k = 0.5 * m.k;
    let standing = (half_k * (plus / minus).ln()).sin();
    let phase = (-I * half_k * (plus * minus).ln()).exp();
    Ok(phase * standing * m.amp)
}

/// Massive mode `Φ_n` with its normalization constant.
#[derive(Debug, Clone, Copy)]
pub struct MassiveMode {
    spec: ModeSpec,
    k: f64,
    norm: f64,
}

impl MassiveMode {
    pub fn new(spec: ModeSpec) -> Result<Self> {
        if !(spec.mass > 0.0) {
            return Err(Error::domain("mass m of massive mode", spec.mass, "m > 0"));
        }
        let c = normalize_massive(&spec, 1.0 / spec.mass)?;
        Ok(MassiveMode {
            spec,
            k: spec.wavenumber(),
            norm: c.re,
        })
    }

    pub fn spec(&self) -> &ModeSpec {
        &self.spec
    }

    pub fn normalization(&self) -> f64 {
        self.norm
    }

    /// `a_J J_{ik}(mρ) + a_Y Y_{ik}(mρ)` and its `ρ`-derivative.
    pub fn radial(&self, rho: f64) -> Result<(Complex64, Complex64)> {
        radial(&self.spec, rho)
    }
}

fn radial(spec: &ModeSpec, rho: f64) -> Result<(Complex64, Complex64)> {
    let b = bessel_imag_order(spec.wavenumber(), spec.mass * rho)?;
    let r = spec.a_j * b.j_val + spec.a_y * b.y_val;
    let dr = (spec.a_j * b.j_der + spec.a_y * b.y_der) * spec.mass;
    Ok((r, dr))
}

impl ExactSolution for MassiveMode {
    fn wall(&self) -> &WallConfig {
        &self.spec.cfg
    }

    fn eval_log(&self, tau: f64, u: f64) -> Result<ModeValue> {
        check_strip(&self.spec.cfg, u)?;
        let rho = tau.exp();
        let (r, dr) = self.radial(rho)?;
        let (s, c) = (self.k * u).sin_cos();
        Ok(ModeValue {
            psi: r * (self.norm * s),
            d_time: dr * (rho * self.norm * s),
            d_space: r * (self.norm * self.k * c),
        })
    }
}

/// `Φ_n(ρ, v)` with the constant `C` from [`normalize_massive`].
pub fn massive_mode_hyp(spec: &ModeSpec, p: HypPoint) -> Result<Complex64> {
    let p = HypPoint::new(p.rho, p.v)?;
    Ok(MassiveMode::new(*spec)?.eval_hyp(p)?.psi)
}

/// Hyperbolic product `iρ ∫ du sin²(k u) (R* ∂_ρR - R ∂_ρR*)` of an
/// unnormalized mode with radial factor `(R, ∂_ρR)` at `rho`.
fn unnormalized_product(cfg: &WallConfig, k: f64, rho: f64, r: Complex64, dr: Complex64) -> f64 {
    let width = cfg.lambda().ln();
    let h = width / (NORM_SAMPLES - 1) as f64;
    let sin2: Vec<f64> = (0..NORM_SAMPLES).map(|i| (k * i as f64 * h).sin().powi(2)).collect();
    let flux = -2.0 * rho * (r.conj() * dr).im;
    flux * simpson(&sin2, h)
}

fn constant_from_product(product: f64) -> Result<Complex64> {
    if !(product.abs() > DEGENERATE_PRODUCT) || !product.is_finite() {
        return Err(Error::Degenerate(product));
    }
    Ok(Complex64::new(1.0 / product.abs().sqrt(), 0.0))
}

/// Real positive `C` making the Klein-Gordon self-product of `Φ_n` equal to
/// ±1, evaluated on the slice `rho_ref`. The flux is conserved, so the result
/// does not depend on `rho_ref` beyond quadrature and Bessel error.
///
/// Near `ρ = 0`, `J_{ik}(mρ) ∝ ρ^{+ik}` oscillates with negative frequency in
/// `τ = ln ρ`, and the default `J + Y` has product `-1` after normalization;
/// see [`massive_norm_sign`]. `a_J = cosh(kπ)`, `a_Y = -i sinh(kπ)` selects
/// `J_{-ik}`, the positive-norm solution.
pub fn normalize_massive(spec: &ModeSpec, rho_ref: f64) -> Result<Complex64> {
    if !(spec.mass > 0.0) {
        return Err(Error::domain("mass m of massive mode", spec.mass, "m > 0"));
    }
    if !(rho_ref > 0.0) {
        return Err(Error::domain("reference slice rho", rho_ref, "rho > 0"));
    }
    let (r, dr) = radial(spec, rho_ref)?;
    constant_from_product(unnormalized_product(&spec.cfg, spec.wavenumber(), rho_ref, r, dr))
}

/// Sign of the Klein-Gordon self-product of `Φ_n` for the chosen weights.
pub fn massive_norm_sign(spec: &ModeSpec) -> Result<f64> {
    if !(spec.mass > 0.0) {
        return Err(Error::domain("mass m of massive mode", spec.mass, "m > 0"));
    }
    let rho = 1.0 / spec.mass;
    let (r, dr) = radial(spec, rho)?;
    let p = unnormalized_product(&spec.cfg, spec.wavenumber(), rho, r, dr);
    if !(p.abs() > DEGENERATE_PRODUCT) {
        return Err(Error::Degenerate(p));
    }
    Ok(p.signum())
}

/// The same normalization procedure applied to the massless radial factor
/// `ρ^{-ik}`; returns `1/sqrt(nπ)` up to quadrature error.
pub fn normalize_massless(spec: &ModeSpec, rho_ref: f64) -> Result<Complex64> {
    if !(rho_ref > 0.0) {
        return Err(Error::domain("reference slice rho", rho_ref, "rho > 0"));
    }
    let k = spec.wavenumber();
    let r = (-I * k * rho_ref.ln()).exp();
    let dr = -I * k / rho_ref * r;
    constant_from_product(unnormalized_product(&spec.cfg, k, rho_ref, r, dr))
}
