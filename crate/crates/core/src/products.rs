//! Klein-Gordon scalar products, the two-component (Feshbach-Villars) form,
//! energy expectation values and redshift diagnostics.
//!
//! All integrals are composite Simpson on the field's uniform grid.

use num_complex::Complex64;

use crate::coords::{check_speed, lambda_of_nu};
use crate::error::{Error, Result};
use crate::field::{ComplexField, Frame, TwoComponentField};
use crate::quad::simpson;

const I: Complex64 = Complex64::new(0.0, 1.0);
const TIME_RTOL: f64 = 1e-12;
/// Relative bound. Evolved fields carry a small imaginary residue from the
/// extrapolated wall Laplacian.
const IMAG_WARN: f64 = 1e-4;

fn check_pair(a: &ComplexField, b: &ComplexField, frame: Frame) -> Result<()> {
    if a.frame() != frame || b.frame() != frame {
        return Err(Error::GridMismatch(format!(
            "expected {frame:?} fields, got {:?} and {:?}",
            a.frame(),
            b.frame()
        )));
    }
    if !a.grid().matches(b.grid()) {
        return Err(Error::GridMismatch(format!("{:?} vs {:?}", a.grid(), b.grid())));
    }
    let scale = a.time().abs().max(b.time().abs()).max(1.0);
    if (a.time() - b.time()).abs() > TIME_RTOL * scale {
        return Err(Error::GridMismatch(format!(
            "time stamps differ: {} vs {}",
            a.time(),
            b.time()
        )));
    }
    Ok(())
}

fn kg_integral(a: &ComplexField, b: &ComplexField) -> Complex64 {
    let integrand: Vec<Complex64> = a
        .psi()
        .iter()
        .zip(a.dpsi())
        .zip(b.psi().iter().zip(b.dpsi()))
        .map(|((pa, da), (pb, db))| I * (pa.conj() * db - pb * da.conj()))
        .collect();
    simpson(&integrand, a.grid().step())
}

/// `⟨a|b⟩ = i ∫ dx (a* ∂_t b - b ∂_t a*)` on a common time slice.
pub fn kg_inner_flat(a: &ComplexField, b: &ComplexField) -> Result<Complex64> {
    check_pair(a, b, Frame::Flat)?;
    Ok(kg_integral(a, b))
}

/// `(a, b) = iρ ∫ dv/v (a* ∂_ρ b - b ∂_ρ a*) = i ∫ du (a* ∂_τ b - b ∂_τ a*)`
/// on a common slice `ρ`.
pub fn kg_inner_hyp(a: &ComplexField, b: &ComplexField) -> Result<Complex64> {
    check_pair(a, b, Frame::Hyperbolic)?;
    Ok(kg_integral(a, b))
}

/// Klein-Gordon product in whichever frame both fields share.
pub fn kg_inner(a: &ComplexField, b: &ComplexField) -> Result<Complex64> {
    check_pair(a, b, a.frame())?;
    Ok(kg_integral(a, b))
}

/// Real Klein-Gordon self-product.
pub fn kg_norm(f: &ComplexField) -> f64 {
    kg_integral(f, f).re
}

/// `φ = (ψ + i∂_tψ)/2`, `χ = (ψ - i∂_tψ)/2`.
pub fn to_two_component(f: &ComplexField) -> Result<TwoComponentField> {
    if f.frame() != Frame::Flat {
        return Err(Error::GridMismatch("two-component form needs a flat field".into()));
    }
    let (phi, chi) = f
        .psi()
        .iter()
        .zip(f.dpsi())
        .map(|(p, d)| {
            let idt = I * d;
            (0.5 * (p + idt), 0.5 * (p - idt))
        })
        .unzip();
    Ok(TwoComponentField {
        frame: f.frame(),
        time: f.time(),
        grid: *f.grid(),
        phi,
        chi,
    })
}

/// `2 ∫ dx Ψ_a† σ3 Ψ_b`.
pub fn vector_inner(a: &TwoComponentField, b: &TwoComponentField) -> Result<Complex64> {
    if !a.grid.matches(&b.grid) {
        return Err(Error::GridMismatch(format!("{:?} vs {:?}", a.grid, b.grid)));
    }
    let integrand: Vec<Complex64> = (0..a.phi.len())
        .map(|i| 2.0 * (a.phi[i].conj() * b.phi[i] - a.chi[i].conj() * b.chi[i]))
        .collect();
    Ok(simpson(&integrand, a.grid.step()))
}

/// Second difference with the wall values entering the first interior
/// stencils; the two wall nodes get the value linearly extrapolated from the
/// interior.
fn laplacian(values: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = values.len();
    let inv = 1.0 / (h * h);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 1..n - 1 {
        out[i] = (values[i - 1] - 2.0 * values[i] + values[i + 1]) * inv;
    }
    out[0] = 2.0 * out[1] - out[2];
    out[n - 1] = 2.0 * out[n - 2] - out[n - 3];
    out
}

fn warn_imaginary(what: &str, z: Complex64) {
    if z.im.abs() > IMAG_WARN * z.re.abs().max(1.0) {
        log::warn!("{what}: imaginary part {:.3e} exceeds sanity bound (real part {:.6e})", z.im, z.re);
    }
}

/// `⟨H⟩ = 2 ∫ dx Ψ† σ3 H Ψ` with the massless two-component Hamiltonian
/// `H = -(σ3 + iσ2)/2 Δ + (σ3 - iσ2)/2`. Not divided by the norm.
pub fn energy_expectation(f: &ComplexField) -> Result<f64> {
    let two = to_two_component(f)?;
    let lap = laplacian(f.psi(), f.grid().step());
    let integrand: Vec<Complex64> = (0..f.len())
        .map(|i| {
            let (phi, chi) = (two.phi[i], two.chi[i]);
            let diff = phi - chi;
            let upper = -0.5 * lap[i] + 0.5 * diff;
            let lower = 0.5 * lap[i] + 0.5 * diff;
            2.0 * (phi.conj() * upper - chi.conj() * lower)
        })
        .collect();
    let e = simpson(&integrand, f.grid().step());
    warn_imaginary("energy expectation", e);
    Ok(e.re)
}

/// `⟨H²⟩ = -i ∫ dx ψ* ↔∂_t (Δψ)`. Not divided by the norm.
pub fn energy_sq_expectation(f: &ComplexField) -> Result<f64> {
    if f.frame() != Frame::Flat {
        return Err(Error::GridMismatch("energy needs a flat field".into()));
    }
    let h = f.grid().step();
    let lap = laplacian(f.psi(), h);
    let lap_dt = laplacian(f.dpsi(), h);
    let integrand: Vec<Complex64> = (0..f.len())
        .map(|i| -I * (f.psi()[i].conj() * lap_dt[i] - lap[i] * f.dpsi()[i].conj()))
        .collect();
    let e = simpson(&integrand, h);
    warn_imaginary("energy-squared expectation", e);
    Ok(e.re)
}

/// `⟨H⟩ / ⟨ψ|ψ⟩`.
pub fn energy_per_norm(f: &ComplexField) -> Result<f64> {
    let n = kg_norm(f);
    if !(n.abs() > 0.0) {
        return Err(Error::Degenerate(n));
    }
    Ok(energy_expectation(f)? / n)
}

/// Centroid and standard deviation of `|ψ|²` over the grid.
pub fn density_moments(f: &ComplexField) -> (f64, f64) {
    let h = f.grid().step();
    let rho = f.density();
    let xs: Vec<f64> = f.grid().coords().collect();
    let m0 = simpson(&rho, h);
    if !(m0 > 0.0) {
        return (f64::NAN, f64::NAN);
    }
    let first: Vec<f64> = rho.iter().zip(&xs).map(|(r, x)| r * x).collect();
    let mean = simpson(&first, h) / m0;
    let second: Vec<f64> = rho.iter().zip(&xs).map(|(r, x)| r * (x - mean).powi(2)).collect();
    (mean, (simpson(&second, h) / m0).max(0.0).sqrt())
}

/// Energy ratio `E_after / E_before` of a massless particle bouncing once off
/// the wall receding at `nu`, traced along exact characteristics.
///
/// Two successive crests of a right-moving wave leave `x = 0` a time `Δs`
/// apart, hit the wall, and return to `x = 0`; the ratio of emission to
/// return spacing is the frequency (and energy) ratio, `(1-ν)/(1+ν)`.
pub fn classical_bounce_ratio(nu: f64) -> Result<f64> {
    check_speed(nu)?;
    // wall at x = 1 + nu t; crest emitted from x = 0 at time s
    let return_time = |s: f64| {
        let t_hit = (1.0 + s) / (1.0 - nu);
        let x_hit = t_hit - s;
        t_hit + x_hit
    };
    let (s0, s1) = (0.0, 1.0);
    Ok((s1 - s0) / (return_time(s1) - return_time(s0)))
}

/// `1 + z = f_ref/f_inc` as the paper's redshift formula writes it,
/// `(1+ν)/(1-ν) = Λ(ν)²`.
pub fn one_plus_z(nu: f64) -> Result<f64> {
    Ok(lambda_of_nu(nu)?.powi(2))
}

/// Reflected-to-incident energy factor for a receding mirror, `Λ(ν)^-2`.
pub fn receding_energy_factor(nu: f64) -> Result<f64> {
    Ok(lambda_of_nu(nu)?.powi(-2))
}
