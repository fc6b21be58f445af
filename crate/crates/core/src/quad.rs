//! Quadrature rules on uniform grids and Gauss-Legendre panels.

use std::ops::{Add, Mul};

/// Composite Simpson rule for samples on a uniform grid of spacing `h`.
///
/// An even number of samples (odd number of intervals) closes with the
/// Simpson 3/8 rule on the last three intervals. Needs at least 4 samples
/// in that case, 3 otherwise.
pub fn simpson<T>(samples: &[T], h: f64) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T> + Default,
{
    let n = samples.len();
    assert!(n >= 3, "simpson needs at least 3 samples");
    let (body, tail) = if n % 2 == 1 { (n, 0) } else { (n - 3, 3) };
    assert!(body >= 1 && (tail == 0 || n >= 4));

    let mut acc = T::default();
    if body >= 3 {
        let mut odd = T::default();
        let mut even = T::default();
        for i in 1..body - 1 {
            if i % 2 == 1 {
                odd = odd + samples[i];
            } else {
                even = even + samples[i];
            }
        }
        acc = (samples[0] + samples[body - 1]) * (h / 3.0) + odd * (4.0 * h / 3.0) + even * (2.0 * h / 3.0);
    }
    if tail == 3 {
        let s = &samples[n - 4..];
        acc = acc + (s[0] + s[3] + (s[1] + s[2]) * 3.0) * (3.0 * h / 8.0);
    }
    acc
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
