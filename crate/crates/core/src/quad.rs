//! Composite trapezoid quadrature on the full period `[0, 2*pi]`.
//!
//! With equal endpoint values the trapezoid weights collapse to a plain
//! uniform sum, which is spectrally accurate for smooth periodic
//! integrands and exact for trigonometric polynomials resolved by the
//! grid.

use std::f64::consts::PI;

/// `integral_0^{2 pi} g(x) dx` on a uniform `points`-point grid.
pub fn periodic_trapezoid(points: usize, g: impl Fn(f64) -> f64) -> f64 {
    let h = 2.0 * PI / points as f64;
    let sum: f64 = (0..points).map(|j| g(j as f64 * h)).sum();
    h * sum
}

/// Unnormalized `L_q(0, 2 pi)` norm of `f` by periodic trapezoid.
pub fn lq_norm_periodic(q: f64, points: usize, f: impl Fn(f64) -> f64) -> f64 {
    periodic_trapezoid(points, |x| f(x).abs().powf(q)).powf(1.0 / q)
}
