//! Coherent-state energy surface `H(α, ξ)` and its minimum.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::numeric::golden_min;
use crate::spin_models::SpinParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub alpha: f64,
    pub xi: f64,
    pub energy: f64,
}

/// Normalized expectation value `⟨jz|H|jz⟩/⟨jz|jz⟩` with `z = tan(α/2)e^{-iξ}`.
pub fn energy_surface(p: &SpinParams, alpha: f64, xi: f64) -> f64 {
    let j = p.j;
    let (s, c) = (alpha / 2.0).sin_cos();
    -p.a * j * alpha.cos()
        + p.b * (j * j - j * (j - 0.5) * alpha.sin().powi(2))
        + 4.0 * p.g * j * (2.0 * j - 1.0) * s * s * c * c * (2.0 * xi).cos()
}

/// Phase that minimizes the `G` term: `π/2` for `G > 0`, else `0`.
pub fn minimize_xi(p: &SpinParams) -> f64 {
    if p.g > 0.0 {
        FRAC_PI_2
    } else {
        0.0
    }
}

/// The surface along `α` at the minimizing phase.
pub fn energy_curve(p: &SpinParams, alpha: f64) -> f64 {
    energy_surface(p, alpha, minimize_xi(p))
}

const SCAN_POINTS: usize = 1024;

/// Global minimum of the `ξ`-minimized curve over `α ∈ [0, π]`.
pub fn semiclassical_minimum(p: &SpinParams) -> SurfacePoint {
    let xi = minimize_xi(p);
    let step = PI / (SCAN_POINTS - 1) as f64;
    let f = |a: f64| energy_surface(p, a, xi);
    let best = (0..SCAN_POINTS)
        .min_by(|&a, &b| f(a as f64 * step).total_cmp(&f(b as f64 * step)))
        .unwrap_or(0);
    let lo = (best as f64 - 1.0).max(0.0) * step;
    let hi = ((best + 1) as f64 * step).min(PI);
    let refined = golden_min(f, lo, hi, 1e-12);
    // Endpoint minima (α = 0, π) are common; keep the better of the
    // refined interior point and the bracket ends.
    let alpha = [lo, refined, hi]
        .into_iter()
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap_or(refined);
    SurfacePoint {
        alpha,
        xi,
        energy: f(alpha),
    }
}

/// `(α, E(α))` samples of the minimized curve on `[0, π]`.
pub fn surface_curve(p: &SpinParams, points: usize) -> Vec<SurfacePoint> {
    let xi = minimize_xi(p);
    let points = points.max(2);
    (0..points)
        .map(|i| {
            let alpha = PI * i as f64 / (points - 1) as f64;
            SurfacePoint {
                alpha,
                xi,
                energy: energy_surface(p, alpha, xi),
            }
        })
        .collect()
}
