//! GCM energy and overlap kernels between coherent states at two angles.
//!
//! Kernels are pure evaluators; no Hill-Wheeler equation is solved here.

use num_complex::Complex64;
use serde::Serialize;

use crate::spin_models::SpinParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    /// `α' - α`
    pub theta: f64,
    /// `(α' + α)/2`
    pub phi_bar: f64,
    pub energy: Complex64,
    pub overlap: f64,
}

/// Integer-or-real power used for kernel exponents `2j`, `2j-1`, `2j-2`.
fn kernel_pow(c: f64, p: f64) -> f64 {
    if (p - p.round()).abs() < 1e-12 {
        c.powi(p.round() as i32)
    } else {
        c.powf(p)
    }
}

/// `N(α, α') = cos^{2j}((α' - α)/2)`.
pub fn overlap_kernel(j: f64, theta: f64) -> f64 {
    kernel_pow((theta / 2.0).cos(), 2.0 * j)
}

/// `K(α, α'; ξ) = ⟨α'|H|α⟩` for the general Hamiltonian.
pub fn energy_kernel(p: &SpinParams, alpha: f64, alpha_prime: f64, xi: f64) -> Complex64 {
    let j = p.j;
    let c = ((alpha_prime - alpha) / 2.0).cos();
    let phi_bar = (alpha_prime + alpha) / 2.0;
    let two_jm1 = 2.0 * j - 1.0;

    let jz_term = -p.a * j * kernel_pow(c, two_jm1) * phi_bar.cos();
    let mut value = Complex64::new(jz_term + p.b * j / 2.0 * kernel_pow(c, 2.0 * j), 0.0);
    if two_jm1 != 0.0 {
        let c2 = kernel_pow(c, 2.0 * j - 2.0);
        value += p.b * j / 2.0 * two_jm1 * c2 * phi_bar.cos().powi(2);
        let (sa, ca) = (alpha / 2.0).sin_cos();
        let (sp, cp) = (alpha_prime / 2.0).sin_cos();
        let phase = Complex64::from_polar(1.0, 2.0 * xi);
        let cross = phase * (sp * sp * ca * ca) + phase.conj() * (sa * sa * cp * cp);
        value += cross * (2.0 * p.g * j * two_jm1 * c2);
    }
    value
}

/// Energy kernel in `(θ, φ̄)` coordinates.
pub fn energy_kernel_centered(p: &SpinParams, theta: f64, phi_bar: f64, xi: f64) -> Complex64 {
    energy_kernel(p, phi_bar - theta / 2.0, phi_bar + theta / 2.0, xi)
}

/// Closed-form Lipkin energy kernel at `ξ = 0`, in units of `ε`.
pub fn lipkin_kernel(chi: f64, ns: u32, theta: f64, phi_bar: f64) -> f64 {
    let n = f64::from(ns);
    let c = (theta / 2.0).cos();
    -(n / 2.0)
        * (kernel_pow(c, n - 1.0) * phi_bar.cos()
            + chi / 2.0 * kernel_pow(c, n - 2.0) * ((1.0 + phi_bar.sin().powi(2)) - c * c))
}

/// Kernel values on a `θ × φ̄` grid over `[-π, π]²` at the minimizing phase.
pub fn kernel_grid(
    p: &SpinParams,
    xi: f64,
    theta_points: usize,
    phi_points: usize,
) -> Vec<KernelValue> {
    use std::f64::consts::PI;
    let axis = |i: usize, n: usize| -PI + 2.0 * PI * i as f64 / (n.max(2) - 1) as f64;
    let mut out = Vec::with_capacity(theta_points * phi_points);
    for it in 0..theta_points {
        let theta = axis(it, theta_points);
        for ip in 0..phi_points {
            let phi_bar = axis(ip, phi_points);
            out.push(KernelValue {
                theta,
                phi_bar,
                energy: energy_kernel_centered(p, theta, phi_bar, xi),
                overlap: overlap_kernel(p.j, theta),
            });
        }
    }
    out
}
