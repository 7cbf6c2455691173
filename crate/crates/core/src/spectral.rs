//! Plane-wave solver for `[-d/dφ K(φ) d/dφ + V(φ)] ψ = E ψ` on the circle.
//!
//! In the basis `e^{inφ}/√(2π)`, `|n| <= n_max`, the operator has entries
//! `T_mn = m·n·K̂(m-n) + V̂(m-n)`, with `f̂(d) = (1/2π)∫ f e^{-idφ} dφ`
//! obtained by trapezoidal quadrature (exact for trigonometric polynomials
//! of degree below the quadrature size).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{angle_grid, AngleFunction, AngleHamiltonian};
use crate::exact::{Spectrum, SpectrumSource};
use crate::linalg::{hermitian_eigen, ComplexMatrix};
use crate::numeric::ComplexSum;
use crate::{Error, Result};

/// Tolerance below zero accepted for `K(φ)` on the quadrature grid.
pub const KINETIC_TOLERANCE: f64 = 1e-12;
/// Largest Fourier coefficient allowed beyond `2·n_max`, relative to the
/// largest coefficient (or absolute when that is below one).
pub const TAIL_TOLERANCE: f64 = 1e-10;
/// Largest change of a low eigenvalue when `n_max` is doubled.
pub const DRIFT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub n_max: usize,
    pub quadrature_points: usize,
    /// Number of eigenvalues kept; `None` keeps all `2·n_max + 1`.
    pub eig_count: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::with_cutoff(64)
    }
}

impl SolverConfig {
    /// Cutoff `n_max` with the default `8·n_max` quadrature points.
    pub fn with_cutoff(n_max: usize) -> Self {
        Self {
            n_max,
            quadrature_points: 8 * n_max,
            eig_count: None,
        }
    }

    pub fn eig_count(mut self, count: usize) -> Self {
        self.eig_count = Some(count);
        self
    }

    pub fn dim(&self) -> usize {
        2 * self.n_max + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 2 {
            return Err(Error::InvalidConfig(format!(
                "n_max must be at least 2, got {}",
                self.n_max
            )));
        }
        if self.quadrature_points < 4 * self.n_max {
            return Err(Error::InvalidConfig(format!(
                "quadrature_points must be at least 4·n_max = {}, got {}",
                4 * self.n_max,
                self.quadrature_points
            )));
        }
        if self.eig_count == Some(0) {
            return Err(Error::InvalidConfig("eig_count must be positive".into()));
        }
        Ok(())
    }

    fn doubled(&self) -> Self {
        Self {
            n_max: 2 * self.n_max,
            quadrature_points: 2 * self.quadrature_points,
            eig_count: self.eig_count,
        }
    }
}

/// Angle-space spectrum with its plane-wave eigenvectors.
#[derive(Debug, Clone, Serialize)]
pub struct AngleSpectrum {
    pub spectrum: Spectrum,
    /// `coefficients[k][n + n_max]` is the amplitude of `e^{inφ}/√(2π)` in `ψ_k`.
    #[serde(skip)]
    pub coefficients: Option<Vec<Vec<Complex64>>>,
    /// Whether the low eigenvalues moved less than the drift tolerance when
    /// the cutoff was doubled.
    pub converged: bool,
    pub drift: f64,
    pub n_max: usize,
}

impl AngleSpectrum {
    pub fn ground(&self) -> f64 {
        self.spectrum.ground()
    }

    /// `ψ_k(φ)` on the given points, phase-fixed so that its largest sample
    /// is real and positive. `None` without stored eigenvectors.
    pub fn eigenfunction(&self, k: usize, phis: &[f64]) -> Option<Vec<Complex64>> {
        let coeffs = self.coefficients.as_ref()?.get(k)?;
        let n = self.n_max as i64;
        let norm = 1.0 / TAU.sqrt();
        let mut psi: Vec<Complex64> = phis
            .iter()
            .map(|&phi| {
                let mut acc = ComplexSum::default();
                for (i, c) in coeffs.iter().enumerate() {
                    acc.add(c * Complex64::from_polar(norm, (i as i64 - n) as f64 * phi));
                }
                acc.value()
            })
            .collect();
        if let Some(peak) = psi
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        {
            if peak.norm() > 0.0 {
                let phase = peak.conj() / peak.norm();
                psi.iter_mut().for_each(|z| *z *= phase);
            }
        }
        Some(psi)
    }
}

/// `f̂(d)` for `|d| <= d_max` from `q` samples of `f`'s exact evaluator.
fn quadrature_coefficients(
    f: &AngleFunction,
    q: usize,
    d_max: usize,
) -> (Vec<f64>, Vec<Complex64>) {
    let grid = angle_grid(q);
    let values: Vec<f64> = grid.iter().map(|&p| f.eval(p)).collect();
    let d_max = d_max as i64;
    let coeffs = (-d_max..=d_max)
        .map(|d| {
            let mut acc = ComplexSum::default();
            for (&phi, &v) in grid.iter().zip(&values) {
                acc.add(Complex64::from_polar(v, -(d as f64) * phi));
            }
            acc.value() / q as f64
        })
        .collect();
    (values, coeffs)
}

/// Largest `|f̂(d)|` with `2·n_max < |d| < q/2`, relative to the largest
/// coefficient when that exceeds one.
fn fourier_tail(coeffs: &[Complex64], n_max: usize, q: usize) -> f64 {
    let d_max = (coeffs.len() / 2) as i64;
    let scale = coeffs.iter().fold(1.0f64, |m, c| m.max(c.norm()));
    let lo = 2 * n_max as i64;
    let hi = (q / 2) as i64;
    (-d_max..=d_max)
        .filter(|d| d.abs() > lo && d.abs() < hi)
        .map(|d| coeffs[(d + d_max) as usize].norm())
        .fold(0.0, f64::max)
        / scale
}

/// Plane-wave matrix of the angle Hamiltonian.
pub fn assemble(h: &AngleHamiltonian, cfg: &SolverConfig) -> Result<ComplexMatrix> {
    cfg.validate()?;
    let q = cfg.quadrature_points;
    let d_max = (q / 2).saturating_sub(1).max(2 * cfg.n_max);

    let (k_values, k_hat) = quadrature_coefficients(&h.kinetic_coeff, q, d_max);
    let grid = angle_grid(q);
    if let Some((phi, value)) = grid
        .iter()
        .zip(&k_values)
        .map(|(&p, &v)| (p, v))
        .min_by(|a, b| a.1.total_cmp(&b.1))
    {
        if value < -KINETIC_TOLERANCE {
            return Err(Error::NegativeKinetic { phi, value });
        }
    }
    let (_, v_hat) = quadrature_coefficients(&h.potential, q, d_max);
    let tail = fourier_tail(&k_hat, cfg.n_max, q).max(fourier_tail(&v_hat, cfg.n_max, q));
    if tail > TAIL_TOLERANCE {
        return Err(Error::InsufficientCutoff {
            cutoff: cfg.n_max,
            tail,
        });
    }

    let n = cfg.n_max as i64;
    let dim = cfg.dim();
    let mut t = ComplexMatrix::zeros(dim);
    let at = |c: &[Complex64], d: i64| c[(d + d_max as i64) as usize];
    for (row, m) in (-n..=n).enumerate() {
        for (col, k) in (-n..=n).enumerate() {
            let d = m - k;
            t[(row, col)] = at(&k_hat, d) * (m * k) as f64 + at(&v_hat, d);
        }
    }
    // Quadrature round-off can break c(-d) = conj(c(d)) in the last digit.
    for row in 0..dim {
        for col in 0..row {
            let avg = 0.5 * (t[(row, col)] + t[(col, row)].conj());
            t[(row, col)] = avg;
            t[(col, row)] = avg.conj();
        }
        t[(row, row)].im = 0.0;
    }
    Ok(t)
}

type PlaneWaveVectors = Option<Vec<Vec<Complex64>>>;

fn eigen_at(
    h: &AngleHamiltonian,
    cfg: &SolverConfig,
    want_vectors: bool,
) -> Result<(Vec<f64>, PlaneWaveVectors)> {
    let t = assemble(h, cfg)?;
    let eig = hermitian_eigen(&t, want_vectors)?;
    Ok((eig.values, eig.vectors))
}

/// Eigenvalues (and plane-wave eigenvectors) of the angle Hamiltonian.
///
/// The lowest `min(eig_count, n_max/2)` eigenvalues are recomputed at
/// twice the cutoff; `converged` reports whether they moved less than
/// [`DRIFT_TOLERANCE`].
pub fn solve(h: &AngleHamiltonian, cfg: &SolverConfig) -> Result<AngleSpectrum> {
    let (values, vectors) = eigen_at(h, cfg, true)?;
    let (fine, _) = eigen_at(h, &cfg.doubled(), false)?;

    let dim = cfg.dim();
    let keep = cfg.eig_count.unwrap_or(dim).min(dim);
    let checked = keep.min(cfg.n_max / 2).max(1);
    let drift = values
        .iter()
        .zip(&fine)
        .take(checked)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let mut values = values;
    values.truncate(keep);
    let coefficients = vectors.map(|mut v| {
        v.truncate(keep);
        v
    });
    Ok(AngleSpectrum {
        spectrum: Spectrum {
            values,
            vectors: None,
            source: SpectrumSource::AngleSpectral,
            dimension: dim,
            unit: h.unit(),
        },
        coefficients,
        converged: drift < DRIFT_TOLERANCE,
        drift,
        n_max: cfg.n_max,
    })
}

/// Eigenvalues only, without the convergence re-solve.
pub fn eigenvalues(h: &AngleHamiltonian, cfg: &SolverConfig) -> Result<Vec<f64>> {
    let (mut values, _) = eigen_at(h, cfg, false)?;
    values.truncate(cfg.eig_count.unwrap_or(values.len()));
    Ok(values)
}

/// Half-bandwidth in frequency: largest `|m - n|` with a nonzero entry
/// (magnitude above `tol`).
pub fn frequency_bandwidth(t: &ComplexMatrix, tol: f64) -> usize {
    let n = t.dim();
    let mut band = 0;
    for i in 0..n {
        for j in 0..n {
            if t[(i, j)].norm() > tol {
                band = band.max(i.abs_diff(j));
            }
        }
    }
    band
}

/// Samples `(φ, ψ_k(φ))` for the lowest `count` states on `points` grid
/// points over `[-π, π)`.
pub fn eigenfunction_table(
    s: &AngleSpectrum,
    count: usize,
    points: usize,
) -> Vec<(f64, Vec<Complex64>)> {
    let grid: Vec<f64> = (0..points)
        .map(|i| -PI + TAU * i as f64 / points as f64)
        .collect();
    let columns: Vec<Vec<Complex64>> = (0..count)
        .filter_map(|k| s.eigenfunction(k, &grid))
        .collect();
    grid.iter()
        .enumerate()
        .map(|(i, &phi)| (phi, columns.iter().map(|c| c[i]).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::{closed_form_fe8, closed_form_lipkin, closed_form_mn12, HamiltonianForm};
    use crate::spin_models::{SpinParams, Unit};

    fn custom(v: fn(f64) -> f64, k: fn(f64) -> f64) -> AngleHamiltonian {
        let model = SpinParams::new(1.0, 0.0, 0.0, 1.0, Unit::Epsilon);
        let potential = AngleFunction::from_fn(v, 256, 8);
        // K = -I/2, so I = -2K.
        let inertia = AngleFunction::from_fn(move |p| -2.0 * k(p), 256, 8);
        AngleHamiltonian::new(potential, inertia, model, HamiltonianForm::LargeNClosed)
    }

    /// Lowest eigenvalue of `-½ψ'' + V ψ` for an even ground state, from a
    /// `points`-point periodic second-order difference grid reduced to
    /// `[0, π]` by reflection, found by Sturm-sequence bisection.
    fn finite_difference_ground(v: fn(f64) -> f64, points: usize) -> f64 {
        let h = TAU / points as f64;
        let m = points / 2;
        let c = 1.0 / (h * h);
        let diag: Vec<f64> = (0..=m).map(|k| c + v(k as f64 * h)).collect();
        let off: Vec<f64> = (0..m)
            .map(|k| {
                if k == 0 || k == m - 1 {
                    -0.5 * c * 2f64.sqrt()
                } else {
                    -0.5 * c
                }
            })
            .collect();
        let below = |x: f64| {
            let mut count = 0;
            let mut q = diag[0] - x;
            if q < 0.0 {
                count += 1;
            }
            for k in 1..=m {
                let q_prev = if q == 0.0 { 1e-300 } else { q };
                q = diag[k] - x - off[k - 1] * off[k - 1] / q_prev;
                if q < 0.0 {
                    count += 1;
                }
            }
            count
        };
        let (mut lo, mut hi) = (-10.0, 10.0);
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn free_rotor() {
        let h = custom(|_| 0.0, |_| 0.5);
        let cfg = SolverConfig::with_cutoff(16);
        let t = assemble(&h, &cfg).unwrap();
        for i in 0..cfg.dim() {
            let n = i as f64 - 16.0;
            assert!((t[(i, i)].re - n * n / 2.0).abs() < 1e-12);
        }
        assert_eq!(frequency_bandwidth(&t, 1e-12), 0);
        let s = solve(&h, &cfg.eig_count(7)).unwrap();
        let want = [0.0, 0.5, 0.5, 2.0, 2.0, 4.5, 4.5];
        for (e, w) in s.spectrum.values.iter().zip(want) {
            assert!((e - w).abs() < 1e-10);
        }
        assert!(s.converged);
    }

    #[test]
    fn mathieu_matches_finite_difference() {
        let v: fn(f64) -> f64 = |p| -p.cos();
        let h = custom(v, |_| 0.5);
        let s = solve(&h, &SolverConfig::with_cutoff(32).eig_count(4)).unwrap();
        let fd = finite_difference_ground(v, 4096);
        assert!((s.ground() - fd).abs() < 1e-6, "{} vs {fd}", s.ground());
        assert!(s.converged);
    }

    #[test]
    fn mn12_structure_and_ground_state() {
        let h = closed_form_mn12(0.6, 10, 0.0).unwrap();
        let cfg = SolverConfig::default();
        let t = assemble(&h, &cfg).unwrap();
        assert_eq!(frequency_bandwidth(&t, 1e-9), 2);
        assert!(t.hermiticity_defect() < 1e-12);

        let s = solve(&h, &cfg.eig_count(10)).unwrap();
        assert!(s.converged, "drift {}", s.drift);
        assert!((s.ground() + 60.278).abs() < 0.05);
        assert!(s.ground() > h.potential.min_value() - 1e-9);
        for split in s.spectrum.pair_splittings(4) {
            assert!(split.abs() < 1e-8, "{split}");
        }
    }

    #[test]
    fn fe8_ground_state() {
        let h = closed_form_fe8(0.275, 0.046, 10).unwrap();
        let s = solve(&h, &SolverConfig::default().eig_count(6)).unwrap();
        assert!((s.ground() + 27.645).abs() < 0.05);
        assert!(s.converged);
    }

    #[test]
    fn cutoff_robustness() {
        for h in [
            closed_form_mn12(0.6, 10, 0.0).unwrap(),
            closed_form_fe8(0.275, 0.046, 10).unwrap(),
            closed_form_lipkin(1.5, 20).unwrap(),
        ] {
            let a = eigenvalues(&h, &SolverConfig::with_cutoff(64).eig_count(10)).unwrap();
            let b = eigenvalues(&h, &SolverConfig::with_cutoff(128).eig_count(10)).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-8, "{x} {y}");
            }
        }
    }

    #[test]
    fn rejects_negative_kinetic_and_short_cutoff() {
        let h = custom(|_| 0.0, |p| p.cos());
        assert!(matches!(
            assemble(&h, &SolverConfig::with_cutoff(8)),
            Err(Error::NegativeKinetic { .. })
        ));
        let h = custom(|p| (12.0 * p).cos(), |_| 0.5);
        assert!(matches!(
            assemble(&h, &SolverConfig::with_cutoff(4)),
            Err(Error::InsufficientCutoff { .. })
        ));
        assert!(assemble(&h, &SolverConfig::with_cutoff(8)).is_ok());
        let bad = SolverConfig {
            n_max: 8,
            quadrature_points: 16,
            eig_count: None,
        };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn complex_potential_coefficients_use_embedding() {
        // An odd potential gives imaginary Fourier coefficients.
        let h = custom(|p| p.sin() + 0.3 * (2.0 * p).cos(), |p| 0.5 + 0.2 * p.sin());
        let cfg = SolverConfig::with_cutoff(16);
        let t = assemble(&h, &cfg).unwrap();
        assert!(!t.is_real(1e-12));
        // Shifting φ → φ + π/2 turns sin into cos; the spectrum is unchanged.
        let shifted = custom(|p| p.cos() - 0.3 * (2.0 * p).cos(), |p| 0.5 + 0.2 * p.cos());
        let a = eigenvalues(&h, &cfg.eig_count(8)).unwrap();
        let b = eigenvalues(&shifted, &cfg.eig_count(8)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn eigenfunctions_are_normalized() {
        let h = closed_form_fe8(0.275, 0.046, 10).unwrap();
        let s = solve(&h, &SolverConfig::with_cutoff(32).eig_count(3)).unwrap();
        let table = eigenfunction_table(&s, 3, 512);
        let dphi = TAU / 512.0;
        for k in 0..3 {
            let norm: f64 = table.iter().map(|(_, psi)| psi[k].norm_sqr() * dphi).sum();
            assert!((norm - 1.0).abs() < 1e-10);
        }
    }
}
