//! Angle-variable Hamiltonian: potential `V(φ)` and inertia `I(φ)`.
//!
//! Three routes produce the pair:
//!
//! * [`moments_numeric`] sums the discrete Wigner surface `H(u, φ)` over the
//!   `2j+1` point `u` lattice, zeroth moment for `V`, `sin²u` moment for `I`;
//! * [`moments_full_sum`] evaluates the same moments through their closed
//!   double sums over `n, k ∈ {-j..j}`;
//! * the large-`N` closed forms [`closed_form_lipkin`], [`closed_form_mn12`]
//!   and [`closed_form_fe8`].
//!
//! The phase `ξ` is eliminated before any of this, which replaces `G` by
//! `-|G|` throughout. The kinetic coefficient of the Schrödinger operator
//! is `K(φ) = -I(φ)/2`, since `I = -1/M`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numeric::ComplexSum;
use crate::semiclassical::minimize_xi;
use crate::spin_models::{Preset, SpinParams, Unit};
use crate::{Error, Result};

pub const DEFAULT_GRID: usize = 1024;
pub const DEFAULT_FOURIER_CUTOFF: usize = 8;

/// Imaginary residue of a moment sum above which the result is rejected.
pub const IMAGINARY_REJECT: f64 = 1e-6;

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Real `2π`-periodic function sampled on `φ_k = -π + 2πk/n`, with its
/// trapezoidal Fourier coefficients `c_m`, `|m| <= n_max`.
#[derive(Clone)]
pub struct AngleFunction {
    values: Vec<f64>,
    fourier: Vec<Complex64>,
    n_max: usize,
    eval: Evaluator,
}

impl fmt::Debug for AngleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AngleFunction")
            .field("grid", &self.values.len())
            .field("n_max", &self.n_max)
            .field("fourier", &self.fourier)
            .finish_non_exhaustive()
    }
}

/// `φ_k = -π + 2πk/n`.
pub fn angle_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| -PI + TAU * k as f64 / n as f64).collect()
}

/// Trapezoidal `c_m = (1/n) Σ f(φ_k) e^{-imφ_k}` on the uniform grid.
pub fn fourier_coefficient(grid: &[f64], values: &[f64], m: i64) -> Complex64 {
    let mut acc = ComplexSum::default();
    for (&phi, &v) in grid.iter().zip(values) {
        acc.add(Complex64::from_polar(v, -(m as f64) * phi));
    }
    acc.value() / grid.len() as f64
}

impl AngleFunction {
    pub fn from_fn<F>(f: F, grid_len: usize, n_max: usize) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_evaluator(Arc::new(f), grid_len, n_max)
    }

    fn from_evaluator(eval: Evaluator, grid_len: usize, n_max: usize) -> Self {
        let grid = angle_grid(grid_len);
        let values: Vec<f64> = grid.iter().map(|&p| eval(p)).collect();
        let fourier = (-(n_max as i64)..=n_max as i64)
            .map(|m| fourier_coefficient(&grid, &values, m))
            .collect();
        Self {
            values,
            fourier,
            n_max,
            eval,
        }
    }

    /// Same function on a different grid / cutoff.
    pub fn resample(&self, grid_len: usize, n_max: usize) -> Self {
        Self::from_evaluator(self.eval.clone(), grid_len, n_max)
    }

    /// Exact value at `φ` (not an interpolation).
    pub fn eval(&self, phi: f64) -> f64 {
        (self.eval)(phi)
    }

    pub fn grid(&self) -> Vec<f64> {
        angle_grid(self.values.len())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Stored coefficient `c_m`; zero beyond the cutoff.
    pub fn coefficient(&self, m: i64) -> Complex64 {
        if m.unsigned_abs() as usize > self.n_max {
            Complex64::new(0.0, 0.0)
        } else {
            self.fourier[(m + self.n_max as i64) as usize]
        }
    }

    /// Truncated Fourier series at `φ`.
    pub fn reconstruct(&self, phi: f64) -> f64 {
        let n = self.n_max as i64;
        (-n..=n)
            .map(|m| self.coefficient(m) * Complex64::from_polar(1.0, m as f64 * phi))
            .sum::<Complex64>()
            .re
    }

    /// `max_k |f(φ_k) - Σ c_m e^{imφ_k}|`.
    pub fn reconstruction_error(&self) -> f64 {
        self.grid()
            .iter()
            .zip(&self.values)
            .fold(0.0f64, |m, (&p, &v)| m.max((v - self.reconstruct(p)).abs()))
    }

    /// `max_m |c_{-m} - conj(c_m)|`.
    pub fn reality_defect(&self) -> f64 {
        (0..=self.n_max as i64).fold(0.0f64, |acc, m| {
            acc.max((self.coefficient(-m) - self.coefficient(m).conj()).norm())
        })
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Pointwise `factor · f`.
    pub fn scaled(&self, factor: f64) -> Self {
        let eval = self.eval.clone();
        let mut out = self.clone();
        out.eval = Arc::new(move |p| factor * eval(p));
        out.values.iter_mut().for_each(|v| *v *= factor);
        out.fourier.iter_mut().for_each(|c| *c *= factor);
        out
    }

    /// Largest `|f(φ_k) - g(φ_k)|` on this function's grid.
    pub fn sup_distance(&self, other: &AngleFunction) -> f64 {
        self.grid()
            .iter()
            .zip(&self.values)
            .fold(0.0f64, |m, (&p, &v)| m.max((v - other.eval(p)).abs()))
    }
}

/// Which route produced an [`AngleHamiltonian`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianForm {
    FullSum,
    WignerNumeric,
    LargeNClosed,
}

impl HamiltonianForm {
    pub fn tag(self) -> &'static str {
        match self {
            HamiltonianForm::FullSum => "full_sum",
            HamiltonianForm::WignerNumeric => "wigner_numeric",
            HamiltonianForm::LargeNClosed => "large_n_closed",
        }
    }
}

/// Potential, inertia and the derived kinetic coefficient `K = -I/2`.
#[derive(Debug, Clone)]
pub struct AngleHamiltonian {
    pub potential: AngleFunction,
    pub inertia: AngleFunction,
    pub kinetic_coeff: AngleFunction,
    pub model: SpinParams,
    pub form: HamiltonianForm,
    /// Phase `ξ*` chosen to minimize the energy surface.
    pub xi: f64,
}

impl AngleHamiltonian {
    pub fn new(
        potential: AngleFunction,
        inertia: AngleFunction,
        model: SpinParams,
        form: HamiltonianForm,
    ) -> Self {
        let kinetic_coeff = inertia.scaled(-0.5);
        Self {
            potential,
            inertia,
            kinetic_coeff,
            model,
            form,
            xi: minimize_xi(&model),
        }
    }

    pub fn unit(&self) -> Unit {
        self.model.unit
    }

    /// All three functions on a new sampling grid.
    pub fn with_grid(&self, grid_len: usize) -> Self {
        let n = self.potential.n_max();
        Self {
            potential: self.potential.resample(grid_len, n),
            inertia: self.inertia.resample(grid_len, n),
            kinetic_coeff: self.kinetic_coeff.resample(grid_len, n),
            ..self.clone()
        }
    }
}

fn require_integer_j(p: &SpinParams, what: &'static str) -> Result<i64> {
    p.ensure_valid()?;
    p.integer_j().ok_or(Error::IntegerSpinRequired(what, p.j))
}

/// Discrete Wigner energy surface `H(u, φ)` after `ξ` elimination.
///
/// The `l` sums run over `l ≡ 2j (mod 2)` for the terms diagonal in the
/// conjugate index (`k = n - n'` even) and over the opposite parity for the
/// `A` term (`k = ±1`). The `cos 2φ` radicand is
/// `(j+l/2+1)(j+l/2)(j-l/2+1)(j-l/2)`, the one that reproduces the `J±²`
/// matrix elements.
pub fn wigner_surface(p: &SpinParams, u: f64, phi: f64) -> Complex64 {
    let j = p.j;
    let g = p.g.abs();
    let two_j = (2.0 * j).round() as i64;
    let c_const = p.b * j / 2.0 + g * j * (2.0 * j - 1.0);
    let c_quad = p.b / 2.0 - 3.0 * g;
    let c_cos2 = (p.b / 2.0 + g) * (2.0 * phi).cos();
    let c_cos1 = -p.a * phi.cos();

    let mut acc = ComplexSum::default();
    for l in -two_j..=two_j {
        let half = l as f64 / 2.0;
        let phase = Complex64::from_polar(1.0, half * u);
        let term = if (l - two_j).rem_euclid(2) == 0 {
            let rad = (j + half + 1.0) * (j + half) * (j - half + 1.0) * (j - half);
            c_const + c_quad * (j * j - half * half) + c_cos2 * rad.max(0.0).sqrt()
        } else {
            let rad = (j + half + 0.5) * (j - half + 0.5);
            c_cos1 * rad.max(0.0).sqrt()
        };
        acc.add(phase * term);
    }
    acc.value() / TAU
}

/// The surface with every `l` sum unrestricted and the `cos 2φ` radicand
/// `(j+l/2+1/2)(j+l/2)(j-l/2+1/2)(j-l/2)`, read literally from the typeset
/// expression. Kept only to show that this reading disagrees with the
/// double-sum moments; see the tests.
pub fn wigner_surface_as_printed(p: &SpinParams, u: f64, phi: f64) -> Complex64 {
    let j = p.j;
    let g = p.g.abs();
    let two_j = (2.0 * j).round() as i64;
    let mut acc = ComplexSum::default();
    for l in -two_j..=two_j {
        let half = l as f64 / 2.0;
        let phase = Complex64::from_polar(1.0, half * u);
        let rad_a = (j + half + 0.5) * (j - half + 0.5);
        let rad_2 = (j + half + 0.5) * (j + half) * (j - half + 0.5) * (j - half);
        let term =
            p.b * j / 2.0 + g * j * (2.0 * j - 1.0) + (p.b / 2.0 - 3.0 * g) * (j * j - half * half)
                - p.a * phi.cos() * rad_a.max(0.0).sqrt()
                + (p.b / 2.0 + g) * (2.0 * phi).cos() * rad_2.max(0.0).sqrt();
        acc.add(phase * term);
    }
    acc.value() / TAU
}

/// `u_m = 2πm/(2j+1)`, `m = -j..j`.
fn u_lattice(j: i64) -> Vec<f64> {
    let n = (2 * j + 1) as f64;
    (-j..=j).map(|m| TAU * m as f64 / n).collect()
}

/// `Σ_u H(u, φ) sin^power(u) Δu`, the moment of order `power` of `surface`.
fn surface_moment(
    p: &SpinParams,
    j: i64,
    power: i32,
    phi: f64,
    surface: fn(&SpinParams, f64, f64) -> Complex64,
) -> Complex64 {
    let du = TAU / (2 * j + 1) as f64;
    let mut acc = ComplexSum::default();
    for u in u_lattice(j) {
        acc.add(surface(p, u, phi) * (u.sin().powi(power) * du));
    }
    acc.value()
}

fn real_moment_function(
    p: &SpinParams,
    power: i32,
    surface: fn(&SpinParams, f64, f64) -> Complex64,
) -> Result<AngleFunction> {
    let j = require_integer_j(p, "moment sums")?;
    let params = *p;
    let complex_at = move |phi: f64| surface_moment(&params, j, power, phi, surface);
    let worst_im = angle_grid(DEFAULT_GRID)
        .iter()
        .map(|&phi| complex_at(phi).im.abs())
        .fold(0.0f64, f64::max);
    if worst_im > IMAGINARY_REJECT {
        return Err(Error::ImaginaryResidue(worst_im));
    }
    Ok(AngleFunction::from_fn(
        move |phi| complex_at(phi).re,
        DEFAULT_GRID,
        DEFAULT_FOURIER_CUTOFF,
    ))
}

/// `V` and `I` as numerical moments of [`wigner_surface`]. Integer `j` only.
pub fn moments_numeric(p: &SpinParams) -> Result<AngleHamiltonian> {
    let v = real_moment_function(p, 0, wigner_surface)?;
    let i = real_moment_function(p, 2, wigner_surface)?;
    Ok(AngleHamiltonian::new(
        v,
        i,
        *p,
        HamiltonianForm::WignerNumeric,
    ))
}

/// Moment of order `power` (weight `sin^power u`) of the surface; used only
/// to gauge the truncation after the second moment.
pub fn moment(p: &SpinParams, power: i32) -> Result<AngleFunction> {
    real_moment_function(p, power, wigner_surface)
}

/// `sup|M₄| / sup|M₂|`: size of the first discarded moment relative to the
/// inertia moment.
pub fn truncation_ratio(p: &SpinParams) -> Result<f64> {
    let sup = |f: &AngleFunction| f.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let m2 = sup(&moment(p, 2)?);
    let m4 = sup(&moment(p, 4)?);
    Ok(if m2 == 0.0 { 0.0 } else { m4 / m2 })
}

/// Moments computed from the surface read as typeset; see
/// [`wigner_surface_as_printed`].
pub fn moments_numeric_as_printed(p: &SpinParams) -> Result<AngleHamiltonian> {
    let v = real_moment_function(p, 0, wigner_surface_as_printed)?;
    let i = real_moment_function(p, 2, wigner_surface_as_printed)?;
    Ok(AngleHamiltonian::new(
        v,
        i,
        *p,
        HamiltonianForm::WignerNumeric,
    ))
}

/// The two phase double sums of the `A` term,
/// `Σ_{n,k} e^{2πik(n+1/2)/N} w_n` and
/// `Σ_{n,k} e^{iπk/N}[e^{2πik(n+2)/N} + e^{2πik(n-2)/N} - 2e^{2πikn/N}] w_n`
/// with `w_n = √(1 - n(n+1)/(j(j+1)))`.
#[derive(Debug, Clone, Copy)]
pub struct PhaseSums {
    pub potential: Complex64,
    pub inertia: Complex64,
}

pub fn phase_sums(j: i64) -> PhaseSums {
    let n_dim = (2 * j + 1) as f64;
    let x = (j * (j + 1)) as f64;
    let mut sv = ComplexSum::default();
    let mut si = ComplexSum::default();
    for n in -j..=j {
        let nf = n as f64;
        let w = (1.0 - nf * (nf + 1.0) / x).max(0.0).sqrt();
        if w == 0.0 {
            continue;
        }
        for k in -j..=j {
            let kf = k as f64;
            let e = |shift: f64| Complex64::from_polar(1.0, TAU * kf * shift / n_dim);
            sv.add(e(nf + 0.5) * w);
            let bracket = e(nf + 2.0) + e(nf - 2.0) - e(nf) * 2.0;
            si.add(Complex64::from_polar(1.0, PI * kf / n_dim) * bracket * w);
        }
    }
    PhaseSums {
        potential: sv.value(),
        inertia: si.value(),
    }
}

/// `V` and `I` from the closed double-sum expressions. Integer `j` only.
pub fn moments_full_sum(p: &SpinParams) -> Result<AngleHamiltonian> {
    let j = require_integer_j(p, "full double sums")?;
    let sums = phase_sums(j);
    let worst_im = sums.potential.im.abs().max(sums.inertia.im.abs());
    if worst_im > IMAGINARY_REJECT {
        return Err(Error::ImaginaryResidue(worst_im));
    }
    let jf = j as f64;
    let g = p.g.abs();
    let (a, b) = (p.a, p.b);
    let n_dim = 2.0 * jf + 1.0;
    let x = jf * (jf + 1.0);
    let sv = sums.potential.re;
    let si = sums.inertia.re;

    let v_const = jf * (b + 2.0 * g * (2.0 * jf - 1.0)) / 2.0 + (b - 6.0 * g) / 2.0 * jf * jf;
    let v_cos1 = -a / n_dim * x.sqrt() * sv;
    let v_cos2 = (b + 2.0 * g) / 2.0 * x;
    let potential = AngleFunction::from_fn(
        move |phi| v_const + v_cos1 * phi.cos() + v_cos2 * (2.0 * phi).cos(),
        DEFAULT_GRID,
        DEFAULT_FOURIER_CUTOFF,
    );

    let i_const = b - 6.0 * g;
    let i_cos1 = a / (4.0 * n_dim) * x.sqrt() * si;
    let root = |c: f64| (1.0 - c / x).max(0.0).sqrt();
    let i_cos2 = -(b + 2.0 * g) / 4.0 * x * (root(6.0) * root(2.0) - 1.0);
    let inertia = AngleFunction::from_fn(
        move |phi| i_const + i_cos1 * phi.cos() + i_cos2 * (2.0 * phi).cos(),
        DEFAULT_GRID,
        DEFAULT_FOURIER_CUTOFF,
    );
    Ok(AngleHamiltonian::new(
        potential,
        inertia,
        *p,
        HamiltonianForm::FullSum,
    ))
}

/// Large-`Nₛ` Lipkin forms, in units of `ε`:
/// `V = -((Nₛ+1)/2)cosφ - (χ(Nₛ+3)/4)sin²φ`,
/// `I = -(2/(Nₛ-1))cosφ - (2χ/(Nₛ-1))(1+sin²φ)`.
pub fn closed_form_lipkin(chi: f64, ns: u32) -> Result<AngleHamiltonian> {
    let model = Preset::Lipkin { chi, ns }.to_spin_params()?;
    let n = f64::from(ns);
    let potential = AngleFunction::from_fn(
        move |phi| -(n + 1.0) / 2.0 * phi.cos() - chi * (n + 3.0) / 4.0 * phi.sin().powi(2),
        DEFAULT_GRID,
        DEFAULT_FOURIER_CUTOFF,
    );
    let inertia = AngleFunction::from_fn(
        move |phi| -2.0 / (n - 1.0) * phi.cos() - 2.0 * chi / (n - 1.0) * (1.0 + phi.sin().powi(2)),
        DEFAULT_GRID,
        DEFAULT_FOURIER_CUTOFF,
    );
    Ok(AngleHamiltonian::new(
        potential,
        inertia,
        model,
        HamiltonianForm::LargeNClosed,
    ))
}

/// Mean-field (ATDHF) Lipkin potential `-(Nₛ/2)(cosφ + (χ/2)sin²φ)`, for
/// comparison plots only.
pub fn atdhf_lipkin_potential(chi: f64, ns: u32) -> AngleFunction {
    let n = f64::from(ns);
    AngleFunction::from_fn(
        move |phi| -(n / 2.0) * (phi.cos() + chi / 2.0 * phi.sin().powi(2)),
        DEFAULT_GRID,
        DEFAULT_FOURIER_CUTOFF,
    )
}

/// Mn12-acetate in a parallel field `h = H∥/H_a`, Kelvin:
/// `V = -S(S+1)D cos²φ - 2DS√(S(S+1)) h cosφ`, `I = -2D cos²φ - 2D h cosφ`.
pub fn closed_form_mn12(d: f64, s: u32, h: f64) -> Result<AngleHamiltonian> {
    let model = Preset::Mn12 { d, s, h }.to_spin_params()?;
    let sf = f64::from(s);
    let ss1 = sf * (sf + 1.0);
    let potential = AngleFunction::from_fn(
        move |phi| -ss1 * d * phi.cos().powi(2) - 2.0 * d * sf * ss1.sqrt() * h * phi.cos(),
        DEFAULT_GRID,
        DEFAULT_FOURIER_CUTOFF,
    );
    let inertia = AngleFunction::from_fn(
        move |phi| -2.0 * d * phi.cos().powi(2) - 2.0 * d * h * phi.cos(),
        DEFAULT_GRID,
        DEFAULT_FOURIER_CUTOFF,
    );
    Ok(AngleHamiltonian::new(
        potential,
        inertia,
        model,
        HamiltonianForm::LargeNClosed,
    ))
}

/// Fe8 without field, Kelvin:
/// `V = -(D-E)S(S+1)cos²φ - ES(S+1)`, `I = -2(D-E)cos²φ - 4E`.
pub fn closed_form_fe8(d: f64, e: f64, s: u32) -> Result<AngleHamiltonian> {
    let model = Preset::Fe8 { d, e, s }.to_spin_params()?;
    let sf = f64::from(s);
    let ss1 = sf * (sf + 1.0);
    let potential = AngleFunction::from_fn(
        move |phi| -(d - e) * ss1 * phi.cos().powi(2) - e * ss1,
        DEFAULT_GRID,
        DEFAULT_FOURIER_CUTOFF,
    );
    let inertia = AngleFunction::from_fn(
        move |phi| -2.0 * (d - e) * phi.cos().powi(2) - 4.0 * e,
        DEFAULT_GRID,
        DEFAULT_FOURIER_CUTOFF,
    );
    Ok(AngleHamiltonian::new(
        potential,
        inertia,
        model,
        HamiltonianForm::LargeNClosed,
    ))
}

/// Closed form of a preset.
pub fn closed_form(preset: &Preset) -> Result<AngleHamiltonian> {
    match *preset {
        Preset::Lipkin { chi, ns } => closed_form_lipkin(chi, ns),
        Preset::Mn12 { d, s, h } => closed_form_mn12(d, s, h),
        Preset::Fe8 { d, e, s } => closed_form_fe8(d, e, s),
    }
}

/// Angle Hamiltonian of a preset by any route.
pub fn for_preset(preset: &Preset, form: HamiltonianForm) -> Result<AngleHamiltonian> {
    match form {
        HamiltonianForm::LargeNClosed => closed_form(preset),
        HamiltonianForm::FullSum => moments_full_sum(&preset.to_spin_params()?),
        HamiltonianForm::WignerNumeric => moments_numeric(&preset.to_spin_params()?),
    }
}

/// Angle Hamiltonian of raw parameters; the closed forms exist only for presets.
pub fn for_params(p: &SpinParams, form: HamiltonianForm) -> Result<AngleHamiltonian> {
    match form {
        HamiltonianForm::FullSum => moments_full_sum(p),
        HamiltonianForm::WignerNumeric => moments_numeric(p),
        HamiltonianForm::LargeNClosed => Err(Error::InvalidConfig(
            "closed forms are only defined for the lipkin, mn12 and fe8 presets".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn lipkin(chi: f64, ns: u32) -> SpinParams {
        Preset::Lipkin { chi, ns }.to_spin_params().unwrap()
    }

    /// The Lipkin potential and inertia sums written out for `A = ε`, `B = 0`.
    fn lipkin_full_sum_oracle(chi: f64, ns: u32, phi: f64) -> (f64, f64) {
        let j = i64::from(ns / 2);
        let jf = j as f64;
        let n_dim = 2.0 * jf + 1.0;
        let x = jf * (jf + 1.0);
        let mut sv = Complex64::new(0.0, 0.0);
        let mut si = Complex64::new(0.0, 0.0);
        for n in -j..=j {
            let nf = n as f64;
            let w = (1.0 - nf * (nf + 1.0) / x).max(0.0).sqrt();
            for k in -j..=j {
                let kf = k as f64;
                let ph = |s: f64| Complex64::from_polar(1.0, TAU * kf * s / n_dim);
                sv += ph(nf + 0.5) * w;
                si += Complex64::from_polar(1.0, PI * kf / n_dim)
                    * (ph(nf + 2.0) + ph(nf - 2.0) - ph(nf) * 2.0)
                    * w;
            }
        }
        let v =
            -chi * x / (2.0 * jf - 1.0) * phi.sin().powi(2) - x.sqrt() / n_dim * phi.cos() * sv.re;
        let i = -3.0 * chi / (2.0 * jf - 1.0) + x.sqrt() / (4.0 * n_dim) * phi.cos() * si.re
            - chi * x / (4.0 * (2.0 * jf - 1.0))
                * (2.0 * phi).cos()
                * ((1.0 - 6.0 / x).max(0.0).sqrt() * (1.0 - 2.0 / x).sqrt() - 1.0);
        (v, i)
    }

    #[test]
    fn zero_hamiltonian_gives_zero_surface() {
        let p = SpinParams::new(0.0, 0.0, 0.0, 3.0, Unit::Kelvin);
        for &(u, phi) in &[(0.0, 0.0), (1.0, 2.0), (-2.5, 0.3)] {
            assert_eq!(wigner_surface(&p, u, phi).norm(), 0.0);
        }
        let h = moments_numeric(&p).unwrap();
        assert!(h.potential.values().iter().all(|v| v.abs() < 1e-15));
        assert!(h.inertia.values().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn lipkin_full_sum_matches_written_out_instance() {
        for &(chi, ns) in &[(1.5, 20u32), (1.5, 6), (0.7, 10)] {
            let h = moments_full_sum(&lipkin(chi, ns)).unwrap();
            for i in 0..50 {
                let phi = -PI + 0.125 * i as f64;
                let (v, inertia) = lipkin_full_sum_oracle(chi, ns, phi);
                assert!((h.potential.eval(phi) - v).abs() < 1e-10);
                assert!((h.inertia.eval(phi) - inertia).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn numeric_moments_match_full_sums() {
        let cases = [
            lipkin(1.5, 20),
            lipkin(0.3, 8),
            Preset::MN12.to_spin_params().unwrap(),
            Preset::Mn12 {
                d: 0.6,
                s: 10,
                h: 0.4,
            }
            .to_spin_params()
            .unwrap(),
            Preset::FE8.to_spin_params().unwrap(),
            SpinParams::new(0.3, -0.2, 0.1, 3.0, Unit::Kelvin),
        ];
        for p in cases {
            let num = moments_numeric(&p).unwrap();
            let full = moments_full_sum(&p).unwrap();
            assert!(num.potential.sup_distance(&full.potential) < 1e-9, "{p:?}");
            assert!(num.inertia.sup_distance(&full.inertia) < 1e-9, "{p:?}");
        }
    }

    #[test]
    fn printed_surface_reading_disagrees() {
        let p = Preset::FE8.to_spin_params().unwrap();
        let printed = moments_numeric_as_printed(&p).unwrap();
        let full = moments_full_sum(&p).unwrap();
        assert!(printed.potential.sup_distance(&full.potential) > 1e-3);
    }

    #[test]
    fn mn12_potential_minima() {
        let p = Preset::MN12.to_spin_params().unwrap();
        let h = moments_numeric(&p).unwrap();
        for phi in [0.0, PI] {
            assert!((h.potential.eval(phi) + 66.0).abs() < 66.0 * 0.015);
        }
        assert!((h.potential.min_value() + 66.0).abs() < 1e-9);
    }

    #[test]
    fn free_spin_potential_is_minus_cos() {
        let p = SpinParams::new(1.0, 0.0, 0.0, 10.0, Unit::Epsilon);
        let h = moments_full_sum(&p).unwrap();
        let v0 = h.potential.eval(0.0);
        assert!(v0 < 0.0);
        for i in 0..20 {
            let phi = -PI + 0.3 * i as f64;
            assert!((h.potential.eval(phi) - v0 * phi.cos()).abs() < 1e-12);
        }
        let num = moments_numeric(&p).unwrap();
        assert!(num.potential.sup_distance(&h.potential) < 1e-10);
    }

    #[test]
    fn lipkin_chi_zero_inertia_has_no_cos2() {
        let h = moments_full_sum(&lipkin(0.0, 12)).unwrap();
        assert!(h.inertia.coefficient(2).norm() < 1e-13);
        assert!(h.inertia.coefficient(0).norm() < 1e-13);
    }

    #[test]
    fn closed_lipkin_values() {
        let h = closed_form_lipkin(0.0, 20).unwrap();
        assert!((h.potential.eval(0.0) + 10.5).abs() < 1e-14);
        let h = closed_form_lipkin(1.5, 20).unwrap();
        assert!((h.potential.eval(FRAC_PI_2) + 8.625).abs() < 1e-12);
        // Mean-field potential lacks -cosφ/2 - (3χ/4)sin²φ.
        let atdhf = atdhf_lipkin_potential(1.5, 20);
        for i in 0..30 {
            let phi = -PI + 0.2 * i as f64;
            let diff = h.potential.eval(phi) - atdhf.eval(phi);
            let want = -0.5 * phi.cos() - 0.75 * 1.5 * phi.sin().powi(2);
            assert!((diff - want).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_mn12_values() {
        let h = closed_form_mn12(0.6, 10, 0.0).unwrap();
        assert!((h.potential.eval(0.0) + 66.0).abs() < 1e-12);
        assert!((h.potential.eval(PI) + 66.0).abs() < 1e-12);
        assert!(h.inertia.eval(FRAC_PI_2).abs() < 1e-15);
        assert!(h.inertia.eval(-FRAC_PI_2).abs() < 1e-15);
        let h1 = closed_form_mn12(0.6, 10, 1.0).unwrap();
        assert!(h1.inertia.eval(PI).abs() < 1e-14);
    }

    #[test]
    fn closed_fe8_values() {
        let h = closed_form_fe8(0.275, 0.046, 10).unwrap();
        let barrier = h.potential.eval(FRAC_PI_2) - h.potential.eval(0.0);
        assert!((barrier - (0.275 - 0.046) * 110.0).abs() < 1e-12);
        assert!((barrier - 25.19).abs() < 1e-10);
        let min_minus_i = h
            .inertia
            .values()
            .iter()
            .map(|v| -v)
            .fold(f64::INFINITY, f64::min);
        assert!((min_minus_i - 0.184).abs() < 1e-12);
        assert!(h.kinetic_coeff.min_value() > 0.0);
        let flat = closed_form_fe8(0.275, 0.275 * (1.0 - 1e-12), 10).unwrap();
        assert!(flat.potential.max_value() - flat.potential.min_value() < 1e-9);
    }

    #[test]
    fn kinetic_is_minus_half_inertia() {
        for h in [
            closed_form_fe8(0.275, 0.046, 10).unwrap(),
            moments_full_sum(&lipkin(1.5, 20)).unwrap(),
        ] {
            for (k, i) in h.kinetic_coeff.values().iter().zip(h.inertia.values()) {
                assert!((k + i / 2.0).abs() < 1e-12);
            }
            for phi in [0.1, 1.0, 2.9] {
                assert!((h.kinetic_coeff.eval(phi) + h.inertia.eval(phi) / 2.0).abs() < 1e-12);
            }
        }
        let mn = closed_form_mn12(0.6, 10, 0.0).unwrap();
        assert!(mn.kinetic_coeff.min_value() >= 0.0);
    }

    #[test]
    fn fourier_reality_and_reconstruction() {
        for h in [
            closed_form_fe8(0.275, 0.046, 10).unwrap(),
            closed_form_mn12(0.6, 10, 0.5).unwrap(),
            closed_form_lipkin(1.5, 20).unwrap(),
            moments_numeric(&lipkin(1.5, 20)).unwrap(),
        ] {
            for f in [&h.potential, &h.inertia, &h.kinetic_coeff] {
                assert!(f.reality_defect() < 1e-10);
                assert!(f.reconstruction_error() < 1e-8);
                let first = f.eval(-PI);
                let last = f.eval(PI);
                assert!((first - last).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn even_and_pi_periodic_without_field() {
        for h in [
            closed_form_fe8(0.275, 0.046, 10).unwrap(),
            closed_form_mn12(0.6, 10, 0.0).unwrap(),
            moments_full_sum(&Preset::FE8.to_spin_params().unwrap()).unwrap(),
        ] {
            for f in [&h.potential, &h.inertia] {
                for i in 0..40 {
                    let phi = 0.08 * i as f64;
                    assert!((f.eval(phi) - f.eval(-phi)).abs() < 1e-10);
                    assert!((f.eval(phi) - f.eval(phi + PI)).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn lipkin_full_sum_approaches_closed_form() {
        let mut last_v = f64::INFINITY;
        let mut last_i = f64::INFINITY;
        for ns in [2u32, 6, 10, 20] {
            let full = moments_full_sum(&lipkin(1.5, ns)).unwrap();
            let closed = closed_form_lipkin(1.5, ns).unwrap();
            let dv = full.potential.sup_distance(&closed.potential);
            let di = full.inertia.sup_distance(&closed.inertia);
            assert!(dv < last_v && di < last_i, "Ns = {ns}: {dv} {di}");
            last_v = dv;
            last_i = di;
        }
    }

    #[test]
    fn potential_scales_as_s_squared_inertia_does_not() {
        let coeff = |h: &AngleHamiltonian| h.potential.eval(FRAC_PI_2) - h.potential.eval(0.0);
        let mn10 = closed_form_mn12(0.6, 10, 0.0).unwrap();
        let mn20 = closed_form_mn12(0.6, 20, 0.0).unwrap();
        assert!((coeff(&mn20) / coeff(&mn10) - (20.0 * 21.0) / (10.0 * 11.0)).abs() < 1e-12);
        assert!(mn10.inertia.sup_distance(&mn20.inertia) < 1e-15);
        let fe10 = closed_form_fe8(0.275, 0.046, 10).unwrap();
        let fe20 = closed_form_fe8(0.275, 0.046, 20).unwrap();
        assert!((coeff(&fe20) / coeff(&fe10) - 420.0 / 110.0).abs() < 1e-12);
        assert!(fe10.inertia.sup_distance(&fe20.inertia) < 1e-15);
    }

    #[test]
    fn truncation_ratio_shrinks_with_j() {
        let small = truncation_ratio(&lipkin(1.0, 4)).unwrap();
        let large = truncation_ratio(&lipkin(1.0, 40)).unwrap();
        assert!(small.is_finite() && large.is_finite());
        assert!(large < small);
    }

    #[test]
    fn half_integer_spin_rejected_for_moments() {
        let p = SpinParams::new(1.0, 0.0, 0.0, 2.5, Unit::Epsilon);
        assert!(matches!(
            moments_full_sum(&p),
            Err(Error::IntegerSpinRequired(..))
        ));
        assert!(moments_numeric(&p).is_err());
    }

    #[test]
    fn closed_forms_need_presets() {
        let p = SpinParams::new(1.0, 0.0, 0.0, 2.0, Unit::Epsilon);
        assert!(for_params(&p, HamiltonianForm::LargeNClosed).is_err());
        assert!(for_params(&p, HamiltonianForm::FullSum).is_ok());
    }
}
