//! Diagnostics on angle Hamiltonians: error curves against exact spectra,
//! the critical Lipkin coupling, barrier heights, inertia zeros and the
//! extrema of the potential.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::angle::{closed_form, closed_form_lipkin, AngleFunction, AngleHamiltonian};
use crate::exact::spectrum_exact;
use crate::numeric::{bisect, circular_distance, derivative, golden_min, wrap_angle};
use crate::spectral::{solve, SolverConfig};
use crate::spin_models::{Preset, Unit};
use crate::Result;

/// Points of the half-offset scan grid used by the root and extremum finders.
const SCAN_POINTS: usize = 4096;
const ROOT_TOL: f64 = 1e-13;
/// `|I|` below which a stationary point of `I` counts as a tangent zero.
const TANGENT_ZERO: f64 = 1e-10;
/// Roots closer than this on the circle are merged.
const MERGE_TOL: f64 = 1e-9;

fn scan_grid() -> Vec<f64> {
    (0..SCAN_POINTS)
        .map(|k| -PI + TAU * (k as f64 + 0.5) / SCAN_POINTS as f64)
        .collect()
}

fn push_unique(roots: &mut Vec<f64>, phi: f64) {
    let phi = wrap_angle(phi);
    if roots.iter().all(|&r| circular_distance(r, phi) > MERGE_TOL) {
        roots.push(phi);
    }
}

/// Roots of `f` on the circle from sign changes between consecutive scan
/// points, including the wrap-around pair.
fn sign_change_roots<F: Fn(f64) -> f64>(f: F) -> Vec<f64> {
    let grid = scan_grid();
    let values: Vec<f64> = grid.iter().map(|&p| f(p)).collect();
    let mut roots = Vec::new();
    for k in 0..SCAN_POINTS {
        let next = (k + 1) % SCAN_POINTS;
        let (a, fa) = (grid[k], values[k]);
        let (mut b, fb) = (grid[next], values[next]);
        if next == 0 {
            b += TAU;
        }
        if fa == 0.0 {
            push_unique(&mut roots, a);
        } else if fa * fb < 0.0 {
            push_unique(&mut roots, bisect(&f, a, b, ROOT_TOL));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Critical points of `f` with their kind, from sign changes of `f'`.
fn stationary_points(f: &AngleFunction) -> Vec<(f64, bool)> {
    let df = |p: f64| derivative(|x| f.eval(x), p);
    let scale = f.max_value().abs().max(f.min_value().abs()).max(1.0);
    if f.max_value() - f.min_value() <= 1e-12 * scale {
        return Vec::new();
    }
    sign_change_roots(df)
        .into_iter()
        .map(|p| {
            let is_min = derivative(df, p) > 0.0;
            (p, is_min)
        })
        .collect()
}

/// Location of the minima and maxima of `V` in `[-π, π)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrema {
    pub minima: Vec<f64>,
    pub maxima: Vec<f64>,
}

pub fn extrema(h: &AngleHamiltonian) -> Extrema {
    let mut minima = Vec::new();
    let mut maxima = Vec::new();
    for (p, is_min) in stationary_points(&h.potential) {
        if is_min {
            minima.push(p);
        } else {
            maxima.push(p);
        }
    }
    Extrema { minima, maxima }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierHeight {
    pub value: f64,
    pub has_barrier: bool,
}

/// `max_φ V - E_gs`, or zero when `V` has no maximum above the ground energy.
pub fn barrier_height(h: &AngleHamiltonian, ground_energy: f64) -> BarrierHeight {
    let none = BarrierHeight {
        value: 0.0,
        has_barrier: false,
    };
    let v = &h.potential;
    let Some(top) = extrema(h)
        .maxima
        .into_iter()
        .map(|p| {
            // Polish the maximum; the bracket is one scan step wide.
            let step = TAU / SCAN_POINTS as f64;
            let refined = golden_min(|x| -v.eval(x), p - step, p + step, 1e-12);
            v.eval(refined).max(v.eval(p))
        })
        .max_by(f64::total_cmp)
    else {
        return none;
    };
    if top <= ground_energy {
        return none;
    }
    BarrierHeight {
        value: top - ground_energy,
        has_barrier: true,
    }
}

/// Zeros of `I(φ)` and whether they cut every path between potential minima.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InertiaZeros {
    pub roots: Vec<f64>,
    pub blocked: bool,
}

pub fn inertia_zeros(h: &AngleHamiltonian) -> InertiaZeros {
    let inertia = &h.inertia;
    let mut roots = sign_change_roots(|p| inertia.eval(p));
    for (p, _) in stationary_points(inertia) {
        if inertia.eval(p).abs() < TANGENT_ZERO {
            push_unique(&mut roots, p);
        }
    }
    roots.sort_by(f64::total_cmp);
    let blocked = separates_minima(&extrema(h).minima, &roots);
    InertiaZeros { roots, blocked }
}

/// True when at least two of the arcs between circularly consecutive
/// minima contain a zero: then some pair of minima is cut off both ways.
fn separates_minima(minima: &[f64], zeros: &[f64]) -> bool {
    if minima.len() < 2 || zeros.is_empty() {
        return false;
    }
    let mut sorted = minima.to_vec();
    sorted.sort_by(f64::total_cmp);
    let arcs_with_zero = (0..sorted.len())
        .filter(|&i| {
            let start = sorted[i];
            let len = (sorted[(i + 1) % sorted.len()] - start).rem_euclid(TAU);
            let len = if len == 0.0 { TAU } else { len };
            zeros.iter().any(|&z| {
                let offset = (z - start).rem_euclid(TAU);
                offset > 0.0 && offset < len
            })
        })
        .count();
    arcs_with_zero >= 2
}

/// Zero `φ₀ ∈ (0, π]` of the large-`Nₛ` Lipkin inertia,
/// `cos φ + χ(1 + sin²φ) = 0`, if any.
pub fn lipkin_inertia_zero_locus(chi: f64) -> Option<f64> {
    if chi == 0.0 {
        return Some(FRAC_PI_2);
    }
    // χc² - c - 2χ = 0 with c = cos φ; the other root exceeds one.
    let c = (1.0 - (1.0 + 8.0 * chi * chi).sqrt()) / (2.0 * chi);
    if c < -1.0 - 1e-12 {
        None
    } else {
        Some(c.max(-1.0).acos())
    }
}

/// `χ_c = (Nₛ+1)/(Nₛ+3)`, where the `φ = 0` minimum of the Lipkin
/// potential turns into a maximum.
pub fn critical_chi(ns: u32) -> f64 {
    let n = f64::from(ns);
    (n + 1.0) / (n + 3.0)
}

/// `χ` at which the numerically differentiated `V_L''(0)` changes sign.
pub fn critical_chi_numeric(ns: u32) -> Result<f64> {
    let curvature = |chi: f64| -> f64 {
        match closed_form_lipkin(chi, ns) {
            Ok(h) => {
                let v = h.potential;
                derivative(|x| derivative(|y| v.eval(y), x), 0.0)
            }
            Err(_) => f64::NAN,
        }
    };
    closed_form_lipkin(0.0, ns)?;
    Ok(bisect(curvature, 0.0, 2.0, 1e-12))
}

/// One parameter value of a sweep. Angle-side fields are `None` when the
/// angle solve failed; `status` then carries the error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter_value: f64,
    pub ground_exact: f64,
    pub ground_angle: Option<f64>,
    pub relative_error: Option<f64>,
    pub barrier_height: Option<f64>,
    pub inertia_min: f64,
    pub blocked: bool,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub parameter_name: String,
    pub unit: Unit,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn failed_rows(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.ground_angle.is_none())
            .count()
    }
}

/// `|E_angle - E_exact| / |E_exact|`, or the absolute difference when the
/// exact energy vanishes.
pub fn relative_error(angle: f64, exact: f64) -> f64 {
    let diff = (angle - exact).abs();
    if exact == 0.0 {
        diff
    } else {
        diff / exact.abs()
    }
}

fn sweep_row(value: f64, preset: &Preset, cfg: &SolverConfig) -> Result<SweepRow> {
    let exact = spectrum_exact(&preset.to_spin_params()?)?.ground();
    let h = closed_form(preset)?;
    let inertia_min = -h.inertia.max_value();
    let blocked = inertia_zeros(&h).blocked;
    let mut row = SweepRow {
        parameter_value: value,
        ground_exact: exact,
        ground_angle: None,
        relative_error: None,
        barrier_height: None,
        inertia_min,
        blocked,
        status: "ok".into(),
    };
    match solve(&h, &cfg.eig_count(1)) {
        Ok(s) => {
            let g = s.ground();
            row.ground_angle = Some(g);
            row.relative_error = Some(relative_error(g, exact));
            row.barrier_height = Some(barrier_height(&h, g).value);
            if !s.converged {
                row.status = format!("not converged (drift {:e})", s.drift);
            }
        }
        Err(e) => row.status = e.to_string(),
    }
    Ok(row)
}

/// Exact and angle ground states over a parameter grid, one preset per
/// value, computed in parallel. Rows come back sorted by parameter value.
///
/// Invalid presets are an error for the whole sweep; a failed angle solve
/// only marks its row.
pub fn relative_error_curve<F>(
    parameter_name: &str,
    values: &[f64],
    make: F,
    cfg: &SolverConfig,
) -> Result<SweepResult>
where
    F: Fn(f64) -> Result<Preset> + Sync,
{
    cfg.validate()?;
    let presets = values
        .iter()
        .map(|&v| make(v).and_then(|p| p.check().map(|_| (v, p))))
        .collect::<Result<Vec<_>>>()?;
    let unit = presets.first().map_or(Unit::Epsilon, |(_, p)| p.unit());
    let mut rows = presets
        .par_iter()
        .map(|(v, p)| sweep_row(*v, p, cfg))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.parameter_value.total_cmp(&b.parameter_value));
    Ok(SweepResult {
        parameter_name: parameter_name.to_string(),
        unit,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::{closed_form_fe8, closed_form_mn12, HamiltonianForm};
    use crate::spin_models::SpinParams;

    fn near_any(set: &[f64], want: f64, tol: f64) -> bool {
        set.iter().any(|&x| circular_distance(x, want) < tol)
    }

    #[test]
    fn critical_chi_values() {
        assert_eq!(critical_chi(2), 0.6);
        assert!((critical_chi(20) - 21.0 / 23.0).abs() < 1e-15);
        assert!((1.0 - critical_chi(1_000_000)).abs() < 3e-6);
        for ns in [4, 10, 20, 100] {
            let numeric = critical_chi_numeric(ns).unwrap();
            assert!((numeric - critical_chi(ns)).abs() < 1e-6, "{ns}: {numeric}");
        }
    }

    #[test]
    fn lipkin_locus() {
        assert_eq!(lipkin_inertia_zero_locus(0.0), Some(FRAC_PI_2));
        assert!((lipkin_inertia_zero_locus(1.0).unwrap() - PI).abs() < 1e-12);
        assert_eq!(lipkin_inertia_zero_locus(1.5), None);
        // Agrees with the zeros found on the closed form itself.
        for chi in [0.2, 0.5, 0.9] {
            let h = closed_form_lipkin(chi, 40).unwrap();
            let zeros = inertia_zeros(&h).roots;
            let phi0 = lipkin_inertia_zero_locus(chi).unwrap();
            assert!(near_any(&zeros, phi0, 1e-9));
            assert!(near_any(&zeros, -phi0, 1e-9));
        }
    }

    #[test]
    fn mn12_inertia_zeros() {
        let h = closed_form_mn12(0.6, 10, 0.0).unwrap();
        let z = inertia_zeros(&h);
        assert_eq!(z.roots.len(), 2);
        assert!(near_any(&z.roots, FRAC_PI_2, 1e-8));
        assert!(near_any(&z.roots, -FRAC_PI_2, 1e-8));
        assert!(z.blocked);

        let h = closed_form_mn12(0.6, 10, 0.5).unwrap();
        let z = inertia_zeros(&h);
        assert!(near_any(&z.roots, 2.0 * PI / 3.0, 1e-9));
        assert!(near_any(&z.roots, -2.0 * PI / 3.0, 1e-9));
        assert!(z.blocked);
    }

    #[test]
    fn fe8_not_blocked() {
        let h = closed_form_fe8(0.275, 0.046, 10).unwrap();
        let z = inertia_zeros(&h);
        assert!(z.roots.is_empty());
        assert!(!z.blocked);
        assert!(h.kinetic_coeff.min_value() > 0.0);
        assert!((-h.inertia.max_value() - 0.184).abs() < 1e-12);
    }

    #[test]
    fn extrema_of_presets() {
        for h in [
            closed_form_mn12(0.6, 10, 0.0).unwrap(),
            closed_form_fe8(0.275, 0.046, 10).unwrap(),
        ] {
            let e = extrema(&h);
            assert_eq!(e.minima.len(), 2);
            assert_eq!(e.maxima.len(), 2);
            assert!(near_any(&e.minima, 0.0, 1e-10));
            assert!(near_any(&e.minima, PI, 1e-10));
            assert!(near_any(&e.maxima, FRAC_PI_2, 1e-10));
            assert!(near_any(&e.maxima, -FRAC_PI_2, 1e-10));
        }
        // Stationary condition of the field term: cos φ = -S·h/√(S(S+1)).
        let h = 0.3;
        let e = extrema(&closed_form_mn12(0.6, 10, h).unwrap());
        let phi_max = (-10.0 * h / 110f64.sqrt()).acos();
        assert!(near_any(&e.maxima, phi_max, 1e-10));
        assert!(near_any(&e.maxima, -phi_max, 1e-10));
        assert!(near_any(&e.minima, 0.0, 1e-10));
        assert!(near_any(&e.minima, PI, 1e-10));
    }

    #[test]
    fn barrier_heights() {
        let fe8 = closed_form_fe8(0.275, 0.046, 10).unwrap();
        let b = barrier_height(&fe8, -27.645);
        assert!(b.has_barrier);
        assert!((b.value - (-0.046 * 110.0 + 27.645)).abs() < 1e-10);

        let mn = closed_form_mn12(0.6, 10, 0.0).unwrap();
        assert!((barrier_height(&mn, -60.278).value - 60.278).abs() < 1e-10);

        let flat = AngleHamiltonian::new(
            AngleFunction::from_fn(|_| -1.0, 64, 4),
            AngleFunction::from_fn(|_| -1.0, 64, 4),
            SpinParams::new(1.0, 0.0, 0.0, 1.0, Unit::Epsilon),
            HamiltonianForm::LargeNClosed,
        );
        let b = barrier_height(&flat, -3.0);
        assert!(!b.has_barrier);
        assert_eq!(b.value, 0.0);
    }

    #[test]
    fn barrier_gauge_invariance() {
        let shift = 12.5;
        let base = closed_form_fe8(0.275, 0.046, 10).unwrap();
        let shifted = AngleHamiltonian::new(
            AngleFunction::from_fn(
                move |p| -0.229 * 110.0 * p.cos().powi(2) - 0.046 * 110.0 + shift,
                256,
                8,
            ),
            base.inertia.clone(),
            base.model,
            base.form,
        );
        let a = barrier_height(&base, -27.645).value;
        let b = barrier_height(&shifted, -27.645 + shift).value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn separation_on_circle() {
        assert!(separates_minima(&[0.0, PI], &[FRAC_PI_2, -FRAC_PI_2]));
        assert!(!separates_minima(&[0.0, PI], &[FRAC_PI_2, 1.7]));
        assert!(!separates_minima(&[0.0], &[1.0, 2.0]));
        assert!(separates_minima(&[-3.0, 3.0], &[3.1, 0.0]));
    }

    #[test]
    fn sweep_rows_sorted_and_marked() {
        let values = [20.0, 4.0, 10.0];
        let cfg = SolverConfig::with_cutoff(32);
        let r = relative_error_curve(
            "Ns",
            &values,
            |v| {
                Ok(Preset::Lipkin {
                    chi: 1.0,
                    ns: v as u32,
                })
            },
            &cfg,
        )
        .unwrap();
        let params: Vec<f64> = r.rows.iter().map(|x| x.parameter_value).collect();
        assert_eq!(params, vec![4.0, 10.0, 20.0]);
        assert_eq!(r.failed_rows(), 0);

        // χ < 1 makes K negative near φ = π; the row is kept but marked.
        let r = relative_error_curve(
            "chi",
            &[0.5],
            |chi| Ok(Preset::Lipkin { chi, ns: 10 }),
            &cfg,
        )
        .unwrap();
        assert_eq!(r.failed_rows(), 1);
        assert!(r.rows[0].status.contains("kinetic"));
        assert!(r.rows[0].relative_error.is_none());
    }
}
