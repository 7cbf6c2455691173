//! Exact spectra: the Hamiltonian in the `|j m⟩` basis and the equivalent
//! Gamma-function representation `H_{nn'}` in the conjugate index basis.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::linalg::{symmetric_eigen, Matrix};
use crate::spin_models::{SpinParams, Unit};
use crate::Result;

/// Which solver path produced a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSource {
    ExactJm,
    GammaRep,
    AngleSpectral,
}

impl SpectrumSource {
    pub fn tag(self) -> &'static str {
        match self {
            SpectrumSource::ExactJm => "exact_jm",
            SpectrumSource::GammaRep => "gamma_rep",
            SpectrumSource::AngleSpectral => "angle_spectral",
        }
    }
}

/// Ascending eigenvalues with provenance.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Column eigenvectors in the basis of the diagonalized matrix.
    #[serde(skip)]
    pub vectors: Option<Matrix>,
    pub source: SpectrumSource,
    pub dimension: usize,
    pub unit: Unit,
}

impl Spectrum {
    pub fn ground(&self) -> f64 {
        self.values[0]
    }

    /// `values[2k+1] - values[2k]` for the lowest `pairs` pairs.
    pub fn pair_splittings(&self, pairs: usize) -> Vec<f64> {
        self.values
            .chunks_exact(2)
            .take(pairs)
            .map(|c| c[1] - c[0])
            .collect()
    }
}

/// Eigen-decomposition of a real symmetric matrix tagged with provenance.
pub fn diagonalize(
    m: &Matrix,
    source: SpectrumSource,
    unit: Unit,
    want_vectors: bool,
) -> Result<Spectrum> {
    let eig = symmetric_eigen(m, want_vectors)?;
    Ok(Spectrum {
        dimension: m.dim(),
        values: eig.values,
        vectors: eig.vectors,
        source,
        unit,
    })
}

fn m_values(p: &SpinParams) -> Vec<f64> {
    (0..p.dim()).map(|i| -p.j + i as f64).collect()
}

/// `H = A·Jz + B·Jz² + G·(J+² + J-²)` in the `|j m⟩` basis, `m = -j..j`.
pub fn build_jm_matrix(p: &SpinParams) -> Result<Matrix> {
    p.ensure_valid()?;
    let j = p.j;
    let ms = m_values(p);
    let n = ms.len();
    let mut h = Matrix::zeros(n);
    for (i, &m) in ms.iter().enumerate() {
        h[(i, i)] = p.a * m + p.b * m * m;
        if i + 2 < n {
            // ⟨m+2|J+²|m⟩ = √((j-m)(j+m+1)) · √((j-m-1)(j+m+2))
            let v = p.g * ((j - m) * (j + m + 1.0) * (j - m - 1.0) * (j + m + 2.0)).sqrt();
            h[(i, i + 2)] = v;
            h[(i + 2, i)] = v;
        }
    }
    Ok(h)
}

/// Exact spectrum from the `|j m⟩` matrix.
pub fn spectrum_exact(p: &SpinParams) -> Result<Spectrum> {
    diagonalize(&build_jm_matrix(p)?, SpectrumSource::ExactJm, p.unit, false)
}

/// Index sets of the two parity blocks of the `|j m⟩` matrix (`m + j` even / odd).
pub fn parity_blocks(p: &SpinParams) -> [Vec<usize>; 2] {
    let n = p.dim();
    [(0..n).step_by(2).collect(), (1..n).step_by(2).collect()]
}

/// Exact spectrum assembled from the separately diagonalized parity blocks.
pub fn spectrum_exact_blockwise(p: &SpinParams) -> Result<Spectrum> {
    let h = build_jm_matrix(p)?;
    let mut values = Vec::with_capacity(h.dim());
    for block in parity_blocks(p) {
        values.extend(symmetric_eigen(&h.select(&block), false)?.values);
    }
    values.sort_by(f64::total_cmp);
    Ok(Spectrum {
        dimension: h.dim(),
        values,
        vectors: None,
        source: SpectrumSource::ExactJm,
        unit: p.unit,
    })
}

/// Sign of the last (`G·j(2j-1)` diagonal) term of the Gamma representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaVariant {
    /// `-G·j(2j-1)`: unitarily equivalent to the `|j m⟩` matrix.
    Corrected,
    /// `+G·j(2j-1)` as typeset; shifts the whole spectrum by `2G·j(2j-1)`.
    AsPrinted,
}

/// `ln Γ(x)`, or `None` at the poles `x ∈ {0, -1, -2, ...}` where `1/Γ = 0`.
fn ln_gamma_or_pole(x: f64) -> Option<f64> {
    if x <= 0.0 && (x - x.round()).abs() < 1e-12 {
        None
    } else {
        debug_assert!(
            x > 0.0,
            "Gamma arguments stay non-negative on the index lattice"
        );
        Some(ln_gamma(x))
    }
}

/// `S(j,n,n') / (Γ(d1) Γ(d2))` with the reciprocal-Gamma convention at poles.
fn gamma_ratio(j: f64, n: f64, np: f64, d1: f64, d2: f64) -> f64 {
    let (Some(g1), Some(g2)) = (ln_gamma_or_pole(d1), ln_gamma_or_pole(d2)) else {
        return 0.0;
    };
    let ln_s = 0.5
        * (ln_gamma(j + n + 1.0)
            + ln_gamma(j - n + 1.0)
            + ln_gamma(j + np + 1.0)
            + ln_gamma(j - np + 1.0));
    (ln_s - g1 - g2).exp()
}

/// The Gamma-function representation `H_{nn'}`, indices `n, n' = -j..j`.
///
/// Real symmetric for the field-free (`C₂ = 0`) Hamiltonian. With
/// [`GammaVariant::Corrected`] the spectrum equals the `|j m⟩` spectrum.
pub fn build_gamma_matrix(p: &SpinParams, variant: GammaVariant) -> Result<Matrix> {
    p.ensure_valid()?;
    let j = p.j;
    let ns = m_values(p);
    let dim = ns.len();
    let last_sign = match variant {
        GammaVariant::Corrected => -1.0,
        GammaVariant::AsPrinted => 1.0,
    };
    let mut h = Matrix::zeros(dim);
    for (a, &n) in ns.iter().enumerate() {
        for (b, &np) in ns.iter().enumerate() {
            let half_sum = 0.5 * (n + np);
            let offset = (a as i64 - b as i64).abs();
            let mut v = 0.0;
            match offset {
                0 => {
                    let r1 = gamma_ratio(j, n, np, j + half_sum + 1.0, j - half_sum + 1.0);
                    let r0 = gamma_ratio(j, n, np, j + half_sum, j - half_sum);
                    v += p.b * j / 2.0 * r1;
                    v += p.b / 4.0 * r0 * 2.0;
                    v += p.g / 2.0 * r0 * 6.0;
                    v += last_sign * p.g * j * (2.0 * j - 1.0) * r1;
                }
                1 => {
                    let r = gamma_ratio(
                        j,
                        n,
                        np,
                        (2.0 * j + 1.0) / 2.0 + half_sum,
                        (2.0 * j + 1.0) / 2.0 - half_sum,
                    );
                    v += -p.a / 2.0 * r;
                }
                2 => {
                    let r0 = gamma_ratio(j, n, np, j + half_sum, j - half_sum);
                    v += p.b / 4.0 * r0;
                    v -= p.g / 2.0 * r0;
                }
                _ => {}
            }
            h[(a, b)] = v;
        }
    }
    Ok(h)
}

/// Spectrum of the Gamma-function representation.
pub fn spectrum_gamma(p: &SpinParams, variant: GammaVariant) -> Result<Spectrum> {
    diagonalize(
        &build_gamma_matrix(p, variant)?,
        SpectrumSource::GammaRep,
        p.unit,
        false,
    )
}

/// How the typeset and corrected Gamma representations compare with the
/// `|j m⟩` spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct GammaReport {
    pub j: f64,
    /// Largest eigenvalue difference, corrected variant vs `|j m⟩`.
    pub corrected_max_diff: f64,
    /// Largest eigenvalue difference, as-printed variant vs `|j m⟩`.
    pub printed_max_diff: f64,
    /// The rigid shift `2G·j(2j-1)` expected for the as-printed variant.
    pub printed_expected_shift: f64,
}

pub fn gamma_transcription_report(p: &SpinParams) -> Result<GammaReport> {
    let exact = spectrum_exact(p)?;
    let diff = |s: &Spectrum| {
        s.values
            .iter()
            .zip(&exact.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    };
    Ok(GammaReport {
        j: p.j,
        corrected_max_diff: diff(&spectrum_gamma(p, GammaVariant::Corrected)?),
        printed_max_diff: diff(&spectrum_gamma(p, GammaVariant::AsPrinted)?),
        printed_expected_shift: 2.0 * p.g * p.j * (2.0 * p.j - 1.0),
    })
}
