//! Parametrized spin Hamiltonian `H = A·Jz + B·Jz² + G·(J+² + J-²)` and the
//! three named model presets.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Energy unit carried through every result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    /// Molecule energies given as `E/k_B`.
    Kelvin,
    /// Lipkin single-particle energy `ε`.
    Epsilon,
}

impl Unit {
    pub fn symbol(self) -> &'static str {
        match self {
            Unit::Kelvin => "K",
            Unit::Epsilon => "eps",
        }
    }
}

impl std::fmt::Display for Unit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Coefficients of the operator Hamiltonian and the spin `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinParams {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "G")]
    pub g: f64,
    pub j: f64,
    pub unit: Unit,
}

impl SpinParams {
    pub fn new(a: f64, b: f64, g: f64, j: f64, unit: Unit) -> Self {
        Self { a, b, g, j, unit }
    }

    /// `2j` when it is a non-negative integer.
    pub fn twice_j(&self) -> Option<usize> {
        let t = 2.0 * self.j;
        (t.is_finite() && t >= 0.0 && (t - t.round()).abs() < 1e-9).then(|| t.round() as usize)
    }

    /// Dimension `N = 2j + 1` of the multiplet.
    ///
    /// # Panics
    /// If `2j` is not a non-negative integer; call [`SpinParams::validate`] first.
    pub fn dim(&self) -> usize {
        self.twice_j().expect("2j must be a non-negative integer") + 1
    }

    /// `j` when it is an integer.
    pub fn integer_j(&self) -> Option<i64> {
        self.twice_j()
            .filter(|t| t % 2 == 0)
            .map(|t| (t / 2) as i64)
    }

    /// Human-readable invariant violations; empty when the parameters are usable.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in [("A", self.a), ("B", self.b), ("G", self.g), ("j", self.j)] {
            if !v.is_finite() {
                out.push(format!("{name} must be finite"));
            }
        }
        if self.j.is_finite() {
            if self.twice_j().is_none() {
                out.push("2j must be an integer".to_string());
            } else if self.j < 0.5 {
                out.push("j must be at least 1/2".to_string());
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let problems = self.validate();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(problems.join("; ")))
        }
    }
}

/// The paper models: Lipkin quasi-spin, Mn12-acetate with a parallel field,
/// and the Fe8 cluster without field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "lowercase")]
pub enum Preset {
    Lipkin {
        chi: f64,
        #[serde(rename = "Ns")]
        ns: u32,
    },
    Mn12 {
        #[serde(rename = "D")]
        d: f64,
        #[serde(rename = "S")]
        s: u32,
        /// Parallel field in units of the saturation field, `H∥ / H_a`.
        h: f64,
    },
    Fe8 {
        #[serde(rename = "D")]
        d: f64,
        #[serde(rename = "E")]
        e: f64,
        #[serde(rename = "S")]
        s: u32,
    },
}

impl Preset {
    /// Mn12-acetate with `D/k_B = 0.6 K`, `S = 10` and no field.
    pub const MN12: Preset = Preset::Mn12 {
        d: 0.6,
        s: 10,
        h: 0.0,
    };

    /// Fe8 with `D/k_B = 0.275 K`, `E/k_B = 0.046 K`, `S = 10`.
    pub const FE8: Preset = Preset::Fe8 {
        d: 0.275,
        e: 0.046,
        s: 10,
    };

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Lipkin { .. } => "lipkin",
            Preset::Mn12 { .. } => "mn12",
            Preset::Fe8 { .. } => "fe8",
        }
    }

    pub fn unit(&self) -> Unit {
        match self {
            Preset::Lipkin { .. } => Unit::Epsilon,
            _ => Unit::Kelvin,
        }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidPreset(msg));
        match *self {
            Preset::Lipkin { chi, ns } => {
                if ns < 2 {
                    return bad(format!("Lipkin needs Ns >= 2, got {ns}"));
                }
                if ns % 2 != 0 {
                    return bad(format!("Lipkin needs an even Ns, got {ns}"));
                }
                if !(chi.is_finite() && chi >= 0.0) {
                    return bad(format!("Lipkin needs chi >= 0, got {chi}"));
                }
            }
            Preset::Mn12 { d, s, h } => {
                if !(d.is_finite() && d > 0.0) {
                    return bad(format!("Mn12 needs D > 0, got {d}"));
                }
                if s < 1 {
                    return bad("Mn12 needs S >= 1".to_string());
                }
                if !(h.is_finite() && h >= 0.0) {
                    return bad(format!("Mn12 needs h >= 0, got {h}"));
                }
            }
            Preset::Fe8 { d, e, s } => {
                if !(d.is_finite() && d > 0.0) {
                    return bad(format!("Fe8 needs D > 0, got {d}"));
                }
                if !(e.is_finite() && e > 0.0 && e < d) {
                    return bad(format!("Fe8 needs 0 < E < D, got E = {e}, D = {d}"));
                }
                if s < 1 {
                    return bad("Fe8 needs S >= 1".to_string());
                }
            }
        }
        Ok(())
    }

    /// Operator-Hamiltonian coefficients of the preset.
    pub fn to_spin_params(&self) -> Result<SpinParams> {
        self.check()?;
        Ok(match *self {
            Preset::Lipkin { chi, ns } => {
                let ns = f64::from(ns);
                SpinParams::new(1.0, 0.0, -chi / (2.0 * (ns - 1.0)), ns / 2.0, Unit::Epsilon)
            }
            Preset::Mn12 { d, s, h } => {
                let s = f64::from(s);
                // A = gμ_B·H∥ with H_a = 2SD/(gμ_B).
                SpinParams::new(2.0 * s * d * h, -d, 0.0, s, Unit::Kelvin)
            }
            Preset::Fe8 { d, e, s } => {
                SpinParams::new(0.0, -d, e / 2.0, f64::from(s), Unit::Kelvin)
            }
        })
    }
}

/// Free-function form of [`Preset::to_spin_params`].
pub fn to_spin_params(p: &Preset) -> Result<SpinParams> {
    p.to_spin_params()
}
