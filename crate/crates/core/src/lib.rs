//! Angle-variable effective Hamiltonians for spin tunneling.
//!
//! The pipeline starts from the operator Hamiltonian
//! `H = A·Jz + B·Jz² + G·(J+² + J-²)` and produces a potential `V(φ)` and an
//! inertia function `I(φ)` in a conjugate angle variable. The resulting
//! Schrödinger equation `[-d/dφ K(φ) d/dφ + V(φ)] ψ = E ψ`, with
//! `K = -I/2`, is solved by a plane-wave expansion and compared against
//! exact diagonalization in the `|j m⟩` basis.
//!
//! Module map:
//!
//! * [`spin_models`]: parameters, presets (Lipkin, Mn12-acetate, Fe8) and units.
//! * [`exact`]: `|j m⟩` matrix, the Gamma-function representation, spectra.
//! * [`semiclassical`]: coherent-state energy surface and its minimum.
//! * [`kernels`]: GCM energy and overlap kernels.
//! * [`angle`]: Wigner surface, moment expansion, closed forms.
//! * [`spectral`]: Fourier solver for the angle Hamiltonian.
//! * [`analysis`]: error curves, barriers, inertia zeros, sweeps.
//! * [`output`]: CSV/JSON serialization with fixed formatting.
//! * [`validation`]: the numbered acceptance checks, runnable from the CLI.

pub mod analysis;
pub mod angle;
mod error;
pub mod exact;
pub mod kernels;
pub mod linalg;
mod numeric;
pub mod output;
pub mod semiclassical;
pub mod spectral;
pub mod spin_models;
pub mod validation;

pub use error::{Error, Result};
pub use numeric::NeumaierSum;

pub use angle::{AngleFunction, AngleHamiltonian, HamiltonianForm};
pub use exact::{Spectrum, SpectrumSource};
pub use spectral::{AngleSpectrum, SolverConfig};
pub use spin_models::{Preset, SpinParams, Unit};
