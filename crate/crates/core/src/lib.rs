//! Weighted harmonic analysis on the integer and real lines.
//!
//! The crate is organised by subsystem:
//!
//! * [`weights`]: weight functions, axiom checks and growth diagnostics.
//! * [`polycalc`]: sampled signals, polynomials, difference calculus, iterated
//!   sums/primitives and the exact coefficient identities behind them.
//! * [`ergodic`]: Maak/Cesàro means, weighted means and decay tests.
//! * [`almostper`]: trigonometric polynomials, Bohr coefficients, the weighted
//!   almost-periodic decomposition, epsilon-periods and the slowly converging
//!   cosine series used as a counterexample.
//! * [`spectrum`]: exact spectra of trigonometric polynomials, spectral
//!   estimation on samples and band-pass smoothing kernels.
//! * [`evolution`]: recurrence/differential operators, resonance sets, a forward
//!   recurrence solver and matrix-scale operator asymptotics.
//! * [`linalg`]: the small dense complex linear algebra everything above uses.

pub mod almostper;
pub mod cjson;
pub mod ergodic;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod polycalc;
pub mod spectrum;
pub mod weights;

mod domain;

pub use domain::Domain;
pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use almostper::{APDecomposition, TrigPoly};
pub use ergodic::{MeanEstimate, WMeanEstimate};
pub use evolution::{DiffOp, MatrixOp, RecurrenceOp, ResonanceSet};
pub use linalg::CMatrix;
pub use polycalc::{GroupPoly, Signal};
pub use spectrum::{SmoothingKernel, SpectrumEstimate};
pub use weights::{AxiomReport, Weight, WeightForm};
