//! Stochastic entropy production for open quantum systems evolving under
//! Kraus-represented CPTP maps.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: dense complex matrices, density matrices, Hermitian
//!   eigendecomposition, von Neumann and relative entropies.
//! - [`cptp`]: Kraus maps, validation, superoperator and Choi forms,
//!   invariant-state extraction.
//! - [`reversal`]: time reversal, the dual (backward) map, the
//!   nonequilibrium potential and the structural checks a map and a pair of
//!   observables must pass for the detailed fluctuation relation to hold.
//! - [`tpm`]: two-point-measurement statistics, the stochastic entropy
//!   production table, moments and verifiers.
//! - [`qubit_thermal`]: closed-form thermalizing qubit with a time-dependent
//!   (possibly negative) decay rate.
//! - [`mitigation`]: windows in which both the mean and the variance of the
//!   entropy production decrease, plus the analytic bounds on the integrated
//!   rate that guarantee or rule them out.
//! - [`io`]: Kraus/config JSON, CSV time series and the command drivers used
//!   by the `entroflux` binary.
//!
//! All entropies are in nats. `ħ = k_B = 1`.

pub mod cptp;
pub mod error;
pub mod io;
pub mod linalg;
pub mod mitigation;
pub mod qubit_thermal;
pub mod random;
pub mod reversal;
pub mod tpm;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, SpectralDecomposition, C64};

/// Numerical tolerances shared across modules.
pub mod tol {
    /// Entrywise Hermiticity tolerance.
    pub const HERM: f64 = 1e-10;
    /// Unit-trace tolerance for density matrices.
    pub const TRACE: f64 = 1e-10;
    /// Most negative eigenvalue accepted for a PSD matrix.
    pub const PSD: f64 = 1e-10;
    /// Smallest eigenvalue allowed under a negative matrix power.
    pub const EPS_INV: f64 = 1e-12;
    /// Eigenvalues at or below this are treated as exact zeros in logarithms.
    pub const EPS_LOG: f64 = 1e-14;
    /// Maximal kernel leakage tolerated by the relative-entropy support check.
    pub const SUPPORT: f64 = 1e-9;
    /// Trace-preservation / unitality tolerance.
    pub const TP: f64 = 1e-9;
    /// Choi matrix eigenvalues above `-CP` count as non-negative.
    pub const CP: f64 = 1e-9;
    /// Width of the eigenvalue-1 cluster of a superoperator.
    pub const FIXED_POINT: f64 = 1e-8;
    /// Invariant states must have all eigenvalues above this.
    pub const POS_DEF: f64 = 1e-10;
    /// Default tolerance when grouping Kraus operators by potential change.
    pub const CLASSIFY: f64 = 1e-7;
    /// Projector algebra tolerance.
    pub const PROJECTOR: f64 = 1e-9;
    /// Probabilities at or below this are zero-measure.
    pub const EPS_PROB: f64 = 1e-12;
}
