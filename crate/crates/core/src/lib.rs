//! Numerical workbench for a family of exactly solvable quantum models:
//! position-dependent-mass (PDM) Schrödinger Hamiltonians, their
//! supersymmetric / intertwining spectral transforms, PT-symmetric lattice
//! band structure, and Gazeau–Klauder coherent-state dynamics.
//!
//! Every analytic claim carried by a [`models::ModelCard`] can be
//! cross-checked against the independent finite-difference oracle in
//! [`grid`].

pub mod coherent;
pub mod floquet;
pub mod grid;
pub mod models;
pub mod numeric;
pub mod specfn;
pub mod transforms;
pub mod verify;

/// Workbench-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Precondition or parameter-constraint violation: bad input, not a bug.
    #[error("invalid input: {0}")]
    Domain(String),
    /// A numerical procedure failed to converge or left its trusted regime.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// The requested model has no Hermitian representative to hand to the
    /// finite-difference solver.
    #[error("model `{0}` has no Hermitian representative; its spectrum is a band-structure quantity (see the floquet module)")]
    NoOracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shared real-valued function-of-position handle.
pub type RealFn = std::sync::Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Shared complex-valued function-of-position handle (potentials may be
/// complex; Hermitian models simply carry a zero imaginary part).
pub type ComplexFn = std::sync::Arc<dyn Fn(f64) -> num_complex::Complex64 + Send + Sync>;
