//! Reductions between spin models and Gaussian-basis electronic structure,
//! with numerically certified error bounds.
//!
//! The crate builds the chain
//!
//! ```text
//! Heisenberg  ->  Fermi-Hubbard  ->  electronic structure in a fixed
//!                                    basis of s-type Gaussian orbitals
//! ```
//!
//! and checks, by exact diagonalization at small sizes, every inequality
//! the chain relies on: second-order perturbation theory for the first
//! arrow, and the orthonormalization/rounding bounds for the second.
//! It also builds the classical (diagonal) gadget that encodes
//! independent set into the lowest-energy Slater determinant.
//!
//! Entry points:
//! - [`instances`]: interaction graphs and problem instances (JSON I/O).
//! - [`heis2hubb`]: the Heisenberg -> Hubbard reduction and the
//!   second-order effective Hamiltonian.
//! - [`layout`] / [`integrals`] / [`lowdin`]: orbital placement, closed-form
//!   Gaussian integrals, and symmetric orthonormalization.
//! - [`fockspace`] / [`spectra`]: second-quantized operators and
//!   eigen-analysis.
//! - [`bounds`]: every lemma hypothesis and conclusion as a numeric predicate,
//!   plus the parameter planner.
//! - [`slater`]: Slater-determinant energies and the independent-set gadget.
//! - [`cli`]: end-to-end pipeline commands used by the `spinchem` binary.

pub mod bounds;
pub mod cli;
pub mod fockspace;
pub mod heis2hubb;
pub mod instances;
pub mod integrals;
pub mod layout;
pub mod lowdin;
pub mod slater;
pub mod spectra;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
