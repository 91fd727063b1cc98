//! Simulation library for the 2+1 Dirac oscillator in its anti-Jaynes-Cummings
//! form.
//!
//! Natural units are used throughout: ħ = 1, mc² = 1 and the oscillator width
//! Δ = 1, so ω = ξ, times are in ħ/mc² and lengths in Δ.
//!
//! - [`fockspace`]: truncated chiral Fock ⊗ spinor basis and operators
//! - [`model`]: relativistic, effective and Klein-Gordon-derived Hamiltonians
//! - [`dynamics`]: exact propagation and observable time series
//! - [`analytic`]: closed-form reference curves
//! - [`interferometer`]: Mach-Zehnder factorization and the perturbative series
//! - [`cli`]: scenario runner behind the `diracosc` binary

pub mod analytic;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fockspace;
pub mod interferometer;
pub mod linalg;
pub mod model;

pub use error::{Error, Result};
pub use fockspace::{BasisLabel, FockSpace, OperatorMatrix, Spin, StateVector, C64};
pub use model::ModelParams;
