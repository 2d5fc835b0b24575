//! Ladder-operator factorizations of Calogero-type Hamiltonians, checked to
//! numerical residual.
//!
//! The crate is organised bottom-up:
//!
//! - [`models`]: prepotentials, couplings and parameter maps
//! - [`calculus`]: exact second-order jets and the ladder operators acting on them
//! - [`verify`]: seeded residual reports for each operator identity
//! - [`shape1d`]: algebraic spectra and creation-operator chains in one dimension
//! - [`spectral`]: finite-difference Hamiltonians and eigensolvers
//! - [`susy`]: fermionic extensions on a grid
//!
//! Generic code is parameterised by [`scalar::Real`] (or [`scalar::Field`]
//! where only arithmetic is needed); the aliases below fix `f64`.

pub mod calculus;
pub mod config;
pub mod error;
pub mod models;
pub mod scalar;
pub mod shape1d;
pub mod spectral;
pub mod susy;
pub mod verify;

pub use error::{Error, Result};

pub type Model = models::NBodyModel<f64>;
pub type Prepotential = models::Prepotential1D<f64>;
pub type Pair = models::PairPrepotential<f64>;
pub type Jet = calculus::Jet2<f64>;
pub type TestFunction = calculus::TestFunction<f64>;
