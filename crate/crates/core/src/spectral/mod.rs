//! Finite-difference Hamiltonians and their low-lying spectra.

mod eigen;
mod grid;
mod ground;
mod hamiltonian;
mod sparse;

pub use eigen::*;
pub use grid::*;
pub use ground::*;
pub use hamiltonian::*;
pub use sparse::*;
