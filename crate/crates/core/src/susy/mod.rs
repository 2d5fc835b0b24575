//! Supersymmetric extension: fermion modes, supercharges and sector spectra.

mod fock;
mod sectors;
mod system;

pub use fock::*;
pub use sectors::*;
pub use system::*;
