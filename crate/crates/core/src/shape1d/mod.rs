//! One-dimensional shape invariance: algebraic spectra, creation-operator
//! chains on a grid and the Hamiltonian hierarchy.

pub mod chain;
pub mod grid;

pub use chain::{
    algebraic_spectrum, ground_state_1d, hierarchy, wavefunction_chain, ChainState, GroundState1D, HierarchyLevel,
    SpectrumChain, MAX_CHAIN, MIN_CHAIN_SAMPLES,
};
pub use grid::{Boundary, Grid1D, GridFunction1D};
