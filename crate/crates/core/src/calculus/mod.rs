//! Exact second-order calculus for operator identities.

pub mod function;
pub mod jet;
pub mod operators;

pub use function::TestFunction;
pub use jet::{Jet1, Jet2};
pub use operators::{
    apply_annihilator, apply_creator, apply_hamiltonian_direct, apply_hamiltonian_factorized,
    apply_jacobi_hamiltonian, apply_partner, jacobi_action, jacobi_dagger_action, jacobi_matrix, residual_scale,
    total_momentum, ActionOutput, ModelPoint, OperatorAction,
};
