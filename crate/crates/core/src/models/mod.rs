//! Prepotential families: one-dimensional shape-invariant members, the
//! pairwise N-body models and the product-ground-state pair rows.

pub mod nbody;
pub mod pair;
pub mod prepotential1d;

pub use nbody::{ModelKind, NBodyModel, DEFAULT_EPSILON_SING, MODEL_KEYS};
pub use pair::{check_pair_condition, check_pair_condition_with, functional_residual, PairPrepotential, PairResidual};
pub use prepotential1d::{remainder_1d, Family1D, Normalizability, Prepotential1D, Remainder};
