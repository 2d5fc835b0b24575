//! Seeded residual checks of the operator identities, with JSON reports.

pub mod identities;
pub mod report;
pub mod sampling;

pub use identities::*;
pub use report::{ResidualReport, WorstSample};
pub use sampling::{run_trials, trial_rng, Sampling};
