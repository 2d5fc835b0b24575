//! Seeded configuration and test-function draws.
//!
//! Trial `t` of a run with master seed `s` uses its own ChaCha stream
//! `(s, t)`, so results do not depend on how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::TestFunction;
use crate::models::NBodyModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sampling {
    /// Half side of the box `[-L/2, L/2]^N` for line models.
    pub half_width: f64,
    /// Minimum pair separation (`|sin Δ|` for the periodic model).
    pub rejection: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { half_width: 2.0, rejection: 0.05 }
    }
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

impl Sampling {
    /// Draws a configuration, resampling until every pair clears the
    /// rejection distance. Periodic models draw sorted points in `(0, π)`.
    pub fn configuration<R: Rng>(&self, model: &NBodyModel<f64>, rng: &mut R) -> Vec<f64> {
        let n = model.n();
        let periodic = model.kind().is_periodic();
        loop {
            let mut x: Vec<f64> = if periodic {
                (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::PI)).collect()
            } else {
                (0..n).map(|_| rng.gen_range(-self.half_width..self.half_width)).collect()
            };
            if periodic {
                x.sort_by(f64::total_cmp);
            }
            if self.separated(&x, periodic) {
                return x;
            }
        }
    }

    fn separated(&self, x: &[f64], periodic: bool) -> bool {
        x.iter().enumerate().all(|(i, &a)| {
            x[i + 1..].iter().all(|&b| {
                let gap = if periodic { (a - b).sin().abs() } else { (a - b).abs() };
                gap >= self.rejection
            })
        })
    }
}

/// Runs `trials` independent draws in parallel and returns the results in
/// trial order.
pub fn run_trials<R: Send>(
    model: &NBodyModel<f64>,
    sampling: &Sampling,
    trials: usize,
    seed: u64,
    body: impl Fn(&TestFunction<f64>, &[f64]) -> R + Sync,
) -> Vec<(Vec<f64>, R)> {
    (0..trials.max(1))
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let f = TestFunction::random(model, &mut rng);
            let x = sampling.configuration(model, &mut rng);
            let r = body(&f, &x);
            (x, r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelKind;

    #[test]
    fn periodic_draws_are_sorted_and_separated() {
        let m = NBodyModel::new(ModelKind::CalogeroSutherland, 5, 1.0, None).unwrap();
        let s = Sampling::default();
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            let x = s.configuration(&m, &mut rng);
            assert!(x.windows(2).all(|w| w[0] < w[1]));
            assert!(x.iter().all(|&v| v > 0.0 && v < std::f64::consts::PI));
            assert!(m.check_configuration(&x).is_ok());
        }
    }

    #[test]
    fn streams_are_independent_of_scheduling() {
        let m = NBodyModel::new(ModelKind::Calogero, 3, 1.0, None).unwrap();
        let s = Sampling::default();
        let a = run_trials(&m, &s, 16, 42, |f, x| f.value(x));
        let b: Vec<_> = (0..16)
            .map(|t| {
                let mut rng = trial_rng(42, t);
                let f = TestFunction::random(&m, &mut rng);
                let x = s.configuration(&m, &mut rng);
                let v = f.value(&x);
                (x, v)
            })
            .collect();
        assert_eq!(a, b);
    }
}
