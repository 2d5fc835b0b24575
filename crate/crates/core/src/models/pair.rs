//! Two-body prepotentials whose N-body extension has a product ground state.
//!
//! For an odd pair function `W`, the N-body operator `Σ A_i† A_i` contains a
//! genuine three-body term unless
//! `-W(A)W(C) - W(A)W(B) - W(C)W(B) = ṽ₀(A) + ṽ₀(B) + ṽ₀(C)` whenever
//! `A + B + C = 0`. The rows below satisfy it, with `v₀ = W² - W'`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "row", rename_all = "snake_case")]
pub enum PairPrepotential<T> {
    /// `W = -(a x + b/x)`
    RationalHarmonic { a: T, b: T },
    /// `W = -a sgn x`, evaluated away from the origin only.
    Sign { a: T },
    /// `W = -a cot x`
    Cot { a: T },
    /// `W = -a coth x`
    Coth { a: T },
}

impl<T: Real> PairPrepotential<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::RationalHarmonic { .. } => "rational_harmonic",
            Self::Sign { .. } => "sign",
            Self::Cot { .. } => "cot",
            Self::Coth { .. } => "coth",
        }
    }

    pub fn w(&self, x: T) -> T {
        match *self {
            Self::RationalHarmonic { a, b } => -(a * x + b / x),
            Self::Sign { a } => -a * x.signum(),
            Self::Cot { a } => -a / x.tan(),
            Self::Coth { a } => -a / x.tanh(),
        }
    }

    /// `W'(x)` for `x ≠ 0`.
    pub fn dw(&self, x: T) -> T {
        match *self {
            Self::RationalHarmonic { a, b } => -a + b / (x * x),
            Self::Sign { .. } => T::zero(),
            Self::Cot { a } => {
                let s = x.sin();
                a / (s * s)
            }
            Self::Coth { a } => {
                let s = x.sinh();
                a / (s * s)
            }
        }
    }

    /// Regular part of `v₀` in closed form.
    pub fn v0(&self, x: T) -> T {
        let two = lit::<T>(2.0);
        match *self {
            Self::RationalHarmonic { a, b } => b * (b - T::one()) / (x * x) + a * a * x * x + two * a * b + a,
            Self::Sign { a } => a * a,
            Self::Cot { a } => {
                let s = x.sin();
                a * (a - T::one()) / (s * s) - a * a
            }
            Self::Coth { a } => {
                let s = x.sinh();
                a * (a - T::one()) / (s * s) + a * a
            }
        }
    }

    /// Weight of the `δ(x)` term in `v₀`; only the sign row has one.
    pub fn v0_delta_weight(&self) -> T {
        match *self {
            Self::Sign { a } => lit::<T>(2.0) * a,
            _ => T::zero(),
        }
    }

    /// `ṽ₀(x)`.
    pub fn vt0(&self, x: T) -> T {
        match *self {
            Self::RationalHarmonic { a, b } => a * b + a * a * x * x / lit(2.0),
            Self::Sign { a } | Self::Coth { a } => a * a / lit(3.0),
            Self::Cot { a } => -a * a / lit(3.0),
        }
    }

    /// Two-body zero mode `ψ₀ = exp(-∫W)`, unnormalized.
    pub fn psi0(&self, x: T) -> T {
        match *self {
            Self::RationalHarmonic { a, b } => x.abs().powf(b) * (a * x * x / lit(2.0)).exp(),
            Self::Sign { a } => (a * x.abs()).exp(),
            Self::Cot { a } => x.sin().abs().powf(a),
            Self::Coth { a } => x.sinh().abs().powf(a),
        }
    }

    /// Samples avoid `|x| < guard`; the trigonometric row also stays
    /// within one period.
    fn admissible(&self, x: T, guard: T) -> bool {
        match self {
            Self::Cot { .. } => x.sin().abs() > guard,
            _ => x.abs() > guard,
        }
    }
}

/// `|-W(A)W(C) - W(A)W(B) - W(C)W(B) - ṽ₀(A) - ṽ₀(B) - ṽ₀(C)|` with
/// `C = -A - B`, for arbitrary `W` and `ṽ₀`.
pub fn functional_residual<T: Real>(w: impl Fn(T) -> T, vt0: impl Fn(T) -> T, a: T, b: T) -> T {
    let c = -a - b;
    let (wa, wb, wc) = (w(a), w(b), w(c));
    (-wa * wc - wa * wb - wc * wb - vt0(a) - vt0(b) - vt0(c)).abs()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairResidual {
    pub row: String,
    pub samples: usize,
    pub seed: u64,
    pub max_residual: f64,
    pub mean_residual: f64,
    /// `(A, B)` of the largest residual.
    pub worst_sample: (f64, f64),
}

/// Default half-width of the `(A, B)` sampling box.
pub const PAIR_SAMPLE_HALF_WIDTH: f64 = 1.5;
/// Default rejection distance from the singular points.
pub const PAIR_SAMPLE_GUARD: f64 = 0.05;

/// Samples `(A, B)` uniformly in `(-1.5, 1.5)²`, resampling draws where any
/// of `A`, `B`, `C` falls within the guard of a singularity.
pub fn check_pair_condition<T: Real>(pair: &PairPrepotential<T>, samples: usize, seed: u64) -> PairResidual {
    check_pair_condition_with(pair, |x| pair.vt0(x), samples, seed)
}

/// As [`check_pair_condition`], with a replacement `ṽ₀`.
pub fn check_pair_condition_with<T: Real>(
    pair: &PairPrepotential<T>,
    vt0: impl Fn(T) -> T,
    samples: usize,
    seed: u64,
) -> PairResidual {
    let samples = samples.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let guard = lit::<T>(PAIR_SAMPLE_GUARD);
    let (mut max, mut sum, mut worst) = (0.0f64, 0.0f64, (0.0, 0.0));
    let mut taken = 0;
    while taken < samples {
        let a: f64 = rng.gen_range(-PAIR_SAMPLE_HALF_WIDTH..PAIR_SAMPLE_HALF_WIDTH);
        let b: f64 = rng.gen_range(-PAIR_SAMPLE_HALF_WIDTH..PAIR_SAMPLE_HALF_WIDTH);
        let (at, bt) = (lit::<T>(a), lit::<T>(b));
        if ![at, bt, -at - bt].iter().all(|&x| pair.admissible(x, guard)) {
            continue;
        }
        let r = to_f64(functional_residual(|x| pair.w(x), &vt0, at, bt));
        if r > max || taken == 0 {
            max = r;
            worst = (a, b);
        }
        sum += r;
        taken += 1;
    }
    PairResidual {
        row: pair.name().to_string(),
        samples,
        seed,
        max_residual: max,
        mean_residual: sum / samples as f64,
        worst_sample: worst,
    }
}
