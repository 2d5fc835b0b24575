//! One-dimensional prepotential families with their partner-parameter maps.
//!
//! Convention throughout: `A = d/dx + W`, `A† = -d/dx + W`, so
//! `A†A = -d² + W² - W'`, `AA† = -d² + W² + W'` and the zero mode of `A` is
//! `ψ₀ = exp(-∫W)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family1D {
    RosenMorseTrig,
    RationalHarmonic,
    Sign,
    CothHyperbolic,
}

impl Family1D {
    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().replace('-', "_").as_str() {
            "rosen_morse" | "rosen_morse_trig" | "rm" => Ok(Self::RosenMorseTrig),
            "rational" | "rational_harmonic" => Ok(Self::RationalHarmonic),
            "sign" | "sgn" => Ok(Self::Sign),
            "coth" | "coth_hyperbolic" => Ok(Self::CothHyperbolic),
            other => Err(Error::Config(format!("unknown 1-D family `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::RosenMorseTrig => "rosen_morse_trig",
            Self::RationalHarmonic => "rational_harmonic",
            Self::Sign => "sign",
            Self::CothHyperbolic => "coth_hyperbolic",
        }
    }

    /// Parameter names in the order accepted by [`Prepotential1D::new`].
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Self::RosenMorseTrig | Self::CothHyperbolic => &["b", "a"],
            Self::RationalHarmonic => &["a", "b"],
            Self::Sign => &["a"],
        }
    }
}

/// Whether `exp(-∫W)` is an acceptable bound state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalizability {
    Normalizable,
    /// Square integrable, but so is the second solution at the singular
    /// boundary; the self-adjoint extension is not fixed.
    Ambiguous,
    NonNormalizable,
}

impl Normalizability {
    pub fn is_normalizable(self) -> bool {
        self == Self::Normalizable
    }

    /// Classifies a boundary behaviour `ψ ~ r^p` at a regular singular wall.
    pub fn from_wall_exponent<T: Field>(p: T) -> Self {
        let half = T::half();
        if p > half {
            Self::Normalizable
        } else if p > -half {
            Self::Ambiguous
        } else {
            Self::NonNormalizable
        }
    }
}

/// A prepotential family member.
///
/// - Rosen-Morse: `W = -b cot(ax)` on `(0, π/a)`.
/// - Rational harmonic: `W = ax + b/x` on `(0, ∞)`.
/// - Sign: `W = a sgn(x)` on the line (its `2aδ(x)` term is not evaluated).
/// - Coth: `W = -b coth(ax)` on `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Prepotential1D<T> {
    RosenMorseTrig { b: T, a: T },
    RationalHarmonic { a: T, b: T },
    Sign { a: T },
    CothHyperbolic { b: T, a: T },
}

/// Energy shift `R(α₁)` with a flag for the degenerate (`a = 0`) case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Remainder<T> {
    pub value: T,
    pub degenerate: bool,
}

impl<T: Field> Prepotential1D<T> {
    /// Builds a family member from its parameter vector.
    pub fn new(family: Family1D, params: &[T]) -> Result<Self> {
        let expected = family.param_names().len();
        if params.len() != expected {
            return Err(Error::Domain(format!(
                "{} expects {expected} parameters, got {}",
                family.name(),
                params.len()
            )));
        }
        let p = match family {
            Family1D::RosenMorseTrig => Self::RosenMorseTrig { b: params[0], a: params[1] },
            Family1D::RationalHarmonic => Self::RationalHarmonic { a: params[0], b: params[1] },
            Family1D::Sign => Self::Sign { a: params[0] },
            Family1D::CothHyperbolic => Self::CothHyperbolic { b: params[0], a: params[1] },
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let a = match *self {
            Self::RosenMorseTrig { a, .. }
            | Self::RationalHarmonic { a, .. }
            | Self::Sign { a }
            | Self::CothHyperbolic { a, .. } => a,
        };
        if a > T::zero() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{}: scale parameter a must be positive, got {a:?}", self.family().name())))
        }
    }

    pub fn family(&self) -> Family1D {
        match self {
            Self::RosenMorseTrig { .. } => Family1D::RosenMorseTrig,
            Self::RationalHarmonic { .. } => Family1D::RationalHarmonic,
            Self::Sign { .. } => Family1D::Sign,
            Self::CothHyperbolic { .. } => Family1D::CothHyperbolic,
        }
    }

    pub fn params(&self) -> Vec<T> {
        match *self {
            Self::RosenMorseTrig { b, a } | Self::CothHyperbolic { b, a } => vec![b, a],
            Self::RationalHarmonic { a, b } => vec![a, b],
            Self::Sign { a } => vec![a],
        }
    }

    /// Partner-parameter map `α₁ = f(α)`; the family never changes.
    pub fn partner_params(&self) -> Self {
        match *self {
            Self::RosenMorseTrig { b, a } => Self::RosenMorseTrig { b: b + a, a },
            Self::RationalHarmonic { a, b } => Self::RationalHarmonic { a, b: b - T::one() },
            Self::Sign { a } => Self::Sign { a: -a },
            Self::CothHyperbolic { b, a } => Self::CothHyperbolic { b: b + a, a },
        }
    }

    /// Applies the parameter map `n` times.
    pub fn iterate(&self, n: usize) -> Self {
        (0..n).fold(*self, |p, _| p.partner_params())
    }

    /// `R(α₁)` for `α₁ = f(self)`.
    pub fn remainder(&self) -> T {
        remainder_1d(self.family(), &self.partner_params().params())
            .expect("partner parameters have the right arity")
            .value
    }

    /// Behaviour of `exp(-∫W)` on the natural domain.
    pub fn ground_state_normalizability(&self) -> Normalizability {
        match *self {
            Self::RosenMorseTrig { b, a } => Normalizability::from_wall_exponent(b / a),
            Self::RationalHarmonic { a, b } => {
                if a > T::zero() {
                    Normalizability::from_wall_exponent(-b)
                } else {
                    Normalizability::NonNormalizable
                }
            }
            Self::Sign { a } => {
                if a > T::zero() {
                    Normalizability::Normalizable
                } else {
                    Normalizability::NonNormalizable
                }
            }
            Self::CothHyperbolic { b, a } => {
                if b < T::zero() && Normalizability::from_wall_exponent(b / a) == Normalizability::Ambiguous {
                    Normalizability::Ambiguous
                } else {
                    Normalizability::NonNormalizable
                }
            }
        }
    }
}

/// `R(α₁)` given the *next* parameters directly.
///
/// Unlike [`Prepotential1D::new`] this accepts `a = 0`, returning a zero
/// shift flagged as degenerate.
pub fn remainder_1d<T: Field>(family: Family1D, params_next: &[T]) -> Result<Remainder<T>> {
    let expected = family.param_names().len();
    if params_next.len() != expected {
        return Err(Error::Domain(format!("{} expects {expected} parameters", family.name())));
    }
    let (value, a) = match family {
        Family1D::RosenMorseTrig => {
            let (b1, a1) = (params_next[0], params_next[1]);
            let b = b1 - a1;
            (b1 * b1 - b * b, a1)
        }
        Family1D::RationalHarmonic => {
            let a1 = params_next[0];
            (T::from_i32(4) * a1, a1)
        }
        Family1D::Sign => (T::zero(), params_next[0]),
        Family1D::CothHyperbolic => {
            let (b1, a1) = (params_next[0], params_next[1]);
            let b = b1 - a1;
            (b * b - b1 * b1, a1)
        }
    };
    Ok(Remainder { value, degenerate: a == T::zero() })
}

impl<T: Real> Prepotential1D<T> {
    pub fn w(&self, x: T) -> T {
        match *self {
            Self::RosenMorseTrig { b, a } => -b / (a * x).tan(),
            Self::RationalHarmonic { a, b } => a * x + b / x,
            Self::Sign { a } => a * sgn(x),
            Self::CothHyperbolic { b, a } => -b / (a * x).tanh(),
        }
    }

    /// `W'(x)`; zero for the sign family away from the origin.
    pub fn dw(&self, x: T) -> T {
        match *self {
            Self::RosenMorseTrig { b, a } => {
                let s = (a * x).sin();
                a * b / (s * s)
            }
            Self::RationalHarmonic { a, b } => a - b / (x * x),
            Self::Sign { .. } => T::zero(),
            Self::CothHyperbolic { b, a } => {
                let s = (a * x).sinh();
                a * b / (s * s)
            }
        }
    }

    /// `W² - W'`, the potential of `A†A`.
    pub fn potential(&self, x: T) -> T {
        let w = self.w(x);
        w * w - self.dw(x)
    }

    /// `W² + W'`, the potential of `AA†`.
    pub fn partner_potential(&self, x: T) -> T {
        let w = self.w(x);
        w * w + self.dw(x)
    }

    /// Closed form of [`Self::potential`], written independently of `W`.
    pub fn potential_closed_form(&self, x: T) -> T {
        match *self {
            Self::RosenMorseTrig { b, a } => {
                let s = (a * x).sin();
                b * (b - a) / (s * s) - b * b
            }
            Self::RationalHarmonic { a, b } => {
                let two = T::one() + T::one();
                b * (b + T::one()) / (x * x) + a * a * x * x + two * a * b - a
            }
            Self::Sign { a } => a * a,
            Self::CothHyperbolic { b, a } => {
                let s = (a * x).sinh();
                b * (b - a) / (s * s) + b * b
            }
        }
    }

    /// Unnormalized zero mode `exp(-∫W)`.
    pub fn ground_state(&self, x: T) -> T {
        match *self {
            Self::RosenMorseTrig { b, a } => (a * x).sin().abs().powf(b / a),
            Self::RationalHarmonic { a, b } => (-a * x * x * T::half()).exp() * x.abs().powf(-b),
            Self::Sign { a } => (-a * x.abs()).exp(),
            Self::CothHyperbolic { b, a } => (a * x).sinh().abs().powf(b / a),
        }
    }

    /// Natural open domain (possibly infinite).
    pub fn natural_domain(&self) -> (T, T) {
        match *self {
            Self::RosenMorseTrig { a, .. } => (T::zero(), T::PI() / a),
            Self::RationalHarmonic { .. } | Self::CothHyperbolic { .. } => (T::zero(), T::infinity()),
            Self::Sign { .. } => (T::neg_infinity(), T::infinity()),
        }
    }
}

fn sgn<T: Real>(x: T) -> T {
    if x > T::zero() {
        T::one()
    } else if x < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_rational::Ratio;
    use std::f64::consts::PI;

    fn rm(b: f64, a: f64) -> Prepotential1D<f64> {
        Prepotential1D::new(Family1D::RosenMorseTrig, &[b, a]).unwrap()
    }

    #[test]
    fn rosen_morse_examples() {
        let p = rm(2.0, 1.0);
        assert!(p.w(PI / 2.0).abs() < 1e-15);
        assert_eq!(p.partner_params().params(), vec![3.0, 1.0]);
        assert_eq!(p.remainder(), 5.0);
        assert_eq!(rm(1.0, 1.0).remainder(), 3.0);
    }

    #[test]
    fn rational_example() {
        let p = Prepotential1D::new(Family1D::RationalHarmonic, &[1.0, 2.0]).unwrap();
        assert_eq!(p.w(1.0), 3.0);
    }

    #[test]
    fn remainder_examples() {
        let r = remainder_1d(Family1D::RosenMorseTrig, &[3.0, 1.0]).unwrap();
        assert_eq!(r, Remainder { value: 5.0, degenerate: false });
        let r = remainder_1d(Family1D::RosenMorseTrig, &[2.0, 1.0]).unwrap();
        assert_eq!(r.value, 3.0);
        let r = remainder_1d(Family1D::RosenMorseTrig, &[0.5, 0.0]).unwrap();
        assert_eq!(r, Remainder { value: 0.0, degenerate: true });
    }

    #[test]
    fn rejects_non_positive_scale() {
        assert!(matches!(Prepotential1D::new(Family1D::RosenMorseTrig, &[2.0, 0.0]), Err(Error::Domain(_))));
        assert!(Prepotential1D::new(Family1D::Sign, &[-1.0]).is_err());
        assert!(Prepotential1D::new(Family1D::CothHyperbolic, &[1.0]).is_err());
    }

    #[test]
    fn potentials_match_closed_forms() {
        let members = [
            rm(2.0, 1.0),
            rm(0.7, 1.3),
            Prepotential1D::new(Family1D::RationalHarmonic, &[0.8, -1.5]).unwrap(),
            Prepotential1D::new(Family1D::CothHyperbolic, &[1.2, 0.6]).unwrap(),
            Prepotential1D::new(Family1D::Sign, &[0.9]).unwrap(),
        ];
        for p in members {
            for &x in &[0.13, 0.5, 1.1, 2.0] {
                let lhs = p.potential(x);
                let rhs = p.potential_closed_form(x);
                assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "{p:?} at {x}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn partner_potential_is_shifted_original() {
        for p in [rm(2.0, 1.0), rm(1.5, 0.5), Prepotential1D::new(Family1D::RationalHarmonic, &[0.7, -2.0]).unwrap()] {
            let next = p.partner_params();
            for &x in &[0.2, 0.9, 1.4] {
                let lhs = p.partner_potential(x);
                let rhs = next.potential(x) + p.remainder();
                assert_relative_eq!(lhs, rhs, max_relative = 1e-12, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn ground_state_is_annihilated() {
        // (d/dx + W) exp(-∫W) = 0, checked with a central difference
        let p = rm(2.5, 1.0);
        let h = 1e-5;
        for &x in &[0.4, 1.0, 2.2] {
            let d = (p.ground_state(x + h) - p.ground_state(x - h)) / (2.0 * h);
            assert!((d + p.w(x) * p.ground_state(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn normalizability_flags() {
        assert_eq!(rm(2.0, 1.0).ground_state_normalizability(), Normalizability::Normalizable);
        assert_eq!(rm(0.4, 1.0).ground_state_normalizability(), Normalizability::Ambiguous);
        assert_eq!(rm(-1.0, 1.0).ground_state_normalizability(), Normalizability::NonNormalizable);
        let r = Prepotential1D::new(Family1D::RationalHarmonic, &[1.0, -2.0]).unwrap();
        assert!(r.ground_state_normalizability().is_normalizable());
        let c = Prepotential1D::new(Family1D::CothHyperbolic, &[1.0, 1.0]).unwrap();
        assert_eq!(c.ground_state_normalizability(), Normalizability::NonNormalizable);
    }

    #[test]
    fn exact_rational_parameter_chain() {
        let half = Ratio::new(1i64, 2);
        let p = Prepotential1D::new(Family1D::RosenMorseTrig, &[Ratio::from_integer(2), half]).unwrap();
        let p5 = p.iterate(5);
        assert_eq!(p5.params(), vec![Ratio::new(9, 2), half]);
        assert_eq!(p5.family(), Family1D::RosenMorseTrig);
    }

    #[test]
    fn odd_prepotentials() {
        let ps = [
            rm(2.0, 1.0),
            Prepotential1D::new(Family1D::RationalHarmonic, &[1.0, 2.0]).unwrap(),
            Prepotential1D::new(Family1D::Sign, &[1.0]).unwrap(),
            Prepotential1D::new(Family1D::CothHyperbolic, &[1.0, 2.0]).unwrap(),
        ];
        for p in ps {
            for &x in &[0.3, 0.77, 1.9] {
                assert!((p.w(-x) + p.w(x)).abs() < 1e-12 * p.w(x).abs().max(1.0));
            }
        }
    }

    #[test]
    fn f32_evaluation() {
        let p = Prepotential1D::<f32>::new(Family1D::RosenMorseTrig, &[2.0, 1.0]).unwrap();
        assert!((p.potential(1.0) - p.potential_closed_form(1.0)).abs() < 1e-5);
    }
}
