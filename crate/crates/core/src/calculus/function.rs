//! Compositional test functions with exact second derivatives.

use rand::Rng;
use serde::Serialize;

use super::jet::Jet2;
use crate::models::{ModelKind, NBodyModel};
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TestFunction<T> {
    Const(T),
    Coord(usize),
    Sum(Vec<TestFunction<T>>),
    Product(Vec<TestFunction<T>>),
    Scale(T, Box<TestFunction<T>>),
    Exp(Box<TestFunction<T>>),
    Sin(Box<TestFunction<T>>),
    Cos(Box<TestFunction<T>>),
    PowAbs(Box<TestFunction<T>>, T),
}

impl<T: Real> TestFunction<T> {
    /// Maximal derivative order the evaluator provides.
    pub const ORDER: usize = 2;

    pub fn eval(&self, x: &[T]) -> Jet2<T> {
        let n = x.len();
        match self {
            Self::Const(c) => Jet2::constant(*c, n),
            Self::Coord(i) => Jet2::coordinate(x, *i),
            Self::Sum(terms) => terms.iter().fold(Jet2::constant(T::zero(), n), |acc, t| acc.add(&t.eval(x))),
            Self::Product(terms) => terms.iter().fold(Jet2::constant(T::one(), n), |acc, t| acc.mul(&t.eval(x))),
            Self::Scale(s, f) => f.eval(x).scale(*s),
            Self::Exp(f) => f.eval(x).exp(),
            Self::Sin(f) => f.eval(x).sin(),
            Self::Cos(f) => f.eval(x).cos(),
            Self::PowAbs(f, p) => f.eval(x).pow_abs(*p),
        }
    }

    /// Plain value without derivatives.
    pub fn value(&self, x: &[T]) -> T {
        match self {
            Self::Const(c) => *c,
            Self::Coord(i) => x[*i],
            Self::Sum(terms) => terms.iter().map(|t| t.value(x)).sum(),
            Self::Product(terms) => terms.iter().fold(T::one(), |acc, t| acc * t.value(x)),
            Self::Scale(s, f) => *s * f.value(x),
            Self::Exp(f) => f.value(x).exp(),
            Self::Sin(f) => f.value(x).sin(),
            Self::Cos(f) => f.value(x).cos(),
            Self::PowAbs(f, p) => f.value(x).abs().powf(*p),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::Const(c)
    }

    pub fn coord(i: usize) -> Self {
        Self::Coord(i)
    }

    pub fn difference(i: usize, j: usize) -> Self {
        Self::Sum(vec![Self::Coord(i), Self::Scale(-T::one(), Box::new(Self::Coord(j)))])
    }

    /// `Σ_i x_i`.
    pub fn coordinate_sum(n: usize) -> Self {
        Self::Sum((0..n).map(Self::Coord).collect())
    }

    pub fn exp(f: Self) -> Self {
        Self::Exp(Box::new(f))
    }
    pub fn sin(f: Self) -> Self {
        Self::Sin(Box::new(f))
    }
    pub fn cos(f: Self) -> Self {
        Self::Cos(Box::new(f))
    }
    pub fn scale(s: T, f: Self) -> Self {
        Self::Scale(s, Box::new(f))
    }
    pub fn pow_abs(f: Self, p: T) -> Self {
        Self::PowAbs(Box::new(f), p)
    }

    /// `exp(-Σ (x_i - μ_i)² / 2σ²)`.
    pub fn gaussian(mu: &[T], sigma: T) -> Self {
        let k = -T::one() / (lit::<T>(2.0) * sigma * sigma);
        let terms = mu
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let d = Self::Sum(vec![Self::Coord(i), Self::Const(-m)]);
                Self::Product(vec![d.clone(), d])
            })
            .collect();
        Self::exp(Self::scale(k, Self::Sum(terms)))
    }

    /// Product ground state `Π_{i<j} ψ(x_i - x_j)`, assembled from generic
    /// nodes rather than from the model's prepotential.
    pub fn jastrow(model: &NBodyModel<T>) -> Self {
        let n = model.n();
        let alpha = model.alpha();
        let mut factors = Vec::new();
        let mut squares = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let d = Self::difference(i, j);
                let base = if model.kind() == ModelKind::CalogeroSutherland { Self::sin(d.clone()) } else { d.clone() };
                factors.push(Self::pow_abs(base, alpha));
                squares.push(Self::Product(vec![d.clone(), d]));
            }
        }
        if model.kind() == ModelKind::HarmonicCalogero {
            factors.push(Self::exp(Self::scale(-model.beta() / lit(2.0), Self::Sum(squares))));
        }
        Self::Product(factors)
    }

    /// A smooth random function adapted to the model's geometry.
    ///
    /// Line models get a Gaussian envelope times a polynomial of degree at
    /// most three; the periodic model gets a sum of products of `sin` and
    /// `cos` of the coordinates.
    pub fn random<R: Rng>(model: &NBodyModel<T>, rng: &mut R) -> Self {
        let n = model.n();
        if model.kind().is_periodic() {
            let terms = (0..3)
                .map(|_| {
                    let c = lit::<T>(rng.gen_range(-1.0..1.0));
                    let factors = (0..n)
                        .map(|i| {
                            let k = lit::<T>(rng.gen_range(0..3) as f64);
                            let arg = Self::scale(k, Self::Coord(i));
                            if rng.gen_bool(0.5) {
                                Self::sin(arg)
                            } else {
                                Self::cos(arg)
                            }
                        })
                        .collect::<Vec<_>>();
                    Self::scale(c, Self::Product(factors))
                })
                .collect();
            Self::Sum(vec![Self::Const(lit(rng.gen_range(-1.0..1.0))), Self::Sum(terms)])
        } else {
            let mu: Vec<T> = (0..n).map(|_| lit(rng.gen_range(-1.0..1.0))).collect();
            let sigma = lit::<T>(rng.gen_range(0.8..2.0));
            let mut monomials = vec![Self::Const(lit(rng.gen_range(-1.0..1.0)))];
            for _ in 0..4 {
                let degree = rng.gen_range(1..=3);
                let mut factors = vec![Self::Const(lit(rng.gen_range(-1.0..1.0)))];
                factors.extend((0..degree).map(|_| Self::Coord(rng.gen_range(0..n))));
                monomials.push(Self::Product(factors));
            }
            Self::Product(vec![Self::gaussian(&mu, sigma), Self::Sum(monomials)])
        }
    }
}
