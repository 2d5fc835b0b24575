//! Truncated Taylor data at a point.
//!
//! A [`Jet2`] carries value, gradient and Hessian. Applying a first-order
//! operator consumes one order and yields a [`Jet1`]; a second application
//! yields a plain scalar, so operator products deeper than two cannot be
//! formed on jets.

use serde::Serialize;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Jet2<T> {
    pub value: T,
    pub grad: Vec<T>,
    /// Row-major `n × n`.
    pub hess: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Jet1<T> {
    pub value: T,
    pub grad: Vec<T>,
}

impl<T: Real> Jet2<T> {
    pub fn constant(c: T, n: usize) -> Self {
        Self { value: c, grad: vec![T::zero(); n], hess: vec![T::zero(); n * n] }
    }

    pub fn coordinate(x: &[T], i: usize) -> Self {
        let n = x.len();
        let mut j = Self::constant(x[i], n);
        j.grad[i] = T::one();
        j
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    pub fn hess_at(&self, i: usize, j: usize) -> T {
        self.hess[i * self.dim() + j]
    }

    pub fn laplacian(&self) -> T {
        let n = self.dim();
        (0..n).map(|i| self.hess[i * n + i]).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            value: self.value + other.value,
            grad: zip(&self.grad, &other.grad, |a, b| a + b),
            hess: zip(&self.hess, &other.hess, |a, b| a + b),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            value: self.value * s,
            grad: self.grad.iter().map(|&g| g * s).collect(),
            hess: self.hess.iter().map(|&h| h * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim();
        let (f, g) = (self.value, other.value);
        let mut hess = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                hess.push(
                    f * other.hess[i * n + j]
                        + g * self.hess[i * n + j]
                        + self.grad[i] * other.grad[j]
                        + other.grad[i] * self.grad[j],
                );
            }
        }
        Self {
            value: f * g,
            grad: zip(&self.grad, &other.grad, |a, b| f * b + g * a),
            hess,
        }
    }

    /// `φ ∘ self` given `φ`, `φ'`, `φ''` at `self.value`.
    pub fn compose(&self, d0: T, d1: T, d2: T) -> Self {
        let n = self.dim();
        let mut hess = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                hess.push(d1 * self.hess[i * n + j] + d2 * self.grad[i] * self.grad[j]);
            }
        }
        Self { value: d0, grad: self.grad.iter().map(|&g| d1 * g).collect(), hess }
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.compose(e, e, e)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c)
    }

    /// `|u|^p`.
    pub fn pow_abs(&self, p: T) -> Self {
        let u = self.value;
        let v = u.abs().powf(p);
        self.compose(v, p * v / u, p * (p - T::one()) * v / (u * u))
    }

    /// Largest Hessian asymmetry.
    pub fn asymmetry(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self.hess[i * n + j] - self.hess[j * n + i]).abs());
            }
        }
        worst
    }

    /// `max(|f|, max|∂f|, max|∂²f|)`.
    pub fn magnitude(&self) -> T {
        let g = self.grad.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
        let h = self.hess.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
        self.value.abs().max(g).max(h)
    }
}

impl<T: Real> Jet1<T> {
    pub fn add(&self, other: &Self) -> Self {
        Self { value: self.value + other.value, grad: zip(&self.grad, &other.grad, |a, b| a + b) }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { value: self.value * s, grad: self.grad.iter().map(|&g| g * s).collect() }
    }

    pub fn zero(n: usize) -> Self {
        Self { value: T::zero(), grad: vec![T::zero(); n] }
    }
}

fn zip<T: Copy>(a: &[T], b: &[T], f: impl Fn(T, T) -> T) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}
