//! Ladder operators `A_i = ∂_i + W_i`, `A_i† = -∂_i + W_i` acting on jets.
//!
//! Indices are zero-based. First-order actions map a [`Jet2`] to a
//! [`Jet1`]; second-order actions (Hamiltonians, commutators) end in a
//! scalar.

use serde::Serialize;

use super::function::TestFunction;
use super::jet::{Jet1, Jet2};
use crate::error::{Error, Result};
use crate::models::NBodyModel;
use crate::scalar::{lit, Real};

/// Prepotential values and Jacobian at a configuration.
#[derive(Debug, Clone)]
pub struct ModelPoint<T> {
    pub n: usize,
    pub w: Vec<T>,
    /// `jac[i * n + j] = ∂_j W_i`
    pub jac: Vec<T>,
}

impl<T: Real> ModelPoint<T> {
    pub fn new(model: &NBodyModel<T>, x: &[T]) -> Result<Self> {
        let (w, jac) = model.prepotential_jacobian(x)?;
        Ok(Self { n: model.n(), w, jac })
    }

    /// `Σ_i c_i A_i f` (sign `+1`) or `Σ_i c_i A_i† f` (sign `-1`).
    pub fn first_order(&self, coeffs: &[T], sign: T, f: &Jet2<T>) -> Jet1<T> {
        let n = self.n;
        let mut out = Jet1::zero(n);
        for (i, &c) in coeffs.iter().enumerate() {
            if c == T::zero() {
                continue;
            }
            let wi = self.w[i];
            out.value = out.value + c * (sign * f.grad[i] + wi * f.value);
            for j in 0..n {
                let d = sign * f.hess[i * n + j] + self.jac[i * n + j] * f.value + wi * f.grad[j];
                out.grad[j] = out.grad[j] + c * d;
            }
        }
        out
    }

    /// Value of `Σ_i c_i A_i g` (sign `+1`) or `Σ_i c_i A_i† g` (sign `-1`).
    pub fn first_order_value(&self, coeffs: &[T], sign: T, g: &Jet1<T>) -> T {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * (sign * g.grad[i] + self.w[i] * g.value))
            .sum()
    }

    pub fn lower(&self, i: usize, f: &Jet2<T>) -> Jet1<T> {
        self.first_order(&unit(self.n, i), T::one(), f)
    }

    pub fn raise(&self, i: usize, f: &Jet2<T>) -> Jet1<T> {
        self.first_order(&unit(self.n, i), -T::one(), f)
    }

    pub fn lower_value(&self, i: usize, g: &Jet1<T>) -> T {
        self.first_order_value(&unit(self.n, i), T::one(), g)
    }

    pub fn raise_value(&self, i: usize, g: &Jet1<T>) -> T {
        self.first_order_value(&unit(self.n, i), -T::one(), g)
    }

    /// `Σ_i A_i† A_i f`, composed operator by operator.
    pub fn factorized(&self, f: &Jet2<T>) -> T {
        (0..self.n).map(|i| self.raise_value(i, &self.lower(i, f))).sum()
    }

    /// `Σ_i A_i A_i† f`.
    pub fn partner(&self, f: &Jet2<T>) -> T {
        (0..self.n).map(|i| self.lower_value(i, &self.raise(i, f))).sum()
    }
}

fn unit<T: Real>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

fn check_index(model_n: usize, i: usize) -> Result<()> {
    if i < model_n {
        Ok(())
    } else {
        Err(Error::Domain(format!("operator index {i} out of range for N = {model_n}")))
    }
}

pub fn apply_annihilator<T: Real>(model: &NBodyModel<T>, i: usize, f: &TestFunction<T>, x: &[T]) -> Result<Jet1<T>> {
    check_index(model.n(), i)?;
    Ok(ModelPoint::new(model, x)?.lower(i, &f.eval(x)))
}

pub fn apply_creator<T: Real>(model: &NBodyModel<T>, i: usize, f: &TestFunction<T>, x: &[T]) -> Result<Jet1<T>> {
    check_index(model.n(), i)?;
    Ok(ModelPoint::new(model, x)?.raise(i, &f.eval(x)))
}

/// `-∇²f + V f` with the model's printed potential and constant.
pub fn apply_hamiltonian_direct<T: Real>(model: &NBodyModel<T>, f: &TestFunction<T>, x: &[T]) -> Result<T> {
    let jet = f.eval(x);
    Ok(direct_on_jet(model, &jet, x)?)
}

pub(crate) fn direct_on_jet<T: Real>(model: &NBodyModel<T>, jet: &Jet2<T>, x: &[T]) -> Result<T> {
    Ok(-jet.laplacian() + model.potential(x)? * jet.value)
}

pub fn apply_hamiltonian_factorized<T: Real>(model: &NBodyModel<T>, f: &TestFunction<T>, x: &[T]) -> Result<T> {
    Ok(ModelPoint::new(model, x)?.factorized(&f.eval(x)))
}

pub fn apply_partner<T: Real>(model: &NBodyModel<T>, f: &TestFunction<T>, x: &[T]) -> Result<T> {
    Ok(ModelPoint::new(model, x)?.partner(&f.eval(x)))
}

/// Real coefficient of `-i` in `P_TOT f = -i Σ_i A_i f`.
pub fn total_momentum<T: Real>(model: &NBodyModel<T>, f: &TestFunction<T>, x: &[T]) -> Result<T> {
    let p = ModelPoint::new(model, x)?;
    Ok(p.first_order(&vec![T::one(); model.n()], T::one(), &f.eval(x)).value)
}

/// Orthogonal Jacobi matrix, row-major. Row `k < N-1` is
/// `(1, …, 1, -(k+1), 0, …) / √((k+1)(k+2))`; the last row is `(1, …, 1)/√N`.
pub fn jacobi_matrix<T: Real>(n: usize) -> Vec<T> {
    let mut o = vec![T::zero(); n * n];
    for k in 0..n.saturating_sub(1) {
        let m = (k + 1) as f64;
        let norm = lit::<T>((m * (m + 1.0)).sqrt());
        for i in 0..=k {
            o[k * n + i] = T::one() / norm;
        }
        o[k * n + k + 1] = -lit::<T>(m) / norm;
    }
    let last = T::one() / lit::<T>(n as f64).sqrt();
    for i in 0..n {
        o[(n - 1) * n + i] = last;
    }
    o
}

/// `B_k f = Σ_i O_ki A_i f`.
pub fn jacobi_action<T: Real>(model: &NBodyModel<T>, k: usize, f: &TestFunction<T>, x: &[T]) -> Result<Jet1<T>> {
    check_index(model.n(), k)?;
    let n = model.n();
    let o = jacobi_matrix::<T>(n);
    Ok(ModelPoint::new(model, x)?.first_order(&o[k * n..(k + 1) * n], T::one(), &f.eval(x)))
}

/// `B_k† f = Σ_i O_ki A_i† f`.
pub fn jacobi_dagger_action<T: Real>(model: &NBodyModel<T>, k: usize, f: &TestFunction<T>, x: &[T]) -> Result<Jet1<T>> {
    check_index(model.n(), k)?;
    let n = model.n();
    let o = jacobi_matrix::<T>(n);
    Ok(ModelPoint::new(model, x)?.first_order(&o[k * n..(k + 1) * n], -T::one(), &f.eval(x)))
}

/// `Σ_k B_k† B_k f`.
pub fn apply_jacobi_hamiltonian<T: Real>(model: &NBodyModel<T>, f: &TestFunction<T>, x: &[T]) -> Result<T> {
    let n = model.n();
    let o = jacobi_matrix::<T>(n);
    let p = ModelPoint::new(model, x)?;
    let jet = f.eval(x);
    Ok((0..n)
        .map(|k| {
            let row = &o[k * n..(k + 1) * n];
            p.first_order_value(row, -T::one(), &p.first_order(row, T::one(), &jet))
        })
        .sum())
}

/// Residual scale `max(1, |f|, |∇f|, |∇²f|, |V|)`.
pub fn residual_scale<T: Real>(model: &NBodyModel<T>, jet: &Jet2<T>, x: &[T]) -> Result<T> {
    Ok(T::one().max(jet.magnitude()).max(model.potential(x)?.abs()))
}

/// Tag for the operator actions above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorAction {
    Annihilate(usize),
    Create(usize),
    Jacobi(usize),
    HamiltonianDirect,
    HamiltonianFactorized,
    HamiltonianPartner,
    TotalMomentum,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ActionOutput<T> {
    Jet(Jet1<T>),
    Scalar(T),
}

impl<T: Copy> ActionOutput<T> {
    pub fn value(&self) -> T {
        match self {
            Self::Jet(j) => j.value,
            Self::Scalar(v) => *v,
        }
    }
}

impl OperatorAction {
    pub fn apply<T: Real>(self, model: &NBodyModel<T>, f: &TestFunction<T>, x: &[T]) -> Result<ActionOutput<T>> {
        Ok(match self {
            Self::Annihilate(i) => ActionOutput::Jet(apply_annihilator(model, i, f, x)?),
            Self::Create(i) => ActionOutput::Jet(apply_creator(model, i, f, x)?),
            Self::Jacobi(k) => ActionOutput::Jet(jacobi_action(model, k, f, x)?),
            Self::HamiltonianDirect => ActionOutput::Scalar(apply_hamiltonian_direct(model, f, x)?),
            Self::HamiltonianFactorized => ActionOutput::Scalar(apply_hamiltonian_factorized(model, f, x)?),
            Self::HamiltonianPartner => ActionOutput::Scalar(apply_partner(model, f, x)?),
            Self::TotalMomentum => ActionOutput::Scalar(total_momentum(model, f, x)?),
        })
    }
}
