//! Energy and eigenfunction chains generated by the partner-parameter map.

use serde::Serialize;

use super::grid::{Boundary, Grid1D, GridFunction1D};
use crate::error::{Error, Result};
use crate::models::{Normalizability, Prepotential1D};
use crate::scalar::{Field, Real};

/// `α₀, α₁ = f(α₀), …` with `E_k = Σ_{j≤k} R(α_j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumChain<T> {
    pub params: Vec<Prepotential1D<T>>,
    pub energies: Vec<T>,
    /// `remainders[k] = R(α_{k+1})`.
    pub remainders: Vec<T>,
    /// Whether each `exp(-∫W(α_k))` is an admissible ground state; a level
    /// is a bound state only if its whole prefix is.
    pub normalizability: Vec<Normalizability>,
}

impl<T: Field> SpectrumChain<T> {
    /// Number of leading levels whose partner zero modes are all normalizable.
    pub fn bound_levels(&self) -> usize {
        self.normalizability.iter().take_while(|n| n.is_normalizable()).count()
    }
}

/// Levels `E_0 … E_{n_max}`. Works over any ordered field, including exact
/// rationals.
pub fn algebraic_spectrum<T: Field>(prep: &Prepotential1D<T>, n_max: usize) -> SpectrumChain<T> {
    let mut params = vec![*prep];
    let mut energies = vec![T::zero()];
    let mut remainders = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let last = *params.last().expect("non-empty");
        let r = last.remainder();
        remainders.push(r);
        energies.push(*energies.last().expect("non-empty") + r);
        params.push(last.partner_params());
    }
    let normalizability = params.iter().map(|p| p.ground_state_normalizability()).collect();
    SpectrumChain { params, energies, remainders, normalizability }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroundState1D {
    pub function: GridFunction1D,
    pub normalizability: Normalizability,
    pub warning: Option<String>,
}

fn check_inside(prep: &Prepotential1D<f64>, grid: &Grid1D) -> Result<()> {
    let (lo, hi) = prep.natural_domain();
    if grid.min < lo - 1e-12 || grid.max > hi + 1e-12 {
        return Err(Error::Domain(format!(
            "grid ({}, {}) leaves the natural domain ({lo}, {hi}) of {}",
            grid.min,
            grid.max,
            prep.family().name()
        )));
    }
    Ok(())
}

fn sample_ground_state(prep: &Prepotential1D<f64>, grid: &Grid1D) -> GridFunction1D {
    let mut f = GridFunction1D::from_fn(*grid, |x| prep.ground_state(x));
    if grid.boundary == Boundary::Dirichlet {
        for v in f.values.iter_mut() {
            if !v.is_finite() {
                *v = 0.0;
            }
        }
    }
    f
}

/// `ψ₀ ∝ exp(-∫W)` sampled on the grid and normalized. A non-normalizable
/// state is still returned, with a warning.
pub fn ground_state_1d(prep: &Prepotential1D<f64>, grid: &Grid1D) -> Result<GroundState1D> {
    check_inside(prep, grid)?;
    let mut f = sample_ground_state(prep, grid);
    f.normalize();
    let normalizability = prep.ground_state_normalizability();
    let warning = match normalizability {
        Normalizability::Normalizable => None,
        Normalizability::Ambiguous => {
            Some("ground state is square integrable but the boundary condition at the wall is not fixed".into())
        }
        Normalizability::NonNormalizable => Some("ground state is not normalizable".into()),
    };
    Ok(GroundState1D { function: f, normalizability, warning })
}

/// Default cap on chain length.
pub const MAX_CHAIN: usize = 6;
/// Smallest grid accepted for chains.
pub const MIN_CHAIN_SAMPLES: usize = 512;

#[derive(Debug, Clone, Serialize)]
pub struct ChainState {
    pub n: usize,
    pub function: GridFunction1D,
    /// Exact level `E_n` from the algebraic chain.
    pub energy: f64,
    /// Samples at each end touched by one-sided stencils at some step.
    pub boundary_margin: usize,
}

impl ChainState {
    /// Index range of samples only ever differentiated with central stencils.
    pub fn trusted_interior(&self) -> std::ops::Range<usize> {
        let m = self.function.values.len();
        self.boundary_margin..m - self.boundary_margin
    }
}

/// `ψ_n = A†(α₀) ⋯ A†(α_{n-1}) ψ₀(α_n)`, normalized after every step.
pub fn wavefunction_chain(prep: &Prepotential1D<f64>, n: usize, grid: &Grid1D) -> Result<ChainState> {
    if n > MAX_CHAIN {
        return Err(Error::Domain(format!("chain length {n} exceeds the cap {MAX_CHAIN}")));
    }
    if grid.m < MIN_CHAIN_SAMPLES {
        return Err(Error::Domain(format!("chains need at least {MIN_CHAIN_SAMPLES} samples, got {}", grid.m)));
    }
    check_inside(prep, grid)?;
    let spectrum = algebraic_spectrum(prep, n);
    let mut psi = sample_ground_state(&spectrum.params[n], grid);
    psi.normalize();
    let dirichlet = grid.boundary == Boundary::Dirichlet;
    for k in (0..n).rev() {
        let p = spectrum.params[k];
        let d = psi.derivative();
        let xs = grid.nodes();
        let mut next: Vec<f64> =
            xs.iter().zip(&psi.values).zip(&d).map(|((&x, &v), &dv)| if v == 0.0 { -dv } else { -dv + p.w(x) * v }).collect();
        if dirichlet {
            let m = next.len();
            next[0] = 0.0;
            next[m - 1] = 0.0;
        }
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("chain step {k} produced non-finite samples")));
        }
        psi = GridFunction1D { grid: *grid, values: next };
        psi.normalize();
    }
    let margin = if dirichlet && n > 0 { 2 } else { 0 };
    Ok(ChainState { n, function: psi, energy: spectrum.energies[n], boundary_margin: margin })
}

/// Level `n` of the hierarchy `H^(n)(α₀) = H^(0)(α_n) + Σ_{k≤n} R(α_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HierarchyLevel<T> {
    pub n: usize,
    pub params: Prepotential1D<T>,
    pub ground_energy: T,
}

impl<T: Real> HierarchyLevel<T> {
    /// `W² - W'` at `α_n` plus the accumulated shift.
    pub fn potential(&self, x: T) -> T {
        self.params.potential(x) + self.ground_energy
    }
}

pub fn hierarchy<T: Field>(prep: &Prepotential1D<T>, n: usize) -> Vec<HierarchyLevel<T>> {
    let chain = algebraic_spectrum(prep, n);
    (0..=n)
        .map(|k| HierarchyLevel { n: k, params: chain.params[k], ground_energy: chain.energies[k] })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Family1D;

    #[test]
    fn chain_bookkeeping() {
        let p = Prepotential1D::new(Family1D::RosenMorseTrig, &[2.0, 1.0]).unwrap();
        let s = algebraic_spectrum(&p, 3);
        assert_eq!(s.params.len(), 4);
        assert_eq!(s.remainders, vec![5.0, 7.0, 9.0]);
        assert_eq!(s.bound_levels(), 4);
        assert_eq!(algebraic_spectrum(&p, 0).energies, vec![0.0]);
    }

    #[test]
    fn sign_family_has_a_single_bound_level() {
        let p = Prepotential1D::new(Family1D::Sign, &[1.0]).unwrap();
        let s = algebraic_spectrum(&p, 3);
        assert_eq!(s.bound_levels(), 1);
        assert!(s.energies.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn chain_rejects_bad_requests() {
        let p = Prepotential1D::new(Family1D::RosenMorseTrig, &[2.0, 1.0]).unwrap();
        let g = Grid1D::dirichlet(0.0, std::f64::consts::PI, 600).unwrap();
        assert!(wavefunction_chain(&p, 7, &g).is_err());
        let coarse = Grid1D::dirichlet(0.0, std::f64::consts::PI, 100).unwrap();
        assert!(wavefunction_chain(&p, 1, &coarse).is_err());
        let outside = Grid1D::dirichlet(-1.0, 1.0, 600).unwrap();
        assert!(ground_state_1d(&p, &outside).is_err());
    }
}
