//! Product ground states, their partners, the two-body reduction and
//! isospectrality checks on grids.

use rayon::prelude::*;
use serde::Serialize;

use super::eigen::{eigen_with, EigenOptions};
use super::grid::{GridLayout, GridSpec};
use super::hamiltonian::{discretize, stencil_action, ModelOperator, PotentialSource};
use crate::calculus::{apply_hamiltonian_factorized, TestFunction};
use crate::error::{Error, Result};
use crate::models::{ModelKind, NBodyModel, Normalizability, Prepotential1D};
use crate::shape1d::algebraic_spectrum;
use crate::verify::{fitted_remainder, Sampling};

type Model = NBodyModel<f64>;

fn normalizability(model: &Model) -> Normalizability {
    match model.kind() {
        ModelKind::Calogero => Normalizability::NonNormalizable,
        _ => Normalizability::from_wall_exponent(model.alpha()),
    }
}

fn warning_for(model: &Model, norm: Normalizability) -> Option<String> {
    if model.alpha() < 1.0 {
        Some(format!("alpha = {} < 1: the wall behaviour is not fixed by the model", model.alpha()))
    } else if norm != Normalizability::Normalizable {
        Some(format!("{} ground state is not normalizable ({norm:?})", model.kind().name()))
    } else {
        None
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JastrowGroundState {
    #[serde(skip)]
    pub layout: GridLayout,
    /// `Φ₀` at the nodes, normalized with the cell volume.
    #[serde(skip)]
    pub values: Vec<f64>,
    /// `max |(HΦ₀)/Φ₀|` over interior nodes, with the grid stencil.
    pub grid_residual: f64,
    /// Same quantity evaluated with exact derivatives.
    pub jet_residual: f64,
    pub interior_nodes: usize,
    pub normalizability: Normalizability,
    pub warning: Option<String>,
}

/// Interior nodes: pairs at least `max(0.25, 5h)` apart and two cells clear
/// of the outer walls.
fn interior(model: &Model, layout: &GridLayout) -> Vec<usize> {
    let spec = &layout.spec;
    let h = (0..spec.dim()).map(|a| spec.spacing(a)).fold(0.0, f64::max);
    let min_gap = (5.0 * h).max(0.25);
    (0..layout.len())
        .filter(|&k| {
            let x = layout.coordinates(k);
            let walls = x.iter().zip(&spec.axes).all(|(&xi, ax)| xi - ax.min >= 2.0 * h && ax.max - xi >= 2.0 * h);
            let gaps = (0..x.len()).all(|i| {
                (i + 1..x.len()).all(|j| {
                    let d = (x[i] - x[j]).abs();
                    let d = if model.kind().is_periodic() { d.sin().abs() } else { d };
                    d >= min_gap
                })
            });
            walls && gaps
        })
        .collect()
}

/// Samples `Φ₀ = exp(-Σ∫W)` on a grid and measures how well it is
/// annihilated by `Σ A†A`.
pub fn jastrow_ground_state(model: &Model, grid: &GridSpec, order: usize) -> Result<JastrowGroundState> {
    if grid.dim() != model.n() {
        return Err(Error::Domain(format!("model has {} particles, grid has {} axes", model.n(), grid.dim())));
    }
    if order != 2 && order != 4 {
        return Err(Error::Domain(format!("stencil order must be 2 or 4, got {order}")));
    }
    let layout = GridLayout::new(grid);
    let spacings: Vec<f64> = (0..grid.dim()).map(|a| grid.spacing(a)).collect();
    let log_values: Vec<f64> = (0..layout.len())
        .into_par_iter()
        .map(|k| model.log_jastrow(&layout.coordinates(k)).unwrap_or(f64::NEG_INFINITY))
        .collect();
    let shift = log_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut values: Vec<f64> = log_values.iter().map(|l| (l - shift).exp()).collect();
    let cell: f64 = spacings.iter().product();
    let nrm = (values.iter().map(|v| v * v).sum::<f64>() * cell).sqrt();
    if nrm > 0.0 {
        values.iter_mut().for_each(|v| *v /= nrm);
    }

    let inner = interior(model, &layout);
    let phi = |x: &[f64]| model.log_jastrow(x).map(|l| (l - shift).exp()).unwrap_or(0.0);
    let grid_residual = inner
        .par_iter()
        .map(|&k| {
            let x = layout.coordinates(k);
            let v = model.factorized_potential(&x).unwrap_or(f64::NAN);
            (stencil_action(phi, &x, &spacings, order, 1.0, v) / phi(&x)).abs()
        })
        .reduce(|| 0.0, f64::max);

    let f = TestFunction::jastrow(model);
    let stride = (inner.len() / 256).max(1);
    let jet_residual = inner
        .par_iter()
        .step_by(stride)
        .map(|&k| {
            let x = layout.coordinates(k);
            let hf = apply_hamiltonian_factorized(model, &f, &x).unwrap_or(f64::NAN);
            (hf / f.value(&x)).abs()
        })
        .reduce(|| 0.0, f64::max);

    let norm = normalizability(model);
    Ok(JastrowGroundState {
        layout,
        values,
        grid_residual,
        jet_residual,
        interior_nodes: inner.len(),
        normalizability: norm,
        warning: warning_for(model, norm),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PartnerGroundState {
    /// The model at `α + 1`; its product state is the partner ground state.
    #[serde(skip)]
    pub shifted: Model,
    pub alpha_next: f64,
    /// Lowest level of the partner Hamiltonian, `R(α + 1)`.
    pub energy: f64,
    pub energy_source: &'static str,
    /// The closed-form shift quoted for the kind.
    pub energy_quoted: f64,
    pub normalizability: Normalizability,
    pub warning: Option<String>,
}

/// Partner ground state `Φ₀(α + 1)` with energy `R(α + 1)`. The harmonic
/// shift is fitted from the operator identity.
pub fn partner_ground_state(model: &Model) -> Result<PartnerGroundState> {
    let shifted = model.shifted();
    let (energy, energy_source) = if model.kind() == ModelKind::HarmonicCalogero {
        (fitted_remainder(model, 64, 0, &Sampling::default()).0, "fitted")
    } else {
        (model.remainder(), "closed_form")
    };
    let norm = normalizability(&shifted);
    Ok(PartnerGroundState {
        alpha_next: shifted.alpha(),
        energy,
        energy_source,
        energy_quoted: model.remainder(),
        normalizability: norm,
        warning: warning_for(&shifted, norm),
        shifted,
    })
}

/// The relative-coordinate problem of two particles, `r = x₁ - x₂`.
///
/// With the centre of mass separated, `Σ A†A` acts on the relative
/// coordinate as `κ(-d² + w² - w')` with `κ = 2`, i.e. `κ` times a
/// one-dimensional factorized Hamiltonian with prepotential `w`.
#[derive(Debug, Clone, Serialize)]
pub struct TwoBodyReduction {
    pub kind: ModelKind,
    pub alpha: f64,
    pub kinetic_factor: f64,
    pub prepotential: Prepotential1D<f64>,
    /// Interval used for grids.
    pub domain: (f64, f64),
    pub description: String,
}

pub fn two_body_reduction(model: &Model) -> Result<TwoBodyReduction> {
    if model.n() != 2 {
        return Err(Error::Domain(format!("the two-body reduction needs N = 2, got {}", model.n())));
    }
    let alpha = model.alpha();
    let (prepotential, domain, description) = match model.kind() {
        ModelKind::CalogeroSutherland => (
            Prepotential1D::RosenMorseTrig { b: alpha, a: 1.0 },
            (0.0, std::f64::consts::PI),
            format!("2(-d^2 + {g}/sin^2 r - {a2})", g = alpha * (alpha - 1.0), a2 = alpha * alpha),
        ),
        ModelKind::HarmonicCalogero => {
            let beta = model.beta();
            (
                Prepotential1D::RationalHarmonic { a: beta, b: -alpha },
                (0.0, (80.0 / beta).sqrt()),
                format!(
                    "2(-d^2 + {g}/r^2 + {b2} r^2 - {c})",
                    g = alpha * (alpha - 1.0),
                    b2 = beta * beta,
                    c = beta * (2.0 * alpha + 1.0)
                ),
            )
        }
        ModelKind::Calogero => {
            return Err(Error::Unsupported(
                "the pure Calogero relative problem has no bound states; add a confining term".into(),
            ))
        }
    };
    Ok(TwoBodyReduction { kind: model.kind(), alpha, kinetic_factor: 2.0, prepotential, domain, description })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionComparison {
    pub algebraic: Vec<f64>,
    pub grid: Vec<f64>,
    pub max_relative: f64,
}

impl TwoBodyReduction {
    /// `κ(w² - w')`.
    pub fn potential(&self, r: f64) -> f64 {
        self.kinetic_factor * self.prepotential.potential(r)
    }

    /// `κ(w² + w')`.
    pub fn partner_potential(&self, r: f64) -> f64 {
        self.kinetic_factor * self.prepotential.partner_potential(r)
    }

    /// Exact levels from the parameter chain.
    pub fn algebraic_levels(&self, k: usize) -> Vec<f64> {
        algebraic_spectrum(&self.prepotential, k.saturating_sub(1))
            .energies
            .iter()
            .take(k)
            .map(|e| self.kinetic_factor * e)
            .collect()
    }

    pub fn grid(&self, m: usize) -> Result<GridSpec> {
        GridSpec::line(self.domain.0, self.domain.1, m)
    }

    fn levels(&self, partner: bool, m: usize, order: usize, k: usize) -> Result<Vec<f64>> {
        let pot = |r: f64| if partner { self.partner_potential(r) } else { self.potential(r) };
        let source = PotentialSource::Line { potential: &pot, kinetic: self.kinetic_factor, label: self.description.clone() };
        let h = discretize(&source, &self.grid(m)?, order)?;
        Ok(eigen_with(&h.matrix, k, &EigenOptions::default())?.values)
    }

    /// Lowest `k` grid levels of the relative operator.
    pub fn grid_levels(&self, m: usize, order: usize, k: usize) -> Result<Vec<f64>> {
        self.levels(false, m, order, k)
    }

    /// Lowest `k` grid levels of the relative partner operator.
    pub fn partner_grid_levels(&self, m: usize, order: usize, k: usize) -> Result<Vec<f64>> {
        self.levels(true, m, order, k)
    }

    pub fn compare(&self, m: usize, order: usize, k: usize) -> Result<ReductionComparison> {
        let algebraic = self.algebraic_levels(k);
        let grid = self.grid_levels(m, order, algebraic.len())?;
        let max_relative = max_relative(&algebraic, &grid);
        Ok(ReductionComparison { algebraic, grid, max_relative })
    }
}

/// `max |a - b| / max(1, |a|)`; the floor keeps zero levels meaningful.
pub fn max_relative(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / x.abs().max(1.0)).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct IsospectralityReport {
    pub case: String,
    /// Lowest levels of the partner operator.
    pub partner: Vec<f64>,
    /// Lowest levels of the shifted operator plus its remainder.
    pub shifted_plus_remainder: Vec<f64>,
    /// Nonzero levels of the original operator, when available.
    pub original_excited: Vec<f64>,
    pub remainder: f64,
    pub max_relative: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn line_levels(pot: &(dyn Fn(f64) -> f64 + Sync), kinetic: f64, grid: &GridSpec, order: usize, k: usize) -> Result<Vec<f64>> {
    let source = PotentialSource::Line { potential: pot, kinetic, label: String::new() };
    let h = discretize(&source, grid, order)?;
    Ok(eigen_with(&h.matrix, k, &EigenOptions::default())?.values)
}

/// One-dimensional partner check: `AA†` against `H(f(p)) + R` and against
/// the excited levels of `H(p)`, all on the same grid.
pub fn isospectrality_1d(prep: &Prepotential1D<f64>, grid: &GridSpec, order: usize, k: usize, tolerance: f64) -> Result<IsospectralityReport> {
    let next = prep.partner_params();
    let remainder = prep.remainder();
    let partner = line_levels(&|x| prep.partner_potential(x), 1.0, grid, order, k)?;
    let shifted: Vec<f64> = line_levels(&|x| next.potential(x), 1.0, grid, order, k)?.iter().map(|e| e + remainder).collect();
    let original: Vec<f64> = line_levels(&|x| prep.potential(x), 1.0, grid, order, k + 1)?.into_iter().skip(1).collect();
    let max_rel = max_relative(&shifted, &partner).max(max_relative(&original, &partner));
    Ok(IsospectralityReport {
        case: format!("{} {:?}", prep.family().name(), prep.params()),
        partner,
        shifted_plus_remainder: shifted,
        original_excited: original,
        remainder,
        max_relative: max_rel,
        tolerance,
        pass: max_rel <= tolerance,
    })
}

/// N-body partner check: levels of `Σ A A†` at `α` against those of
/// `Σ A†A` at `α + 1` plus `R(α + 1)`.
///
/// Two-particle models on a one-axis grid go through
/// [`two_body_reduction`]; otherwise the grid must carry one axis per
/// particle (ordered sector for singular pairs). Calogero-Sutherland is only
/// handled through the reduction.
pub fn isospectrality_check(model: &Model, grid: &GridSpec, order: usize, k: usize, tolerance: f64) -> Result<IsospectralityReport> {
    let ground = partner_ground_state(model)?;
    let remainder = ground.energy;
    let (partner, shifted, original) = if model.n() == 2 && grid.dim() == 1 {
        let red = two_body_reduction(model)?;
        let red_next = two_body_reduction(&ground.shifted)?;
        let m = grid.axes[0].m;
        let partner = red.partner_grid_levels(m, order, k)?;
        let shifted = red_next.grid_levels(m, order, k)?;
        let original: Vec<f64> = red.grid_levels(m, order, k + 1)?.into_iter().skip(1).collect();
        (partner, shifted, original)
    } else {
        if model.kind().is_periodic() {
            return Err(Error::Unsupported("periodic models are checked through the two-body reduction only".into()));
        }
        let levels = |m: &Model, op: ModelOperator| -> Result<Vec<f64>> {
            let h = discretize(&PotentialSource::Model { model: m, operator: op }, grid, order)?;
            Ok(eigen_with(&h.matrix, k, &EigenOptions::default())?.values)
        };
        let partner = levels(model, ModelOperator::Partner)?;
        let shifted = levels(&ground.shifted, ModelOperator::Factorized)?;
        (partner, shifted, Vec::new())
    };
    let shifted: Vec<f64> = shifted.iter().map(|e| e + remainder).collect();
    let max_rel = max_relative(&shifted, &partner);
    Ok(IsospectralityReport {
        case: model.descriptor(),
        partner,
        shifted_plus_remainder: shifted,
        original_excited: original,
        remainder,
        max_relative: max_rel,
        tolerance,
        pass: max_rel <= tolerance,
    })
}
