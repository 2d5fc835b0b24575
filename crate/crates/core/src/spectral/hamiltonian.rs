//! Finite-difference Hamiltonians `-κ∇² + V` on structured grids.

use rayon::prelude::*;
use serde::Serialize;

use super::grid::{GridLayout, GridSpec, Landing};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::models::NBodyModel;

/// Which N-body operator supplies the potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelOperator {
    /// `V(x)` with its constant.
    Direct,
    /// `Σ W_i² - Σ ∂_i W_i`.
    Factorized,
    /// `Σ W_i² + Σ ∂_i W_i`.
    Partner,
}

pub enum PotentialSource<'a> {
    /// `-κ d² + V(x)` on a one-axis grid.
    Line { potential: &'a (dyn Fn(f64) -> f64 + Sync), kinetic: f64, label: String },
    /// `-∇² + V(x)` from a model, one axis per particle.
    Model { model: &'a NBodyModel<f64>, operator: ModelOperator },
}

impl PotentialSource<'_> {
    fn label(&self) -> String {
        match self {
            Self::Line { label, .. } => label.clone(),
            Self::Model { model, operator } => format!("{} [{operator:?}]", model.descriptor()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    pub matrix: CsrMatrix,
    pub layout: GridLayout,
    pub order: usize,
    pub kinetic: f64,
    pub description: String,
    /// Potential sampled at the nodes.
    pub potential: Vec<f64>,
}

impl SparseHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    /// Node coordinates in matrix order.
    pub fn coordinates(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|k| self.layout.coordinates(k)).collect()
    }
}

/// `-κ∇²f + v f` at `x` by the finite-difference stencil, with `f`
/// evaluated off-grid. Used to test analytic functions against a grid.
pub fn stencil_action(f: impl Fn(&[f64]) -> f64, x: &[f64], spacings: &[f64], order: usize, kinetic: f64, v: f64) -> f64 {
    let f0 = f(x);
    let mut lap = 0.0;
    let mut y = x.to_vec();
    for (a, &h) in spacings.iter().enumerate() {
        for &(s, c) in stencil(order) {
            let fv = if s == 0 {
                f0
            } else {
                y[a] = x[a] + s as f64 * h;
                let r = f(&y);
                y[a] = x[a];
                r
            };
            lap += c * fv / (h * h);
        }
    }
    -kinetic * lap + v * f0
}

/// Plain-text dump of grid functions: a commented header (dimension, axes,
/// ordering), then one line per node with coordinates and values.
pub fn grid_dump(layout: &GridLayout, columns: &[Vec<f64>]) -> String {
    let spec = &layout.spec;
    let mut out = format!("# dimension {}\n", spec.dim());
    for (a, ax) in spec.axes.iter().enumerate() {
        out.push_str(&format!("# axis {a} min {} max {} M {}\n", ax.min, ax.max, ax.m));
    }
    out.push_str(&format!(
        "# boundary {:?} sector {:?} nodes {} ordering row-major columns {}\n",
        spec.boundary,
        spec.sector,
        layout.len(),
        columns.len()
    ));
    for k in 0..layout.len() {
        let mut fields: Vec<String> = layout.coordinates(k).iter().map(|x| format!("{x}")).collect();
        fields.extend(columns.iter().map(|c| format!("{}", c[k])));
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

/// Second-derivative stencils `(offset, weight)`.
pub fn stencil(order: usize) -> &'static [(isize, f64)] {
    const O2: [(isize, f64); 3] = [(-1, 1.0), (0, -2.0), (1, 1.0)];
    const O4: [(isize, f64); 5] = [(-2, -1.0 / 12.0), (-1, 4.0 / 3.0), (0, -2.5), (1, 4.0 / 3.0), (2, -1.0 / 12.0)];
    if order == 2 {
        &O2
    } else {
        &O4
    }
}

/// Assembles the sparse Hamiltonian; `order` is 2 or 4.
pub fn discretize(source: &PotentialSource<'_>, grid: &GridSpec, order: usize) -> Result<SparseHamiltonian> {
    if order != 2 && order != 4 {
        return Err(Error::Domain(format!("stencil order must be 2 or 4, got {order}")));
    }
    let (kinetic, expected_dim) = match source {
        PotentialSource::Line { kinetic, .. } => (*kinetic, 1),
        PotentialSource::Model { model, .. } => (1.0, model.n()),
    };
    if grid.dim() != expected_dim {
        return Err(Error::Domain(format!("potential needs a {expected_dim}-axis grid, got {}", grid.dim())));
    }
    let layout = GridLayout::new(grid);
    let n = layout.len();
    let potential: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let x = layout.coordinates(k);
            match source {
                PotentialSource::Line { potential, .. } => potential(x[0]),
                PotentialSource::Model { model, operator } => match operator {
                    ModelOperator::Direct => model.potential(&x),
                    ModelOperator::Factorized => model.factorized_potential(&x),
                    ModelOperator::Partner => model.partner_potential(&x),
                }
                .unwrap_or(f64::NAN),
            }
        })
        .collect();
    if let Some(k) = potential.iter().position(|v| !v.is_finite()) {
        return Err(Error::NodeOnSingularity(k));
    }
    let weights = stencil(order);
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let base: Vec<isize> = layout.nodes[k].iter().map(|&j| j as isize).collect();
            let mut row = vec![(k, potential[k])];
            for a in 0..grid.dim() {
                let h2 = grid.spacing(a).powi(2);
                for &(s, c) in weights {
                    let mut idx = base.clone();
                    idx[a] += s;
                    if let Landing::Node { index, sign } = layout.land(&idx) {
                        row.push((index, -kinetic * c * sign / h2));
                    }
                }
            }
            row
        })
        .collect();
    let matrix = CsrMatrix::from_rows(n, rows);
    Ok(SparseHamiltonian { matrix, layout, order, kinetic, description: source.label(), potential })
}
