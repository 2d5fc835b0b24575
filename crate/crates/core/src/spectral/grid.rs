//! Structured grids for spectral problems.
//!
//! Dirichlet axes carry the `M` interior nodes `min + j h`, `j = 1..=M`,
//! `h = (max - min)/(M + 1)`; the walls sit one cell outside. Periodic axes
//! carry `min + j h`, `j = 0..M`, `h = (max - min)/M`.
//!
//! The ordered sector keeps nodes with strictly increasing coordinates.
//! Coincidence nodes lie on the exchange walls and are excluded; stencil
//! points beyond a wall are folded back by antisymmetric reflection, the
//! same rule used at the outer Dirichlet walls.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shape1d::Boundary;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    Full,
    Ordered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<Axis>,
    pub boundary: Boundary,
    pub sector: Sector,
}

/// Largest product grid that will be enumerated.
pub const MAX_PRODUCT_NODES: usize = 1 << 24;

impl GridSpec {
    pub fn new(axes: Vec<Axis>, boundary: Boundary, sector: Sector) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Domain("grid needs at least one axis".into()));
        }
        for a in &axes {
            if a.m < 8 {
                return Err(Error::Domain(format!("each axis needs M >= 8, got {}", a.m)));
            }
            if !(a.min < a.max) || !a.min.is_finite() || !a.max.is_finite() {
                return Err(Error::Domain(format!("axis interval ({}, {}) is empty or infinite", a.min, a.max)));
            }
        }
        if sector == Sector::Ordered {
            if boundary != Boundary::Dirichlet {
                return Err(Error::Domain("the ordered sector requires Dirichlet walls".into()));
            }
            if axes.iter().any(|a| a != &axes[0]) {
                return Err(Error::Domain("the ordered sector requires identical axes".into()));
            }
        }
        let product = axes.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.m)).unwrap_or(usize::MAX);
        if product > MAX_PRODUCT_NODES {
            return Err(Error::DimensionCap { dim: product, cap: MAX_PRODUCT_NODES });
        }
        Ok(Self { axes, boundary, sector })
    }

    /// One Dirichlet axis on `(min, max)` with `m` interior nodes.
    pub fn line(min: f64, max: f64, m: usize) -> Result<Self> {
        Self::new(vec![Axis { min, max, m }], Boundary::Dirichlet, Sector::Full)
    }

    /// `d` identical Dirichlet axes restricted to the ordered sector.
    pub fn ordered(d: usize, min: f64, max: f64, m: usize) -> Result<Self> {
        Self::new(vec![Axis { min, max, m }; d], Boundary::Dirichlet, Sector::Ordered)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn spacing(&self, a: usize) -> f64 {
        let ax = &self.axes[a];
        match self.boundary {
            Boundary::Dirichlet => (ax.max - ax.min) / (ax.m + 1) as f64,
            Boundary::Periodic => (ax.max - ax.min) / ax.m as f64,
        }
    }

    pub fn coordinate(&self, a: usize, j: usize) -> f64 {
        let offset = if self.boundary == Boundary::Dirichlet { 1.0 } else { 0.0 };
        self.axes[a].min + (j as f64 + offset) * self.spacing(a)
    }
}

/// Where a stencil point lands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Landing {
    /// On a wall: contributes nothing.
    Wall,
    /// On node `index`, with a reflection sign.
    Node { index: usize, sign: f64 },
}

/// The enumerated nodes of a grid.
#[derive(Debug, Clone)]
pub struct GridLayout {
    pub spec: GridSpec,
    /// Multi-indices of kept nodes in row-major order.
    pub nodes: Vec<Vec<usize>>,
    lookup: Vec<usize>,
}

impl GridLayout {
    pub fn new(spec: &GridSpec) -> Self {
        let d = spec.dim();
        let sizes: Vec<usize> = spec.axes.iter().map(|a| a.m).collect();
        let total: usize = sizes.iter().product();
        let mut lookup = vec![usize::MAX; total];
        let mut nodes = Vec::new();
        let mut idx = vec![0usize; d];
        for flat in 0..total {
            let mut rem = flat;
            for a in (0..d).rev() {
                idx[a] = rem % sizes[a];
                rem /= sizes[a];
            }
            let keep = spec.sector == Sector::Full || idx.windows(2).all(|w| w[0] < w[1]);
            if keep {
                lookup[flat] = nodes.len();
                nodes.push(idx.clone());
            }
        }
        Self { spec: spec.clone(), nodes, lookup }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.spec.axes).fold(0, |acc, (&j, a)| acc * a.m + j)
    }

    pub fn index_of(&self, idx: &[usize]) -> Option<usize> {
        let k = self.lookup[self.flat(idx)];
        (k != usize::MAX).then_some(k)
    }

    pub fn coordinates(&self, k: usize) -> Vec<f64> {
        self.nodes[k].iter().enumerate().map(|(a, &j)| self.spec.coordinate(a, j)).collect()
    }

    /// Resolves a (possibly out-of-range) multi-index.
    pub fn land(&self, idx: &[isize]) -> Landing {
        let mut sign = 1.0;
        let mut fixed: Vec<usize> = Vec::with_capacity(idx.len());
        for (a, &j) in idx.iter().enumerate() {
            let m = self.spec.axes[a].m as isize;
            let j = match self.spec.boundary {
                Boundary::Periodic => j.rem_euclid(m),
                Boundary::Dirichlet => {
                    if j == -1 || j == m {
                        return Landing::Wall;
                    } else if j < -1 {
                        sign = -sign;
                        -2 - j
                    } else if j > m {
                        sign = -sign;
                        2 * m - j
                    } else {
                        j
                    }
                }
            };
            if j < 0 || j >= m {
                return Landing::Wall;
            }
            fixed.push(j as usize);
        }
        if self.spec.sector == Sector::Ordered {
            // insertion sort, tracking the permutation parity
            for i in 1..fixed.len() {
                let mut k = i;
                while k > 0 && fixed[k - 1] > fixed[k] {
                    fixed.swap(k - 1, k);
                    sign = -sign;
                    k -= 1;
                }
            }
            if fixed.windows(2).any(|w| w[0] == w[1]) {
                return Landing::Wall;
            }
        }
        match self.index_of(&fixed) {
            Some(index) => Landing::Node { index, sign },
            None => Landing::Wall,
        }
    }
}
