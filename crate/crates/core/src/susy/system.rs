//! Supercharges on a staggered relative grid times centre-of-mass modes.
//!
//! Fermion modes follow the Jacobi coordinates: modes `0..N-1` pair with the
//! relative coordinates `ξ_k` and the last mode with the centre of mass `X`.
//! Since the Jacobi matrix is orthogonal, `Σ_i A_i ψ_i = Σ_k B_k χ_k` with
//! `B_k = ∂_{ξ_k} + Σ_i O_ki W_i`; the centre-of-mass operator reduces to
//! `∂_X` because `Σ W_i = 0`.
//!
//! Each relative `B_k` is discretized as `Φ₀ D_k Φ₀⁻¹` with `D_k` a forward
//! difference from nodes to the cells between them along axis `k`. Wave
//! functions of each Fock state live on nodes along some axes and on cells
//! along the rest, set by the occupation and the variant. A staggered point is
//! kept only when all of its corner nodes are, so the differences commute
//! exactly and `Q² = 0` holds at matrix level; `B_k†` is the transpose. The
//! centre of mass uses the real Fourier basis `1, cos κX, sin κX, …`, where
//! `∂_X` is a real skew matrix.

use std::f64::consts::PI;

use serde::Serialize;

use super::fock::FockBasis;
use crate::calculus::jacobi_matrix;
use crate::error::{Error, Result};
use crate::models::{ModelKind, NBodyModel};
use crate::spectral::CsrMatrix;

type Model = NBodyModel<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// `Q = Σ A_i(α) ψ_i`.
    S1,
    /// `Q = Σ A_i†(α + 1) ψ_i`.
    S2,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(Self::S1),
            "s2" => Ok(Self::S2),
            _ => Err(Error::Config(format!("unknown variant `{s}` (expected s1 or s2)"))),
        }
    }
}

/// Largest total dimension that will be assembled.
pub const SUSY_SPARSE_CAP: usize = 200_000;
/// Largest fermion-number block diagonalized densely.
pub const SUSY_DENSE_CAP: usize = 5_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SusyOptions {
    /// Nodes per relative axis.
    pub m: usize,
    /// Centre-of-mass Fourier modes; odd.
    pub cm_modes: usize,
    /// Relative half-extent for non-periodic kinds.
    pub rel_extent: f64,
    /// Centre-of-mass period for non-periodic kinds; the periodic kind uses
    /// `π√N`.
    pub cm_period: f64,
}

impl Default for SusyOptions {
    fn default() -> Self {
        Self { m: 64, cm_modes: 7, rel_extent: 6.0, cm_period: 2.0 * PI }
    }
}

/// The points of one staggering pattern.
#[derive(Debug, Clone)]
pub struct StaggeredSpace {
    /// Bit `a` set: cell-centred along relative axis `a`.
    pub stagger: usize,
    /// Per-axis indices; a cell index `j` sits between nodes `j` and `j+1`.
    pub points: Vec<Vec<usize>>,
    /// Relative coordinates of each point.
    pub coords: Vec<Vec<f64>>,
    pub log_phi: Vec<f64>,
    lookup: Vec<usize>,
}

impl StaggeredSpace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn find(&self, idx: &[usize], m: usize) -> Option<usize> {
        let flat = idx.iter().fold(0usize, |acc, &j| acc * m + j);
        let k = self.lookup[flat];
        (k != usize::MAX).then_some(k)
    }
}

#[derive(Debug, Clone)]
pub struct SusySystem {
    pub model: Model,
    pub variant: Variant,
    /// Coupling of the `A` operators used in `Q`.
    pub alpha_used: f64,
    pub options: SusyOptions,
    pub fock: FockBasis,
    /// Relative axes: `(min, spacing)`.
    pub axes: Vec<(f64, f64)>,
    pub cm_period: f64,
    /// One space per staggering pattern, indexed by pattern.
    pub spaces: Vec<StaggeredSpace>,
    /// Start of each Fock state's block in the global index.
    pub offsets: Vec<usize>,
    pub dim: usize,
    pub q: CsrMatrix,
    pub q_dagger: CsrMatrix,
    pub h: CsrMatrix,
}

impl SusySystem {
    pub fn relative_dims(&self) -> usize {
        self.model.n() - 1
    }

    /// Staggering pattern of a Fock state's wave functions.
    pub fn stagger_of(&self, state: usize) -> usize {
        stagger_of(state, self.relative_dims(), self.variant)
    }

    pub fn space_of(&self, state: usize) -> &StaggeredSpace {
        &self.spaces[self.stagger_of(state)]
    }

    pub fn block_len(&self, state: usize) -> usize {
        self.space_of(state).len() * self.options.cm_modes
    }

    /// Global indices of the fermion-number-`f` block.
    pub fn sector_indices(&self, f: usize) -> Vec<usize> {
        self.fock.sector(f).into_iter().flat_map(|s| self.offsets[s]..self.offsets[s] + self.block_len(s)).collect()
    }

    /// Largest entry of `Q²`.
    pub fn q_squared(&self) -> f64 {
        self.q.matmul(&self.q).max_abs()
    }

    /// Largest entries of `[H, Q]` and `[H, Q†]`.
    pub fn commutators(&self) -> (f64, f64) {
        let hq = self.h.matmul(&self.q).sub(&self.q.matmul(&self.h)).max_abs();
        let hqd = self.h.matmul(&self.q_dagger).sub(&self.q_dagger.matmul(&self.h)).max_abs();
        (hq, hqd)
    }

    /// Largest `H` entry coupling different fermion numbers.
    pub fn off_block_max(&self) -> f64 {
        let mut number = vec![0usize; self.dim];
        for s in 0..self.fock.dim() {
            for i in self.offsets[s]..self.offsets[s] + self.block_len(s) {
                number[i] = FockBasis::fermion_number(s);
            }
        }
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for (c, v) in self.h.row(r) {
                if number[r] != number[c] {
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }
}

fn stagger_of(state: usize, rel: usize, variant: Variant) -> usize {
    let occ = state & ((1 << rel) - 1);
    match variant {
        Variant::S1 => !occ & ((1 << rel) - 1),
        Variant::S2 => occ,
    }
}

fn relative_axes(model: &Model, opts: &SusyOptions) -> Vec<(f64, f64)> {
    let rel = model.n() - 1;
    (0..rel)
        .map(|k| {
            let kk = (k + 1) as f64;
            let len = if model.kind().is_periodic() { PI * (kk / (kk + 1.0)).sqrt() } else { opts.rel_extent };
            (-len, len / (opts.m as f64 + 1.0))
        })
        .collect()
}

/// Particle positions for relative coordinates at zero centre of mass.
fn positions(jac: &[f64], n: usize, xi: &[f64]) -> Vec<f64> {
    (0..n).map(|i| (0..n - 1).map(|k| jac[k * n + i] * xi[k]).sum()).collect()
}

fn admissible(model: &Model, x: &[f64], guard: f64) -> bool {
    let ordered = x.windows(2).all(|w| w[1] - w[0] >= guard);
    let span = x[x.len() - 1] - x[0];
    ordered && (!model.kind().is_periodic() || span <= PI - guard)
}

fn build_spaces(model: &Model, axes: &[(f64, f64)], m: usize) -> Vec<StaggeredSpace> {
    let n = model.n();
    let d = n - 1;
    let jac = jacobi_matrix::<f64>(n);
    let hmin = axes.iter().map(|a| a.1).fold(f64::INFINITY, f64::min);
    let guard = 0.25 * hmin;
    let total = m.pow(d as u32);
    let coord = |a: usize, j: f64| axes[a].0 + (j + 1.0) * axes[a].1;
    let multi = |flat: usize| {
        let mut idx = vec![0usize; d];
        let mut rem = flat;
        for a in (0..d).rev() {
            idx[a] = rem % m;
            rem /= m;
        }
        idx
    };
    let node_ok: Vec<bool> = (0..total)
        .map(|flat| {
            let idx = multi(flat);
            let xi: Vec<f64> = idx.iter().enumerate().map(|(a, &j)| coord(a, j as f64)).collect();
            admissible(model, &positions(&jac, n, &xi), guard)
        })
        .collect();
    (0..1usize << d)
        .map(|stagger| {
            let mut space = StaggeredSpace { stagger, points: vec![], coords: vec![], log_phi: vec![], lookup: vec![usize::MAX; total] };
            for flat in 0..total {
                let idx = multi(flat);
                let corners_ok = (0..1usize << d).filter(|c| c & !stagger == 0).all(|c| {
                    let mut corner = idx.clone();
                    for (a, j) in corner.iter_mut().enumerate() {
                        if c >> a & 1 == 1 {
                            *j += 1;
                        }
                    }
                    if corner.iter().any(|&j| j >= m) {
                        return false;
                    }
                    node_ok[corner.iter().fold(0usize, |acc, &j| acc * m + j)]
                });
                if !corners_ok {
                    continue;
                }
                let xi: Vec<f64> = idx
                    .iter()
                    .enumerate()
                    .map(|(a, &j)| coord(a, j as f64 + if stagger >> a & 1 == 1 { 0.5 } else { 0.0 }))
                    .collect();
                let lp = model.log_jastrow(&positions(&jac, n, &xi)).unwrap_or(f64::NAN);
                space.lookup[flat] = space.points.len();
                space.points.push(idx);
                space.coords.push(xi);
                space.log_phi.push(lp);
            }
            space
        })
        .collect()
}

/// `⟨e_i, ∂_X e_j⟩` in the orthonormal real Fourier basis.
pub fn cm_derivative(modes: usize, period: f64) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; modes]; modes];
    for k in 1..=(modes - 1) / 2 {
        let kappa = 2.0 * PI * k as f64 / period;
        let (c, s) = (2 * k - 1, 2 * k);
        d[s][c] = -kappa;
        d[c][s] = kappa;
    }
    d
}

/// Assembles `Q`, `Q†` and `H = QQ† + Q†Q` for the variant.
pub fn build_susy(model: &Model, variant: Variant, opts: &SusyOptions) -> Result<SusySystem> {
    let n = model.n();
    if opts.cm_modes % 2 == 0 || opts.cm_modes == 0 {
        return Err(Error::Config(format!("cm_modes must be odd, got {}", opts.cm_modes)));
    }
    if opts.m < 8 {
        return Err(Error::Domain(format!("need at least 8 nodes per axis, got {}", opts.m)));
    }
    if model.kind() == ModelKind::Calogero && opts.rel_extent <= 0.0 {
        return Err(Error::Domain("relative extent must be positive".into()));
    }
    let rel = n - 1;
    let estimate = opts.m.pow(rel as u32).saturating_mul(opts.cm_modes) << n;
    if estimate > 4 * SUSY_SPARSE_CAP {
        return Err(Error::DimensionCap { dim: estimate, cap: SUSY_SPARSE_CAP });
    }
    let used = match variant {
        Variant::S1 => model.clone(),
        Variant::S2 => model.shifted(),
    };
    let axes = relative_axes(model, opts);
    let spaces = build_spaces(&used, &axes, opts.m);
    if spaces.iter().any(|s| s.log_phi.iter().any(|v| !v.is_finite())) {
        return Err(Error::NodeOnSingularity(0));
    }
    let fock = FockBasis::new(n);
    let cm = opts.cm_modes;
    let mut offsets = Vec::with_capacity(fock.dim());
    let mut dim = 0;
    for s in 0..fock.dim() {
        offsets.push(dim);
        dim += spaces[stagger_of(s, rel, variant)].len() * cm;
    }
    if dim > SUSY_SPARSE_CAP {
        return Err(Error::DimensionCap { dim, cap: SUSY_SPARSE_CAP });
    }
    let cm_period = if model.kind().is_periodic() { PI * (n as f64).sqrt() } else { opts.cm_period };
    let dcm = cm_derivative(cm, cm_period);

    // Q maps state s to s \ k; entries (row, col, value)
    let mut trip: Vec<(usize, usize, f64)> = Vec::new();
    for s in 0..fock.dim() {
        let src = &spaces[stagger_of(s, rel, variant)];
        for k in 0..n {
            let Some((t, sign)) = FockBasis::lower(s, k) else { continue };
            let dst = &spaces[stagger_of(t, rel, variant)];
            if k == n - 1 {
                let d: Vec<Vec<f64>> = match variant {
                    Variant::S1 => dcm.clone(),
                    Variant::S2 => (0..cm).map(|i| (0..cm).map(|j| dcm[j][i]).collect()).collect(),
                };
                for p in 0..src.len() {
                    for (ci, drow) in d.iter().enumerate() {
                        for (cj, &v) in drow.iter().enumerate() {
                            if v != 0.0 {
                                trip.push((offsets[t] + p * cm + ci, offsets[s] + p * cm + cj, sign * v));
                            }
                        }
                    }
                }
                continue;
            }
            // relative axis k: the cell-centred side is `cells`, the node side `nodes`
            let (cells, nodes, cells_is_dst) = match variant {
                Variant::S1 => (dst, src, true),
                Variant::S2 => (src, dst, false),
            };
            let h = axes[k].1;
            for (pc, idx) in cells.points.iter().enumerate() {
                let lo = nodes.find(idx, opts.m).expect("corner rule keeps neighbours");
                let mut up_idx = idx.clone();
                up_idx[k] += 1;
                let hi = nodes.find(&up_idx, opts.m).expect("corner rule keeps neighbours");
                for (pn, dir) in [(lo, -1.0), (hi, 1.0)] {
                    let v = sign * dir * (cells.log_phi[pc] - nodes.log_phi[pn]).exp() / h;
                    let (rp, cp) = if cells_is_dst { (pc, pn) } else { (pn, pc) };
                    for c in 0..cm {
                        trip.push((offsets[t] + rp * cm + c, offsets[s] + cp * cm + c, v));
                    }
                }
            }
        }
    }
    let q = CsrMatrix::from_triplets(dim, dim, trip);
    let q_dagger = q.transpose();
    let h = q.matmul(&q_dagger).add(&q_dagger.matmul(&q));
    Ok(SusySystem {
        model: model.clone(),
        variant,
        alpha_used: used.alpha(),
        options: *opts,
        fock,
        axes,
        cm_period,
        spaces,
        offsets,
        dim,
        q,
        q_dagger,
        h,
    })
}
