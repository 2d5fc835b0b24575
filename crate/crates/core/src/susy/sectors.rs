//! Fermion-number sectors: spectra, kernel structure and the sector relations.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use super::system::{SusySystem, SUSY_DENSE_CAP};
use crate::error::{Error, Result};
use crate::spectral::{dot, norm, symmetric_eigenpairs, CsrMatrix};
use crate::verify::ResidualReport;

/// Where a sector eigenvector sits relative to the supercharges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelTag {
    /// Annihilated by both `Q` and `Q†`.
    Zero,
    KerQ,
    KerQDagger,
    /// Neither norm is small: the superalgebra structure failed.
    Mixed,
}

impl KernelTag {
    pub fn name(self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::KerQ => "ker_q",
            Self::KerQDagger => "ker_qdag",
            Self::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorState {
    pub lambda: f64,
    pub q_norm: f64,
    pub q_dagger_norm: f64,
    pub tag: KernelTag,
    /// Unit vector in the sector's local index.
    #[serde(skip)]
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorSpectrum {
    pub fermions: usize,
    pub dim: usize,
    /// All eigenvalues, ascending.
    pub values: Vec<f64>,
    /// The full eigenbasis, rotated within degenerate clusters so each
    /// vector lies in `ker Q` or `ker Q†`.
    #[serde(skip)]
    pub states: Vec<SectorState>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorSpectra {
    pub k: usize,
    pub zero_tolerance: f64,
    pub sectors: Vec<SectorSpectrum>,
}

impl SectorSpectra {
    /// Lowest `k` eigenvalues of each sector.
    pub fn lowest(&self) -> Vec<Vec<f64>> {
        self.sectors.iter().map(|s| s.values.iter().take(self.k).copied().collect()).collect()
    }

    /// CSV with header `sector,index,lambda,ker_tag`, lowest `k` per sector.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sector,index,lambda,ker_tag\n");
        for s in &self.sectors {
            for (i, st) in s.states.iter().take(self.k).enumerate() {
                out.push_str(&format!("{},{i},{},{}\n", s.fermions, st.lambda, st.tag.name()));
            }
        }
        out
    }
}

/// Relative width of a degenerate cluster.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;

/// Diagonalizes every fermion-number block, then splits each degenerate
/// cluster into its `ker Q` and `ker Q†` parts.
pub fn sector_spectra(sys: &SusySystem, k: usize) -> Result<SectorSpectra> {
    let n = sys.model.n();
    let zero_tolerance = 1e-10 * sys.h.norm_inf().max(1.0);
    let indices: Vec<Vec<usize>> = (0..=n).map(|f| sys.sector_indices(f)).collect();
    if let Some(big) = indices.iter().map(Vec::len).find(|&d| d > SUSY_DENSE_CAP) {
        return Err(Error::DimensionCap { dim: big, cap: SUSY_DENSE_CAP });
    }
    let sectors = (0..=n)
        .into_par_iter()
        .map(|f| {
            let idx = &indices[f];
            let (values, vectors) = symmetric_eigenpairs(sys.h.submatrix(idx).to_dense());
            let lower = (f > 0).then(|| sys.q.block(&indices[f - 1], idx));
            let raise = (f < n).then(|| sys.q_dagger.block(&indices[f + 1], idx));
            let states = split_clusters(&values, &vectors, lower.as_ref(), raise.as_ref(), zero_tolerance);
            SectorSpectrum { fermions: f, dim: idx.len(), values, states }
        })
        .collect();
    Ok(SectorSpectra { k, zero_tolerance, sectors })
}

fn apply(m: Option<&CsrMatrix>, v: &[f64]) -> Vec<f64> {
    m.map(|m| m.matvec(v)).unwrap_or_default()
}

fn split_clusters(
    values: &[f64],
    vectors: &[Vec<f64>],
    lower: Option<&CsrMatrix>,
    raise: Option<&CsrMatrix>,
    zero_tol: f64,
) -> Vec<SectorState> {
    let mut out = Vec::with_capacity(values.len());
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[start] <= CLUSTER_TOLERANCE * values[start].abs().max(1.0) {
            end += 1;
        }
        let cluster = &vectors[start..end];
        let m = cluster.len();
        let qv: Vec<Vec<f64>> = cluster.iter().map(|v| apply(lower, v)).collect();
        // Gram matrix of Q on the cluster; its eigenvectors separate ker Q
        let gram = DMatrix::from_fn(m, m, |i, j| if qv[i].is_empty() { 0.0 } else { dot(&qv[i], &qv[j]) });
        let eig = SymmetricEigen::new(gram);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        for &c in &order {
            let mut v = vec![0.0; cluster[0].len()];
            for (coef, basis) in eig.eigenvectors.column(c).iter().zip(cluster) {
                v.iter_mut().zip(basis).for_each(|(x, b)| *x += coef * b);
            }
            let s = norm(&v);
            v.iter_mut().for_each(|x| *x /= s);
            let q_norm = if lower.is_some() { norm(&apply(lower, &v)) } else { 0.0 };
            let q_dagger_norm = if raise.is_some() { norm(&apply(raise, &v)) } else { 0.0 };
            let lambda = values[start..end].iter().sum::<f64>() / m as f64;
            let small = |x: f64| x * x <= 1e-6 * lambda.abs().max(zero_tol);
            let tag = if lambda.abs() <= zero_tol {
                KernelTag::Zero
            } else if small(q_norm) && !small(q_dagger_norm) {
                KernelTag::KerQ
            } else if small(q_dagger_norm) && !small(q_norm) {
                KernelTag::KerQDagger
            } else {
                KernelTag::Mixed
            };
            out.push(SectorState { lambda, q_norm, q_dagger_norm, tag, vector: v });
        }
        start = end;
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorCounts {
    pub fermions: usize,
    pub zero: usize,
    pub ker_q: usize,
    pub ker_q_dagger: usize,
    pub mixed: usize,
    /// Largest `min(‖Qv‖, ‖Q†v‖)/√λ` over nonzero states.
    pub worst_split: f64,
    /// Largest `max(‖Qv‖, ‖Q†v‖)` over zero modes.
    pub worst_zero: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelReport {
    pub sectors: Vec<SectorCounts>,
    /// Largest mismatch pairing `ker Q` levels of sector `F` with `ker Q†`
    /// levels of sector `F + 1`; `Q†` maps one set onto the other.
    pub pairing_mismatch: f64,
    pub pairing_counts_match: bool,
}

/// Counts kernel membership over the lowest `k` states of each sector and
/// checks the supersymmetric pairing over all states.
pub fn kernel_classify(spectra: &SectorSpectra) -> KernelReport {
    let sectors = spectra
        .sectors
        .iter()
        .map(|s| {
            let mut c = SectorCounts { fermions: s.fermions, zero: 0, ker_q: 0, ker_q_dagger: 0, mixed: 0, worst_split: 0.0, worst_zero: 0.0 };
            for st in s.states.iter().take(spectra.k) {
                match st.tag {
                    KernelTag::Zero => {
                        c.zero += 1;
                        c.worst_zero = c.worst_zero.max(st.q_norm.max(st.q_dagger_norm));
                    }
                    KernelTag::KerQ => c.ker_q += 1,
                    KernelTag::KerQDagger => c.ker_q_dagger += 1,
                    KernelTag::Mixed => c.mixed += 1,
                }
                if st.tag != KernelTag::Zero {
                    c.worst_split = c.worst_split.max(st.q_norm.min(st.q_dagger_norm) / st.lambda.abs().sqrt());
                }
            }
            c
        })
        .collect();
    let mut mismatch = 0.0f64;
    let mut counts_match = true;
    for w in spectra.sectors.windows(2) {
        let pick = |s: &SectorSpectrum, tag| {
            let mut v: Vec<f64> = s.states.iter().filter(|st| st.tag == tag).map(|st| st.lambda).collect();
            v.sort_by(f64::total_cmp);
            v
        };
        let a = pick(&w[0], KernelTag::KerQ);
        let b = pick(&w[1], KernelTag::KerQDagger);
        counts_match &= a.len() == b.len();
        for (x, y) in a.iter().zip(&b) {
            mismatch = mismatch.max((x - y).abs() / x.abs().max(1.0));
        }
    }
    KernelReport { sectors, pairing_mismatch: mismatch, pairing_counts_match: counts_match }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SumClass {
    Vanishing,
    Degenerate,
    Unclassified,
}

#[derive(Debug, Clone, Serialize)]
pub struct SumEntry {
    pub fermions: usize,
    pub kernel: KernelTag,
    pub lambda: f64,
    /// `‖Φ‖` for a unit state.
    pub sum_norm: f64,
    /// `‖H Φ - λ Φ‖ / ‖Φ‖` in the target sector.
    pub residual: f64,
    pub class: SumClass,
}

#[derive(Debug, Clone, Serialize)]
pub struct SumReport {
    pub entries: Vec<SumEntry>,
    pub all_classified: bool,
}

/// Sums the one-fermion components of `ker Q` states (and the hole
/// components of `(N-1)`-fermion `ker Q†` states) over particles and tests
/// each sum against the empty (full) sector.
///
/// With orthogonal Jacobi modes `Σ_i φ_i = √N φ_cm`, and the
/// centre-of-mass component shares its grid with the empty (full) sector.
pub fn sector_sum_check(sys: &SusySystem, spectra: &SectorSpectra, per_sector: usize) -> SumReport {
    let n = sys.model.n();
    let cm_bit = 1usize << (n - 1);
    let full = (1usize << n) - 1;
    let cases = [(1usize, KernelTag::KerQ, cm_bit, 0usize), (n - 1, KernelTag::KerQDagger, full & !cm_bit, full)];
    let mut entries = Vec::new();
    for (f, kernel, state, target) in cases {
        let sector = &spectra.sectors[f];
        let local_offset: usize = sys.fock.sector(f).iter().take_while(|&&s| s != state).map(|&s| sys.block_len(s)).sum();
        let len = sys.block_len(state);
        let t_idx: Vec<usize> = (sys.offsets[target]..sys.offsets[target] + sys.block_len(target)).collect();
        let h_target = sys.h.submatrix(&t_idx);
        for st in sector.states.iter().filter(|st| st.tag == kernel).take(per_sector) {
            let phi: Vec<f64> = st.vector[local_offset..local_offset + len].iter().map(|v| v * (n as f64).sqrt()).collect();
            let sum_norm = norm(&phi);
            let residual = if sum_norm > 0.0 {
                let hp = h_target.matvec(&phi);
                hp.iter().zip(&phi).map(|(a, b)| (a - st.lambda * b).powi(2)).sum::<f64>().sqrt() / sum_norm
            } else {
                0.0
            };
            let class = if sum_norm < 1e-6 {
                SumClass::Vanishing
            } else if residual < 1e-6 * st.lambda.abs().max(1.0) {
                SumClass::Degenerate
            } else {
                SumClass::Unclassified
            };
            entries.push(SumEntry { fermions: f, kernel, lambda: st.lambda, sum_norm, residual, class });
        }
    }
    let all_classified = entries.iter().all(|e| e.class != SumClass::Unclassified);
    SumReport { entries, all_classified }
}

#[derive(Debug, Clone, Serialize)]
pub struct DescentEntry {
    pub lambda: f64,
    /// `‖Q u‖` for the unit state `u`.
    pub image_norm: f64,
    /// `‖H φ - λ φ‖ / ‖φ‖` with `φ = Q u`.
    pub residual: f64,
}

/// Applies `Q` to the lowest states of sector `f` outside `ker Q` and
/// measures how close the images are to eigenstates of sector `f - 1`. For
/// three particles and `f = 2` the image components are
/// `φ_i ∝ Σ ε_ijk A_j χ_k` in terms of the hole amplitudes `χ_k`.
pub fn descent_relation(sys: &SusySystem, spectra: &SectorSpectra, f: usize, count: usize) -> Result<Vec<DescentEntry>> {
    if f == 0 || f > sys.model.n() {
        return Err(Error::Domain(format!("sector {f} has no lower neighbour")));
    }
    let src = sys.sector_indices(f);
    let dst = sys.sector_indices(f - 1);
    let q = sys.q.block(&dst, &src);
    let h = sys.h.submatrix(&dst);
    Ok(spectra.sectors[f]
        .states
        .iter()
        .filter(|st| st.tag == KernelTag::KerQDagger || st.tag == KernelTag::Mixed)
        .take(count)
        .map(|st| {
            let phi = q.matvec(&st.vector);
            let image_norm = norm(&phi);
            let hp = h.matvec(&phi);
            let residual = hp.iter().zip(&phi).map(|(a, b)| (a - st.lambda * b).powi(2)).sum::<f64>().sqrt() / image_norm;
            DescentEntry { lambda: st.lambda, image_norm, residual }
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct VariantComparison {
    /// Mean of `λ_S1 - λ_S2` over the lowest empty-sector levels.
    pub empty_shift: f64,
    /// Spread of that difference around its mean.
    pub empty_spread: f64,
    /// Largest `|λ_S1 - λ_S2 - shift|` over the lowest one-fermion levels.
    pub one_fermion_distance: f64,
    pub s1: Vec<Vec<f64>>,
    pub s2: Vec<Vec<f64>>,
}

impl VariantComparison {
    pub fn to_report(&self, model: String, grid_tolerance: f64) -> ResidualReport {
        let mut r = ResidualReport::from_samples(
            "susy_variant_comparison",
            model,
            0,
            grid_tolerance,
            [(vec![], self.empty_spread)],
        );
        r.pass = self.empty_spread <= grid_tolerance && self.one_fermion_distance > 0.1;
        r.with_detail("empty_shift", self.empty_shift)
            .with_detail("one_fermion_distance", self.one_fermion_distance)
            .with_detail("s1_lowest", serde_json::to_value(&self.s1).unwrap_or_default())
            .with_detail("s2_lowest", serde_json::to_value(&self.s2).unwrap_or_default())
    }
}

pub fn compare_variants(s1: &SectorSpectra, s2: &SectorSpectra) -> VariantComparison {
    let (l1, l2) = (s1.lowest(), s2.lowest());
    let diffs: Vec<f64> = l1[0].iter().zip(&l2[0]).map(|(a, b)| a - b).collect();
    let shift = diffs.iter().sum::<f64>() / diffs.len().max(1) as f64;
    let spread = diffs.iter().map(|d| (d - shift).abs()).fold(0.0, f64::max);
    let one = l1[1].iter().zip(&l2[1]).map(|(a, b)| (a - b - shift).abs()).fold(0.0, f64::max);
    VariantComparison { empty_shift: shift, empty_spread: spread, one_fermion_distance: one, s1: l1, s2: l2 }
}
