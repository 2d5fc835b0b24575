//! Lowest eigenpairs of sparse symmetric matrices.
//!
//! Small problems are diagonalized densely. Larger ones use Lanczos with
//! full reorthogonalization, applied to `(H - σ)⁻¹` through a banded
//! Cholesky factor when the bandwidth allows, and to `-H` otherwise.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sparse::{dot, norm, CsrMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenOptions {
    pub method: EigenMethod,
    pub seed: u64,
    /// Residual contract: `‖Hv - λv‖ ≤ tol · ‖H‖_est`.
    pub tol: f64,
    pub max_iter: usize,
    /// `Auto` diagonalizes densely up to this dimension.
    pub dense_cutoff: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { method: EigenMethod::Auto, seed: 0, tol: 1e-8, max_iter: 400, dense_cutoff: 600 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    pub values: Vec<f64>,
    #[serde(skip)]
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub method: String,
    pub norm_estimate: f64,
}

impl SpectrumResult {
    /// CSV with header `index,lambda,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,lambda,residual\n");
        for (i, (l, r)) in self.values.iter().zip(&self.residuals).enumerate() {
            out.push_str(&format!("{i},{l},{r}\n"));
        }
        out
    }
}

pub fn eigen(h: &CsrMatrix, k: usize) -> Result<SpectrumResult> {
    eigen_with(h, k, &EigenOptions::default())
}

pub fn eigen_with(h: &CsrMatrix, k: usize, opts: &EigenOptions) -> Result<SpectrumResult> {
    let n = h.rows;
    if k == 0 || k >= n {
        return Err(Error::Domain(format!("need 0 < k < dimension, got k = {k}, dimension = {n}")));
    }
    let dense = match opts.method {
        EigenMethod::Dense => true,
        EigenMethod::Iterative => false,
        EigenMethod::Auto => n <= opts.dense_cutoff,
    };
    if dense {
        dense_eigen(h, k)
    } else {
        lanczos_eigen(h, k, opts)
    }
}

/// All eigenvalues of a dense symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenpairs of a dense symmetric matrix, ascending.
///
/// The implicit QR in `SymmetricEigen` occasionally pairs an eigenvalue with
/// the wrong vector when the spectrum touches zero, so every decomposition is
/// checked against `‖Mv - λv‖` and retried on a shifted copy, then via Schur.
pub fn symmetric_eigenpairs(m: DMatrix<f64>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.nrows();
    let scale = m.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    let accept = 1e-9 * scale * (n.max(1) as f64).sqrt();
    let worst = |vals: &DVector<f64>, vecs: &DMatrix<f64>, shift: f64| {
        (0..n)
            .map(|i| {
                let v = vecs.column(i);
                (&m * v - v * (vals[i] - shift)).norm()
            })
            .fold(0.0f64, f64::max)
    };
    let mut best: Option<(f64, DVector<f64>, DMatrix<f64>)> = None;
    for shift in [0.0, 1.0 + scale, 0.371 * scale] {
        let shifted = &m + DMatrix::<f64>::identity(n, n) * shift;
        let eig = SymmetricEigen::new(shifted);
        let vals = eig.eigenvalues.map(|x| x - shift);
        let err = worst(&eig.eigenvalues, &eig.eigenvectors, shift);
        if best.as_ref().map_or(true, |b| err < b.0) {
            best = Some((err, vals, eig.eigenvectors));
        }
        if err <= accept {
            break;
        }
    }
    if best.as_ref().is_some_and(|b| b.0 > accept) {
        let (q, t) = m.clone().schur().unpack();
        let vals = t.diagonal();
        let err = worst(&vals, &q, 0.0);
        if best.as_ref().is_some_and(|b| err < b.0) {
            best = Some((err, vals, q));
        }
    }
    let (_, vals, vecs) = best.expect("at least one attempt");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let values = order.iter().map(|&i| vals[i]).collect();
    let vectors = order.iter().map(|&i| fix_sign(vecs.column(i).iter().copied().collect())).collect();
    (values, vectors)
}

fn fix_sign(mut v: Vec<f64>) -> Vec<f64> {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() * (1.0 + 1e-12) {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

fn residual(h: &CsrMatrix, v: &[f64], lambda: f64) -> f64 {
    let hv = h.matvec(v);
    hv.iter().zip(v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt()
}

fn dense_eigen(h: &CsrMatrix, k: usize) -> Result<SpectrumResult> {
    let (values, vectors) = symmetric_eigenpairs(h.to_dense());
    let values: Vec<f64> = values.into_iter().take(k).collect();
    let vectors: Vec<Vec<f64>> = vectors.into_iter().take(k).collect();
    let residuals = values.iter().zip(&vectors).map(|(&l, v)| residual(h, v, l)).collect();
    Ok(SpectrumResult { values, vectors, residuals, iterations: 0, method: "dense".into(), norm_estimate: h.norm_inf() })
}

/// Lower-banded Cholesky factor.
struct BandCholesky {
    n: usize,
    b: usize,
    /// `l[i * (b + 1) + (i - j)]` holds `L_ij` for `i - b ≤ j ≤ i`.
    l: Vec<f64>,
}

impl BandCholesky {
    fn factor(h: &CsrMatrix, b: usize, sigma: f64) -> Option<Self> {
        let n = h.rows;
        let w = b + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            for (j, v) in h.row(i) {
                if j <= i {
                    l[i * w + (i - j)] = v;
                }
            }
            l[i * w] -= sigma;
        }
        for j in 0..n {
            let lo = j.saturating_sub(b);
            let mut d = l[j * w];
            for k in lo..j {
                d -= l[j * w + (j - k)].powi(2);
            }
            if !(d > 0.0) {
                return None;
            }
            let d = d.sqrt();
            l[j * w] = d;
            for i in (j + 1)..(j + w).min(n) {
                let mut s = l[i * w + (i - j)];
                for k in i.saturating_sub(b)..j {
                    s -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                l[i * w + (i - j)] = s / d;
            }
        }
        Some(Self { n, b, l })
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let (n, b, w) = (self.n, self.b, self.b + 1);
        let mut y = rhs.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(b)..i {
                s -= self.l[i * w + (i - k)] * y[k];
            }
            y[i] = s / self.l[i * w];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..(i + w).min(n) {
                s -= self.l[k * w + (k - i)] * y[k];
            }
            y[i] = s / self.l[i * w];
        }
        y
    }
}

/// Work budget for banded factorizations (`n · b²`).
const BAND_BUDGET: f64 = 2e9;

/// Largest shift below the spectrum found by bisection on Cholesky success.
fn lower_edge(h: &CsrMatrix, b: usize) -> Option<f64> {
    let gersh = (0..h.rows)
        .map(|r| {
            let (mut d, mut off) = (0.0, 0.0);
            for (c, v) in h.row(r) {
                if c == r {
                    d += v;
                } else {
                    off += v.abs();
                }
            }
            d - off
        })
        .fold(f64::INFINITY, f64::min);
    let min_diag = (0..h.rows).map(|r| h.get(r, r)).fold(f64::INFINITY, f64::min);
    let mut lo = gersh - 1.0;
    BandCholesky::factor(h, b, lo)?;
    let mut hi = min_diag;
    if BandCholesky::factor(h, b, hi).is_some() {
        return Some(hi);
    }
    let scale = h.norm_inf().max(1.0);
    for _ in 0..200 {
        if hi - lo <= 1e-9 * scale.max(lo.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if BandCholesky::factor(h, b, mid).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

fn lanczos_eigen(h: &CsrMatrix, k: usize, opts: &EigenOptions) -> Result<SpectrumResult> {
    let n = h.rows;
    let b = h.bandwidth();
    let norm_est = h.norm_inf();
    let tol = opts.tol * norm_est.max(1.0);
    let shift_invert = (n as f64) * (b as f64 + 1.0).powi(2) <= BAND_BUDGET;

    if shift_invert {
        if let Some(edge) = lower_edge(h, b) {
            let mut delta = 1e-3 * edge.abs().max(1.0);
            for _ in 0..30 {
                if let Some(chol) = BandCholesky::factor(h, b, edge - delta) {
                    let sigma = edge - delta;
                    let op = |x: &[f64]| chol.solve(x);
                    let map = |theta: f64| sigma + 1.0 / theta;
                    return lanczos(h, k, opts, tol, norm_est, &op, &map, "shift_invert_lanczos");
                }
                delta *= 4.0;
            }
        }
    }
    let op = |x: &[f64]| h.matvec(x).into_iter().map(|v| -v).collect::<Vec<_>>();
    let map = |theta: f64| -theta;
    lanczos(h, k, opts, tol, norm_est, &op, &map, "lanczos")
}

#[allow(clippy::too_many_arguments)]
fn lanczos(
    h: &CsrMatrix,
    k: usize,
    opts: &EigenOptions,
    tol: f64,
    norm_est: f64,
    op: &dyn Fn(&[f64]) -> Vec<f64>,
    map: &dyn Fn(f64) -> f64,
    method: &str,
) -> Result<SpectrumResult> {
    let n = h.rows;
    let max_iter = opts.max_iter.max(k + 10).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let random_unit = |rng: &mut ChaCha8Rng, basis: &[Vec<f64>]| {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for q in basis {
                let c = dot(q, &v);
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
        }
        let s = norm(&v);
        v.iter_mut().for_each(|a| *a /= s);
        v
    };
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut q = random_unit(&mut rng, &basis);
    let mut best: Option<(Vec<f64>, Vec<Vec<f64>>, Vec<f64>)> = None;
    let mut iterations = 0;
    for j in 0..max_iter {
        iterations = j + 1;
        basis.push(q.clone());
        let mut w = op(&q);
        let a = dot(&q, &w);
        w.iter_mut().zip(&q).for_each(|(x, y)| *x -= a * y);
        if j > 0 {
            let bprev = betas[j - 1];
            w.iter_mut().zip(&basis[j - 1]).for_each(|(x, y)| *x -= bprev * y);
        }
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        alphas.push(a);
        let bnew = norm(&w);
        let m = j + 1;
        let last = m == max_iter;
        if m >= k && (m % 5 == 0 || last || bnew < 1e-12) {
            let mut t = DMatrix::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alphas[i];
                if i + 1 < m {
                    t[(i, i + 1)] = betas[i];
                    t[(i + 1, i)] = betas[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&x, &y| map(eig.eigenvalues[x]).total_cmp(&map(eig.eigenvalues[y])));
            let mut values = Vec::with_capacity(k);
            let mut vectors = Vec::with_capacity(k);
            let mut residuals = Vec::with_capacity(k);
            for &i in order.iter().take(k) {
                let y = eig.eigenvectors.column(i);
                let mut x = vec![0.0; n];
                for (c, bv) in y.iter().zip(&basis) {
                    x.iter_mut().zip(bv).for_each(|(xi, bi)| *xi += c * bi);
                }
                let s = norm(&x);
                x.iter_mut().for_each(|v| *v /= s);
                let hx = h.matvec(&x);
                let lambda = dot(&x, &hx);
                residuals.push(hx.iter().zip(&x).map(|(p, q)| (p - lambda * q).powi(2)).sum::<f64>().sqrt());
                values.push(lambda);
                vectors.push(fix_sign(x));
            }
            let worst = residuals.iter().fold(0.0f64, |a, &b| a.max(b));
            let converged = worst <= 1e-2 * tol;
            best = Some((values, vectors, residuals));
            if converged || (last && worst <= tol) {
                break;
            }
        }
        if bnew < 1e-12 {
            betas.push(0.0);
            q = random_unit(&mut rng, &basis);
        } else {
            betas.push(bnew);
            q = w.iter().map(|x| x / bnew).collect();
        }
    }
    let (values, vectors, residuals) = best.ok_or(Error::NoConvergence { iterations, residual: f64::INFINITY })?;
    let worst = residuals.iter().fold(0.0f64, |a, &b| a.max(b));
    if worst > tol {
        return Err(Error::NoConvergence { iterations, residual: worst });
    }
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    Ok(SpectrumResult {
        values: idx.iter().map(|&i| values[i]).collect(),
        vectors: idx.iter().map(|&i| vectors[i].clone()).collect(),
        residuals: idx.iter().map(|&i| residuals[i]).collect(),
        iterations,
        method: method.into(),
        norm_estimate: norm_est,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 + 0.001 * i as f64));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, n, t)
    }

    #[test]
    fn band_cholesky_solves() {
        let a = laplacian(50);
        let chol = BandCholesky::factor(&a, 1, -0.5).unwrap();
        let x: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let shifted = a.add(&CsrMatrix::identity(50).scale(0.5));
        let y = chol.solve(&shifted.matvec(&x));
        assert!(x.iter().zip(&y).all(|(p, q)| (p - q).abs() < 1e-10));
        assert!(BandCholesky::factor(&a, 1, 10.0).is_none());
    }

    #[test]
    fn iterative_matches_dense() {
        let a = laplacian(300);
        let d = eigen_with(&a, 5, &EigenOptions { method: EigenMethod::Dense, ..Default::default() }).unwrap();
        let l = eigen_with(&a, 5, &EigenOptions { method: EigenMethod::Iterative, ..Default::default() }).unwrap();
        assert_eq!(l.method, "shift_invert_lanczos");
        for (x, y) in d.values.iter().zip(&l.values) {
            assert!((x - y).abs() < 1e-10, "{x} {y}");
        }
    }

    #[test]
    fn rejects_bad_k() {
        let a = laplacian(10);
        assert!(eigen(&a, 0).is_err());
        assert!(eigen(&a, 10).is_err());
    }

    #[test]
    fn csv_has_header() {
        let r = eigen(&laplacian(20), 2).unwrap();
        let csv = r.to_csv();
        assert!(csv.starts_with("index,lambda,residual\n"));
        assert_eq!(csv.lines().count(), 3);
    }
}
