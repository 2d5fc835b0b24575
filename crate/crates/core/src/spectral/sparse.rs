//! Compressed sparse row matrices.

use nalgebra::DMatrix;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub rows: usize,
    pub cols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub data: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, indptr: vec![0; rows + 1], indices: Vec::new(), data: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, 1.0)))
    }

    /// Builds from `(row, col, value)` entries; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut per_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            per_row[r].push((c, v));
        }
        Self::from_rows(cols, per_row)
    }

    /// Builds from per-row `(col, value)` lists.
    pub fn from_rows(cols: usize, mut per_row: Vec<Vec<(usize, f64)>>) -> Self {
        let rows = per_row.len();
        let mut indptr = Vec::with_capacity(rows + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for row in per_row.iter_mut() {
            row.sort_by_key(|e| e.0);
            let mut k = 0;
            while k < row.len() {
                let c = row[k].0;
                let mut v = 0.0;
                while k < row.len() && row[k].0 == c {
                    v += row[k].1;
                    k += 1;
                }
                if v != 0.0 {
                    indices.push(c);
                    data.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self { rows, cols, indptr, indices, data }
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.indptr[r], self.indptr[r + 1]);
        self.indices[a..b].iter().copied().zip(self.data[a..b].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (a, b) = (self.indptr[r], self.indptr[r + 1]);
        match self.indices[a..b].binary_search(&c) {
            Ok(k) => self.data[a + k],
            Err(_) => 0.0,
        }
    }

    /// `y = A x`; rows are independent so the result does not depend on the
    /// number of worker threads.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).into_par_iter().map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut per_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.cols];
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                per_row[c].push((r, v));
            }
        }
        Self::from_rows(self.rows, per_row)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let per_row = (0..self.rows)
            .map(|r| self.row(r).map(|(c, v)| (c, a * v)).chain(other.row(r).map(|(c, v)| (c, b * v))).collect())
            .collect();
        Self::from_rows(self.cols, per_row)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lin_comb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lin_comb(1.0, other, -1.0)
    }

    /// Sparse product `self · other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let per_row: Vec<Vec<(usize, f64)>> = (0..self.rows)
            .into_par_iter()
            .map(|r| {
                let mut acc: Vec<(usize, f64)> = Vec::new();
                for (k, v) in self.row(r) {
                    acc.extend(other.row(k).map(|(c, w)| (c, v * w)));
                }
                acc
            })
            .collect();
        Self::from_rows(other.cols, per_row)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Infinity norm (max absolute row sum), an upper bound on the spectral
    /// norm of a symmetric matrix.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows).map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Spectral-norm estimate by power iteration on `AᵀA` from a fixed start.
    pub fn norm_estimate(&self, iterations: usize) -> f64 {
        if self.nnz() == 0 {
            return 0.0;
        }
        let at = self.transpose();
        let mut x: Vec<f64> = (0..self.cols).map(|i| 1.0 + ((i * 7919) % 13) as f64 / 13.0).collect();
        let mut est = 0.0;
        for _ in 0..iterations.max(1) {
            let n = norm(&x);
            if n == 0.0 {
                return 0.0;
            }
            x.iter_mut().for_each(|v| *v /= n);
            let y = at.matvec(&self.matvec(&x));
            est = dot(&x, &y).max(0.0).sqrt();
            x = y;
        }
        est
    }

    /// `max |A - Aᵀ|` relative to `max |A|`.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let t = self.transpose();
        self.sub(&t).max_abs() / scale
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.rows).flat_map(|r| self.row(r).map(move |(c, _)| r.abs_diff(c))).max().unwrap_or(0)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                m[(r, c)] += v;
            }
        }
        m
    }

    /// Rows and columns restricted to `keep` (in the given order).
    pub fn submatrix(&self, keep: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, &i) in keep.iter().enumerate() {
            pos[i] = k;
        }
        let per_row = keep
            .iter()
            .map(|&r| self.row(r).filter(|(c, _)| pos[*c] != usize::MAX).map(|(c, v)| (pos[c], v)).collect())
            .collect();
        Self::from_rows(keep.len(), per_row)
    }

    /// Rows `row_keep`, columns `col_keep`.
    pub fn block(&self, row_keep: &[usize], col_keep: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, &i) in col_keep.iter().enumerate() {
            pos[i] = k;
        }
        let per_row = row_keep
            .iter()
            .map(|&r| self.row(r).filter(|(c, _)| pos[*c] != usize::MAX).map(|(c, v)| (pos[c], v)).collect())
            .collect();
        Self::from_rows(col_keep.len(), per_row)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
