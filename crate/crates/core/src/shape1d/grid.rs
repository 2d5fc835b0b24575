//! Uniform 1-D grids with endpoint nodes, and grid functions on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Dirichlet,
    Periodic,
}

impl Boundary {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" => Ok(Self::Dirichlet),
            "periodic" => Ok(Self::Periodic),
            other => Err(Error::Config(format!("unknown boundary `{other}`"))),
        }
    }
}

/// `M` equally spaced samples. Dirichlet grids include both endpoints;
/// periodic grids include `min` but not `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub min: f64,
    pub max: f64,
    pub m: usize,
    pub boundary: Boundary,
}

impl Grid1D {
    pub fn new(min: f64, max: f64, m: usize, boundary: Boundary) -> Result<Self> {
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(Error::Domain(format!("grid interval ({min}, {max}) is empty or infinite")));
        }
        if m < 8 {
            return Err(Error::Domain(format!("grid needs at least 8 samples, got {m}")));
        }
        Ok(Self { min, max, m, boundary })
    }

    pub fn dirichlet(min: f64, max: f64, m: usize) -> Result<Self> {
        Self::new(min, max, m, Boundary::Dirichlet)
    }

    pub fn spacing(&self) -> f64 {
        match self.boundary {
            Boundary::Dirichlet => (self.max - self.min) / (self.m - 1) as f64,
            Boundary::Periodic => (self.max - self.min) / self.m as f64,
        }
    }

    pub fn node(&self, j: usize) -> f64 {
        self.min + j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.m).map(|j| self.node(j)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction1D {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl GridFunction1D {
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        Self { values: grid.nodes().into_iter().map(f).collect(), grid }
    }

    /// Trapezoid-rule inner product.
    pub fn inner(&self, other: &Self) -> f64 {
        let h = self.grid.spacing();
        let m = self.values.len();
        let mut s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        if self.grid.boundary == Boundary::Dirichlet {
            s -= 0.5 * (self.values[0] * other.values[0] + self.values[m - 1] * other.values[m - 1]);
        }
        s * h
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            self.values.iter_mut().for_each(|v| *v /= n);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Strict sign changes among interior samples, ignoring samples below
    /// `1e-9` of the maximum magnitude.
    pub fn node_count(&self) -> usize {
        let peak = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let floor = 1e-9 * peak;
        let m = self.values.len();
        let interior = match self.grid.boundary {
            Boundary::Dirichlet => &self.values[1..m - 1],
            Boundary::Periodic => &self.values[..],
        };
        let mut last = 0.0f64;
        let mut changes = 0;
        for &v in interior.iter().filter(|v| v.abs() > floor) {
            if last != 0.0 && v.signum() != last.signum() {
                changes += 1;
            }
            last = v;
        }
        changes
    }

    /// Two columns `x ψ`, one sample per line.
    pub fn to_two_column(&self) -> String {
        let mut out = String::new();
        for (x, v) in self.grid.nodes().iter().zip(&self.values) {
            out.push_str(&format!("{x} {v}\n"));
        }
        out
    }

    /// First derivative: fourth-order central differences, with fourth-order
    /// one-sided formulas on the two nodes nearest each Dirichlet end.
    pub fn derivative(&self) -> Vec<f64> {
        let f = &self.values;
        let m = f.len();
        let k = 1.0 / (12.0 * self.grid.spacing());
        let mut d = vec![0.0; m];
        match self.grid.boundary {
            Boundary::Periodic => {
                let at = |i: isize| f[i.rem_euclid(m as isize) as usize];
                for (i, di) in d.iter_mut().enumerate() {
                    let i = i as isize;
                    *di = k * (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2));
                }
            }
            Boundary::Dirichlet => {
                for i in 2..m - 2 {
                    d[i] = k * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
                }
                d[0] = k * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
                d[1] = k * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
                let e = m - 1;
                d[e] = k * (25.0 * f[e] - 48.0 * f[e - 1] + 36.0 * f[e - 2] - 16.0 * f[e - 3] + 3.0 * f[e - 4]);
                d[e - 1] = k * (3.0 * f[e] + 10.0 * f[e - 1] - 18.0 * f[e - 2] + 6.0 * f[e - 3] - f[e - 4]);
            }
        }
        d
    }

    /// `(∫ψ'² + Vψ²) / ∫ψ²` on the grid. Samples where `ψ = 0` contribute
    /// nothing, so `V` may be singular there.
    pub fn rayleigh_quotient(&self, v: impl Fn(f64) -> f64) -> f64 {
        let d = self.derivative();
        let energy_density: Vec<f64> = self
            .grid
            .nodes()
            .iter()
            .zip(&self.values)
            .zip(&d)
            .map(|((&x, &p), &dp)| dp * dp + if p == 0.0 { 0.0 } else { v(x) * p * p })
            .collect();
        let density = GridFunction1D { grid: self.grid, values: energy_density };
        let ones = GridFunction1D { grid: self.grid, values: vec![1.0; self.values.len()] };
        density.inner(&ones) / self.inner(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn derivative_is_fourth_order() {
        let err = |m: usize| {
            let g = Grid1D::dirichlet(0.0, 2.0, m).unwrap();
            let f = GridFunction1D::from_fn(g, |x| (1.3 * x).sin());
            let d = f.derivative();
            g.nodes().iter().zip(d).map(|(&x, dv)| (dv - 1.3 * (1.3 * x).cos()).abs()).fold(0.0, f64::max)
        };
        let order = (err(64) / err(128)).log2();
        assert!(order > 3.7, "{order}");
    }

    #[test]
    fn nodes_and_norms() {
        let g = Grid1D::dirichlet(0.0, PI, 1001).unwrap();
        let mut f = GridFunction1D::from_fn(g, |x| (3.0 * x).sin());
        assert_eq!(f.node_count(), 2);
        f.normalize();
        assert!((f.norm() - 1.0).abs() < 1e-14);
        let p = Grid1D::new(0.0, 2.0 * PI, 64, Boundary::Periodic).unwrap();
        let c = GridFunction1D::from_fn(p, |x| (2.0 * x).cos());
        assert_eq!(c.node_count(), 4);
        assert!((c.inner(&c) - PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid1D::dirichlet(1.0, 0.0, 100).is_err());
        assert!(Grid1D::dirichlet(0.0, 1.0, 4).is_err());
    }
}
