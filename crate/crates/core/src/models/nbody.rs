//! Pairwise N-body models on the line: Calogero, harmonic-Calogero and
//! Calogero-Sutherland (unit circle length `π`).
//!
//! Every model here derives from a pair function `w(d)`, with
//! `W_i(x) = Σ'_j w(x_i - x_j)`. Because `w` is odd, `Σ W_i = 0`, and
//! because `W_i` is a gradient, `∂_i W_j = ∂_j W_i`.

use serde::{Deserialize, Serialize};

use crate::config::KeyValues;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Calogero,
    HarmonicCalogero,
    CalogeroSutherland,
}

impl ModelKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().replace('-', "_").as_str() {
            "calogero" | "c" => Ok(Self::Calogero),
            "harmonic_calogero" | "harmonic" | "hc" => Ok(Self::HarmonicCalogero),
            "calogero_sutherland" | "sutherland" | "cs" => Ok(Self::CalogeroSutherland),
            other => Err(Error::Config(format!("unknown model kind `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Calogero => "calogero",
            Self::HarmonicCalogero => "harmonic_calogero",
            Self::CalogeroSutherland => "calogero_sutherland",
        }
    }

    /// Whether the pair functions are trigonometric (periodic differences).
    pub fn is_periodic(self) -> bool {
        self == Self::CalogeroSutherland
    }
}

/// An immutable N-body model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NBodyModel<T> {
    kind: ModelKind,
    n: usize,
    alpha: T,
    omega: Option<T>,
    beta: T,
    beta_overridden: bool,
    epsilon_sing: T,
}

/// Default guard against coincident coordinates.
pub const DEFAULT_EPSILON_SING: f64 = 1e-6;

impl<T: Real> NBodyModel<T> {
    /// Builds a model. `omega` must be given exactly for the harmonic kind.
    pub fn new(kind: ModelKind, n: usize, alpha: T, omega: Option<T>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("particle count must be at least 2, got {n}")));
        }
        if !alpha.is_finite() {
            return Err(Error::Domain("alpha must be finite".into()));
        }
        let beta = match (kind, omega) {
            (ModelKind::HarmonicCalogero, Some(w)) => {
                if !(w > T::zero()) || !w.is_finite() {
                    return Err(Error::Domain(format!("omega must be positive, got {}", to_f64(w))));
                }
                w / (lit::<T>(2.0) * lit::<T>(n as f64).sqrt())
            }
            (ModelKind::HarmonicCalogero, None) => {
                return Err(Error::Domain("harmonic_calogero requires omega".into()));
            }
            (_, Some(_)) => {
                return Err(Error::Domain(format!("omega is only meaningful for harmonic_calogero, not {}", kind.name())));
            }
            (_, None) => T::zero(),
        };
        Ok(Self {
            kind,
            n,
            alpha,
            omega,
            beta,
            beta_overridden: false,
            epsilon_sing: lit(DEFAULT_EPSILON_SING),
        })
    }

    /// Replaces the default `β = ω/(2√N)` of the harmonic kind.
    pub fn with_beta(mut self, beta: T) -> Result<Self> {
        if self.kind != ModelKind::HarmonicCalogero {
            return Err(Error::Domain("beta override applies only to harmonic_calogero".into()));
        }
        self.beta = beta;
        self.beta_overridden = true;
        Ok(self)
    }

    pub fn with_epsilon_sing(mut self, eps: T) -> Result<Self> {
        if !(eps > T::zero()) {
            return Err(Error::Domain("epsilon_sing must be positive".into()));
        }
        self.epsilon_sing = eps;
        Ok(self)
    }

    /// Same model at another coupling; `β`, `ω` and the guard are kept.
    pub fn with_alpha(mut self, alpha: T) -> Self {
        self.alpha = alpha;
        self
    }

    /// The model at `α + 1`.
    pub fn shifted(&self) -> Self {
        self.with_alpha(self.alpha + T::one())
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn alpha(&self) -> T {
        self.alpha
    }
    pub fn omega(&self) -> Option<T> {
        self.omega
    }
    pub fn beta(&self) -> T {
        self.beta
    }
    pub fn beta_overridden(&self) -> bool {
        self.beta_overridden
    }
    pub fn epsilon_sing(&self) -> T {
        self.epsilon_sing
    }

    /// `g = 2α(α - 1)`.
    pub fn g(&self) -> T {
        lit::<T>(2.0) * self.alpha * (self.alpha - T::one())
    }

    /// The additive constant `c` of the direct Hamiltonian.
    ///
    /// For the harmonic kind this is the closed form quoted in the
    /// literature; [`crate::verify::constant_fit_diagnostic`] measures the
    /// value that actually makes the factorization hold.
    pub fn c(&self) -> T {
        let n = lit::<T>(self.n as f64);
        match self.kind {
            ModelKind::Calogero => T::zero(),
            ModelKind::CalogeroSutherland => -self.alpha * self.alpha * n * (n * n - T::one()) / lit(3.0),
            ModelKind::HarmonicCalogero => {
                let w = self.omega.unwrap_or_else(T::zero);
                -(w / T::SQRT_2()) * n.sqrt() * (n - T::one()) * (self.alpha * n + T::one())
            }
        }
    }

    /// Coefficient `ω²/4` multiplying `Σ_i Σ'_j (x_i - x_j)²` in the direct
    /// harmonic Hamiltonian; zero for the other kinds.
    pub fn quadratic_coefficient(&self) -> T {
        match self.omega {
            Some(w) if self.kind == ModelKind::HarmonicCalogero => w * w / lit(4.0),
            _ => T::zero(),
        }
    }

    /// Shape-invariance shift `R(α₁)` with `α₁ = α + 1`, per kind.
    ///
    /// Calogero gives zero and Calogero-Sutherland gives
    /// `(α₁² - α²) N (N² - 1)/3`. For the harmonic kind this returns the
    /// quoted closed form `(ω/√2) √N (N - 1)(α₁ - α) N`, which is only a
    /// reference value; verification fits the real shift.
    pub fn remainder(&self) -> T {
        let n = lit::<T>(self.n as f64);
        let a1 = self.alpha + T::one();
        match self.kind {
            ModelKind::Calogero => T::zero(),
            ModelKind::CalogeroSutherland => (a1 * a1 - self.alpha * self.alpha) * n * (n * n - T::one()) / lit(3.0),
            ModelKind::HarmonicCalogero => {
                let w = self.omega.unwrap_or_else(T::zero);
                (w / T::SQRT_2()) * n.sqrt() * (n - T::one()) * (a1 - self.alpha) * n
            }
        }
    }

    /// Pair prepotential `w(d)`.
    pub fn pair_w(&self, d: T) -> T {
        match self.kind {
            ModelKind::Calogero => -self.alpha / d,
            ModelKind::HarmonicCalogero => -self.alpha / d + self.beta * d,
            ModelKind::CalogeroSutherland => -self.alpha / d.tan(),
        }
    }

    /// `w'(d)`.
    pub fn pair_dw(&self, d: T) -> T {
        match self.kind {
            ModelKind::Calogero => self.alpha / (d * d),
            ModelKind::HarmonicCalogero => self.alpha / (d * d) + self.beta,
            ModelKind::CalogeroSutherland => {
                let s = d.sin();
                self.alpha / (s * s)
            }
        }
    }

    /// Shape of the singular pair interaction: `1/d²` or `1/sin² d`.
    pub fn pair_shape(&self, d: T) -> T {
        let s = if self.kind.is_periodic() { d.sin() } else { d };
        T::one() / (s * s)
    }

    /// Log of the pair factor of the Jastrow state, `-∫w`.
    pub fn pair_log_jastrow(&self, d: T) -> T {
        match self.kind {
            ModelKind::Calogero => self.alpha * d.abs().ln(),
            ModelKind::HarmonicCalogero => self.alpha * d.abs().ln() - self.beta * d * d / lit(2.0),
            ModelKind::CalogeroSutherland => self.alpha * d.sin().abs().ln(),
        }
    }

    /// Fails if any pair is closer than the guard (mod `π` for CS).
    pub fn check_configuration(&self, x: &[T]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::Domain(format!("configuration has {} coordinates, model has N = {}", x.len(), self.n)));
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let d = x[i] - x[j];
                let gap = if self.kind.is_periodic() { d.sin().abs() } else { d.abs() };
                if !(gap >= self.epsilon_sing) {
                    return Err(Error::Singular { i, j, gap: to_f64(gap), guard: to_f64(self.epsilon_sing) });
                }
            }
        }
        Ok(())
    }

    /// `(W_1, …, W_N)` at `x`.
    pub fn prepotential(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_configuration(x)?;
        let mut w = vec![T::zero(); self.n];
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let p = self.pair_w(x[i] - x[j]);
                w[i] = w[i] + p;
                w[j] = w[j] - p;
            }
        }
        Ok(w)
    }

    /// `W` together with its Jacobian, `jac[i * N + j] = ∂_j W_i`.
    pub fn prepotential_jacobian(&self, x: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        let w = self.prepotential(x)?;
        let n = self.n;
        let mut jac = vec![T::zero(); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let dp = self.pair_dw(x[i] - x[j]);
                jac[i * n + i] = jac[i * n + i] + dp;
                jac[j * n + j] = jac[j * n + j] + dp;
                jac[i * n + j] = jac[i * n + j] - dp;
                jac[j * n + i] = jac[j * n + i] - dp;
            }
        }
        Ok((w, jac))
    }

    /// `Σ_i Σ'_j (g/2) v(x_i - x_j)` without quadratic or constant parts.
    pub fn pair_potential(&self, x: &[T]) -> Result<T> {
        self.check_configuration(x)?;
        Ok(self.g() * self.sum_pairs(x, |d| self.pair_shape(d)))
    }

    /// `Σ_i Σ'_j (x_i - x_j)²`.
    pub fn pair_square_sum(&self, x: &[T]) -> T {
        lit::<T>(2.0) * self.sum_pairs(x, |d| d * d)
    }

    /// The full potential `V(x)` of the direct Hamiltonian, constant included.
    pub fn potential(&self, x: &[T]) -> Result<T> {
        let mut v = self.pair_potential(x)? + self.c();
        if self.kind == ModelKind::HarmonicCalogero {
            v = v + self.quadratic_coefficient() * self.pair_square_sum(x);
        }
        Ok(v)
    }

    /// `Σ W_i² - Σ ∂_i W_i`, the potential of `Σ A_i† A_i`.
    pub fn factorized_potential(&self, x: &[T]) -> Result<T> {
        let (w, jac) = self.prepotential_jacobian(x)?;
        Ok((0..self.n).map(|i| w[i] * w[i] - jac[i * self.n + i]).sum())
    }

    /// `Σ W_i² + Σ ∂_i W_i`, the potential of `Σ A_i A_i†`.
    pub fn partner_potential(&self, x: &[T]) -> Result<T> {
        let (w, jac) = self.prepotential_jacobian(x)?;
        Ok((0..self.n).map(|i| w[i] * w[i] + jac[i * self.n + i]).sum())
    }

    /// `ln Φ₀` for the product ground state `Φ₀ = exp(-Σ ∫ W)`.
    pub fn log_jastrow(&self, x: &[T]) -> Result<T> {
        self.check_configuration(x)?;
        Ok(self.sum_pairs(x, |d| self.pair_log_jastrow(d)))
    }

    /// `Φ₀(x)`, unnormalized.
    pub fn jastrow(&self, x: &[T]) -> Result<T> {
        Ok(self.log_jastrow(x)?.exp())
    }

    fn sum_pairs(&self, x: &[T], f: impl Fn(T) -> T) -> T {
        let mut acc = T::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                acc = acc + f(x[i] - x[j]);
            }
        }
        acc
    }
}

/// Keys accepted by [`NBodyModel::from_key_values`].
pub const MODEL_KEYS: &[&str] = &["kind", "n", "alpha", "omega", "beta_override", "epsilon_sing"];

impl NBodyModel<f64> {
    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        let kind = ModelKind::parse(kv.get("kind").ok_or_else(|| Error::Config("missing key `kind`".into()))?)?;
        let n: usize = kv.parsed("n")?.ok_or_else(|| Error::Config("missing key `n`".into()))?;
        let alpha: f64 = kv.parsed("alpha")?.ok_or_else(|| Error::Config("missing key `alpha`".into()))?;
        let omega: Option<f64> = kv.parsed("omega")?;
        let mut model = Self::new(kind, n, alpha, omega)?;
        if let Some(beta) = kv.parsed::<f64>("beta_override")? {
            model = model.with_beta(beta)?;
        }
        if let Some(eps) = kv.parsed::<f64>("epsilon_sing")? {
            model = model.with_epsilon_sing(eps)?;
        }
        Ok(model)
    }

    pub fn to_key_values(&self) -> KeyValues {
        let mut kv = KeyValues::new();
        kv.set("kind", self.kind.name());
        kv.set("n", self.n);
        kv.set("alpha", self.alpha);
        if let Some(w) = self.omega {
            kv.set("omega", w);
        }
        if self.beta_overridden {
            kv.set("beta_override", self.beta);
        }
        kv.set("epsilon_sing", self.epsilon_sing);
        kv
    }

    /// Short human-readable descriptor used in reports.
    pub fn descriptor(&self) -> String {
        let mut s = format!("{} N={} alpha={}", self.kind.name(), self.n, self.alpha);
        if let Some(w) = self.omega {
            s.push_str(&format!(" omega={w} beta={}", self.beta));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn model(kind: ModelKind, n: usize, alpha: f64) -> NBodyModel<f64> {
        let omega = (kind == ModelKind::HarmonicCalogero).then_some(1.0);
        NBodyModel::new(kind, n, alpha, omega).unwrap()
    }

    #[test]
    fn construction_examples() {
        assert_eq!(model(ModelKind::Calogero, 3, 2.0).g(), 4.0);
        assert!((model(ModelKind::CalogeroSutherland, 3, 1.0).c() + 8.0).abs() < 1e-14);
        assert_eq!(model(ModelKind::CalogeroSutherland, 2, 1.0).g(), 0.0);
    }

    #[test]
    fn construction_errors() {
        assert!(NBodyModel::new(ModelKind::Calogero, 1, 1.0, None).is_err());
        assert!(NBodyModel::new(ModelKind::HarmonicCalogero, 2, 1.0, None).is_err());
        assert!(NBodyModel::new(ModelKind::Calogero, 2, 1.0, Some(1.0)).is_err());
        assert!(model(ModelKind::Calogero, 2, 1.0).with_beta(0.3).is_err());
    }

    #[test]
    fn prepotential_examples() {
        let w = model(ModelKind::Calogero, 2, 1.0).prepotential(&[0.0, 1.0]).unwrap();
        assert_eq!(w, vec![1.0, -1.0]);

        let cs = model(ModelKind::CalogeroSutherland, 3, 1.0);
        let w = cs.prepotential(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]).unwrap();
        assert!(w.iter().all(|v| v.abs() < 1e-14), "{w:?}");

        let hc = model(ModelKind::HarmonicCalogero, 2, 1.0);
        let beta = hc.beta();
        assert!((beta - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        let w = hc.prepotential(&[0.0, 1.0]).unwrap();
        assert!((w[0] - (1.0 - beta)).abs() < 1e-15 && (w[1] + 1.0 - beta).abs() < 1e-15);
    }

    #[test]
    fn coincidences_are_rejected() {
        let m = model(ModelKind::Calogero, 3, 1.0);
        assert!(matches!(m.prepotential(&[0.0, 1.0, 1.0 + 1e-9]), Err(Error::Singular { i: 1, j: 2, .. })));
        let cs = model(ModelKind::CalogeroSutherland, 2, 1.0);
        assert!(cs.prepotential(&[0.1, 0.1 + PI]).is_err());
    }

    #[test]
    fn jacobian_is_symmetric_and_matches_differences() {
        let m = model(ModelKind::HarmonicCalogero, 4, 1.5);
        let x = [0.1, -0.7, 1.3, 2.2];
        let (_, jac) = m.prepotential_jacobian(&x).unwrap();
        let h = 1e-6;
        for j in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let wp = m.prepotential(&xp).unwrap();
            let wm = m.prepotential(&xm).unwrap();
            for i in 0..4 {
                assert_eq!(jac[i * 4 + j], jac[j * 4 + i]);
                let fd = (wp[i] - wm[i]) / (2.0 * h);
                assert!((fd - jac[i * 4 + j]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn direct_potential_example() {
        let m = model(ModelKind::Calogero, 2, 2.0);
        assert!((m.potential(&[0.0, 1.0]).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn jastrow_is_product_form() {
        let cs = model(ModelKind::CalogeroSutherland, 2, 1.0);
        let x = [0.3, 1.4];
        assert!((cs.jastrow(&x).unwrap() - (0.3f64 - 1.4).sin().abs()).abs() < 1e-15);
    }

    #[test]
    fn key_value_round_trip() {
        let m = model(ModelKind::HarmonicCalogero, 3, 1.5).with_beta(0.4).unwrap();
        let kv = m.to_key_values();
        let back = NBodyModel::from_key_values(&kv).unwrap();
        assert_eq!(m, back);
        let text = kv.to_text();
        assert!(text.contains("beta_override"));
    }

    #[test]
    fn remainders() {
        assert!((model(ModelKind::CalogeroSutherland, 3, 1.0).remainder() - 24.0).abs() < 1e-12);
        assert!((model(ModelKind::CalogeroSutherland, 2, 1.0).remainder() - 6.0).abs() < 1e-12);
        assert_eq!(model(ModelKind::Calogero, 3, 2.0).remainder(), 0.0);
    }

    #[test]
    fn works_in_single_precision() {
        let m = NBodyModel::<f32>::new(ModelKind::CalogeroSutherland, 3, 2.0, None).unwrap();
        let w = m.prepotential(&[0.2, 1.0, 2.5]).unwrap();
        assert!(w.iter().copied().sum::<f32>().abs() < 1e-5);
    }
}
