//! The operator identities, each as a seeded residual check.

use serde::Serialize;
use serde_json::json;

use super::report::ResidualReport;
use super::sampling::{run_trials, trial_rng, Sampling};
use crate::calculus::{jacobi_matrix, residual_scale, Jet1, Jet2, ModelPoint};
use crate::error::{Error, Result};
use crate::models::{ModelKind, NBodyModel};
use rand::Rng;

type Model = NBodyModel<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Hamiltonian-level identities.
    pub identity: f64,
    /// Commutators.
    pub structural: f64,
    /// Algebraic identities exact up to roundoff.
    pub exact: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { identity: 1e-8, structural: 1e-10, exact: 1e-12 }
    }
}

impl Tolerances {
    pub fn uniform(t: f64) -> Self {
        Self { identity: t, structural: t, exact: t }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub sampling: Sampling,
    pub tolerances: Tolerances,
}

fn describe(model: &Model) -> String {
    model.descriptor()
}

fn scale_at(model: &Model, jet: &Jet2<f64>, x: &[f64]) -> f64 {
    residual_scale(model, jet, x).unwrap_or(f64::INFINITY)
}

fn expect_ok(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::INFINITY)
}

/// Result of fitting `ΣW² - Σ∂W - V_pair` by a constant (plus a multiple
/// of `Σ_i Σ'_j (x_i - x_j)²` for the harmonic kind).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantFit {
    pub model: String,
    pub seed: u64,
    pub trials: usize,
    pub fitted_constant: f64,
    pub fitted_quadratic: Option<f64>,
    pub residual_std: f64,
    pub scale: f64,
    pub printed_constant: f64,
    pub printed_quadratic: Option<f64>,
    pub constant_discrepancy: f64,
    pub quadratic_discrepancy: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl ConstantFit {
    pub fn to_report(&self) -> ResidualReport {
        let mut rep = ResidualReport::from_samples(
            "constant_fit",
            self.model.clone(),
            self.seed,
            self.tolerance,
            std::iter::once((Vec::new(), self.residual_std / self.scale)),
        );
        rep.trials = self.trials;
        rep.worst_sample = None;
        rep.with_detail("fitted_constant", self.fitted_constant)
            .with_detail("fitted_quadratic", json!(self.fitted_quadratic))
            .with_detail("printed_constant", self.printed_constant)
            .with_detail("printed_quadratic", json!(self.printed_quadratic))
            .with_detail("constant_discrepancy", self.constant_discrepancy)
            .with_detail("quadratic_discrepancy", json!(self.quadratic_discrepancy))
            .with_detail("residual_std", self.residual_std)
            .with_detail("scale", self.scale)
    }
}

pub fn constant_fit_diagnostic(model: &Model, trials: usize, seed: u64) -> ConstantFit {
    constant_fit_with(model, trials, seed, &VerifyOptions::default())
}

pub fn constant_fit_with(model: &Model, trials: usize, seed: u64, opts: &VerifyOptions) -> ConstantFit {
    let harmonic = model.kind() == ModelKind::HarmonicCalogero;
    let rows = run_trials(model, &opts.sampling, trials, seed, |_, x| {
        let d = expect_ok(model.factorized_potential(x)) - expect_ok(model.pair_potential(x));
        let s = if harmonic { model.pair_square_sum(x) } else { 0.0 };
        let v = expect_ok(model.pair_potential(x)).abs();
        (d, s, v)
    });
    let m = rows.len() as f64;
    let mean_d = rows.iter().map(|(_, r)| r.0).sum::<f64>() / m;
    let mean_s = rows.iter().map(|(_, r)| r.1).sum::<f64>() / m;
    let (q, c) = if harmonic {
        let cov: f64 = rows.iter().map(|(_, r)| (r.1 - mean_s) * (r.0 - mean_d)).sum();
        let var: f64 = rows.iter().map(|(_, r)| (r.1 - mean_s).powi(2)).sum();
        let q = if var > 0.0 { cov / var } else { 0.0 };
        (Some(q), mean_d - q * mean_s)
    } else {
        (None, mean_d)
    };
    let qv = q.unwrap_or(0.0);
    let var = rows.iter().map(|(_, r)| (r.0 - c - qv * r.1).powi(2)).sum::<f64>() / m;
    let scale = rows.iter().fold(1.0f64, |acc, (_, r)| acc.max(r.0.abs()).max(r.2));
    let std = var.sqrt();
    let printed_q = harmonic.then(|| model.quadratic_coefficient());
    ConstantFit {
        model: describe(model),
        seed,
        trials: rows.len(),
        fitted_constant: c,
        fitted_quadratic: q,
        residual_std: std,
        scale,
        printed_constant: model.c(),
        printed_quadratic: printed_q,
        constant_discrepancy: c - model.c(),
        quadratic_discrepancy: q.zip(printed_q).map(|(a, b)| a - b),
        tolerance: opts.tolerances.identity,
        pass: std.is_finite() && std <= opts.tolerances.identity * scale,
    }
}

/// `max |H_direct f - Σ A_i† A_i f| / scale`.
///
/// The harmonic kind compares against the direct operator rebuilt from the
/// fitted constant and quadratic coefficient; the printed values are listed
/// in the details.
pub fn factorization_residual(model: &Model, trials: usize, seed: u64) -> ResidualReport {
    factorization_with(model, trials, seed, &VerifyOptions::default())
}

pub fn factorization_with(model: &Model, trials: usize, seed: u64, opts: &VerifyOptions) -> ResidualReport {
    let fit = (model.kind() == ModelKind::HarmonicCalogero).then(|| constant_fit_with(model, trials, seed, opts));
    let samples = run_trials(model, &opts.sampling, trials, seed, |f, x| {
        let jet = f.eval(x);
        let v = match &fit {
            Some(fit) => {
                expect_ok(model.pair_potential(x))
                    + fit.fitted_quadratic.unwrap_or(0.0) * model.pair_square_sum(x)
                    + fit.fitted_constant
            }
            None => expect_ok(model.potential(x)),
        };
        let direct = -jet.laplacian() + v * jet.value;
        let factorized = ModelPoint::new(model, x).map(|p| p.factorized(&jet));
        (expect_ok(factorized) - direct).abs() / scale_at(model, &jet, x)
    });
    let mut rep = ResidualReport::from_samples("factorization", describe(model), seed, opts.tolerances.identity, samples);
    rep = rep.with_detail("potential_constant", model.c());
    if let Some(fit) = fit {
        rep = rep
            .with_detail("potential", "fitted")
            .with_detail("fitted_constant", fit.fitted_constant)
            .with_detail("fitted_quadratic", json!(fit.fitted_quadratic))
            .with_detail("printed_quadratic", json!(fit.printed_quadratic));
    }
    rep
}

/// Residual of `Σ A_i A_i†(α) f - Σ A_i† A_i(α+1) f - R f`.
pub fn shape_invariance_residual(model: &Model, trials: usize, seed: u64) -> ResidualReport {
    shape_invariance_with(model, trials, seed, &VerifyOptions::default())
}

/// Mean of `(ΣW² + Σ∂W)(α) - (ΣW² - Σ∂W)(α+1)` over the sample set.
pub fn fitted_remainder(model: &Model, trials: usize, seed: u64, sampling: &Sampling) -> (f64, f64) {
    let next = model.shifted();
    let diffs: Vec<f64> = run_trials(model, sampling, trials, seed, |_, x| {
        expect_ok(model.partner_potential(x)) - expect_ok(next.factorized_potential(x))
    })
    .into_iter()
    .map(|(_, d)| d)
    .collect();
    let m = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / m;
    let std = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / m).sqrt();
    (mean, std)
}

pub fn shape_invariance_with(model: &Model, trials: usize, seed: u64, opts: &VerifyOptions) -> ResidualReport {
    let next = model.shifted();
    let (fitted, fit_std) = fitted_remainder(model, trials, seed, &opts.sampling);
    let harmonic = model.kind() == ModelKind::HarmonicCalogero;
    let r = if harmonic { fitted } else { model.remainder() };
    let samples = run_trials(model, &opts.sampling, trials, seed, |f, x| {
        let jet = f.eval(x);
        let partner = ModelPoint::new(model, x).map(|p| p.partner(&jet));
        let shifted = ModelPoint::new(&next, x).map(|p| p.factorized(&jet));
        (expect_ok(partner) - expect_ok(shifted) - r * jet.value).abs() / scale_at(model, &jet, x)
    });
    let mut rep = ResidualReport::from_samples("shape_invariance", describe(model), seed, opts.tolerances.identity, samples)
        .with_detail("alpha_next", next.alpha())
        .with_detail("remainder_used", r)
        .with_detail("remainder_fitted", fitted)
        .with_detail("remainder_fit_std", fit_std);
    rep = if harmonic {
        rep.with_detail("remainder_source", "fit").with_detail("remainder_printed", model.remainder())
    } else {
        rep.with_detail("remainder_source", "closed_form")
    };
    rep
}

/// `[A_i†, A_j]` in closed form, case by case (coefficient of `f`).
pub fn commutator_case_formula(model: &Model, i: usize, j: usize, x: &[f64]) -> Result<f64> {
    model.check_configuration(x)?;
    let a = model.alpha();
    let shape = |d: f64| if model.kind().is_periodic() { 1.0 / d.sin().powi(2) } else { 1.0 / (d * d) };
    let extra = if model.kind() == ModelKind::HarmonicCalogero { 2.0 * model.beta() } else { 0.0 };
    if i == j {
        let s: f64 = (0..model.n()).filter(|&k| k != i).map(|k| shape(x[i] - x[k])).sum();
        Ok(-2.0 * a * s - extra * (model.n() - 1) as f64)
    } else {
        Ok(2.0 * a * shape(x[i] - x[j]) + extra)
    }
}

/// `[A_i, A_j] = [A_i†, A_j†] = 0` and `[A_i†, A_j] = -2 ∂_i W_j` at samples.
pub fn commutator_check(model: &Model, trials: usize, seed: u64) -> ResidualReport {
    commutator_with(model, trials, seed, &VerifyOptions::default())
}

pub fn commutator_with(model: &Model, trials: usize, seed: u64, opts: &VerifyOptions) -> ResidualReport {
    let n = model.n();
    let parts = run_trials(model, &opts.sampling, trials, seed, |f, x| {
        let Ok(p) = ModelPoint::new(model, x) else { return [f64::INFINITY; 3] };
        let jet = f.eval(x);
        let scale = scale_at(model, &jet, x);
        let lowered: Vec<Jet1<f64>> = (0..n).map(|i| p.lower(i, &jet)).collect();
        let raised: Vec<Jet1<f64>> = (0..n).map(|i| p.raise(i, &jet)).collect();
        let mut worst = [0.0f64; 3];
        for i in 0..n {
            for j in 0..n {
                let ll = p.lower_value(i, &lowered[j]) - p.lower_value(j, &lowered[i]);
                let rr = p.raise_value(i, &raised[j]) - p.raise_value(j, &raised[i]);
                let mixed = p.raise_value(i, &lowered[j]) - p.lower_value(j, &raised[i]);
                let case = expect_ok(commutator_case_formula(model, i, j, x)) * jet.value;
                worst[0] = worst[0].max(ll.abs() / scale);
                worst[1] = worst[1].max(rr.abs() / scale);
                worst[2] = worst[2].max((mixed - case).abs() / scale);
            }
        }
        worst
    });
    let per_part: [f64; 3] =
        std::array::from_fn(|k| parts.iter().fold(0.0f64, |m, (_, w)| if w[k].is_nan() { f64::INFINITY } else { m.max(w[k]) }));
    let samples = parts.into_iter().map(|(x, w)| (x, w[0].max(w[1]).max(w[2])));
    ResidualReport::from_samples("commutators", describe(model), seed, opts.tolerances.structural, samples)
        .with_detail("lower_lower", per_part[0])
        .with_detail("raise_raise", per_part[1])
        .with_detail("raise_lower_vs_case_formula", per_part[2])
}

/// `[P_TOT, A_i] f` and `[P_TOT, A_i†] f` at samples.
pub fn momentum_commutation(model: &Model, trials: usize, seed: u64) -> ResidualReport {
    momentum_with(model, trials, seed, &VerifyOptions::default())
}

pub fn momentum_with(model: &Model, trials: usize, seed: u64, opts: &VerifyOptions) -> ResidualReport {
    let n = model.n();
    let ones = vec![1.0; n];
    let samples = run_trials(model, &opts.sampling, trials, seed, |f, x| {
        let Ok(p) = ModelPoint::new(model, x) else { return f64::INFINITY };
        let jet = f.eval(x);
        let pf = p.first_order(&ones, 1.0, &jet);
        let mut worst = 0.0f64;
        for i in 0..n {
            let a = p.first_order_value(&ones, 1.0, &p.lower(i, &jet)) - p.lower_value(i, &pf);
            let b = p.first_order_value(&ones, 1.0, &p.raise(i, &jet)) - p.raise_value(i, &pf);
            worst = worst.max(a.abs()).max(b.abs());
        }
        worst / scale_at(model, &jet, x)
    });
    ResidualReport::from_samples("momentum_commutation", describe(model), seed, opts.tolerances.structural, samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreeBodyKind {
    /// Input is three coordinates.
    Rational,
    /// Input is three angles with zero sum.
    Trigonometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeBody {
    /// Absolute residual divided by the largest term (at least one).
    pub residual: f64,
    pub absolute: f64,
    /// Largest individual term, a measure of cancellation.
    pub conditioning: f64,
}

/// Three-body cancellation: `Σ_cyc 1/((x_i - x_j)(x_i - x_k)) = 0` or
/// `cot a cot b + cot b cot c + cot c cot a = 1` for `a + b + c = 0`.
pub fn three_body_cancellation(kind: ThreeBodyKind, x: [f64; 3]) -> Result<ThreeBody> {
    let terms: [f64; 3] = match kind {
        ThreeBodyKind::Rational => {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                if x[i] == x[j] {
                    return Err(Error::Singular { i, j, gap: 0.0, guard: 0.0 });
                }
            }
            let t = |i: usize, j: usize, k: usize| 1.0 / ((x[i] - x[j]) * (x[i] - x[k]));
            [t(0, 1, 2), t(1, 2, 0), t(2, 0, 1)]
        }
        ThreeBodyKind::Trigonometric => {
            let total = x[0] + x[1] + x[2];
            let size = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            if total.abs() > 1e-12 * size {
                return Err(Error::Domain(format!("angles must sum to zero, got {total:e}")));
            }
            if let Some(i) = x.iter().position(|v| v.sin() == 0.0) {
                return Err(Error::Singular { i, j: i, gap: 0.0, guard: 0.0 });
            }
            let c: Vec<f64> = x.iter().map(|v| 1.0 / v.tan()).collect();
            [c[0] * c[1], c[1] * c[2], c[2] * c[0] - 1.0]
        }
    };
    let absolute = (terms[0] + terms[1] + terms[2]).abs();
    let conditioning = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    Ok(ThreeBody { residual: absolute / conditioning.max(1.0), absolute, conditioning })
}

/// Sampled structural identities: `ΣW = 0`, symmetric Jacobian, the two
/// three-body cancellations, and the Jacobi-basis relations.
pub fn structural_identities(model: &Model, trials: usize, seed: u64) -> ResidualReport {
    structural_with(model, trials, seed, &VerifyOptions::default())
}

pub fn structural_with(model: &Model, trials: usize, seed: u64, opts: &VerifyOptions) -> ResidualReport {
    let n = model.n();
    let o = jacobi_matrix::<f64>(n);
    let parts = run_trials(model, &opts.sampling, trials, seed, |f, x| {
        let Ok(p) = ModelPoint::new(model, x) else { return [f64::INFINITY; 5] };
        let wmax = p.w.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let antisym = p.w.iter().sum::<f64>().abs() / wmax;

        let mut curl = 0.0f64;
        let mut curl_scale = 1.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let dij = -model.pair_dw(x[j] - x[i]);
                    let dji = -model.pair_dw(x[i] - x[j]);
                    curl = curl.max((dij - dji).abs());
                    curl_scale = curl_scale.max(dij.abs());
                }
            }
        }

        let mut three = 0.0f64;
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let tri = [x[a], x[b], x[c]];
                    let r = three_body_cancellation(ThreeBodyKind::Rational, tri).map(|t| t.residual);
                    let angles = [tri[0] - tri[1], tri[1] - tri[2], tri[2] - tri[0]];
                    let t = three_body_cancellation(ThreeBodyKind::Trigonometric, angles).map(|t| t.residual);
                    three = three.max(expect_ok(r)).max(expect_ok(t));
                }
            }
        }

        let jet = f.eval(x);
        let scale = scale_at(model, &jet, x);
        let direct: f64 = p.factorized(&jet);
        let rows: Vec<&[f64]> = (0..n).map(|k| &o[k * n..(k + 1) * n]).collect();
        let jacobi: f64 = rows.iter().map(|row| p.first_order_value(row, -1.0, &p.first_order(row, 1.0, &jet))).sum();
        let equiv = (direct - jacobi).abs() / scale;

        let last = rows[n - 1];
        let mut bn = 0.0f64;
        for row in &rows {
            let a = p.first_order_value(last, 1.0, &p.first_order(row, -1.0, &jet));
            let b = p.first_order_value(row, -1.0, &p.first_order(last, 1.0, &jet));
            bn = bn.max((a - b).abs() / scale);
        }
        [antisym, curl / curl_scale, three, equiv, bn]
    });
    let names = ["sum_w", "curl", "three_body", "jacobi_equivalence", "jacobi_last_commutator"];
    let per_part: Vec<f64> = (0..5).map(|k| parts.iter().fold(0.0f64, |m, (_, w)| m.max(w[k]))).collect();
    // The last commutator is checked at the commutator tolerance; the rest
    // are exact to roundoff.
    let samples = parts.into_iter().map(|(x, w)| {
        let exact = w[0].max(w[1]).max(w[2]).max(w[3]);
        let scaled = w[4] * opts.tolerances.exact / opts.tolerances.structural;
        (x, exact.max(scaled))
    });
    let mut rep = ResidualReport::from_samples("structural", describe(model), seed, opts.tolerances.exact, samples);
    for (name, v) in names.iter().zip(per_part) {
        rep = rep.with_detail(name, v);
    }
    rep.with_detail("jacobi_last_commutator_tolerance", opts.tolerances.structural)
}

/// Sampled three-body identities alone, independent of any model.
pub fn sampled_three_body(kind: ThreeBodyKind, samples: usize, seed: u64) -> ResidualReport {
    let results: Vec<(Vec<f64>, f64)> = (0..samples.max(1))
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            loop {
                let x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
                let input = match kind {
                    ThreeBodyKind::Rational => x,
                    ThreeBodyKind::Trigonometric => [x[0] - x[1], x[1] - x[2], x[2] - x[0]],
                };
                let clear = match kind {
                    ThreeBodyKind::Rational => (0..3).all(|i| (x[i] - x[(i + 1) % 3]).abs() > 0.05),
                    ThreeBodyKind::Trigonometric => input.iter().all(|a| a.sin().abs() > 0.05),
                };
                if clear {
                    return (input.to_vec(), expect_ok(three_body_cancellation(kind, input).map(|t| t.residual)));
                }
            }
        })
        .collect();
    let name = match kind {
        ThreeBodyKind::Rational => "three_body_rational",
        ThreeBodyKind::Trigonometric => "cot_identity",
    };
    ResidualReport::from_samples(name, "model-free".into(), seed, 1e-12, results)
}

/// All six model reports.
pub fn run_suite(model: &Model, trials: usize, seed: u64, opts: &VerifyOptions) -> Vec<ResidualReport> {
    vec![
        factorization_with(model, trials, seed, opts),
        shape_invariance_with(model, trials, seed, opts),
        commutator_with(model, trials, seed, opts),
        momentum_with(model, trials, seed, opts),
        constant_fit_with(model, trials, seed, opts).to_report(),
        structural_with(model, trials, seed, opts),
    ]
}
