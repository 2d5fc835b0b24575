use shapeinv::models::{ModelKind, NBodyModel};
use shapeinv::verify::*;
use shapeinv::Model;

fn model(kind: ModelKind, n: usize, alpha: f64) -> Model {
    let omega = (kind == ModelKind::HarmonicCalogero).then_some(1.0);
    NBodyModel::new(kind, n, alpha, omega).unwrap()
}

#[test]
fn factorization_examples() {
    let r = factorization_residual(&model(ModelKind::Calogero, 4, 1.5), 100, 1);
    assert!(r.pass && r.max_residual < 1e-8, "{}", r.summary());
    let r = factorization_residual(&model(ModelKind::CalogeroSutherland, 5, 2.0), 100, 2);
    assert!(r.pass && r.max_residual < 1e-8, "{}", r.summary());
    let r = factorization_residual(&model(ModelKind::CalogeroSutherland, 2, 1.0), 100, 3);
    assert!(r.max_residual < 1e-12, "{}", r.summary());
}

#[test]
fn shape_invariance_examples() {
    let r = shape_invariance_residual(&model(ModelKind::CalogeroSutherland, 3, 1.0), 100, 4);
    assert!(r.pass, "{}", r.summary());
    assert!((r.details["remainder_used"].as_f64().unwrap() - 24.0).abs() < 1e-12);
    let r = shape_invariance_residual(&model(ModelKind::CalogeroSutherland, 2, 1.0), 100, 4);
    assert!((r.details["remainder_used"].as_f64().unwrap() - 6.0).abs() < 1e-12);
    assert!((r.details["remainder_fitted"].as_f64().unwrap() - 6.0).abs() < 1e-9);

    // Calogero at α = 2: the partner equals the direct operator at α + 1 = 3
    let r = shape_invariance_residual(&model(ModelKind::Calogero, 3, 2.0), 100, 5);
    assert!(r.pass, "{}", r.summary());
    assert_eq!(r.details["alpha_next"].as_f64().unwrap(), 3.0);
    assert_eq!(r.details["remainder_used"].as_f64().unwrap(), 0.0);
}

#[test]
fn calogero_partner_does_not_match_lower_coupling() {
    // (α-1)(α-2) ≠ α(α+1): comparing against α - 1 leaves an x-dependent gap
    let m = model(ModelKind::Calogero, 3, 2.0);
    let lower = m.with_alpha(1.0);
    let x = [0.1, 0.9, 2.0];
    let gap = m.partner_potential(&x).unwrap() - lower.factorized_potential(&x).unwrap();
    let y = [0.1, 1.3, 2.0];
    let gap2 = m.partner_potential(&y).unwrap() - lower.factorized_potential(&y).unwrap();
    assert!((gap - gap2).abs() > 1.0);
}

#[test]
fn commutator_examples() {
    let m = model(ModelKind::Calogero, 3, 1.7);
    let v = commutator_case_formula(&m, 0, 1, &[0.0, 1.0, 3.0]).unwrap();
    assert!((v - 2.0 * 1.7).abs() < 1e-15);
    let cs = model(ModelKind::CalogeroSutherland, 2, 1.5);
    let x = [0.2, 1.3];
    let v = commutator_case_formula(&cs, 0, 0, &x).unwrap();
    assert!((v + 2.0 * 1.5 / (0.2f64 - 1.3).sin().powi(2)).abs() < 1e-12);

    for kind in [ModelKind::Calogero, ModelKind::CalogeroSutherland, ModelKind::HarmonicCalogero] {
        let r = commutator_check(&model(kind, 3, 1.5), 100, 6);
        assert!(r.pass, "{}", r.summary());
        assert!(r.details["lower_lower"].as_f64().unwrap() < 1e-13);
    }
}

#[test]
fn momentum_examples() {
    for (kind, n) in [(ModelKind::Calogero, 3), (ModelKind::CalogeroSutherland, 4), (ModelKind::HarmonicCalogero, 2)] {
        let r = momentum_commutation(&model(kind, n, 2.0), 100, 7);
        assert!(r.pass && r.max_residual < 1e-10, "{}", r.summary());
    }
}

#[test]
fn three_body_examples() {
    let r = three_body_cancellation(ThreeBodyKind::Rational, [0.3, 1.1, 2.7]).unwrap();
    assert!(r.residual < 1e-12);
    let r = three_body_cancellation(ThreeBodyKind::Trigonometric, [0.4, 0.7, -1.1]).unwrap();
    assert!(r.residual < 1e-12);
    let r = three_body_cancellation(ThreeBodyKind::Rational, [0.3, 0.3 + 1e-5, 2.7]).unwrap();
    assert!(r.residual < 1e-7 && r.conditioning > 1e4);
    assert!(three_body_cancellation(ThreeBodyKind::Rational, [0.3, 0.3, 1.0]).is_err());
    assert!(three_body_cancellation(ThreeBodyKind::Trigonometric, [0.4, 0.7, 1.1]).is_err());
}

#[test]
fn constant_fit_examples() {
    let f = constant_fit_diagnostic(&model(ModelKind::CalogeroSutherland, 2, 1.0), 100, 8);
    assert!((f.fitted_constant + 2.0).abs() < 1e-8 && f.pass);
    let f = constant_fit_diagnostic(&model(ModelKind::CalogeroSutherland, 3, 1.0), 100, 8);
    assert!((f.fitted_constant + 8.0).abs() < 1e-8 && f.pass);
    let f = constant_fit_diagnostic(&model(ModelKind::Calogero, 4, 2.0), 100, 8);
    assert!(f.fitted_constant.abs() < 1e-8 && f.pass);
}

/// Closed forms obtained by expanding ΣW² - Σ∂W for W_i = Σ'(-α/d + βd)
/// symbolically; independent of the fitting code.
#[test]
fn harmonic_fit_matches_symbolic_expansion() {
    for (n, alpha) in [(2usize, 1.0), (3, 1.5), (4, 2.0)] {
        let m = NBodyModel::new(ModelKind::HarmonicCalogero, n, alpha, Some(1.3)).unwrap();
        let b = m.beta();
        let nn = n as f64;
        let f = constant_fit_diagnostic(&m, 200, 9);
        assert!(f.pass, "{f:?}");
        assert!((f.fitted_quadratic.unwrap() - b * b * nn / 2.0).abs() < 1e-8);
        assert!((f.fitted_constant + b * nn * (nn - 1.0) * (alpha * nn + 1.0)).abs() < 1e-7);
        // the quoted ω²/4 is twice the measured coefficient at the default β
        assert!((f.printed_quadratic.unwrap() / f.fitted_quadratic.unwrap() - 2.0).abs() < 1e-8);

        let r = shape_invariance_residual(&m, 100, 10);
        assert!(r.pass, "{}", r.summary());
        let fitted = r.details["remainder_fitted"].as_f64().unwrap();
        assert!((fitted - b * nn * (nn - 1.0) * (nn + 2.0)).abs() < 1e-7, "{fitted}");
    }
}

#[test]
fn harmonic_beta_override_reproduces_quoted_coefficients() {
    let omega = 1.3;
    let n = 3;
    let m = NBodyModel::new(ModelKind::HarmonicCalogero, n, 1.5, Some(omega))
        .unwrap()
        .with_beta(omega / (2.0 * n as f64).sqrt())
        .unwrap();
    let f = constant_fit_diagnostic(&m, 200, 11);
    assert!(f.quadratic_discrepancy.unwrap().abs() < 1e-8);
    assert!(f.constant_discrepancy.abs() < 1e-7);
    let r = factorization_residual(&m, 100, 11);
    assert!(r.pass, "{}", r.summary());
}

#[test]
fn structural_and_suite() {
    for kind in [ModelKind::Calogero, ModelKind::CalogeroSutherland, ModelKind::HarmonicCalogero] {
        let r = structural_identities(&model(kind, 4, 1.5), 100, 12);
        assert!(r.pass, "{} {:?}", r.summary(), r.details);
    }
    let reports = run_suite(&model(ModelKind::CalogeroSutherland, 3, 1.0), 200, 7, &VerifyOptions::default());
    assert_eq!(reports.len(), 6);
    assert!(reports.iter().all(|r| r.pass), "{:#?}", reports.iter().map(|r| r.summary()).collect::<Vec<_>>());
}

#[test]
fn unreachable_tolerance_fails() {
    let opts = VerifyOptions { tolerances: Tolerances::uniform(1e-20), ..Default::default() };
    let reports = run_suite(&model(ModelKind::CalogeroSutherland, 3, 1.0), 50, 7, &opts);
    assert!(reports.iter().any(|r| !r.pass));
}

#[test]
fn reports_are_reproducible() {
    let m = model(ModelKind::Calogero, 5, 3.0);
    let a = factorization_residual(&m, 64, 99);
    let b = factorization_residual(&m, 64, 99);
    assert_eq!(a.to_json(), b.to_json());
    let c = factorization_residual(&m, 64, 100);
    assert_ne!(a.worst_sample, c.worst_sample);
}

#[test]
fn sampled_model_free_identities() {
    for kind in [ThreeBodyKind::Rational, ThreeBodyKind::Trigonometric] {
        let r = sampled_three_body(kind, 1000, 3);
        assert!(r.pass, "{}", r.summary());
    }
}
