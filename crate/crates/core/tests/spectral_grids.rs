use std::f64::consts::PI;

use shapeinv::models::{ModelKind, NBodyModel, Normalizability, Prepotential1D};
use shapeinv::shape1d::Boundary;
use shapeinv::spectral::*;
use shapeinv::Error;

fn line_spectrum(pot: &(dyn Fn(f64) -> f64 + Sync), min: f64, max: f64, m: usize, order: usize, k: usize) -> Vec<f64> {
    let grid = GridSpec::line(min, max, m).unwrap();
    let h = discretize(&PotentialSource::Line { potential: pot, kinetic: 1.0, label: "test".into() }, &grid, order).unwrap();
    eigen(&h.matrix, k).unwrap().values
}

fn cs(n: usize, alpha: f64) -> NBodyModel<f64> {
    NBodyModel::new(ModelKind::CalogeroSutherland, n, alpha, None).unwrap()
}

#[test]
fn rosen_morse_levels() {
    let p = Prepotential1D::RosenMorseTrig { b: 2.0, a: 1.0 };
    let levels = line_spectrum(&|x| p.potential(x), 0.0, PI, 2000, 2, 5);
    for (got, want) in levels.iter().zip([0.0, 5.0, 12.0, 21.0, 32.0]) {
        assert!((got - want).abs() <= 1e-3 * want.max(1.0), "{got} vs {want}");
    }
}

#[test]
fn particle_in_a_box() {
    let levels = line_spectrum(&|_| 0.0, 0.0, PI, 1000, 4, 4);
    for (i, got) in levels.iter().enumerate() {
        let want = ((i + 1) * (i + 1)) as f64;
        assert!((got - want).abs() < 1e-6 * want, "{got} vs {want}");
    }
}

#[test]
fn oscillator_levels() {
    let levels = line_spectrum(&|x| x * x, -10.0, 10.0, 2000, 2, 4);
    for (got, want) in levels.iter().zip([1.0, 3.0, 5.0, 7.0]) {
        assert!((got - want).abs() < 1e-3, "{got} vs {want}");
    }
}

#[test]
fn dense_and_iterative_agree_at_dimension_1000() {
    let grid = GridSpec::line(-8.0, 8.0, 1000).unwrap();
    let pot = |x: f64| x * x + 0.3 * x.powi(4) / 10.0;
    let h = discretize(&PotentialSource::Line { potential: &pot, kinetic: 1.0, label: "anharmonic".into() }, &grid, 4).unwrap();
    let dense = eigen_with(&h.matrix, 6, &EigenOptions { method: EigenMethod::Dense, ..Default::default() }).unwrap();
    let iter = eigen_with(&h.matrix, 6, &EigenOptions { method: EigenMethod::Iterative, ..Default::default() }).unwrap();
    let diff = dense.values.iter().zip(&iter.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-9, "max difference {diff}");
    for r in [&dense, &iter] {
        assert!(r.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(r.residuals.iter().all(|&res| res <= 1e-8 * r.norm_estimate));
    }
}

#[test]
fn single_level_is_the_minimal_rayleigh_quotient() {
    let grid = GridSpec::line(-5.0, 5.0, 300).unwrap();
    let pot = |x: f64| (x - 0.5).powi(2) + x.sin();
    let h = discretize(&PotentialSource::Line { potential: &pot, kinetic: 1.0, label: String::new() }, &grid, 2).unwrap();
    let r = eigen(&h.matrix, 1).unwrap();
    let v = &r.vectors[0];
    let hv = h.matrix.matvec(v);
    let rq = dot(v, &hv) / dot(v, v);
    assert!((rq - r.values[0]).abs() < 1e-10);
    let all = symmetric_eigenvalues(h.matrix.to_dense());
    assert!((all[0] - r.values[0]).abs() < 1e-10);
}

#[test]
fn iterative_runs_are_reproducible() {
    let grid = GridSpec::line(0.0, 1.0, 900).unwrap();
    let pot = |x: f64| 50.0 * x;
    let h = discretize(&PotentialSource::Line { potential: &pot, kinetic: 1.0, label: String::new() }, &grid, 2).unwrap();
    let opts = EigenOptions { method: EigenMethod::Iterative, seed: 7, ..Default::default() };
    let a = eigen_with(&h.matrix, 3, &opts).unwrap();
    let b = eigen_with(&h.matrix, 3, &opts).unwrap();
    assert_eq!(a.values, b.values);
    assert_eq!(a.vectors, b.vectors);
}

#[test]
fn rosen_morse_convergence_orders() {
    let p = Prepotential1D::RosenMorseTrig { b: 2.0, a: 1.0 };
    for (order, min_rate) in [(2usize, 1.9), (4, 2.9)] {
        let errs: Vec<f64> = [100usize, 200, 400]
            .iter()
            .map(|&m| (line_spectrum(&|x| p.potential(x), 0.0, PI, m, order, 2)[1] - 5.0).abs())
            .collect();
        for w in errs.windows(2) {
            let rate = (w[0] / w[1]).log2();
            assert!(rate >= min_rate, "order {order}: errors {errs:?}");
        }
    }
}

#[test]
fn oscillator_convergence_order_four() {
    let errs: Vec<f64> = [100usize, 200, 400]
        .iter()
        .map(|&m| (line_spectrum(&|x| x * x, -8.0, 8.0, m, 4, 2)[1] - 3.0).abs())
        .collect();
    for w in errs.windows(2) {
        assert!((w[0] / w[1]).log2() >= 3.8, "{errs:?}");
    }
}

#[test]
fn singular_node_is_rejected() {
    let grid = GridSpec::line(-1.0, 1.0, 9).unwrap();
    let pot = |x: f64| 1.0 / x;
    let err = discretize(&PotentialSource::Line { potential: &pot, kinetic: 1.0, label: String::new() }, &grid, 2).unwrap_err();
    assert!(matches!(err, Error::NodeOnSingularity(4)));
}

#[test]
fn model_hamiltonian_is_symmetric() {
    let model = NBodyModel::new(ModelKind::HarmonicCalogero, 3, 2.0, Some(1.0)).unwrap();
    let grid = GridSpec::ordered(3, -4.0, 4.0, 16).unwrap();
    for order in [2, 4] {
        let h = discretize(&PotentialSource::Model { model: &model, operator: ModelOperator::Direct }, &grid, order).unwrap();
        assert_eq!(h.dim(), 16 * 15 * 14 / 6);
        assert!(h.matrix.asymmetry() <= 1e-12 * h.matrix.max_abs());
    }
}

#[test]
fn harmonic_pair_in_the_ordered_plane() {
    // the centre of mass is free, so both operators carry the same box
    // energy for it and only the difference of the two spectra is tested
    let model = NBodyModel::new(ModelKind::HarmonicCalogero, 2, 2.0, Some(1.0)).unwrap();
    let grid = GridSpec::ordered(2, -6.0, 6.0, 100).unwrap();
    let h = discretize(&PotentialSource::Model { model: &model, operator: ModelOperator::Factorized }, &grid, 4).unwrap();
    let r = eigen(&h.matrix, 2).unwrap();
    assert!(r.values[0] > 0.0, "positivity: {:?}", r.values);
    let iso = isospectrality_check(&model, &grid, 4, 3, 2e-2).unwrap();
    assert!(iso.pass, "{iso:?}");
}

#[test]
fn cs_two_body_reduction() {
    let red = two_body_reduction(&cs(2, 2.0)).unwrap();
    assert!(matches!(red.prepotential, Prepotential1D::RosenMorseTrig { b, a } if b == 2.0 && a == 1.0));
    assert_eq!(red.algebraic_levels(4), vec![0.0, 10.0, 24.0, 42.0]);
    let cmp = red.compare(2000, 4, 4).unwrap();
    assert!(cmp.max_relative < 1e-3, "{cmp:?}");
    assert!(cmp.grid[0].abs() < 1e-3);

    // ground state: no interior nodes, even about r = π/2
    let grid = red.grid(400).unwrap();
    let pot = |r: f64| red.potential(r);
    let h = discretize(&PotentialSource::Line { potential: &pot, kinetic: 2.0, label: String::new() }, &grid, 2).unwrap();
    let v = &eigen(&h.matrix, 1).unwrap().vectors[0];
    assert!(v.iter().all(|&x| x > 0.0));
    let n = v.len();
    assert!((0..n).all(|i| (v[i] - v[n - 1 - i]).abs() < 1e-8));

    // the reduced operator is κ times the 1-D one with ground state |sin r|^α
    let r = 0.7;
    let psi = |r: f64| r.sin().abs().powi(2);
    let d2 = (psi(r + 1e-4) - 2.0 * psi(r) + psi(r - 1e-4)) / 1e-8;
    assert!((-2.0 * d2 + red.potential(r) * psi(r)).abs() < 1e-5);
}

#[test]
fn free_relative_motion() {
    let red = two_body_reduction(&cs(2, 1.0).with_alpha(0.0)).unwrap();
    assert!(red.potential(0.4).abs() < 1e-14);
    let err = two_body_reduction(&cs(3, 1.0)).unwrap_err();
    assert!(matches!(err, Error::Domain(_)));
    let cal = NBodyModel::new(ModelKind::Calogero, 2, 2.0, None).unwrap();
    assert!(matches!(two_body_reduction(&cal), Err(Error::Unsupported(_))));
}

#[test]
fn harmonic_reduction_levels() {
    let model = NBodyModel::new(ModelKind::HarmonicCalogero, 2, 2.0, Some(1.0)).unwrap();
    let red = two_body_reduction(&model).unwrap();
    let beta = model.beta();
    let alg = red.algebraic_levels(4);
    for (n, e) in alg.iter().enumerate() {
        assert!((e - 8.0 * beta * n as f64).abs() < 1e-12);
    }
    let cmp = red.compare(3000, 4, 4).unwrap();
    assert!(cmp.max_relative < 1e-3, "{cmp:?}");
}

#[test]
fn partner_energies() {
    assert_eq!(partner_ground_state(&cs(2, 1.0)).unwrap().energy, 6.0);
    assert_eq!(partner_ground_state(&cs(3, 1.0)).unwrap().energy, 24.0);
    let cal = NBodyModel::new(ModelKind::Calogero, 3, 1.5, None).unwrap();
    let p = partner_ground_state(&cal).unwrap();
    assert_eq!(p.energy, 0.0);
    assert_eq!(p.alpha_next, 2.5);
    assert_eq!(p.normalizability, Normalizability::NonNormalizable);
    assert!(p.warning.is_some());

    let model = NBodyModel::new(ModelKind::HarmonicCalogero, 3, 1.0, Some(2.0)).unwrap();
    let p = partner_ground_state(&model).unwrap();
    let beta = model.beta();
    assert_eq!(p.energy_source, "fitted");
    assert!((p.energy - beta * 3.0 * 2.0 * 5.0).abs() < 1e-8, "{}", p.energy);
}

#[test]
fn cs_partner_lowest_level_on_grid() {
    let red = two_body_reduction(&cs(2, 1.0)).unwrap();
    let levels = red.partner_grid_levels(2000, 4, 1).unwrap();
    assert!((levels[0] - 6.0).abs() < 6e-3, "{levels:?}");
}

#[test]
fn cs_isospectrality() {
    let grid = GridSpec::line(0.0, PI, 2000).unwrap();
    let rep = isospectrality_check(&cs(2, 1.0), &grid, 4, 4, 1e-3).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert_eq!(rep.remainder, 6.0);
    assert!(max_relative(&rep.original_excited, &rep.partner) < 1e-3);
}

#[test]
fn rosen_morse_isospectrality() {
    let p = Prepotential1D::RosenMorseTrig { b: 2.0, a: 1.0 };
    let grid = GridSpec::line(0.0, PI, 2000).unwrap();
    let rep = isospectrality_1d(&p, &grid, 4, 4, 1e-3).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert_eq!(rep.remainder, 5.0);
    for (got, want) in rep.partner.iter().zip([5.0, 12.0, 21.0, 32.0]) {
        assert!((got - want).abs() < 1e-3 * want);
    }
}

#[test]
fn trivial_isospectrality_is_exact() {
    let p = Prepotential1D::RationalHarmonic { a: 1.0, b: 0.0 };
    let grid = GridSpec::line(-12.0, 12.0, 800).unwrap();
    let rep = isospectrality_1d(&p, &grid, 2, 3, 1e-9).unwrap();
    // x² ± 1 differ by a constant, so the grid spectra match to round-off
    assert!(max_relative(&rep.shifted_plus_remainder, &rep.partner) < 1e-9, "{rep:?}");
}

#[test]
fn periodic_nbody_requires_reduction() {
    let grid = GridSpec::new(vec![Axis { min: 0.0, max: PI, m: 16 }; 3], Boundary::Periodic, Sector::Full).unwrap();
    assert!(matches!(isospectrality_check(&cs(3, 1.0), &grid, 2, 2, 1e-3), Err(Error::Unsupported(_))));
}

#[test]
fn cs_jastrow_is_sine_of_gap() {
    let model = cs(2, 1.0);
    let grid = GridSpec::ordered(2, 0.0, PI, 60).unwrap();
    let gs = jastrow_ground_state(&model, &grid, 4).unwrap();
    let ratio: Vec<f64> = (0..gs.layout.len())
        .map(|k| {
            let x = gs.layout.coordinates(k);
            gs.values[k] / (x[0] - x[1]).sin().abs()
        })
        .collect();
    assert!(ratio.iter().all(|r| (r - ratio[0]).abs() < 1e-10 * ratio[0]));
    assert_eq!(gs.normalizability, Normalizability::Normalizable);
    assert!(gs.warning.is_none());
    assert!(gs.jet_residual < 1e-10);
}

#[test]
fn calogero_three_body_jastrow() {
    let model = NBodyModel::new(ModelKind::Calogero, 3, 2.0, None).unwrap();
    let grid = GridSpec::ordered(3, -2.0, 2.0, 24).unwrap();
    let gs = jastrow_ground_state(&model, &grid, 2).unwrap();
    assert!(gs.interior_nodes > 0);
    assert!(gs.jet_residual < 1e-8, "{}", gs.jet_residual);
    assert_eq!(gs.normalizability, Normalizability::NonNormalizable);
    assert!(gs.warning.is_some());
}

#[test]
fn jastrow_grid_residual_converges() {
    for (model, lo, hi) in [
        (cs(2, 2.0), 0.0, PI),
        (NBodyModel::new(ModelKind::HarmonicCalogero, 2, 2.0, Some(1.0)).unwrap(), -2.0, 2.0),
    ] {
        let res: Vec<f64> = [200usize, 400, 800]
            .iter()
            .map(|&m| jastrow_ground_state(&model, &GridSpec::ordered(2, lo, hi, m).unwrap(), 2).unwrap().grid_residual)
            .collect();
        for w in res.windows(2) {
            assert!((w[0] / w[1]).log2() >= 1.9, "{res:?}");
        }
    }
}

#[test]
fn small_coupling_is_flagged() {
    let gs = jastrow_ground_state(&cs(2, 0.5), &GridSpec::ordered(2, 0.0, PI, 20).unwrap(), 2).unwrap();
    assert!(gs.warning.is_some());
}

#[test]
fn dumps_and_csv() {
    let grid = GridSpec::line(0.0, 1.0, 10).unwrap();
    let pot = |_: f64| 0.0;
    let h = discretize(&PotentialSource::Line { potential: &pot, kinetic: 1.0, label: String::new() }, &grid, 2).unwrap();
    let r = eigen(&h.matrix, 2).unwrap();
    let dump = grid_dump(&h.layout, &r.vectors);
    assert!(dump.starts_with("# dimension 1\n# axis 0 min 0 max 1 M 10\n"));
    assert_eq!(dump.lines().filter(|l| !l.starts_with('#')).count(), 10);
    assert!(r.to_csv().starts_with("index,lambda,residual\n0,"));
}
