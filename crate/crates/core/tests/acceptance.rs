//! End-to-end acceptance run: one PASS/FAIL line per criterion, then a
//! single assertion over all of them.

use std::f64::consts::PI;
use std::time::Instant;

use num_rational::Ratio;
use shapeinv::models::{check_pair_condition, ModelKind, NBodyModel, PairPrepotential, Prepotential1D};
use shapeinv::shape1d::algebraic_spectrum;
use shapeinv::spectral::*;
use shapeinv::susy::*;
use shapeinv::verify::*;
use shapeinv::Model;

type Outcome = (bool, String);

fn model(kind: ModelKind, n: usize, alpha: f64) -> Model {
    let omega = (kind == ModelKind::HarmonicCalogero).then_some(1.0);
    NBodyModel::new(kind, n, alpha, omega).unwrap()
}

fn rosen_morse_algebraic() -> Outcome {
    let mut worst = 0.0f64;
    for (b, a) in [(2.0, 1.0), (1.5, 0.5), (3.0, 2.0), (1.0, 1.0)] {
        let chain = algebraic_spectrum(&Prepotential1D::RosenMorseTrig { b, a }, 10);
        for (n, e) in chain.energies.iter().enumerate() {
            let want = (b + n as f64 * a).powi(2) - b * b;
            worst = worst.max((e - want).abs() / want.max(1.0));
        }
    }
    let exact = algebraic_spectrum(&Prepotential1D::RosenMorseTrig { b: Ratio::new(7i64, 3), a: Ratio::new(1, 2) }, 10);
    let rational_ok = exact.energies.iter().enumerate().all(|(n, e)| {
        let bn = Ratio::new(7i64, 3) + Ratio::new(n as i64, 2);
        *e == bn * bn - Ratio::new(49, 9)
    });
    (worst <= 1e-12 && rational_ok, format!("max relative deviation {worst:.1e}, exact rationals {rational_ok}"))
}

fn line_levels(p: Prepotential1D<f64>, k: usize) -> Vec<f64> {
    let grid = GridSpec::line(0.0, PI, 2000).unwrap();
    let pot = move |x: f64| p.potential(x);
    let h = discretize(&PotentialSource::Line { potential: &pot, kinetic: 1.0, label: "rm".into() }, &grid, 4).unwrap();
    eigen(&h.matrix, k).unwrap().values
}

fn rosen_morse_grid() -> Outcome {
    let p = Prepotential1D::RosenMorseTrig { b: 2.0, a: 1.0 };
    let alg = algebraic_spectrum(&p, 4).energies;
    let rm = max_relative(&alg, &line_levels(p, 5));
    let boxed: Vec<f64> = (1..=5).map(|k| (k * k - 1) as f64).collect();
    let bx = max_relative(&boxed, &line_levels(Prepotential1D::RosenMorseTrig { b: 1.0, a: 1.0 }, 5));
    (rm <= 1e-3 && bx <= 1e-3, format!("b=2 a=1 worst {rm:.1e}, box worst {bx:.1e}"))
}

fn factorization() -> Outcome {
    let mut worst = 0.0f64;
    let mut all = true;
    for kind in [ModelKind::Calogero, ModelKind::CalogeroSutherland] {
        for n in 2..=6 {
            for alpha in [1.0, 1.5, 2.0, 3.0] {
                let r = factorization_residual(&model(kind, n, alpha), 100, n as u64);
                worst = worst.max(r.max_residual);
                all &= r.pass;
            }
        }
    }
    (all && worst < 1e-8, format!("40 models, worst relative residual {worst:.1e}"))
}

fn shape_invariance() -> Outcome {
    let mut worst = 0.0f64;
    let mut all = true;
    for kind in [ModelKind::Calogero, ModelKind::CalogeroSutherland] {
        for n in 2..=5 {
            for alpha in [1.0, 2.0] {
                let r = shape_invariance_residual(&model(kind, n, alpha), 100, 20 + n as u64);
                worst = worst.max(r.max_residual);
                all &= r.pass;
                if kind == ModelKind::Calogero {
                    all &= r.details["remainder_used"].as_f64() == Some(0.0);
                }
            }
        }
    }
    let r = shape_invariance_residual(&model(ModelKind::CalogeroSutherland, 3, 1.0), 100, 4);
    let remainder = r.details["remainder_used"].as_f64().unwrap();
    all &= (remainder - 24.0).abs() < 1e-12;
    (all && worst < 1e-8, format!("worst residual {worst:.1e}, R(N=3, alpha=1) = {remainder}"))
}

fn structural() -> Outcome {
    let mut worst = 0.0f64;
    let mut all = true;
    for kind in [ThreeBodyKind::Rational, ThreeBodyKind::Trigonometric] {
        let r = sampled_three_body(kind, 1000, 5);
        worst = worst.max(r.max_residual);
        all &= r.pass;
    }
    for kind in [ModelKind::Calogero, ModelKind::CalogeroSutherland, ModelKind::HarmonicCalogero] {
        let r = structural_identities(&model(kind, 4, 1.5), 1000, 6);
        worst = worst.max(r.max_residual);
        all &= r.pass;
    }
    (all && worst < 1e-12, format!("worst residual {worst:.1e} over 1000 samples each"))
}

fn constant_fit() -> Outcome {
    let mut all = true;
    let mut notes = Vec::new();
    for (n, alpha) in [(2usize, 1.0), (3, 1.0), (4, 2.0), (5, 1.5)] {
        let f = constant_fit_diagnostic(&model(ModelKind::CalogeroSutherland, n, alpha), 100, 8);
        let nn = n as f64;
        let want = -alpha * alpha * nn * (nn * nn - 1.0) / 3.0;
        all &= f.pass && (f.fitted_constant - want).abs() < 1e-8;
        if alpha == 1.0 {
            notes.push(format!("N={n}: {:.10}", f.fitted_constant));
        }
    }
    let cal = constant_fit_diagnostic(&model(ModelKind::Calogero, 4, 2.0), 100, 8);
    all &= cal.pass;
    let hc = constant_fit_diagnostic(&model(ModelKind::HarmonicCalogero, 3, 1.5), 200, 8);
    all &= hc.pass && hc.fitted_quadratic.is_some();
    notes.push(format!(
        "harmonic constant {:.6} quadratic {:.6} (reported only)",
        hc.fitted_constant,
        hc.fitted_quadratic.unwrap_or(f64::NAN)
    ));
    (all, notes.join(", "))
}

fn ground_states() -> Outcome {
    let mut worst = 0.0f64;
    for kind in [ModelKind::Calogero, ModelKind::CalogeroSutherland] {
        for n in 2..=4 {
            for alpha in [1.0, 2.0] {
                let m = [0, 0, 64, 24, 12][n];
                let grid = match kind {
                    ModelKind::CalogeroSutherland => GridSpec::ordered(n, 0.0, PI, m),
                    _ => GridSpec::ordered(n, -3.0, 3.0, m),
                }
                .unwrap();
                let gs = jastrow_ground_state(&model(kind, n, alpha), &grid, 2).unwrap();
                worst = worst.max(gs.jet_residual);
            }
        }
    }
    let partner = partner_ground_state(&model(ModelKind::CalogeroSutherland, 2, 1.0)).unwrap();
    let red = two_body_reduction(&model(ModelKind::CalogeroSutherland, 2, 1.0)).unwrap();
    let grid_e = red.partner_grid_levels(2000, 4, 1).unwrap()[0];
    let rel = (grid_e - partner.energy).abs() / partner.energy;
    (
        worst < 1e-8 && partner.energy == 6.0 && rel <= 1e-3,
        format!("worst jet residual {worst:.1e}, partner energy {} vs grid {grid_e:.6}", partner.energy),
    )
}

fn reduction() -> Outcome {
    let mut worst = 0.0f64;
    for alpha in [1.0, 2.0, 3.0] {
        let red = two_body_reduction(&model(ModelKind::CalogeroSutherland, 2, alpha)).unwrap();
        worst = worst.max(red.compare(2000, 4, 4).unwrap().max_relative);
    }
    (worst <= 1e-3, format!("lowest 4 levels, worst relative error {worst:.1e}"))
}

fn susy() -> Outcome {
    let cs = model(ModelKind::CalogeroSutherland, 2, 1.0);
    let mut all = true;
    let mut spectra = Vec::new();
    let mut q2 = 0.0f64;
    let mut mismatch = 0.0f64;
    for variant in [Variant::S1, Variant::S2] {
        let sys = build_susy(&cs, variant, &SusyOptions::default()).unwrap();
        q2 = q2.max(sys.q_squared());
        all &= sys.off_block_max() == 0.0;
        let sp = sector_spectra(&sys, 6).unwrap();
        let rep = kernel_classify(&sp);
        mismatch = mismatch.max(rep.pairing_mismatch);
        all &= rep.pairing_counts_match;
        spectra.push(sp);
    }
    let s1 = &spectra[0];
    let bosonic = s1.sectors[0].values[0];
    let filled = s1.sectors[2].values[0];
    let cmp = compare_variants(&spectra[0], &spectra[1]);
    all &= q2 < 1e-12 && mismatch < 1e-6;
    all &= (bosonic - 6.0).abs() < 1e-2 && filled.abs() < 1e-2;
    all &= cmp.empty_spread < 1e-2 && cmp.one_fermion_distance > 0.1;
    (
        all,
        format!(
            "|Q^2| {q2:.1e}, pairing {mismatch:.1e}, minima {bosonic:.4}/{filled:.1e}, variant shift {:.4} spread {:.1e}",
            cmp.empty_shift, cmp.empty_spread
        ),
    )
}

fn pair_equation() -> Outcome {
    let rows = [
        PairPrepotential::RationalHarmonic { a: 0.7, b: 1.3 },
        PairPrepotential::Sign { a: 1.1 },
        PairPrepotential::Cot { a: 2.0 },
        PairPrepotential::Coth { a: 0.8 },
    ];
    let worst = rows.iter().map(|p| check_pair_condition(p, 1000, 10).max_residual).fold(0.0, f64::max);
    (worst < 1e-10, format!("four rows, worst residual {worst:.1e}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("rosen-morse algebraic spectrum", rosen_morse_algebraic),
        ("rosen-morse grid spectrum and box", rosen_morse_grid),
        ("factorization identity", factorization),
        ("n-body shape invariance", shape_invariance),
        ("structural identities", structural),
        ("constant diagnostics", constant_fit),
        ("ground states and partner energy", ground_states),
        ("two-body reduction", reduction),
        ("supersymmetric sectors", susy),
        ("pair functional equation", pair_equation),
    ];
    let mut failed = Vec::new();
    println!();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = run();
        let secs = start.elapsed().as_secs_f64();
        println!("{} {:>2} {name}: {detail} [{secs:.2}s]", if pass { "PASS" } else { "FAIL" }, i + 1);
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria {failed:?}");
}
