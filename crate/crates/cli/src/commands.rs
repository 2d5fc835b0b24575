use std::f64::consts::PI;

use serde_json::{json, Value};
use shapeinv::config::KeyValues;
use shapeinv::models::{Family1D, ModelKind, MODEL_KEYS};
use shapeinv::shape1d::{algebraic_spectrum, wavefunction_chain, Grid1D, MAX_CHAIN};
use shapeinv::spectral::{
    discretize, eigen_with, grid_dump, jastrow_ground_state, partner_ground_state, two_body_reduction, EigenOptions,
    GridSpec, ModelOperator, PotentialSource,
};
use shapeinv::susy::{
    build_susy, compare_variants, kernel_classify, sector_spectra, sector_sum_check, SectorSpectra, SusyOptions,
    SusySystem, Variant,
};
use shapeinv::verify::{run_suite, Tolerances, VerifyOptions};
use shapeinv::{Model, Prepotential};

use crate::args::{ChainArgs, GroundArgs, SpectrumArgs, SusyArgs, VerifyArgs};
use crate::output::{show, Run};
use crate::Failure;

fn keys(extra: &[&'static str], with_model: bool) -> Vec<&'static str> {
    let mut k: Vec<&'static str> = extra.to_vec();
    if with_model {
        k.extend_from_slice(MODEL_KEYS);
    }
    k
}

/// Model keys of the config over `defaults`.
fn model_with(run: &Run, defaults: &[(&str, &str)]) -> Result<Model, Failure> {
    let mut kv = KeyValues::new();
    for (k, v) in defaults {
        kv.set(k, v);
    }
    for k in MODEL_KEYS {
        if let Some(v) = run.config.get(k) {
            kv.set(k, v);
        }
    }
    Ok(Model::from_key_values(&kv)?)
}

fn model_from(run: &Run) -> Result<Model, Failure> {
    model_with(run, &[("n", "3"), ("alpha", "1")])
}

fn family_from(run: &Run) -> Result<Prepotential, Failure> {
    let family = Family1D::parse(run.config.get("family").unwrap_or("rosen_morse"))?;
    let params = family
        .param_names()
        .iter()
        .map(|&name| run.get(name, 1.0))
        .collect::<Result<Vec<f64>, Failure>>()?;
    Ok(Prepotential::new(family, &params)?)
}

fn line_domain(prep: &Prepotential, extent: f64) -> (f64, f64) {
    let (lo, hi) = prep.natural_domain();
    (lo.max(-extent), hi.min(extent))
}

fn rel_error(exact: f64, got: f64) -> f64 {
    (got - exact).abs() / exact.abs().max(1.0)
}

pub fn verify(args: &VerifyArgs) -> Result<bool, Failure> {
    let run = Run::load(args, &keys(&["trials", "seed", "tol"], true))?;
    let model = model_from(&run)?;
    let trials: usize = run.get("trials", 100)?;
    let seed: u64 = run.get("seed", 0)?;
    let mut opts = VerifyOptions::default();
    if let Some(t) = run.opt::<f64>("tol")? {
        if !(t > 0.0) {
            return Err(Failure::Config(format!("tol must be positive, got {t}")));
        }
        opts.tolerances = Tolerances::uniform(t);
    }
    let reports = run_suite(&model, trials, seed, &opts);
    let mut pass = true;
    for r in &reports {
        println!("{}", r.summary());
        let value = serde_json::to_value(r).expect("report serializes");
        show(&run.write_json(&format!("{}.json", r.identity), value)?);
        pass &= r.pass;
    }
    Ok(pass)
}

pub fn spectrum(args: &SpectrumArgs) -> Result<bool, Failure> {
    let allowed = keys(&["family", "a", "b", "nmax", "grid", "order", "extent", "tol", "reduce", "plot"], true);
    let run = Run::load(args, &allowed)?;
    let has_family = run.config.get("family").is_some();
    let has_model = run.config.get("kind").is_some();
    match (has_family, has_model) {
        (true, true) => Err(Failure::Config("give either `family` or `kind`, not both".into())),
        (false, true) => spectrum_nbody(&run),
        _ => spectrum_1d(&run),
    }
}

fn spectrum_1d(run: &Run) -> Result<bool, Failure> {
    let prep = family_from(run)?;
    if prep.family() == Family1D::Sign {
        return Err(Failure::Config("the sign family carries a delta spike that grids do not resolve".into()));
    }
    let nmax: usize = run.get("nmax", 5)?;
    let m: usize = run.get("grid", 2000)?;
    let order: usize = run.get("order", 4)?;
    let tol: f64 = run.get("tol", 1e-3)?;
    let (lo, hi) = line_domain(&prep, run.get("extent", 10.0)?);
    if nmax == 0 {
        return Err(Failure::Config("nmax must be at least 1".into()));
    }
    let chain = algebraic_spectrum(&prep, nmax - 1);
    let bound = chain.bound_levels();
    let grid = GridSpec::line(lo, hi, m)?;
    let pot = |x: f64| prep.potential(x);
    let h = discretize(&PotentialSource::Line { potential: &pot, kinetic: 1.0, label: prep.family().name().into() }, &grid, order)?;
    let res = eigen_with(&h.matrix, nmax, &EigenOptions::default())?;
    let mut csv = String::from("index,algebraic,grid,rel_error,residual\n");
    let mut pass = true;
    for i in 0..nmax {
        let (alg, err) = if i < bound {
            let e = rel_error(chain.energies[i], res.values[i]);
            pass &= e <= tol;
            (format!("{}", chain.energies[i]), format!("{e}"))
        } else {
            (String::new(), String::new())
        };
        csv.push_str(&format!("{i},{alg},{},{err},{}\n", res.values[i], res.residuals[i]));
        println!("n={i} algebraic={alg:<22} grid={:<22} rel_error={err}", res.values[i]);
    }
    show(&run.write_text("spectrum.csv", &csv)?);
    if run.flag("plot")? {
        show(&run.write_text("wavefunctions.txt", &grid_dump(&h.layout, &res.vectors))?);
    }
    Ok(pass)
}

fn spectrum_nbody(run: &Run) -> Result<bool, Failure> {
    let model = model_from(run)?;
    let nmax: usize = run.get("nmax", 4)?;
    let order: usize = run.get("order", 4)?;
    let tol: f64 = run.get("tol", 1e-3)?;
    if run.flag("reduce")? {
        let red = two_body_reduction(&model)?;
        let cmp = red.compare(run.get("grid", 2000)?, order, nmax)?;
        let mut csv = String::from("index,algebraic,grid,rel_error\n");
        for (i, (a, g)) in cmp.algebraic.iter().zip(&cmp.grid).enumerate() {
            csv.push_str(&format!("{i},{a},{g},{}\n", rel_error(*a, *g)));
            println!("n={i} algebraic={a:<22} grid={g:<22} rel_error={}", rel_error(*a, *g));
        }
        println!("reduced operator: {}", red.description);
        show(&run.write_text("spectrum.csv", &csv)?);
        return Ok(cmp.max_relative <= tol);
    }
    if model.kind().is_periodic() {
        return Err(Failure::Config("periodic models are solved through the two-particle reduction; add --reduce".into()));
    }
    let extent: f64 = run.get("extent", 4.0)?;
    let grid = GridSpec::ordered(model.n(), -extent, extent, run.get("grid", 40)?)?;
    let h = discretize(&PotentialSource::Model { model: &model, operator: ModelOperator::Direct }, &grid, order)?;
    let res = eigen_with(&h.matrix, nmax, &EigenOptions::default())?;
    let mut csv = String::from("index,lambda,residual\n");
    for (i, (l, r)) in res.values.iter().zip(&res.residuals).enumerate() {
        csv.push_str(&format!("{i},{l},{r}\n"));
        println!("n={i} lambda={l}");
    }
    show(&run.write_text("spectrum.csv", &csv)?);
    if run.flag("plot")? {
        show(&run.write_text("wavefunctions.txt", &grid_dump(&h.layout, &res.vectors))?);
    }
    Ok(true)
}

fn susy_summary(sys: &SusySystem, sp: &SectorSpectra, tag: &str, run: &Run) -> Result<bool, Failure> {
    let kernels = kernel_classify(sp);
    let sums = sector_sum_check(sys, sp, 3);
    let q2 = sys.q_squared();
    let off = sys.off_block_max();
    let (hq, hqd) = sys.commutators();
    let scale = sys.h.norm_inf() * sys.q.norm_inf();
    let mixed: usize = kernels.sectors.iter().map(|c| c.mixed).sum();
    let pass = q2 < 1e-12
        && off == 0.0
        && hq.max(hqd) <= 1e-10 * scale
        && kernels.pairing_counts_match
        && kernels.pairing_mismatch < 1e-6
        && mixed == 0
        && sums.all_classified;
    let lowest = sp.lowest();
    for (f, l) in lowest.iter().enumerate() {
        println!("{tag} sector {f}: {l:?}");
    }
    println!("{tag} |Q^2|={q2:.3e} pairing_mismatch={:.3e} {}", kernels.pairing_mismatch, if pass { "PASS" } else { "FAIL" });
    show(&run.write_text(&format!("sectors_{tag}.csv"), &sp.to_csv())?);
    let report = json!({
        "variant": tag,
        "model": sys.model.descriptor(),
        "dimension": sys.dim,
        "q_squared_max": q2,
        "off_block_max": off,
        "commutator_hq": hq,
        "commutator_hqdag": hqd,
        "lowest": lowest,
        "kernels": kernels,
        "sector_sums": sums,
        "pass": pass,
    });
    show(&run.write_json(&format!("susy_{tag}.json"), report)?);
    Ok(pass)
}

pub fn susy(args: &SusyArgs) -> Result<bool, Failure> {
    let run = Run::load(args, &keys(&["variant", "grid", "cm_modes", "k", "rel_extent", "cm_period"], true))?;
    let model = model_with(&run, &[("kind", "cs"), ("n", "2"), ("alpha", "1")])?;
    let variant = run.config.get("variant").unwrap_or("s1").to_ascii_lowercase();
    let variants: Vec<Variant> = match variant.as_str() {
        "both" => vec![Variant::S1, Variant::S2],
        v => vec![Variant::parse(v)?],
    };
    let defaults = SusyOptions::default();
    let opts = SusyOptions {
        m: run.get("grid", defaults.m)?,
        cm_modes: run.get("cm_modes", defaults.cm_modes)?,
        rel_extent: run.get("rel_extent", defaults.rel_extent)?,
        cm_period: run.get("cm_period", defaults.cm_period)?,
    };
    let k: usize = run.get("k", 6)?;
    let mut pass = true;
    let mut spectra = Vec::new();
    for v in &variants {
        let sys = build_susy(&model, *v, &opts)?;
        let sp = sector_spectra(&sys, k)?;
        let tag = if *v == Variant::S1 { "s1" } else { "s2" };
        pass &= susy_summary(&sys, &sp, tag, &run)?;
        spectra.push(sp);
    }
    if spectra.len() == 2 {
        let cmp = compare_variants(&spectra[0], &spectra[1]);
        let report = cmp.to_report(model.descriptor(), 1e-2);
        println!("{}", report.summary());
        pass &= report.pass;
        show(&run.write_json("variant_comparison.json", serde_json::to_value(&report).expect("report serializes"))?);
    }
    Ok(pass)
}

pub fn groundstate(args: &GroundArgs) -> Result<bool, Failure> {
    let run = Run::load(args, &keys(&["grid", "order", "extent", "partner_grid"], true))?;
    let model = model_from(&run)?;
    let n = model.n();
    let default_m = match n {
        2 => 64,
        3 => 24,
        _ => 12,
    };
    let m: usize = run.get("grid", default_m)?;
    let order: usize = run.get("order", 2)?;
    let grid = if model.kind().is_periodic() {
        GridSpec::ordered(n, 0.0, PI, m)?
    } else {
        let e: f64 = run.get("extent", 3.0)?;
        GridSpec::ordered(n, -e, e, m)?
    };
    let gs = jastrow_ground_state(&model, &grid, order)?;
    let partner = partner_ground_state(&model)?;
    let mut pass = gs.jet_residual < 1e-8;
    let mut cross: Value = Value::Null;
    if n == 2 && model.kind() != ModelKind::Calogero {
        let red = two_body_reduction(&model)?;
        let lowest = red.partner_grid_levels(run.get("partner_grid", 2000)?, 4, 1)?[0];
        let err = rel_error(partner.energy, lowest);
        pass &= err <= 1e-3;
        println!("partner lowest level on grid: {lowest} (relative error {err:.3e})");
        cross = json!({ "grid_lowest": lowest, "relative_error": err });
    }
    println!("jet residual {:.3e}, grid residual {:.3e}", gs.jet_residual, gs.grid_residual);
    println!("partner energy R = {} ({}) at alpha = {}", partner.energy, partner.energy_source, partner.alpha_next);
    let partner_note = partner.warning.as_ref().filter(|w| gs.warning.as_ref() != Some(*w));
    for w in gs.warning.iter().chain(partner_note) {
        println!("warning: {w}");
    }
    let report = json!({
        "model": model.descriptor(),
        "jastrow": gs,
        "partner": partner,
        "partner_grid_check": cross,
        "warning": gs.warning.is_some() || partner.warning.is_some(),
        "pass": pass,
    });
    show(&run.write_json("groundstate.json", report)?);
    show(&run.write_text("groundstate.txt", &grid_dump(&gs.layout, &[gs.values.clone()]))?);
    Ok(pass)
}

pub fn chain(args: &ChainArgs) -> Result<bool, Failure> {
    let run = Run::load(args, &["family", "a", "b", "nmax", "grid", "extent", "tol"])?;
    let prep = family_from(&run)?;
    let nmax: usize = run.get("nmax", 4)?;
    if nmax > MAX_CHAIN {
        return Err(Failure::Config(format!("nmax {nmax} exceeds the chain cap {MAX_CHAIN}")));
    }
    let tol: f64 = run.get("tol", 1e-2)?;
    let (lo, hi) = line_domain(&prep, run.get("extent", 10.0)?);
    let grid = Grid1D::dirichlet(lo, hi, run.get("grid", 2048)?)?;
    let mut csv = String::from("n,energy,rayleigh,rel_error,nodes\n");
    let mut pass = true;
    for n in 0..=nmax {
        let state = wavefunction_chain(&prep, n, &grid)?;
        let rq = state.function.rayleigh_quotient(|x| prep.potential(x));
        let err = rel_error(state.energy, rq);
        let nodes = state.function.node_count();
        pass &= err <= tol && nodes == n;
        csv.push_str(&format!("{n},{},{rq},{err},{nodes}\n", state.energy));
        println!("n={n} energy={} rayleigh={rq} nodes={nodes}", state.energy);
        show(&run.write_text(&format!("chain_{n}.txt"), &state.function.to_two_column())?);
    }
    show(&run.write_text("chain.csv", &csv)?);
    Ok(pass)
}
