use std::f64::consts::{PI, TAU};

use billiards_core::diagnostics::{
    generating_residuals, jacobian_determinant, reversibility_residual, twist_derivative, FD_STEP,
};
use billiards_core::spectral::peak_to_peak;
use billiards_core::{
    breakup_verdict, find_resonance, first_order_check, iterate, melnikov_potential, momentum_of,
    rotation_number, subharmonic_potential, validate_oval, BilliardState, LiftedOrbit, Mode, Oval,
    RadialCurve, Resonance, Stepper,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::ExperimentConfig;
use crate::output::{fmt_float, OutputDir, Table};
use crate::{Operation, RunError};

/// Sampling grid used to certify convexity of the configured oval.
pub const OVAL_GRID: usize = billiards_core::curves::DEFAULT_OVAL_GRID;
/// Random phase-space points visited by the invariant checks of `verify`.
pub const INVARIANT_SAMPLES: usize = 24;
/// Distance of the sampled angles `ψ` from the tangential directions.
pub const PSI_MARGIN: f64 = 0.1;

type Scalars = Map<String, Value>;

fn scalars(value: Value) -> Scalars {
    match value {
        Value::Object(map) => map,
        _ => unreachable!("scalars are built from object literals"),
    }
}

fn oval_of(curve: RadialCurve) -> Result<Oval, RunError> {
    validate_oval(curve, OVAL_GRID).op("curves::validate_oval")
}

fn resonance_of(config: &ExperimentConfig) -> Result<Resonance, RunError> {
    let idx = config.require_resonance()?;
    find_resonance(idx.m, idx.n, config.rho0, config.kind()).op("melnikov::find_resonance")
}

fn modes_json(modes: &[Mode]) -> Value {
    modes
        .iter()
        .map(|m| json!({"j": m.j, "re": m.coef.re, "im": m.coef.im}))
        .collect()
}

pub fn orbit(config: &ExperimentConfig, dir: &mut OutputDir) -> Result<Scalars, RunError> {
    let psi0 = config.require_psi0()?;
    let oval = oval_of(config.curve())?;
    let start = BilliardState::new(config.theta0, psi0).op("billiard::BilliardState::new")?;
    let orbit = iterate(&oval, start, config.steps, Stepper::Generic).op("billiard::iterate")?;

    let mut table = Table::new(&["k", "theta", "psi", "lifted_theta", "y"]);
    for (k, (s, lifted)) in orbit.states.iter().zip(&orbit.lifted_theta).enumerate() {
        let y = momentum_of(&oval, *s).y;
        table.push(vec![
            k.to_string(),
            fmt_float(s.theta),
            fmt_float(s.psi),
            fmt_float(*lifted),
            fmt_float(y),
        ]);
    }
    dir.csv("orbit.csv", &table)?;

    let psi = orbit.states.iter().map(|s| s.psi);
    let psi_min = psi.clone().fold(f64::INFINITY, f64::min);
    let psi_max = psi.fold(f64::NEG_INFINITY, f64::max);
    let rotation = rotation_number(&orbit).ok();
    Ok(scalars(json!({
        "bounces": config.steps,
        "rotation_number": rotation,
        "psi_min": psi_min,
        "psi_max": psi_max,
        "curvature_margin": oval.curvature_margin(),
    })))
}

/// Initial angles of the phase portrait: `ψ_i = π(i + ½)/count`.
pub fn portrait_angles(count: usize) -> Vec<f64> {
    (0..count).map(|i| PI * (i as f64 + 0.5) / count as f64).collect()
}

pub fn phase_portrait(config: &ExperimentConfig, dir: &mut OutputDir) -> Result<Scalars, RunError> {
    let oval = oval_of(config.curve())?;
    let angles = portrait_angles(config.grid);
    let orbits: Vec<LiftedOrbit> = angles
        .par_iter()
        .map(|&psi| {
            let start = BilliardState::new(config.theta0, psi)?;
            iterate(&oval, start, config.steps, Stepper::Generic)
        })
        .collect::<billiards_core::Result<_>>()
        .op("billiard::iterate")?;

    let mut table = Table::new(&["orbit_id", "k", "theta", "psi"]);
    let mut max_variation: f64 = 0.0;
    for (id, orbit) in orbits.iter().enumerate() {
        let psi: Vec<f64> = orbit.states.iter().map(|s| s.psi).collect();
        max_variation = max_variation.max(peak_to_peak(&psi));
        for (k, s) in orbit.states.iter().enumerate() {
            table.push(vec![id.to_string(), k.to_string(), fmt_float(s.theta), fmt_float(s.psi)]);
        }
    }
    dir.csv("phase_portrait.csv", &table)?;
    Ok(scalars(json!({
        "orbits": orbits.len(),
        "bounces_per_orbit": config.steps,
        "max_psi_variation": max_variation,
    })))
}

pub fn melnikov(config: &ExperimentConfig, dir: &mut OutputDir) -> Result<Scalars, RunError> {
    let res = resonance_of(config)?;
    let result =
        melnikov_potential(&res, &config.curve(), config.grid).op("melnikov::melnikov_potential")?;
    let verdict = breakup_verdict(&result);

    let mut table = Table::new(&["theta", "l1"]);
    for (t, v) in result.thetas.iter().zip(&result.values) {
        table.push(vec![fmt_float(*t), fmt_float(*v)]);
    }
    dir.csv("melnikov_l1.csv", &table)?;

    Ok(scalars(json!({
        "C": result.constant,
        "verdict": verdict.as_str(),
        "resonant_modes": modes_json(&result.resonant_modes),
        "l1_modes": modes_json(&result.fourier),
        "l1_peak_to_peak": peak_to_peak(&result.values),
        "m": res.m,
        "n": res.n,
        "psi_resonance": res.psi,
        "l0": res.l0,
    })))
}

struct InvariantSample {
    theta: f64,
    psi: f64,
    first: f64,
    second: f64,
    chain: f64,
    det: f64,
    reversibility: f64,
    twist: f64,
}

fn invariant_sample(oval: &Oval, theta: f64, psi: f64) -> Result<InvariantSample, RunError> {
    let state = BilliardState::new(theta, psi).op("billiard::BilliardState::new")?;
    let g = generating_residuals(oval, state, FD_STEP).op("diagnostics::generating_residuals")?;
    Ok(InvariantSample {
        theta: state.theta,
        psi,
        first: g.first,
        second: g.second,
        chain: g.chain,
        det: jacobian_determinant(oval, state, FD_STEP).op("diagnostics::jacobian_determinant")?,
        reversibility: reversibility_residual(oval, state).op("diagnostics::reversibility_residual")?,
        twist: twist_derivative(oval, state, FD_STEP).op("diagnostics::twist_derivative")?,
    })
}

/// Perturbation size of the oval examined by the invariant checks.
pub fn verify_epsilon(config: &ExperimentConfig) -> f64 {
    if config.epsilon != 0.0 {
        config.epsilon
    } else {
        config.eps_list[0]
    }
}

pub fn verify(config: &ExperimentConfig, dir: &mut OutputDir) -> Result<Scalars, RunError> {
    let res = resonance_of(config)?;
    let report = first_order_check(&config.family(), &res, &config.eps_list, config.grid)
        .op("melnikov::first_order_check")?;

    let mut header = vec!["theta".to_string(), "reference".to_string()];
    header.extend((0..report.levels.len()).map(|i| format!("scaled_{i}")));
    let mut table = Table::new(&header);
    for (i, t) in report.thetas.iter().enumerate() {
        let mut row = vec![fmt_float(*t), fmt_float(report.reference[i])];
        row.extend(report.levels.iter().map(|l| fmt_float(l.scaled[i])));
        table.push(row);
    }
    dir.csv("verify_first_order.csv", &table)?;

    let mut levels = Table::new(&["level", "epsilon", "error", "peak_to_peak", "sup", "noise", "amplitude"]);
    for (i, l) in report.levels.iter().enumerate() {
        levels.push(vec![
            i.to_string(),
            fmt_float(l.epsilon),
            fmt_float(l.error),
            fmt_float(l.peak_to_peak),
            fmt_float(l.sup),
            fmt_float(l.noise),
            l.amplitude.map(fmt_float).unwrap_or_default(),
        ]);
    }
    dir.csv("verify_levels.csv", &levels)?;

    let epsilon = verify_epsilon(config);
    let curve = config.family().with_epsilon(epsilon).op("curves::RadialCurve::new")?;
    let oval = oval_of(curve)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let points: Vec<(f64, f64)> = (0..INVARIANT_SAMPLES)
        .map(|_| (rng.gen_range(0.0..TAU), rng.gen_range(PSI_MARGIN..PI - PSI_MARGIN)))
        .collect();
    let samples: Vec<InvariantSample> = points
        .par_iter()
        .map(|&(t, p)| invariant_sample(&oval, t, p))
        .collect::<Result<_, _>>()?;

    let mut inv = Table::new(&[
        "sample",
        "theta",
        "psi",
        "generating_first",
        "generating_second",
        "generating_chain",
        "jacobian_det",
        "reversibility",
        "twist",
    ]);
    for (i, s) in samples.iter().enumerate() {
        inv.push(vec![
            i.to_string(),
            fmt_float(s.theta),
            fmt_float(s.psi),
            fmt_float(s.first),
            fmt_float(s.second),
            fmt_float(s.chain),
            fmt_float(s.det),
            fmt_float(s.reversibility),
            fmt_float(s.twist),
        ]);
    }
    dir.csv("verify_invariants.csv", &inv)?;

    let potential =
        subharmonic_potential(&oval, &res, config.grid).op("melnikov::subharmonic_potential")?;
    let mut sep = Table::new(&["theta", "l", "h", "h_star"]);
    for i in 0..potential.thetas.len() {
        sep.push(vec![
            fmt_float(potential.thetas[i]),
            fmt_float(potential.l_values[i]),
            fmt_float(potential.h_values[i]),
            fmt_float(potential.h_star_values[i]),
        ]);
    }
    dir.csv("verify_separation.csv", &sep)?;

    let max = |f: fn(&InvariantSample) -> f64| samples.iter().map(f).fold(0.0, f64::max);
    Ok(scalars(json!({
        "order": report.order,
        "C": report.constant,
        "fitted_C": report.fitted_constant(),
        "error_ratios": report.error_ratios(),
        "eps_list": config.eps_list,
        "invariant_epsilon": epsilon,
        "residuals": {
            "generating_first": max(|s| s.first.abs()),
            "generating_second": max(|s| s.second.abs()),
            "generating_chain": max(|s| s.chain.abs()),
            "jacobian_det": max(|s| (s.det - 1.0).abs()),
            "reversibility": max(|s| s.reversibility),
            "twist_min": samples.iter().map(|s| s.twist).fold(f64::INFINITY, f64::min),
            "separation": potential.separation_error(),
        },
    })))
}
