//! Resonant invariant circles of the circular billiard and their break-up
//! under radial perturbations `ρ_ε = ρ₀ + ε·ρ₁`.
//!
//! Two independent routes are provided:
//!
//! * the closed form `L₁(θ) = C(ρ₀, m, n) · Σ_k ρ₁(θ + 2πmk/n)`
//!   ([`melnikov_potential`]), whose Fourier content decides the verdict;
//! * the subharmonic potential `L_ε` computed from the true perturbed billiard
//!   by continuing the resonant circle ([`subharmonic_potential`]), whose
//!   first-order part is compared against `L₁` in [`first_order_check`].

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::billiard::{bounce, circular_alpha, generating_function, momentum_of, BilliardState, PSI_GUARD};
use crate::curves::{validate_oval, Mode, Oval, RadialCurve, DEFAULT_OVAL_GRID};
use crate::error::{Error, Result};
use crate::geometry::{embed, geodesic_distance, SurfaceKind};
use crate::roots::brent_with_values;
use crate::spectral::{angle_grid, high_mode_amplitude, mean, peak_to_peak, spectral_derivative, sup_norm};

/// A Fourier coefficient counts as nonzero above this magnitude.
pub const MODE_THRESHOLD: f64 = 1e-14;
/// Half-width of the continuation bracket around the resonant angle.
pub const CONTINUATION_BRACKET: f64 = 0.2;
/// Required closing residual of the continued orbit.
pub const CONTINUATION_TOL: f64 = 1e-11;
/// Default number of angles at which potentials are sampled.
pub const DEFAULT_GRID: usize = 256;
/// Largest grid the aliasing guard may double up to.
pub const MAX_GRID: usize = 4096;
/// Coefficients above a quarter of the grid must stay below this.
pub const ALIASING_TOL: f64 = 1e-10;
/// First-order errors below this are numerical noise and carry no order.
pub const ORDER_NOISE_FLOOR: f64 = 1e-9;

/// The `(m, n)`-resonant invariant circle `ψ ≡ ψ^{m/n}` of the circular billiard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub m: u32,
    pub n: u32,
    pub rho0: f64,
    pub kind: SurfaceKind,
    /// Angle with `α(ψ) = 2πm/n`.
    pub psi: f64,
    /// Geodesic length of one chord of the periodic orbit.
    pub l0: f64,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Check `0 < m < n`, `n ≥ 2` and `gcd(m, n) = 1`.
pub fn check_resonance_indices(m: u32, n: u32) -> Result<()> {
    if n < 2 || m == 0 || m >= n {
        return Err(Error::Invalid(format!("resonance ({m}, {n}) needs 0 < m < n and n ≥ 2")));
    }
    if gcd(m, n) != 1 {
        return Err(Error::Invalid(format!("resonance ({m}, {n}) is not in lowest terms")));
    }
    Ok(())
}

/// Solve `α(ψ) = 2πm/n` by bracketing on `(0, π)`.
pub fn find_resonance(m: u32, n: u32, rho0: f64, kind: SurfaceKind) -> Result<Resonance> {
    check_resonance_indices(m, n)?;
    let target = TAU * m as f64 / n as f64;
    let f = |psi: f64| circular_alpha(psi, rho0, kind).map(|a| a - target);
    let (lo, hi) = (1e-12, PI - 1e-12);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::NoSolution { m, n });
    }
    let psi = brent_with_values(|x| f(x).unwrap_or(f64::NAN), lo, flo, hi, fhi, 1e-16, 200)?;
    let l0 = geodesic_distance(embed(rho0, 0.0, kind)?, embed(rho0, target, kind)?)?;
    Ok(Resonance {
        m,
        n,
        rho0,
        kind,
        psi,
        l0,
    })
}

/// `C(ρ₀, m, n)` of the closed-form potential, for the generating function `g = −d`.
///
/// All three surfaces share the sign: a larger radius lengthens every chord
/// and so lowers `g`.
pub fn melnikov_constant(res: &Resonance) -> f64 {
    let s2 = (PI * res.m as f64 / res.n as f64).sin().powi(2);
    let rho0 = res.rho0;
    match res.kind {
        SurfaceKind::Euclidean => -4.0 * rho0 * s2 / res.l0,
        SurfaceKind::Sphere => -2.0 * (2.0 * rho0).sin() * s2 / res.l0.sin(),
        SurfaceKind::Hyperbolic => -2.0 * (2.0 * rho0).sinh() * s2 / res.l0.sinh(),
    }
}

/// `Σ_{k<n} e^{i·j·2πmk/n}`: `n` when `n | j`, zero otherwise.
pub fn phase_sum(j: i64, m: u32, n: u32) -> Complex64 {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, TAU * (j as f64) * (m as f64) * (k as f64) / n as f64))
        .sum()
}

/// Outcome of the first-order break-up test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `L₁` is not constant: the resonant circle does not persist.
    BreaksUp,
    /// `L₁` is constant: the first-order test says nothing.
    CriterionSilent,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::BreaksUp => "BreaksUp",
            Verdict::CriterionSilent => "CriterionSilent",
        }
    }
}

/// Closed-form Melnikov potential of a resonance under a perturbation.
#[derive(Debug, Clone, PartialEq)]
pub struct MelnikovResult {
    pub resonance: Resonance,
    pub constant: f64,
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
    /// Harmonics of `L₁` in the one-sided convention `Re(coef·e^{ijθ})`.
    pub fourier: Vec<Mode>,
    /// Harmonics of `ρ₁` with `n | j`, `j ≠ 0` and nonzero coefficient.
    pub resonant_modes: Vec<Mode>,
    pub verdict: Verdict,
}

/// Sample `L₁` on a `grid`-point mesh and read off its Fourier content.
pub fn melnikov_potential(res: &Resonance, curve: &RadialCurve, grid: usize) -> Result<MelnikovResult> {
    check_matching(curve, res)?;
    let constant = melnikov_constant(res);
    let rho1 = curve.perturbation();
    let shift = TAU * res.m as f64 / res.n as f64;
    let thetas = angle_grid(grid);
    let values = thetas
        .iter()
        .map(|&t| constant * (0..res.n).map(|k| rho1.value(t + shift * k as f64)).sum::<f64>())
        .collect();
    let n = res.n as f64;
    let fourier = rho1
        .modes()
        .iter()
        .filter(|m| m.j % res.n == 0)
        .map(|m| Mode {
            j: m.j,
            coef: n * constant * m.coef,
        })
        .collect();
    let resonant_modes: Vec<Mode> = rho1
        .modes()
        .iter()
        .filter(|m| m.j != 0 && m.j % res.n == 0 && 0.5 * m.coef.norm() > MODE_THRESHOLD)
        .copied()
        .collect();
    let mut result = MelnikovResult {
        resonance: *res,
        constant,
        thetas,
        values,
        fourier,
        resonant_modes,
        verdict: Verdict::CriterionSilent,
    };
    result.verdict = breakup_verdict(&result);
    Ok(result)
}

/// `BreaksUp` exactly when `ρ₁` has a nonzero harmonic `c_j` with `n | j`, `j ≠ 0`.
pub fn breakup_verdict(result: &MelnikovResult) -> Verdict {
    let n = result.resonance.n;
    let resonant = result
        .resonant_modes
        .iter()
        .any(|m| m.j != 0 && m.j % n == 0 && 0.5 * m.coef.norm() > MODE_THRESHOLD);
    if resonant {
        Verdict::BreaksUp
    } else {
        Verdict::CriterionSilent
    }
}

/// The `n`-bounce orbit from `(θ, h_ε(θ))` that closes after `m` turns.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuedOrbit {
    pub theta: f64,
    pub psi: f64,
    /// `h_ε(θ)`.
    pub y: f64,
    /// `h*_ε(θ)`: momentum after `n` bounces.
    pub y_star: f64,
    /// Lifted impact angles `θ = x̄₀ < x̄₁ < … < x̄_n = θ + 2πm`.
    pub lifted: Vec<f64>,
    pub states: Vec<BilliardState>,
}

fn run_bounces(oval: &Oval, start: BilliardState, n: u32) -> Result<(Vec<f64>, Vec<BilliardState>)> {
    let mut lifted = Vec::with_capacity(n as usize + 1);
    let mut states = Vec::with_capacity(n as usize + 1);
    let mut current = start;
    let mut x = start.theta;
    lifted.push(x);
    states.push(current);
    for _ in 0..n {
        let b = bounce(oval, current)?;
        x += b.advance;
        current = b.state;
        lifted.push(x);
        states.push(current);
    }
    Ok((lifted, states))
}

/// Find `ψ` near `ψ^{m/n}` whose orbit from `θ` returns to `θ` after `n`
/// bounces and `m` turns.
pub fn continue_invariant_radial(oval: &Oval, res: &Resonance, theta: f64) -> Result<ContinuedOrbit> {
    let theta = theta.rem_euclid(TAU);
    let target = TAU * res.m as f64;
    let mismatch = |psi: f64| -> Result<f64> {
        let start = BilliardState::new(theta, psi)?;
        let (lifted, _) = run_bounces(oval, start, res.n)?;
        Ok(lifted[res.n as usize] - theta - target)
    };
    let margin = 10.0 * PSI_GUARD;
    let lo = (res.psi - CONTINUATION_BRACKET).max(margin);
    let hi = (res.psi + CONTINUATION_BRACKET).min(PI - margin);
    let (dlo, dhi) = (mismatch(lo)?, mismatch(hi)?);
    if !(dlo < 0.0 && dhi > 0.0) {
        return Err(Error::Continuation {
            theta,
            lo: dlo,
            hi: dhi,
        });
    }
    let mut failure = None;
    let psi = brent_with_values(
        |psi| match mismatch(psi) {
            Ok(d) => d,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        dlo,
        hi,
        dhi,
        1e-15,
        200,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let psi = psi?;
    let start = BilliardState::new(theta, psi)?;
    let (lifted, states) = run_bounces(oval, start, res.n)?;
    let residual = lifted[res.n as usize] - theta - target;
    if residual.abs() > CONTINUATION_TOL {
        return Err(Error::Continuation {
            theta,
            lo: residual,
            hi: residual,
        });
    }
    let y = momentum_of(oval, start).y;
    let y_star = momentum_of(oval, states[res.n as usize]).y;
    Ok(ContinuedOrbit {
        theta,
        psi,
        y,
        y_star,
        lifted,
        states,
    })
}

/// `L_ε`, `h_ε` and `h*_ε` sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SubharmonicPotentialSamples {
    pub epsilon: f64,
    pub thetas: Vec<f64>,
    pub l_values: Vec<f64>,
    pub h_values: Vec<f64>,
    pub h_star_values: Vec<f64>,
}

impl SubharmonicPotentialSamples {
    /// Sup-norm mismatch between `h* − h` and the spectral derivative of `L_ε`.
    pub fn separation_error(&self) -> f64 {
        let dl = spectral_derivative(&self.l_values);
        self.h_values
            .iter()
            .zip(&self.h_star_values)
            .zip(&dl)
            .map(|((h, hs), d)| (hs - h - d).abs())
            .fold(0.0, f64::max)
    }

    /// `L_ε − mean(L_ε)`.
    pub fn centered(&self) -> Vec<f64> {
        let m = mean(&self.l_values);
        self.l_values.iter().map(|l| l - m).collect()
    }
}

fn potential_at(oval: &Oval, res: &Resonance, theta: f64) -> Result<(f64, f64, f64)> {
    let orbit = continue_invariant_radial(oval, res, theta)?;
    let mut l = 0.0;
    for pair in orbit.lifted.windows(2) {
        l += generating_function(oval, pair[0], pair[1])?;
    }
    Ok((l, orbit.y, orbit.y_star))
}

fn map_grid<T, F>(thetas: &[f64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        thetas.par_iter().map(|&t| f(t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        thetas.iter().map(|&t| f(t)).collect()
    }
}

/// Sample the subharmonic potential of `res` in the billiard on `oval`.
pub fn subharmonic_potential(oval: &Oval, res: &Resonance, grid: usize) -> Result<SubharmonicPotentialSamples> {
    if grid < 64 {
        return Err(Error::Invalid(format!("potential grid {grid} is below 64")));
    }
    check_matching(oval.curve(), res)?;
    let thetas = angle_grid(grid);
    let rows = map_grid(&thetas, |t| potential_at(oval, res, t))?;
    let mut out = SubharmonicPotentialSamples {
        epsilon: oval.curve().epsilon(),
        thetas,
        l_values: Vec::with_capacity(grid),
        h_values: Vec::with_capacity(grid),
        h_star_values: Vec::with_capacity(grid),
    };
    for (l, h, hs) in rows {
        out.l_values.push(l);
        out.h_values.push(h);
        out.h_star_values.push(hs);
    }
    Ok(out)
}

/// [`subharmonic_potential`] on a power-of-two grid, doubled until the
/// harmonics above a quarter of the grid fall below [`ALIASING_TOL`].
pub fn resolved_subharmonic_potential(
    oval: &Oval,
    res: &Resonance,
    grid: usize,
) -> Result<SubharmonicPotentialSamples> {
    let mut grid = grid.max(64).next_power_of_two();
    loop {
        let samples = subharmonic_potential(oval, res, grid)?;
        if high_mode_amplitude(&samples.l_values) < ALIASING_TOL || grid >= MAX_GRID {
            return Ok(samples);
        }
        grid *= 2;
    }
}

fn check_matching(curve: &RadialCurve, res: &Resonance) -> Result<()> {
    if curve.kind() != res.kind || (curve.rho0() - res.rho0).abs() > 1e-15 * res.rho0.max(1.0) {
        return Err(Error::ResonanceMismatch {
            curve_rho0: curve.rho0(),
            resonance_rho0: res.rho0,
        });
    }
    Ok(())
}

/// First-order comparison at one `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderLevel {
    pub epsilon: f64,
    /// `(L_ε − mean L_ε)/ε` on the grid.
    pub scaled: Vec<f64>,
    /// `sup |scaled − (L₁ − mean L₁)|`.
    pub error: f64,
    pub peak_to_peak: f64,
    pub sup: f64,
    /// Harmonic content above a quarter of the grid of `scaled`.
    pub noise: f64,
    /// Regression coefficient of `scaled` on `Σ_k ρ₁(θ + 2πmk/n)`.
    pub amplitude: Option<f64>,
}

/// Result of [`first_order_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderReport {
    pub resonance: Resonance,
    pub constant: f64,
    pub thetas: Vec<f64>,
    /// `L₁ − mean L₁`.
    pub reference: Vec<f64>,
    pub levels: Vec<FirstOrderLevel>,
    /// Least-squares slope of `log e(ε)` against `log ε`; `None` when every
    /// error is below [`ORDER_NOISE_FLOOR`].
    pub order: Option<f64>,
}

impl FirstOrderReport {
    /// `e(ε_k)/e(ε_{k+1})` for consecutive levels.
    pub fn error_ratios(&self) -> Vec<f64> {
        self.levels.windows(2).map(|w| w[0].error / w[1].error).collect()
    }

    /// Amplitude estimate of `C` at the smallest `ε`.
    pub fn fitted_constant(&self) -> Option<f64> {
        self.levels.last().and_then(|l| l.amplitude)
    }
}

/// Compare the numerically computed `(L_ε − mean)/ε` with the closed-form
/// `L₁ − mean` over a decreasing list of `ε`.
pub fn first_order_check(
    family: &RadialCurve,
    res: &Resonance,
    eps_list: &[f64],
    grid: usize,
) -> Result<FirstOrderReport> {
    if eps_list.is_empty() || eps_list.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Invalid("epsilon list must be non-empty and positive".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Invalid("epsilon list must be decreasing".into()));
    }
    check_matching(family, res)?;
    let closed = melnikov_potential(res, family, grid)?;
    let reference: Vec<f64> = {
        let m = mean(&closed.values);
        closed.values.iter().map(|v| v - m).collect()
    };
    // Σ_k ρ₁(θ + 2πmk/n), centered
    let basis: Vec<f64> = reference.iter().map(|v| v / closed.constant).collect();
    let basis_norm2: f64 = basis.iter().map(|b| b * b).sum();

    let mut levels = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let oval = validate_oval(family.with_epsilon(eps)?, DEFAULT_OVAL_GRID)?;
        let samples = subharmonic_potential(&oval, res, grid)?;
        let scaled: Vec<f64> = samples.centered().iter().map(|l| l / eps).collect();
        let error = scaled
            .iter()
            .zip(&reference)
            .map(|(d, r)| (d - r).abs())
            .fold(0.0, f64::max);
        let amplitude = (basis_norm2 > 1e-20 * grid as f64)
            .then(|| scaled.iter().zip(&basis).map(|(d, b)| d * b).sum::<f64>() / basis_norm2);
        levels.push(FirstOrderLevel {
            epsilon: eps,
            error,
            peak_to_peak: peak_to_peak(&scaled),
            sup: sup_norm(&scaled),
            noise: high_mode_amplitude(&scaled),
            amplitude,
            scaled,
        });
    }

    let order = convergence_order(&levels);
    if let Some(p) = order {
        if p < 0.5 {
            return Err(Error::OrderTest { order: p });
        }
    }
    Ok(FirstOrderReport {
        resonance: *res,
        constant: closed.constant,
        thetas: closed.thetas,
        reference,
        levels,
        order,
    })
}

fn convergence_order(levels: &[FirstOrderLevel]) -> Option<f64> {
    if levels.len() < 2 || levels.iter().all(|l| l.error < ORDER_NOISE_FLOOR) {
        return None;
    }
    let pts: Vec<(f64, f64)> = levels
        .iter()
        .map(|l| (l.epsilon.ln(), l.error.max(f64::MIN_POSITIVE).ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Perturbation;

    const E: SurfaceKind = SurfaceKind::Euclidean;
    const S: SurfaceKind = SurfaceKind::Sphere;
    const H: SurfaceKind = SurfaceKind::Hyperbolic;

    #[test]
    fn resonance_examples() {
        for (m, n) in [(1, 2), (1, 3), (2, 5), (3, 7)] {
            let r = find_resonance(m, n, 1.3, E).unwrap();
            assert!((r.psi - PI * m as f64 / n as f64).abs() < 1e-15);
        }
        let r = find_resonance(1, 2, 0.7, E).unwrap();
        assert!((r.l0 - 1.4).abs() < 1e-15);

        let r = find_resonance(1, 3, 0.8, S).unwrap();
        let alpha = circular_alpha(r.psi, 0.8, S).unwrap();
        assert!((alpha - TAU / 3.0).abs() < 1e-12);
        let l0 = (0.8f64.sin().powi(2) * (TAU / 3.0).cos() + 0.8f64.cos().powi(2)).acos();
        assert!((r.l0 - l0).abs() < 1e-12);
    }

    #[test]
    fn resonance_preconditions() {
        assert!(find_resonance(2, 4, 1.0, E).is_err());
        assert!(find_resonance(3, 2, 1.0, E).is_err());
        assert!(find_resonance(0, 2, 1.0, E).is_err());
        assert!(find_resonance(1, 2, 1.6, S).is_err());
    }

    #[test]
    fn constant_examples() {
        let r = find_resonance(1, 2, 1.0, E).unwrap();
        assert!((melnikov_constant(&r) + 2.0).abs() < 1e-15);
        let r = find_resonance(1, 3, 0.8, S).unwrap();
        let table = 2.0 * 1.6f64.sin() * (PI / 3.0).sin().powi(2) / r.l0.sin();
        assert!((melnikov_constant(&r).abs() - table).abs() < 1e-14);
        for kind in SurfaceKind::ALL {
            for rho0 in [0.3, 0.8] {
                for n in 2..=8u32 {
                    for m in (1..n).filter(|m| gcd(*m, n) == 1) {
                        let r = find_resonance(m, n, rho0, kind).unwrap();
                        assert!(melnikov_constant(&r).abs() > 1e-3);
                    }
                }
            }
        }
    }

    #[test]
    fn small_radius_limits_agree() {
        // on a tiny circle every surface looks Euclidean
        let rho0 = 1e-4;
        let e = melnikov_constant(&find_resonance(1, 3, rho0, E).unwrap());
        for kind in [S, H] {
            let c = melnikov_constant(&find_resonance(1, 3, rho0, kind).unwrap());
            assert!((c / e - 1.0).abs() < 1e-6, "{kind}: {c} vs {e}");
        }
    }

    #[test]
    fn geometric_sum_identity() {
        for n in 2..=6u32 {
            for m in (1..n).filter(|m| gcd(*m, n) == 1) {
                for j in -12..=12i64 {
                    let s = phase_sum(j, m, n);
                    let expected = if j % n as i64 == 0 { n as f64 } else { 0.0 };
                    assert!((s - Complex64::new(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    fn curve(kind: SurfaceKind, rho0: f64, j: u32) -> RadialCurve {
        RadialCurve::new(kind, rho0, Perturbation::cosine(j, 1.0), 0.01).unwrap()
    }

    #[test]
    fn potential_examples() {
        let r = find_resonance(1, 3, 0.8, S).unwrap();
        let res = melnikov_potential(&r, &curve(S, 0.8, 3), 64).unwrap();
        for (t, v) in res.thetas.iter().zip(&res.values) {
            assert!((v - 3.0 * res.constant * (3.0 * t).cos()).abs() < 1e-12);
        }
        assert_eq!(res.verdict, Verdict::BreaksUp);
        assert_eq!(res.fourier.len(), 1);

        let r = find_resonance(1, 2, 0.8, S).unwrap();
        let res = melnikov_potential(&r, &curve(S, 0.8, 3), 64).unwrap();
        assert!(res.values.iter().all(|v| v.abs() < 1e-12));
        assert_eq!(res.verdict, Verdict::CriterionSilent);

        let radius = RadialCurve::new(H, 1.0, Perturbation::from_terms([(0, 0.7, 0.0)]), 0.01).unwrap();
        let r = find_resonance(2, 5, 1.0, H).unwrap();
        let res = melnikov_potential(&r, &radius, 32).unwrap();
        for v in &res.values {
            assert!((v - 5.0 * res.constant * 0.7).abs() < 1e-12);
        }
        assert_eq!(res.verdict, Verdict::CriterionSilent);
    }

    #[test]
    fn verdict_truth_table() {
        for (j, n, expected) in [
            (2, 2, Verdict::BreaksUp),
            (3, 2, Verdict::CriterionSilent),
            (4, 2, Verdict::BreaksUp),
        ] {
            let r = find_resonance(1, n, 1.0, E).unwrap();
            let res = melnikov_potential(&r, &curve(E, 1.0, j), 64).unwrap();
            assert_eq!(breakup_verdict(&res), expected, "j = {j}, n = {n}");
        }
    }

    #[test]
    fn potential_mean_and_shift_structure() {
        let p = Perturbation::from_terms([(0, 0.3, 0.0), (2, 0.5, -0.2), (3, 0.1, 0.4), (6, -0.2, 0.1)]);
        let c = RadialCurve::new(E, 1.0, p, 0.01).unwrap();
        for (m, n) in [(1, 2), (1, 3), (2, 3)] {
            let r = find_resonance(m, n, 1.0, E).unwrap();
            let res = melnikov_potential(&r, &c, 60).unwrap();
            let expected_mean = n as f64 * res.constant * 0.3;
            assert!((mean(&res.values) - expected_mean).abs() < 1e-12);
            // shifting by 2π/n permutes the summands
            let shift = 60 / n as usize;
            for i in 0..60 {
                assert!((res.values[i] - res.values[(i + shift) % 60]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mismatched_resonance() {
        let r = find_resonance(1, 2, 1.0, E).unwrap();
        assert!(matches!(
            melnikov_potential(&r, &curve(E, 1.1, 2), 32),
            Err(Error::ResonanceMismatch { .. })
        ));
        assert!(melnikov_potential(&r, &curve(S, 1.0, 2), 32).is_err());
    }

    #[test]
    fn unperturbed_continuation() {
        for kind in SurfaceKind::ALL {
            let oval = Oval::circle(kind, 0.9).unwrap();
            let r = find_resonance(1, 3, 0.9, kind).unwrap();
            let c = continue_invariant_radial(&oval, &r, 0.4).unwrap();
            assert!((c.psi - r.psi).abs() < 1e-10, "{kind}");
            assert!((c.y - c.y_star).abs() < 1e-10);
        }
    }

    #[test]
    fn unperturbed_potential_is_constant() {
        let oval = Oval::circle(S, 0.8).unwrap();
        let r = find_resonance(1, 2, 0.8, S).unwrap();
        let s = subharmonic_potential(&oval, &r, 64).unwrap();
        for l in &s.l_values {
            assert!((l + 2.0 * r.l0).abs() < 1e-10);
        }
    }

    #[test]
    fn continuation_moves_linearly_in_epsilon() {
        let r = find_resonance(1, 2, 1.0, E).unwrap();
        let shift = |eps: f64| {
            let c = RadialCurve::new(E, 1.0, Perturbation::cosine(2, 1.0), eps).unwrap();
            let oval = validate_oval(c, 4096).unwrap();
            continue_invariant_radial(&oval, &r, 0.3).unwrap().psi - r.psi
        };
        let (a, b) = (shift(1e-3), shift(5e-4));
        assert!(a.abs() > 1e-6);
        assert!((a / b - 2.0).abs() < 0.05, "{a} {b}");
    }
}
