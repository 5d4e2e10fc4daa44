//! The billiard map inside an oval.
//!
//! A state `(θ, ψ)` is an impact at `Γ(θ)` leaving at angle `ψ` with the
//! forward tangent. The next impact is the second intersection of the oval
//! with the plane through the origin that carries the outgoing geodesic.

use std::f64::consts::TAU;

use crate::curves::{frame_of, Oval, RadialCurve};
use crate::error::{Error, Result};
use crate::geometry::{
    ambient_inner, geodesic_distance, ray_plane_normal, tangent_angle, velocity_in_plane,
    SurfaceKind, TangentVector, Vec3,
};
use crate::roots::brent_with_values;

/// Outgoing angles closer than this to 0 or π are refused.
pub const PSI_GUARD: f64 = 1e-6;
/// Number of sample points of the sign scan for the next impact.
pub const SCAN_POINTS: usize = 720;
/// Zeros closer than this to the departure angle are the departure point itself.
pub const ROOT_EXCLUSION: f64 = 1e-7;
/// Absolute tolerance of the impact-angle refinement.
pub const IMPACT_XTOL: f64 = 1e-15;

/// Sign relating the conjugate momentum to `‖Γ'‖·cos ψ`.
///
/// Pinned by `momentum_sign_calibration`: with `g = −d`, the identity
/// `y = −∂₁g` holds for `y = −‖Γ'(θ)‖·cos ψ`.
pub const MOMENTUM_ORIENTATION: f64 = -1.0;

/// Impact angle and outgoing angle with the forward tangent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilliardState {
    pub theta: f64,
    pub psi: f64,
}

impl BilliardState {
    /// Reduces `theta` to `[0, 2π)`; `psi` must lie strictly inside `(0, π)`.
    pub fn new(theta: f64, psi: f64) -> Result<Self> {
        if !(psi > 0.0 && psi < std::f64::consts::PI) || !theta.is_finite() {
            return Err(Error::Domain(format!("state ({theta}, {psi}) is outside T × (0, π)")));
        }
        Ok(BilliardState {
            theta: theta.rem_euclid(TAU),
            psi,
        })
    }
}

/// Impact angle and conjugate momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumState {
    pub theta: f64,
    pub y: f64,
}

/// An orbit together with a continuous lift of its impact angles.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LiftedOrbit {
    pub states: Vec<BilliardState>,
    pub lifted_theta: Vec<f64>,
}

impl LiftedOrbit {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Result of one bounce, including the lift increment of the impact angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounce {
    pub state: BilliardState,
    /// `θ₁ − θ₀` taken in `(0, 2π)`.
    pub advance: f64,
}

/// Which stepper [`iterate`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stepper {
    /// Plane-section construction, valid on every oval.
    #[default]
    Generic,
    /// Closed-form rotation, only for geodesic circles.
    Circular,
}

fn check_guard(psi: f64) -> Result<()> {
    if !(psi > PSI_GUARD && psi < std::f64::consts::PI - PSI_GUARD) {
        return Err(Error::Tangency { psi });
    }
    Ok(())
}

/// `F(θ) = ⟨Γ(θ), N⟩` for a fixed plane normal.
struct ChordFunction<'a> {
    curve: &'a RadialCurve,
    normal: Vec3,
}

impl ChordFunction<'_> {
    fn eval(&self, theta: f64) -> f64 {
        ambient_inner(self.curve.point(theta).coords, self.normal, self.curve.kind())
    }

    /// `F(θ₀ + 2πk/SCAN_POINTS)` for `k = 1..SCAN_POINTS`, using rotation
    /// recurrences reseeded every few points.
    fn scan(&self, theta0: f64, out: &mut Vec<f64>) {
        const RESEED: usize = 32;
        let curve = self.curve;
        let kind = curve.kind();
        let n = self.normal;
        let nz = match kind {
            SurfaceKind::Hyperbolic => -n.z,
            _ => n.z,
        };
        let step = TAU / SCAN_POINTS as f64;
        let (ds, dc) = step.sin_cos();
        let modes = curve.perturbation().modes();
        let eps = curve.epsilon();
        let perturbed = eps != 0.0 && !modes.is_empty();
        let mode_steps: Vec<(f64, f64)> = modes
            .iter()
            .map(|m| {
                let (s, c) = (m.j as f64 * step).sin_cos();
                (c, s)
            })
            .collect();
        let mut phases: Vec<(f64, f64)> = vec![(1.0, 0.0); modes.len()];
        let (mut c, mut s) = (0.0, 0.0);
        let circle_profile = (kind.radial(curve.rho0()), kind.height(curve.rho0()));

        out.clear();
        for k in 1..SCAN_POINTS {
            if (k - 1) % RESEED == 0 {
                let theta = theta0 + step * k as f64;
                (s, c) = theta.sin_cos();
                for (ph, m) in phases.iter_mut().zip(modes) {
                    let (ps, pc) = (m.j as f64 * theta).sin_cos();
                    *ph = (pc, ps);
                }
            } else {
                (c, s) = (c * dc - s * ds, s * dc + c * ds);
                for (ph, st) in phases.iter_mut().zip(&mode_steps) {
                    *ph = (ph.0 * st.0 - ph.1 * st.1, ph.1 * st.0 + ph.0 * st.1);
                }
            }
            let (a, b) = if perturbed {
                let mut p = 0.0;
                for (ph, m) in phases.iter().zip(modes) {
                    p += m.coef.re * ph.0 - m.coef.im * ph.1;
                }
                let rho = curve.rho0() + eps * p;
                (kind.radial(rho), kind.height(rho))
            } else {
                circle_profile
            };
            out.push(a * (n.x * c + n.y * s) + nz * b);
        }
    }
}

/// One bounce, reporting the lift increment.
pub fn bounce(oval: &Oval, state: BilliardState) -> Result<Bounce> {
    check_guard(state.psi)?;
    let curve = oval.curve();
    let kind = curve.kind();
    let theta0 = state.theta;
    let jet = curve.jet(theta0);
    let (t, n) = frame_of(&jet)?;
    let (sp, cp) = state.psi.sin_cos();
    let w = TangentVector::new_unit_combination(t, cp, n, sp);
    let p = jet.point;
    let normal = ray_plane_normal(p, w)?;
    let chord = ChordFunction { curve, normal };

    // F vanishes at u = 0 and u = 2π; its sign just after departure is that
    // of F'(θ₀), and just before returning it is the opposite.
    let s0 = ambient_inner(jet.velocity.v, normal, kind).signum();
    let mut values = Vec::with_capacity(SCAN_POINTS);
    chord.scan(theta0, &mut values);
    let step = TAU / SCAN_POINTS as f64;

    let mut crossings = Vec::new();
    let mut prev = s0;
    for (i, &f) in values.iter().enumerate() {
        let sg = f.signum();
        if sg != prev {
            crossings.push(i);
        }
        prev = sg;
    }
    if prev != -s0 {
        crossings.push(values.len());
    }
    if crossings.len() > 1 {
        return Err(Error::Convexity {
            crossings: crossings.len() + 1,
        });
    }
    let Some(&cell) = crossings.first() else {
        return Err(Error::RootFind(format!(
            "no sign change of the chord function from theta = {theta0}, psi = {}",
            state.psi
        )));
    };

    // cell i spans u ∈ [i·step, (i+1)·step]
    let f = |u: f64| chord.eval(theta0 + u);
    let (lo, flo, hi, fhi) = if cell == 0 {
        let hi = step;
        let fhi = f(hi);
        let mut lo = 0.5 * hi;
        let mut flo = f(lo);
        while flo.signum() != s0 || flo == 0.0 {
            lo *= 0.5;
            if lo < ROOT_EXCLUSION {
                return Err(Error::RootFind(format!(
                    "next impact within {ROOT_EXCLUSION:e} of the departure point (psi = {})",
                    state.psi
                )));
            }
            flo = f(lo);
        }
        (lo, flo, hi, fhi)
    } else if cell == values.len() {
        let lo = step * cell as f64;
        let flo = f(lo);
        let mut gap = 0.5 * (TAU - lo);
        let mut fhi = f(TAU - gap);
        while fhi.signum() != -s0 || fhi == 0.0 {
            gap *= 0.5;
            if gap < ROOT_EXCLUSION {
                return Err(Error::RootFind(format!(
                    "next impact within {ROOT_EXCLUSION:e} of the departure point (psi = {})",
                    state.psi
                )));
            }
            fhi = f(TAU - gap);
        }
        (lo, flo, TAU - gap, fhi)
    } else {
        let lo = step * cell as f64;
        let hi = lo + step;
        (lo, f(lo), hi, f(hi))
    };
    let (lo, flo, hi, fhi) = widen_bracket(&f, lo, flo, hi, fhi, step);
    let advance = brent_with_values(f, lo, flo, hi, fhi, IMPACT_XTOL, 200)?;
    if !(advance > ROOT_EXCLUSION && advance < TAU - ROOT_EXCLUSION) {
        return Err(Error::RootFind(format!(
            "refined impact {advance} collapsed onto the departure point"
        )));
    }

    let theta1 = theta0 + advance;
    let jet1 = curve.jet(theta1);
    let (t1, n1) = frame_of(&jet1)?;
    let moment = p.coords.cross(w.v);
    let arrival = velocity_in_plane(jet1.point, moment);
    let normal_part = arrival.dot(&n1);
    let reflected = TangentVector::new_unit_combination(
        TangentVector::unchecked(jet1.point, arrival.v),
        1.0,
        n1,
        -2.0 * normal_part,
    );
    let psi1 = tangent_angle(t1, reflected)?;
    Ok(Bounce {
        state: BilliardState::new(theta1, psi1)?,
        advance,
    })
}

/// Recovers from recurrence drift in the scan: make sure the exact values at
/// the bracket ends differ in sign, widening by a cell if needed.
fn widen_bracket<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    flo: f64,
    hi: f64,
    fhi: f64,
    step: f64,
) -> (f64, f64, f64, f64) {
    if flo.signum() != fhi.signum() || flo == 0.0 || fhi == 0.0 {
        return (lo, flo, hi, fhi);
    }
    let lo2 = (lo - step).max(0.5 * lo);
    let hi2 = (hi + step).min(0.5 * (hi + TAU));
    let (flo2, fhi2) = (f(lo2), f(hi2));
    if flo2.signum() != flo.signum() {
        (lo2, flo2, lo, flo)
    } else if fhi2.signum() != fhi.signum() {
        (hi, fhi, hi2, fhi2)
    } else {
        (lo2, flo2, hi2, fhi2)
    }
}

impl TangentVector {
    /// `a·x + b·y` for tangent vectors at the same point.
    pub(crate) fn new_unit_combination(x: TangentVector, a: f64, y: TangentVector, b: f64) -> TangentVector {
        TangentVector::unchecked(x.base, a * x.v + b * y.v)
    }
}

/// Next impact and outgoing angle.
pub fn billiard_step(oval: &Oval, state: BilliardState) -> Result<BilliardState> {
    bounce(oval, state).map(|b| b.state)
}

/// Advance `α(ψ)` of the billiard in the geodesic circle of radius `rho0`.
///
/// On all three surfaces `tan(α/2) = tan ψ / h(ρ₀)` with `h = 1, cos, cosh`;
/// evaluated through `atan2` this is continuous on the whole of `(0, π)` and
/// satisfies `α(π − ψ) = 2π − α(ψ)`.
pub fn circular_alpha(psi: f64, rho0: f64, kind: SurfaceKind) -> Result<f64> {
    if !(psi > 0.0 && psi < std::f64::consts::PI) {
        return Err(Error::Domain(format!("angle {psi} outside (0, π)")));
    }
    check_circle_radius(rho0, kind)?;
    let (s, c) = psi.sin_cos();
    let h = match kind {
        SurfaceKind::Euclidean => return Ok(2.0 * psi),
        SurfaceKind::Sphere => rho0.cos(),
        SurfaceKind::Hyperbolic => rho0.cosh(),
    };
    Ok(2.0 * s.atan2(h * c))
}

fn check_circle_radius(rho0: f64, kind: SurfaceKind) -> Result<()> {
    if !(rho0 > 0.0) || !rho0.is_finite() {
        return Err(Error::Domain(format!("circle radius {rho0} must be positive")));
    }
    if kind == SurfaceKind::Sphere && rho0 >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!("sphere circle radius {rho0} must be below π/2")));
    }
    Ok(())
}

/// Exact billiard map of the geodesic circle.
pub fn circular_step(state: BilliardState, rho0: f64, kind: SurfaceKind) -> Result<BilliardState> {
    let alpha = circular_alpha(state.psi, rho0, kind)?;
    BilliardState::new(state.theta + alpha, state.psi)
}

/// `g(θ₀, θ₁) = −d(Γ(θ₀), Γ(θ₁))`.
pub fn generating_function(oval: &Oval, theta0: f64, theta1: f64) -> Result<f64> {
    let gap = (theta1 - theta0).rem_euclid(TAU);
    if gap < 1e-12 || TAU - gap < 1e-12 {
        return Err(Error::Coincidence(theta0));
    }
    let curve = oval.curve();
    Ok(-geodesic_distance(curve.point(theta0), curve.point(theta1))?)
}

/// Conjugate momentum `y = MOMENTUM_ORIENTATION · ‖Γ'(θ)‖ · cos ψ`.
pub fn momentum_of(oval: &Oval, state: BilliardState) -> MomentumState {
    MomentumState {
        theta: state.theta,
        y: MOMENTUM_ORIENTATION * oval.curve().speed(state.theta) * state.psi.cos(),
    }
}

/// Inverse of [`momentum_of`].
pub fn state_of(oval: &Oval, m: MomentumState) -> Result<BilliardState> {
    let speed = oval.curve().speed(m.theta);
    let c = m.y / (MOMENTUM_ORIENTATION * speed);
    if !(c > -1.0 && c < 1.0) {
        return Err(Error::Domain(format!(
            "momentum {} outside (−{speed}, {speed}) at theta = {}",
            m.y, m.theta
        )));
    }
    BilliardState::new(m.theta, c.acos())
}

/// Orbit of `steps` bounces with a continuous lift of the impact angle.
pub fn iterate(oval: &Oval, state: BilliardState, steps: usize, stepper: Stepper) -> Result<LiftedOrbit> {
    let curve = oval.curve();
    if stepper == Stepper::Circular && !curve.is_circle() {
        return Err(Error::Invalid("the circular stepper needs an unperturbed circle".into()));
    }
    let radius = curve.rho(0.0);
    let mut orbit = LiftedOrbit {
        states: Vec::with_capacity(steps + 1),
        lifted_theta: Vec::with_capacity(steps + 1),
    };
    let mut current = BilliardState::new(state.theta, state.psi)?;
    let mut lifted = state.theta;
    orbit.states.push(current);
    orbit.lifted_theta.push(lifted);
    for _ in 0..steps {
        let (next, advance) = match stepper {
            Stepper::Generic => {
                let b = bounce(oval, current)?;
                (b.state, b.advance)
            }
            Stepper::Circular => {
                let alpha = circular_alpha(current.psi, radius, curve.kind())?;
                (BilliardState::new(current.theta + alpha, current.psi)?, alpha)
            }
        };
        lifted += advance;
        current = next;
        orbit.states.push(current);
        orbit.lifted_theta.push(lifted);
    }
    Ok(orbit)
}

/// Mean lifted advance per bounce, in turns.
pub fn rotation_number(orbit: &LiftedOrbit) -> Result<f64> {
    let k = orbit.lifted_theta.len().saturating_sub(1);
    if k < 10 {
        return Err(Error::TooShort { steps: k, required: 10 });
    }
    Ok((orbit.lifted_theta[k] - orbit.lifted_theta[0]) / (TAU * k as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{validate_oval, Perturbation};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    const E: SurfaceKind = SurfaceKind::Euclidean;
    const S: SurfaceKind = SurfaceKind::Sphere;
    const H: SurfaceKind = SurfaceKind::Hyperbolic;

    fn state(theta: f64, psi: f64) -> BilliardState {
        BilliardState::new(theta, psi).unwrap()
    }

    #[test]
    fn diameter_orbit() {
        let oval = Oval::circle(E, 1.0).unwrap();
        let next = billiard_step(&oval, state(0.0, FRAC_PI_2)).unwrap();
        assert!((next.theta - PI).abs() < 1e-12);
        assert!((next.psi - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn circles_conserve_the_angle() {
        for kind in SurfaceKind::ALL {
            let oval = Oval::circle(kind, 0.8).unwrap();
            for psi in [0.05, 0.6, 1.5, 2.2, 3.0] {
                let next = billiard_step(&oval, state(1.3, psi)).unwrap();
                assert!((next.psi - psi).abs() < 1e-12, "{kind} {psi}: {}", next.psi);
            }
        }
    }

    #[test]
    fn generic_step_matches_closed_form() {
        let oval = Oval::circle(S, 0.8).unwrap();
        let b = bounce(&oval, state(0.0, 0.6)).unwrap();
        let alpha = circular_alpha(0.6, 0.8, S).unwrap();
        assert!((b.advance - alpha).abs() < 1e-12);
    }

    #[test]
    fn alpha_examples_and_published_form() {
        assert_eq!(circular_alpha(FRAC_PI_4, 0.3, E).unwrap(), FRAC_PI_2);
        assert!((circular_alpha(FRAC_PI_2, 0.7, S).unwrap() - PI).abs() < 1e-15);
        assert!((circular_alpha(FRAC_PI_2, 0.7, H).unwrap() - PI).abs() < 1e-15);
        // arccos forms with tan/sec, valid below π/2
        for &(psi, rho) in &[(0.3f64, 0.5f64), (0.9, 1.2), (1.4, 0.1)] {
            let (t2, s2) = (psi.tan().powi(2), psi.cos().powi(-2));
            let sphere = ((rho.cos().powi(2) - t2) / (s2 - rho.sin().powi(2))).acos();
            let hyper = ((rho.cosh().powi(2) - t2) / (s2 + rho.sinh().powi(2))).acos();
            assert!((circular_alpha(psi, rho, S).unwrap() - sphere).abs() < 1e-12);
            assert!((circular_alpha(psi, rho, H).unwrap() - hyper).abs() < 1e-12);
        }
        for kind in SurfaceKind::ALL {
            let a = circular_alpha(0.4, 0.9, kind).unwrap();
            let b = circular_alpha(PI - 0.4, 0.9, kind).unwrap();
            assert!((a + b - TAU).abs() < 1e-14);
        }
        assert!(circular_alpha(0.0, 0.5, S).is_err());
        assert!(circular_alpha(1.0, 1.6, S).is_err());
    }

    #[test]
    fn circular_step_examples() {
        let s = circular_step(state(0.0, FRAC_PI_2), 1.0, E).unwrap();
        assert!((s.theta - PI).abs() < 1e-15 && s.psi == FRAC_PI_2);
        // α = 2π/3 returns after three steps
        let psi = FRAC_PI_3;
        let mut s = state(0.4, psi);
        for _ in 0..3 {
            s = circular_step(s, 2.0, E).unwrap();
        }
        let d = (s.theta - 0.4).rem_euclid(TAU);
        assert!(d.min(TAU - d) < 1e-14);
        let s = circular_step(state(1.0, 0.6), 0.8, S).unwrap();
        assert!((s.theta - (1.0 + circular_alpha(0.6, 0.8, S).unwrap())).abs() < 1e-15);
    }

    #[test]
    fn generating_function_examples() {
        let oval = Oval::circle(E, 1.5).unwrap();
        assert!((generating_function(&oval, 0.2, 0.2 + PI).unwrap() + 3.0).abs() < 1e-14);
        let rho: f64 = 0.8;
        let oval = Oval::circle(S, rho).unwrap();
        let dt: f64 = 1.1;
        let expected = -(rho.sin().powi(2) * dt.cos() + rho.cos().powi(2)).acos();
        assert!((generating_function(&oval, 0.5, 0.5 + dt).unwrap() - expected).abs() < 1e-14);
        assert!(matches!(generating_function(&oval, 0.5, 0.5 + TAU), Err(Error::Coincidence(_))));
    }

    #[test]
    fn momentum_examples() {
        let oval = Oval::circle(E, 2.0).unwrap();
        assert!(momentum_of(&oval, state(0.0, FRAC_PI_2)).y.abs() < 1e-15);
        assert!((momentum_of(&oval, state(0.0, FRAC_PI_3)).y.abs() - 1.0).abs() < 1e-15);
        let m = momentum_of(&oval, state(0.3, 0.4));
        let back = state_of(&oval, m).unwrap();
        assert!((back.psi - 0.4).abs() < 1e-14);
        assert!(state_of(&oval, MomentumState { theta: 0.0, y: 2.5 }).is_err());
    }

    #[test]
    fn momentum_sign_calibration() {
        // y = −∂₁g(θ, θ₁) with θ₁ the next impact
        let curve = RadialCurve::new(H, 0.9, Perturbation::cosine(2, 1.0), 0.03).unwrap();
        let oval = validate_oval(curve, 4096).unwrap();
        let h = 1e-6;
        for (theta, psi) in [(0.2, 0.7), (2.0, 1.9), (4.0, 1.2)] {
            let s = state(theta, psi);
            let next = billiard_step(&oval, s).unwrap();
            let d1 = (generating_function(&oval, theta + h, next.theta).unwrap()
                - generating_function(&oval, theta - h, next.theta).unwrap())
                / (2.0 * h);
            assert!((momentum_of(&oval, s).y + d1).abs() < 1e-7);
        }
    }

    #[test]
    fn guard_band_and_lift() {
        let oval = Oval::circle(E, 1.0).unwrap();
        assert!(matches!(billiard_step(&oval, state(0.0, 1e-7)), Err(Error::Tangency { .. })));
        assert!(matches!(billiard_step(&oval, state(0.0, PI - 1e-7)), Err(Error::Tangency { .. })));
        let near = billiard_step(&oval, state(0.0, 2e-6)).unwrap();
        assert!((near.psi - 2e-6).abs() < 1e-9, "{}", near.psi);

        let orbit = iterate(&oval, state(0.0, FRAC_PI_2), 2, Stepper::Generic).unwrap();
        assert!((orbit.lifted_theta[2] - TAU).abs() < 1e-12);
    }

    #[test]
    fn rotation_numbers() {
        let oval = Oval::circle(S, 0.7).unwrap();
        let psi = crate::melnikov::find_resonance(1, 3, 0.7, S).unwrap().psi;
        let orbit = iterate(&oval, state(0.0, psi), 30, Stepper::Circular).unwrap();
        assert!((rotation_number(&orbit).unwrap() - 1.0 / 3.0).abs() < 1e-14);

        let oval = Oval::circle(E, 1.0).unwrap();
        let orbit = iterate(&oval, state(0.0, 0.5), 40, Stepper::Circular).unwrap();
        assert!((rotation_number(&orbit).unwrap() - 1.0 / TAU).abs() < 1e-12);
        let short = iterate(&oval, state(0.0, 0.5), 9, Stepper::Circular).unwrap();
        assert!(matches!(rotation_number(&short), Err(Error::TooShort { .. })));
    }

    #[test]
    fn circular_stepper_needs_a_circle() {
        let curve = RadialCurve::new(E, 1.0, Perturbation::cosine(2, 1.0), 0.01).unwrap();
        let oval = validate_oval(curve, 1024).unwrap();
        assert!(iterate(&oval, state(0.0, 1.0), 3, Stepper::Circular).is_err());
    }
}
