//! Finite-difference checks of the twist-map structure of the billiard map.
//!
//! Every check here differentiates the generating function or the map itself
//! numerically, so it stays independent of how [`momentum_of`] and the
//! stepper compute their results.

use crate::billiard::{bounce, generating_function, momentum_of, state_of, BilliardState, MomentumState};
use crate::curves::Oval;
use crate::error::Result;

/// Default step of the central differences.
pub const FD_STEP: f64 = 1e-6;

/// Residuals of `y₀ = −∂₁g(θ₀,θ₁)`, `y₁ = ∂₂g(θ₀,θ₁)` and
/// `∂₂g(θ₀,θ₁) + ∂₁g(θ₁,θ₂) = 0` along a two-bounce orbit from `state`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratingResiduals {
    pub first: f64,
    pub second: f64,
    pub chain: f64,
}

impl GeneratingResiduals {
    pub fn max(&self) -> f64 {
        self.first.abs().max(self.second.abs()).max(self.chain.abs())
    }
}

fn d1(oval: &Oval, a: f64, b: f64, h: f64) -> Result<f64> {
    Ok((generating_function(oval, a + h, b)? - generating_function(oval, a - h, b)?) / (2.0 * h))
}

fn d2(oval: &Oval, a: f64, b: f64, h: f64) -> Result<f64> {
    Ok((generating_function(oval, a, b + h)? - generating_function(oval, a, b - h)?) / (2.0 * h))
}

pub fn generating_residuals(oval: &Oval, state: BilliardState, h: f64) -> Result<GeneratingResiduals> {
    let b1 = bounce(oval, state)?;
    let b2 = bounce(oval, b1.state)?;
    let (t0, t1) = (state.theta, state.theta + b1.advance);
    let t2 = t1 + b2.advance;
    let y0 = momentum_of(oval, state).y;
    let y1 = momentum_of(oval, b1.state).y;
    Ok(GeneratingResiduals {
        first: y0 + d1(oval, t0, t1, h)?,
        second: y1 - d2(oval, t0, t1, h)?,
        chain: d2(oval, t0, t1, h)? + d1(oval, t1, t2, h)?,
    })
}

/// One bounce in `(θ, y)` coordinates; the returned angle is lifted.
fn momentum_step(oval: &Oval, m: MomentumState) -> Result<(f64, f64)> {
    let s = state_of(oval, m)?;
    let b = bounce(oval, s)?;
    Ok((m.theta + b.advance, momentum_of(oval, b.state).y))
}

/// `∂θ₁/∂y₀` by central differences.
pub fn twist_derivative(oval: &Oval, state: BilliardState, h: f64) -> Result<f64> {
    let m = momentum_of(oval, state);
    let (tp, _) = momentum_step(oval, MomentumState { y: m.y + h, ..m })?;
    let (tm, _) = momentum_step(oval, MomentumState { y: m.y - h, ..m })?;
    Ok((tp - tm) / (2.0 * h))
}

/// Determinant of `∂(θ₁, y₁)/∂(θ₀, y₀)` by central differences.
pub fn jacobian_determinant(oval: &Oval, state: BilliardState, h: f64) -> Result<f64> {
    let m = momentum_of(oval, state);
    let at = |dt: f64, dy: f64| {
        momentum_step(
            oval,
            MomentumState {
                theta: m.theta + dt,
                y: m.y + dy,
            },
        )
    };
    let (tp, yp) = at(h, 0.0)?;
    let (tm, ym) = at(-h, 0.0)?;
    let (tq, yq) = at(0.0, h)?;
    let (tr, yr) = at(0.0, -h)?;
    let a = (tp - tm) / (2.0 * h);
    let c = (yp - ym) / (2.0 * h);
    let b = (tq - tr) / (2.0 * h);
    let d = (yq - yr) / (2.0 * h);
    Ok(a * d - b * c)
}

/// Step from `(θ₁, π − ψ₁)` and measure how far the result is from
/// `(θ₀, π − ψ₀)`: returns the larger of the angular and the ψ mismatch.
pub fn reversibility_residual(oval: &Oval, state: BilliardState) -> Result<f64> {
    let next = bounce(oval, state)?.state;
    let back = bounce(oval, BilliardState::new(next.theta, std::f64::consts::PI - next.psi)?)?.state;
    let dtheta = (back.theta - state.theta).rem_euclid(std::f64::consts::TAU);
    let dtheta = dtheta.min(std::f64::consts::TAU - dtheta);
    let dpsi = (back.psi - (std::f64::consts::PI - state.psi)).abs();
    Ok(dtheta.max(dpsi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{validate_oval, Perturbation, RadialCurve};
    use crate::geometry::SurfaceKind;

    #[test]
    fn checks_pass_on_a_perturbed_sphere_table() {
        let c = RadialCurve::new(SurfaceKind::Sphere, 0.7, Perturbation::from_terms([(3, 0.4, 0.2)]), 0.05).unwrap();
        let oval = validate_oval(c, 4096).unwrap();
        let s = BilliardState::new(1.0, 1.1).unwrap();
        assert!(generating_residuals(&oval, s, FD_STEP).unwrap().max() < 1e-7);
        assert!(twist_derivative(&oval, s, FD_STEP).unwrap() > 0.0);
        assert!((jacobian_determinant(&oval, s, FD_STEP).unwrap() - 1.0).abs() < 1e-6);
        assert!(reversibility_residual(&oval, s).unwrap() < 1e-10);
    }
}
