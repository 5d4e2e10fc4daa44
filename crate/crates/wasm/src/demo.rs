//! Plain-Rust computations behind the browser bindings.
//!
//! Everything here returns flat `f64` buffers so the JavaScript side can draw
//! them without further conversion.

use std::f64::consts::PI;

use billiards_core::spectral::mean;
use billiards_core::{
    breakup_verdict, find_resonance, iterate, melnikov_potential, subharmonic_potential,
    validate_oval, BilliardState, Oval, Perturbation, RadialCurve, Result, Stepper, SurfaceKind,
};

pub const OVAL_GRID: usize = 2048;

pub fn surface_from_name(name: &str) -> Option<SurfaceKind> {
    SurfaceKind::ALL.into_iter().find(|k| k.name() == name)
}

/// Gnomonic chart `(x/z, y/z)`. Geodesics of all three surfaces become
/// straight lines in it, so chords can be drawn as segments.
pub fn chart(p: billiards_core::Point3) -> [f64; 2] {
    [p.coords.x / p.coords.z, p.coords.y / p.coords.z]
}

pub struct Table {
    pub oval: Oval,
}

impl Table {
    /// Oval `ρ₀ + ε·Re(c·e^{ijθ})` with `c = re + i·im`.
    pub fn new(kind: SurfaceKind, rho0: f64, j: i64, re: f64, im: f64, epsilon: f64) -> Result<Self> {
        let curve = RadialCurve::new(kind, rho0, Perturbation::from_terms([(j, re, im)]), epsilon)?;
        Ok(Table {
            oval: validate_oval(curve, OVAL_GRID)?,
        })
    }

    /// Chart coordinates of `samples` boundary points, interleaved `x, y`.
    pub fn outline(&self, samples: usize) -> Vec<f64> {
        let curve = self.oval.curve();
        (0..samples)
            .flat_map(|k| chart(curve.point(std::f64::consts::TAU * k as f64 / samples as f64)))
            .collect()
    }

    /// Chart coordinates of the impact points of one orbit, interleaved `x, y`.
    pub fn orbit(&self, theta0: f64, psi0: f64, steps: usize) -> Result<Vec<f64>> {
        let orbit = iterate(&self.oval, BilliardState::new(theta0, psi0)?, steps, Stepper::Generic)?;
        let curve = self.oval.curve();
        Ok(orbit.states.iter().flat_map(|s| chart(curve.point(s.theta))).collect())
    }

    /// `(θ, ψ)` pairs of `orbits` orbits started on the vertical line `θ = theta0`.
    pub fn phase_portrait(&self, theta0: f64, orbits: usize, steps: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(2 * orbits * (steps + 1));
        for i in 0..orbits {
            let psi = PI * (i as f64 + 0.5) / orbits as f64;
            let orbit = iterate(&self.oval, BilliardState::new(theta0, psi)?, steps, Stepper::Generic)?;
            out.extend(orbit.states.iter().flat_map(|s| [s.theta, s.psi]));
        }
        Ok(out)
    }

    /// Closed-form `L₁` against the numerical `(L_ε − mean)/ε`, both centred.
    pub fn melnikov(&self, m: u32, n: u32, grid: usize) -> Result<MelnikovCurves> {
        let curve = self.oval.curve();
        let res = find_resonance(m, n, curve.rho0(), curve.kind())?;
        let closed = melnikov_potential(&res, curve, grid)?;
        let verdict = breakup_verdict(&closed).as_str();
        let shift = mean(&closed.values);
        let predicted = closed.values.iter().map(|v| v - shift).collect();
        let numerical = if curve.epsilon() != 0.0 {
            let samples = subharmonic_potential(&self.oval, &res, grid)?;
            samples.centered().iter().map(|v| v / curve.epsilon()).collect()
        } else {
            Vec::new()
        };
        Ok(MelnikovCurves {
            thetas: closed.thetas,
            predicted,
            numerical,
            constant: closed.constant,
            verdict,
        })
    }
}

pub struct MelnikovCurves {
    pub thetas: Vec<f64>,
    pub predicted: Vec<f64>,
    /// Empty for the unperturbed circle.
    pub numerical: Vec<f64>,
    pub constant: f64,
    pub verdict: &'static str,
}
