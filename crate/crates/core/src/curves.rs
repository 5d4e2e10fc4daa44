//! Radial curves `ρ_ε(θ) = ρ₀ + ε·ρ₁(θ)` with a trigonometric-polynomial
//! perturbation, their derivatives, geodesic curvature, and oval validation.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{ambient_inner, metric_norm, quarter_turn, Point3, SurfaceKind, TangentVector, Vec3};

/// Grid used to check the pointwise invariants of a curve.
pub const INVARIANT_GRID: usize = 4096;
/// Default grid for convexity certification.
pub const DEFAULT_OVAL_GRID: usize = 4096;

/// One harmonic of the perturbation: contributes `Re(coef · e^{i·j·θ})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub j: u32,
    pub coef: Complex64,
}

/// Perturbation `ρ₁(θ) = Re Σ a_j e^{ijθ}` stored with non-negative wave numbers.
///
/// A term with negative `j` is folded onto `|j|` by conjugation, so the
/// two-sided coefficients `c_{±j}` are always conjugate.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Perturbation {
    modes: Vec<Mode>,
}

impl Perturbation {
    /// Build from `(j, re, im)` terms. Repeated wave numbers are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, f64, f64)>,
    {
        let mut modes: Vec<Mode> = Vec::new();
        for (j, re, im) in terms {
            let mut c = Complex64::new(re, im);
            if j < 0 {
                c = c.conj();
            }
            let j = j.unsigned_abs() as u32;
            if j == 0 {
                c = Complex64::new(c.re, 0.0);
            }
            match modes.iter_mut().find(|m| m.j == j) {
                Some(m) => m.coef += c,
                None => modes.push(Mode { j, coef: c }),
            }
        }
        modes.sort_by_key(|m| m.j);
        Perturbation { modes }
    }

    /// `ρ₁(θ) = amplitude · cos(jθ)`.
    pub fn cosine(j: u32, amplitude: f64) -> Self {
        Self::from_terms([(j as i64, amplitude, 0.0)])
    }

    pub fn zero() -> Self {
        Perturbation::default()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn is_zero(&self) -> bool {
        self.modes.iter().all(|m| m.coef.norm() == 0.0)
    }

    /// Two-sided Fourier coefficient `c_j` of `ρ₁`.
    pub fn coefficient(&self, j: i64) -> Complex64 {
        let k = j.unsigned_abs() as u32;
        let Some(m) = self.modes.iter().find(|m| m.j == k) else {
            return Complex64::new(0.0, 0.0);
        };
        if k == 0 {
            m.coef
        } else if j > 0 {
            0.5 * m.coef
        } else {
            0.5 * m.coef.conj()
        }
    }

    /// Value and first two derivatives at `theta`.
    pub fn eval(&self, theta: f64) -> [f64; 3] {
        let mut out = [0.0; 3];
        for m in &self.modes {
            let j = m.j as f64;
            let (s, c) = (j * theta).sin_cos();
            let re = m.coef.re * c - m.coef.im * s;
            let im = m.coef.re * s + m.coef.im * c;
            out[0] += re;
            out[1] -= j * im;
            out[2] -= j * j * re;
        }
        out
    }

    pub fn value(&self, theta: f64) -> f64 {
        self.eval(theta)[0]
    }
}

/// A closed curve given in geodesic polar coordinates by `ρ_ε(θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialCurve {
    kind: SurfaceKind,
    rho0: f64,
    perturbation: Perturbation,
    epsilon: f64,
}

/// `Γ(θ)` and its first two θ-derivatives.
#[derive(Debug, Clone, Copy)]
pub struct CurveJet {
    pub point: Point3,
    pub velocity: TangentVector,
    pub acceleration: Vec3,
}

impl RadialCurve {
    /// Checks positivity of `ρ_ε` (and the hemisphere bound on the sphere) on
    /// a [`INVARIANT_GRID`]-point grid.
    pub fn new(kind: SurfaceKind, rho0: f64, perturbation: Perturbation, epsilon: f64) -> Result<Self> {
        if !(rho0 > 0.0) || !rho0.is_finite() {
            return Err(Error::Domain(format!("mean radius {rho0} must be positive")));
        }
        if !epsilon.is_finite() {
            return Err(Error::Domain(format!("epsilon {epsilon} is not finite")));
        }
        let curve = RadialCurve {
            kind,
            rho0,
            perturbation,
            epsilon,
        };
        curve.check_radii(INVARIANT_GRID)?;
        Ok(curve)
    }

    /// The unperturbed geodesic circle of radius `rho0`.
    pub fn circle(kind: SurfaceKind, rho0: f64) -> Result<Self> {
        Self::new(kind, rho0, Perturbation::zero(), 0.0)
    }

    /// Same `ρ₀` and `ρ₁`, different `ε`.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.kind, self.rho0, self.perturbation.clone(), epsilon)
    }

    fn check_radii(&self, grid: usize) -> Result<()> {
        for k in 0..grid {
            let theta = TAU * k as f64 / grid as f64;
            let rho = self.rho(theta);
            if !(rho > 0.0) {
                return Err(Error::Domain(format!(
                    "radius {rho} is not positive at theta = {theta}"
                )));
            }
            if self.kind == SurfaceKind::Sphere && rho >= FRAC_PI_2 {
                return Err(Error::Domain(format!(
                    "radius {rho} at theta = {theta} leaves the open hemisphere"
                )));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn perturbation(&self) -> &Perturbation {
        &self.perturbation
    }

    /// True when the curve is exactly a geodesic circle.
    pub fn is_circle(&self) -> bool {
        self.epsilon == 0.0 || self.perturbation.modes.iter().all(|m| m.j == 0 || m.coef.norm() == 0.0)
    }

    pub fn rho(&self, theta: f64) -> f64 {
        self.rho0 + self.epsilon * self.perturbation.value(theta)
    }

    /// `Γ(θ)`.
    pub fn point(&self, theta: f64) -> Point3 {
        let rho = self.rho(theta);
        let r = self.kind.radial(rho);
        Point3::unchecked(
            Vec3::new(r * theta.cos(), r * theta.sin(), self.kind.height(rho)),
            self.kind,
        )
    }

    /// `Γ`, `Γ'` and `Γ''` at `theta`, differentiated analytically.
    pub fn jet(&self, theta: f64) -> CurveJet {
        let [p, dp, ddp] = self.perturbation.eval(theta);
        let rho = self.rho0 + self.epsilon * p;
        let (d1, d2) = (self.epsilon * dp, self.epsilon * ddp);

        // radial profile a(ρ) and height b(ρ) with their ρ-derivatives
        let (a, a1, a2, b, b1, b2) = match self.kind {
            SurfaceKind::Euclidean => (rho, 1.0, 0.0, 1.0, 0.0, 0.0),
            SurfaceKind::Sphere => {
                let (s, c) = rho.sin_cos();
                (s, c, -s, c, -s, -c)
            }
            SurfaceKind::Hyperbolic => {
                let (s, c) = (rho.sinh(), rho.cosh());
                (s, c, s, c, s, c)
            }
        };
        let da = a1 * d1;
        let dda = a2 * d1 * d1 + a1 * d2;
        let db = b1 * d1;
        let ddb = b2 * d1 * d1 + b1 * d2;

        let (s, c) = theta.sin_cos();
        let point = Point3::unchecked(Vec3::new(a * c, a * s, b), self.kind);
        let velocity = Vec3::new(da * c - a * s, da * s + a * c, db);
        let acceleration = Vec3::new(
            dda * c - 2.0 * da * s - a * c,
            dda * s + 2.0 * da * c - a * s,
            ddb,
        );
        CurveJet {
            point,
            velocity: TangentVector::unchecked(point, velocity),
            acceleration,
        }
    }

    /// Metric speed `‖Γ'(θ)‖`.
    pub fn speed(&self, theta: f64) -> f64 {
        self.jet(theta).velocity.norm()
    }

    /// Unit tangent (increasing θ) and inward unit normal at `theta`.
    pub fn frame(&self, theta: f64) -> Result<(TangentVector, TangentVector)> {
        let jet = self.jet(theta);
        frame_of(&jet)
    }
}

pub(crate) fn frame_of(jet: &CurveJet) -> Result<(TangentVector, TangentVector)> {
    let speed = jet.velocity.norm();
    if speed < 1e-12 {
        return Err(Error::Degenerate(format!("curve is singular (speed {speed:e})")));
    }
    let t = TangentVector::unchecked(jet.point, (1.0 / speed) * jet.velocity.v);
    let n = TangentVector::unchecked(jet.point, quarter_turn(t));
    Ok((t, n))
}

/// Derivatives of `Γ` requested by `order` (0, 1 or 2).
pub fn curve_eval(curve: &RadialCurve, theta: f64, order: u8) -> (Point3, Option<TangentVector>, Option<Vec3>) {
    let jet = curve.jet(theta);
    (
        jet.point,
        (order >= 1).then_some(jet.velocity),
        (order >= 2).then_some(jet.acceleration),
    )
}

/// Signed geodesic curvature, positive when the curve bends towards the
/// inward normal.
pub fn geodesic_curvature(curve: &RadialCurve, theta: f64) -> Result<f64> {
    let jet = curve.jet(theta);
    let (_, n) = frame_of(&jet)?;
    let kind = curve.kind;
    let x = jet.point.coords;
    // tangential part of the ambient acceleration
    let acc = match kind {
        SurfaceKind::Euclidean => Vec3::new(jet.acceleration.x, jet.acceleration.y, 0.0),
        SurfaceKind::Sphere => jet.acceleration - ambient_inner(jet.acceleration, x, kind) * x,
        SurfaceKind::Hyperbolic => jet.acceleration + ambient_inner(jet.acceleration, x, kind) * x,
    };
    let speed2 = metric_norm(jet.velocity.v, kind).powi(2);
    Ok(ambient_inner(acc, n.v, kind) / speed2)
}

/// A radial curve certified to have positive geodesic curvature on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Oval {
    curve: RadialCurve,
    min_curvature: f64,
    min_at: f64,
    grid: usize,
}

impl Oval {
    pub fn curve(&self) -> &RadialCurve {
        &self.curve
    }

    pub fn kind(&self) -> SurfaceKind {
        self.curve.kind
    }

    /// Smallest geodesic curvature seen on the certification grid.
    pub fn curvature_margin(&self) -> f64 {
        self.min_curvature
    }

    /// Where the smallest curvature occurs.
    pub fn margin_theta(&self) -> f64 {
        self.min_at
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Validated geodesic circle.
    pub fn circle(kind: SurfaceKind, rho0: f64) -> Result<Self> {
        validate_oval(RadialCurve::circle(kind, rho0)?, DEFAULT_OVAL_GRID)
    }
}

/// Certify convexity of `curve` on a `grid`-point mesh.
pub fn validate_oval(curve: RadialCurve, grid: usize) -> Result<Oval> {
    if grid < 256 {
        return Err(Error::Invalid(format!("oval grid {grid} is below 256")));
    }
    curve.check_radii(grid.max(INVARIANT_GRID))?;
    let mut min_curvature = f64::INFINITY;
    let mut min_at = 0.0;
    for k in 0..grid {
        let theta = TAU * k as f64 / grid as f64;
        let kg = geodesic_curvature(&curve, theta)?;
        if kg < min_curvature {
            min_curvature = kg;
            min_at = theta;
        }
    }
    if !(min_curvature > 0.0) {
        return Err(Error::NotConvex {
            theta: min_at,
            curvature: min_curvature,
        });
    }
    Ok(Oval {
        curve,
        min_curvature,
        min_at,
        grid,
    })
}
