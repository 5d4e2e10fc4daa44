//! Embedded models of the three constant-curvature surfaces.
//!
//! Points live in R³: the Euclidean plane is the slice `z = 1`, the sphere is
//! the open upper hemisphere of `x² + y² + z² = 1`, and the hyperbolic plane is
//! the upper sheet of `x² + y² − z² = −1` in Minkowski space. Geodesics are the
//! intersections of the surface with planes through the origin.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Tolerance on the surface equations.
pub const SURFACE_TOL: f64 = 1e-12;
/// Band outside `[-1, 1]` (or below `1` for arccosh) inside which arguments are clamped.
pub const CLAMP_BAND: f64 = 1e-9;

/// One of the three model surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    Euclidean,
    Sphere,
    Hyperbolic,
}

impl SurfaceKind {
    pub const ALL: [SurfaceKind; 3] = [
        SurfaceKind::Euclidean,
        SurfaceKind::Sphere,
        SurfaceKind::Hyperbolic,
    ];

    /// Radial profile `S(ρ)`: the Euclidean radius of the geodesic circle of radius `ρ`.
    #[inline]
    pub fn radial(self, rho: f64) -> f64 {
        match self {
            SurfaceKind::Euclidean => rho,
            SurfaceKind::Sphere => rho.sin(),
            SurfaceKind::Hyperbolic => rho.sinh(),
        }
    }

    /// Height profile: the `z` coordinate of a point at geodesic radius `ρ`.
    #[inline]
    pub fn height(self, rho: f64) -> f64 {
        match self {
            SurfaceKind::Euclidean => 1.0,
            SurfaceKind::Sphere => rho.cos(),
            SurfaceKind::Hyperbolic => rho.cosh(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Euclidean => "euclidean",
            SurfaceKind::Sphere => "sphere",
            SurfaceKind::Hyperbolic => "hyperbolic",
        }
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A plain vector of R³.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Flip the sign of the `z` component.
    #[inline]
    fn flip_z(self) -> Vec3 {
        Vec3::new(self.x, self.y, -self.z)
    }

    pub fn max_abs_diff(self, o: Vec3) -> f64 {
        (self.x - o.x)
            .abs()
            .max((self.y - o.y).abs())
            .max((self.z - o.z).abs())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        Vec3::new(self * v.x, self * v.y, self * v.z)
    }
}

/// Ambient product: Euclidean signature for the plane and sphere, `(+,+,−)` for
/// the hyperboloid.
#[inline]
pub fn ambient_inner(u: Vec3, v: Vec3, kind: SurfaceKind) -> f64 {
    match kind {
        SurfaceKind::Euclidean | SurfaceKind::Sphere => u.dot(v),
        SurfaceKind::Hyperbolic => u.x * v.x + u.y * v.y - u.z * v.z,
    }
}

/// Norm of a tangent vector in the surface metric.
#[inline]
pub fn metric_norm(v: Vec3, kind: SurfaceKind) -> f64 {
    ambient_inner(v, v, kind).max(0.0).sqrt()
}

/// A point on one of the model surfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub coords: Vec3,
    pub kind: SurfaceKind,
}

impl Point3 {
    /// Wrap ambient coordinates, checking that they lie on the surface.
    pub fn new(coords: Vec3, kind: SurfaceKind) -> Result<Self> {
        let p = Point3 { coords, kind };
        let residual = p.surface_residual();
        if residual > SURFACE_TOL * (1.0 + coords.norm().powi(2)) {
            return Err(Error::Domain(format!(
                "({}, {}, {}) is off the {kind} surface by {residual:e}",
                coords.x, coords.y, coords.z
            )));
        }
        Ok(p)
    }

    pub(crate) fn unchecked(coords: Vec3, kind: SurfaceKind) -> Self {
        Point3 { coords, kind }
    }

    /// Deviation from the defining equation of the surface, including the
    /// sheet/hemisphere condition.
    pub fn surface_residual(&self) -> f64 {
        let c = self.coords;
        match self.kind {
            SurfaceKind::Euclidean => (c.z - 1.0).abs(),
            SurfaceKind::Sphere => {
                if c.z > 0.0 {
                    (c.dot(c) - 1.0).abs()
                } else {
                    f64::INFINITY
                }
            }
            SurfaceKind::Hyperbolic => {
                let r = (ambient_inner(c, c, self.kind) + 1.0).abs();
                if c.z >= 1.0 - SURFACE_TOL {
                    r
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Geodesic polar coordinates `(ρ, θ)` of the point.
    pub fn polar(&self) -> (f64, f64) {
        let c = self.coords;
        let planar = c.x.hypot(c.y);
        let rho = match self.kind {
            SurfaceKind::Euclidean => planar,
            SurfaceKind::Sphere => planar.atan2(c.z),
            SurfaceKind::Hyperbolic => planar.asinh(),
        };
        (rho, c.y.atan2(c.x).rem_euclid(std::f64::consts::TAU))
    }
}

/// A vector tangent to the surface at `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub base: Point3,
    pub v: Vec3,
}

impl TangentVector {
    /// Wrap `v` as a tangent vector at `base`, checking tangency.
    pub fn new(base: Point3, v: Vec3) -> Result<Self> {
        let t = TangentVector { base, v };
        let r = t.tangency_residual();
        if r > SURFACE_TOL * (1.0 + v.norm() * base.coords.norm()) {
            return Err(Error::Domain(format!(
                "vector is not tangent to the {} surface (residual {r:e})",
                base.kind
            )));
        }
        Ok(t)
    }

    pub(crate) fn unchecked(base: Point3, v: Vec3) -> Self {
        TangentVector { base, v }
    }

    pub fn tangency_residual(&self) -> f64 {
        match self.base.kind {
            SurfaceKind::Euclidean => self.v.z.abs(),
            kind => ambient_inner(self.base.coords, self.v, kind).abs(),
        }
    }

    pub fn norm(&self) -> f64 {
        metric_norm(self.v, self.base.kind)
    }

    /// Rescale to metric-unit length.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::Degenerate("zero tangent vector".into()));
        }
        Ok(TangentVector {
            base: self.base,
            v: (1.0 / n) * self.v,
        })
    }

    pub fn dot(&self, o: &TangentVector) -> f64 {
        ambient_inner(self.v, o.v, self.base.kind)
    }
}

/// A geodesic through `base` with unit initial velocity `direction`, carried
/// together with the normal of its plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicRay {
    pub base: Point3,
    pub direction: TangentVector,
    pub plane_normal: Vec3,
}

impl GeodesicRay {
    pub fn new(direction: TangentVector) -> Result<Self> {
        let direction = direction.normalized()?;
        let plane_normal = ray_plane_normal(direction.base, direction)?;
        Ok(GeodesicRay {
            base: direction.base,
            direction,
            plane_normal,
        })
    }

    pub fn point_at(&self, s: f64) -> Point3 {
        geodesic_point(self.base, self.direction, s)
    }
}

/// Point at geodesic radius `rho` and polar angle `theta`.
pub fn embed(rho: f64, theta: f64, kind: SurfaceKind) -> Result<Point3> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("radius {rho} must be finite and non-negative")));
    }
    if kind == SurfaceKind::Sphere && rho >= std::f64::consts::PI {
        return Err(Error::Domain(format!("sphere radius {rho} must be below π")));
    }
    let r = kind.radial(rho);
    Ok(Point3::unchecked(
        Vec3::new(r * theta.cos(), r * theta.sin(), kind.height(rho)),
        kind,
    ))
}

fn clamp_unit(c: f64, what: &str) -> Result<f64> {
    if !(-1.0 - CLAMP_BAND..=1.0 + CLAMP_BAND).contains(&c) {
        return Err(Error::Domain(format!("{what} argument {c} outside [-1, 1]")));
    }
    Ok(c.clamp(-1.0, 1.0))
}

/// Geodesic distance between two points of the same surface.
pub fn geodesic_distance(p: Point3, q: Point3) -> Result<f64> {
    if p.kind != q.kind {
        return Err(Error::Domain("points lie on different surfaces".into()));
    }
    let (a, b) = (p.coords, q.coords);
    match p.kind {
        SurfaceKind::Euclidean => Ok((a - b).norm()),
        SurfaceKind::Sphere => {
            let c = clamp_unit(a.dot(b), "arccos")?;
            // Chord form keeps precision for nearby points.
            let chord = (a - b).norm();
            if c > 0.9 {
                Ok(2.0 * (0.5 * chord).min(1.0).asin())
            } else {
                Ok(c.acos())
            }
        }
        SurfaceKind::Hyperbolic => {
            let c = -ambient_inner(a, b, SurfaceKind::Hyperbolic);
            if c < 1.0 - CLAMP_BAND || c.is_nan() {
                return Err(Error::Domain(format!("arccosh argument {c} below 1")));
            }
            // Minkowski chord: ⟨⟨a−b, a−b⟩⟩ = 2(c − 1) = 4 sinh²(d/2).
            let chord2 = ambient_inner(a - b, a - b, SurfaceKind::Hyperbolic).max(0.0);
            if c < 1.5 {
                Ok(2.0 * (0.5 * chord2.sqrt()).asinh())
            } else {
                Ok(c.acosh())
            }
        }
    }
}

/// Follow the geodesic from `p` with unit velocity `v` for arc length `s`.
pub fn geodesic_point(p: Point3, v: TangentVector, s: f64) -> Point3 {
    let (a, d) = (p.coords, v.v);
    let coords = match p.kind {
        SurfaceKind::Euclidean => a + s * d,
        SurfaceKind::Sphere => s.cos() * a + s.sin() * d,
        SurfaceKind::Hyperbolic => s.cosh() * a + s.sinh() * d,
    };
    Point3::unchecked(coords, p.kind)
}

/// Velocity of the geodesic of [`geodesic_point`] after arc length `s`.
pub fn geodesic_velocity(p: Point3, v: TangentVector, s: f64) -> TangentVector {
    let (a, d) = (p.coords, v.v);
    let at = geodesic_point(p, v, s);
    let vel = match p.kind {
        SurfaceKind::Euclidean => d,
        SurfaceKind::Sphere => -s.sin() * a + s.cos() * d,
        SurfaceKind::Hyperbolic => s.sinh() * a + s.cosh() * d,
    };
    TangentVector::unchecked(at, vel)
}

/// Signature-adjusted cross product: orthogonal to both arguments in the
/// ambient product of `kind`.
#[inline]
pub(crate) fn signed_cross(a: Vec3, b: Vec3, kind: SurfaceKind) -> Vec3 {
    let c = a.cross(b);
    match kind {
        SurfaceKind::Hyperbolic => c.flip_z(),
        _ => c,
    }
}

/// Normal of the plane through the origin that cuts out the geodesic through
/// `p` in direction `v`.
pub fn ray_plane_normal(p: Point3, v: TangentVector) -> Result<Vec3> {
    let n = signed_cross(p.coords, v.v, p.kind);
    if n.norm() < 1e-14 * p.coords.norm().max(1.0) * v.v.norm().max(1e-300) || v.v.norm() == 0.0
    {
        return Err(Error::Degenerate(
            "base point and direction are linearly dependent".into(),
        ));
    }
    Ok(n)
}

/// In-surface unit normal to the unit tangent `t`, rotated a quarter turn
/// counterclockwise as seen from outside the surface (towards the pole for a
/// positively oriented circle).
pub(crate) fn quarter_turn(t: TangentVector) -> Vec3 {
    let kind = t.base.kind;
    match kind {
        SurfaceKind::Euclidean => Vec3::new(-t.v.y, t.v.x, 0.0),
        SurfaceKind::Sphere | SurfaceKind::Hyperbolic => signed_cross(t.base.coords, t.v, kind),
    }
}

/// Unit velocity at `q` of the geodesic lying in the plane `p × v`, oriented
/// like `v`. Uses conservation of `X × Ẋ` along geodesics of all three models.
pub(crate) fn velocity_in_plane(q: Point3, moment: Vec3) -> TangentVector {
    let kind = q.kind;
    let a = q.coords;
    // Solutions of a × w = moment are w₀ + λa with w₀ = (moment × a)/|a|².
    let w0 = (1.0 / a.dot(a)) * moment.cross(a);
    let lambda = match kind {
        SurfaceKind::Euclidean => -w0.z / a.z,
        SurfaceKind::Sphere => 0.0,
        SurfaceKind::Hyperbolic => -ambient_inner(a, w0, kind) / ambient_inner(a, a, kind),
    };
    let w = w0 + lambda * a;
    let n = metric_norm(w, kind);
    TangentVector::unchecked(q, (1.0 / n) * w)
}

/// Unsigned angle in `[0, π]` between two unit tangent vectors at one point.
pub fn tangent_angle(t: TangentVector, w: TangentVector) -> Result<f64> {
    if t.base.kind != w.base.kind || t.base.coords.max_abs_diff(w.base.coords) > 1e-9 {
        return Err(Error::BaseMismatch);
    }
    let c = t.dot(&w);
    // The component of w orthogonal to t gives the sine without arccos
    // round-off near 0 and π.
    let perp = w.v - c * t.v;
    let s = metric_norm(perp, t.base.kind);
    Ok(s.atan2(c).clamp(0.0, std::f64::consts::PI))
}
