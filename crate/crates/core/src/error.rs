use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("tangent vectors are based at different points")]
    BaseMismatch,
    #[error("curve is not convex: geodesic curvature {curvature:e} at theta = {theta}")]
    NotConvex { theta: f64, curvature: f64 },
    #[error("outgoing angle {psi} is within the tangency guard band")]
    Tangency { psi: f64 },
    #[error("root finding failed: {0}")]
    RootFind(String),
    #[error("chord meets the boundary in {crossings} points; the table is not convex")]
    Convexity { crossings: usize },
    #[error("generating function needs distinct impact points (theta = {0})")]
    Coincidence(f64),
    #[error("orbit has {steps} steps; at least {required} are needed")]
    TooShort { steps: usize, required: usize },
    #[error("no angle with advance 2π·{m}/{n} on this circle")]
    NoSolution { m: u32, n: u32 },
    #[error("curve of radius {curve_rho0} does not match the resonance circle of radius {resonance_rho0}")]
    ResonanceMismatch { curve_rho0: f64, resonance_rho0: f64 },
    #[error("continuation failed at theta = {theta}: residual {lo:e} .. {hi:e} over the bracket")]
    Continuation { theta: f64, lo: f64, hi: f64 },
    #[error("empirical convergence order {order} is below 0.5")]
    OrderTest { order: f64 },
    #[error("{0}")]
    Invalid(String),
}
