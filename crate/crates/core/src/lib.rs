//! Billiards inside ovals on the Euclidean plane, the hemisphere and the
//! hyperbolic plane, and first-order (Melnikov) break-up analysis of the
//! resonant invariant circles of the circular billiard.

pub mod billiard;
pub mod curves;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod melnikov;
pub mod roots;
pub mod spectral;

pub use billiard::{
    billiard_step, bounce, circular_alpha, circular_step, generating_function, iterate, momentum_of,
    rotation_number, state_of, BilliardState, Bounce, LiftedOrbit, MomentumState, Stepper,
};
pub use curves::{curve_eval, geodesic_curvature, validate_oval, Mode, Oval, Perturbation, RadialCurve};
pub use error::{Error, Result};
pub use geometry::{
    ambient_inner, embed, geodesic_distance, geodesic_point, ray_plane_normal, tangent_angle,
    GeodesicRay, Point3, SurfaceKind, TangentVector, Vec3,
};
pub use melnikov::{
    breakup_verdict, continue_invariant_radial, find_resonance, first_order_check, melnikov_constant,
    melnikov_potential, subharmonic_potential, FirstOrderReport, MelnikovResult, Resonance,
    SubharmonicPotentialSamples, Verdict,
};
