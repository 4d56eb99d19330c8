//! Centerline data `(k, τ, α)`, the derived quantities `ξ = k z_α`, `τ̃ = τ + α′`
//! and `β_ε`, Frenet integration, and a physical-space surface export.

mod curve;
mod frenet;
mod profile;
mod surface;

pub use curve::{beta_from, Beta, CurveSpec, FrameData};
pub use frenet::{dot3, integrate_frenet, FrenetSamples, Vec3};
pub use profile::{fornberg, Profile, MAX_ORDER};
pub use surface::{export_tube, SurfaceMesh};
