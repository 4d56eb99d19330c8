//! Numerical core for the Robin Laplacian on thin twisted tubes.
//!
//! Everything here is pure and allocation-only: sparse eigensolvers, centerline
//! geometry, cross-section finite elements, the effective one-dimensional and
//! harmonic-oscillator models, and the transformed three-dimensional form used
//! as ground truth. File formats and the command line live in `robintube`.
#![no_std]
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cross_section;
pub mod effective1d;
pub mod eigencore;
pub mod error;
pub mod geometry;
pub mod localization;
pub mod waveguide3d;

pub use error::{Error, Result};
