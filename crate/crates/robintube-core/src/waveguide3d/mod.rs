//! Ground truth on the fixed domain `(0, L) × ω`: the transformed quadratic form
//! with prism elements, its low spectrum, Rayleigh quotients of trial fields and
//! blow-up profiles of localized modes.

mod blowup;
mod form;
mod report;
mod solve;
mod trial;
mod tube;

pub use blowup::{extract_blowup, mapped_grid, tube_norm_sq, BlowupProfile};
pub use form::{assemble_tube_form, LateralMeasure, TubeForm, BETA_FLOOR};
pub use report::{strictly_decreasing, ErrorScale, ReportRow, SpectralReport};
pub use solve::{
    bounded_quotient, localized_shift, rayleigh_quotient, solve_spectrum_3d, symmetric_shift, weighted_inner,
    weighted_norm, TubeSpectrum, TUBE_TOL,
};
pub use trial::{corrected_field, localized_trial_field, recovery_field, trial_profile};
pub use tube::TubeMesh;
