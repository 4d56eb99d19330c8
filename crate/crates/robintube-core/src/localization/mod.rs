//! Localized branch: with a nonzero balance vector the low modes concentrate
//! at the minimizer `s0` of `φ = ρ0·ξ`, on the length scale `ε^{1/4}`, and
//! their fine structure is that of a harmonic oscillator of frequency `ν0`.

mod feps;
mod oscillator;
mod phi;
mod quadrature;
mod theta;

use alloc::vec::Vec;
use num_traits::Float;

pub use feps::{blowup_grid, f_eps_bounds, FEpsTable};
pub use oscillator::{hermite_all, hermite_mode, oscillator_spectrum, OscillatorMode};
pub use phi::{analyze_phi, LocalizationData, DEFAULT_PHI_CELLS, DEGENERATE, TIE_CELLS, TIE_VALUE};
pub use quadrature::{adaptive, gaussian_integral, window};
pub use theta::{compute_theta0, optimal_correction, optimal_correction_for, OptimalCorrection, Theta0, CORRECTION_HARD};

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedPrediction {
    pub eps: f64,
    /// `λ0/ε² + μ0/ε + νᵢ/√ε`.
    pub values: Vec<f64>,
}

pub fn predict_localized(lambda0: f64, data: &LocalizationData, eps: f64, n: usize) -> LocalizedPrediction {
    let values = oscillator_spectrum(data.nu0, n)
        .into_iter()
        .map(|nu| lambda0 / (eps * eps) + data.mu0 / eps + nu / eps.sqrt())
        .collect();
    LocalizedPrediction { eps, values }
}

/// `νᵢ^ε = √ε(λᵢ^ε − λ0/ε² − μ0/ε)`.
pub fn scaled_level(lambda: f64, lambda0: f64, mu0: f64, eps: f64) -> f64 {
    eps.sqrt() * (lambda - lambda0 / (eps * eps) - mu0 / eps)
}
