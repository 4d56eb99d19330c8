//! Symmetric branch: when the balance vector vanishes the low spectrum is
//! `λ0/ε² + μᵢ + o(1)` with `μᵢ` the eigenvalues of a Sturm–Liouville problem
//! on `[0, L]` whose potential collects curvature and twist.

mod constants;
mod potential;
mod sturm;

use alloc::vec::Vec;
use num_traits::Float;

pub use constants::{compute_constants, rotate, EffectiveConstants};
pub use potential::{build_potential, uniform_grid, Potential1D};
pub use sturm::{
    assemble_form_a0, assemble_q_form, end_coefficients, solve_pencil, solve_sturm_liouville, Pencil1D,
    SturmLiouvilleSpectrum, DEFAULT_CELLS,
};

use crate::cross_section::{CrossSectionMesh, GroundState};
use crate::{Error, Result};

/// Largest `|ρ0|` still treated as zero.
pub fn symmetry_tolerance(mesh: &CrossSectionMesh) -> f64 {
    1e-6 * mesh.perimeter().max(1.0)
}

pub fn rho_norm(rho: [f64; 2]) -> f64 {
    (rho[0] * rho[0] + rho[1] * rho[1]).sqrt()
}

pub fn check_symmetric(rho: [f64; 2], tol: f64) -> Result<()> {
    let norm = rho_norm(rho);
    if norm > tol {
        return Err(Error::NotSymmetric { norm });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPrediction {
    pub eps: f64,
    /// `λ0/ε² + μᵢ`.
    pub values: Vec<f64>,
}

pub fn predict_symmetric(
    lambda0: f64,
    rho: [f64; 2],
    tol: f64,
    spectrum: &SturmLiouvilleSpectrum,
    eps: f64,
) -> Result<SymmetricPrediction> {
    check_symmetric(rho, tol)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("ε must lie in (0, 1)"));
    }
    let values = spectrum.values.iter().map(|mu| lambda0 / (eps * eps) + mu).collect();
    Ok(SymmetricPrediction { eps, values })
}

/// Nodal values of `wᵢ(s)u0(y)` on the cross-section at arc length `s`.
pub fn limit_profile(spectrum: &SturmLiouvilleSpectrum, gs: &GroundState, i: usize, s: f64) -> Vec<f64> {
    let w = spectrum.eval(i, s);
    gs.u0.values.iter().map(|u| w * u).collect()
}
