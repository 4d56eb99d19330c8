use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use num_traits::Float;

use super::TubeForm;
use crate::eigencore::{dot, solve_gevp, EigOptions};
use crate::{Error, Result};

pub const TUBE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TubeSpectrum {
    pub eps: f64,
    pub values: Vec<f64>,
    /// `B_ε`-orthonormal eigenvectors.
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub shift: f64,
}

/// Starting shift for the symmetric branch: `λ0/ε² + min(q̄, μ0) − 1`.
pub fn symmetric_shift(lambda0: f64, eps: f64, mean_q: f64, mu0: f64) -> f64 {
    lambda0 / (eps * eps) + mean_q.min(mu0) - 1.0
}

/// Starting shift for the localized branch: `λ0/ε² + μ0/ε`.
pub fn localized_shift(lambda0: f64, eps: f64, mu0: f64) -> f64 {
    lambda0 / (eps * eps) + mu0 / eps
}

/// Lowest `n_modes` eigenpairs of the tube pencil. `lambda0` is only used
/// for the failure hint.
pub fn solve_spectrum_3d(form: &TubeForm, n_modes: usize, shift: f64, lambda0: f64) -> Result<TubeSpectrum> {
    let opts = EigOptions { tol: TUBE_TOL, shift: Some(shift), check_b: false, ..EigOptions::default() };
    let suggested = lambda0 / (form.eps * form.eps);
    let pairs = solve_gevp(&form.a, &form.b, n_modes, &opts).map_err(|e| match e {
        Error::NoConvergence { .. } | Error::Singular { .. } | Error::Invalid(_) => {
            Error::Eigensolver3D { eps: form.eps, suggested, detail: e.to_string() }
        }
        other => other,
    })?;
    Ok(TubeSpectrum {
        eps: form.eps,
        values: pairs.values,
        vectors: pairs.vectors,
        residuals: pairs.residuals,
        shift: pairs.shift,
    })
}

/// `vᵀA v / vᵀB v`.
pub fn rayleigh_quotient(form: &TubeForm, v: &[f64]) -> Result<f64> {
    if v.len() != form.a.dim() {
        return Err(Error::invalid(format!("field has {} values, pencil has {}", v.len(), form.a.dim())));
    }
    let m = form.b.quad_form(v);
    if !(m > 0.0) {
        return Err(Error::invalid("zero field"));
    }
    Ok(form.a.quad_form(v) / m)
}

/// Quotient with the min-max bound against the computed ground level enforced.
pub fn bounded_quotient(form: &TubeForm, spectrum: &TubeSpectrum, v: &[f64]) -> Result<f64> {
    let q = rayleigh_quotient(form, v)?;
    let l0 = spectrum.values[0];
    let gap = l0 - q;
    if gap > 10.0 * TUBE_TOL * l0.abs().max(1.0) {
        return Err(Error::CrossCheck { what: "Rayleigh quotient below the ground level".into(), gap });
    }
    Ok(q)
}

/// Weighted `L²` norm `√(vᵀB v)`.
pub fn weighted_norm(form: &TubeForm, v: &[f64]) -> f64 {
    form.b.quad_form(v).max(0.0).sqrt()
}

pub fn weighted_inner(form: &TubeForm, v: &[f64], w: &[f64]) -> f64 {
    dot(v, &form.b.matvec(w))
}
