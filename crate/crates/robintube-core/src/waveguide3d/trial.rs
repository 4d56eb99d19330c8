use alloc::vec::Vec;
use num_traits::Float;

use super::TubeMesh;
use crate::cross_section::{GroundState, ShapeFunctions};
use crate::geometry::CurveSpec;
use crate::localization::{hermite_mode, LocalizationData, OptimalCorrection};
use crate::Result;

/// `f(s)(u0 + εχ_{ξ(s)})` at the tube nodes.
pub fn corrected_field(
    curve: &CurveSpec,
    tube: &TubeMesh,
    gs: &GroundState,
    sf: &ShapeFunctions,
    eps: f64,
    f: impl Fn(f64) -> f64,
) -> Result<Vec<f64>> {
    let mut v = Vec::with_capacity(tube.n_nodes());
    for &s in &tube.s {
        let xi = curve.frame_at(s, 0)?.xi0();
        let chi = sf.chi_xi(xi);
        let fs = f(s);
        v.extend(gs.u0.iter().zip(chi.iter()).map(|(u, c)| fs * (u + eps * c)));
    }
    Ok(v)
}

/// `w(s)(u0 + εχ_{ξ(s)})` with `w` a limit eigenfunction: the symmetric recovery sequence.
pub fn recovery_field(
    curve: &CurveSpec,
    tube: &TubeMesh,
    gs: &GroundState,
    sf: &ShapeFunctions,
    eps: f64,
    w: impl Fn(f64) -> f64,
) -> Result<Vec<f64>> {
    corrected_field(curve, tube, gs, sf, eps, w)
}

/// Longitudinal factor `ŵ0(t) + ε^{1/4}φ̂(t)` of the localized trial field, with
/// `φ̂` the optimal combination of orthonormal Hermite functions.
pub fn trial_profile(data: &LocalizationData, correction: &OptimalCorrection, eps: f64) -> impl Fn(f64) -> f64 {
    let nu0 = data.nu0;
    let w0 = hermite_mode(0, nu0);
    let terms: Vec<(f64, _)> = correction
        .normalized_coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(j, c)| {
            let k = j + 1;
            (-c / (2.0 * nu0 * k as f64), hermite_mode(k, nu0))
        })
        .collect();
    let q = eps.powf(0.25);
    move |t| w0.eval(t) + q * terms.iter().map(|(c, m)| c * m.eval(t)).sum::<f64>()
}

/// The localized trial field in the original variables: `t = (s − s0)/ε^{1/4}`.
pub fn localized_trial_field(
    curve: &CurveSpec,
    tube: &TubeMesh,
    gs: &GroundState,
    sf: &ShapeFunctions,
    data: &LocalizationData,
    correction: &OptimalCorrection,
    eps: f64,
) -> Result<Vec<f64>> {
    let profile = trial_profile(data, correction, eps);
    let q = eps.powf(0.25);
    let s0 = data.s0;
    corrected_field(curve, tube, gs, sf, eps, |s| profile((s - s0) / q))
}
