use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use super::oscillator::{hermite_mode, oscillator_spectrum};
use super::quadrature::gaussian_integral;
use super::LocalizationData;
use crate::cross_section::PerturbationTensors;
use crate::effective1d::EffectiveConstants;
use crate::geometry::CurveSpec;
use crate::{Error, Result};

const QUAD_TOL: f64 = 1e-14;
/// Disagreement between the basis expansion and the closed form that aborts.
pub const CORRECTION_HARD: f64 = 1e-8;

/// `min ℰ` over span{ŵ1, ŵ3} for `h = (a/6)t³ŵ0`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalCorrection {
    /// Expansion coefficients of `h` on the printed functions `ŵ1`, `ŵ3`.
    pub printed_coefficients: [f64; 2],
    /// Optimal `φ̂` coefficients `−cₖ/(νₖ − ν0)` on the printed functions.
    pub printed_correction: [f64; 2],
    /// Lemma value from the printed expansion.
    pub min_energy: f64,
    /// `−(17/9)(a/ρ0·ξ″)²`.
    pub closed_form: f64,
    /// Coefficients `(h|ŵₖ)` on the orthonormal Hermite functions, `k = 1..=5`.
    pub normalized_coefficients: Vec<f64>,
    /// Lemma value with the orthonormal basis, `−(11/144)(a/ρ0·ξ″)²`.
    pub normalized_min_energy: f64,
}

fn printed_ratio(k: usize, nu0: f64, t: f64) -> f64 {
    let r = nu0.sqrt();
    match k {
        1 => r * t / 2f64.sqrt(),
        _ => nu0 * r * t * t * t / (4.0 * 3f64.sqrt()) - r * 3f64.sqrt() / 4.0 * t,
    }
}

/// Evaluates the oscillator-basis minimization for given `ν0` and `a = ρ0·ξ‴(s0)`.
pub fn optimal_correction_for(nu0: f64, a: f64) -> Result<OptimalCorrection> {
    if !(nu0 > 0.0) {
        return Err(Error::invalid("oscillator frequency must be positive"));
    }
    let w0 = hermite_mode(0, nu0);
    let nus = oscillator_spectrum(nu0, 6);
    // least-squares expansion of t³ŵ0 on the printed ŵ1, ŵ3
    let basis = |k: usize, t: f64| printed_ratio(k, nu0, t) * w0.eval(t);
    let ks = [1usize, 3];
    let mut g = [0.0; 4];
    let mut rhs = [0.0; 2];
    for (p, &kp) in ks.iter().enumerate() {
        for (q, &kq) in ks.iter().enumerate() {
            g[p * 2 + q] = gaussian_integral(|t| basis(kp, t) * basis(kq, t), nu0, QUAD_TOL);
        }
        rhs[p] = gaussian_integral(|t| t * t * t * w0.eval(t) * basis(kp, t), nu0, QUAD_TOL);
    }
    let det = g[0] * g[3] - g[1] * g[2];
    let alpha = [(rhs[0] * g[3] - rhs[1] * g[1]) / det, (g[0] * rhs[1] - g[2] * rhs[0]) / det];
    let c = [a / 6.0 * alpha[0], a / 6.0 * alpha[1]];
    let gaps = [nus[1] - nus[0], nus[3] - nus[0]];
    let min_energy = -(c[0] * c[0] / gaps[0] + c[1] * c[1] / gaps[1]);
    let d2 = 2.0 * nu0 * nu0;
    let closed_form = -17.0 / 9.0 * (a / d2).powi(2);
    let gap = (min_energy - closed_form).abs();
    if gap > CORRECTION_HARD * closed_form.abs().max(1.0) {
        return Err(Error::CrossCheck { what: "printed min E vs -(17/9)(a/d2)^2".into(), gap });
    }
    let mut normalized_coefficients = Vec::with_capacity(5);
    let mut normalized_min_energy = 0.0;
    for k in 1..=5 {
        let wk = hermite_mode(k, nu0);
        let ck = gaussian_integral(|t| a / 6.0 * t * t * t * w0.eval(t) * wk.eval(t), nu0, QUAD_TOL);
        normalized_min_energy -= ck * ck / (nus[k] - nus[0]);
        normalized_coefficients.push(ck);
    }
    Ok(OptimalCorrection {
        printed_coefficients: c,
        printed_correction: [-c[0] / gaps[0], -c[1] / gaps[1]],
        min_energy,
        closed_form,
        normalized_coefficients,
        normalized_min_energy,
    })
}

pub fn optimal_correction(data: &LocalizationData) -> Result<OptimalCorrection> {
    optimal_correction_for(data.nu0, data.d3)
}

/// `θ0` addend by addend.
#[derive(Debug, Clone, PartialEq)]
pub struct Theta0 {
    /// `½M0ξ(s0)·ξ(s0)`.
    pub tensor: f64,
    /// `C1τ̃(s0)²`.
    pub twist: f64,
    /// `−C2τ̃′(s0)`.
    pub derivative: f64,
    /// `(1/16)ρ0·ξ⁽⁴⁾/ρ0·ξ″`.
    pub quartic: f64,
    /// `ρ0·ξ⁽⁴⁾/(32ν0²)`.
    pub quartic_moment: f64,
    /// `∫t⁴ŵ0² · ρ0·ξ⁽⁴⁾/24` by quadrature.
    pub quartic_quadrature: f64,
    /// `−(17/9)(ρ0·ξ‴/ρ0·ξ″)²`.
    pub correction: f64,
    pub value: f64,
}

impl Theta0 {
    /// Largest disagreement among the three quartic evaluations.
    pub fn quartic_discrepancy(&self) -> f64 {
        let q = [self.quartic, self.quartic_moment, self.quartic_quadrature];
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    pub fn local_part(&self) -> f64 {
        self.tensor + self.twist + self.derivative
    }
}

pub fn compute_theta0(
    data: &LocalizationData,
    tensors: &PerturbationTensors,
    consts: &EffectiveConstants,
    curve: &CurveSpec,
) -> Result<Theta0> {
    if !(data.d2 > 0.0) {
        return Err(Error::Localization(format!("rho0 . xi''(s0) = {:.3e} is not positive", data.d2)));
    }
    let f = curve.frame_at(data.s0, 1)?;
    let tensor = tensors.half_quadratic(f.xi[0]);
    let twist = consts.c1 * f.tau_tilde * f.tau_tilde;
    let derivative = -consts.c2 * f.dtau_tilde;
    let quartic = data.d4 / data.d2 / 16.0;
    let quartic_moment = data.d4 / (32.0 * data.nu0 * data.nu0);
    let w0 = hermite_mode(0, data.nu0);
    let quartic_quadrature =
        gaussian_integral(|t| t.powi(4) * w0.eval(t).powi(2), data.nu0, QUAD_TOL) * data.d4 / 24.0;
    let correction = -17.0 / 9.0 * (data.d3 / data.d2).powi(2);
    Ok(Theta0 {
        tensor,
        twist,
        derivative,
        quartic,
        quartic_moment,
        quartic_quadrature,
        correction,
        value: tensor + twist + derivative + quartic + correction,
    })
}
