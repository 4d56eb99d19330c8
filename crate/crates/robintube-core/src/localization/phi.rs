use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use crate::effective1d::uniform_grid;
use crate::geometry::CurveSpec;
use crate::{Error, Result};

pub const DEFAULT_PHI_CELLS: usize = 2048;
/// Two grid minima closer than this in value count as a tie.
pub const TIE_VALUE: f64 = 1e-10;
/// ... unless they are within this many cells of each other.
pub const TIE_CELLS: usize = 5;
/// `φ″(s0)` below this fraction of `(max φ − min φ)/L²` is degenerate.
pub const DEGENERATE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationData {
    pub rho0: [f64; 2],
    pub s: Vec<f64>,
    /// `φ(s) = ρ0·ξ(s)` on the grid.
    pub phi: Vec<f64>,
    pub s0: f64,
    /// `φ(s0)`.
    pub mu0: f64,
    pub eta0: f64,
    pub nu0: f64,
    /// `ρ0·ξ⁽ʲ⁾(s0)` for `j = 2, 3, 4`.
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// `(φ, φ′, φ″)` at `s`.
fn phi_jet(curve: &CurveSpec, rho: [f64; 2], s: f64) -> Result<[f64; 3]> {
    let f = curve.frame_at(s, 2)?;
    Ok([dot(rho, f.xi[0]), dot(rho, f.xi[1]), dot(rho, f.xi[2])])
}

pub fn analyze_phi(curve: &CurveSpec, rho0: [f64; 2], sym_tol: f64, n_cells: usize) -> Result<LocalizationData> {
    let norm = dot(rho0, rho0).sqrt();
    if norm <= sym_tol {
        return Err(Error::Localization(format!(
            "balance vector vanishes (|rho0| = {norm:.3e}); use the symmetric branch"
        )));
    }
    let (h, s) = uniform_grid(curve.length, n_cells)?;
    let phi = s
        .iter()
        .map(|&si| curve.frame_at(si, 0).map(|f| dot(rho0, f.xi[0])))
        .collect::<Result<Vec<f64>>>()?;
    let mut imin = 0;
    for (i, v) in phi.iter().enumerate() {
        if *v < phi[imin] {
            imin = i;
        }
    }
    let pmin = phi[imin];
    if let Some((j, _)) = phi
        .iter()
        .enumerate()
        .find(|(j, v)| j.abs_diff(imin) > TIE_CELLS && (**v - pmin).abs() <= TIE_VALUE)
    {
        return Err(Error::Localization(format!(
            "minimizer of phi is not unique (s = {:.6} and s = {:.6})",
            s[imin], s[j]
        )));
    }
    if imin == 0 || imin == n_cells {
        return Err(Error::Localization(format!("minimizer of phi lies on the boundary (s = {})", s[imin])));
    }
    // parabola through the three grid values, then Newton on φ′
    let (a, b, c) = (phi[imin - 1], phi[imin], phi[imin + 1]);
    let curv = a - 2.0 * b + c;
    let mut s0 = if curv > 0.0 { s[imin] + 0.5 * h * (a - c) / curv } else { s[imin] };
    for _ in 0..8 {
        let j = phi_jet(curve, rho0, s0)?;
        if !(j[2] > 0.0) {
            break;
        }
        let next = (s0 - j[1] / j[2]).clamp(s[imin - 1], s[imin + 1]);
        let moved = (next - s0).abs();
        s0 = next;
        if moved <= 1e-15 * curve.length.max(1.0) {
            break;
        }
    }
    let f = curve.frame_at(s0, 4)?;
    let mu0 = dot(rho0, f.xi[0]);
    let d2 = dot(rho0, f.xi[2]);
    let range = phi.iter().copied().fold(f64::NEG_INFINITY, f64::max) - pmin;
    // a vanishing curvature relative to the global variation of φ is degenerate
    if !(d2 > DEGENERATE * range / (curve.length * curve.length)) {
        return Err(Error::Localization(format!("degenerate minimum: phi''(s0) = {d2:.3e}")));
    }
    let nu0 = (0.5 * d2).sqrt();
    let (mut lo, mut hi) = (0.5 * d2, 0.5 * d2);
    for (si, pi) in s.iter().zip(&phi) {
        let r2 = (si - s0) * (si - s0);
        if r2 > (1e-6 * h).powi(2) {
            let ratio = (pi - mu0) / r2;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    if !(lo > 0.0) {
        return Err(Error::Localization(format!(
            "quadratic pinch fails: min (phi - mu0)/|s - s0|^2 = {lo:.3e}"
        )));
    }
    Ok(LocalizationData {
        rho0,
        s,
        phi,
        s0,
        mu0,
        eta0: lo.min(1.0 / hi),
        nu0,
        d2,
        d3: dot(rho0, f.xi[3]),
        d4: dot(rho0, f.xi[4]),
    })
}

impl LocalizationData {
    /// Largest violation of `η0|s−s0|² ≤ φ − μ0 ≤ η0⁻¹|s−s0|²` on the grid.
    pub fn pinch_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (si, pi) in self.s.iter().zip(&self.phi) {
            let r2 = (si - self.s0) * (si - self.s0);
            let d = pi - self.mu0;
            worst = worst.max(self.eta0 * r2 - d).max(d - r2 / self.eta0);
        }
        worst
    }
}
