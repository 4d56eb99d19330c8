use alloc::vec::Vec;
use num_traits::Float;

use super::assembly::min_weight;
use super::field::ScalarField2D;
use super::ground::{smallest_pairs, CrossSection, GroundState, MomentRoute};
use super::shape::ShapeFunctions;
use crate::eigencore::{solve_constrained, SymSparseMatrix};
use crate::geometry::CurveSpec;
use crate::{Error, Result};

/// Smallest admissible value of `1 − ξ·y` on the mesh.
pub const WEIGHT_FLOOR: f64 = 0.5;

fn guard(cs: &CrossSection, xi: [f64; 2]) -> Result<()> {
    let (w, y) = min_weight(&cs.mesh, xi);
    if w < WEIGHT_FLOOR {
        return Err(Error::Degenerate { weight: w, y0: y[0], y1: y[1] });
    }
    Ok(())
}

fn apply(a: &SymSparseMatrix, b: &SymSparseMatrix, shift: f64, v: &[f64]) -> Vec<f64> {
    let av = a.matvec(v);
    let bv = b.matvec(v);
    av.iter().zip(&bv).map(|(x, y)| x - shift * y).collect()
}

/// `Λ0(ξ)`, the smallest eigenvalue of the pencil weighted by `1 − ξ·y`.
///
/// `ξ = 0` returns the ground-state eigenvalue of the identical pencil.
pub fn lambda0_perturbed(cs: &CrossSection, gs: &GroundState, xi: [f64; 2]) -> Result<f64> {
    guard(cs, xi)?;
    if xi == [0.0, 0.0] {
        return Ok(gs.lambda0);
    }
    let (k, m) = cs.pencil.weighted(xi)?;
    let n2 = xi[0] * xi[0] + xi[1] * xi[1];
    let lin = gs.rho0_variational[0] * xi[0] + gs.rho0_variational[1] * xi[1];
    let scale = gs.lambda0.abs().max(1.0);
    let start = gs.lambda0 + lin.min(0.0) - n2 * scale - 1e-2 * scale;
    Ok(smallest_pairs(&k, &m, 1, start)?.values[0])
}

/// `E_ξ(v) = ∫(1−ξ·y)(|∇v|² − (λ0 + ρ·ξ)v²) + ∮(1−ξ·y)γv²`.
pub fn error_functional(
    cs: &CrossSection,
    gs: &GroundState,
    xi: [f64; 2],
    v: &[f64],
    route: MomentRoute,
) -> Result<f64> {
    guard(cs, xi)?;
    let (k, m) = cs.pencil.weighted(xi)?;
    let rho = gs.rho(route);
    let shift = gs.lambda0 + rho[0] * xi[0] + rho[1] * xi[1];
    Ok(k.quad_form(v) - shift * m.quad_form(v))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiEigenvector {
    /// `u0 + εu1 + ε²u2`.
    pub w: ScalarField2D,
    pub u2: ScalarField2D,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `λ0 + ελ1 + ε²λ2`.
    pub value: f64,
    /// `‖(K_εξ − P M_εξ)w‖` in the lumped dual norm.
    pub residual: f64,
}

/// Second-order quasi-eigenvector of the pencil weighted by `1 − εξ·y`.
///
/// With variational correctors the residual is `O(ε³)` for the discrete pencil.
pub fn quasi_eigenvector_residual(
    cs: &CrossSection,
    gs: &GroundState,
    sf: &ShapeFunctions,
    xi: [f64; 2],
    eps: f64,
) -> Result<QuasiEigenvector> {
    let zeta = [eps * xi[0], eps * xi[1]];
    guard(cs, zeta)?;
    let p = &cs.pencil;
    let u0 = &gs.u0;
    let u1 = sf.chi_xi(xi);
    let rho = gs.rho(sf.route);
    let lambda1 = rho[0] * xi[0] + rho[1] * xi[1];
    let (kh, mh) = {
        let k = SymSparseMatrix::linear_combination(&[(xi[0], &p.k1[0]), (xi[1], &p.k1[1])])?;
        let m = SymSparseMatrix::linear_combination(&[(xi[0], &p.m1[0]), (xi[1], &p.m1[1])])?;
        (k, m)
    };
    let xy0 = xi[0] * gs.y0[0] + xi[1] * gs.y0[1];
    let lambda2 = -u0.iter().zip(apply(&kh, &mh, gs.lambda0, &u1)).map(|(a, b)| a * b).sum::<f64>()
        + lambda1 * xy0;

    let t1 = apply(&kh, &mh, gs.lambda0, &u1);
    let mu1 = p.m.matvec(&u1);
    let mhu0 = mh.matvec(u0);
    let mu0 = p.m.matvec(u0);
    let rhs: Vec<f64> = (0..u0.len())
        .map(|a| t1[a] + lambda1 * mu1[a] - lambda1 * mhu0[a] + lambda2 * mu0[a])
        .collect();
    let u2 = solve_constrained(&p.k, gs.lambda0, &p.m, &rhs, u0)?.x;

    let w: Vec<f64> = (0..u0.len()).map(|a| u0[a] + eps * u1[a] + eps * eps * u2[a]).collect();
    let value = gs.lambda0 + eps * lambda1 + eps * eps * lambda2;
    let (k, m) = p.weighted(zeta)?;
    let residual = cs.dual_norm(&apply(&k, &m, value, &w));
    Ok(QuasiEigenvector {
        w: ScalarField2D::new(w),
        u2: ScalarField2D::new(u2),
        lambda1,
        lambda2,
        value,
        residual,
    })
}

/// `m_ε(s) = Λ0(εk(s)z_α(s))`.
pub fn m_eps(curve: &CurveSpec, cs: &CrossSection, gs: &GroundState, s: f64, eps: f64) -> Result<f64> {
    let f = curve.frame_at(s, 0)?;
    lambda0_perturbed(cs, gs, [eps * f.xi[0][0], eps * f.xi[0][1]])
}

/// Spectral gap `Λ1(ξ) − Λ0(ξ)` of the weighted pencil.
pub fn perturbed_gap(cs: &CrossSection, gs: &GroundState, xi: [f64; 2]) -> Result<f64> {
    guard(cs, xi)?;
    let (k, m) = cs.pencil.weighted(xi)?;
    let start = gs.lambda0 - 1e-2 * gs.lambda0.abs().max(1.0) - (xi[0].abs() + xi[1].abs()) * gs.lambda0.abs().max(1.0);
    let pairs = smallest_pairs(&k, &m, 2, start)?;
    Ok(pairs.values[1] - pairs.values[0])
}
