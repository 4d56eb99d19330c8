use alloc::vec::Vec;
use num_traits::Float;

use super::assembly::RobinPencil;
use super::field::{boundary_pairing, ScalarField2D};
use super::mesh::CrossSectionMesh;
use crate::eigencore::{solve_gevp, EigOptions, EigPairs, SymSparseMatrix};
use crate::{Error, Result};

/// Residual tolerance for all cross-section eigenproblems.
pub const CROSS_TOL: f64 = 1e-11;

/// A cross-section mesh with its assembled Robin pencil.
#[derive(Debug, Clone)]
pub struct CrossSection {
    pub mesh: CrossSectionMesh,
    pub pencil: RobinPencil,
    lumped: Vec<f64>,
}

impl CrossSection {
    pub fn new(mesh: CrossSectionMesh) -> Result<Self> {
        mesh.validate()?;
        let pencil = RobinPencil::assemble(&mesh)?;
        let lumped = pencil.m.matvec(&alloc::vec![1.0; mesh.n_nodes()]);
        Ok(Self { mesh, pencil, lumped })
    }

    pub fn n_nodes(&self) -> usize {
        self.mesh.n_nodes()
    }

    /// `sqrt(rᵀ M_L⁻¹ r)` with the lumped mass matrix.
    pub fn dual_norm(&self, r: &[f64]) -> f64 {
        r.iter().zip(&self.lumped).map(|(x, m)| x * x / m).sum::<f64>().sqrt()
    }
}

/// How the first- and second-order moments are discretized.
///
/// `Boundary` evaluates the closed-form boundary integrals (flux `½∮u0²n`,
/// the four-term tensor); `Variational` uses the exact derivatives of the
/// discrete eigenvalue, which the discrete expansions of `Λ0` obey to all orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentRoute {
    Boundary,
    #[default]
    Variational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub lambda0: f64,
    pub u0: ScalarField2D,
    /// `½∮u0² n dσ`.
    pub rho0: [f64; 2],
    /// Gradient of the discrete eigenvalue: `−u0ᵀKⁱu0 + λ0 u0ᵀMⁱu0`.
    pub rho0_variational: [f64; 2],
    /// `∫u0² y`.
    pub y0: [f64; 2],
    /// Second eigenvalue of the same pencil.
    pub lambda1: f64,
}

impl GroundState {
    pub fn rho(&self, route: MomentRoute) -> [f64; 2] {
        match route {
            MomentRoute::Boundary => self.rho0,
            MomentRoute::Variational => self.rho0_variational,
        }
    }

    /// Spectral gap `κ = λ1 − λ0`.
    pub fn kappa(&self) -> f64 {
        self.lambda1 - self.lambda0
    }
}

pub(crate) fn smallest_pairs(
    k: &SymSparseMatrix,
    m: &SymSparseMatrix,
    count: usize,
    start: f64,
) -> Result<EigPairs> {
    // fine meshes stagnate at a roundoff floor proportional to ‖K‖/‖M‖
    let floor = 8.0 * f64::EPSILON * k.norm_inf() / m.norm_inf();
    let opts = EigOptions { tol: CROSS_TOL.max(floor), shift: Some(start), check_b: false, ..EigOptions::default() };
    solve_gevp(k, m, count, &opts)
}

/// `½∮u² n dσ`.
pub fn boundary_flux(mesh: &CrossSectionMesh, u: &[f64]) -> [f64; 2] {
    [
        0.5 * boundary_pairing(mesh, u, u, |e| e.normal[0]),
        0.5 * boundary_pairing(mesh, u, u, |e| e.normal[1]),
    ]
}

pub fn solve_ground_state(cs: &CrossSection) -> Result<GroundState> {
    let p = &cs.pencil;
    let pairs = smallest_pairs(&p.k, &p.m, 2.min(cs.n_nodes()), 0.0)?;
    let lambda0 = pairs.values[0];
    let mut u = pairs.vectors[0].clone();
    let mean: f64 = u.iter().sum();
    if mean < 0.0 {
        u.iter_mut().for_each(|v| *v = -*v);
    }
    let norm = p.m.quad_form(&u);
    let scale = 1.0 / norm.sqrt();
    u.iter_mut().for_each(|v| *v *= scale);
    if let Some((node, &value)) = u.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::NotPositive { node, value });
    }
    let y0 = [p.m1[0].quad_form(&u), p.m1[1].quad_form(&u)];
    let rho0_variational = [
        -p.k1[0].quad_form(&u) + lambda0 * y0[0],
        -p.k1[1].quad_form(&u) + lambda0 * y0[1],
    ];
    let rho0 = boundary_flux(&cs.mesh, &u);
    let lambda1 = pairs.values.get(1).copied().unwrap_or(f64::INFINITY);
    Ok(GroundState { lambda0, u0: ScalarField2D::new(u), rho0, rho0_variational, y0, lambda1 })
}
