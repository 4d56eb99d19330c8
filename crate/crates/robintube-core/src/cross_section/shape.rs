use alloc::vec::Vec;

use super::field::{gradients, ScalarField2D};
use super::ground::{CrossSection, GroundState, MomentRoute};
use crate::eigencore::solve_constrained;
use crate::Result;

const NOISE: f64 = 1e-8;

/// Correctors `χ1`, `χ2`; `χ_ξ = ξ1χ1 + ξ2χ2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeFunctions {
    pub chi: [ScalarField2D; 2],
    pub route: MomentRoute,
    /// Dual-norm residual of each discrete system.
    pub residual: [f64; 2],
    /// Relative compatibility defect of each right-hand side before projection.
    pub defect: [f64; 2],
}

impl ShapeFunctions {
    pub fn chi_xi(&self, xi: [f64; 2]) -> ScalarField2D {
        self.chi[0].combine(xi[0], &self.chi[1], xi[1])
    }
}

/// Load vector for `−∂ᵢu0 + ρᵢu0`, integrated exactly against hat functions.
pub fn boundary_load(cs: &CrossSection, gs: &GroundState, i: usize) -> Vec<f64> {
    let mesh = &cs.mesh;
    let mut b = cs.pencil.m.matvec(&gs.u0);
    b.iter_mut().for_each(|v| *v *= gs.rho0[i]);
    for (t, (tri, g)) in mesh.triangles.iter().zip(gradients(mesh, &gs.u0)).enumerate() {
        let share = g[i] * mesh.triangle_area(t) / 3.0;
        for &a in tri {
            b[a] -= share;
        }
    }
    b
}

/// Load vector `(Kⁱ − λ0Mⁱ + dᵢM)u0` of the differentiated discrete eigenproblem.
pub fn variational_load(cs: &CrossSection, gs: &GroundState, i: usize) -> Vec<f64> {
    let p = &cs.pencil;
    let u = &gs.u0;
    let ku = p.k1[i].matvec(u);
    let mu = p.m1[i].matvec(u);
    let m0u = p.m.matvec(u);
    let d = gs.rho0_variational[i];
    (0..u.len()).map(|a| ku[a] - gs.lambda0 * mu[a] + d * m0u[a]).collect()
}

pub fn solve_shape_functions(
    cs: &CrossSection,
    gs: &GroundState,
    route: MomentRoute,
) -> Result<ShapeFunctions> {
    let p = &cs.pencil;
    let scale = p.m.matvec(&gs.u0).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut chi: [ScalarField2D; 2] = Default::default();
    let mut residual = [0.0; 2];
    let mut defect = [0.0; 2];
    for i in 0..2 {
        let mut rhs = match route {
            MomentRoute::Boundary => boundary_load(cs, gs, i),
            MomentRoute::Variational => variational_load(cs, gs, i),
        };
        // loads at the accuracy level of u0 itself (∇u0 ≈ 0) carry no information
        if rhs.iter().fold(0.0f64, |m, v| m.max(v.abs())) <= NOISE * scale {
            rhs.iter_mut().for_each(|v| *v = 0.0);
        }
        let sol = solve_constrained(&p.k, gs.lambda0, &p.m, &rhs, &gs.u0)?;
        let ku = p.k.matvec(&sol.x);
        let mu = p.m.matvec(&sol.x);
        let mut r: Vec<f64> = (0..rhs.len()).map(|a| ku[a] - gs.lambda0 * mu[a] - rhs[a]).collect();
        // the residual is measured modulo the kernel direction
        let mu0 = p.m.matvec(&gs.u0);
        let c: f64 = r.iter().zip(gs.u0.iter()).map(|(x, y)| x * y).sum();
        r.iter_mut().zip(&mu0).for_each(|(x, m)| *x -= c * m);
        residual[i] = cs.dual_norm(&r);
        defect[i] = sol.defect;
        chi[i] = ScalarField2D::new(sol.x);
    }
    Ok(ShapeFunctions { chi, route, residual, defect })
}
