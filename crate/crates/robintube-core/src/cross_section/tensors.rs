use alloc::vec::Vec;
use num_traits::Float;

use super::field::{boundary_pairing, gradients};
use super::ground::{CrossSection, GroundState, MomentRoute};
use super::shape::ShapeFunctions;
use crate::{Error, Result};

/// Tensor/form disagreement above which the computation is rejected, on fine meshes.
pub const LEMMA_HARD: f64 = 1e-4;

/// Rejection threshold for a mesh: the three expressions differ by `O(h²)`.
pub fn lemma_threshold(cs: &CrossSection) -> f64 {
    LEMMA_HARD.max(cs.mesh.max_edge().powi(2))
}

/// The tensor value `½M0ξ·ξ` next to the two integral forms of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaCheck {
    pub xi: [f64; 2],
    pub tensor: f64,
    /// `∫(ξ·∇χ_ξ)u0 + ∫(ξ·∇u0)(ξ·y)u0`.
    pub first: f64,
    /// `∫(ξ·∇u0)χ_ξ + (ρ0·ξ)(y0·ξ)`.
    pub second: f64,
}

impl LemmaCheck {
    pub fn max_gap(&self) -> f64 {
        (self.tensor - self.first)
            .abs()
            .max((self.tensor - self.second).abs())
            .max((self.first - self.second).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationTensors {
    /// Symmetric part of the second-order tensor.
    pub m0: [[f64; 2]; 2],
    /// `|M01 − M10| / 2` before symmetrization.
    pub asymmetry: f64,
    pub route: MomentRoute,
    /// Checks for `ξ ∈ {e1, e2, e1 + e2}`.
    pub checks: Vec<LemmaCheck>,
}

impl PerturbationTensors {
    pub fn half_quadratic(&self, xi: [f64; 2]) -> f64 {
        half_form(&self.m0, xi)
    }

    pub fn max_gap(&self) -> f64 {
        self.checks.iter().map(LemmaCheck::max_gap).fold(0.0, f64::max)
    }
}

pub(crate) fn half_form(m: &[[f64; 2]; 2], xi: [f64; 2]) -> f64 {
    0.5 * (m[0][0] * xi[0] * xi[0] + (m[0][1] + m[1][0]) * xi[0] * xi[1] + m[1][1] * xi[1] * xi[1])
}

fn tri_pair(area: f64, f: [f64; 3], g: [f64; 3]) -> f64 {
    area / 12.0
        * (2.0 * (f[0] * g[0] + f[1] * g[1] + f[2] * g[2])
            + f[0] * (g[1] + g[2])
            + f[1] * (g[0] + g[2])
            + f[2] * (g[0] + g[1]))
}

/// `∮ w f g dσ` for linear `w` along each edge, with `w = y_j`.
fn boundary_triple(cs: &CrossSection, f: &[f64], g: &[f64], weight: impl Fn([f64; 2]) -> f64, factor: impl Fn(&super::mesh::BoundaryEdge) -> f64) -> f64 {
    let mut s = 0.0;
    for e in &cs.mesh.edges {
        let [i, j] = e.nodes;
        let (wi, wj) = (weight(cs.mesh.vertices[i]), weight(cs.mesh.vertices[j]));
        let m = super::assembly::edge_mass(e.length, wi, wj);
        s += factor(e) * (m[0] * f[i] * g[i] + m[1] * f[i] * g[j] + m[2] * f[j] * g[i] + m[3] * f[j] * g[j]);
    }
    s
}

/// The four-term boundary tensor
/// `−½I + ρ0⊗y0 + ½∮u0²(y⊗n) + ∮u0(χ⊗n)`, unsymmetrized, using the flux `ρ0`.
pub fn boundary_tensor(cs: &CrossSection, gs: &GroundState, sf: &ShapeFunctions) -> [[f64; 2]; 2] {
    let u = &gs.u0;
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let ident = if i == j { -0.5 } else { 0.0 };
            let yn = 0.5 * boundary_triple(cs, u, u, |p| p[i], |e| e.normal[j]);
            let chin = boundary_pairing(&cs.mesh, u, &sf.chi[i], |e| e.normal[j]);
            m[i][j] = ident + gs.rho0[i] * gs.y0[j] + yn + chin;
        }
    }
    m
}

/// Hessian of the discrete eigenvalue: `H = d⊗y0 + y0⊗d − 2χᵀ(K − λ0M)χ`.
pub fn variational_tensor(cs: &CrossSection, gs: &GroundState, sf: &ShapeFunctions) -> [[f64; 2]; 2] {
    let p = &cs.pencil;
    let d = gs.rho0_variational;
    let s: Vec<Vec<f64>> = sf
        .chi
        .iter()
        .map(|c| {
            let k = p.k.matvec(c);
            let m = p.m.matvec(c);
            k.iter().zip(&m).map(|(a, b)| a - gs.lambda0 * b).collect()
        })
        .collect();
    let mut h = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let cs_ij: f64 = sf.chi[i].iter().zip(&s[j]).map(|(a, b)| a * b).sum();
            h[i][j] = d[i] * gs.y0[j] + gs.y0[i] * d[j] - 2.0 * cs_ij;
        }
    }
    h
}

/// Both integral forms of `½M0ξ·ξ` for the given correctors.
pub fn lemma_forms(cs: &CrossSection, gs: &GroundState, sf: &ShapeFunctions, xi: [f64; 2]) -> (f64, f64) {
    let mesh = &cs.mesh;
    let chi = sf.chi_xi(xi);
    let gu = gradients(mesh, &gs.u0);
    let gc = gradients(mesh, &chi);
    let rho = gs.rho(sf.route);
    let (mut first, mut second) = (0.0, 0.0);
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let area = mesh.triangle_area(t);
        let u = [gs.u0[tri[0]], gs.u0[tri[1]], gs.u0[tri[2]]];
        let c = [chi[tri[0]], chi[tri[1]], chi[tri[2]]];
        let xy = tri.map(|a| xi[0] * mesh.vertices[a][0] + xi[1] * mesh.vertices[a][1]);
        let dxu = xi[0] * gu[t][0] + xi[1] * gu[t][1];
        let dxc = xi[0] * gc[t][0] + xi[1] * gc[t][1];
        let mean = |v: [f64; 3]| area * (v[0] + v[1] + v[2]) / 3.0;
        first += dxc * mean(u) + dxu * tri_pair(area, xy, u);
        second += dxu * mean(c);
    }
    second += (rho[0] * xi[0] + rho[1] * xi[1]) * (gs.y0[0] * xi[0] + gs.y0[1] * xi[1]);
    (first, second)
}

pub fn compute_m0(cs: &CrossSection, gs: &GroundState, sf: &ShapeFunctions) -> Result<PerturbationTensors> {
    let raw = match sf.route {
        MomentRoute::Boundary => boundary_tensor(cs, gs, sf),
        MomentRoute::Variational => variational_tensor(cs, gs, sf),
    };
    let off = 0.5 * (raw[0][1] + raw[1][0]);
    let m0 = [[raw[0][0], off], [off, raw[1][1]]];
    let asymmetry = 0.5 * (raw[0][1] - raw[1][0]).abs();
    let checks: Vec<LemmaCheck> = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]
        .into_iter()
        .map(|xi| {
            let (first, second) = lemma_forms(cs, gs, sf, xi);
            LemmaCheck { xi, tensor: half_form(&m0, xi), first, second }
        })
        .collect();
    let t = PerturbationTensors { m0, asymmetry, route: sf.route, checks };
    let gap = t.max_gap();
    if !(gap <= lemma_threshold(cs)) {
        return Err(Error::CrossCheck { what: "moment tensor against integral forms".into(), gap });
    }
    Ok(t)
}
