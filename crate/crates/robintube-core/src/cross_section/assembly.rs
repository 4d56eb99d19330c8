use alloc::vec::Vec;

use super::mesh::CrossSectionMesh;
use crate::eigencore::{SymSparseMatrix, TripletBuilder};
use crate::{Error, Result};

/// Robin stiffness and mass matrices together with their first moments, so
/// that the weight `1 − ξ·y` enters affinely:
/// `K_ξ = K − ξ₁K¹ − ξ₂K²`, `M_ξ = M − ξ₁M¹ − ξ₂M²`.
///
/// `K` discretizes `∫|∇v|² + ∮γv²`, `Kⁱ` the same with weight `yᵢ`; `M` and
/// `Mⁱ` the plain and `yᵢ`-weighted mass. All six share one sparsity pattern.
#[derive(Debug, Clone)]
pub struct RobinPencil {
    pub k: SymSparseMatrix,
    pub m: SymSparseMatrix,
    pub k1: [SymSparseMatrix; 2],
    pub m1: [SymSparseMatrix; 2],
}

/// Gradients of the barycentric coordinates and the area of a triangle.
pub fn shape_gradients(p: [[f64; 2]; 3]) -> ([[f64; 2]; 3], f64) {
    let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    let g = [
        [(p[1][1] - p[2][1]) / det, (p[2][0] - p[1][0]) / det],
        [(p[2][1] - p[0][1]) / det, (p[0][0] - p[2][0]) / det],
        [(p[0][1] - p[1][1]) / det, (p[1][0] - p[0][0]) / det],
    ];
    (g, 0.5 * det)
}

/// `∫_T w λ_a λ_b` for affine `w` with vertex values `wv`.
pub fn weighted_mass(area: f64, wv: [f64; 3]) -> [f64; 9] {
    let mut m = [0.0; 9];
    for a in 0..3 {
        for b in 0..3 {
            let mut s = 0.0;
            for (c, w) in wv.iter().enumerate() {
                let coeff = if a == b && b == c {
                    1.0 / 10.0
                } else if a == b || b == c || a == c {
                    1.0 / 30.0
                } else {
                    1.0 / 60.0
                };
                s += coeff * w;
            }
            m[a * 3 + b] = area * s;
        }
    }
    m
}

/// `∫_e w φ_a φ_b` on a segment of length `l` with endpoint weights `w0`, `w1`.
pub fn edge_mass(l: f64, w0: f64, w1: f64) -> [f64; 4] {
    let o = l / 12.0 * (w0 + w1);
    [l / 12.0 * (3.0 * w0 + w1), o, o, l / 12.0 * (w0 + 3.0 * w1)]
}

impl RobinPencil {
    pub fn assemble(mesh: &CrossSectionMesh) -> Result<Self> {
        let n = mesh.n_nodes();
        let cap = 6 * mesh.triangles.len() + 3 * mesh.edges.len();
        let mut b: [TripletBuilder; 6] = core::array::from_fn(|_| TripletBuilder::with_capacity(n, cap));
        for tri in &mesh.triangles {
            let p = [mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]];
            let (g, area) = shape_gradients(p);
            let cen = [(p[0][0] + p[1][0] + p[2][0]) / 3.0, (p[0][1] + p[1][1] + p[2][1]) / 3.0];
            let m0 = weighted_mass(area, [1.0; 3]);
            let mx = weighted_mass(area, [p[0][0], p[1][0], p[2][0]]);
            let my = weighted_mass(area, [p[0][1], p[1][1], p[2][1]]);
            for a in 0..3 {
                for c in 0..=a {
                    let s = area * (g[a][0] * g[c][0] + g[a][1] * g[c][1]);
                    let (i, j) = (tri[a], tri[c]);
                    b[0].add(i, j, s);
                    b[1].add(i, j, m0[a * 3 + c]);
                    b[2].add(i, j, s * cen[0]);
                    b[3].add(i, j, s * cen[1]);
                    b[4].add(i, j, mx[a * 3 + c]);
                    b[5].add(i, j, my[a * 3 + c]);
                }
            }
        }
        for e in &mesh.edges {
            let [i, j] = e.nodes;
            let (pi, pj) = (mesh.vertices[i], mesh.vertices[j]);
            let e0 = edge_mass(e.length, 1.0, 1.0);
            let ex = edge_mass(e.length, pi[0], pj[0]);
            let ey = edge_mass(e.length, pi[1], pj[1]);
            for (bi, em) in [(0usize, e0), (2, ex), (3, ey)] {
                b[bi].add(i, i, e.gamma * em[0]);
                b[bi].add(j, i, e.gamma * em[2]);
                b[bi].add(j, j, e.gamma * em[3]);
            }
            // keep one common pattern
            for bi in [1usize, 4, 5] {
                b[bi].add(j, i, 0.0);
            }
        }
        let mut mats: Vec<SymSparseMatrix> = Vec::with_capacity(6);
        for builder in b {
            mats.push(builder.build()?);
        }
        // union the patterns so every matrix aligns entry-for-entry
        let zero = SymSparseMatrix::linear_combination(
            &mats.iter().map(|m| (0.0, m)).collect::<Vec<_>>(),
        )?;
        let aligned: Vec<SymSparseMatrix> = mats
            .iter()
            .map(|m| SymSparseMatrix::linear_combination(&[(1.0, m), (0.0, &zero)]))
            .collect::<Result<_>>()?;
        let mut it = aligned.into_iter();
        let k = it.next().unwrap();
        let m = it.next().unwrap();
        let kx = it.next().unwrap();
        let ky = it.next().unwrap();
        let mx = it.next().unwrap();
        let my = it.next().unwrap();
        Ok(Self { k, m, k1: [kx, ky], m1: [mx, my] })
    }

    /// `(K_ξ, M_ξ)` for the weight `1 − ξ·y`.
    pub fn weighted(&self, xi: [f64; 2]) -> Result<(SymSparseMatrix, SymSparseMatrix)> {
        let k = SymSparseMatrix::linear_combination(&[
            (1.0, &self.k),
            (-xi[0], &self.k1[0]),
            (-xi[1], &self.k1[1]),
        ])?;
        let m = SymSparseMatrix::linear_combination(&[
            (1.0, &self.m),
            (-xi[0], &self.m1[0]),
            (-xi[1], &self.m1[1]),
        ])?;
        Ok((k, m))
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }
}

/// Smallest value of `1 − ξ·y` over the mesh (attained at a vertex).
pub fn min_weight(mesh: &CrossSectionMesh, xi: [f64; 2]) -> (f64, [f64; 2]) {
    mesh.vertices
        .iter()
        .map(|p| (1.0 - xi[0] * p[0] - xi[1] * p[1], *p))
        .fold((f64::INFINITY, [0.0; 2]), |acc, x| if x.0 < acc.0 { x } else { acc })
}

/// Assembles `(K, M)` for `∫w|∇v|² + ∮wγv²` and `∫wv²` with `w = 1 − ξ·y`
/// (`w ≡ 1` when `xi` is `None`).
pub fn assemble_robin(
    mesh: &CrossSectionMesh,
    xi: Option<[f64; 2]>,
) -> Result<(SymSparseMatrix, SymSparseMatrix)> {
    let xi = xi.unwrap_or([0.0; 2]);
    let (w, y) = min_weight(mesh, xi);
    if !(w > 0.0) {
        return Err(Error::Degenerate { weight: w, y0: y[0], y1: y[1] });
    }
    RobinPencil::assemble(mesh)?.weighted(xi)
}
