use alloc::vec::Vec;
use core::ops::{Deref, DerefMut};

use super::assembly::shape_gradients;
use super::mesh::CrossSectionMesh;

/// Nodal values of a continuous piecewise-linear function on a cross-section mesh.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalarField2D {
    pub values: Vec<f64>,
}

impl ScalarField2D {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: alloc::vec![0.0; n] }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        Self::new(self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect())
    }
}

impl Deref for ScalarField2D {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.values
    }
}

impl DerefMut for ScalarField2D {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

/// Per-triangle gradient of a P1 field.
pub fn gradients(mesh: &CrossSectionMesh, f: &[f64]) -> Vec<[f64; 2]> {
    mesh.triangles
        .iter()
        .map(|tri| {
            let p = [mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]];
            let (g, _) = shape_gradients(p);
            let mut d = [0.0; 2];
            for a in 0..3 {
                d[0] += f[tri[a]] * g[a][0];
                d[1] += f[tri[a]] * g[a][1];
            }
            d
        })
        .collect()
}

pub fn integral(mesh: &CrossSectionMesh, f: &[f64]) -> f64 {
    mesh.triangles
        .iter()
        .enumerate()
        .map(|(t, tri)| mesh.triangle_area(t) * (f[tri[0]] + f[tri[1]] + f[tri[2]]) / 3.0)
        .sum()
}

/// `∫_ω f g` exactly for P1 fields.
pub fn inner(mesh: &CrossSectionMesh, f: &[f64], g: &[f64]) -> f64 {
    let mut s = 0.0;
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let a = mesh.triangle_area(t);
        let (f0, f1, f2) = (f[tri[0]], f[tri[1]], f[tri[2]]);
        let (g0, g1, g2) = (g[tri[0]], g[tri[1]], g[tri[2]]);
        s += a / 12.0
            * (2.0 * (f0 * g0 + f1 * g1 + f2 * g2)
                + f0 * (g1 + g2)
                + f1 * (g0 + g2)
                + f2 * (g0 + g1));
    }
    s
}

/// `∮ f g · (n_j) dσ` for every edge, summed with an extra per-edge factor.
pub fn boundary_pairing(
    mesh: &CrossSectionMesh,
    f: &[f64],
    g: &[f64],
    mut factor: impl FnMut(&super::mesh::BoundaryEdge) -> f64,
) -> f64 {
    mesh.edges
        .iter()
        .map(|e| {
            let [i, j] = e.nodes;
            e.length / 6.0 * (2.0 * f[i] * g[i] + f[i] * g[j] + f[j] * g[i] + 2.0 * f[j] * g[j]) * factor(e)
        })
        .sum()
}
