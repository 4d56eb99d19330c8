use alloc::vec::Vec;
use num_traits::Float;

use super::TubeMesh;
use crate::eigencore::SymSparseMatrix;
use crate::localization::hermite_mode;

/// Rescaled mode `v̂(t, y) = ε^{1/8} v(s0 + ε^{1/4}t, y)` on a `t` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupProfile {
    pub eps: f64,
    pub s0: f64,
    pub t: Vec<f64>,
    /// One cross-section slice per `t`.
    pub slices: Vec<Vec<f64>>,
    /// `‖v̂‖²` over the grid.
    pub norm_sq: f64,
}

fn slice_product(m: &SymSparseMatrix, a: &[f64], b: &[f64]) -> f64 {
    m.bilinear(a, b)
}

/// `∫∫ f g` for fields linear in `t` between grid points.
fn tensor_inner(m: &SymSparseMatrix, t: &[f64], f: &[Vec<f64>], g: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for j in 0..t.len().saturating_sub(1) {
        let h = t[j + 1] - t[j];
        let (a0, a1, b0, b1) = (&f[j], &f[j + 1], &g[j], &g[j + 1]);
        s += h / 6.0
            * (2.0 * slice_product(m, a0, b0)
                + 2.0 * slice_product(m, a1, b1)
                + slice_product(m, a0, b1)
                + slice_product(m, a1, b0));
    }
    s
}

/// `t` grid made of the mapped tube nodes, each cell split `refine` times.
pub fn mapped_grid(tube: &TubeMesh, s0: f64, eps: f64, refine: usize) -> Vec<f64> {
    let q = eps.powf(0.25);
    let r = refine.max(1);
    let mut t = Vec::with_capacity(tube.n_cells() * r + 1);
    for j in 0..tube.n_cells() {
        for k in 0..r {
            let s = tube.s[j] + tube.step * k as f64 / r as f64;
            t.push((s - s0) / q);
        }
    }
    t.push((tube.length - s0) / q);
    t
}

pub fn extract_blowup(tube: &TubeMesh, v: &[f64], s0: f64, eps: f64, t: &[f64], mass: &SymSparseMatrix) -> BlowupProfile {
    let q = eps.powf(0.25);
    let amp = eps.powf(0.125);
    let slices: Vec<Vec<f64>> = t
        .iter()
        .map(|ti| tube.slice_at(v, s0 + q * ti).into_iter().map(|x| amp * x).collect())
        .collect();
    let norm_sq = tensor_inner(mass, t, &slices, &slices);
    BlowupProfile { eps, s0, t: t.to_vec(), slices, norm_sq }
}

/// `∫∫|v|² ds dy` of a nodal tube field.
pub fn tube_norm_sq(tube: &TubeMesh, v: &[f64], mass: &SymSparseMatrix) -> f64 {
    let slices: Vec<Vec<f64>> = (0..tube.s.len()).map(|j| tube.slice(v, j).to_vec()).collect();
    tensor_inner(mass, &tube.s, &slices, &slices)
}

impl BlowupProfile {
    /// Distance between the normalized profile and `±f(t)u(y)`, normalized on the same grid.
    pub fn distance_to(&self, f: impl Fn(f64) -> f64, u: &[f64], mass: &SymSparseMatrix) -> f64 {
        let target: Vec<Vec<f64>> = self.t.iter().map(|&ti| u.iter().map(|x| f(ti) * x).collect()).collect();
        let tt = tensor_inner(mass, &self.t, &target, &target);
        let vt = tensor_inner(mass, &self.t, &self.slices, &target);
        let c = vt / (self.norm_sq * tt).sqrt();
        (2.0 - 2.0 * c.abs()).max(0.0).sqrt()
    }

    /// Distance to `±ŵᵢ ⊗ u0`.
    pub fn hermite_distance(&self, i: usize, nu0: f64, u0: &[f64], mass: &SymSparseMatrix) -> f64 {
        let w = hermite_mode(i, nu0);
        self.distance_to(|t| w.eval(t), u0, mass)
    }

    /// Slice norms `‖v̂(t, ·)‖`.
    pub fn slice_norms(&self, mass: &SymSparseMatrix) -> Vec<f64> {
        self.slices.iter().map(|s| mass.quad_form(s).max(0.0).sqrt()).collect()
    }

    /// Smaller of the two end slice norms over the largest slice norm: near zero for
    /// localized modes, order one for delocalized ones.
    pub fn edge_ratio(&self, mass: &SymSparseMatrix) -> f64 {
        let n = self.slice_norms(mass);
        let top = n.iter().cloned().fold(0.0, f64::max);
        let edge = n[0].min(n[n.len() - 1]);
        edge / top
    }
}
