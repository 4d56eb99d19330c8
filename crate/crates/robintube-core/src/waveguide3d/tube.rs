use alloc::vec::Vec;

use crate::cross_section::CrossSectionMesh;
use crate::effective1d::uniform_grid;
use crate::Result;

/// Tensor product of a uniform grid on `[0, L]` with a cross-section mesh.
/// Node `(j, a)` has index `j·n2 + a`.
#[derive(Debug, Clone)]
pub struct TubeMesh {
    pub length: f64,
    pub step: f64,
    pub s: Vec<f64>,
    pub section: CrossSectionMesh,
}

impl TubeMesh {
    pub fn new(section: CrossSectionMesh, length: f64, n_s: usize) -> Result<Self> {
        section.validate()?;
        let (step, s) = uniform_grid(length, n_s)?;
        Ok(Self { length, step, s, section })
    }

    pub fn n_cells(&self) -> usize {
        self.s.len() - 1
    }

    pub fn n_section(&self) -> usize {
        self.section.n_nodes()
    }

    pub fn n_nodes(&self) -> usize {
        self.s.len() * self.n_section()
    }

    pub fn index(&self, j: usize, a: usize) -> usize {
        j * self.n_section() + a
    }

    /// Nodal field `f(s_j) g(y_a)`.
    pub fn separable(&self, f: impl Fn(f64) -> f64, g: &[f64]) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n_nodes());
        for &s in &self.s {
            let fs = f(s);
            v.extend(g.iter().map(|x| fs * x));
        }
        v
    }

    /// Cross-section slice `j` of a nodal field.
    pub fn slice<'a>(&self, v: &'a [f64], j: usize) -> &'a [f64] {
        let n2 = self.n_section();
        &v[j * n2..(j + 1) * n2]
    }

    /// Linear interpolation in `s` of a nodal field; zero outside `[0, L]`.
    pub fn slice_at(&self, v: &[f64], s: f64) -> Vec<f64> {
        let n2 = self.n_section();
        if !(0.0..=self.length).contains(&s) {
            return alloc::vec![0.0; n2];
        }
        let n = self.n_cells();
        let x = (s / self.step).clamp(0.0, n as f64);
        let j = (x as usize).min(n - 1);
        let t = x - j as f64;
        let (a, b) = (self.slice(v, j), self.slice(v, j + 1));
        a.iter().zip(b).map(|(p, q)| (1.0 - t) * p + t * q).collect()
    }
}
