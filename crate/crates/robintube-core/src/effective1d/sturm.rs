use alloc::vec::Vec;

use super::potential::uniform_grid;
use super::{EffectiveConstants, Potential1D};
use crate::cross_section::{edge_mass, smallest_pairs, PerturbationTensors};
use crate::eigencore::{SymSparseMatrix, TripletBuilder};
use crate::geometry::CurveSpec;
use crate::{Error, Result};

pub const DEFAULT_CELLS: usize = 1024;

/// Stiffness/mass pair of a one-dimensional P1 discretization.
#[derive(Debug, Clone)]
pub struct Pencil1D {
    pub a: SymSparseMatrix,
    pub b: SymSparseMatrix,
    pub s: Vec<f64>,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SturmLiouvilleSpectrum {
    pub values: Vec<f64>,
    /// Nodal values, `∫wᵢ² = 1`.
    pub vectors: Vec<Vec<f64>>,
    pub s: Vec<f64>,
    pub step: f64,
}

impl SturmLiouvilleSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Piecewise-linear evaluation of `wᵢ`.
    pub fn eval(&self, i: usize, s: f64) -> f64 {
        let w = &self.vectors[i];
        let n = w.len() - 1;
        let x = (s / self.step).clamp(0.0, n as f64);
        let j = (x as usize).min(n - 1);
        let t = x - j as f64;
        (1.0 - t) * w[j] + t * w[j + 1]
    }

    /// One-sided difference quotients of the boundary conditions
    /// `−w′(0) + b0·w(0)` and `w′(L) + bL·w(L)`, relative to `max|w|`.
    pub fn boundary_defects(&self, i: usize, b0: f64, bl: f64) -> (f64, f64) {
        let w = &self.vectors[i];
        let n = w.len() - 1;
        let h = self.step;
        let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let d0 = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h);
        let dl = (3.0 * w[n] - 4.0 * w[n - 1] + w[n - 2]) / (2.0 * h);
        ((-d0 + b0 * w[0]).abs() / scale, (dl + bl * w[n]).abs() / scale)
    }
}

fn assemble(
    s: Vec<f64>,
    step: f64,
    potential: &[f64],
    tau: Option<(&[f64], f64)>,
    ends: (f64, f64),
) -> Result<Pencil1D> {
    let n = s.len();
    let mut a = TripletBuilder::with_capacity(n, 4 * n);
    let mut b = TripletBuilder::with_capacity(n, 4 * n);
    let h = step;
    for j in 0..n - 1 {
        let dofs = [j, j + 1];
        let pm = edge_mass(h, potential[j], potential[j + 1]);
        let mut ke = [1.0 / h + pm[0], -1.0 / h + pm[1], -1.0 / h + pm[2], 1.0 / h + pm[3]];
        if let Some((t, c2)) = tau {
            // C2∫τ̃(w′v + wv′) with τ̃ interpolated linearly
            let c0 = (2.0 * t[j] + t[j + 1]) / 6.0;
            let c1 = (t[j] + 2.0 * t[j + 1]) / 6.0;
            ke[0] += -2.0 * c2 * c0;
            ke[1] += c2 * (c0 - c1);
            ke[2] += c2 * (c0 - c1);
            ke[3] += 2.0 * c2 * c1;
        }
        a.add_block(&dofs, &ke);
        b.add_block(&dofs, &[h / 3.0, h / 6.0, h / 6.0, h / 3.0]);
    }
    a.add(0, 0, ends.0);
    a.add(n - 1, n - 1, ends.1);
    Ok(Pencil1D { a: a.build()?, b: b.build()?, s, step })
}

/// Pencil of the integrated form `∫w′φ′ + qwφ` with the Robin end terms
/// `(γ̃0 − C2τ̃(0))` and `(γ̃L + C2τ̃(L))`.
pub fn assemble_q_form(pot: &Potential1D, consts: &EffectiveConstants) -> Result<Pencil1D> {
    let (b0, bl) = end_coefficients(pot, consts);
    assemble(pot.s.clone(), pot.step, &pot.q, None, (b0, bl))
}

pub fn end_coefficients(pot: &Potential1D, consts: &EffectiveConstants) -> (f64, f64) {
    let n = pot.tau_tilde.len() - 1;
    (
        consts.gamma0 - consts.c2 * pot.tau_tilde[0],
        consts.gamma_l + consts.c2 * pot.tau_tilde[n],
    )
}

/// Pencil of `∫|w′|² + (C1τ̃² + ½M0ξ·ξ)w² + 2C2τ̃w′w` plus the end caps,
/// which needs no derivative of `τ̃`.
pub fn assemble_form_a0(
    curve: &CurveSpec,
    tensors: &PerturbationTensors,
    consts: &EffectiveConstants,
    n_cells: usize,
) -> Result<Pencil1D> {
    let (step, s) = uniform_grid(curve.length, n_cells)?;
    let mut pot = Vec::with_capacity(s.len());
    let mut tau = Vec::with_capacity(s.len());
    for &si in &s {
        let f = curve.frame_at(si, 0)?;
        pot.push(consts.c1 * f.tau_tilde * f.tau_tilde + tensors.half_quadratic(f.xi[0]));
        tau.push(f.tau_tilde);
    }
    assemble(s, step, &pot, Some((&tau, consts.c2)), (consts.gamma0, consts.gamma_l))
}

pub fn solve_pencil(p: &Pencil1D, n_modes: usize) -> Result<SturmLiouvilleSpectrum> {
    if n_modes == 0 {
        return Err(Error::invalid("at least one mode is required"));
    }
    let n = p.s.len();
    let qmin = (0..n).map(|i| p.a.get(i, i) / p.b.get(i, i)).fold(f64::INFINITY, f64::min);
    // the shift search walks down from here until the pencil is definite
    let start = qmin.min(0.0) - 1.0;
    let pairs = smallest_pairs(&p.a, &p.b, n_modes.min(n), start)?;
    Ok(SturmLiouvilleSpectrum { values: pairs.values, vectors: pairs.vectors, s: p.s.clone(), step: p.step })
}

pub fn solve_sturm_liouville(
    pot: &Potential1D,
    consts: &EffectiveConstants,
    n_modes: usize,
) -> Result<SturmLiouvilleSpectrum> {
    solve_pencil(&assemble_q_form(pot, consts)?, n_modes)
}
