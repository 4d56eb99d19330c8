use alloc::vec::Vec;

use super::EffectiveConstants;
use crate::cross_section::PerturbationTensors;
use crate::geometry::CurveSpec;
use crate::{Error, Result};

/// `q(s) = ½M0ξ·ξ + C1τ̃² − C2τ̃′` sampled on a uniform grid, with its addends.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential1D {
    pub length: f64,
    pub step: f64,
    pub s: Vec<f64>,
    pub q: Vec<f64>,
    pub tensor_part: Vec<f64>,
    pub twist_part: Vec<f64>,
    pub derivative_part: Vec<f64>,
    /// `τ̃` at the same nodes.
    pub tau_tilde: Vec<f64>,
}

impl Potential1D {
    pub fn n_cells(&self) -> usize {
        self.s.len() - 1
    }

    pub fn min(&self) -> f64 {
        self.q.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Trapezoidal mean of `q`.
    pub fn mean(&self) -> f64 {
        let n = self.q.len();
        let inner: f64 = self.q[1..n - 1].iter().sum();
        (inner + 0.5 * (self.q[0] + self.q[n - 1])) * self.step / self.length
    }

    /// Same potential shifted by a constant.
    pub fn shifted(&self, c: f64) -> Self {
        let mut p = self.clone();
        p.q.iter_mut().for_each(|v| *v += c);
        p
    }
}

pub fn uniform_grid(length: f64, n_cells: usize) -> Result<(f64, Vec<f64>)> {
    if n_cells < 2 {
        return Err(Error::invalid("the s-grid needs at least two cells"));
    }
    let step = length / n_cells as f64;
    Ok((step, (0..=n_cells).map(|i| i as f64 * step).collect()))
}

pub fn build_potential(
    curve: &CurveSpec,
    tensors: &PerturbationTensors,
    consts: &EffectiveConstants,
    n_cells: usize,
) -> Result<Potential1D> {
    let (step, s) = uniform_grid(curve.length, n_cells)?;
    let n = s.len();
    let mut p = Potential1D {
        length: curve.length,
        step,
        s: Vec::with_capacity(n),
        q: Vec::with_capacity(n),
        tensor_part: Vec::with_capacity(n),
        twist_part: Vec::with_capacity(n),
        derivative_part: Vec::with_capacity(n),
        tau_tilde: Vec::with_capacity(n),
    };
    for si in s {
        let f = curve.frame_at(si, 1)?;
        let a = tensors.half_quadratic(f.xi[0]);
        let b = consts.c1 * f.tau_tilde * f.tau_tilde;
        let c = -consts.c2 * f.dtau_tilde;
        let q = a + b + c;
        if !q.is_finite() {
            return Err(Error::invalid("effective potential is not finite"));
        }
        p.s.push(si);
        p.q.push(q);
        p.tensor_part.push(a);
        p.twist_part.push(b);
        p.derivative_part.push(c);
        p.tau_tilde.push(f.tau_tilde);
    }
    Ok(p)
}
