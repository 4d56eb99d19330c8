use alloc::vec::Vec;

use super::skyline::{Ldlt, Ordering};
use super::sparse::{axpy, dot, norm2, SymSparseMatrix};
use crate::{Error, Result};

/// Compatibility defects below this are silently projected out.
pub const COMPAT_TOL: f64 = 1e-8;
/// Compatibility defects above this are rejected.
pub const COMPAT_HARD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedSolution {
    pub x: Vec<f64>,
    /// Relative compatibility defect `|cᵀ rhs| / (‖c‖ ‖rhs‖)` before projection.
    pub defect: f64,
    /// Relative residual of the projected system after refinement.
    pub residual: f64,
}

/// Solves `(A − shift·B) x = rhs` on the B-orthogonal complement of the kernel
/// vector `c`, i.e. subject to `cᵀ B x = 0`.
///
/// The singular operator is handled by factoring `A − (shift − δ)B` and
/// refining, with both the right-hand side and every iterate projected.
pub fn solve_constrained(
    a: &SymSparseMatrix,
    shift: f64,
    b: &SymSparseMatrix,
    rhs: &[f64],
    c: &[f64],
) -> Result<ConstrainedSolution> {
    let n = a.dim();
    if b.dim() != n || rhs.len() != n || c.len() != n {
        return Err(Error::invalid("constrained solve dimension mismatch"));
    }
    let bc = b.matvec(c);
    let cbc = dot(c, &bc);
    if !(cbc > 0.0) {
        return Err(Error::invalid("kernel vector has zero B-norm"));
    }
    let rn = norm2(rhs);
    if rn == 0.0 {
        return Ok(ConstrainedSolution { x: alloc::vec![0.0; n], defect: 0.0, residual: 0.0 });
    }
    let defect = dot(c, rhs).abs() / (norm2(c) * rn);
    if defect > COMPAT_HARD {
        return Err(Error::Incompatible { defect });
    }
    // rhs ← rhs − (cᵀrhs / cᵀBc) Bc, so that cᵀ rhs = 0
    let mut f = rhs.to_vec();
    axpy(-dot(c, rhs) / cbc, &bc, &mut f);

    let s = SymSparseMatrix::linear_combination(&[(1.0, a), (-shift, b)])?;
    let scale = a.norm_inf() / b.norm_inf().max(f64::MIN_POSITIVE);
    let delta = 1e-6 * scale.max(shift.abs()).max(1.0);
    let reg = SymSparseMatrix::linear_combination(&[(1.0, &s), (delta, b)])?;
    let fac = Ldlt::factor(&reg, Ordering::Auto)?;

    let project = |x: &mut Vec<f64>| {
        let bx_c = dot(&bc, x) / cbc;
        axpy(-bx_c, c, x);
    };
    let fnorm = norm2(&f);
    let mut x = fac.solve(&f);
    project(&mut x);
    let mut residual = f64::INFINITY;
    for _ in 0..50 {
        let sx = s.matvec(&x);
        let mut r: Vec<f64> = f.iter().zip(&sx).map(|(a, b)| a - b).collect();
        // keep the residual in the range of S
        axpy(-dot(c, &r) / cbc, &bc, &mut r);
        residual = norm2(&r) / fnorm;
        if residual <= 1e-14 {
            break;
        }
        let mut dx = fac.solve(&r);
        project(&mut dx);
        axpy(1.0, &dx, &mut x);
        let step = norm2(&dx) / norm2(&x).max(f64::MIN_POSITIVE);
        if step <= 1e-15 {
            let sx = s.matvec(&x);
            let mut r: Vec<f64> = f.iter().zip(&sx).map(|(a, b)| a - b).collect();
            axpy(-dot(c, &r) / cbc, &bc, &mut r);
            residual = norm2(&r) / fnorm;
            break;
        }
    }
    if !residual.is_finite() || residual > 1e-8 {
        return Err(Error::Singular { row: 0, pivot: residual });
    }
    Ok(ConstrainedSolution { x, defect, residual })
}
