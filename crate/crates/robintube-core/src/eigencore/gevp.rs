use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use super::dense::sym_eigen;
use super::skyline::{Ldlt, Ordering};
use super::sparse::{dot, SymSparseMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigOptions {
    /// Relative residual `‖Av − λBv‖ / (max(1, |λ|)·‖Bv‖)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Starting shift; moved downward until `A − σB` is positive definite.
    pub shift: Option<f64>,
    /// Subspace dimension; defaults to `max(2k, k + 8)`.
    pub block: Option<usize>,
    /// Factor `B` first to reject indefinite mass matrices.
    pub check_b: bool,
    pub ordering: Ordering,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 500,
            shift: None,
            block: None,
            check_b: true,
            ordering: Ordering::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigPairs {
    pub values: Vec<f64>,
    /// B-orthonormal eigenvectors.
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub shift: f64,
}

impl EigPairs {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn solve_gevp_smallest(
    a: &SymSparseMatrix,
    b: &SymSparseMatrix,
    k: usize,
    tol: f64,
) -> Result<EigPairs> {
    solve_gevp(a, b, k, &EigOptions { tol, ..EigOptions::default() })
}

/// Factors `A − σB` for the first σ at or below `start` where it is positive definite.
pub fn positive_shift(
    a: &SymSparseMatrix,
    b: &SymSparseMatrix,
    start: f64,
    ordering: Ordering,
) -> Result<(f64, Ldlt)> {
    let scale = a.norm_inf() / b.norm_inf().max(f64::MIN_POSITIVE);
    let mut step = (start.abs() * 1e-3).max(scale * 1e-9).max(1e-12);
    let mut sigma = start;
    for _ in 0..80 {
        let f = SymSparseMatrix::linear_combination(&[(1.0, a), (-sigma, b)])?;
        match Ldlt::factor(&f, ordering) {
            Ok(l) if l.negatives() == 0 => return Ok((sigma, l)),
            Ok(_) | Err(Error::Singular { .. }) => {
                sigma -= step;
                step *= 4.0;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::invalid("could not place the shift below the spectrum"))
}

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }
}

pub fn solve_gevp(
    a: &SymSparseMatrix,
    b: &SymSparseMatrix,
    k: usize,
    opts: &EigOptions,
) -> Result<EigPairs> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::invalid("pencil dimension mismatch"));
    }
    if k == 0 || k > n {
        return Err(Error::invalid("requested eigenpair count outside 1..=n"));
    }
    if opts.check_b {
        match Ldlt::factor(b, opts.ordering) {
            Ok(l) => {
                if let Some((row, pivot)) = l.first_negative() {
                    return Err(Error::NotPositiveDefinite { row, pivot });
                }
            }
            Err(Error::Singular { row, pivot }) => {
                return Err(Error::NotPositiveDefinite { row, pivot })
            }
            Err(e) => return Err(e),
        }
    }
    let (sigma, fac) = positive_shift(a, b, opts.shift.unwrap_or(0.0), opts.ordering)?;
    let p = opts.block.unwrap_or((2 * k).max(k + 8)).clamp(k, n);

    let mut rng = Lcg(0x9e37_79b9_7f4a_7c15);
    let mut x: Vec<Vec<f64>> = (0..p).map(|_| (0..n).map(|_| rng.next()).collect()).collect();
    let mut bx: Vec<Vec<f64>> = x.iter().map(|v| b.matvec(v)).collect();
    let mut residuals = vec![f64::INFINITY; k];
    let mut theta = vec![0.0; p];

    for it in 1..=opts.max_iter {
        let y: Vec<Vec<f64>> = bx.iter().map(|v| fac.solve(v)).collect();
        // B-orthonormalize by modified Gram–Schmidt, twice, dropping collapsed columns
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(p);
        let mut bq: Vec<Vec<f64>> = Vec::with_capacity(p);
        for yi in y {
            let mut v = yi;
            let n0 = dot(&v, &b.matvec(&v)).max(0.0).sqrt();
            if !(n0 > 0.0) || !n0.is_finite() {
                continue;
            }
            for _ in 0..2 {
                for (qj, bqj) in q.iter().zip(&bq) {
                    let c = dot(bqj, &v);
                    for (e, f) in v.iter_mut().zip(qj) {
                        *e -= c * f;
                    }
                }
            }
            let bv = b.matvec(&v);
            let nv = dot(&v, &bv).max(0.0).sqrt();
            if nv <= 1e-10 * n0 {
                continue;
            }
            let inv = 1.0 / nv;
            q.push(v.into_iter().map(|e| e * inv).collect());
            bq.push(bv.into_iter().map(|e| e * inv).collect());
        }
        let r = q.len();
        if r < k {
            return Err(Error::invalid("subspace collapsed below the requested size"));
        }
        let aq: Vec<Vec<f64>> = q.iter().map(|v| a.matvec(v)).collect();
        let mut hr = vec![0.0; r * r];
        for i in 0..r {
            for j in 0..=i {
                let hij = 0.5 * (dot(&q[i], &aq[j]) + dot(&q[j], &aq[i]));
                hr[i * r + j] = hij;
                hr[j * r + i] = hij;
            }
        }
        let (th, z) = sym_eigen(&hr, r);
        let combine = |src: &[Vec<f64>], col: usize| -> Vec<f64> {
            let mut out = vec![0.0; n];
            for row in 0..r {
                let cf = z[row * r + col];
                if cf != 0.0 {
                    for (o, v) in out.iter_mut().zip(&src[row]) {
                        *o += cf * v;
                    }
                }
            }
            out
        };
        let mut new_x = Vec::with_capacity(p);
        let mut new_bx = Vec::with_capacity(p);
        for col in 0..r {
            let xc = combine(&q, col);
            let bc = combine(&bq, col);
            if col < k {
                let ac = combine(&aq, col);
                let res: f64 = ac
                    .iter()
                    .zip(&bc)
                    .map(|(av, bv)| {
                        let d = av - th[col] * bv;
                        d * d
                    })
                    .sum::<f64>()
                    .sqrt();
                let nb = dot(&bc, &bc).sqrt();
                residuals[col] = res / (th[col].abs().max(1.0) * nb);
            }
            new_x.push(xc);
            new_bx.push(bc);
        }
        for _ in r..p {
            let v: Vec<f64> = (0..n).map(|_| rng.next()).collect();
            new_bx.push(b.matvec(&v));
            new_x.push(v);
        }
        theta[..r].copy_from_slice(&th);
        x = new_x;
        bx = new_bx;

        if residuals.iter().all(|&r| r <= opts.tol) {
            let mut vectors: Vec<Vec<f64>> = x.into_iter().take(k).collect();
            for v in &mut vectors {
                let s: f64 = v.iter().sum();
                let pivot = v.iter().fold(0.0f64, |m, e| if e.abs() > m.abs() { *e } else { m });
                let flip = if s.abs() > 1e-12 * (n as f64).sqrt() * pivot.abs() { s < 0.0 } else { pivot < 0.0 };
                if flip {
                    v.iter_mut().for_each(|e| *e = -*e);
                }
            }
            return Ok(EigPairs {
                values: theta[..k].to_vec(),
                vectors,
                residuals,
                iterations: it,
                shift: sigma,
            });
        }
    }
    let worst = residuals.iter().fold(0.0f64, |m, v| m.max(*v));
    Err(Error::NoConvergence { iterations: opts.max_iter, worst, residuals })
}
