use alloc::vec;
use alloc::vec::Vec;

use super::ordering::{invert, reverse_cuthill_mckee};
use super::sparse::SymSparseMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ordering {
    Natural,
    Rcm,
    /// Whichever of the two has the smaller envelope.
    #[default]
    Auto,
}

/// Envelope (skyline) `L D Lᵀ` factorization without pivoting.
#[derive(Debug, Clone)]
pub struct Ldlt {
    n: usize,
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    l: Vec<f64>,
    d: Vec<f64>,
    negatives: usize,
    first_negative: Option<(usize, f64)>,
}

fn envelope(a: &SymSparseMatrix, iperm: &[usize]) -> (Vec<usize>, usize) {
    let n = a.dim();
    let mut first: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for (j, _) in a.row(i) {
            let (pi, pj) = (iperm[i], iperm[j]);
            let (r, c) = if pi >= pj { (pi, pj) } else { (pj, pi) };
            if c < first[r] {
                first[r] = c;
            }
        }
    }
    let size = first.iter().enumerate().map(|(i, &f)| i - f).sum();
    (first, size)
}

impl Ldlt {
    pub fn factor(a: &SymSparseMatrix, ordering: Ordering) -> Result<Self> {
        let n = a.dim();
        let natural: Vec<usize> = (0..n).collect();
        let (perm, iperm, first) = match ordering {
            Ordering::Natural => {
                let (f, _) = envelope(a, &natural);
                (natural.clone(), natural, f)
            }
            Ordering::Rcm => {
                let p = reverse_cuthill_mckee(&a.adjacency());
                let ip = invert(&p);
                let (f, _) = envelope(a, &ip);
                (p, ip, f)
            }
            Ordering::Auto => {
                let (fn_, sn) = envelope(a, &natural);
                let p = reverse_cuthill_mckee(&a.adjacency());
                let ip = invert(&p);
                let (fr, sr) = envelope(a, &ip);
                if sr < sn {
                    (p, ip, fr)
                } else {
                    (natural.clone(), natural, fn_)
                }
            }
        };
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i]);
        }
        let mut l = vec![0.0; start[n]];
        let mut d = vec![0.0; n];
        for i in 0..n {
            for (j, v) in a.row(i) {
                let (pi, pj) = (iperm[i], iperm[j]);
                if pi == pj {
                    d[pi] = v;
                } else {
                    let (r, c) = if pi > pj { (pi, pj) } else { (pj, pi) };
                    l[start[r] + c - first[r]] = v;
                }
            }
        }
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        let mut negatives = 0;
        let mut first_negative = None;
        for i in 0..n {
            let fi = first[i];
            let (head, tail) = l.split_at_mut(start[i]);
            let row_i = &mut tail[..i - fi];
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                if k0 < j {
                    let row_j = &head[start[j]..start[j + 1]];
                    let s: f64 = row_i[k0 - fi..j - fi]
                        .iter()
                        .zip(&row_j[k0 - fj..j - fj])
                        .map(|(a, b)| a * b)
                        .sum();
                    row_i[j - fi] -= s;
                }
            }
            let mut di = d[i];
            for j in fi..i {
                let w = row_i[j - fi];
                let lij = w / d[j];
                di -= w * lij;
                row_i[j - fi] = lij;
            }
            if !(di.abs() > 1e-14 * scale) {
                return Err(Error::Singular { row: perm[i], pivot: di });
            }
            if di < 0.0 {
                negatives += 1;
                first_negative.get_or_insert((perm[i], di));
            }
            d[i] = di;
        }
        Ok(Self { n, perm, first, start, l, d, negatives, first_negative })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of negative pivots: the count of eigenvalues below zero (Sylvester).
    pub fn negatives(&self) -> usize {
        self.negatives
    }

    /// Original row index and value of the first negative pivot, if any.
    pub fn first_negative(&self) -> Option<(usize, f64)> {
        self.first_negative
    }

    pub fn envelope_size(&self) -> usize {
        self.l.len()
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        let mut y: Vec<f64> = (0..n).map(|i| b[self.perm[i]]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.l[self.start[i]..self.start[i + 1]];
            let s: f64 = row.iter().zip(&y[fi..i]).map(|(a, b)| a * b).sum();
            y[i] -= s;
        }
        for i in 0..n {
            y[i] /= self.d[i];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let xi = y[i];
            let row = &self.l[self.start[i]..self.start[i + 1]];
            for (k, a) in row.iter().enumerate() {
                y[fi + k] -= a * xi;
            }
        }
        for i in 0..n {
            b[self.perm[i]] = y[i];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
