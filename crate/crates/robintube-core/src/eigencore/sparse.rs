use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::{Error, Result};

/// Symmetric sparse matrix stored as the lower triangle (diagonal included) in
/// compressed rows with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SymSparseMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col: Vec<usize>,
    val: Vec<f64>,
}

/// Accumulates symmetric contributions; `(i, j)` and `(j, i)` address the same entry.
#[derive(Debug, Clone)]
pub struct TripletBuilder {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(n: usize) -> Self {
        Self { n, entries: Vec::new() }
    }

    pub fn with_capacity(n: usize, cap: usize) -> Self {
        Self { n, entries: Vec::with_capacity(cap) }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        if i >= j {
            self.entries.push((i, j, v));
        } else {
            self.entries.push((j, i, v));
        }
    }

    /// Adds a dense symmetric element block `ke` for the global indices `dofs`.
    pub fn add_block(&mut self, dofs: &[usize], ke: &[f64]) {
        let m = dofs.len();
        for a in 0..m {
            for b in 0..=a {
                self.add(dofs[a], dofs[b], ke[a * m + b]);
            }
        }
    }

    pub fn build(self) -> Result<SymSparseMatrix> {
        SymSparseMatrix::from_lower(self.n, self.entries)
    }
}

impl SymSparseMatrix {
    /// Builds from triples; entries above the diagonal are mirrored, duplicates summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let lower = triplets
            .iter()
            .map(|&(i, j, v)| if i >= j { (i, j, v) } else { (j, i, v) })
            .collect();
        Self::from_lower(n, lower)
    }

    /// Builds from a full (both triangles) list, verifying symmetry to 1e-12 relative.
    pub fn from_full_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let lower: Vec<_> = triplets.iter().copied().filter(|&(i, j, _)| i >= j).collect();
        let upper: Vec<_> = triplets
            .iter()
            .filter(|&&(i, j, _)| i < j)
            .map(|&(i, j, v)| (j, i, v))
            .collect();
        let lo = Self::from_lower(n, lower)?;
        let up = Self::from_lower(n, upper)?;
        let scale = lo.max_abs().max(up.max_abs()).max(f64::MIN_POSITIVE);
        for i in 0..n {
            for (j, v) in lo.row(i) {
                if j != i && (v - up.get(i, j)).abs() > 1e-12 * scale {
                    return Err(Error::invalid("matrix is not symmetric"));
                }
            }
            for (j, v) in up.row(i) {
                if (v - lo.get(i, j)).abs() > 1e-12 * scale {
                    return Err(Error::invalid("matrix is not symmetric"));
                }
            }
        }
        Ok(lo)
    }

    fn from_lower(n: usize, mut e: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(i, j, v) in &e {
            if i >= n || j >= n {
                return Err(Error::invalid("triplet index out of range"));
            }
            if !v.is_finite() {
                return Err(Error::invalid("non-finite matrix entry"));
            }
        }
        e.sort_unstable_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col = Vec::with_capacity(e.len());
        let mut val: Vec<f64> = Vec::with_capacity(e.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in e {
            if last == Some((i, j)) {
                *val.last_mut().unwrap() += v;
            } else {
                col.push(j);
                val.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self { n, row_ptr, col, val })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self {
            n,
            row_ptr: (0..=n).collect(),
            col: (0..n).collect(),
            val: d.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz_lower(&self) -> usize {
        self.val.len()
    }

    /// Stored lower-triangle entries of row `i` as `(col, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col[r.clone()].iter().copied().zip(self.val[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col[r.clone()].binary_search(&j) {
            Ok(p) => self.val[r.start + p],
            Err(_) => 0.0,
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.val
    }

    pub fn same_pattern(&self, other: &Self) -> bool {
        self.n == other.n && self.row_ptr == other.row_ptr && self.col == other.col
    }

    pub fn max_abs(&self) -> f64 {
        self.val.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Infinity norm of the full symmetric matrix.
    pub fn norm_inf(&self) -> f64 {
        let mut rs = vec![0.0; self.n];
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                rs[i] += v.abs();
                if j != i {
                    rs[j] += v.abs();
                }
            }
        }
        rs.into_iter().fold(0.0, f64::max)
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.n {
            let xi = x[i];
            let mut acc = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col[p];
                let a = self.val[p];
                acc += a * x[j];
                if j != i {
                    y[j] += a * xi;
                }
            }
            y[i] += acc;
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col[p];
                let a = self.val[p];
                s += a * x[i] * y[j];
                if j != i {
                    s += a * x[j] * y[i];
                }
            }
        }
        s
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.val.iter_mut().for_each(|v| *v *= a);
        out
    }

    /// `Σ cₖ Aₖ`, merging sparsity patterns when they differ.
    pub fn linear_combination(terms: &[(f64, &Self)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::invalid("empty combination"))?.1;
        let n = first.n;
        if terms.iter().any(|(_, m)| m.n != n) {
            return Err(Error::invalid("dimension mismatch in combination"));
        }
        if terms.iter().all(|(_, m)| m.same_pattern(first)) {
            let mut out = first.clone();
            out.val.iter_mut().for_each(|v| *v = 0.0);
            for (c, m) in terms {
                for (o, v) in out.val.iter_mut().zip(&m.val) {
                    *o += c * v;
                }
            }
            return Ok(out);
        }
        let mut b = TripletBuilder::new(n);
        for (c, m) in terms {
            for i in 0..n {
                for (j, v) in m.row(i) {
                    b.add(i, j, c * v);
                }
            }
        }
        b.build()
    }

    /// Adjacency lists of the off-diagonal pattern.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for i in 0..self.n {
            for (j, _) in self.row(i) {
                if j != i {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        adj
    }

    /// Dense row-major copy; intended for small problems and tests.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for (j, v) in self.row(i) {
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        d
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
