use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::{Error, Result};

/// Highest derivative order carried by every profile.
pub const MAX_ORDER: usize = 4;

/// A scalar function of arc length, either analytic or uniformly sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Constant(f64),
    /// `Σ cᵢ (s − center)ⁱ`.
    Polynomial { center: f64, coeffs: Vec<f64> },
    /// `mean + amp·cos(freq·s + phase)`.
    Cosine { mean: f64, amp: f64, freq: f64, phase: f64 },
    /// Samples `values[i]` at `s = i·step`.
    Table { step: f64, values: Vec<f64> },
}

impl Profile {
    pub fn zero() -> Self {
        Profile::Constant(0.0)
    }

    pub fn linear(v0: f64, slope: f64) -> Self {
        Profile::Polynomial { center: 0.0, coeffs: vec![v0, slope] }
    }

    /// Samples an analytic profile on `n + 1` equispaced points of `[0, length]`.
    pub fn tabulate(&self, length: f64, n: usize) -> Result<Profile> {
        let step = length / n as f64;
        let values = (0..=n)
            .map(|i| self.eval(i as f64 * step, 0).map(|d| d[0]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Profile::Table { step, values })
    }

    pub fn is_table(&self) -> bool {
        matches!(self, Profile::Table { .. })
    }

    /// Value and derivatives `0..=order` at `s`; unused slots are zero.
    pub fn eval(&self, s: f64, order: usize) -> Result<[f64; MAX_ORDER + 1]> {
        let mut d = [0.0; MAX_ORDER + 1];
        match self {
            Profile::Constant(c) => d[0] = *c,
            Profile::Polynomial { center, coeffs } => {
                let x = s - center;
                for m in 0..=order.min(MAX_ORDER) {
                    let mut acc = 0.0;
                    for i in (m..coeffs.len()).rev() {
                        let fall: f64 = (0..m).map(|j| (i - j) as f64).product();
                        acc = acc * x + coeffs[i] * fall;
                    }
                    // Horner over i ≥ m uses powers x^{i−m}
                    d[m] = acc;
                }
            }
            Profile::Cosine { mean, amp, freq, phase } => {
                let a = freq * s + phase;
                let (sn, cs) = (a.sin(), a.cos());
                d[0] = mean + amp * cs;
                d[1] = -amp * freq * sn;
                d[2] = -amp * freq.powi(2) * cs;
                d[3] = amp * freq.powi(3) * sn;
                d[4] = amp * freq.powi(4) * cs;
            }
            Profile::Table { step, values } => return table_eval(*step, values, s, order),
        }
        Ok(d)
    }

    /// Largest first and second difference quotients of a table (zero for analytic data).
    pub fn difference_quotients(&self) -> (f64, f64) {
        match self {
            Profile::Table { step, values } => {
                let d1 = values
                    .windows(2)
                    .map(|w| ((w[1] - w[0]) / step).abs())
                    .fold(0.0, f64::max);
                let d2 = values
                    .windows(3)
                    .map(|w| ((w[2] - 2.0 * w[1] + w[0]) / (step * step)).abs())
                    .fold(0.0, f64::max);
                (d1, d2)
            }
            _ => (0.0, 0.0),
        }
    }
}

/// Finite-difference weights for derivative `m` at `x0` over `nodes` (Fornberg).
pub fn fornberg(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![vec![0.0; n]; n]; m + 1];
    c[0][0][0] = 1.0;
    let mut c1 = 1.0;
    for i in 1..n {
        let mut c2 = 1.0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            for k in 0..=m.min(i) {
                let prev_ij = c[k][i - 1][j];
                let prev_k = if k > 0 { c[k - 1][i - 1][j] } else { 0.0 };
                c[k][i][j] = ((nodes[i] - x0) * prev_ij - k as f64 * prev_k) / c3;
            }
        }
        for k in 0..=m.min(i) {
            let prev_i = c[k][i - 1][i - 1];
            let prev_k = if k > 0 { c[k - 1][i - 1][i - 1] } else { 0.0 };
            c[k][i][i] = c1 / c2 * (k as f64 * prev_k - (nodes[i - 1] - x0) * prev_i);
        }
        c1 = c2;
    }
    c[m][n - 1].clone()
}

/// Derivative of order `m` at node `i`: fourth-order central where the stencil
/// fits, second-order one-sided near the ends.
fn node_derivative(step: f64, values: &[f64], i: usize, m: usize) -> f64 {
    if m == 0 {
        return values[i];
    }
    let n = values.len();
    let r = (m + 3) / 2;
    let (lo, hi) = if i >= r && i + r < n {
        (i - r, i + r)
    } else if i < r {
        (0, m + 1)
    } else {
        (n - m - 2, n - 1)
    };
    let nodes: Vec<f64> = (lo..=hi).map(|j| (j as f64 - i as f64) * step).collect();
    let w = fornberg(0.0, &nodes, m);
    w.iter().zip(&values[lo..=hi]).map(|(a, b)| a * b).sum()
}

fn table_eval(step: f64, values: &[f64], s: f64, order: usize) -> Result<[f64; MAX_ORDER + 1]> {
    let n = values.len();
    let order = order.min(MAX_ORDER);
    if n < order + 2 || n < 4 {
        return Err(Error::DerivativeUnavailable {
            order,
            reason: alloc::format!("table has only {n} samples"),
        });
    }
    let length = step * (n - 1) as f64;
    if order >= 3 && step > length / 200.0 + 1e-15 {
        return Err(Error::DerivativeUnavailable {
            order,
            reason: alloc::format!("sample step {step} exceeds L/200"),
        });
    }
    let x = (s / step).clamp(0.0, (n - 1) as f64);
    let base = (x.floor() as usize).saturating_sub(1).min(n - 4);
    let mut d = [0.0; MAX_ORDER + 1];
    for (m, dm) in d.iter_mut().enumerate().take(order + 1) {
        // cubic Lagrange interpolation of nodal derivatives
        let mut acc = 0.0;
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (x - (base + b) as f64) / (a as f64 - b as f64);
                }
            }
            acc += w * node_derivative(step, values, base + a, m);
        }
        *dm = acc;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_central_second_derivative() {
        let w = fornberg(0.0, &[-1.0, 0.0, 1.0], 2);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] + 2.0).abs() < 1e-14 && (w[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn polynomial_derivatives() {
        let p = Profile::Polynomial { center: 1.0, coeffs: vec![2.0, 0.0, 3.0, 1.0] };
        let d = p.eval(3.0, 4).unwrap();
        // 2 + 3x² + x³ at x = 2
        assert_eq!(d[0], 2.0 + 12.0 + 8.0);
        assert_eq!(d[1], 12.0 + 12.0);
        assert_eq!(d[2], 6.0 + 12.0);
        assert_eq!(d[3], 6.0);
        assert_eq!(d[4], 0.0);
    }
}
