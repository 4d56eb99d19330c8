use alloc::vec::Vec;
use num_traits::Float;

use super::LocalizationData;
use crate::cross_section::{lambda0_perturbed, CrossSection, GroundState};
use crate::geometry::CurveSpec;
use crate::Result;

/// Samples of `f_ε(t) = [Λ0(εξ(s0 + ε^{1/4}t)) − λ0 − εμ0]/ε^{3/2}` against
/// `f0(t) = ν0²t²`.
#[derive(Debug, Clone, PartialEq)]
pub struct FEpsTable {
    pub eps: f64,
    /// Grid points kept after truncation to `[0, L]`.
    pub t: Vec<f64>,
    pub f_eps: Vec<f64>,
    pub f0: Vec<f64>,
    /// `sup_t (η0t² − f_ε(t))`.
    pub margin: f64,
    /// `max(margin, 0)/√ε`.
    pub fitted_c: f64,
    /// `max |f_ε − f0|` over `|t| ≤ window`.
    pub max_deviation: f64,
    /// Leading coefficient of a least-squares quadratic fit over `|t| ≤ window`.
    pub quadratic_coefficient: f64,
    pub window: f64,
}

pub fn f_eps_bounds(
    cs: &CrossSection,
    gs: &GroundState,
    curve: &CurveSpec,
    data: &LocalizationData,
    eps: f64,
    t_grid: &[f64],
    window: f64,
) -> Result<FEpsTable> {
    let zoom = eps.powf(0.25);
    let mut table = FEpsTable {
        eps,
        t: Vec::new(),
        f_eps: Vec::new(),
        f0: Vec::new(),
        margin: f64::NEG_INFINITY,
        fitted_c: 0.0,
        max_deviation: 0.0,
        quadratic_coefficient: f64::NAN,
        window,
    };
    let scale = eps.powf(1.5);
    for &t in t_grid {
        let s = data.s0 + zoom * t;
        if !(0.0..=curve.length).contains(&s) {
            continue;
        }
        let xi = curve.frame_at(s, 0)?.xi[0];
        let lam = lambda0_perturbed(cs, gs, [eps * xi[0], eps * xi[1]])?;
        let f = (lam - gs.lambda0 - eps * data.mu0) / scale;
        let f0 = data.nu0 * data.nu0 * t * t;
        table.margin = table.margin.max(data.eta0 * t * t - f);
        if t.abs() <= window {
            table.max_deviation = table.max_deviation.max((f - f0).abs());
        }
        table.t.push(t);
        table.f_eps.push(f);
        table.f0.push(f0);
    }
    table.fitted_c = table.margin.max(0.0) / eps.sqrt();
    table.quadratic_coefficient = quadratic_fit(&table.t, &table.f_eps, window);
    Ok(table)
}

/// Uniform points across the whole blow-up interval `I_ε = [−s0, L − s0]/ε^{1/4}`
/// merged with a `0.1`-spaced grid on `|t| ≤ window`; always contains `t = 0`.
pub fn blowup_grid(data: &LocalizationData, length: f64, eps: f64, n: usize, window: f64) -> Vec<f64> {
    let zoom = eps.powf(0.25);
    let (a, b) = (-data.s0 / zoom, (length - data.s0) / zoom);
    let mut t: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let m = (window * 10.0).round() as i64;
    t.extend((-m..=m).map(|i| i as f64 * 0.1).filter(|x| *x >= a && *x <= b));
    t.sort_by(f64::total_cmp);
    t.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    t
}

/// Leading coefficient of the least-squares `c0 + c1t + c2t²` on `|t| ≤ window`.
fn quadratic_fit(t: &[f64], f: &[f64], window: f64) -> f64 {
    let mut g = [[0.0; 3]; 3];
    let mut r = [0.0; 3];
    for (&ti, &fi) in t.iter().zip(f) {
        if ti.abs() > window {
            continue;
        }
        let p = [1.0, ti, ti * ti];
        for a in 0..3 {
            r[a] += p[a] * fi;
            for b in 0..3 {
                g[a][b] += p[a] * p[b];
            }
        }
    }
    // Cramer's rule on the 3×3 normal equations
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det3(g);
    let mut m = g;
    for a in 0..3 {
        m[a][2] = r[a];
    }
    det3(m) / d
}
