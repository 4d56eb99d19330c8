use alloc::vec;
use num_traits::Float;

use super::profile::{Profile, MAX_ORDER};
use crate::{Error, Result};

/// Centerline data: curvature `k`, torsion `τ` and cross-section rotation `α`
/// as functions of arc length on `[0, length]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub length: f64,
    pub k: Profile,
    pub tau: Profile,
    pub alpha: Profile,
}

/// Frame quantities at one arc-length position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameData {
    pub s: f64,
    pub k: f64,
    pub tau: f64,
    pub alpha: f64,
    pub dalpha: f64,
    /// `τ + α′`.
    pub tau_tilde: f64,
    /// `τ′ + α″`; zero unless `deriv_order ≥ 1`.
    pub dtau_tilde: f64,
    /// `(cos α, −sin α)`.
    pub z: [f64; 2],
    /// `(sin α, cos α)`.
    pub z_perp: [f64; 2],
    /// `ξ⁽ʲ⁾` for `j = 0..=deriv_order`; `xi[0] = k·z` exactly.
    pub xi: [[f64; 2]; MAX_ORDER + 1],
    pub deriv_order: usize,
}

impl FrameData {
    pub fn xi0(&self) -> [f64; 2] {
        self.xi[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beta {
    pub value: f64,
    /// False once the metric factor drops to 1/2 or below.
    pub valid: bool,
}

#[derive(Clone, Copy)]
struct C(f64, f64);

impl C {
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn scale(self, a: f64) -> C {
        C(self.0 * a, self.1 * a)
    }
}

impl CurveSpec {
    pub fn new(length: f64, k: Profile, tau: Profile, alpha: Profile) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::invalid("curve length must be positive"));
        }
        let c = Self { length, k, tau, alpha };
        for p in [&c.k, &c.tau, &c.alpha] {
            if let Profile::Table { step, values } = p {
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid("non-finite curve sample"));
                }
                if (step * (values.len() as f64 - 1.0) - length).abs() > 1e-9 * length {
                    return Err(Error::invalid("table does not span [0, L]"));
                }
            }
        }
        Ok(c)
    }

    pub fn straight(length: f64) -> Self {
        Self { length, k: Profile::zero(), tau: Profile::zero(), alpha: Profile::zero() }
    }

    pub fn constant(length: f64, k: f64, tau: f64) -> Self {
        Self { length, k: Profile::Constant(k), tau: Profile::Constant(tau), alpha: Profile::zero() }
    }

    pub fn circular_arc(length: f64, radius: f64) -> Self {
        Self::constant(length, 1.0 / radius, 0.0)
    }

    /// Helix `(a cos t, a sin t, b t)` in arc length.
    pub fn helix(length: f64, a: f64, b: f64) -> Self {
        let c2 = a * a + b * b;
        Self::constant(length, a / c2, b / c2)
    }

    /// `k(s) = k0 + k1·cos(2π·waves·s/L)`.
    pub fn sinusoidal_curvature(length: f64, k0: f64, k1: f64, waves: f64) -> Self {
        Self {
            length,
            k: Profile::Cosine {
                mean: k0,
                amp: k1,
                freq: 2.0 * core::f64::consts::PI * waves / length,
                phase: 0.0,
            },
            tau: Profile::zero(),
            alpha: Profile::zero(),
        }
    }

    /// `k(s) = k0 + a·(s − s0)²`, a single curvature well at `s0`.
    pub fn quadratic_well(length: f64, k0: f64, a: f64, s0: f64) -> Self {
        Self {
            length,
            k: Profile::Polynomial { center: s0, coeffs: vec![k0, 0.0, a] },
            tau: Profile::zero(),
            alpha: Profile::zero(),
        }
    }

    pub fn with_tau(mut self, tau: Profile) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_alpha(mut self, alpha: Profile) -> Self {
        self.alpha = alpha;
        self
    }

    /// Polynomial rotation angle `α(s) = Σ cᵢ sⁱ`.
    pub fn with_polynomial_alpha(self, coeffs: &[f64]) -> Self {
        self.with_alpha(Profile::Polynomial { center: 0.0, coeffs: coeffs.to_vec() })
    }

    /// Replaces every profile by `n + 1` samples of itself.
    pub fn tabulated(&self, n: usize) -> Result<Self> {
        Self::new(
            self.length,
            self.k.tabulate(self.length, n)?,
            self.tau.tabulate(self.length, n)?,
            self.alpha.tabulate(self.length, n)?,
        )
    }

    /// Checks the bounded difference quotients of sampled `τ` (first) and `α` (second).
    pub fn check_regularity(&self, bound: f64) -> Result<()> {
        let (t1, _) = self.tau.difference_quotients();
        let (a1, a2) = self.alpha.difference_quotients();
        let worst = t1.max(a1).max(a2);
        if worst > bound {
            return Err(Error::invalid(alloc::format!(
                "difference quotient {worst:.3e} exceeds regularity bound {bound:.3e}"
            )));
        }
        Ok(())
    }

    fn check_s(&self, s: f64) -> Result<f64> {
        let tol = 1e-12 * self.length;
        if !(s >= -tol && s <= self.length + tol) {
            return Err(Error::OutOfRange { s, length: self.length });
        }
        Ok(s.clamp(0.0, self.length))
    }

    pub fn frame_at(&self, s: f64, deriv_order: usize) -> Result<FrameData> {
        let s = self.check_s(s)?;
        let order = deriv_order.min(MAX_ORDER);
        let k = self.k.eval(s, order)?;
        let tau = self.tau.eval(s, order.min(1))?;
        let al = self.alpha.eval(s, if order == 0 { 1 } else { order.max(2) })?;

        // z = e^{−iα}; derivatives through g = −iα
        let g1 = C(0.0, -al[1]);
        let g2 = C(0.0, -al[2]);
        let g3 = C(0.0, -al[3]);
        let g4 = C(0.0, -al[4]);
        let e = C(al[0].cos(), -al[0].sin());
        let factors = [
            C(1.0, 0.0),
            g1,
            g2.add(g1.mul(g1)),
            g3.add(g1.mul(g2).scale(3.0)).add(g1.mul(g1).mul(g1)),
            g4.add(g1.mul(g3).scale(4.0))
                .add(g2.mul(g2).scale(3.0))
                .add(g1.mul(g1).mul(g2).scale(6.0))
                .add(g1.mul(g1).mul(g1).mul(g1)),
        ];
        let zd: [C; 5] = core::array::from_fn(|j| factors[j].mul(e));
        const BINOM: [[f64; 5]; 5] = [
            [1.0, 0.0, 0.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0, 0.0],
            [1.0, 2.0, 1.0, 0.0, 0.0],
            [1.0, 3.0, 3.0, 1.0, 0.0],
            [1.0, 4.0, 6.0, 4.0, 1.0],
        ];
        let mut xi = [[0.0; 2]; MAX_ORDER + 1];
        xi[0] = [k[0] * al[0].cos(), -k[0] * al[0].sin()];
        for n in 1..=order {
            let mut acc = C(0.0, 0.0);
            for j in 0..=n {
                acc = acc.add(zd[j].scale(BINOM[n][j] * k[n - j]));
            }
            xi[n] = [acc.0, acc.1];
        }
        let (sa, ca) = (al[0].sin(), al[0].cos());
        Ok(FrameData {
            s,
            k: k[0],
            tau: tau[0],
            alpha: al[0],
            dalpha: al[1],
            tau_tilde: tau[0] + al[1],
            dtau_tilde: if order >= 1 { tau[1] + al[2] } else { 0.0 },
            z: [ca, -sa],
            z_perp: [sa, ca],
            xi,
            deriv_order: order,
        })
    }

    /// `β_ε(s, y) = 1 − ε k(s) (z_α · y)`.
    pub fn beta(&self, s: f64, y: [f64; 2], eps: f64) -> Result<Beta> {
        let f = self.frame_at(s, 0)?;
        Ok(beta_from(&f, y, eps))
    }

    /// Largest `|k|` over `n + 1` equispaced samples.
    pub fn max_abs_k(&self, n: usize) -> Result<f64> {
        let mut m: f64 = 0.0;
        for i in 0..=n {
            let s = self.length * i as f64 / n as f64;
            m = m.max(self.k.eval(s, 0)?[0].abs());
        }
        Ok(m)
    }

    /// Conservative tube-level guard: `ε·max|k|·diam < 1/2`.
    pub fn metric_guard(&self, eps: f64, diam: f64) -> Result<bool> {
        Ok(eps * self.max_abs_k(512)? * diam < 0.5)
    }
}

pub fn beta_from(f: &FrameData, y: [f64; 2], eps: f64) -> Beta {
    let value = 1.0 - eps * (f.xi[0][0] * y[0] + f.xi[0][1] * y[1]);
    Beta { value, valid: value > 0.5 }
}
