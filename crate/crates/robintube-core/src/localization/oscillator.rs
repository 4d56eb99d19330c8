use alloc::vec::Vec;
use num_traits::Float;

/// `νᵢ = ν0(1 + 2i)` for `i < n`.
pub fn oscillator_spectrum(nu0: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| nu0 * (1 + 2 * i) as f64).collect()
}

/// Physicists' Hermite polynomials `H_0..=H_n` at `x`.
pub fn hermite_all(n: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(1.0);
    if n >= 1 {
        h.push(2.0 * x);
    }
    for k in 2..=n {
        let v = 2.0 * x * h[k - 1] - 2.0 * (k - 1) as f64 * h[k - 2];
        h.push(v);
    }
    h
}

/// Normalized eigenfunction `ŵᵢ(t) = Nᵢ Hᵢ(√ν0 t) e^{−ν0t²/2}` of
/// `−w″ + ν0²t²w = νᵢw`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorMode {
    pub index: usize,
    pub nu0: f64,
    /// `(ν0/π)^{1/4} / √(2ⁱ i!)`.
    pub norm: f64,
}

pub fn hermite_mode(index: usize, nu0: f64) -> OscillatorMode {
    let mut log_fact = 0.0;
    for k in 1..=index {
        log_fact += (k as f64).ln();
    }
    let norm = (nu0 / core::f64::consts::PI).powf(0.25)
        * (-(0.5 * (index as f64 * 2f64.ln() + log_fact))).exp();
    OscillatorMode { index, nu0, norm }
}

impl OscillatorMode {
    pub fn eigenvalue(&self) -> f64 {
        self.nu0 * (1 + 2 * self.index) as f64
    }

    fn parts(&self, t: f64) -> (f64, Vec<f64>, f64) {
        let x = self.nu0.sqrt() * t;
        (x, hermite_all(self.index, x), (-0.5 * x * x).exp())
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (_, h, g) = self.parts(t);
        self.norm * h[self.index] * g
    }

    /// `ŵᵢ′(t)` from `Hᵢ′ = 2iHᵢ₋₁`.
    pub fn derivative(&self, t: f64) -> f64 {
        let (x, h, g) = self.parts(t);
        let i = self.index;
        let dh = if i == 0 { 0.0 } else { 2.0 * i as f64 * h[i - 1] };
        self.norm * self.nu0.sqrt() * (dh - x * h[i]) * g
    }

    /// `ŵᵢ″(t)` by differentiating the closed form twice.
    pub fn second_derivative(&self, t: f64) -> f64 {
        let (x, h, g) = self.parts(t);
        let i = self.index;
        let fi = i as f64;
        let h1 = if i >= 1 { h[i - 1] } else { 0.0 };
        let h2 = if i >= 2 { h[i - 2] } else { 0.0 };
        let p = 2.0 * fi * h1 - x * h[i];
        let dp = 4.0 * fi * (fi - 1.0) * h2 - h[i] - 2.0 * fi * x * h1;
        self.norm * self.nu0 * (dp - x * p) * g
    }

    /// `|−ŵ″ + ν0²t²ŵ − νᵢŵ|` at `t`.
    pub fn ode_residual(&self, t: f64) -> f64 {
        let w = self.eval(t);
        (-self.second_derivative(t) + self.nu0 * self.nu0 * t * t * w - self.eigenvalue() * w).abs()
    }
}
