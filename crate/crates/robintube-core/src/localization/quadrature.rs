use num_traits::Float;

const GL7: [(f64, f64); 7] = [
    (0.0, 0.417_959_183_673_469_4),
    (0.405_845_151_377_397_2, 0.381_830_050_505_118_9),
    (-0.405_845_151_377_397_2, 0.381_830_050_505_118_9),
    (0.741_531_185_599_394_5, 0.279_705_391_489_276_7),
    (-0.741_531_185_599_394_5, 0.279_705_391_489_276_7),
    (0.949_107_912_342_758_5, 0.129_484_966_168_869_7),
    (-0.949_107_912_342_758_5, 0.129_484_966_168_869_7),
];

fn gl7(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
    GL7.iter().map(|&(x, w)| w * f(c + r * x)).sum::<f64>() * r
}

fn refine(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = gl7(f, a, m);
    let right = gl7(f, m, b);
    if depth == 0 || (left + right - whole).abs() <= tol {
        return left + right;
    }
    refine(f, a, m, left, 0.5 * tol, depth - 1) + refine(f, m, b, right, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss–Legendre quadrature on `[a, b]`.
pub fn adaptive(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let panels = 16;
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let whole = gl7(&mut f, x0, x1);
            refine(&mut f, x0, x1, whole, tol / panels as f64, 30)
        })
        .sum()
}

/// Half-width of the window carrying the Gaussian-weighted integrals.
pub fn window(nu0: f64) -> f64 {
    12.0 / nu0.sqrt()
}

/// `∫_ℝ f` for integrands decaying like `e^{−ν0t²}`: adaptive quadrature on
/// the window plus the leading tail `f(±T)/(2ν0T)`.
pub fn gaussian_integral(mut f: impl FnMut(f64) -> f64, nu0: f64, tol: f64) -> f64 {
    let t = window(nu0);
    let tail = (f(t) + f(-t)) / (2.0 * nu0 * t);
    adaptive(&mut f, -t, t, tol) + tail
}
