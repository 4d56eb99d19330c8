use alloc::vec::Vec;
use num_traits::Float;

use super::curve::CurveSpec;
use crate::{Error, Result};

pub type Vec3 = [f64; 3];

/// Centerline and Frenet frame sampled at `n_steps + 1` equispaced arc lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct FrenetSamples {
    pub s: Vec<f64>,
    pub r: Vec<Vec3>,
    pub t: Vec<Vec3>,
    pub n: Vec<Vec3>,
    pub b: Vec<Vec3>,
}

fn add(a: Vec3, b: Vec3, h: f64) -> Vec3 {
    [a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2]]
}

pub fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(a: Vec3) -> Vec3 {
    let l = dot3(a, a).sqrt();
    [a[0] / l, a[1] / l, a[2] / l]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

type State = [Vec3; 4];

fn rhs(k: f64, tau: f64, y: &State) -> State {
    let [_, t, n, b] = *y;
    [
        t,
        [k * n[0], k * n[1], k * n[2]],
        [-k * t[0] + tau * b[0], -k * t[1] + tau * b[1], -k * t[2] + tau * b[2]],
        [-tau * n[0], -tau * n[1], -tau * n[2]],
    ]
}

fn step(y: &State, f: &State, h: f64) -> State {
    core::array::from_fn(|i| add(y[i], f[i], h))
}

/// Integrates `r′ = T, T′ = kN, N′ = −kT + τB, B′ = −τN` without inspecting `k`.
pub(crate) fn integrate_frame_equations(curve: &CurveSpec, n_steps: usize) -> Result<FrenetSamples> {
    if n_steps < 2 {
        return Err(Error::invalid("need at least two integration steps"));
    }
    let h = curve.length / n_steps as f64;
    let kt = |s: f64| -> Result<(f64, f64)> {
        let s = s.min(curve.length);
        Ok((curve.k.eval(s, 0)?[0], curve.tau.eval(s, 0)?[0]))
    };
    let mut y: State = [[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut out = FrenetSamples {
        s: Vec::with_capacity(n_steps + 1),
        r: Vec::with_capacity(n_steps + 1),
        t: Vec::with_capacity(n_steps + 1),
        n: Vec::with_capacity(n_steps + 1),
        b: Vec::with_capacity(n_steps + 1),
    };
    let push = |out: &mut FrenetSamples, s: f64, y: &State| {
        out.s.push(s);
        out.r.push(y[0]);
        out.t.push(y[1]);
        out.n.push(y[2]);
        out.b.push(y[3]);
    };
    push(&mut out, 0.0, &y);
    for i in 0..n_steps {
        let s = i as f64 * h;
        let (k0, t0) = kt(s)?;
        let (km, tm) = kt(s + 0.5 * h)?;
        let (k1, t1) = kt(s + h)?;
        let f1 = rhs(k0, t0, &y);
        let f2 = rhs(km, tm, &step(&y, &f1, 0.5 * h));
        let f3 = rhs(km, tm, &step(&y, &f2, 0.5 * h));
        let f4 = rhs(k1, t1, &step(&y, &f3, h));
        let mut next = y;
        for c in 0..4 {
            for d in 0..3 {
                next[c][d] += h / 6.0 * (f1[c][d] + 2.0 * f2[c][d] + 2.0 * f3[c][d] + f4[c][d]);
            }
        }
        // Gram–Schmidt on (T, N); B completes the right-handed triad
        let t = normalize(next[1]);
        let nn = next[2];
        let proj = dot3(nn, t);
        let n = normalize(add(nn, t, -proj));
        next[1] = t;
        next[2] = n;
        next[3] = cross(t, n);
        y = next;
        push(&mut out, (i + 1) as f64 * h, &y);
    }
    Ok(out)
}

/// Frenet frame along the centerline by classical RK4 with per-step
/// re-orthonormalization. Fails where the curvature vanishes on an interval.
pub fn integrate_frenet(curve: &CurveSpec, n_steps: usize) -> Result<FrenetSamples> {
    let h = curve.length / n_steps.max(1) as f64;
    let mut run = 0;
    for i in 0..=2 * n_steps {
        let s = (i as f64 * 0.5 * h).min(curve.length);
        if curve.k.eval(s, 0)?[0].abs() < 1e-12 {
            run += 1;
            if run >= 2 {
                return Err(Error::FrameUndefined { s });
            }
        } else {
            run = 0;
        }
    }
    integrate_frame_equations(curve, n_steps)
}
