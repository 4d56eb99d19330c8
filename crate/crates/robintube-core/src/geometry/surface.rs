use alloc::vec::Vec;

use super::curve::CurveSpec;
use super::frenet::{integrate_frame_equations, Vec3};
use crate::{Error, Result};

/// Triangulated boundary surface of the physical tube.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
}

/// Maps the lateral boundary `∂ω` (a closed polygon, counterclockwise) through
/// `x = r(s) + ε y₁ N_α + ε y₂ B_α` and closes both ends with fans.
///
/// `n_s` is the number of arc-length cells and `per_edge` the number of
/// subdivisions of each polygon side.
pub fn export_tube(
    curve: &CurveSpec,
    polygon: &[[f64; 2]],
    eps: f64,
    n_s: usize,
    per_edge: usize,
) -> Result<SurfaceMesh> {
    if polygon.len() < 3 || per_edge == 0 {
        return Err(Error::invalid("tube export needs a polygon and per_edge ≥ 1"));
    }
    let frames = integrate_frame_equations(curve, n_s)?;
    let mut ring = Vec::with_capacity(polygon.len() * per_edge);
    for (i, p) in polygon.iter().enumerate() {
        let q = polygon[(i + 1) % polygon.len()];
        for j in 0..per_edge {
            let t = j as f64 / per_edge as f64;
            ring.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    let m = ring.len();
    let mut vertices = Vec::with_capacity((n_s + 1) * m);
    for i in 0..=n_s {
        let f = curve.frame_at(frames.s[i], 0)?;
        let (r, n, b) = (frames.r[i], frames.n[i], frames.b[i]);
        // N_α = cos α N + sin α B, B_α = −sin α N + cos α B
        let (c, s) = (f.z[0], -f.z[1]);
        let na = [c * n[0] + s * b[0], c * n[1] + s * b[1], c * n[2] + s * b[2]];
        let ba = [c * b[0] - s * n[0], c * b[1] - s * n[1], c * b[2] - s * n[2]];
        for y in &ring {
            vertices.push(core::array::from_fn(|d| r[d] + eps * (y[0] * na[d] + y[1] * ba[d])));
        }
    }
    let mut faces = Vec::new();
    for i in 0..n_s {
        for j in 0..m {
            let a = i * m + j;
            let b = i * m + (j + 1) % m;
            let c = (i + 1) * m + j;
            let d = (i + 1) * m + (j + 1) % m;
            faces.push([a, c, b]);
            faces.push([b, c, d]);
        }
    }
    for j in 1..m - 1 {
        faces.push([0, j + 1, j]);
        let off = n_s * m;
        faces.push([off, off + j, off + j + 1]);
    }
    Ok(SurfaceMesh { vertices, faces })
}
