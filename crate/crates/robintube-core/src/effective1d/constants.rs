use crate::cross_section::{gradients, shape_gradients, weighted_mass, CrossSection, GroundState};

/// Constants of the effective one-dimensional problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveConstants {
    /// `c1_volume + c1_boundary`.
    pub c1: f64,
    /// `∫|∇u0·Ry|²`.
    pub c1_volume: f64,
    /// `½∮γu0²(y·ẏ)²`.
    pub c1_boundary: f64,
    /// `∫u0(∇u0·Ry)`.
    pub c2: f64,
    /// `∫γ0u0²`.
    pub gamma0: f64,
    /// `∫γL u0²`.
    pub gamma_l: f64,
}

const GAUSS3: [(f64, f64); 3] = [
    (0.112_701_665_379_258_3, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

fn p1_pair(area: f64, f: [f64; 3], g: [f64; 3]) -> f64 {
    area / 12.0
        * (2.0 * (f[0] * g[0] + f[1] * g[1] + f[2] * g[2])
            + f[0] * (g[1] + g[2])
            + f[1] * (g[0] + g[2])
            + f[2] * (g[0] + g[1]))
}

/// `R y = (y₂, −y₁)`.
pub fn rotate(y: [f64; 2]) -> [f64; 2] {
    [y[1], -y[0]]
}

pub fn compute_constants(cs: &CrossSection, gs: &GroundState) -> EffectiveConstants {
    let mesh = &cs.mesh;
    let u = &gs.u0.values;
    let grads = gradients(mesh, u);
    let (mut c1_volume, mut c2, mut gamma0, mut gamma_l) = (0.0, 0.0, 0.0, 0.0);
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let p = tri.map(|i| mesh.vertices[i]);
        let (_, area) = shape_gradients(p);
        let g = grads[t];
        // the tangential derivative is affine on each triangle
        let tang = p.map(|y| {
            let r = rotate(y);
            g[0] * r[0] + g[1] * r[1]
        });
        let uv = tri.map(|i| u[i]);
        c1_volume += p1_pair(area, tang, tang);
        c2 += p1_pair(area, uv, tang);
        let m0 = weighted_mass(area, tri.map(|i| mesh.gamma0[i]));
        let ml = weighted_mass(area, tri.map(|i| mesh.gamma_l[i]));
        for a in 0..3 {
            for b in 0..3 {
                gamma0 += m0[a * 3 + b] * uv[a] * uv[b];
                gamma_l += ml[a * 3 + b] * uv[a] * uv[b];
            }
        }
    }
    let mut c1_boundary = 0.0;
    for e in &mesh.edges {
        let [i, j] = e.nodes;
        let (a, b) = (mesh.vertices[i], mesh.vertices[j]);
        for (x, w) in GAUSS3 {
            let y = [a[0] + x * (b[0] - a[0]), a[1] + x * (b[1] - a[1])];
            let uy = u[i] + x * (u[j] - u[i]);
            let yt = y[0] * e.tangent[0] + y[1] * e.tangent[1];
            c1_boundary += 0.5 * e.gamma * e.length * w * uy * uy * yt * yt;
        }
    }
    EffectiveConstants {
        c1: c1_volume + c1_boundary,
        c1_volume,
        c1_boundary,
        c2,
        gamma0,
        gamma_l,
    }
}
