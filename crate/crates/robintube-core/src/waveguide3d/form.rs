use alloc::vec::Vec;
use num_traits::Float;

use super::TubeMesh;
use crate::cross_section::{edge_mass, shape_gradients, weighted_mass};
use crate::eigencore::{SymSparseMatrix, TripletBuilder};
use crate::geometry::{CurveSpec, FrameData};
use crate::{Error, Result};

/// How the lateral surface measure enters the boundary term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LateralMeasure {
    /// `β_ε` plus the separate `τ̃²/2 ∮γv²(y·ẏ)²` term.
    #[default]
    Expanded,
    /// `√(β_ε² + ε²τ̃²(y·ẏ)²)`.
    Exact,
}

/// Discretized transformed form: `A` for the energy divided by `ε²`, `B` for `∫β_ε v²`.
#[derive(Debug, Clone)]
pub struct TubeForm {
    pub eps: f64,
    pub measure: LateralMeasure,
    pub a: SymSparseMatrix,
    pub b: SymSparseMatrix,
    /// Smallest `β_ε` met at a vertex of `[0, L] × ω`.
    pub min_beta: f64,
}

pub const BETA_FLOOR: f64 = 0.5;

const GAUSS2: [(f64, f64); 2] = [(0.211_324_865_405_187_1, 0.5), (0.788_675_134_594_812_9, 0.5)];
const GAUSS3: [(f64, f64); 3] = [
    (0.112_701_665_379_258_3, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

fn beta_at(f: &FrameData, y: [f64; 2], eps: f64) -> f64 {
    1.0 - eps * (f.xi[0][0] * y[0] + f.xi[0][1] * y[1])
}

pub fn assemble_tube_form(
    curve: &CurveSpec,
    tube: &TubeMesh,
    eps: f64,
    measure: LateralMeasure,
) -> Result<TubeForm> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("ε must lie in (0, 1)"));
    }
    if (curve.length - tube.length).abs() > 1e-12 * curve.length {
        return Err(Error::invalid("tube length differs from the curve length"));
    }
    let mesh = &tube.section;
    let n = tube.n_nodes();
    let ie2 = 1.0 / (eps * eps);
    let h = tube.step;
    let mut ab = TripletBuilder::with_capacity(n, 40 * n);
    let mut bb = TripletBuilder::with_capacity(n, 40 * n);

    // frames at the Gauss points and midpoints of every cell
    let nc = tube.n_cells();
    let mut gauss = Vec::with_capacity(2 * nc);
    let mut mids = Vec::with_capacity(nc);
    for j in 0..nc {
        for (x, _) in GAUSS2 {
            gauss.push(curve.frame_at(tube.s[j] + x * h, 0)?);
        }
        mids.push(curve.frame_at(tube.s[j] + 0.5 * h, 0)?);
    }
    let mut min_beta = f64::INFINITY;
    let mut worst = [0.0; 2];
    for f in gauss.iter().chain(&mids) {
        for &y in &mesh.vertices {
            let b = beta_at(f, y, eps);
            if b < min_beta {
                min_beta = b;
                worst = y;
            }
        }
    }
    if !(min_beta >= BETA_FLOOR) {
        return Err(Error::Degenerate { weight: min_beta, y0: worst[0], y1: worst[1] });
    }

    let dphi = [-1.0 / h, 1.0 / h];
    for tri in &mesh.triangles {
        let p = tri.map(|i| mesh.vertices[i]);
        let (g, area) = shape_gradients(p);
        let grad_dot: [f64; 9] = core::array::from_fn(|k| {
            let (a, b) = (k / 3, k % 3);
            g[a][0] * g[b][0] + g[a][1] * g[b][1]
        });
        let centroid = [(p[0][0] + p[1][0] + p[2][0]) / 3.0, (p[0][1] + p[1][1] + p[2][1]) / 3.0];
        // edge-midpoint rule: points, barycentric values, rotated gradients
        let qp: [([f64; 2], [f64; 3]); 3] = [
            ([(p[0][0] + p[1][0]) / 2.0, (p[0][1] + p[1][1]) / 2.0], [0.5, 0.5, 0.0]),
            ([(p[1][0] + p[2][0]) / 2.0, (p[1][1] + p[2][1]) / 2.0], [0.0, 0.5, 0.5]),
            ([(p[0][0] + p[2][0]) / 2.0, (p[0][1] + p[2][1]) / 2.0], [0.5, 0.0, 0.5]),
        ];
        let rot = |y: [f64; 2]| -> [f64; 3] { core::array::from_fn(|a| g[a][0] * y[1] - g[a][1] * y[0]) };
        for j in 0..nc {
            let dofs: [usize; 6] = core::array::from_fn(|k| tube.index(j + k / 3, tri[k % 3]));
            let mut ae = [0.0; 36];
            let mut be = [0.0; 36];
            for (gi, &(x, w)) in GAUSS2.iter().enumerate() {
                let f = &gauss[2 * j + gi];
                let phi = [1.0 - x, x];
                let wh = w * h;
                let tt = f.tau_tilde;
                let mut minv = [0.0; 9];
                let mut dmat = [0.0; 9];
                for (y, lam) in &qp {
                    let ib = area / 3.0 / beta_at(f, *y, eps);
                    let r = rot(*y);
                    for a in 0..3 {
                        for b in 0..3 {
                            minv[a * 3 + b] += ib * lam[a] * lam[b];
                            dmat[a * 3 + b] += ib * r[a] * r[b];
                        }
                    }
                }
                let bc = beta_at(f, centroid, eps);
                let wm = weighted_mass(area, tri.map(|i| beta_at(f, mesh.vertices[i], eps)));
                for pp in 0..2 {
                    for q in 0..2 {
                        for a in 0..3 {
                            for b in 0..3 {
                                let k = (pp * 3 + a) * 6 + q * 3 + b;
                                let ab3 = a * 3 + b;
                                ae[k] += wh
                                    * (dphi[pp] * dphi[q] * minv[ab3]
                                        + phi[pp] * phi[q] * (tt * tt * dmat[ab3] + ie2 * area * bc * grad_dot[ab3]));
                                be[k] += wh * phi[pp] * phi[q] * wm[ab3];
                            }
                        }
                    }
                }
            }
            // mixed term at the cell midpoint, symmetric by construction
            let f = &mids[j];
            let mut cm = [0.0; 9];
            for (y, lam) in &qp {
                let ib = area / 3.0 / beta_at(f, *y, eps);
                let r = rot(*y);
                for a in 0..3 {
                    for b in 0..3 {
                        cm[a * 3 + b] += ib * lam[a] * r[b];
                    }
                }
            }
            for pp in 0..2 {
                for q in 0..2 {
                    for a in 0..3 {
                        for b in 0..3 {
                            let k = (pp * 3 + a) * 6 + q * 3 + b;
                            ae[k] += h * f.tau_tilde * 0.5 * (dphi[pp] * cm[a * 3 + b] + dphi[q] * cm[b * 3 + a]);
                        }
                    }
                }
            }
            ab.add_block(&dofs, &ae);
            bb.add_block(&dofs, &be);
        }
    }

    for e in &mesh.edges {
        let [i0, i1] = e.nodes;
        let (y0, y1) = (mesh.vertices[i0], mesh.vertices[i1]);
        for j in 0..nc {
            let dofs = [tube.index(j, i0), tube.index(j, i1), tube.index(j + 1, i0), tube.index(j + 1, i1)];
            let mut ae = [0.0; 16];
            for (gi, &(x, w)) in GAUSS2.iter().enumerate() {
                let f = &gauss[2 * j + gi];
                let phi = [1.0 - x, x];
                let wh = w * h;
                let tt = f.tau_tilde;
                let mut em = [0.0; 4];
                match measure {
                    LateralMeasure::Expanded => {
                        let lat = edge_mass(e.length, beta_at(f, y0, eps), beta_at(f, y1, eps));
                        for k in 0..4 {
                            em[k] += ie2 * e.gamma * lat[k];
                        }
                        for (z, wz) in GAUSS3 {
                            let y = [y0[0] + z * (y1[0] - y0[0]), y0[1] + z * (y1[1] - y0[1])];
                            let yt = y[0] * e.tangent[0] + y[1] * e.tangent[1];
                            let c = 0.5 * tt * tt * e.gamma * yt * yt * e.length * wz;
                            let lam = [1.0 - z, z];
                            for a in 0..2 {
                                for b in 0..2 {
                                    em[a * 2 + b] += c * lam[a] * lam[b];
                                }
                            }
                        }
                    }
                    LateralMeasure::Exact => {
                        for (z, wz) in GAUSS3 {
                            let y = [y0[0] + z * (y1[0] - y0[0]), y0[1] + z * (y1[1] - y0[1])];
                            let yt = y[0] * e.tangent[0] + y[1] * e.tangent[1];
                            let bz = beta_at(f, y, eps);
                            let wgt = (bz * bz + eps * eps * tt * tt * yt * yt).sqrt();
                            let c = ie2 * e.gamma * wgt * e.length * wz;
                            let lam = [1.0 - z, z];
                            for a in 0..2 {
                                for b in 0..2 {
                                    em[a * 2 + b] += c * lam[a] * lam[b];
                                }
                            }
                        }
                    }
                }
                for pp in 0..2 {
                    for q in 0..2 {
                        for a in 0..2 {
                            for b in 0..2 {
                                ae[(pp * 2 + a) * 4 + q * 2 + b] += wh * phi[pp] * phi[q] * em[a * 2 + b];
                            }
                        }
                    }
                }
            }
            ab.add_block(&dofs, &ae);
        }
    }

    // end caps
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let area = mesh.triangle_area(t);
        for (j, field) in [(0, &mesh.gamma0), (nc, &mesh.gamma_l)] {
            let wv = tri.map(|i| field[i]);
            if wv.iter().all(|v| *v == 0.0) {
                continue;
            }
            let m = weighted_mass(area, wv);
            let dofs = tri.map(|i| tube.index(j, i));
            ab.add_block(&dofs, &m);
        }
    }

    let a = ab.build()?;
    let b = bb.build()?;
    Ok(TubeForm { eps, measure, a, b, min_beta })
}
