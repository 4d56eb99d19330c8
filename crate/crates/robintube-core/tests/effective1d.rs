use proptest::prelude::*;
use robintube_core::cross_section::*;
use robintube_core::effective1d::*;
use robintube_core::geometry::{CurveSpec, Profile};
use robintube_core::Error;
use std::f64::consts::PI;

fn disk(h: f64, gamma: f64) -> CrossSection {
    let shape = DomainShape::Disk { center: [0.0, 0.0], radius: 1.0, sectors: 4 };
    CrossSection::new(mesh_domain(&shape, h).unwrap().with_gamma(&GammaMap::constant(gamma)).unwrap()).unwrap()
}

fn centered_square(h: f64, gamma: f64) -> CrossSection {
    let shape = DomainShape::Rectangle { x0: -0.5, x1: 0.5, y0: -0.5, y1: 0.5 };
    CrossSection::new(mesh_domain(&shape, h).unwrap().with_gamma(&GammaMap::constant(gamma)).unwrap()).unwrap()
}

fn tensors(cs: &CrossSection, gs: &GroundState) -> PerturbationTensors {
    let sf = solve_shape_functions(cs, gs, MomentRoute::Variational).unwrap();
    compute_m0(cs, gs, &sf).unwrap()
}

fn zero_tensors() -> PerturbationTensors {
    PerturbationTensors { m0: [[0.0; 2]; 2], asymmetry: 0.0, route: MomentRoute::Variational, checks: vec![] }
}

fn consts(c1: f64, c2: f64, g0: f64, gl: f64) -> EffectiveConstants {
    EffectiveConstants { c1, c1_volume: c1, c1_boundary: 0.0, c2, gamma0: g0, gamma_l: gl }
}

fn potential(length: f64, n: usize, q: impl Fn(f64) -> f64) -> Potential1D {
    let (step, s) = uniform_grid(length, n).unwrap();
    let qv: Vec<f64> = s.iter().map(|&x| q(x)).collect();
    Potential1D {
        length,
        step,
        tensor_part: qv.clone(),
        twist_part: vec![0.0; s.len()],
        derivative_part: vec![0.0; s.len()],
        tau_tilde: vec![0.0; s.len()],
        q: qv,
        s,
    }
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Integrates `w″ = (q − μ)w` from `w(0) = 1, w′(0) = b0` by RK4 and
/// returns the end defect `w′(L) + bL·w(L)`.
fn shoot(q: &dyn Fn(f64) -> f64, length: f64, b0: f64, bl: f64, mu: f64) -> f64 {
    let n = 20_000;
    let h = length / n as f64;
    let f = |s: f64, y: [f64; 2]| [y[1], (q(s) - mu) * y[0]];
    let mut y = [1.0, b0];
    for i in 0..n {
        let s = i as f64 * h;
        let k1 = f(s, y);
        let k2 = f(s + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = f(s + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = f(s + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    }
    y[1] + bl * y[0]
}

fn shooting_root(q: &dyn Fn(f64) -> f64, length: f64, b0: f64, bl: f64, lo: f64, hi: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let fa0 = shoot(q, length, b0, bl, a);
    assert!(fa0 * shoot(q, length, b0, bl, b) < 0.0, "bracket [{lo}, {hi}] holds no sign change");
    let mut fa = fa0;
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        let fm = shoot(q, length, b0, bl, m);
        if fa * fm <= 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

#[test]
fn disk_constants_vanish_with_the_mesh() {
    let mut c1 = vec![];
    for h in [0.08, 0.04, 0.02] {
        let cs = disk(h, 1.0);
        let gs = solve_ground_state(&cs).unwrap();
        let c = compute_constants(&cs, &gs);
        assert!(c.c1 >= 0.0 && c.c1_volume >= 0.0 && c.c1_boundary >= 0.0);
        assert!(c.c2.abs() < 1e-8, "C2 = {:e}", c.c2);
        c1.push(c.c1);
    }
    // polygonal boundaries and P1 gradients leave an O(h²) tangential part
    assert!(c1[2] < 5e-5, "{c1:?}");
    assert!(slope(&[0.08, 0.04, 0.02], &c1) > 1.8, "{c1:?}");
}

#[test]
fn neumann_square_constants_vanish() {
    let cs = centered_square(0.1, 0.0);
    let gs = solve_ground_state(&cs).unwrap();
    let c = compute_constants(&cs, &gs);
    assert!(c.c2.abs() < 1e-12 && c.c1.abs() < 1e-12, "{c:?}");
}

#[test]
fn end_cap_constants_are_weighted_norms() {
    let shape = DomainShape::Disk { center: [0.0, 0.0], radius: 1.0, sectors: 4 };
    let mesh = mesh_domain(&shape, 0.1).unwrap().with_gamma(&GammaMap::constant(1.0)).unwrap();
    let cs = CrossSection::new(mesh.with_end_caps(0.7, 2.5).unwrap()).unwrap();
    let gs = solve_ground_state(&cs).unwrap();
    let c = compute_constants(&cs, &gs);
    assert!((c.gamma0 - 0.7).abs() < 1e-12 && (c.gamma_l - 2.5).abs() < 1e-12, "{c:?}");
}

/// Midpoint-refined evaluation of `∫|∇u·Ry|²` and `½∮γu²(y·ẏ)²` by sampling,
/// independent of the exact P1 formulas.
fn sampled_c1(cs: &CrossSection, u: &[f64]) -> f64 {
    let mesh = &cs.mesh;
    let grads = gradients(mesh, u);
    let mut vol = 0.0;
    let bary: Vec<[f64; 3]> = (0..6)
        .flat_map(|i| (0..6 - i).map(move |j| (i, j)))
        .map(|(i, j)| {
            let (a, b) = ((i as f64 + 1.0 / 3.0) / 6.0, (j as f64 + 1.0 / 3.0) / 6.0);
            [a, b, 1.0 - a - b]
        })
        .filter(|w| w[2] > 0.0)
        .collect();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let p = tri.map(|i| mesh.vertices[i]);
        let area = mesh.triangle_area(t);
        let g = grads[t];
        let mut acc = 0.0;
        for w in &bary {
            let y = [
                w[0] * p[0][0] + w[1] * p[1][0] + w[2] * p[2][0],
                w[0] * p[0][1] + w[1] * p[1][1] + w[2] * p[2][1],
            ];
            let v = g[0] * y[1] - g[1] * y[0];
            acc += v * v;
        }
        vol += area * acc / bary.len() as f64;
    }
    let mut bnd = 0.0;
    for e in &mesh.edges {
        let [i, j] = e.nodes;
        let (a, b) = (mesh.vertices[i], mesh.vertices[j]);
        let m = 400;
        for k in 0..m {
            let x = (k as f64 + 0.5) / m as f64;
            let y = [a[0] + x * (b[0] - a[0]), a[1] + x * (b[1] - a[1])];
            let uy = u[i] + x * (u[j] - u[i]);
            let yt = y[0] * e.tangent[0] + y[1] * e.tangent[1];
            bnd += 0.5 * e.gamma * e.length / m as f64 * uy * uy * yt * yt;
        }
    }
    vol + bnd
}

#[test]
fn square_c1_matches_refined_quadrature() {
    let coarse = centered_square(0.05, 1.0);
    let gs = solve_ground_state(&coarse).unwrap();
    let c = compute_constants(&coarse, &gs);
    assert!(c.c1 > 1e-3, "{c:?}");
    assert!(c.c2.abs() < 1e-10);
    let fine = centered_square(0.025, 1.0);
    let gf = solve_ground_state(&fine).unwrap();
    let reference = sampled_c1(&fine, &gf.u0);
    assert!((c.c1 - reference).abs() < 1e-4, "{} vs {}", c.c1, reference);
    let same_mesh = sampled_c1(&coarse, &gs.u0);
    assert!((c.c1 - same_mesh).abs() < 1e-5 * c.c1.max(1.0), "{} vs {}", c.c1, same_mesh);
}

#[test]
fn straight_tube_has_zero_potential() {
    let cs = centered_square(0.1, 1.0);
    let gs = solve_ground_state(&cs).unwrap();
    let c = compute_constants(&cs, &gs);
    let p = build_potential(&CurveSpec::straight(2.0), &tensors(&cs, &gs), &c, 64).unwrap();
    assert!(p.q.iter().all(|&v| v == 0.0));
    assert_eq!(p.s.len(), 65);
}

#[test]
fn pure_twist_gives_constant_potential() {
    let cs = centered_square(0.1, 1.0);
    let gs = solve_ground_state(&cs).unwrap();
    let c = compute_constants(&cs, &gs);
    let curve = CurveSpec::straight(2.0).with_alpha(Profile::linear(0.0, 1.5));
    let p = build_potential(&curve, &tensors(&cs, &gs), &c, 64).unwrap();
    for v in &p.q {
        assert!((v - c.c1 * 2.25).abs() < 1e-12 * c.c1.max(1.0), "{v}");
    }
}

#[test]
fn disk_on_planar_circle_gives_tensor_entry() {
    let cs = disk(0.1, 1.0);
    let gs = solve_ground_state(&cs).unwrap();
    let t = tensors(&cs, &gs);
    let c = consts(0.0, 0.0, 0.0, 0.0);
    let p = build_potential(&CurveSpec::constant(1.5, 1.0, 0.0), &t, &c, 32).unwrap();
    for v in &p.q {
        assert!((v - 0.5 * t.m0[0][0]).abs() < 1e-14, "{v}");
    }
}

#[test]
fn neumann_free_spectrum() {
    let length = 2.0;
    let mut errs = vec![];
    for n in [256, 512, 1024] {
        let sp = solve_sturm_liouville(&potential(length, n, |_| 0.0), &consts(0.0, 0.0, 0.0, 0.0), 3).unwrap();
        let mut e: f64 = 0.0;
        for i in 0..3 {
            let exact = (i as f64 * PI / length).powi(2);
            e = e.max((sp.values[i] - exact).abs());
        }
        errs.push(e);
        assert!(sp.values[0].abs() < 1e-9);
    }
    assert!(errs[2] < 1e-4, "{errs:?}");
    assert!(slope(&[256.0, 512.0, 1024.0], &errs) < -1.8, "{errs:?}");
}

#[test]
fn constant_shift_moves_the_spectrum() {
    let base = potential(1.0, DEFAULT_CELLS, |s| (3.0 * s).sin());
    let c = consts(0.0, 0.0, 0.4, 0.1);
    let a = solve_sturm_liouville(&base, &c, 4).unwrap();
    let b = solve_sturm_liouville(&base.shifted(2.5), &c, 4).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((y - x - 2.5).abs() < 1e-9, "{x} {y}");
    }
}

#[test]
fn shooting_oracle_agrees() {
    let q = |s: f64| 1.0 + (3.0 * s).sin() + 0.5 * s * s;
    let (b0, bl) = (0.4, 0.1);
    let c = consts(0.0, 0.0, b0, bl);
    let sp = solve_sturm_liouville(&potential(1.0, 4 * DEFAULT_CELLS, q), &c, 2).unwrap();
    let m0 = shooting_root(&q, 1.0, b0, bl, sp.values[0] - 0.05, sp.values[0] + 0.05);
    let m1 = shooting_root(&q, 1.0, b0, bl, sp.values[1] - 0.05, sp.values[1] + 0.05);
    assert!((sp.values[0] - m0).abs() < 1e-6, "{} vs {m0}", sp.values[0]);
    assert!((sp.values[1] - m1).abs() < 1e-6, "{} vs {m1}", sp.values[1]);
    // the default grid resolves the ground level to the same tolerance
    let d = solve_sturm_liouville(&potential(1.0, DEFAULT_CELLS, q), &c, 1).unwrap();
    assert!((d.values[0] - m0).abs() < 1e-6, "{} vs {m0}", d.values[0]);
}

#[test]
fn negative_end_coefficient_binds_a_state() {
    let pot = potential(6.0, DEFAULT_CELLS, |_| 0.0);
    let mut pot = pot;
    pot.tau_tilde.iter_mut().for_each(|t| *t = 1.0);
    // b0 = γ̃0 − C2τ̃(0) = −1.5 gives a state near −b0² on a long interval
    let sp = solve_sturm_liouville(&pot, &consts(0.0, 1.5, 0.0, 1.5), 1).unwrap();
    assert!((sp.values[0] + 2.25).abs() < 1e-3, "{}", sp.values[0]);
}

#[test]
fn spectrum_normalization_and_boundary_conditions() {
    let q = |s: f64| 2.0 * (s - 0.3).powi(2);
    let (b0, bl) = (0.8, 0.2);
    let mut defects = vec![];
    for n in [256, 512, 1024] {
        let sp = solve_sturm_liouville(&potential(1.5, n, q), &consts(0.0, 0.0, b0, bl), 3).unwrap();
        for i in 0..3 {
            let w = &sp.vectors[i];
            let h = sp.step;
            let norm: f64 = w
                .windows(2)
                .map(|p| h / 3.0 * (p[0] * p[0] + p[0] * p[1] + p[1] * p[1]))
                .sum();
            assert!((norm - 1.0).abs() < 1e-10, "{norm}");
        }
        for i in 0..2 {
            assert!(sp.values[i + 1] - sp.values[i] > 1e-3);
        }
        let (d0, dl) = sp.boundary_defects(0, b0, bl);
        defects.push(d0.max(dl));
    }
    assert!(defects[2] < 1e-2, "{defects:?}");
    assert!(defects[2] < defects[0], "{defects:?}");
}

#[test]
fn ground_level_converges_quadratically() {
    let q = |s: f64| 1.0 + (2.0 * s).cos();
    let c = consts(0.0, 0.0, 0.3, 0.6);
    let reference = solve_sturm_liouville(&potential(2.0, 8192, q), &c, 1).unwrap().values[0];
    let cells = [64.0, 128.0, 256.0];
    let errs: Vec<f64> = cells
        .iter()
        .map(|&n| (solve_sturm_liouville(&potential(2.0, n as usize, q), &c, 1).unwrap().values[0] - reference).abs())
        .collect();
    assert!(slope(&cells, &errs) < -1.8, "{errs:?}");
}

#[test]
fn form_assemblies_agree_for_constant_twist() {
    let cs = centered_square(0.1, 1.0);
    let gs = solve_ground_state(&cs).unwrap();
    let t = tensors(&cs, &gs);
    // a nonzero C2 exercises the mixed term
    let c = EffectiveConstants { c2: 0.3, gamma0: 0.5, gamma_l: 0.2, ..compute_constants(&cs, &gs) };
    let curve = CurveSpec::constant(2.0, 0.8, 0.0).with_alpha(Profile::linear(0.0, 1.2));
    let a = solve_sturm_liouville(&build_potential(&curve, &t, &c, DEFAULT_CELLS).unwrap(), &c, 3).unwrap();
    let b = solve_pencil(&assemble_form_a0(&curve, &t, &c, DEFAULT_CELLS).unwrap(), 3).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).abs() < 1e-8, "{x} vs {y}");
    }
}

#[test]
fn form_assemblies_agree_for_smooth_twist() {
    let t = zero_tensors();
    let c = consts(0.4, 0.3, 0.5, 0.2);
    let curve = CurveSpec::straight(2.0).with_tau(Profile::Cosine { mean: 0.5, amp: 0.4, freq: 1.3, phase: 0.2 });
    // the two routes differ only through nodal interpolation of τ̃ and τ̃′
    let gap = |n: usize| {
        let a = solve_sturm_liouville(&build_potential(&curve, &t, &c, n).unwrap(), &c, 3).unwrap();
        let b = solve_pencil(&assemble_form_a0(&curve, &t, &c, n).unwrap(), 3).unwrap();
        a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    };
    let gaps = [gap(1024), gap(2048), gap(4096)];
    assert!(gaps[2] < 1e-8, "{gaps:?}");
    assert!(slope(&[1024.0, 2048.0, 4096.0], &gaps) < -1.8, "{gaps:?}");
}

#[test]
fn form_assemblies_agree_to_grid_order_for_kinked_twist() {
    let t = zero_tensors();
    let c = consts(0.4, 0.3, 0.5, 0.2);
    let step = 2.0 / 2048.0;
    let values: Vec<f64> = (0..=2048).map(|i| 0.5 + (i as f64 * step - 0.9).abs()).collect();
    let curve = CurveSpec::straight(2.0).with_tau(Profile::Table { step, values });
    let n = 512;
    let a = solve_sturm_liouville(&build_potential(&curve, &t, &c, n).unwrap(), &c, 2).unwrap();
    let b = solve_pencil(&assemble_form_a0(&curve, &t, &c, n).unwrap(), 2).unwrap();
    let h = 2.0 / n as f64;
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).abs() < 10.0 * h, "{x} vs {y}");
    }
}

#[test]
fn zero_twist_assemblies_are_identical() {
    let cs = disk(0.15, 1.0);
    let gs = solve_ground_state(&cs).unwrap();
    let t = tensors(&cs, &gs);
    let c = compute_constants(&cs, &gs);
    let curve = CurveSpec::sinusoidal_curvature(2.0, 1.0, 0.3, 1.0);
    let pa = assemble_q_form(&build_potential(&curve, &t, &c, 128).unwrap(), &c).unwrap();
    let pb = assemble_form_a0(&curve, &t, &c, 128).unwrap();
    assert_eq!(pa.a.to_dense(), pb.a.to_dense());
    assert_eq!(pa.b.to_dense(), pb.b.to_dense());
}

#[test]
fn symmetric_prediction_composes() {
    let sp = solve_sturm_liouville(&potential(3.0, DEFAULT_CELLS, |_| 0.0), &consts(0.0, 0.0, 0.0, 0.0), 3).unwrap();
    let pred = predict_symmetric(1.5, [0.0, 0.0], 1e-6, &sp, 0.1).unwrap();
    for i in 0..3 {
        let expect = 150.0 + (i as f64 * PI / 3.0).powi(2);
        assert!((pred.values[i] - expect).abs() < 1e-4, "{}", pred.values[i]);
    }
}

#[test]
fn asymmetric_section_is_rejected() {
    let sp = solve_sturm_liouville(&potential(1.0, 64, |_| 0.0), &consts(0.0, 0.0, 0.0, 0.0), 1).unwrap();
    let err = predict_symmetric(1.0, [0.1, 0.0], 1e-6, &sp, 0.1).unwrap_err();
    assert!(matches!(err, Error::NotSymmetric { norm } if (norm - 0.1).abs() < 1e-15));
    assert!(err.to_string().contains("localization"));
}

#[test]
fn limit_profile_is_a_product() {
    let cs = disk(0.2, 1.0);
    let gs = solve_ground_state(&cs).unwrap();
    let sp = solve_sturm_liouville(&potential(1.0, 64, |_| 0.0), &consts(0.0, 0.0, 0.0, 0.0), 2).unwrap();
    let v = limit_profile(&sp, &gs, 1, 0.0);
    let w = sp.eval(1, 0.0);
    for (a, u) in v.iter().zip(gs.u0.iter()) {
        assert!((a - w * u).abs() < 1e-15);
    }
    assert!((w.abs() - 2f64.sqrt()).abs() < 1e-3, "{w}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn larger_potential_raises_every_level(a in -1.0f64..1.0, b in 0.0f64..2.0, bump in 0.01f64..1.0, c in 0.0f64..3.0) {
        let q = move |s: f64| a + b * (2.0 * s).sin();
        let k = consts(0.0, 0.0, c, 0.5);
        let lo = solve_sturm_liouville(&potential(1.5, 128, q), &k, 3).unwrap();
        let hi = solve_sturm_liouville(&potential(1.5, 128, move |s| q(s) + bump * (1.0 + s)), &k, 3).unwrap();
        for (x, y) in lo.values.iter().zip(&hi.values) {
            prop_assert!(y > x);
        }
        for w in lo.values.windows(2) {
            prop_assert!(w[1] - w[0] > 0.0);
        }
    }
}
