use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use robintube_core::eigencore::{
    solve_constrained, solve_gevp_smallest, SymSparseMatrix, TripletBuilder,
};
use robintube_core::Error;

fn dense_oracle(a: &SymSparseMatrix, b: &SymSparseMatrix) -> Vec<f64> {
    let n = a.dim();
    let am = DMatrix::from_row_slice(n, n, &a.to_dense());
    let bm = DMatrix::from_row_slice(n, n, &b.to_dense());
    let l = bm.cholesky().expect("B positive definite").l();
    let li = l.clone().try_inverse().unwrap();
    let c = &li * am * li.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut w: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    w.sort_by(|x, y| x.partial_cmp(y).unwrap());
    w
}

struct Rng(u64);
impl Rng {
    fn uniform(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Sparse random pencil: A symmetric (possibly indefinite), B diagonally dominant SPD.
fn random_pencil(n: usize, seed: u64, density: f64) -> (SymSparseMatrix, SymSparseMatrix) {
    let mut r = Rng(seed.wrapping_mul(2654435761).wrapping_add(1));
    let mut ta = TripletBuilder::new(n);
    let mut tb = TripletBuilder::new(n);
    let mut rowsum = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            if r.uniform() < density {
                ta.add(i, j, r.uniform() * 2.0 - 1.0);
                let v = 0.3 * (r.uniform() - 0.5);
                tb.add(i, j, v);
                rowsum[i] += v.abs();
                rowsum[j] += v.abs();
            }
        }
    }
    for i in 0..n {
        ta.add(i, i, 4.0 * r.uniform() - 1.0);
        tb.add(i, i, 1.0 + rowsum[i] + r.uniform());
    }
    (ta.build().unwrap(), tb.build().unwrap())
}

#[test]
fn diagonal_pencil() {
    let a = SymSparseMatrix::diagonal(&[3.0, 1.0, 2.0]);
    let b = SymSparseMatrix::identity(3);
    let e = solve_gevp_smallest(&a, &b, 2, 1e-9).unwrap();
    assert!((e.values[0] - 1.0).abs() < 1e-12);
    assert!((e.values[1] - 2.0).abs() < 1e-12);
}

#[test]
fn two_by_two_pencil() {
    let a = SymSparseMatrix::from_triplets(2, &[(0, 0, 2.0), (1, 0, -1.0), (1, 1, 2.0)]).unwrap();
    let b = SymSparseMatrix::identity(2);
    let e = solve_gevp_smallest(&a, &b, 1, 1e-9).unwrap();
    assert!((e.values[0] - 1.0).abs() < 1e-12);
}

#[test]
fn random_spd_pencil_matches_dense_oracle() {
    let (a0, b) = random_pencil(50, 7, 0.2);
    // make A SPD as well
    let a = SymSparseMatrix::linear_combination(&[(1.0, &a0), (12.0, &b)]).unwrap();
    let e = solve_gevp_smallest(&a, &b, 5, 1e-9).unwrap();
    let w = dense_oracle(&a, &b);
    for i in 0..5 {
        assert!((e.values[i] - w[i]).abs() < 1e-10, "{} vs {}", e.values[i], w[i]);
    }
}

#[test]
fn indefinite_b_is_rejected() {
    let a = SymSparseMatrix::identity(3);
    let b = SymSparseMatrix::diagonal(&[1.0, -1.0, 1.0]);
    assert!(matches!(
        solve_gevp_smallest(&a, &b, 1, 1e-9),
        Err(Error::NotPositiveDefinite { .. })
    ));
}

#[test]
fn iteration_cap_reports_residuals() {
    let (a, b) = random_pencil(80, 3, 0.1);
    let opts = robintube_core::eigencore::EigOptions { max_iter: 1, tol: 1e-14, ..Default::default() };
    match robintube_core::eigencore::solve_gevp(&a, &b, 3, &opts) {
        Err(Error::NoConvergence { residuals, .. }) => assert_eq!(residuals.len(), 3),
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn constrained_decoupled_example() {
    let a = SymSparseMatrix::diagonal(&[1.0, 2.0]);
    let b = SymSparseMatrix::identity(2);
    let s = solve_constrained(&a, 1.0, &b, &[0.0, 1.0], &[1.0, 0.0]).unwrap();
    assert!(s.x[0].abs() < 1e-14);
    assert!((s.x[1] - 1.0).abs() < 1e-12);
}

#[test]
fn constrained_rejects_kernel_rhs() {
    let (a0, b) = random_pencil(30, 11, 0.3);
    let e = solve_gevp_smallest(&a0, &b, 1, 1e-12).unwrap();
    let u = &e.vectors[0];
    let rhs = b.matvec(u);
    assert!(matches!(
        solve_constrained(&a0, e.values[0], &b, &rhs, u),
        Err(Error::Incompatible { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn smallest_pairs_match_dense_oracle(n in 2usize..=200, k in 1usize..6, seed in 0u64..10_000) {
        let k = k.min(n);
        let (a, b) = random_pencil(n, seed, (6.0 / n as f64).min(0.5));
        let e = solve_gevp_smallest(&a, &b, k, 1e-9).unwrap();
        let w = dense_oracle(&a, &b);
        for i in 0..k {
            prop_assert!((e.values[i] - w[i]).abs() <= 1e-9 * w[i].abs().max(1.0),
                "pair {}: {} vs {}", i, e.values[i], w[i]);
        }
        for i in 0..k {
            let v = &e.vectors[i];
            let rq = a.quad_form(v) / b.quad_form(v);
            prop_assert!((rq - e.values[i]).abs() <= 10.0 * 1e-9 * e.values[i].abs().max(1.0));
            for j in 0..k {
                let g = b.bilinear(v, &e.vectors[j]);
                let t = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g - t).abs() < 1e-9);
            }
            if i > 0 {
                prop_assert!(e.values[i] >= e.values[i - 1]);
            }
        }
    }

    #[test]
    fn constrained_solution_ignores_kernel_component(seed in 0u64..10_000, amp in -5.0f64..5.0) {
        let (a, b) = random_pencil(40, seed, 0.2);
        let e = solve_gevp_smallest(&a, &b, 1, 1e-12).unwrap();
        let (lam, u) = (e.values[0], &e.vectors[0]);
        let mut r = Rng(seed + 17);
        let mut rhs: Vec<f64> = (0..40).map(|_| r.uniform() - 0.5).collect();
        let cu: f64 = u.iter().zip(&rhs).map(|(x, y)| x * y).sum();
        let bu = b.matvec(u);
        let ubu: f64 = u.iter().zip(&bu).map(|(x, y)| x * y).sum();
        for (f, g) in rhs.iter_mut().zip(&bu) { *f -= cu / ubu * g; }
        let x1 = solve_constrained(&a, lam, &b, &rhs, u).unwrap();
        // a tiny admissible kernel-aligned perturbation is projected away
        let scale = 1e-9 * amp;
        let rhs2: Vec<f64> = rhs.iter().zip(&bu).map(|(f, g)| f + scale * g).collect();
        let x2 = solve_constrained(&a, lam, &b, &rhs2, u).unwrap();
        let xn = x1.x.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (p, q) in x1.x.iter().zip(&x2.x) {
            prop_assert!((p - q).abs() <= 1e-9 * xn.max(1.0));
        }
        let bx: f64 = bu.iter().zip(&x1.x).map(|(p, q)| p * q).sum();
        prop_assert!(bx.abs() <= 1e-10 * xn);
    }
}
