//! Property tests for the algebraic invariants of each module.

mod common;

use common::*;
use genspectra::eigen::{char_poly_eig, eig_sym, spectral_reconstruct, SortOrder};
use genspectra::gen_eigen::{solve_quick_dirty, solve_rigorous, Pencil};
use genspectra::matrix::{centering_matrix, determinant, frobenius_norm_sq, is_psd, trace};
use genspectra::ml::{
    covariance, fda_fit, kernel_matrix, kspca_fit, pca_fit, scatter_matrices, KernelSpec,
    LabeledDataset,
};
use genspectra::rayleigh::{
    check_stationarity, rayleigh_quotient, reconstruction_objective, solve_form1, solve_form2,
    solve_form3_4, Direction, QuadraticForm,
};
use genspectra::{Matrix, SymMatrix, Vector};
use proptest::collection::vec;
use rand::Rng;
use proptest::prelude::*;

fn sym_from(d: usize, v: &[f64]) -> SymMatrix {
    SymMatrix::symmetrize(&Matrix::new(d, d, v.to_vec()).unwrap()).unwrap()
}

fn sym_strategy(lo: usize, hi: usize) -> impl Strategy<Value = SymMatrix> {
    (lo..=hi).prop_flat_map(|d| vec(-10.0..10.0f64, d * d).prop_map(move |v| sym_from(d, &v)))
}

fn matrix_strategy(r: usize, c: usize) -> impl Strategy<Value = Matrix> {
    vec(-5.0..5.0f64, r * c).prop_map(move |v| Matrix::new(r, c, v).unwrap())
}

/// Random symmetric A with SPD B of bounded condition, built from a seed.
fn pencil_strategy(max_d: usize, cond: f64) -> impl Strategy<Value = Pencil> {
    (2..=max_d, any::<u64>()).prop_map(move |(d, seed)| {
        let mut r = rng(seed);
        let a = random_sym(&mut r, d);
        let b = to_sym(&random_spd_dense(&mut r, d, cond));
        Pencil::new(a, b).unwrap()
    })
}

fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1e-300)
}

fn projector_of(m: &Matrix) -> Dense {
    projector(&m.to_columns())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // ---- matrix ----

    #[test]
    fn matmul_is_associative(
        (a, b, c) in (1usize..5, 1usize..5, 1usize..5, 1usize..5).prop_flat_map(|(n, k, m, l)| {
            (matrix_strategy(n, k), matrix_strategy(k, m), matrix_strategy(m, l))
        })
    ) {
        let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        let scale = left.max_abs().max(1.0);
        prop_assert!(left.max_abs_diff(&right) <= 1e-10 * scale * 25.0);
    }

    #[test]
    fn centering_matrix_is_idempotent(n in 1usize..30) {
        let h = centering_matrix(n).into_matrix();
        prop_assert!(h.matmul(&h).unwrap().max_abs_diff(&h) < 1e-12);
        let ones = Vector::new(vec![1.0; n]).unwrap();
        prop_assert!(h.mul_vec(&ones).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn determinant_is_product_of_eigenvalues(a in sym_strategy(1, 7)) {
        let e = eig_sym(&a, SortOrder::Descending).unwrap();
        let prod: f64 = e.lambda.iter().product();
        let scale = e.lambda.iter().map(|l| l.abs().max(1.0)).product::<f64>();
        prop_assert!((determinant(&a) - prod).abs() <= 1e-8 * scale);
    }

    #[test]
    fn frobenius_is_trace_of_gram(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| matrix_strategy(r, c))) {
        let gram = m.transpose().matmul(&m).unwrap();
        let tr: f64 = (0..gram.rows()).map(|i| gram.get(i, i)).sum();
        prop_assert!(rel_close(frobenius_norm_sq(&m), tr, 1e-10) || tr == 0.0);
    }

    // ---- eigen ----

    #[test]
    fn eig_round_trip_and_orthogonality(a in sym_strategy(1, 12)) {
        let e = eig_sym(&a, SortOrder::Descending).unwrap();
        let back = spectral_reconstruct(&e);
        let norm = a.as_matrix().frobenius_norm();
        prop_assert!(back.as_matrix().sub(a.as_matrix()).unwrap().frobenius_norm() <= 1e-8 * norm.max(1e-300));
        let g = e.phi.transpose().matmul(&e.phi).unwrap();
        prop_assert!(g.max_abs_diff(&Matrix::identity(a.dim())) < 1e-8);
        prop_assert!(e.lambda.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eig_matches_char_poly(a in sym_strategy(2, 4)) {
        let e = eig_sym(&a, SortOrder::Descending).unwrap();
        let roots = char_poly_eig(&a).unwrap();
        let scale = e.lambda.iter().fold(1.0f64, |m, l| m.max(l.abs()));
        for (x, y) in e.lambda.iter().zip(&roots) {
            prop_assert!((x - y).abs() <= 1e-7 * scale, "{:?} vs {:?}", e.lambda, roots);
        }
    }

    #[test]
    fn gram_spectrum_is_nonnegative(x in (1usize..8, 1usize..8).prop_flat_map(|(d, n)| matrix_strategy(d, n))) {
        let g = SymMatrix::symmetrize(&x.matmul(&x.transpose()).unwrap()).unwrap();
        let e = eig_sym(&g, SortOrder::Ascending).unwrap();
        let scale = g.as_matrix().max_abs().max(1.0);
        prop_assert!(e.lambda[0] >= -1e-9 * scale);
    }

    #[test]
    fn eigenvalues_sum_to_trace(a in sym_strategy(1, 12)) {
        let e = eig_sym(&a, SortOrder::Descending).unwrap();
        let s: f64 = e.lambda.iter().sum();
        let scale = a.as_matrix().frobenius_norm().max(1.0);
        prop_assert!((s - trace(&a)).abs() <= 1e-9 * scale);
    }

    // ---- generalized ----

    #[test]
    fn rigorous_diagonalizes_both(p in pencil_strategy(10, 1e4)) {
        let (sol, _) = solve_rigorous(&p).unwrap();
        let d = p.dim();
        let ata = p.a().congruence(&sol.phi).unwrap();
        let btb = p.b().congruence(&sol.phi).unwrap();
        prop_assert!(ata.as_matrix().max_abs_diff(&Matrix::from_diag(&sol.lambda)) < 1e-7 * sol.lambda.iter().fold(1.0f64, |m, l| m.max(l.abs())));
        prop_assert!(btb.as_matrix().max_abs_diff(&Matrix::identity(d)) < 1e-7);
    }

    #[test]
    fn identity_b_reduces_to_eig(a in sym_strategy(1, 10)) {
        let e = eig_sym(&a, SortOrder::Descending).unwrap();
        let p = Pencil::standard(a.clone());
        let q = solve_quick_dirty(&p, None).unwrap();
        let (g, _) = solve_rigorous(&p).unwrap();
        let scale = e.lambda.iter().fold(1.0f64, |m, l| m.max(l.abs()));
        for i in 0..a.dim() {
            prop_assert!((q.lambda[i] - e.lambda[i]).abs() <= 1e-8 * scale);
            prop_assert!((g.lambda[i] - e.lambda[i]).abs() <= 1e-8 * scale);
        }
    }

    #[test]
    fn methods_agree(p in pencil_strategy(8, 1e6)) {
        let q = solve_quick_dirty(&p, None).unwrap();
        let (g, _) = solve_rigorous(&p).unwrap();
        let scale = g.lambda.iter().fold(1.0f64, |m, l| m.max(l.abs()));
        for (x, y) in sorted(&q.lambda).iter().zip(sorted(&g.lambda)) {
            prop_assert!((x - y).abs() <= 1e-6 * scale);
        }
    }

    #[test]
    fn eigenpairs_are_stationary(p in pencil_strategy(10, 1e4)) {
        let (sol, _) = solve_rigorous(&p).unwrap();
        let norm = p.a().as_matrix().frobenius_norm();
        for (j, l) in sol.lambda.iter().enumerate() {
            let phi = sol.phi.column(j);
            let r = p.a().sub(&p.b().scale(*l)).unwrap().as_matrix().mul_vec(&phi).unwrap();
            prop_assert!(r.norm() < 1e-7 * norm);
        }
    }

    #[test]
    fn eigenvalues_zero_the_determinant(p in pencil_strategy(4, 1e3)) {
        let (sol, _) = solve_rigorous(&p).unwrap();
        for l in &sol.lambda {
            let m = p.a().sub(&p.b().scale(*l)).unwrap();
            let scale = (p.a().as_matrix().frobenius_norm() + l.abs() * p.b().as_matrix().frobenius_norm())
                .powi(p.dim() as i32);
            prop_assert!(determinant(&m).abs() < 1e-6 * scale);
        }
    }

    // ---- rayleigh ----

    #[test]
    fn quotient_is_scale_invariant(a in sym_strategy(3, 3), u in vec(-1.0..1.0f64, 3)) {
        let u = Vector::new(u).unwrap();
        prop_assume!(u.norm() > 1e-3);
        let r0 = rayleigh_quotient(&u, &a, None).unwrap();
        for c in [-2.0, 0.5, 10.0] {
            let rc = rayleigh_quotient(&u.scale(c), &a, None).unwrap();
            prop_assert!((rc - r0).abs() <= 1e-10 * r0.abs().max(1.0));
        }
    }

    #[test]
    fn form1_maximum_dominates(p in pencil_strategy(6, 1e3), seed in any::<u64>()) {
        let q = QuadraticForm::single(p.a().clone(), Some(p.b().clone()), Direction::Maximize).unwrap();
        let (phi, l) = solve_form1(&q).unwrap();
        let mut r = rng(seed);
        for _ in 0..100 {
            let u = Vector::new(random_unit(&mut r, p.dim())).unwrap();
            prop_assert!(rayleigh_quotient(&u, p.a(), Some(p.b())).unwrap() <= l + 1e-12 * l.abs().max(1.0));
        }
        let st = check_stationarity(&phi, p.a(), Some(p.b())).unwrap();
        prop_assert!((st.multiplier - l).abs() <= 1e-8 * l.abs().max(1.0));
    }

    #[test]
    fn form2_objective_is_eigenvalue_sum(a in sym_strategy(2, 8), frac in 0.0..1.0f64) {
        let p = 1 + ((a.dim() - 1) as f64 * frac) as usize;
        let q = QuadraticForm::new(a.clone(), None, Direction::Maximize, p).unwrap();
        let (phi, lambda) = solve_form2(&q).unwrap();
        let obj = trace_objective(&dense(a.as_matrix()), &phi.to_columns());
        prop_assert!((obj - lambda.iter().sum::<f64>()).abs() < 1e-8 * a.as_matrix().frobenius_norm().max(1.0));
    }

    #[test]
    fn reconstruction_and_trace_forms_share_subspace(
        x in (2usize..6, 3usize..12).prop_flat_map(|(d, n)| matrix_strategy(d, n)),
        frac in 0.0..1.0f64,
    ) {
        let d = x.rows();
        let p = 1 + ((d - 1) as f64 * frac) as usize;
        let a = SymMatrix::symmetrize(&x.matmul(&x.transpose()).unwrap()).unwrap();
        let e = eig_sym(&a, SortOrder::Descending).unwrap();
        // a gap after the p-th eigenvalue is required for the subspace to be unique
        prop_assume!(p == d || e.lambda[p - 1] - e.lambda[p] > 1e-6 * e.lambda[0].max(1.0));
        let (u34, _) = solve_form3_4(&x, p, None).unwrap();
        let (u2, _) = solve_form2(&QuadraticForm::new(a, None, Direction::Maximize, p).unwrap()).unwrap();
        prop_assert!(max_abs_diff(&projector_of(&u34), &projector_of(&u2)) < 1e-7);
    }

    #[test]
    fn minimizing_equals_maximizing_negation(a in sym_strategy(1, 8)) {
        let (_, lmin) = solve_form1(&QuadraticForm::single(a.clone(), None, Direction::Minimize).unwrap()).unwrap();
        let (_, lmax) = solve_form1(&QuadraticForm::single(a.scale(-1.0), None, Direction::Maximize).unwrap()).unwrap();
        prop_assert!((lmin + lmax).abs() < 1e-9 * lmin.abs().max(1.0));
    }

    // ---- ml ----

    #[test]
    fn pca_conserves_total_variance(x in (1usize..6, 2usize..30).prop_flat_map(|(d, n)| matrix_strategy(d, n))) {
        let m = pca_fit(&x, x.rows()).unwrap();
        let s = covariance(&x);
        let total: f64 = m.eigenvalues.iter().sum();
        prop_assert!((total - trace(&s)).abs() <= 1e-9 * trace(&s).max(1e-300) + 1e-12);
    }

    #[test]
    fn pca_top_direction_beats_random(x in (2usize..6, 5usize..30).prop_flat_map(|(d, n)| matrix_strategy(d, n)), seed in any::<u64>()) {
        let m = pca_fit(&x, 1).unwrap();
        let s = dense(covariance(&x).as_matrix());
        let best = trace_objective(&s, &m.projection.to_columns());
        let mut r = rng(seed);
        for _ in 0..200 {
            prop_assert!(trace_objective(&s, &[random_unit(&mut r, x.rows())]) <= best + 1e-10 * best.max(1.0));
        }
    }

    #[test]
    fn reconstruction_error_decreases_with_p(x in (2usize..6, 3usize..20).prop_flat_map(|(d, n)| matrix_strategy(d, n))) {
        let mean = covariance(&x);
        let _ = mean;
        let mut prev = f64::INFINITY;
        for p in 1..=x.rows() {
            let m = pca_fit(&x, p).unwrap();
            let xc = {
                let mu = m.mean.as_ref().unwrap();
                let mut c = x.clone();
                for i in 0..x.rows() { for j in 0..x.cols() { c[(i, j)] -= mu[i]; } }
                c
            };
            let err = reconstruction_objective(&xc, &m.projection).unwrap();
            prop_assert!(err <= prev + 1e-10);
            prev = err;
        }
        prop_assert!(prev < 1e-9);
    }

    #[test]
    fn equal_class_scatter_decomposition(seed in any::<u64>(), d in 1usize..5, per_class in 1usize..10, c in 2usize..4) {
        let mut r = rng(seed);
        let n = per_class * c;
        let x = random_dense(&mut r, d, n);
        let labels: Vec<usize> = (0..n).map(|k| k % c).collect();
        let ds = LabeledDataset::new(to_matrix(&x), Some(labels)).unwrap();
        let sc = scatter_matrices(&ds).unwrap();
        let total = naive_covariance(&x);
        let combined: Dense = (0..d)
            .map(|i| (0..d).map(|j| per_class as f64 * sc.s_b.get(i, j) + sc.s_w.get(i, j)).collect())
            .collect();
        prop_assert!(max_abs_diff(&combined, &total) <= 1e-9 * frob(&total).max(1.0));
        prop_assert!(is_psd(&sc.s_b, 1e-9) && is_psd(&sc.s_w, 1e-9));
    }

    #[test]
    fn fda_direction_is_scale_invariant(seed in any::<u64>(), scale in 0.1..20.0f64) {
        let mut r = rng(seed);
        let mut x = random_dense(&mut r, 3, 24);
        let labels: Vec<usize> = (0..24).map(|k| k % 2).collect();
        for k in 0..24 { x[1][k] += if labels[k] == 0 { 1.0 } else { -1.0 }; }
        let scaled: Dense = x.iter().map(|row| row.iter().map(|v| v * scale).collect()).collect();
        let m1 = fda_fit(&LabeledDataset::new(to_matrix(&x), Some(labels.clone())).unwrap(), 1, None).unwrap();
        let m2 = fda_fit(&LabeledDataset::new(to_matrix(&scaled), Some(labels)).unwrap(), 1, None).unwrap();
        prop_assert!(max_abs_diff(&projector_of(&m1.projection), &projector_of(&m2.projection)) < 1e-6);
        prop_assert!(rel_close(m1.eigenvalues[0], m2.eigenvalues[0], 1e-8));
    }

    #[test]
    fn kspca_satisfies_constraint_and_stationarity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = 20;
        // well-separated points keep K_x comfortably full rank
        let x: Dense = (0..2).map(|i| (0..n).map(|k| {
            let grid = if i == 0 { (k % 5) as f64 } else { (k / 5) as f64 };
            1.5 * grid + r.random_range(-0.2..0.2)
        }).collect()).collect();
        let labels: Vec<usize> = (0..n).map(|k| usize::from(k % 5 >= 2)).collect();
        let ds = LabeledDataset::new(to_matrix(&x), Some(labels.clone())).unwrap();
        let spec = KernelSpec::Rbf { gamma: None };
        let m = kspca_fit(&ds, 2, &spec, &KernelSpec::Delta).unwrap();
        prop_assert_eq!(m.diagnostics.epsilon_used, 0.0);
        let kx = kernel_matrix(ds.x(), ds.x(), &spec).unwrap();
        let g = m.projection.transpose().matmul(&kx).unwrap().matmul(&m.projection).unwrap();
        prop_assert!(g.max_abs_diff(&Matrix::identity(2)) < 1e-6);
    }

    #[test]
    fn kernel_matrices_are_psd(x in (1usize..4, 2usize..10).prop_flat_map(|(d, n)| matrix_strategy(d, n)), which in 0usize..4) {
        let spec = [
            KernelSpec::Linear,
            KernelSpec::Rbf { gamma: None },
            KernelSpec::Polynomial { degree: 2, coef0: 1.0 },
            KernelSpec::Delta,
        ][which];
        let k = kernel_matrix(&x, &x, &spec).unwrap();
        let k = SymMatrix::new(k).unwrap();
        let e = eig_sym(&k, SortOrder::Ascending).unwrap();
        prop_assert!(e.lambda[0] >= -1e-8 * k.as_matrix().max_abs().max(1.0));
    }
}
