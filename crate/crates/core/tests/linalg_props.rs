use gmreslab_core::ensembles::{sample_ginibre, sample_haar_unitary, Seed};
use gmreslab_core::linalg::{self, Lu, DEFAULT_TOL};
use gmreslab_core::{CMatrix, Cx};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Cx<f64> {
    Cx::new(re, im)
}

fn ginibre(n: usize, seed: u64) -> CMatrix<f64> {
    sample_ginibre(n, Seed(seed)).unwrap()
}

/// Roots of the monic cubic `x³ + a x² + b x + c` with three real roots
/// (trigonometric form).
fn real_cubic_roots(a: f64, b: f64, c: f64) -> [f64; 3] {
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    if p.abs() < 1e-300 {
        let t = (-q).cbrt();
        return [t + shift; 3];
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let phi = arg.acos() / 3.0;
    let tau = std::f64::consts::TAU;
    let mut r = [0.0, 1.0, 2.0].map(|k| m * (phi - tau * k / 3.0).cos() + shift);
    r.sort_by(f64::total_cmp);
    r
}

fn hermitian(entries: &[(f64, f64)], n: usize) -> CMatrix<f64> {
    // fill the upper triangle row by row, mirror it, keep the diagonal real
    let mut m = CMatrix::zeros(n, n);
    let mut it = entries.iter();
    for i in 0..n {
        for j in i..n {
            let &(re, im) = it.next().unwrap();
            if i == j {
                m[(i, i)] = c(re, 0.0);
            } else {
                m[(i, j)] = c(re, im);
                m[(j, i)] = c(re, -im);
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norm_of_adjoint_is_the_same(n in 1usize..=200, seed in any::<u64>()) {
        let a = ginibre(n, seed);
        let x = linalg::operator_norm(&a, DEFAULT_TOL).unwrap();
        let y = linalg::operator_norm(&a.adjoint(), DEFAULT_TOL).unwrap();
        prop_assert!((x - y).abs() <= 1e-9 * x, "{} {}", x, y);
    }

    #[test]
    fn sigma_min_times_inverse_norm_is_one(n in 2usize..=60, seed in any::<u64>()) {
        // I + G/2 is comfortably invertible
        let a = ginibre(n, seed).scale_real(0.5).add_identity(c(1.0, 0.0)).unwrap();
        let smin = linalg::sigma_min(&a, DEFAULT_TOL).unwrap();
        // (0·I − A)⁻¹ = −A⁻¹, same norm
        let inv = linalg::shifted_solve(&a, c(0.0, 0.0), &CMatrix::identity(n)).unwrap();
        let prod = smin * linalg::operator_norm(&inv, DEFAULT_TOL).unwrap();
        prop_assert!((prod - 1.0).abs() <= 1e-8, "{}", prod);
    }

    #[test]
    fn dense_and_iterative_sigma_min_agree(n in 9usize..=80, seed in any::<u64>()) {
        let a = ginibre(n, seed).add_identity(c(0.3, -0.2)).unwrap();
        let dense = linalg::sigma_min_dense(&a).unwrap();
        let iter = linalg::sigma_min_iterative(&a, 1e-12).unwrap();
        prop_assert!((dense - iter).abs() <= 1e-8 * dense, "{} {}", dense, iter);
    }

    #[test]
    fn hermitian_2x2_extremes_match_quadratic(v in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 3)) {
        let h = hermitian(&v, 2);
        let (a, d, b) = (h[(0, 0)].re, h[(1, 1)].re, h[(0, 1)].norm());
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        let (lo, hi) = linalg::eig_extreme_hermitian(&h).unwrap();
        prop_assert!((lo - (mid - rad)).abs() <= 1e-10 && (hi - (mid + rad)).abs() <= 1e-10);
    }

    #[test]
    fn hermitian_3x3_extremes_match_cubic(v in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 6)) {
        let h = hermitian(&v, 3);
        // characteristic polynomial x³ − tr x² + c₂ x − det
        let tr = h.trace().re;
        let m = |i: usize, j: usize| h[(i, j)];
        let c2 = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2)
            - m(1, 2) * m(2, 1))
        .re;
        let det = (m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)))
        .re;
        let roots = real_cubic_roots(-tr, c2, -det);
        let (lo, hi) = linalg::eig_extreme_hermitian(&h).unwrap();
        prop_assert!((lo - roots[0]).abs() <= 1e-10 * (1.0 + roots[0].abs()), "{} {:?}", lo, roots);
        prop_assert!((hi - roots[2]).abs() <= 1e-10 * (1.0 + roots[2].abs()), "{} {:?}", hi, roots);
    }

    #[test]
    fn eigenvalues_sum_to_trace(n in 1usize..=60, seed in any::<u64>()) {
        let a = ginibre(n, seed);
        let ev = linalg::eigenvalues(&a).unwrap();
        prop_assert_eq!(ev.len(), n);
        let sum: Cx<f64> = ev.iter().sum();
        let scale = linalg::operator_norm(&a, DEFAULT_TOL).unwrap();
        prop_assert!((sum - a.trace()).norm() <= 1e-8 * n as f64 * scale);
    }

    #[test]
    fn eigenvalues_multiply_to_determinant(n in 1usize..=8, seed in any::<u64>()) {
        let a = ginibre(n, seed);
        let prod: Cx<f64> = linalg::eigenvalues(&a).unwrap().iter().product();
        let det = Lu::factor(&a).unwrap().determinant();
        prop_assert!((prod - det).norm() <= 1e-10 * (1.0 + det.norm()), "{} {}", prod, det);
    }

    #[test]
    fn matpoly_commutes_with_unitary_similarity(
        n in 1usize..=50,
        seed in any::<u64>(),
        roots in prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 0..5),
    ) {
        let a = ginibre(n, seed);
        let q: CMatrix<f64> = sample_haar_unitary(n, Seed(seed).derive(1)).unwrap();
        let roots: Vec<Cx<f64>> = roots.into_iter().map(|(x, y)| c(x, y)).collect();
        let scale = c(0.7, 0.2);
        let p = linalg::matpoly_eval(&a, &roots, scale).unwrap();
        let qaq = q.matmul(&a).unwrap().matmul(&q.adjoint()).unwrap();
        let lhs = q.matmul(&p).unwrap().matmul(&q.adjoint()).unwrap();
        let rhs = linalg::matpoly_eval(&qaq, &roots, scale).unwrap();
        let pn = linalg::operator_norm(&p, DEFAULT_TOL).unwrap();
        let err = linalg::operator_norm(&lhs.sub(&rhs).unwrap(), DEFAULT_TOL).unwrap();
        prop_assert!(err <= 1e-10 * pn, "{} vs {}", err, pn);
    }
}

#[test]
fn cubic_oracle_sanity() {
    // (x − 1)(x − 2)(x − 3)
    let r = real_cubic_roots(-6.0, 11.0, -6.0);
    for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
        assert!((got - want).abs() < 1e-12);
    }
}
