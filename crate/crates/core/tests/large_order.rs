//! Finite-N checks of the large-N limits. Each samples N = 1000 (or 500)
//! matrices and compares against the limit with a tolerance band.

use gmreslab_core::crouzeix::{self, BlaschkeProduct};
use gmreslab_core::ensembles::{sample_ginibre, Seed};
use gmreslab_core::linalg::{self, DEFAULT_TOL};
use gmreslab_core::spectral_sets::{annulus_probe, edge_e, lipschitz_constants, linspace, ResolventProbe};
use gmreslab_core::{CMatrix, Cx};

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn ginibre(n: usize, seed: u64) -> CMatrix<f64> {
    sample_ginibre(n, Seed(seed)).unwrap()
}

#[test]
fn norm_hermitian_part_and_spectral_radius() {
    let g = ginibre(1000, 11);
    let norm = linalg::operator_norm(&g, DEFAULT_TOL).unwrap();
    assert!((1.85..=2.1).contains(&norm) && (norm - 2.0).abs() <= 0.1, "{norm}");
    let (_, top) = linalg::eig_extreme_hermitian(&linalg::hermitian_part(&g).unwrap()).unwrap();
    assert!((top - SQRT2).abs() <= 0.1, "{top}");
    let rho = linalg::eigenvalues(&g).unwrap().iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!((rho - 1.0).abs() <= 0.1, "{rho}");
}

#[test]
fn smallest_eigenvalue_of_shifted_gram_concentrates_at_edge() {
    let e = edge_e(1.3f64).unwrap();
    let mut sum = 0.0;
    for s in 0..20u64 {
        let g = ginibre(1000, 200 + s);
        let z = Cx::from_polar(1.3, 0.37 * s as f64);
        let smin = linalg::sigma_min(&g.shifted(z).unwrap(), DEFAULT_TOL).unwrap();
        let lam = smin * smin;
        // nothing below the support edge
        assert!(lam >= 0.8 * e, "seed {s}: {lam} vs {e}");
        sum += lam;
    }
    // single seeds sit up to 30% inside the support at this N (the soft-edge
    // shift decays like N^(-2/3)), so the band applies to the sample mean
    let mean = sum / 20.0;
    assert!(mean >= 0.8 * e && mean <= 1.2 * e, "mean {mean} vs {e}");
}

#[test]
fn resolvent_norm_is_nearly_rotation_invariant() {
    let g = ginibre(1000, 12);
    let probe = annulus_probe(&g, 1.2, 1.5, 4, 32).unwrap();
    for r in linspace(1.2, 1.5, 4) {
        let v = probe.norms_at_radius(r);
        assert_eq!(v.len(), 32);
        let mean = v.iter().sum::<f64>() / 32.0;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 32.0;
        assert!(var <= (0.1 * mean).powi(2), "radius {r}: variance {var}, mean {mean}");
    }
}

#[test]
fn resolvent_norm_is_lipschitz_on_the_annulus() {
    let g = ginibre(300, 13);
    let probe = ResolventProbe::new(&g, DEFAULT_TOL).unwrap();
    let norm = |z: Cx<f64>| probe.norm(z).unwrap().value;
    // observed bounds on the annulus 1.2 ≤ |z| ≤ 2, where the resolvent norm
    // peaks on the inner circle
    let e = (0..64).map(|j| norm(Cx::from_polar(1.2, std::f64::consts::TAU * j as f64 / 64.0))).fold(0.0, f64::max);
    let f = linalg::operator_norm(&g, DEFAULT_TOL).unwrap();
    let (h, lip) = lipschitz_constants(e, f, 2.0).unwrap();
    let mut state = 0x2545_F491_4F6C_DD1Du64;
    let mut unif = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..100 {
        let z = Cx::from_polar(1.2 + 0.8 * unif(), std::f64::consts::TAU * unif());
        let zt = z + Cx::from_polar(h * unif(), std::f64::consts::TAU * unif());
        if !(1.2..=2.0).contains(&zt.norm()) {
            continue;
        }
        let gap = (norm(z) - norm(zt)).abs();
        assert!(gap < lip * (z - zt).norm() || gap == 0.0, "{gap} vs {}", lip * (z - zt).norm());
    }
}

#[test]
fn disk_automorphism_at_zero_has_norm_sqrt2() {
    let g = ginibre(1000, 14);
    let b0 = BlaschkeProduct::degree_one(Cx::new(0.0, 0.0)).unwrap();
    let fa = b0.eval_matrix(&g.scale_real(1.0 / SQRT2)).unwrap();
    let v = linalg::operator_norm(&fa, DEFAULT_TOL).unwrap();
    assert!((v - SQRT2).abs() <= 0.1, "{v}");
    // the ratio has denominator 1, so it is the same norm computed by the
    // evaluator route instead of the dense route
    let ratio = crouzeix::crouzeix_ratio(&g, &b0, SQRT2).unwrap();
    assert!((ratio - v).abs() <= 1e-6 * v, "{ratio} vs {v}");
    assert!((ratio - SQRT2).abs() <= 0.07, "{ratio}");
}

#[test]
fn alpha_sweep_stays_near_sqrt2() {
    let g = ginibre(1000, 15);
    let alphas = linspace(-0.9, 0.9, 33);
    let sweep = crouzeix::alpha_sweep(&g, &alphas, SQRT2).unwrap();
    assert!(sweep.iter().all(|p| p.1 <= SQRT2 + 0.1), "{sweep:?}");
    assert!((sweep[16].1 - SQRT2).abs() <= 0.1, "{}", sweep[16].1);
}

#[test]
fn alpha_sweep_is_nearly_symmetric() {
    let alphas = [-0.9, -0.6, -0.3, 0.3, 0.6, 0.9];
    for s in 0..10u64 {
        let g = ginibre(1000, 300 + s);
        let sweep = crouzeix::alpha_sweep(&g, &alphas, SQRT2).unwrap();
        for i in 0..3 {
            let (a, b) = (sweep[i].1, sweep[5 - i].1);
            assert!((a - b).abs() <= 0.1 * a.max(b), "seed {s}, alpha {}: {a} vs {b}", alphas[5 - i]);
        }
    }
}

#[test]
fn degree_three_search_is_near_degree_one() {
    let g = ginibre(500, 16);
    let est = crouzeix::spectral_set_constant_estimate(&g, Cx::new(0.0, 0.0), SQRT2, 3, 2, Seed(16)).unwrap();
    assert!(est.best_norm <= 2.1, "{}", est.best_norm);
    let mut moduli: Vec<f64> = est.best_roots.iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    // apart from one root, the factors are nearly unimodular constants
    assert!(moduli[1..].iter().all(|&m| m > 0.95), "{moduli:?}");
}
