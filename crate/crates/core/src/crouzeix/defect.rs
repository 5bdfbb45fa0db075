//! Cauchy-transform defects of a disk. On `σ(s) = c + r e^{is/r}`, `s ∈ [0, 2πr)`,
//! let `μ(s) = X + X*` with `X = σ'(s)/(2πi) R(σ(s), A) = e^{is/r}/(2π) R(σ(s), A)`.
//! Then `δ = −∫ λ_min(μ(s)) ds` and `γ = −∫ λ_min(μ(s)) f(σ(s)) ds`. The sign of `δ`
//! is negative when the disk strictly contains `cl W(A)`, zero when it equals
//! `W(A)` and positive when it sits inside `int W(A)`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::{Cx, Real};

/// Smallest quadrature size accepted.
pub const MIN_QUADRATURE: usize = 16;

/// Default number of trapezoid nodes.
pub const DEFAULT_QUADRATURE: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub disk_center: Cx<f64>,
    pub disk_radius: f64,
    pub delta: f64,
    pub gamma: Option<Cx<f64>>,
    pub n_quadrature: usize,
}

impl DefectReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("defect report serializes")
    }
}

/// `δ` and (when `f` is given) `γ` for the disk `D(center, radius)` by the
/// composite trapezoid rule on `n_quad` uniform arc-length nodes.
pub fn cauchy_defect<T: Real>(
    a: &CMatrix<T>,
    center: Cx<T>,
    radius: T,
    n_quad: usize,
    f_on_boundary: Option<&dyn Fn(Cx<T>) -> Cx<T>>,
) -> Result<DefectReport> {
    let n = a.require_square("cauchy_defect")?;
    if n_quad < MIN_QUADRATURE {
        return Err(LabError::Parameter(format!("need at least {MIN_QUADRATURE} quadrature nodes, got {n_quad}")));
    }
    if !(radius > T::zero()) || !radius.is_finite() {
        return Err(LabError::Parameter(format!("disk radius must be positive, got {radius}")));
    }
    for ev in linalg::eigenvalues(a)? {
        if !((ev - center).norm() < radius) {
            return Err(LabError::Domain(format!("eigenvalue {ev} is not inside the disk")));
        }
    }
    let id = CMatrix::identity(n);
    let weight = T::TAU() * radius / T::lit(n_quad as f64);
    let inv_2pi = T::one() / T::TAU();
    let mut delta = T::zero();
    let mut gamma = f_on_boundary.map(|_| Cx::new(T::zero(), T::zero()));
    for j in 0..n_quad {
        let phase = T::TAU() * T::lit(j as f64 / n_quad as f64);
        let e = Cx::from_polar(T::one(), phase);
        let sigma = center + e * radius;
        let resolvent = linalg::shifted_solve(a, sigma, &id).map_err(|err| match err {
            LabError::Singular { sigma_min, .. } => LabError::Singular { op: "cauchy_defect", sigma_min },
            other => other,
        })?;
        let x = resolvent.scale(e * inv_2pi);
        let mu = x.add(&x.adjoint())?;
        let (lmin, _) = linalg::eig_extreme_hermitian(&mu)?;
        delta = delta - lmin * weight;
        if let (Some(g), Some(f)) = (gamma.as_mut(), f_on_boundary) {
            *g = *g - f(sigma) * (lmin * weight);
        }
    }
    Ok(DefectReport {
        disk_center: Cx::new(center.re.as_f64(), center.im.as_f64()),
        disk_radius: radius.as_f64(),
        delta: delta.as_f64(),
        gamma: gamma.map(|g| Cx::new(g.re.as_f64(), g.im.as_f64())),
        n_quadrature: n_quad,
    })
}

/// `2(r − r̃)Δ²`, the bound on the defect difference between concentric circles
/// of radii `r ≥ r̃` when the resolvent norm between them is at most `Δ`.
pub fn defect_bound<T: Real>(r: T, r_tilde: T, delta_max: T) -> Result<T> {
    if !(r_tilde > T::zero()) || !(r >= r_tilde) || !(delta_max > T::zero()) {
        return Err(LabError::Parameter(format!(
            "defect_bound needs r >= r_tilde > 0 and Delta > 0, got ({r}, {r_tilde}, {delta_max})"
        )));
    }
    Ok(T::lit(2.0) * (r - r_tilde) * delta_max * delta_max)
}

/// `‖f(A) + conj(f(c))·I + γI‖`, the left side of the defect inequality
/// `‖f(A) + g(A)* + γI‖ ≤ 2 + δ` for a disk, where `g(A)* = conj(f(c))·I`.
pub fn defect_inequality_lhs<T: Real>(f_of_a: &CMatrix<T>, f_at_center: Cx<T>, gamma: Cx<T>) -> Result<T> {
    let m = f_of_a.add_identity(f_at_center.conj() + gamma)?;
    linalg::operator_norm(&m, T::lit(linalg::DEFAULT_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crouzeix::blaschke::BlaschkeProduct;
    use crate::spectral_sets::edge_e;

    fn c(re: f64, im: f64) -> Cx<f64> {
        Cx::new(re, im)
    }

    fn jordan() -> CMatrix<f64> {
        CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn sign_trichotomy_on_jordan_block() {
        let j = jordan();
        let outer = cauchy_defect(&j, c(0.0, 0.0), 1.0, 512, None).unwrap();
        let exact = cauchy_defect(&j, c(0.0, 0.0), 0.5, 512, None).unwrap();
        let inner = cauchy_defect(&j, c(0.0, 0.0), 0.3, 512, None).unwrap();
        assert!(outer.delta < 0.0);
        assert!(exact.delta.abs() <= 0.02);
        assert!(inner.delta > 0.0);
        // closed form: λ_min = (2/r − 1/r²)/(2π) on every node
        for (rep, r) in [(&outer, 1.0f64), (&inner, 0.3)] {
            let expect = -r * (2.0 / r - 1.0 / (r * r));
            assert!((rep.delta - expect).abs() < 1e-12, "{} {expect}", rep.delta);
        }
        assert!(exact.gamma.is_none());
    }

    #[test]
    fn scalar_zero_matrix() {
        let z = CMatrix::<f64>::zeros(1, 1);
        let rep = cauchy_defect(&z, c(0.0, 0.0), 1.0, 64, None).unwrap();
        assert!((rep.delta + 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let j = jordan();
        assert!(cauchy_defect(&j, c(0.0, 0.0), 0.5, 8, None).is_err());
        let d = CMatrix::from_diag(&[c(2.0, 0.0)]);
        assert!(matches!(cauchy_defect(&d, c(0.0, 0.0), 1.0, 32, None), Err(LabError::Domain(_))));
    }

    #[test]
    fn defect_inequality_for_disk_map() {
        let j = jordan();
        let r = 0.5;
        let f = |z: Cx<f64>| z / r;
        let rep = cauchy_defect(&j, c(0.0, 0.0), r, 512, Some(&f)).unwrap();
        let b0 = BlaschkeProduct::degree_one(c(0.0, 0.0)).unwrap();
        let f_of_a = b0.eval_matrix(&j.scale_real(1.0 / r)).unwrap();
        let lhs = defect_inequality_lhs(&f_of_a, f(c(0.0, 0.0)), rep.gamma.unwrap()).unwrap();
        assert!(lhs <= 2.0 + rep.delta + 1e-6, "{lhs} vs {}", 2.0 + rep.delta);
    }

    #[test]
    fn trapezoid_converges() {
        let a = CMatrix::from_rows(&[vec![c(0.1, 0.2), c(0.4, 0.0)], vec![c(0.0, 0.1), c(-0.3, 0.0)]]).unwrap();
        let d = |n| cauchy_defect(&a, c(0.05, 0.0), 0.9, n, None).unwrap().delta;
        // the integrand is smooth and periodic, so differences shrink geometrically
        let diffs: Vec<f64> = [16, 32, 64].iter().map(|&n| (d(n) - d(2 * n)).abs()).collect();
        assert!(diffs[1] < 1e-3 * diffs[0]);
        let (d1, d2, d4) = (d(64), d(128), d(256));
        assert!((d1 - d2).abs() <= 4.0 * (d2 - d4).abs() + 1e-10);
    }

    #[test]
    fn defect_bound_examples() {
        assert_eq!(defect_bound(1.0f64, 1.0, 3.0).unwrap(), 0.0);
        let delta = edge_e(1.1f64).unwrap().powf(-0.5);
        let b = defect_bound(2f64.sqrt() + 0.1, 2f64.sqrt() - 0.1, delta).unwrap();
        assert!((b - 0.4 / edge_e(1.1f64).unwrap()).abs() < 1e-12 * b);
        assert!(defect_bound(0.4f64, 0.5, 1.0).is_err());
    }

    #[test]
    fn defect_bound_dominates_measured_difference() {
        let j = jordan();
        let (r, rt) = (0.5, 0.45);
        let d_r = cauchy_defect(&j, c(0.0, 0.0), r, 512, None).unwrap().delta;
        let d_rt = cauchy_defect(&j, c(0.0, 0.0), rt, 512, None).unwrap().delta;
        let mut big: f64 = 0.0;
        for rad in [r, rt] {
            for k in 0..64 {
                let z = Cx::from_polar(rad, std::f64::consts::TAU * k as f64 / 64.0);
                big = big.max(crate::spectral_sets::resolvent_norm(&j, z).unwrap().value);
            }
        }
        assert!((d_r - d_rt).abs() <= defect_bound(r, rt, big).unwrap());
    }
}
