//! Hermitian Lanczos with full reorthogonalization and explicit restarts.
//!
//! Works on any Hermitian operator given as a closure `y = Op(x)`; used for
//! largest singular values (`Op = B*B`), smallest singular values (`Op = (M*M)⁻¹`)
//! and extreme eigenvalues of Hermitian parts.

use crate::error::{LabError, Result};
use crate::linalg::tridiag;
use crate::scalar::{axpy, czero, dot_c, normalize, vec_norm, Cx, Real};

#[derive(Clone, Debug)]
pub struct LanczosConfig<T> {
    /// Relative residual target `‖Op x − θx‖ ≤ tol·|θ|`.
    pub tol: T,
    pub max_basis: usize,
    pub max_restarts: usize,
}

impl<T: Real> Default for LanczosConfig<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-10), max_basis: 120, max_restarts: 20 }
    }
}

/// Weight of the generic start vector mixed into a warm start.
pub const WARM_START_MIX: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct RitzPair<T: Real> {
    pub value: T,
    pub vector: Vec<Cx<T>>,
    pub residual: T,
    pub steps: usize,
}

/// Deterministic, well-spread start vector.
pub fn default_start<T: Real>(n: usize) -> Vec<Cx<T>> {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut v: Vec<Cx<T>> = (0..n).map(|_| Cx::new(T::lit(next()), T::lit(next()))).collect();
    normalize(&mut v);
    v
}

/// Largest eigenpair of the Hermitian operator `apply` of order `n`.
pub fn largest_eigenpair<T, F>(n: usize, apply: F, start: Option<&[Cx<T>]>, cfg: &LanczosConfig<T>) -> Result<RitzPair<T>>
where
    T: Real,
    F: FnMut(&[Cx<T>], &mut [Cx<T>]),
{
    lanczos(n, apply, start, cfg, false).map(|(_, hi)| hi)
}

/// Smallest and largest eigenpairs from one Krylov space; iterates until both
/// have converged.
pub fn extreme_eigenpairs<T, F>(
    n: usize,
    apply: F,
    start: Option<&[Cx<T>]>,
    cfg: &LanczosConfig<T>,
) -> Result<(RitzPair<T>, RitzPair<T>)>
where
    T: Real,
    F: FnMut(&[Cx<T>], &mut [Cx<T>]),
{
    lanczos(n, apply, start, cfg, true).map(|(lo, hi)| (lo.expect("both ends requested"), hi))
}

fn ritz_vector<T: Real>(basis: &[Vec<Cx<T>>], y: &[T], n: usize) -> Vec<Cx<T>> {
    let mut v = vec![czero(); n];
    for (b, &yi) in basis.iter().zip(y) {
        axpy(Cx::new(yi, T::zero()), b, &mut v);
    }
    normalize(&mut v);
    v
}

fn lanczos<T, F>(
    n: usize,
    mut apply: F,
    start: Option<&[Cx<T>]>,
    cfg: &LanczosConfig<T>,
    both: bool,
) -> Result<(Option<RitzPair<T>>, RitzPair<T>)>
where
    T: Real,
    F: FnMut(&[Cx<T>], &mut [Cx<T>]),
{
    if n == 0 {
        return Err(LabError::Parameter("Lanczos on an empty operator".into()));
    }
    let tol = T::attainable(cfg.tol);
    let mut x0 = default_start(n);
    if let Some(s) = start.filter(|s| s.len() == n && vec_norm(s) > T::zero()) {
        // a warm start that is an exact eigenvector of the wrong end would span an
        // invariant subspace, so keep a small generic component in it
        let scale = T::lit(WARM_START_MIX) * vec_norm(s);
        for (x, &si) in x0.iter_mut().zip(s) {
            *x = si + *x * scale;
        }
    }
    normalize(&mut x0);
    let max_basis = cfg.max_basis.clamp(1, n);
    let mut total_steps = 0;
    let mut last_residual = T::infinity();

    for _ in 0..=cfg.max_restarts {
        let mut basis: Vec<Vec<Cx<T>>> = vec![x0.clone()];
        let mut alphas: Vec<T> = Vec::new();
        let mut betas: Vec<T> = Vec::new();
        let mut w = vec![czero(); n];
        for j in 0..max_basis {
            apply(&basis[j], &mut w);
            total_steps += 1;
            let alpha = dot_c(&basis[j], &w).re;
            axpy(Cx::new(-alpha, T::zero()), &basis[j], &mut w);
            if j > 0 {
                axpy(Cx::new(-betas[j - 1], T::zero()), &basis[j - 1], &mut w);
            }
            for _ in 0..2 {
                for v in &basis {
                    let c = dot_c(v, &w);
                    axpy(-c, v, &mut w);
                }
            }
            let beta = vec_norm(&w);
            alphas.push(alpha);
            let (lo, theta) = tridiag::extreme_eigenvalues(&alphas, &betas);
            let y = tridiag::eigenvector(&alphas, &betas, theta);
            let y_lo = if both { Some(tridiag::eigenvector(&alphas, &betas, lo)) } else { None };
            let residual = beta * y[j].abs();
            let residual_lo = y_lo.as_ref().map_or(T::zero(), |y| beta * y[j].abs());
            last_residual = residual.max(residual_lo);
            let scale = theta.abs().max(lo.abs()).max(T::min_positive_value());
            let exhausted = j + 1 == n;
            if last_residual <= tol * scale || beta <= T::epsilon() * scale || exhausted {
                let hi = RitzPair { value: theta, vector: ritz_vector(&basis, &y, n), residual, steps: total_steps };
                let lo = y_lo.map(|y| RitzPair { value: lo, vector: ritz_vector(&basis, &y, n), residual: residual_lo, steps: total_steps });
                return Ok((lo, hi));
            }
            if j + 1 == max_basis {
                let mut restart = ritz_vector(&basis, &y, n);
                if let Some(y) = &y_lo {
                    axpy(Cx::new(T::one(), T::zero()), &ritz_vector(&basis, y, n), &mut restart);
                    normalize(&mut restart);
                }
                x0 = restart;
                break;
            }
            let inv = T::one() / beta;
            betas.push(beta);
            basis.push(w.iter().map(|z| *z * inv).collect());
        }
    }
    Err(LabError::NoConvergence {
        op: "lanczos",
        detail: format!("residual {:e} after {total_steps} operator applications", last_residual.as_f64()),
    })
}
