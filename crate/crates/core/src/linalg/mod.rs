//! Dense complex linear algebra: norms, extreme eigenvalues and singular values,
//! eigenvalues, shifted solves and polynomial evaluation.
//!
//! Dense factorizations are used up to moderate orders; beyond [`DENSE_SVD_MAX`]
//! singular values come from Lanczos on `A*A` or on `(A*A)⁻¹` via an LU factorization.

mod eigen;
mod householder;
mod lanczos;
mod lu;
mod matrix;
pub mod tridiag;

pub use eigen::hessenberg_eigenvalues;
pub use householder::{bidiagonalize, hessenberg, qr_unitary, tridiagonalize, Bidiagonal, Tridiagonal};
pub use lanczos::{default_start, extreme_eigenpairs, largest_eigenpair, LanczosConfig, RitzPair};
pub use lu::{HessenbergLu, Lu};
pub use matrix::CMatrix;

use crate::error::{LabError, Result};
use crate::scalar::{czero, Cx, Real};

/// Largest order handled by the dense bidiagonal SVD path.
pub const DENSE_SVD_MAX: usize = 500;

/// Largest order for which [`operator_norm`] uses the dense path.
pub const DENSE_NORM_MAX: usize = 200;

/// Default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// `(A + A*)/2`.
pub fn hermitian_part<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.require_square("hermitian_part")?;
    let half = T::lit(0.5);
    Ok(CMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * half))
}

fn check_tol<T: Real>(tol: T) -> Result<()> {
    if tol > T::zero() && tol.is_finite() {
        Ok(())
    } else {
        Err(LabError::Parameter(format!("tolerance must be positive, got {tol}")))
    }
}

/// Spectral norm (largest singular value) of `a`.
pub fn operator_norm<T: Real>(a: &CMatrix<T>, tol: T) -> Result<T> {
    check_tol(tol)?;
    if a.is_square() && a.rows() <= DENSE_NORM_MAX {
        let b = bidiagonalize(a)?;
        return Ok(tridiag::bidiagonal_extreme_singular_values(&b.diag, &b.sup).1);
    }
    let mut tmp = vec![czero(); a.rows()];
    let (norm, _) = operator_norm_implicit(
        a.cols(),
        |x, y| {
            a.mul_vec_into(x, &mut tmp);
            a.adjoint_mul_vec_into(&tmp, y);
        },
        None,
        tol,
    )?;
    Ok(norm)
}

/// Largest singular value of an operator given through `x ↦ B*Bx`, with the
/// corresponding right singular vector.
pub fn operator_norm_implicit<T: Real>(
    n: usize,
    gram: impl FnMut(&[Cx<T>], &mut [Cx<T>]),
    start: Option<&[Cx<T>]>,
    tol: T,
) -> Result<(T, Vec<Cx<T>>)> {
    check_tol(tol)?;
    let cfg = LanczosConfig { tol, ..LanczosConfig::default() };
    let pair = largest_eigenpair(n, gram, start, &cfg)?;
    Ok((pair.value.max(T::zero()).sqrt(), pair.vector))
}

/// Smallest singular value from solves with `M` and `M*`, by Lanczos on `(M*M)⁻¹`.
pub fn sigma_min_from_solves<T: Real>(
    n: usize,
    solve: impl Fn(&mut [Cx<T>]),
    solve_adjoint: impl Fn(&mut [Cx<T>]),
    tol: T,
) -> Result<T> {
    let cfg = LanczosConfig { tol, ..LanczosConfig::default() };
    let pair = largest_eigenpair(
        n,
        |x, y| {
            y.copy_from_slice(x);
            solve_adjoint(y);
            solve(y);
        },
        None,
        &cfg,
    )?;
    if !pair.value.is_finite() {
        return Ok(T::zero());
    }
    Ok(T::one() / pair.value.sqrt())
}

/// Smallest singular value through the dense bidiagonal SVD.
pub fn sigma_min_dense<T: Real>(a: &CMatrix<T>) -> Result<T> {
    a.require_square("sigma_min")?;
    let b = bidiagonalize(a)?;
    Ok(tridiag::bidiagonal_extreme_singular_values(&b.diag, &b.sup).0)
}

/// Smallest singular value through LU and inverse Lanczos.
pub fn sigma_min_iterative<T: Real>(a: &CMatrix<T>, tol: T) -> Result<T> {
    check_tol(tol)?;
    let lu = Lu::factor(a)?;
    if lu.is_singular() {
        return Ok(T::zero());
    }
    sigma_min_from_solves(a.rows(), |x| lu.solve_in_place(x), |x| lu.solve_adjoint_in_place(x), tol)
}

/// Smallest singular value of a square matrix.
pub fn sigma_min<T: Real>(a: &CMatrix<T>, tol: T) -> Result<T> {
    check_tol(tol)?;
    let n = a.require_square("sigma_min")?;
    if n <= DENSE_SVD_MAX {
        sigma_min_dense(a)
    } else {
        sigma_min_iterative(a, tol)
    }
}

/// `(λ_min, λ_max)` of a Hermitian matrix (symmetrized before use).
pub fn eig_extreme_hermitian<T: Real>(h: &CMatrix<T>) -> Result<(T, T)> {
    h.require_square("eig_extreme_hermitian")?;
    let t = tridiagonalize(h)?;
    Ok(tridiag::extreme_eigenvalues(&t.diag, &t.off))
}

/// All eigenvalues of a square matrix, in no particular order.
pub fn eigenvalues<T: Real>(a: &CMatrix<T>) -> Result<Vec<Cx<T>>> {
    a.require_square("eigenvalues")?;
    let (h, _) = hessenberg(a, false)?;
    hessenberg_eigenvalues(h)
}

/// Solves `(zI − A) X = B`.
pub fn shifted_solve<T: Real>(a: &CMatrix<T>, z: Cx<T>, b: &CMatrix<T>) -> Result<CMatrix<T>> {
    let m = a.shifted(z)?;
    let lu = Lu::factor(&m)?;
    let smin = lu.sigma_min_estimate();
    let threshold = T::lit(1e-14) * m.norm_2_upper();
    if !(smin > threshold) {
        return Err(LabError::Singular { op: "shifted_solve", sigma_min: smin.as_f64() });
    }
    lu.solve_matrix(b)
}

/// `scale · Π_j (A − root_j I)`, multiplied in the given root order.
pub fn matpoly_eval<T: Real>(a: &CMatrix<T>, roots: &[Cx<T>], scale: Cx<T>) -> Result<CMatrix<T>> {
    let n = a.require_square("matpoly_eval")?;
    let mut out = CMatrix::identity(n).scale(scale);
    for &r in roots {
        let factor = a.add_identity(-r)?;
        out = out.matmul(&factor)?;
    }
    Ok(out)
}
