//! Householder reductions: Hessenberg form, Hermitian tridiagonal form,
//! bidiagonal form and unitary QR factors.

use crate::error::Result;
use crate::linalg::CMatrix;
use crate::scalar::{czero, vec_norm, Cx, Real};

/// Unit vector `v` with `(I − 2vv*) x = alpha·e₁`. Returns `None` when `x` is already a multiple of `e₁`.
fn reflector<T: Real>(x: &[Cx<T>]) -> Option<(Vec<Cx<T>>, Cx<T>)> {
    let tail = vec_norm(&x[1..]);
    if tail == T::zero() {
        return None;
    }
    let xnorm = vec_norm(x);
    let phase = if x[0].norm() == T::zero() {
        Cx::new(T::one(), T::zero())
    } else {
        x[0] / x[0].norm()
    };
    let alpha = -phase * xnorm;
    let mut v = x.to_vec();
    v[0] = v[0] - alpha;
    let vn = vec_norm(&v);
    let inv = T::one() / vn;
    v.iter_mut().for_each(|z| *z = *z * inv);
    Some((v, alpha))
}

/// Applies `I − 2vv*` from the left to rows `r0..r0+len(v)`, columns `c0..`.
fn apply_left<T: Real>(a: &mut CMatrix<T>, v: &[Cx<T>], r0: usize, c0: usize) {
    let cols = a.cols();
    let mut w = vec![czero(); cols - c0];
    for (i, vi) in v.iter().enumerate() {
        let vc = vi.conj();
        for (wj, aij) in w.iter_mut().zip(&a.row(r0 + i)[c0..]) {
            *wj = *wj + vc * aij;
        }
    }
    let two = T::lit(2.0);
    for (i, vi) in v.iter().enumerate() {
        let f = *vi * two;
        for (aij, wj) in a.row_mut(r0 + i)[c0..].iter_mut().zip(&w) {
            *aij = *aij - f * wj;
        }
    }
}

/// Applies `I − 2vv*` from the right to rows `r0..r1`, columns `c0..c0+len(v)`.
fn apply_right<T: Real>(a: &mut CMatrix<T>, v: &[Cx<T>], r0: usize, r1: usize, c0: usize) {
    let two = T::lit(2.0);
    for r in r0..r1 {
        let seg = &mut a.row_mut(r)[c0..c0 + v.len()];
        let mut s = czero();
        for (aij, vj) in seg.iter().zip(v) {
            s = s + aij * vj;
        }
        let s = s * two;
        for (aij, vj) in seg.iter_mut().zip(v) {
            *aij = *aij - s * vj.conj();
        }
    }
}

/// Reduces `a` to upper-Hessenberg `H = Q* A Q`. Returns `H` and, if requested, `Q`.
pub fn hessenberg<T: Real>(a: &CMatrix<T>, want_q: bool) -> Result<(CMatrix<T>, Option<CMatrix<T>>)> {
    let n = a.require_square("hessenberg")?;
    let mut h = a.clone();
    let mut q = want_q.then(|| CMatrix::identity(n));
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Cx<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let Some((v, alpha)) = reflector(&x) else { continue };
        apply_left(&mut h, &v, k + 1, k);
        apply_right(&mut h, &v, 0, n, k + 1);
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = czero();
        }
        if let Some(q) = q.as_mut() {
            apply_right(q, &v, 0, n, k + 1);
        }
    }
    Ok((h, q))
}

/// Real symmetric tridiagonal matrix (`diag`, `off`) unitarily similar to a Hermitian input.
#[derive(Clone, Debug)]
pub struct Tridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

/// Householder tridiagonalization of a Hermitian matrix. Only the upper triangle
/// is trusted; the input is symmetrized first.
pub fn tridiagonalize<T: Real>(a: &CMatrix<T>) -> Result<Tridiagonal<T>> {
    let n = a.require_square("tridiagonalize")?;
    let half = T::lit(0.5);
    let mut b = CMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * half);
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n.saturating_sub(1) {
        diag.push(b[(k, k)].re);
        let x: Vec<Cx<T>> = b.row(k)[k + 1..].iter().map(|z| z.conj()).collect();
        let Some((v, alpha)) = reflector(&x) else {
            off.push(x[0].norm());
            continue;
        };
        off.push(alpha.norm());
        let m = n - k - 1;
        let base = k + 1;
        let mut p = vec![czero(); m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &b.row(base + i)[base..];
            let mut acc = czero();
            for (bij, vj) in row.iter().zip(&v) {
                acc = acc + bij * vj;
            }
            *pi = acc;
        }
        let kappa = crate::scalar::dot_c(&v, &p).re;
        let two = T::lit(2.0);
        let q: Vec<Cx<T>> = p.iter().zip(&v).map(|(pi, vi)| (*pi - *vi * kappa) * two).collect();
        for i in 0..m {
            let (vi, qi) = (v[i], q[i]);
            let row = &mut b.row_mut(base + i)[base..];
            for j in 0..m {
                row[j] = row[j] - vi * q[j].conj() - qi * v[j].conj();
            }
        }
    }
    diag.push(b[(n - 1, n - 1)].re);
    Ok(Tridiagonal { diag, off })
}

/// Real upper-bidiagonal matrix with the same singular values as the square input.
#[derive(Clone, Debug)]
pub struct Bidiagonal<T> {
    pub diag: Vec<T>,
    pub sup: Vec<T>,
}

/// Golub–Kahan Householder bidiagonalization of a square matrix.
pub fn bidiagonalize<T: Real>(a: &CMatrix<T>) -> Result<Bidiagonal<T>> {
    let n = a.require_square("bidiagonalize")?;
    let mut b = a.clone();
    let mut diag = Vec::with_capacity(n);
    let mut sup = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let x: Vec<Cx<T>> = (k..n).map(|i| b[(i, k)]).collect();
        match reflector(&x) {
            Some((v, alpha)) => {
                diag.push(alpha.norm());
                if k + 1 < n {
                    apply_left(&mut b, &v, k, k + 1);
                }
            }
            None => diag.push(x[0].norm()),
        }
        if k + 1 < n {
            let r: Vec<Cx<T>> = b.row(k)[k + 1..].iter().map(|z| z.conj()).collect();
            match reflector(&r) {
                Some((v, alpha)) => {
                    sup.push(alpha.norm());
                    apply_right(&mut b, &v, k + 1, n, k + 1);
                }
                None => sup.push(r[0].norm()),
            }
        }
    }
    Ok(Bidiagonal { diag, sup })
}

/// Unitary factor of a Householder QR, with column phases fixed so that `R` has a positive diagonal.
pub fn qr_unitary<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.require_square("qr_unitary")?;
    let mut r = a.clone();
    let mut q = CMatrix::identity(n);
    let mut phases = vec![Cx::new(T::one(), T::zero()); n];
    for k in 0..n {
        let x: Vec<Cx<T>> = (k..n).map(|i| r[(i, k)]).collect();
        match reflector(&x) {
            Some((v, alpha)) => {
                apply_left(&mut r, &v, k, k);
                apply_right(&mut q, &v, 0, n, k);
                if alpha.norm() > T::zero() {
                    phases[k] = alpha / alpha.norm();
                }
            }
            None => {
                if x[0].norm() > T::zero() {
                    phases[k] = x[0] / x[0].norm();
                }
            }
        }
    }
    for i in 0..n {
        for (j, p) in phases.iter().enumerate() {
            q[(i, j)] = q[(i, j)] * p;
        }
    }
    Ok(q)
}
