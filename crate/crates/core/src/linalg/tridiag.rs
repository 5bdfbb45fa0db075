//! Real symmetric tridiagonal kernels: Sturm-count bisection and inverse iteration.

use crate::scalar::Real;

/// Number of eigenvalues strictly less than `x`.
pub fn sturm_count<T: Real>(diag: &[T], off: &[T], x: T) -> usize {
    let scale = diag
        .iter()
        .map(|d| d.abs())
        .chain(off.iter().map(|e| e.abs()))
        .fold(T::min_positive_value(), T::max);
    let pivmin = T::min_positive_value().max(T::epsilon() * T::epsilon() * scale * scale);
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < T::zero() {
        count += 1;
    }
    for i in 1..diag.len() {
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

fn gershgorin<T: Real>(diag: &[T], off: &[T]) -> (T, T) {
    let n = diag.len();
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { T::zero() } + if i + 1 < n { off[i].abs() } else { T::zero() };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let pad = (hi - lo).abs().max(T::one()) * T::epsilon() * T::lit(4.0);
    (lo - pad, hi + pad)
}

/// The `k`-th smallest eigenvalue (0-based) by bisection to full precision.
pub fn kth_eigenvalue<T: Real>(diag: &[T], off: &[T], k: usize) -> T {
    assert!(k < diag.len(), "eigenvalue index out of range");
    let (mut lo, mut hi) = gershgorin(diag, off);
    for _ in 0..400 {
        let mid = lo + (hi - lo) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo + (hi - lo) * T::lit(0.5)
}

/// `(λ_min, λ_max)` of a symmetric tridiagonal matrix.
pub fn extreme_eigenvalues<T: Real>(diag: &[T], off: &[T]) -> (T, T) {
    let n = diag.len();
    (kth_eigenvalue(diag, off, 0), kth_eigenvalue(diag, off, n - 1))
}

/// Smallest and largest singular values of an upper bidiagonal matrix, via
/// bisection on its Golub–Kahan tridiagonal embedding.
pub fn bidiagonal_extreme_singular_values<T: Real>(diag: &[T], sup: &[T]) -> (T, T) {
    let n = diag.len();
    let mut off = Vec::with_capacity(2 * n - 1);
    for i in 0..n {
        off.push(diag[i].abs());
        if i + 1 < n {
            off.push(sup[i].abs());
        }
    }
    let zeros = vec![T::zero(); 2 * n];
    let smin = kth_eigenvalue(&zeros, &off, n).max(T::zero());
    let smax = kth_eigenvalue(&zeros, &off, 2 * n - 1).max(T::zero());
    (smin, smax)
}

/// Unit eigenvector for an (accurate) eigenvalue `theta` by inverse iteration.
pub fn eigenvector<T: Real>(diag: &[T], off: &[T], theta: T) -> Vec<T> {
    let n = diag.len();
    if n == 1 {
        return vec![T::one()];
    }
    let scale = diag
        .iter()
        .map(|d| d.abs())
        .chain(off.iter().map(|e| e.abs()))
        .fold(T::min_positive_value(), T::max);
    let tiny = T::epsilon() * scale;
    // Gaussian elimination with partial pivoting on T − θI: U has two superdiagonals.
    let mut d: Vec<T> = diag.iter().map(|&a| a - theta).collect();
    let mut u1: Vec<T> = off.to_vec();
    u1.push(T::zero());
    let mut u2 = vec![T::zero(); n];
    let mut mult = vec![T::zero(); n - 1];
    let mut swapped = vec![false; n - 1];
    let mut sub: Vec<T> = off.to_vec();
    for k in 0..n - 1 {
        if sub[k].abs() > d[k].abs() {
            // swap rows k and k+1
            swapped[k] = true;
            let (a0, a1, a2) = (d[k], u1[k], u2[k]);
            d[k] = sub[k];
            u1[k] = d[k + 1];
            u2[k] = u1[k + 1];
            sub[k] = a0;
            d[k + 1] = a1;
            u1[k + 1] = a2;
        }
        if d[k].abs() < tiny {
            d[k] = tiny;
        }
        let l = sub[k] / d[k];
        mult[k] = l;
        d[k + 1] = d[k + 1] - l * u1[k];
        u1[k + 1] = u1[k + 1] - l * u2[k];
    }
    if d[n - 1].abs() < tiny {
        d[n - 1] = tiny;
    }
    let mut y = vec![T::one(); n];
    for _ in 0..3 {
        for k in 0..n - 1 {
            if swapped[k] {
                y.swap(k, k + 1);
            }
            y[k + 1] = y[k + 1] - mult[k] * y[k];
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            if i + 1 < n {
                acc = acc - u1[i] * y[i + 1];
            }
            if i + 2 < n {
                acc = acc - u2[i] * y[i + 2];
            }
            y[i] = acc / d[i];
        }
        let norm = y.iter().map(|v| *v * *v).sum::<T>().sqrt();
        if !norm.is_finite() || norm == T::zero() {
            break;
        }
        y.iter_mut().for_each(|v| *v = *v / norm);
    }
    y
}
