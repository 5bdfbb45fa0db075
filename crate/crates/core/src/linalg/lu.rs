//! LU factorizations with partial pivoting: general dense and upper-Hessenberg.

use crate::error::{LabError, Result};
use crate::linalg::CMatrix;
use crate::scalar::{czero, normalize, Cx, Real};

/// Back substitution `U x = b` on the upper triangle of `u`, in place.
fn upper_solve<T: Real>(u: &CMatrix<T>, x: &mut [Cx<T>]) {
    let n = x.len();
    for i in (0..n).rev() {
        let row = u.row(i);
        let acc = x[i] - crate::scalar::dot_u(&row[i + 1..], &x[i + 1..]);
        x[i] = acc / row[i];
    }
}

/// Forward substitution `U* x = b` on the upper triangle of `u`, in place.
fn upper_adjoint_solve<T: Real>(u: &CMatrix<T>, x: &mut [Cx<T>]) {
    let n = x.len();
    for i in 0..n {
        let row = u.row(i);
        let xi = x[i] / row[i].conj();
        x[i] = xi;
        for j in i + 1..n {
            x[j] = x[j] - row[j].conj() * xi;
        }
    }
}

fn min_pivot<T: Real>(u: &CMatrix<T>) -> T {
    (0..u.rows()).map(|i| u[(i, i)].norm()).fold(T::infinity(), T::min)
}

/// Estimates the smallest singular value from a few steps of inverse iteration.
fn sigma_min_estimate<T: Real>(
    n: usize,
    solve: impl Fn(&mut [Cx<T>]),
    solve_adjoint: impl Fn(&mut [Cx<T>]),
) -> T {
    let mut x: Vec<Cx<T>> = (0..n)
        .map(|i| Cx::new(T::one() + T::lit(0.1 * ((i * 7 % 11) as f64)), T::lit(0.05 * ((i % 5) as f64))))
        .collect();
    normalize(&mut x);
    let mut growth = T::zero();
    for _ in 0..4 {
        solve(&mut x);
        solve_adjoint(&mut x);
        growth = normalize(&mut x);
        if !growth.is_finite() {
            return T::zero();
        }
    }
    if growth > T::zero() {
        T::one() / growth.sqrt()
    } else {
        T::infinity()
    }
}

/// `P A = L U` for a general square matrix.
#[derive(Clone, Debug)]
pub struct Lu<T: Real> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
    sign_flips: usize,
}

impl<T: Real> Lu<T> {
    pub fn factor(a: &CMatrix<T>) -> Result<Self> {
        let n = a.require_square("Lu::factor")?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign_flips = 0;
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, T::zero()), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            if best == T::zero() {
                continue;
            }
            if p != k {
                let data = lu.as_mut_slice();
                for j in 0..n {
                    data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign_flips += 1;
            }
            let pivot = lu[(k, k)];
            let (head, tail) = lu.as_mut_slice().split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..];
            for row in tail.chunks_mut(n) {
                let l = row[k] / pivot;
                row[k] = l;
                if l != czero() {
                    for j in k + 1..n {
                        row[j] = row[j] - l * pivot_row[j];
                    }
                }
            }
        }
        Ok(Self { lu, perm, sign_flips })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn is_singular(&self) -> bool {
        min_pivot(&self.lu) == T::zero()
    }

    pub fn determinant(&self) -> Cx<T> {
        let mut det = Cx::new(T::one(), T::zero());
        for i in 0..self.dim() {
            det = det * self.lu[(i, i)];
        }
        if self.sign_flips % 2 == 1 {
            -det
        } else {
            det
        }
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [Cx<T>]) {
        let n = self.dim();
        let permuted: Vec<Cx<T>> = self.perm.iter().map(|&p| b[p]).collect();
        b.copy_from_slice(&permuted);
        for i in 0..n {
            let row = self.lu.row(i);
            let mut acc = b[i];
            for j in 0..i {
                acc = acc - row[j] * b[j];
            }
            b[i] = acc;
        }
        upper_solve(&self.lu, b);
    }

    /// Solves `A* x = b` in place.
    pub fn solve_adjoint_in_place(&self, b: &mut [Cx<T>]) {
        let n = self.dim();
        upper_adjoint_solve(&self.lu, b);
        for i in (0..n).rev() {
            let xi = b[i];
            let row = self.lu.row(i);
            for j in 0..i {
                b[j] = b[j] - row[j].conj() * xi;
            }
        }
        let mut out = vec![czero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            out[p] = b[k];
        }
        b.copy_from_slice(&out);
    }

    /// Solves `A X = B` for a block of right-hand sides.
    pub fn solve_matrix(&self, b: &CMatrix<T>) -> Result<CMatrix<T>> {
        let n = self.dim();
        if b.rows() != n {
            return Err(LabError::dim("Lu::solve_matrix", format!("{} rows vs order {n}", b.rows())));
        }
        let m = b.cols();
        let mut x = CMatrix::from_fn(n, m, |i, j| b[(self.perm[i], j)]);
        let data = x.as_mut_slice();
        for i in 0..n {
            let (done, rest) = data.split_at_mut(i * m);
            let xi = &mut rest[..m];
            let row = self.lu.row(i);
            for (j, &l) in row.iter().enumerate().take(i) {
                if l != czero() {
                    let xj = &done[j * m..(j + 1) * m];
                    for (a, &b) in xi.iter_mut().zip(xj) {
                        *a = *a - l * b;
                    }
                }
            }
        }
        for i in (0..n).rev() {
            let (head, rest) = data.split_at_mut((i + 1) * m);
            let xi = &mut head[i * m..];
            let row = self.lu.row(i);
            for (j, &u) in row.iter().enumerate().skip(i + 1) {
                if u != czero() {
                    let xj = &rest[(j - i - 1) * m..(j - i) * m];
                    for (a, &b) in xi.iter_mut().zip(xj) {
                        *a = *a - u * b;
                    }
                }
            }
            let inv = Cx::new(T::one(), T::zero()) / row[i];
            xi.iter_mut().for_each(|a| *a = *a * inv);
        }
        Ok(x)
    }

    pub fn sigma_min_estimate(&self) -> T {
        if self.is_singular() {
            return T::zero();
        }
        sigma_min_estimate(self.dim(), |x| self.solve_in_place(x), |x| self.solve_adjoint_in_place(x))
    }
}

/// LU factorization of an upper-Hessenberg matrix `z·I − H`, O(n²) work.
#[derive(Clone, Debug)]
pub struct HessenbergLu<T: Real> {
    u: CMatrix<T>,
    mult: Vec<Cx<T>>,
    swapped: Vec<bool>,
}

impl<T: Real> HessenbergLu<T> {
    /// Factors `shift·I − h` where `h` is upper Hessenberg.
    pub fn factor_shifted(h: &CMatrix<T>, shift: Cx<T>) -> Result<Self> {
        let m = h.shifted(shift)?;
        Ok(Self::factor_owned(m))
    }

    /// Factors `h` itself (entries below the first subdiagonal are ignored).
    pub fn factor(h: &CMatrix<T>) -> Result<Self> {
        h.require_square("HessenbergLu::factor")?;
        Ok(Self::factor_owned(h.clone()))
    }

    fn factor_owned(mut u: CMatrix<T>) -> Self {
        let n = u.rows();
        let mut mult = vec![czero(); n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for k in 0..n.saturating_sub(1) {
            let data = u.as_mut_slice();
            let (head, tail) = data.split_at_mut((k + 1) * n);
            let rk = &mut head[k * n..];
            let rk1 = &mut tail[..n];
            if rk1[k].norm() > rk[k].norm() {
                for j in k..n {
                    std::mem::swap(&mut rk[j], &mut rk1[j]);
                }
                swapped[k] = true;
            }
            if rk[k] == czero() {
                continue;
            }
            let l = rk1[k] / rk[k];
            mult[k] = l;
            rk1[k] = czero();
            if l != czero() {
                for j in k + 1..n {
                    rk1[j] = rk1[j] - l * rk[j];
                }
            }
        }
        for i in 1..n {
            for j in 0..i {
                u[(i, j)] = czero();
            }
        }
        Self { u, mult, swapped }
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    pub fn is_singular(&self) -> bool {
        min_pivot(&self.u) == T::zero()
    }

    pub fn solve_in_place(&self, b: &mut [Cx<T>]) {
        for k in 0..self.mult.len() {
            if self.swapped[k] {
                b.swap(k, k + 1);
            }
            b[k + 1] = b[k + 1] - self.mult[k] * b[k];
        }
        upper_solve(&self.u, b);
    }

    pub fn solve_adjoint_in_place(&self, b: &mut [Cx<T>]) {
        upper_adjoint_solve(&self.u, b);
        for k in (0..self.mult.len()).rev() {
            b[k] = b[k] - self.mult[k].conj() * b[k + 1];
            if self.swapped[k] {
                b.swap(k, k + 1);
            }
        }
    }

    pub fn sigma_min_estimate(&self) -> T {
        if self.is_singular() {
            return T::zero();
        }
        sigma_min_estimate(self.dim(), |x| self.solve_in_place(x), |x| self.solve_adjoint_in_place(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::vec_norm;

    fn test_matrix(n: usize, hessenberg: bool) -> CMatrix<f64> {
        CMatrix::from_fn(n, n, |i, j| {
            if hessenberg && i > j + 1 {
                return czero();
            }
            let t = (i * 31 + j * 17) as f64;
            Cx::new((t * 0.37).sin() + if i == j { 0.5 } else { 0.0 }, (t * 0.11).cos())
        })
    }

    fn residual(a: &CMatrix<f64>, x: &[Cx<f64>], b: &[Cx<f64>]) -> f64 {
        let ax = a.mul_vec(x).unwrap();
        let r: Vec<_> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
        vec_norm(&r)
    }

    #[test]
    fn dense_solves() {
        let a = test_matrix(12, false);
        let lu = Lu::factor(&a).unwrap();
        let b: Vec<_> = (0..12).map(|i| Cx::new(i as f64, 1.0)).collect();
        let mut x = b.clone();
        lu.solve_in_place(&mut x);
        assert!(residual(&a, &x, &b) < 1e-10);
        let mut y = b.clone();
        lu.solve_adjoint_in_place(&mut y);
        assert!(residual(&a.adjoint(), &y, &b) < 1e-10);
        let bm = CMatrix::from_fn(12, 3, |i, j| Cx::new((i + j) as f64, (i * j) as f64));
        let xm = lu.solve_matrix(&bm).unwrap();
        assert!(a.matmul(&xm).unwrap().sub(&bm).unwrap().frobenius_norm() < 1e-9);
    }

    #[test]
    fn hessenberg_solves() {
        let h = test_matrix(15, true);
        let z = Cx::new(0.3, -0.2);
        let lu = HessenbergLu::factor_shifted(&h, z).unwrap();
        let m = h.shifted(z).unwrap();
        let b: Vec<_> = (0..15).map(|i| Cx::new(1.0, i as f64 * 0.1)).collect();
        let mut x = b.clone();
        lu.solve_in_place(&mut x);
        assert!(residual(&m, &x, &b) < 1e-10);
        let mut y = b.clone();
        lu.solve_adjoint_in_place(&mut y);
        assert!(residual(&m.adjoint(), &y, &b) < 1e-10);
    }

    #[test]
    fn determinant_and_singularity() {
        let a = CMatrix::<f64>::from_real(2, 2, &[0.0, 2.0, 3.0, 1.0]).unwrap();
        let lu = Lu::factor(&a).unwrap();
        assert!((lu.determinant() - Cx::new(-6.0, 0.0)).norm() < 1e-14);
        let s = CMatrix::<f64>::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let lu = Lu::factor(&s).unwrap();
        assert!(lu.is_singular());
        assert_eq!(lu.sigma_min_estimate(), 0.0);
    }
}
