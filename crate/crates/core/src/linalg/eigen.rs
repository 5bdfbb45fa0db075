//! Eigenvalues of a complex upper-Hessenberg matrix by implicitly shifted QR.

use crate::error::{LabError, Result};
use crate::linalg::CMatrix;
use crate::scalar::{czero, Cx, Real};

#[inline]
fn abs1<T: Real>(z: Cx<T>) -> T {
    z.re.abs() + z.im.abs()
}

/// Rotation `[c s; −s̄ c]` mapping `(x, y)` to `(r, 0)`.
#[inline]
fn givens<T: Real>(x: Cx<T>, y: Cx<T>) -> (T, Cx<T>) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == T::zero() {
        return (T::one(), czero());
    }
    if ax == T::zero() {
        return (T::zero(), Cx::new(T::one(), T::zero()));
    }
    let nu = ax.hypot(ay);
    let c = ax / nu;
    let s = (x / ax) * y.conj() / nu;
    (c, s)
}

/// Eigenvalues of the 2×2 block `[[a, b], [c, d]]`.
fn eig2<T: Real>(a: Cx<T>, b: Cx<T>, c: Cx<T>, d: Cx<T>) -> (Cx<T>, Cx<T>) {
    let half = T::lit(0.5);
    let mean = (a + d) * half;
    let p = (a - d) * half;
    let disc = (p * p + b * c).sqrt();
    let l1 = mean + disc;
    // second root through the determinant when the first is well separated from zero
    let det = a * d - b * c;
    let l2 = if l1.norm() > T::zero() && (mean - disc).norm() < l1.norm() * T::lit(1e-3) {
        det / l1
    } else {
        mean - disc
    };
    (l1, l2)
}

/// All eigenvalues of the upper-Hessenberg matrix `h` (destroyed in the process).
/// At most `30·n` QR sweeps are performed.
pub fn hessenberg_eigenvalues<T: Real>(mut h: CMatrix<T>) -> Result<Vec<Cx<T>>> {
    let n = h.require_square("hessenberg_eigenvalues")?;
    let eps = T::epsilon();
    let norm_est = h.max_abs().max(T::min_positive_value());
    let cap = 30 * n;
    let mut eig = vec![czero(); n];
    let mut sweeps = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let sub = abs1(h[(l, l - 1)]);
            let mut diag = abs1(h[(l - 1, l - 1)]) + abs1(h[(l, l)]);
            if diag == T::zero() {
                diag = norm_est;
            }
            if sub <= eps * diag {
                h[(l, l - 1)] = czero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }
        if l + 1 == hi {
            let (a, b, c, d) = (h[(l, l)], h[(l, hi)], h[(hi, l)], h[(hi, hi)]);
            let (e1, e2) = eig2(a, b, c, d);
            eig[l] = e1;
            eig[hi] = e2;
            if l == 0 {
                break;
            }
            hi = l - 1;
            its = 0;
            continue;
        }
        sweeps += 1;
        its += 1;
        if sweeps > cap {
            return Err(LabError::NoConvergence {
                op: "eigenvalues",
                detail: format!("{sweeps} QR sweeps without deflating row {hi} of {n}"),
            });
        }
        let mu = if its % 10 == 0 {
            h[(hi, hi)] + Cx::new(T::lit(0.75) * abs1(h[(hi, hi - 1)]), T::zero())
        } else {
            let (a, b, c, d) = (h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)]);
            let half = T::lit(0.5);
            let mean = (a + d) * half;
            let disc = ((a - d) * (a - d) * T::lit(0.25) + b * c).sqrt();
            let (m1, m2) = (mean + disc, mean - disc);
            if (m1 - d).norm() <= (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };
        let mut x = h[(l, l)] - mu;
        let mut y = h[(l + 1, l)];
        for k in l..hi {
            if k > l {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let sc = s.conj();
            let j0 = if k > l { k - 1 } else { l };
            {
                let cols = h.cols();
                let data = h.as_mut_slice();
                let (top, bottom) = data.split_at_mut((k + 1) * cols);
                let rk = &mut top[k * cols..];
                let rk1 = &mut bottom[..cols];
                for j in j0..=hi {
                    let (a, b) = (rk[j], rk1[j]);
                    rk[j] = a * c + s * b;
                    rk1[j] = b * c - sc * a;
                }
            }
            if k > l {
                h[(k + 1, k - 1)] = czero();
            }
            for i in l..=(k + 2).min(hi) {
                let (u, v) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = u * c + v * sc;
                h[(i, k + 1)] = v * c - u * s;
            }
        }
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_annihilates() {
        let x = Cx::new(0.3, -1.2);
        let y = Cx::new(-0.7, 0.4);
        let (c, s) = givens(x, y);
        let lower = y * c - s.conj() * x;
        assert!(lower.norm() < 1e-15);
    }

    #[test]
    fn companion_matrix_roots() {
        // companion of (z-1)(z-2)(z-3)(z-4) = z^4 - 10z^3 + 35z^2 - 50z + 24
        let h = CMatrix::<f64>::from_real(
            4,
            4,
            &[10.0, -35.0, 50.0, -24.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        )
        .unwrap();
        let mut ev: Vec<f64> = hessenberg_eigenvalues(h).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (k, e) in ev.iter().enumerate() {
            assert!((e - (k + 1) as f64).abs() < 1e-9, "{ev:?}");
        }
    }
}
