//! Numerical range boundary by rotation: `h(θ) = λ_max(He(e^{iθ}A))` is the
//! support function of `W(A)` in direction `e^{-iθ}`, so `W(A)` lies in every
//! half-plane `Re(e^{iθ}w) ≤ h(θ)`. Adjacent tangent lines meet at the vertices
//! of an enclosing polygon.

use serde::{Deserialize, Serialize};

use crate::csv::CsvTable;
use crate::error::{LabError, Result};
use crate::linalg::{self, extreme_eigenpairs, largest_eigenpair, tridiag, tridiagonalize, CMatrix, LanczosConfig};
use crate::scalar::{axpy, czero, normalize, Cx, Real};

/// Orders up to this use a dense Hermitian eigensolver per angle; larger ones
/// use Lanczos warm-started from the previous angle.
pub const DENSE_SUPPORT_MAX: usize = 200;

/// Residual tolerance for the Lanczos path. The Ritz value error is about
/// `residual² / gap`, far below this.
pub const SUPPORT_LANCZOS_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPolygon<T> {
    pub angles: Vec<T>,
    pub support_values: Vec<T>,
    /// `vertices[j]` is where the lines for `angles[j]` and `angles[j+1]` (cyclically) meet.
    pub vertices: Vec<Cx<T>>,
}

/// Evaluates the support function of `W(A)` at arbitrary angles.
pub struct SupportFunction<'a, T: Real> {
    a: &'a CMatrix<T>,
    start: Option<Vec<Cx<T>>>,
}

impl<'a, T: Real> SupportFunction<'a, T> {
    pub fn new(a: &'a CMatrix<T>) -> Result<Self> {
        a.require_square("numerical_range_boundary")?;
        Ok(Self { a, start: None })
    }

    /// `λ_max(He(e^{iθ}A))`.
    pub fn eval(&mut self, theta: T) -> Result<T> {
        self.solve(theta, false).map(|(hi, _)| hi)
    }

    /// `(h(θ), h(θ + π))` from one solve: `h(θ + π) = −λ_min(He(e^{iθ}A))`.
    pub fn eval_antipodal(&mut self, theta: T) -> Result<(T, T)> {
        self.solve(theta, true).map(|(hi, lo)| (hi, -lo))
    }

    fn solve(&mut self, theta: T, both: bool) -> Result<(T, T)> {
        let rot = Cx::from_polar(T::one(), theta);
        let half = T::lit(0.5);
        let a = self.a;
        let n = a.rows();
        if n <= DENSE_SUPPORT_MAX {
            let h = CMatrix::from_fn(n, n, |i, j| (rot * a[(i, j)] + (rot * a[(j, i)]).conj()) * half);
            let t = tridiagonalize(&h)?;
            let (lo, hi) = tridiag::extreme_eigenvalues(&t.diag, &t.off);
            return Ok((hi, lo));
        }
        let mut tmp = vec![czero(); n];
        let rc = rot.conj();
        let apply = |x: &[Cx<T>], y: &mut [Cx<T>]| {
            a.mul_vec_both_into(x, y, &mut tmp);
            for (yi, ti) in y.iter_mut().zip(&tmp) {
                *yi = (rot * *yi + rc * *ti) * half;
            }
        };
        let cfg = LanczosConfig { tol: T::lit(SUPPORT_LANCZOS_TOL), ..LanczosConfig::default() };
        if !both {
            let pair = largest_eigenpair(n, apply, self.start.as_deref(), &cfg)?;
            self.start = Some(pair.vector);
            return Ok((pair.value, T::nan()));
        }
        let (lo, hi) = extreme_eigenpairs(n, apply, self.start.as_deref(), &cfg)?;
        // the next solve starts from both Ritz vectors in equal parts
        let mut start = hi.vector;
        axpy(Cx::new(T::one(), T::zero()), &lo.vector, &mut start);
        normalize(&mut start);
        self.start = Some(start);
        Ok((hi.value, lo.value))
    }
}

/// Tangent-line intersection for two support lines `x cos θ − y sin θ = h`.
fn intersect<T: Real>(t1: T, h1: T, t2: T, h2: T) -> Cx<T> {
    let (s1, c1) = t1.sin_cos();
    let (s2, c2) = t2.sin_cos();
    let det = (t1 - t2).sin();
    Cx::new((-h1 * s2 + h2 * s1) / det, (c1 * h2 - c2 * h1) / det)
}

/// Support values at `n_angles` uniform angles and the enclosing polygon.
pub fn numerical_range_boundary<T: Real>(a: &CMatrix<T>, n_angles: usize) -> Result<BoundaryPolygon<T>> {
    if n_angles < 3 {
        return Err(LabError::Parameter(format!("need at least 3 angles, got {n_angles}")));
    }
    let mut support = SupportFunction::new(a)?;
    let angles: Vec<T> = (0..n_angles).map(|j| T::TAU() * T::lit(j as f64 / n_angles as f64)).collect();
    let support_values = if n_angles % 2 == 0 {
        let half = n_angles / 2;
        let mut values = vec![T::zero(); n_angles];
        for j in 0..half {
            (values[j], values[j + half]) = support.eval_antipodal(angles[j])?;
        }
        values
    } else {
        angles.iter().map(|&t| support.eval(t)).collect::<Result<Vec<T>>>()?
    };
    let vertices = (0..n_angles)
        .map(|j| {
            let k = (j + 1) % n_angles;
            intersect(angles[j], support_values[j], angles[k], support_values[k])
        })
        .collect();
    Ok(BoundaryPolygon { angles, support_values, vertices })
}

impl<T: Real> BoundaryPolygon<T> {
    /// Whether `p` satisfies every support inequality up to `slack`.
    pub fn contains(&self, p: Cx<T>, slack: T) -> bool {
        self.angles.iter().zip(&self.support_values).all(|(&t, &h)| {
            let (s, c) = t.sin_cos();
            p.re * c - p.im * s <= h + slack
        })
    }

    /// Convexity of the vertex sequence: every turn goes the same (clockwise) way
    /// up to `slack`, scaled by the polygon size.
    pub fn is_convex(&self, slack: T) -> bool {
        let m = self.vertices.len();
        let size = self.vertices.iter().map(|v| v.norm()).fold(T::zero(), T::max).max(T::one());
        (0..m).all(|i| {
            let (a, b, c) = (self.vertices[i], self.vertices[(i + 1) % m], self.vertices[(i + 2) % m]);
            // the vertices run clockwise in the plane, as angles increase the outward
            // normal e^{-iθ} turns clockwise
            let cr = (b.re - a.re) * (c.im - b.im) - (b.im - a.im) * (c.re - b.re);
            cr <= slack * size * size
        })
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["theta", "support_value", "vertex_re", "vertex_im"]);
        for j in 0..self.angles.len() {
            t.push(vec![
                self.angles[j].as_f64(),
                self.support_values[j].as_f64(),
                self.vertices[j].re.as_f64(),
                self.vertices[j].im.as_f64(),
            ]);
        }
        t
    }
}

/// `λ_max(He(A))` for any square matrix (dense path).
pub fn numerical_abscissa<T: Real>(a: &CMatrix<T>) -> Result<T> {
    Ok(linalg::eig_extreme_hermitian(&linalg::hermitian_part(a)?)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_ginibre, Seed};

    fn c(re: f64, im: f64) -> Cx<f64> {
        Cx::new(re, im)
    }

    #[test]
    fn hermitian_matrix_gives_segment() {
        let a = CMatrix::from_diag(&[c(-1.0, 0.0), c(1.0, 0.0)]);
        let p = numerical_range_boundary(&a, 64).unwrap();
        for (t, h) in p.angles.iter().zip(&p.support_values) {
            assert!((h - t.cos().abs()).abs() < 1e-12);
        }
        for v in &p.vertices {
            assert!(v.im.abs() < 1e-8 && v.re.abs() <= 1.0 + 1e-8, "{v}");
        }
    }

    #[test]
    fn jordan_block_support_is_constant() {
        let a = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let p = numerical_range_boundary(&a, 32).unwrap();
        for h in &p.support_values {
            assert!((*h - 0.5f64).abs() < 1e-14);
        }
        // random unit vectors never exceed the support value
        let mut state = 7u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut best: f64 = -1.0;
        for _ in 0..100_000 {
            let v = [c(next(), next()), c(next(), next())];
            let nv = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            let q = v[0].conj() * v[1] / (nv * nv);
            best = best.max(q.re);
        }
        assert!((best - 0.5).abs() < 1e-3);
    }

    #[test]
    fn polygon_is_convex_and_contains_eigenvalues() {
        let g: CMatrix<f64> = sample_ginibre(15, Seed(5)).unwrap();
        let p = numerical_range_boundary(&g, 90).unwrap();
        assert!(p.is_convex(1e-10));
        for ev in linalg::eigenvalues(&g).unwrap() {
            assert!(p.contains(ev, 1e-8));
        }
    }

    #[test]
    fn lanczos_path_matches_dense_path() {
        let g: CMatrix<f64> = sample_ginibre(DENSE_SUPPORT_MAX + 20, Seed(8)).unwrap();
        let mut sf = SupportFunction::new(&g).unwrap();
        for j in 0..6 {
            let t = 0.9 * j as f64;
            let it = sf.eval(t).unwrap();
            let rot = Cx::from_polar(1.0, t);
            let dense = numerical_abscissa(&g.scale(rot)).unwrap();
            assert!((it - dense).abs() < 1e-10 * dense.abs(), "{it} {dense}");
        }
    }

    #[test]
    fn antipodal_pairs_match_single_solves() {
        let g: CMatrix<f64> = sample_ginibre(DENSE_SUPPORT_MAX + 20, Seed(9)).unwrap();
        let mut pair = SupportFunction::new(&g).unwrap();
        let mut single = SupportFunction::new(&g).unwrap();
        for j in 0..4 {
            let t = 0.7 * j as f64;
            let (h, h_opp) = pair.eval_antipodal(t).unwrap();
            for (got, angle) in [(h, t), (h_opp, t + std::f64::consts::PI)] {
                let want = single.eval(angle).unwrap();
                assert!((got - want).abs() < 1e-10 * want.abs(), "{got} {want}");
            }
        }
        // dense path, odd and even angle counts agree on shared angles
        let small: CMatrix<f64> = sample_ginibre(12, Seed(9)).unwrap();
        let even = numerical_range_boundary(&small, 8).unwrap();
        let mut sf = SupportFunction::new(&small).unwrap();
        for (t, h) in even.angles.iter().zip(&even.support_values) {
            assert!((sf.eval(*t).unwrap() - h).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_too_few_angles() {
        assert!(numerical_range_boundary(&CMatrix::<f64>::identity(2), 2).is_err());
    }
}
