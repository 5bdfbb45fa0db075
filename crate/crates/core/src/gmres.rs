//! GMRES residual curves via Arnoldi + Givens least squares, the Hessenberg
//! residual formula, the large-N residual rate and the two a-priori bounds.

use serde::{Deserialize, Serialize};

use crate::csv::CsvTable;
use crate::ensembles::{check_sigma, ShiftedSystem};
use crate::error::{LabError, Result};
use crate::linalg::{largest_eigenpair, CMatrix, LanczosConfig, Lu};
use crate::scalar::{axpy, czero, dot_c, normalize, vec_norm, Cx, Real};
use crate::spectral_sets::edge_e;

/// Orthonormal Krylov basis and the rectangular Hessenberg matrix with
/// `A V[:, ..k] = V H̃`.
#[derive(Clone, Debug)]
pub struct ArnoldiFactorization<T: Real> {
    /// Basis vectors `v₁, …`, one per column of `V`.
    pub basis: Vec<Vec<Cx<T>>>,
    /// `(k+1)×k`, or `j×j` after a breakdown at step `j`.
    pub h_tilde: CMatrix<T>,
    /// Step at which the Krylov space became invariant, if it did.
    pub breakdown_step: Option<usize>,
}

impl<T: Real> ArnoldiFactorization<T> {
    pub fn steps(&self) -> usize {
        self.h_tilde.cols()
    }

    /// `V` as an `N × (columns)` matrix.
    pub fn v(&self) -> CMatrix<T> {
        let n = self.basis[0].len();
        CMatrix::from_fn(n, self.basis.len(), |i, j| self.basis[j][i])
    }
}

/// `k` steps of Arnoldi (modified Gram–Schmidt plus one reorthogonalization pass)
/// started from `b/‖b‖`.
pub fn arnoldi<T: Real>(a: &CMatrix<T>, b: &[Cx<T>], k: usize) -> Result<ArnoldiFactorization<T>> {
    let n = a.require_square("arnoldi")?;
    if b.len() != n {
        return Err(LabError::dim("arnoldi", format!("rhs length {} for order {n}", b.len())));
    }
    if k == 0 || k > n {
        return Err(LabError::Parameter(format!("arnoldi needs 1 <= k <= {n}, got {k}")));
    }
    let mut v0 = b.to_vec();
    if normalize(&mut v0) == T::zero() {
        return Err(LabError::Parameter("arnoldi started from the zero vector".into()));
    }
    let breakdown_tol = T::lit(1e-14) * a.norm_2_upper();
    let mut basis = vec![v0];
    let mut h = CMatrix::zeros(k + 1, k);
    let mut w = vec![czero(); n];
    for j in 0..k {
        a.mul_vec_into(&basis[j], &mut w);
        for _pass in 0..2 {
            for (i, v) in basis.iter().enumerate() {
                let c = dot_c(v, &w);
                axpy(-c, v, &mut w);
                h[(i, j)] = h[(i, j)] + c;
            }
        }
        let beta = vec_norm(&w);
        if beta <= breakdown_tol {
            let h_sq = h.block(0, j + 1, 0, j + 1)?;
            return Ok(ArnoldiFactorization { basis, h_tilde: h_sq, breakdown_step: Some(j + 1) });
        }
        h[(j + 1, j)] = Cx::new(beta, T::zero());
        let inv = T::one() / beta;
        basis.push(w.iter().map(|z| *z * inv).collect());
    }
    Ok(ArnoldiFactorization { basis, h_tilde: h, breakdown_step: None })
}

/// Complex Givens rotation `[c s; −s̄ c]` zeroing `y` against `x`.
fn givens<T: Real>(x: Cx<T>, y: Cx<T>) -> (T, Cx<T>, Cx<T>) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == T::zero() {
        return (T::one(), czero(), x);
    }
    if ax == T::zero() {
        return (T::zero(), Cx::new(T::one(), T::zero()), y.conj());
    }
    let nu = ax.hypot(ay);
    let phase = x / ax;
    (ax / nu, phase * y.conj() / nu, phase * nu)
}

/// `min_y ‖βe₁ − H̃[..j+1, ..j] y‖ / β` for `j = 0..=cols`, by progressive Givens QR.
/// Square (post-breakdown) inputs end with an exact zero.
pub fn least_squares_residuals<T: Real>(h_tilde: &CMatrix<T>) -> Vec<T> {
    let (rows, cols) = (h_tilde.rows(), h_tilde.cols());
    let mut r = h_tilde.clone();
    let mut rot: Vec<(T, Cx<T>)> = Vec::with_capacity(cols);
    let mut g = vec![czero(); rows + 1];
    g[0] = Cx::new(T::one(), T::zero());
    let mut out = vec![T::one()];
    for j in 0..cols {
        for (i, &(c, s)) in rot.iter().enumerate() {
            let (a, b) = (r[(i, j)], r[(i + 1, j)]);
            r[(i, j)] = a * c + s * b;
            r[(i + 1, j)] = b * c - s.conj() * a;
        }
        if j + 1 < rows {
            let (c, s, rr) = givens(r[(j, j)], r[(j + 1, j)]);
            r[(j, j)] = rr;
            r[(j + 1, j)] = czero();
            let (a, b) = (g[j], g[j + 1]);
            g[j] = a * c + s * b;
            g[j + 1] = b * c - s.conj() * a;
            rot.push((c, s));
            out.push(g[j + 1].norm());
        } else {
            out.push(T::zero());
        }
    }
    out
}

/// Relative GMRES residuals with the large-N rate and both bounds alongside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualCurve {
    pub sigma: f64,
    pub n: usize,
    pub ks: Vec<usize>,
    pub rel_residuals: Vec<f64>,
    pub prediction: Vec<f64>,
    pub bound_pseudo: Vec<f64>,
    pub bound_nr: Vec<f64>,
}

impl ResidualCurve {
    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["k", "residual", "prediction", "bound_pseudo", "bound_nr"]);
        for i in 0..self.ks.len() {
            t.push(vec![
                self.ks[i] as f64,
                self.rel_residuals[i],
                self.prediction[i],
                self.bound_pseudo[i],
                self.bound_nr[i],
            ]);
        }
        t
    }

    pub fn to_csv(&self) -> String {
        self.to_table().to_csv()
    }
}

/// GMRES on `(I + σG)x = b` for `k = 0..=k_max`.
pub fn gmres_residuals<T: Real>(sys: &ShiftedSystem<T>, k_max: usize) -> Result<ResidualCurve> {
    let n = sys.n();
    if k_max >= n {
        return Err(LabError::Parameter(format!("k_max must be below the order {n}, got {k_max}")));
    }
    let sigma = sys.sigma.as_f64();
    let mut rel = if k_max == 0 {
        vec![1.0]
    } else {
        let fact = arnoldi(&sys.matrix(), &sys.b, k_max)?;
        least_squares_residuals(&fact.h_tilde).iter().map(|v| v.as_f64()).collect::<Vec<_>>()
    };
    rel.resize(k_max + 1, 0.0);
    let mut curve = ResidualCurve {
        sigma,
        n,
        ks: (0..=k_max).collect(),
        rel_residuals: rel,
        prediction: Vec::with_capacity(k_max + 1),
        bound_pseudo: Vec::with_capacity(k_max + 1),
        bound_nr: Vec::with_capacity(k_max + 1),
    };
    for k in 0..=k_max {
        curve.prediction.push(limiting_rate(sigma, k)?);
        let b = gmres_bounds(sigma, k)?;
        curve.bound_pseudo.push(b.pseudo);
        curve.bound_nr.push(b.nr);
    }
    Ok(curve)
}

/// Relative residual read off a `(k+1)×k` Hessenberg matrix:
/// `(1 + ‖w‖²)^{-1/2}` with `L* w = r*`, where `r` is the first row and `L` the lower `k×k` block.
pub fn residual_from_hessenberg<T: Real>(h_tilde: &CMatrix<T>) -> Result<T> {
    let (rows, k) = (h_tilde.rows(), h_tilde.cols());
    if rows != k + 1 {
        return Err(LabError::dim("residual_from_hessenberg", format!("expected (k+1)×k, got {rows}×{k}")));
    }
    let lower = h_tilde.block(1, k + 1, 0, k)?;
    let lu = Lu::factor(&lower)?;
    let singular = || LabError::Singular { op: "residual_from_hessenberg", sigma_min: lu.sigma_min_estimate().as_f64() };
    // lower blocks of GMRES Hessenbergs are routinely conditioned like σ^k, so only
    // an exact zero pivot or an overflowing solve counts as singular
    if lu.is_singular() {
        return Err(singular());
    }
    let mut w: Vec<Cx<T>> = h_tilde.row(0).iter().map(|z| z.conj()).collect();
    lu.solve_adjoint_in_place(&mut w);
    if !w.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(singular());
    }
    Ok(T::one() / T::one().hypot(vec_norm(&w)))
}

/// `((1−σ²)/(1−σ^{2k+2}))^{1/2} σ^k`.
pub fn limiting_rate<T: Real>(sigma: T, k: usize) -> Result<T> {
    check_sigma(sigma)?;
    let s2 = sigma * sigma;
    let tail = s2.powi(k as i32 + 1);
    Ok(((T::one() - s2) / (T::one() - tail)).sqrt() * sigma.powi(k as i32))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GmresBounds<T> {
    /// `inf_{η>1} η 𝔢(η)^{-1/2} (ση)^k`.
    pub pseudo: T,
    /// Minimizing `η` (infinite for `k = 0`, where the infimum is the limit 1).
    pub eta: T,
    /// `2(√2σ)^k`.
    pub nr: T,
    /// False when `√2σ ≥ 1`, so the numerical-range bound does not decay.
    pub nr_decays: bool,
}

/// The pseudospectral and numerical-range bounds on the worst-case relative residual.
pub fn gmres_bounds<T: Real>(sigma: T, k: usize) -> Result<GmresBounds<T>> {
    check_sigma(sigma)?;
    let r = T::SQRT_2() * sigma;
    let nr = T::lit(2.0) * r.powi(k as i32);
    let nr_decays = r < T::one();
    if k == 0 {
        return Ok(GmresBounds { pseudo: T::one(), eta: T::infinity(), nr, nr_decays });
    }
    let kk = T::lit(k as f64);
    // objective in u = ln(η − 1)
    let obj = |u: T| -> T {
        let eta = T::one() + u.exp();
        let e = edge_e(eta).unwrap_or(T::zero());
        if e <= T::zero() {
            return T::infinity();
        }
        eta.ln() - T::lit(0.5) * e.ln() + kk * (sigma * eta).ln()
    };
    let lo = T::lit(1e-8).ln();
    let hi = (T::lit(4.0) / sigma).ln();
    let m = 64;
    let grid: Vec<T> = (0..m).map(|i| lo + (hi - lo) * T::lit(i as f64 / (m - 1) as f64)).collect();
    let vals: Vec<T> = grid.iter().map(|&u| obj(u)).collect();
    let best = (0..m).min_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap_or(std::cmp::Ordering::Equal)).unwrap_or(0);
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(m - 1)];
    let invphi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut c = b - (b - a) * invphi;
    let mut d = a + (b - a) * invphi;
    let (mut fc, mut fd) = (obj(c), obj(d));
    for _ in 0..200 {
        if (b - a).abs() <= T::epsilon() * T::lit(4.0) * (T::one() + c.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * invphi;
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * invphi;
            fd = obj(d);
        }
    }
    let (u, f) = if fc < fd { (c, fc) } else { (d, fd) };
    let (u, f) = if vals[best] < f { (grid[best], vals[best]) } else { (u, f) };
    Ok(GmresBounds { pseudo: f.exp(), eta: T::one() + u.exp(), nr, nr_decays })
}

/// Unit vector maximizing `‖(σG)^{10} b‖/‖b‖`, i.e. the `b` that makes `(z − 1)^{10}`
/// as bad as possible for `I + σG`. Computed by Lanczos on `((σG)^{10})*(σG)^{10}`
/// applied as 20 matrix-vector products.
pub fn adversarial_rhs<T: Real>(g: &CMatrix<T>, sigma: T) -> Result<Vec<Cx<T>>> {
    let n = g.require_square("adversarial_rhs")?;
    if !(sigma > T::zero()) || !sigma.is_finite() {
        return Err(LabError::Parameter(format!("sigma must be positive, got {sigma}")));
    }
    let mut t1 = vec![czero(); n];
    let mut t2 = vec![czero(); n];
    let gram = |x: &[Cx<T>], y: &mut [Cx<T>]| {
        t1.copy_from_slice(x);
        for _ in 0..10 {
            g.mul_vec_into(&t1, &mut t2);
            for (a, b) in t1.iter_mut().zip(&t2) {
                *a = *b * sigma;
            }
        }
        for _ in 0..10 {
            g.adjoint_mul_vec_into(&t1, &mut t2);
            for (a, b) in t1.iter_mut().zip(&t2) {
                *a = *b * sigma;
            }
        }
        y.copy_from_slice(&t1);
    };
    let cfg = LanczosConfig { tol: T::lit(1e-12), max_basis: 60.min(n), max_restarts: 40 };
    let pair = largest_eigenpair(n, gram, None, &cfg)?;
    let mut b = pair.vector;
    if normalize(&mut b) == T::zero() {
        return Err(LabError::NoConvergence { op: "adversarial_rhs", detail: "zero singular vector".into() });
    }
    Ok(b)
}
