//! Finite Blaschke products `B(z) = e^{iθ} Π (z − α_i)/(1 − ᾱ_i z)` on scalars and
//! matrices, and their matrix norms after the affine map `φ(z) = (z − c)/r`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::{self, hessenberg, hessenberg_eigenvalues, largest_eigenpair, CMatrix, HessenbergLu, LanczosConfig};
use crate::scalar::{cone, czero, Cx, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct<T> {
    pub phase: T,
    pub roots: Vec<Cx<T>>,
}

impl<T: Real> BlaschkeProduct<T> {
    pub fn new(phase: T, roots: Vec<Cx<T>>) -> Result<Self> {
        if !phase.is_finite() {
            return Err(LabError::Parameter("Blaschke phase must be finite".into()));
        }
        if let Some(a) = roots.iter().find(|a| !(a.norm() <= T::one())) {
            return Err(LabError::Domain(format!("Blaschke root {a} lies outside the closed unit disk")));
        }
        Ok(Self { phase, roots })
    }

    /// `(z − α)/(1 − ᾱz)`.
    pub fn degree_one(alpha: Cx<T>) -> Result<Self> {
        Self::new(T::zero(), vec![alpha])
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    fn phase_factor(&self) -> Cx<T> {
        Cx::from_polar(T::one(), self.phase)
    }

    pub fn eval(&self, z: Cx<T>) -> Result<Cx<T>> {
        let mut acc = self.phase_factor();
        for &a in &self.roots {
            let den = cone::<T>() - a.conj() * z;
            if den.norm() < T::lit(1e-12) {
                return Err(LabError::Domain(format!("{z} is within 1e-12 of the pole 1/conj({a})")));
            }
            acc = acc * (z - a) / den;
        }
        Ok(acc)
    }

    /// `e^{iθ} Π (M − α_iI)(I − ᾱ_iM)⁻¹` for `M` with spectrum in the open unit disk.
    pub fn eval_matrix(&self, m: &CMatrix<T>) -> Result<CMatrix<T>> {
        let n = m.require_square("blaschke_eval_matrix")?;
        check_inside_unit_disk(&linalg::eigenvalues(m)?)?;
        let mut out = CMatrix::identity(n).scale(self.phase_factor());
        for &a in &self.roots {
            let num = m.add_identity(-a)?;
            let factor = linalg::shifted_solve(&m.scale(a.conj()), cone(), &num)?;
            out = out.matmul(&factor)?;
        }
        Ok(out)
    }
}

/// Spectrum must stay `1e-8` inside the unit circle.
fn check_inside_unit_disk<T: Real>(eigs: &[Cx<T>]) -> Result<()> {
    let rho = eigs.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if rho >= T::one() - T::lit(1e-8) {
        return Err(LabError::Domain(format!("spectral radius {rho} is not inside the unit disk")));
    }
    Ok(())
}

/// Norms `‖B((A − cI)/r)‖` for many products `B` and one matrix `A`.
///
/// `(A − cI)/r` is reduced to Hessenberg form `H` once; `‖B(H)‖` is then found
/// by Lanczos on `B(H)*B(H)`, each application costing `O(N²)` per root.
#[derive(Clone, Debug)]
pub struct BlaschkeNormEvaluator<T: Real> {
    h: CMatrix<T>,
    spectral_radius: T,
    pub tol: T,
}

impl<T: Real> BlaschkeNormEvaluator<T> {
    pub fn new(a: &CMatrix<T>, center: Cx<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(LabError::Parameter(format!("disk radius must be positive, got {radius}")));
        }
        let m = a.add_identity(-center)?.scale_real(T::one() / radius);
        let (h, _) = hessenberg(&m, false)?;
        let eigs = hessenberg_eigenvalues(h.clone())?;
        check_inside_unit_disk(&eigs)?;
        let spectral_radius = eigs.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        Ok(Self { h, spectral_radius, tol: T::lit(1e-10) })
    }

    pub fn order(&self) -> usize {
        self.h.rows()
    }

    /// Spectral radius of `(A − cI)/r`.
    pub fn spectral_radius(&self) -> T {
        self.spectral_radius
    }

    fn factors(&self, b: &BlaschkeProduct<T>) -> Result<Vec<(Cx<T>, HessenbergLu<T>)>> {
        b.roots
            .iter()
            .map(|&a| {
                let lu = HessenbergLu::factor_shifted(&self.h.scale(a.conj()), cone())?;
                if lu.is_singular() {
                    return Err(LabError::Singular { op: "blaschke_norm", sigma_min: 0.0 });
                }
                Ok((a, lu))
            })
            .collect()
    }

    /// `‖B(H)‖` and the top right singular vector, optionally warm-started.
    pub fn norm_with_vector(&self, b: &BlaschkeProduct<T>, start: Option<&[Cx<T>]>) -> Result<(T, Vec<Cx<T>>)> {
        let n = self.order();
        let factors = self.factors(b)?;
        let h = &self.h;
        let mut tmp = vec![czero(); n];
        let gram = |x: &[Cx<T>], y: &mut [Cx<T>]| {
            y.copy_from_slice(x);
            for (a, lu) in &factors {
                h.hessenberg_mul_vec_into(y, &mut tmp);
                for (t, yi) in tmp.iter_mut().zip(y.iter()) {
                    *t = *t - *a * *yi;
                }
                lu.solve_in_place(&mut tmp);
                y.copy_from_slice(&tmp);
            }
            for (a, lu) in factors.iter().rev() {
                lu.solve_adjoint_in_place(y);
                h.hessenberg_adjoint_mul_vec_into(y, &mut tmp);
                let ac = a.conj();
                for (t, yi) in tmp.iter_mut().zip(y.iter()) {
                    *t = *t - ac * *yi;
                }
                y.copy_from_slice(&tmp);
            }
        };
        let cfg = LanczosConfig { tol: self.tol, ..LanczosConfig::default() };
        let pair = largest_eigenpair(n, gram, start, &cfg)?;
        Ok((pair.value.max(T::zero()).sqrt(), pair.vector))
    }

    pub fn norm(&self, b: &BlaschkeProduct<T>) -> Result<T> {
        Ok(self.norm_with_vector(b, None)?.0)
    }
}

/// `‖B(A/scale_radius)‖ / ‖B‖_{unit circle}`; the denominator is 1.
pub fn crouzeix_ratio<T: Real>(a: &CMatrix<T>, b: &BlaschkeProduct<T>, scale_radius: T) -> Result<T> {
    BlaschkeNormEvaluator::new(a, czero(), scale_radius)?.norm(b)
}

/// `‖(B_α ∘ φ)(G)‖` for degree-one `B_α` with real root `α` and `φ(z) = z/scale_radius`.
pub fn alpha_sweep<T: Real>(g: &CMatrix<T>, alphas: &[T], scale_radius: T) -> Result<Vec<(T, T)>> {
    if let Some(a) = alphas.iter().find(|a| !(a.abs() < T::one())) {
        return Err(LabError::Domain(format!("sweep root {a} must satisfy |alpha| < 1")));
    }
    let eval = BlaschkeNormEvaluator::new(g, czero(), scale_radius)?;
    let mut start: Option<Vec<Cx<T>>> = None;
    let mut out = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let b = BlaschkeProduct::degree_one(Cx::new(alpha, T::zero()))?;
        let (norm, v) = eval.norm_with_vector(&b, start.as_deref())?;
        start = Some(v);
        out.push((alpha, norm));
    }
    Ok(out)
}
