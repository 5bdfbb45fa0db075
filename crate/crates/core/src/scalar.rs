//! Real scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the algorithms are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy conversion to `f64` for diagnostics and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Clamps a requested relative tolerance to something attainable in this precision.
    #[inline]
    fn attainable(tol: Self) -> Self {
        tol.max(Self::epsilon() * Self::lit(64.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`] base type.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn czero<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> Cx<T> {
    Complex::new(T::one(), T::zero())
}

/// Euclidean norm of a complex vector, scaled to avoid overflow.
pub fn vec_norm<T: Real>(x: &[Cx<T>]) -> T {
    let mut scale = T::zero();
    let mut ssq = T::one();
    for z in x {
        for part in [z.re, z.im] {
            if part != T::zero() {
                let a = part.abs();
                if scale < a {
                    let r = scale / a;
                    ssq = T::one() + ssq * r * r;
                    scale = a;
                } else {
                    let r = a / scale;
                    ssq = ssq + r * r;
                }
            }
        }
    }
    scale * ssq.sqrt()
}

/// Conjugate-linear inner product `x* y`.
#[inline]
pub fn dot_c<T: Real>(x: &[Cx<T>], y: &[Cx<T>]) -> Cx<T> {
    dot_lanes(x, y, |a| a.conj())
}

/// Bilinear product `Σ x_i y_i`.
#[inline]
pub fn dot_u<T: Real>(x: &[Cx<T>], y: &[Cx<T>]) -> Cx<T> {
    dot_lanes(x, y, |a| a)
}

// four independent partial sums so the adds do not form one serial chain
#[inline(always)]
fn dot_lanes<T: Real>(x: &[Cx<T>], y: &[Cx<T>], f: impl Fn(Cx<T>) -> Cx<T>) -> Cx<T> {
    let n = x.len().min(y.len());
    let (x, y) = (&x[..n], &y[..n]);
    let mut acc = [czero::<T>(); 4];
    let mut xc = x.chunks_exact(4);
    let mut yc = y.chunks_exact(4);
    for (a, b) in (&mut xc).zip(&mut yc) {
        for l in 0..4 {
            acc[l] = acc[l] + f(a[l]) * b[l];
        }
    }
    for (a, b) in xc.remainder().iter().zip(yc.remainder()) {
        acc[0] = acc[0] + f(*a) * b;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3])
}

/// `y += a * x`.
#[inline]
pub fn axpy<T: Real>(a: Cx<T>, x: &[Cx<T>], y: &mut [Cx<T>]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = *yi + a * xi;
    }
}

/// Scales `x` in place by `1/‖x‖` and returns the old norm.
pub fn normalize<T: Real>(x: &mut [Cx<T>]) -> T {
    let n = vec_norm(x);
    if n > T::zero() {
        let inv = T::one() / n;
        for z in x.iter_mut() {
            *z = *z * inv;
        }
    }
    n
}
