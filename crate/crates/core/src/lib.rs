//! Numerical lab for GMRES on shifted Ginibre systems `(I + σG)x = b`:
//! residual curves and their large-N rate, pseudospectra, numerical ranges and
//! spectral-set constants of disks.
//!
//! The numerical code is generic over the real scalar ([`Real`], implemented for
//! `f32` and `f64`); the aliases below fix it to `f64` for everyday use.

pub mod crouzeix;
pub mod csv;
pub mod ensembles;
pub mod error;
pub mod gmres;
pub mod linalg;
pub mod optimize;
pub mod scalar;
pub mod spectral_sets;

pub use error::{LabError, Result};
pub use linalg::CMatrix;
pub use scalar::{Cx, Real};

/// Double-precision complex matrix.
pub type CMat = CMatrix<f64>;
/// Single-precision complex matrix.
pub type CMat32 = CMatrix<f32>;
/// Point of the complex plane.
pub type ComplexPoint = num_complex::Complex<f64>;
/// Double-precision shifted system.
pub type System = ensembles::ShiftedSystem<f64>;
