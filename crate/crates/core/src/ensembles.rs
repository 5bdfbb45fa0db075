//! Seeded sampling of Ginibre matrices, the χ/Gaussian Hessenberg model and
//! shifted systems `(I + σG)x = b`.
//!
//! Every draw comes from a ChaCha8 generator seeded with the 64-bit [`Seed`]
//! and a fixed stream id: [`STREAM_MATRIX`] for matrices, [`STREAM_RHS`] for
//! right-hand sides and [`STREAM_MISC`] for anything else (start points,
//! unitaries). Independent trials use [`Seed::derive`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::gmres::adversarial_rhs;
use crate::linalg::{qr_unitary, CMatrix};
use crate::scalar::{czero, Cx, Real};

pub const STREAM_MATRIX: u64 = 0;
pub const STREAM_RHS: u64 = 1;
pub const STREAM_MISC: u64 = 2;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    /// Sub-seed for trial `index`; distinct indices give unrelated seeds.
    pub fn derive(self, index: u64) -> Seed {
        Seed(splitmix64(self.0 ^ splitmix64(index.wrapping_add(0xA076_1D64_78BD_642F))))
    }

    pub fn rng(self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// `x + iy` with `x, y` independent standard normal.
pub fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Cx<T> {
    let x: f64 = StandardNormal.sample(rng);
    let y: f64 = StandardNormal.sample(rng);
    Cx::new(T::lit(x), T::lit(y))
}

fn require_positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(LabError::Parameter(format!("{what}: order must be at least 1")))
    } else {
        Ok(())
    }
}

/// Ginibre matrix with entries `(x + iy)/√(2n)`, so `E|g_ij|² = 1/n`.
pub fn sample_ginibre<T: Real>(n: usize, seed: Seed) -> Result<CMatrix<T>> {
    require_positive(n, "sample_ginibre")?;
    let mut rng = seed.rng(STREAM_MATRIX);
    ginibre_from(n, &mut rng)
}

fn ginibre_from<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CMatrix<T>> {
    let scale = T::one() / T::lit(2.0 * n as f64).sqrt();
    Ok(CMatrix::from_fn(n, n, |_, _| complex_normal::<T, R>(rng) * scale))
}

/// Upper-Hessenberg matrix with the same GMRES statistics as a Ginibre matrix
/// started from `e₁`: complex normal (variance 2) on and above the diagonal,
/// `χ(2(n−1−j))` at `(j+1, j)`, everything divided by `√(2n)`.
pub fn sample_hessenberg_model<T: Real>(n: usize, seed: Seed) -> Result<CMatrix<T>> {
    require_positive(n, "sample_hessenberg_model")?;
    let mut rng = seed.rng(STREAM_MATRIX);
    let scale = 1.0 / (2.0 * n as f64).sqrt();
    let mut h = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z: Cx<f64> = complex_normal(&mut rng);
            h[(i, j)] = Cx::new(T::lit(z.re * scale), T::lit(z.im * scale));
        }
    }
    for j in 0..n.saturating_sub(1) {
        let m = (n - 1 - j) as f64;
        let gamma = Gamma::new(m, 2.0).map_err(|e| LabError::Parameter(e.to_string()))?;
        let chi = gamma.sample(&mut rng).sqrt();
        h[(j + 1, j)] = Cx::new(T::lit(chi * scale), T::zero());
    }
    Ok(h)
}

/// Haar-distributed unitary matrix (QR of a Ginibre sample with phase correction).
pub fn sample_haar_unitary<T: Real>(n: usize, seed: Seed) -> Result<CMatrix<T>> {
    require_positive(n, "sample_haar_unitary")?;
    let mut rng = seed.rng(STREAM_MISC);
    let g: CMatrix<T> = ginibre_from(n, &mut rng)?;
    qr_unitary(&g)
}

/// Standard complex Gaussian vector: entries `(x + iy)/√2`.
pub fn sample_complex_gaussian_vector<T: Real>(n: usize, seed: Seed, stream: u64) -> Vec<Cx<T>> {
    let mut rng = seed.rng(stream);
    let s = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    (0..n).map(|_| complex_normal::<T, _>(&mut rng) * s).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RhsMode {
    Independent,
    Adversarial,
}

impl std::str::FromStr for RhsMode {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "independent" => Ok(RhsMode::Independent),
            "adversarial" => Ok(RhsMode::Adversarial),
            other => Err(LabError::Parameter(format!("unknown right-hand side mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for RhsMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RhsMode::Independent => "independent",
            RhsMode::Adversarial => "adversarial",
        })
    }
}

/// The linear system `(I + σG)x = b`.
#[derive(Clone, Debug)]
pub struct ShiftedSystem<T: Real> {
    pub sigma: T,
    pub g: CMatrix<T>,
    pub b: Vec<Cx<T>>,
    pub b_mode: RhsMode,
}

pub(crate) fn check_sigma<T: Real>(sigma: T) -> Result<()> {
    if sigma > T::zero() && sigma < T::one() {
        Ok(())
    } else {
        Err(LabError::Parameter(format!("sigma must lie in (0, 1), got {sigma}")))
    }
}

impl<T: Real> ShiftedSystem<T> {
    /// Builds a system from explicit parts; `b` must be nonzero and match `G`.
    pub fn new(sigma: T, g: CMatrix<T>, b: Vec<Cx<T>>, b_mode: RhsMode) -> Result<Self> {
        check_sigma(sigma)?;
        let n = g.require_square("ShiftedSystem")?;
        if b.len() != n {
            return Err(LabError::dim("ShiftedSystem", format!("rhs length {} for order {n}", b.len())));
        }
        if crate::scalar::vec_norm(&b) == T::zero() {
            return Err(LabError::Parameter("right-hand side must be nonzero".into()));
        }
        Ok(Self { sigma, g, b, b_mode })
    }

    pub fn n(&self) -> usize {
        self.g.rows()
    }

    /// The matrix `I + σG`.
    pub fn matrix(&self) -> CMatrix<T> {
        let mut a = self.g.scale_real(self.sigma);
        for i in 0..self.n() {
            a[(i, i)] = a[(i, i)] + Cx::new(T::one(), T::zero());
        }
        a
    }
}

/// Samples `G` from the matrix stream of `seed` and `b` either from the
/// independent rhs stream or as the adversarial vector for `(z − 1)^10`.
pub fn make_system<T: Real>(n: usize, sigma: T, b_mode: RhsMode, seed: Seed) -> Result<ShiftedSystem<T>> {
    check_sigma(sigma)?;
    let g = sample_ginibre(n, seed)?;
    let b = match b_mode {
        RhsMode::Independent => {
            let mut b = sample_complex_gaussian_vector(n, seed, STREAM_RHS);
            if b.iter().all(|z| *z == czero()) {
                b[0] = Cx::new(T::one(), T::zero());
            }
            b
        }
        RhsMode::Adversarial => adversarial_rhs(&g, sigma)?,
    };
    ShiftedSystem::new(sigma, g, b, b_mode)
}
