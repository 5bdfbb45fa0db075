//! Edge functions of the limiting spectrum of `(zI − G)*(zI − G)`, resolvent norm
//! probes, pseudospectral radii, Hausdorff distance to a disk and the Lipschitz
//! constants of `z ↦ ‖R(z, G)‖` on an annulus.
//!
//! With `d = 1 − |z|²` the support edges are
//! `(8d² ∓ (9 − 8d)^{3/2} − 36d + 27) / (8(1 − d))`. The lower edge suffers
//! cancellation close to `|z| = 1`, so it is evaluated in the equivalent form
//! `−8d³ / (8d² − 36d + 27 + (9 − 8d)^{3/2})`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::csv::CsvTable;
use crate::error::{LabError, Result};
use crate::linalg::{self, hessenberg, CMatrix, HessenbergLu};
use crate::scalar::{Cx, Real};

fn check_radius<T: Real>(abs_z: T, op: &str) -> Result<T> {
    if abs_z.is_nan() || abs_z < T::one() {
        return Err(LabError::Domain(format!("{op} is defined for |z| >= 1, got {abs_z}")));
    }
    Ok(T::one() - abs_z * abs_z)
}

/// Lower support edge `𝔢(|z|)`, increasing on `[1, ∞)` with `𝔢(1) = 0`.
pub fn edge_e<T: Real>(abs_z: T) -> Result<T> {
    let d = check_radius(abs_z, "edge_e")?;
    if abs_z == T::one() {
        return Ok(T::zero());
    }
    if abs_z.is_infinite() {
        return Ok(T::infinity());
    }
    let q = T::lit(9.0) - T::lit(8.0) * d;
    let plus = T::lit(8.0) * d * d - T::lit(36.0) * d + T::lit(27.0) + q * q.sqrt();
    Ok(-T::lit(8.0) * d * d * d / plus)
}

/// Upper support edge `𝔣(|z|)`.
pub fn edge_f<T: Real>(abs_z: T) -> Result<T> {
    let d = check_radius(abs_z, "edge_f")?;
    let q = T::lit(9.0) - T::lit(8.0) * d;
    Ok((T::lit(8.0) * d * d - T::lit(36.0) * d + T::lit(27.0) + q * q.sqrt()) / (T::lit(8.0) * (T::one() - d)))
}

/// The `r ≥ 1` with `𝔢(r) = y`, by bracket doubling and bisection.
pub fn edge_e_inv<T: Real>(y: T) -> Result<T> {
    if y.is_nan() || y < T::zero() {
        return Err(LabError::Domain(format!("edge_e_inv needs y >= 0, got {y}")));
    }
    if y == T::zero() {
        return Ok(T::one());
    }
    if y.is_infinite() {
        return Ok(T::infinity());
    }
    let mut lo = T::one();
    let mut hi = T::lit(2.0);
    while edge_e(hi)? < y {
        lo = hi;
        hi = hi * T::lit(2.0);
    }
    for _ in 0..200 {
        let mid = lo + (hi - lo) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if edge_e(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (elo, ehi) = (edge_e(lo)?, edge_e(hi)?);
    Ok(if (elo - y).abs() <= (ehi - y).abs() { lo } else { hi })
}

/// `𝔢` and `𝔣` at one radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeProfile<T> {
    pub abs_z: T,
    pub d: T,
    pub e_val: T,
    pub f_val: T,
}

impl<T: Real> EdgeProfile<T> {
    pub fn at(abs_z: T) -> Result<Self> {
        Ok(Self { abs_z, d: T::one() - abs_z * abs_z, e_val: edge_e(abs_z)?, f_val: edge_f(abs_z)? })
    }

    /// Radius of the pseudospectrum at resolvent-norm level `norm`, i.e. `𝔢^{-1}(norm^{-2})`.
    pub fn radius_for_resolvent_norm(norm: T) -> Result<T> {
        if !(norm > T::zero()) {
            return Err(LabError::Domain(format!("resolvent norm level must be positive, got {norm}")));
        }
        edge_e_inv(T::one() / (norm * norm))
    }

    /// Limiting resolvent norm `𝔢(|z|)^{-1/2}` at this radius.
    pub fn resolvent_norm(&self) -> T {
        T::one() / self.e_val.sqrt()
    }
}

/// CSV `abs_z,e_val,f_val` for a list of radii.
pub fn edge_profile_table<T: Real>(radii: &[T]) -> Result<CsvTable> {
    let mut t = CsvTable::new(&["abs_z", "e_val", "f_val"]);
    for &r in radii {
        let p = EdgeProfile::at(r)?;
        t.push(vec![p.abs_z.as_f64(), p.e_val.as_f64(), p.f_val.as_f64()]);
    }
    Ok(t)
}

/// `‖R(z, A)‖`, infinite with `singular` set when `zI − A` is numerically singular.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolventNorm<T> {
    pub value: T,
    pub singular: bool,
}

impl<T: Real> ResolventNorm<T> {
    fn from_sigma_min(smin: T, scale: T) -> Self {
        if smin <= T::lit(1e-14) * scale || smin == T::zero() {
            Self { value: T::infinity(), singular: true }
        } else {
            Self { value: T::one() / smin, singular: false }
        }
    }
}

/// `1/σ_min(zI − A)`.
pub fn resolvent_norm<T: Real>(a: &CMatrix<T>, z: Cx<T>) -> Result<ResolventNorm<T>> {
    let m = a.shifted(z)?;
    let smin = linalg::sigma_min(&m, T::lit(linalg::DEFAULT_TOL))?;
    Ok(ResolventNorm::from_sigma_min(smin, m.norm_2_upper()))
}

/// Repeated resolvent norms of one matrix. The matrix is reduced to Hessenberg
/// form once; each point then costs an `O(N²)` factorization and a few dozen
/// `O(N²)` solves (inverse Lanczos on `(M*M)⁻¹`).
#[derive(Clone, Debug)]
pub struct ResolventProbe<T: Real> {
    h: CMatrix<T>,
    tol: T,
    scale: T,
}

impl<T: Real> ResolventProbe<T> {
    pub fn new(a: &CMatrix<T>, tol: T) -> Result<Self> {
        let (h, _) = hessenberg(a, false)?;
        let scale = h.norm_2_upper();
        Ok(Self { h, tol, scale })
    }

    pub fn order(&self) -> usize {
        self.h.rows()
    }

    pub fn hessenberg(&self) -> &CMatrix<T> {
        &self.h
    }

    /// `σ_min(zI − A)`.
    pub fn sigma_min(&self, z: Cx<T>) -> Result<T> {
        let lu = HessenbergLu::factor_shifted(&self.h, z)?;
        if lu.is_singular() {
            return Ok(T::zero());
        }
        if self.order() <= 8 {
            return linalg::sigma_min_dense(&self.h.shifted(z)?);
        }
        linalg::sigma_min_from_solves(self.order(), |x| lu.solve_in_place(x), |x| lu.solve_adjoint_in_place(x), self.tol)
    }

    pub fn norm(&self, z: Cx<T>) -> Result<ResolventNorm<T>> {
        let smin = self.sigma_min(z)?;
        Ok(ResolventNorm::from_sigma_min(smin, self.scale + z.norm()))
    }
}

/// Resolvent norms on a radius × angle grid inside `r_inner ≤ |z| ≤ r_outer`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnulusProbe {
    pub r_inner: f64,
    pub r_outer: f64,
    pub samples: Vec<(Cx<f64>, f64)>,
    pub min_norm: f64,
    pub max_norm: f64,
    pub any_singular: bool,
}

impl AnnulusProbe {
    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["re_z", "im_z", "abs_z", "resolvent_norm"]);
        for (z, v) in &self.samples {
            t.push(vec![z.re, z.im, z.norm(), *v]);
        }
        t
    }

    /// Norms at the samples whose modulus is `r` (to rounding).
    pub fn norms_at_radius(&self, r: f64) -> Vec<f64> {
        self.samples.iter().filter(|(z, _)| (z.norm() - r).abs() <= 1e-12 * r).map(|(_, v)| *v).collect()
    }
}

/// Uniform radii in `[r_inner, r_outer]` (just `r_inner` when `n_radial = 1`).
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn annulus_probe(g: &CMatrix<f64>, r_inner: f64, r_outer: f64, n_radial: usize, n_angular: usize) -> Result<AnnulusProbe> {
    if !(r_inner >= 1.0 && r_outer >= r_inner && r_outer.is_finite()) {
        return Err(LabError::Parameter(format!("annulus needs 1 <= r_inner <= r_outer, got [{r_inner}, {r_outer}]")));
    }
    if n_radial == 0 || n_angular == 0 {
        return Err(LabError::Parameter("annulus grid must be non-empty".into()));
    }
    let probe = ResolventProbe::new(g, linalg::DEFAULT_TOL)?;
    let mut points = Vec::with_capacity(n_radial * n_angular);
    for r in linspace(r_inner, r_outer, n_radial) {
        for j in 0..n_angular {
            let t = std::f64::consts::TAU * j as f64 / n_angular as f64;
            points.push(Cx::from_polar(r, t));
        }
    }
    let norms: Vec<ResolventNorm<f64>> = points.par_iter().map(|&z| probe.norm(z)).collect::<Result<_>>()?;
    let samples: Vec<(Cx<f64>, f64)> = points.into_iter().zip(norms.iter().map(|n| n.value)).collect();
    let min_norm = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let max_norm = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(AnnulusProbe {
        r_inner,
        r_outer,
        samples,
        min_norm,
        max_norm,
        any_singular: norms.iter().any(|n| n.singular),
    })
}

/// Limiting radius of the pseudospectrum `{z : ‖R(z, G)‖ ≥ 1/ε}`, namely `𝔢^{-1}(ε²)`.
pub fn pseudospectrum_radius<T: Real>(epsilon_level: T) -> Result<T> {
    if !(epsilon_level > T::zero()) {
        return Err(LabError::Domain(format!("pseudospectrum level must be positive, got {epsilon_level}")));
    }
    edge_e_inv(epsilon_level * epsilon_level)
}

fn cross<T: Real>(o: Cx<T>, a: Cx<T>, b: Cx<T>) -> T {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull in counter-clockwise order (monotone chain), collinear points dropped.
pub fn convex_hull<T: Real>(points: &[Cx<T>]) -> Vec<Cx<T>> {
    let mut p: Vec<Cx<T>> = points.to_vec();
    p.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut hull: Vec<Cx<T>> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Cx<T>>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= T::zero() {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull
}

fn segment_distance<T: Real>(a: Cx<T>, b: Cx<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == T::zero() {
        return a.norm();
    }
    let t = (-(a.re * ab.re + a.im * ab.im) / len2).max(T::zero()).min(T::one());
    (a + ab * t).norm()
}

/// Hausdorff distance between a set and the closed disk `D(0, r)`.
///
/// With `convex` set, the set is the filled convex hull of `points` and the exact
/// distance `sup_θ |h(θ) − r|` over support functions is returned. Otherwise the
/// points are taken as samples of a closed curve around the origin and the radial
/// deviation `max |‖x‖ − r|` is returned.
pub fn hausdorff_to_disk<T: Real>(points: &[Cx<T>], convex: bool, r: T) -> Result<T> {
    if points.is_empty() {
        return Err(LabError::Parameter("hausdorff_to_disk needs at least one point".into()));
    }
    if !(r >= T::zero()) {
        return Err(LabError::Parameter(format!("disk radius must be non-negative, got {r}")));
    }
    if !convex {
        return Ok(points.iter().map(|z| (z.norm() - r).abs()).fold(T::zero(), T::max));
    }
    let hull = convex_hull(points);
    let max_abs = hull.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let m = hull.len();
    let min_support = if m >= 3 && (0..m).all(|i| cross(hull[i], hull[(i + 1) % m], Cx::new(T::zero(), T::zero())) >= T::zero()) {
        // origin inside: smallest support value is the distance to the nearest edge line
        (0..m)
            .map(|i| {
                let (a, b) = (hull[i], hull[(i + 1) % m]);
                let e = b - a;
                // outward normal of a counter-clockwise edge is (e.im, −e.re)/|e|
                (a.re * e.im - a.im * e.re) / e.norm()
            })
            .fold(T::infinity(), T::min)
    } else {
        let dist = match m {
            1 => hull[0].norm(),
            _ => (0..m).map(|i| segment_distance(hull[i], hull[(i + 1) % m])).fold(T::infinity(), T::min),
        };
        -dist
    };
    Ok((max_abs - r).max(r - min_support))
}

/// Step `h = min(1, 1/(4e²(f+g+1)))` and Lipschitz constant `L = 3e³(f+g+1)` for
/// `z ↦ ‖R(z, G)‖` on an annulus where `‖R‖ ≤ e`, `‖G‖ ≤ f` and `|z| ≤ g`.
pub fn lipschitz_constants<T: Real>(e: T, f: T, g: T) -> Result<(T, T)> {
    if !(e > T::zero()) || !(f >= T::zero()) || !(g >= T::zero()) || !(e + f + g).is_finite() {
        return Err(LabError::Parameter(format!("lipschitz_constants needs e > 0, f, g >= 0; got ({e}, {f}, {g})")));
    }
    let s = f + g + T::one();
    let h = T::one().min(T::one() / (T::lit(4.0) * e * e * s));
    Ok((h, T::lit(3.0) * e * e * e * s))
}
