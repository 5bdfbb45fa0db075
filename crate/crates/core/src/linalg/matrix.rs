//! Dense complex matrix with row-major storage.

use std::ops::{Index, IndexMut};

use crate::error::{LabError, Result};
use crate::scalar::{cone, czero, Cx, Real};

/// Dense complex matrix. Entries are stored row-major and are finite on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(LabError::dim("CMatrix::new", format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(LabError::dim(
                "CMatrix::new",
                format!("{} entries for shape {rows}x{cols}", data.len()),
            ));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LabError::NonFinite("CMatrix::new"));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[T]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| Cx::new(x, T::zero())).collect())
    }

    pub fn from_rows(rows: &[Vec<Cx<T>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LabError::dim("CMatrix::from_rows", "ragged rows"));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Unchecked constructor for internal kernels that already guarantee the shape.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| czero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { cone() } else { czero() })
    }

    pub fn from_diag(diag: &[Cx<T>]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { czero() })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Cx<T>] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Cx<T>] {
        &mut self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Cx<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [Cx<T>] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Cx<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub(crate) fn require_square(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(LabError::dim(op, format!("expected square matrix, got {}x{}", self.rows, self.cols)))
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|&z| z * s).collect())
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|&z| z * s).collect())
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(Cx<T>, Cx<T>) -> Cx<T>) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LabError::dim(
                op,
                format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols),
            ));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_raw(self.rows, self.cols, data))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "CMatrix::add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "CMatrix::sub", |a, b| a - b)
    }

    /// Returns `self + c·I` (square matrices only).
    pub fn add_identity(&self, c: Cx<T>) -> Result<Self> {
        let n = self.require_square("CMatrix::add_identity")?;
        let mut out = self.clone();
        for i in 0..n {
            out[(i, i)] = out[(i, i)] + c;
        }
        Ok(out)
    }

    /// Returns `z·I − self`.
    pub fn shifted(&self, z: Cx<T>) -> Result<Self> {
        let n = self.require_square("CMatrix::shifted")?;
        let mut out = self.scale_real(-T::one());
        for i in 0..n {
            out[(i, i)] = out[(i, i)] + z;
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(LabError::dim(
                "CMatrix::matmul",
                format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols),
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == czero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(out)
    }

    /// `y = self · x`.
    pub fn mul_vec_into(&self, x: &[Cx<T>], y: &mut [Cx<T>]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = crate::scalar::dot_u(self.row(i), x);
        }
    }

    pub fn mul_vec(&self, x: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        if x.len() != self.cols {
            return Err(LabError::dim("CMatrix::mul_vec", format!("{} columns vs vector of {}", self.cols, x.len())));
        }
        let mut y = vec![czero(); self.rows];
        self.mul_vec_into(x, &mut y);
        Ok(y)
    }

    /// `y = self* · x`.
    pub fn adjoint_mul_vec_into(&self, x: &[Cx<T>], y: &mut [Cx<T>]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(y.len(), self.cols);
        y.iter_mut().for_each(|v| *v = czero());
        for (i, &xi) in x.iter().enumerate() {
            for (yj, a) in y.iter_mut().zip(self.row(i)) {
                *yj = *yj + a.conj() * xi;
            }
        }
    }

    /// `y = self · x` for upper-Hessenberg `self` (entries below the subdiagonal
    /// are not read).
    pub fn hessenberg_mul_vec_into(&self, x: &[Cx<T>], y: &mut [Cx<T>]) {
        debug_assert!(self.rows == self.cols && x.len() == self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            let j0 = i.saturating_sub(1);
            *yi = crate::scalar::dot_u(&self.row(i)[j0..], &x[j0..]);
        }
    }

    /// `y = self* · x` for upper-Hessenberg `self`.
    pub fn hessenberg_adjoint_mul_vec_into(&self, x: &[Cx<T>], y: &mut [Cx<T>]) {
        debug_assert!(self.rows == self.cols && x.len() == self.rows);
        y.iter_mut().for_each(|v| *v = czero());
        for (i, &xi) in x.iter().enumerate() {
            let j0 = i.saturating_sub(1);
            for (yj, a) in y[j0..].iter_mut().zip(&self.row(i)[j0..]) {
                *yj = *yj + a.conj() * xi;
            }
        }
    }

    /// `y = self · x` and `z = self* · x` in one pass over the entries.
    pub fn mul_vec_both_into(&self, x: &[Cx<T>], y: &mut [Cx<T>], z: &mut [Cx<T>]) {
        debug_assert!(self.rows == self.cols && x.len() == self.rows);
        z.iter_mut().for_each(|v| *v = czero());
        for (i, yi) in y.iter_mut().enumerate() {
            let xi = x[i];
            let row = self.row(i);
            *yi = crate::scalar::dot_u(row, x);
            for (a, zj) in row.iter().zip(z.iter_mut()) {
                *zj = *zj + a.conj() * xi;
            }
        }
    }

    pub fn frobenius_norm(&self) -> T {
        crate::scalar::vec_norm(&self.data)
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> T {
        let mut sums = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            for (s, z) in sums.iter_mut().zip(self.row(i)) {
                *s = *s + z.norm();
            }
        }
        sums.into_iter().fold(T::zero(), T::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Cheap upper bound on the spectral norm, `sqrt(‖A‖₁‖A‖∞)`.
    pub fn norm_2_upper(&self) -> T {
        (self.norm_1() * self.norm_inf()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn trace(&self) -> Cx<T> {
        (0..self.rows.min(self.cols)).fold(czero(), |acc, i| acc + self[(i, i)])
    }

    /// Copies the block with rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Result<Self> {
        if r0 >= r1 || c0 >= c1 || r1 > self.rows || c1 > self.cols {
            return Err(LabError::dim("CMatrix::block", format!("[{r0}..{r1}, {c0}..{c1}] of {}x{}", self.rows, self.cols)));
        }
        Ok(Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)]))
    }

    /// Converts the entries to another precision.
    pub fn cast<U: Real>(&self) -> CMatrix<U> {
        CMatrix::from_raw(
            self.rows,
            self.cols,
            self.data.iter().map(|z| Cx::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()))).collect(),
        )
    }

    /// Little-endian layout: rows and cols as `u64`, then interleaved `f64` re/im pairs in row-major order.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 16 * self.data.len());
        out.extend_from_slice(&(self.rows as u64).to_le_bytes());
        out.extend_from_slice(&(self.cols as u64).to_le_bytes());
        for z in &self.data {
            out.extend_from_slice(&z.re.as_f64().to_le_bytes());
            out.extend_from_slice(&z.im.as_f64().to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let word = |k: usize| -> Result<[u8; 8]> {
            bytes
                .get(8 * k..8 * k + 8)
                .map(|s| s.try_into().expect("slice of length 8"))
                .ok_or_else(|| LabError::Parameter("truncated matrix buffer".into()))
        };
        let rows = u64::from_le_bytes(word(0)?) as usize;
        let cols = u64::from_le_bytes(word(1)?) as usize;
        let count = rows
            .checked_mul(cols)
            .ok_or_else(|| LabError::Parameter("matrix dimensions overflow".into()))?;
        if bytes.len() != 16 + 16 * count {
            return Err(LabError::Parameter(format!(
                "buffer of {} bytes does not match {rows}x{cols} matrix",
                bytes.len()
            )));
        }
        let mut data = Vec::with_capacity(count);
        for k in 0..count {
            let re = f64::from_le_bytes(word(2 + 2 * k)?);
            let im = f64::from_le_bytes(word(3 + 2 * k)?);
            data.push(Cx::new(T::lit(re), T::lit(im)));
        }
        Self::new(rows, cols, data)
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = Cx<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}
