//! Dense column-major panels and the reference kernels used by both
//! factorization variants.
//!
//! All updates are subtractive (`C <- C - A Bᵀ`). Every output element is
//! formed as one dot product accumulated in ascending inner index and then
//! subtracted once, so an update computed into a zeroed buffer and added
//! later yields exactly the same bits as the in-place update.

use alloc::vec;
use alloc::vec::Vec;

/// Column-major dense block. Element `(i, k)` lives at `i + k * rows`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePanel {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DensePanel {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a panel from column-major data.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "panel data length");
        Self { rows, cols, data }
    }

    /// Builds a panel from row-major nested rows (handy in tests).
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut p = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (k, &v) in row.iter().enumerate() {
                p[(i, k)] = v;
            }
        }
        p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn as_ref(&self) -> MatRef<'_> {
        MatRef::new(&self.data, self.rows, self.cols, self.rows)
    }

    pub fn as_mut(&mut self) -> MatMut<'_> {
        MatMut::new(&mut self.data, self.rows, self.cols, self.rows)
    }

    /// View of rows `r0..r0 + nrows` and columns `c0..c0 + ncols`.
    pub fn sub(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> MatRef<'_> {
        self.as_ref().sub(r0, c0, nrows, ncols)
    }

    pub fn sub_mut(&mut self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> MatMut<'_> {
        self.as_mut().into_sub(r0, c0, nrows, ncols)
    }
}

impl core::ops::Index<(usize, usize)> for DensePanel {
    type Output = f64;
    fn index(&self, (i, k): (usize, usize)) -> &f64 {
        &self.data[i + k * self.rows]
    }
}

impl core::ops::IndexMut<(usize, usize)> for DensePanel {
    fn index_mut(&mut self, (i, k): (usize, usize)) -> &mut f64 {
        &mut self.data[i + k * self.rows]
    }
}

/// Borrowed strided column-major matrix.
#[derive(Debug, Clone, Copy)]
pub struct MatRef<'a> {
    data: &'a [f64],
    rows: usize,
    cols: usize,
    ld: usize,
}

impl<'a> MatRef<'a> {
    pub fn new(data: &'a [f64], rows: usize, cols: usize, ld: usize) -> Self {
        assert!(ld >= rows.max(1) || cols == 0);
        assert!(cols == 0 || rows == 0 || data.len() >= (cols - 1) * ld + rows);
        Self {
            data,
            rows,
            cols,
            ld,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.data[i + k * self.ld]
    }

    pub fn sub(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> MatRef<'a> {
        assert!(r0 + nrows <= self.rows && c0 + ncols <= self.cols, "sub-view out of bounds");
        let start = (r0 + c0 * self.ld).min(self.data.len());
        MatRef::new(&self.data[start..], nrows, ncols, self.ld)
    }

    /// Row-major copy, so each row is a contiguous slice.
    fn rows_contiguous(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.rows * self.cols];
        for k in 0..self.cols {
            for i in 0..self.rows {
                out[i * self.cols + k] = self.get(i, k);
            }
        }
        out
    }
}

/// Mutable strided column-major matrix.
#[derive(Debug)]
pub struct MatMut<'a> {
    data: &'a mut [f64],
    rows: usize,
    cols: usize,
    ld: usize,
}

impl<'a> MatMut<'a> {
    pub fn new(data: &'a mut [f64], rows: usize, cols: usize, ld: usize) -> Self {
        assert!(ld >= rows.max(1) || cols == 0);
        assert!(cols == 0 || rows == 0 || data.len() >= (cols - 1) * ld + rows);
        Self {
            data,
            rows,
            cols,
            ld,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.data[i + k * self.ld]
    }

    #[inline]
    pub fn set(&mut self, i: usize, k: usize, v: f64) {
        self.data[i + k * self.ld] = v;
    }

    pub fn rb(&self) -> MatRef<'_> {
        MatRef::new(self.data, self.rows, self.cols, self.ld)
    }

    pub fn rb_mut(&mut self) -> MatMut<'_> {
        MatMut::new(self.data, self.rows, self.cols, self.ld)
    }

    pub fn into_sub(self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> MatMut<'a> {
        assert!(r0 + nrows <= self.rows && c0 + ncols <= self.cols, "sub-view out of bounds");
        let start = (r0 + c0 * self.ld).min(self.data.len());
        MatMut::new(&mut self.data[start..], nrows, ncols, self.ld)
    }
}

/// Kernel failures, with 0-based local column indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelError {
    NotPositiveDefinite(usize),
    SingularBlock(usize),
    DimensionMismatch,
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

/// In-place lower Cholesky factor of a square block. The strict upper
/// triangle is neither read nor written.
pub fn potrf(mut a: MatMut<'_>) -> Result<(), KernelError> {
    let n = a.rows();
    if a.cols() != n {
        return Err(KernelError::DimensionMismatch);
    }
    // row-major lower triangle; row i holds columns 0..=i
    let mut w = vec![0.0; n * n];
    for k in 0..n {
        for i in k..n {
            w[i * n + k] = a.get(i, k);
        }
    }
    for j in 0..n {
        let (head, tail) = w.split_at_mut((j + 1) * n);
        let row_j = &mut head[j * n..];
        let d = row_j[j] - dot(&row_j[..j], &row_j[..j]);
        // also rejects NaN pivots
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(d > 0.0) {
            return Err(KernelError::NotPositiveDefinite(j));
        }
        let d = libm::sqrt(d);
        row_j[j] = d;
        let row_j = &head[j * n..j * n + j];
        for row_i in tail.chunks_exact_mut(n) {
            row_i[j] = (row_i[j] - dot(&row_i[..j], row_j)) / d;
        }
    }
    for k in 0..n {
        for i in k..n {
            a.set(i, k, w[i * n + k]);
        }
    }
    Ok(())
}

/// `b <- b * l⁻ᵀ` for lower-triangular `l`.
pub fn trsm(l: MatRef<'_>, mut b: MatMut<'_>) -> Result<(), KernelError> {
    let m = l.rows();
    if l.cols() != m || b.cols() != m {
        return Err(KernelError::DimensionMismatch);
    }
    if let Some(k) = (0..m).find(|&k| l.get(k, k) == 0.0) {
        return Err(KernelError::SingularBlock(k));
    }
    let lr = l.rows_contiguous();
    let mut br = b.rb().rows_contiguous();
    for row in br.chunks_exact_mut(m.max(1)).take(b.rows()) {
        for k in 0..m {
            let lk = &lr[k * m..k * m + k];
            row[k] = (row[k] - dot(&row[..k], lk)) / lr[k * m + k];
        }
    }
    for k in 0..m {
        for i in 0..b.rows() {
            b.set(i, k, br[i * m + k]);
        }
    }
    Ok(())
}

/// `c <- c - a aᵀ` on the lower triangle of square `c`.
pub fn syrk(mut c: MatMut<'_>, a: MatRef<'_>) -> Result<(), KernelError> {
    let n = c.rows();
    if c.cols() != n || a.rows() != n {
        return Err(KernelError::DimensionMismatch);
    }
    let k = a.cols();
    let ar = a.rows_contiguous();
    for j in 0..n {
        let aj = &ar[j * k..(j + 1) * k];
        for i in j..n {
            let s = dot(&ar[i * k..(i + 1) * k], aj);
            c.set(i, j, c.get(i, j) - s);
        }
    }
    Ok(())
}

/// Offset of `(i, j)`, `i >= j`, in a packed column-major lower triangle of order `t`.
#[inline]
pub fn packed_index(t: usize, i: usize, j: usize) -> usize {
    debug_assert!(i >= j && i < t);
    j * (2 * t - j + 1) / 2 + (i - j)
}

/// `c <- c - a aᵀ` where `c` is a packed column-major lower triangle of order `a.rows()`.
pub fn syrk_packed(c: &mut [f64], a: MatRef<'_>) -> Result<(), KernelError> {
    let t = a.rows();
    if c.len() < t * (t + 1) / 2 {
        return Err(KernelError::DimensionMismatch);
    }
    let k = a.cols();
    let ar = a.rows_contiguous();
    let mut idx = 0;
    for j in 0..t {
        let aj = &ar[j * k..(j + 1) * k];
        for i in j..t {
            let s = dot(&ar[i * k..(i + 1) * k], aj);
            c[idx] -= s;
            idx += 1;
        }
    }
    Ok(())
}

/// `c <- c - a bᵀ`.
pub fn gemm(mut c: MatMut<'_>, a: MatRef<'_>, b: MatRef<'_>) -> Result<(), KernelError> {
    if a.rows() != c.rows() || b.rows() != c.cols() || a.cols() != b.cols() {
        return Err(KernelError::DimensionMismatch);
    }
    let k = a.cols();
    let ar = a.rows_contiguous();
    let br = b.rows_contiguous();
    for j in 0..c.cols() {
        let bj = &br[j * k..(j + 1) * k];
        for i in 0..c.rows() {
            let s = dot(&ar[i * k..(i + 1) * k], bj);
            c.set(i, j, c.get(i, j) - s);
        }
    }
    Ok(())
}

/// Kernel call counts, by operation.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct KernelCounts {
    pub potrf: usize,
    pub trsm: usize,
    pub syrk: usize,
    pub gemm: usize,
}

impl KernelCounts {
    /// Update kernels only (syrk and gemm).
    pub fn updates(&self) -> usize {
        self.syrk + self.gemm
    }
}

/// Where dense kernels execute. Implementations must produce bit-identical
/// results for identical inputs.
pub trait KernelBackend {
    fn name(&self) -> &'static str;
    fn potrf(&mut self, a: MatMut<'_>) -> Result<(), KernelError>;
    fn trsm(&mut self, l: MatRef<'_>, b: MatMut<'_>) -> Result<(), KernelError>;
    fn syrk(&mut self, c: MatMut<'_>, a: MatRef<'_>) -> Result<(), KernelError>;
    fn syrk_packed(&mut self, c: &mut [f64], a: MatRef<'_>) -> Result<(), KernelError>;
    fn gemm(&mut self, c: MatMut<'_>, a: MatRef<'_>, b: MatRef<'_>) -> Result<(), KernelError>;
}

/// The host reference backend; counts calls.
#[derive(Debug, Default, Clone)]
pub struct HostBackend {
    pub counts: KernelCounts,
}

impl HostBackend {
    pub fn new() -> Self {
        Self::default()
    }
}

impl KernelBackend for HostBackend {
    fn name(&self) -> &'static str {
        "host"
    }

    fn potrf(&mut self, a: MatMut<'_>) -> Result<(), KernelError> {
        self.counts.potrf += 1;
        potrf(a)
    }

    fn trsm(&mut self, l: MatRef<'_>, b: MatMut<'_>) -> Result<(), KernelError> {
        self.counts.trsm += 1;
        trsm(l, b)
    }

    fn syrk(&mut self, c: MatMut<'_>, a: MatRef<'_>) -> Result<(), KernelError> {
        self.counts.syrk += 1;
        syrk(c, a)
    }

    fn syrk_packed(&mut self, c: &mut [f64], a: MatRef<'_>) -> Result<(), KernelError> {
        self.counts.syrk += 1;
        syrk_packed(c, a)
    }

    fn gemm(&mut self, c: MatMut<'_>, a: MatRef<'_>, b: MatRef<'_>) -> Result<(), KernelError> {
        self.counts.gemm += 1;
        gemm(c, a, b)
    }
}
