//! Lower-triangular compressed sparse-column storage for symmetric matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An `n x n` symmetric matrix stored as its lower triangle in CSC form.
///
/// Every column stores its diagonal first, followed by strictly increasing
/// row indices below it. The represented matrix is `lower + lowerᵀ - diag`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSparseMatrix {
    n: usize,
    colptr: Vec<usize>,
    rowidx: Vec<usize>,
    values: Vec<f64>,
}

impl SymmetricSparseMatrix {
    /// Builds a matrix from raw CSC arrays, checking every storage invariant.
    pub fn try_from_csc(
        n: usize,
        colptr: Vec<usize>,
        rowidx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if colptr.len() != n + 1 {
            return Err(Error::Dimension {
                expected: n + 1,
                found: colptr.len(),
            });
        }
        if colptr[0] != 0 || colptr[n] != rowidx.len() {
            return Err(Error::Validation("column pointers do not span the row indices"));
        }
        if values.len() != rowidx.len() {
            return Err(Error::Dimension {
                expected: rowidx.len(),
                found: values.len(),
            });
        }
        for j in 0..n {
            let (lo, hi) = (colptr[j], colptr[j + 1]);
            if lo > hi {
                return Err(Error::Validation("column pointers must be nondecreasing"));
            }
            if lo == hi || rowidx[lo] != j {
                return Err(Error::Validation("every column must store its diagonal first"));
            }
            if rowidx[lo..hi].windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Validation("row indices must be strictly increasing"));
            }
            if rowidx[hi - 1] >= n {
                return Err(Error::Validation("row index out of range"));
            }
        }
        Ok(Self {
            n,
            colptr,
            rowidx,
            values,
        })
    }

    /// Builds a matrix from `(row, col, value)` triplets (0-based).
    ///
    /// Entries above the diagonal are mirrored into the lower triangle,
    /// duplicates are summed, and missing diagonals become explicit zeros.
    pub fn from_triplets<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, j, v) in entries {
            if i >= n || j >= n {
                return Err(Error::Validation("triplet index out of range"));
            }
            let (r, c) = if i >= j { (i, j) } else { (j, i) };
            cols[c].push((r, v));
        }
        let mut colptr = Vec::with_capacity(n + 1);
        let mut rowidx = Vec::new();
        let mut values = Vec::new();
        colptr.push(0);
        for (j, col) in cols.iter_mut().enumerate() {
            col.push((j, 0.0));
            col.sort_by_key(|&(r, _)| r);
            for &(r, v) in col.iter() {
                if rowidx.len() > colptr[j] && *rowidx.last().unwrap() == r {
                    *values.last_mut().unwrap() += v;
                } else {
                    rowidx.push(r);
                    values.push(v);
                }
            }
            colptr.push(rowidx.len());
        }
        Ok(Self {
            n,
            colptr,
            rowidx,
            values,
        })
    }

    /// The `n x n` identity matrix.
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            colptr: (0..=n).collect(),
            rowidx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored (lower-triangle) entries.
    pub fn nnz(&self) -> usize {
        self.rowidx.len()
    }

    pub fn colptr(&self) -> &[usize] {
        &self.colptr
    }

    pub fn rowidx(&self) -> &[usize] {
        &self.rowidx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Row indices of column `j` (diagonal first).
    pub fn col_rows(&self, j: usize) -> &[usize] {
        &self.rowidx[self.colptr[j]..self.colptr[j + 1]]
    }

    /// Values of column `j`, aligned with [`col_rows`](Self::col_rows).
    pub fn col_values(&self, j: usize) -> &[f64] {
        &self.values[self.colptr[j]..self.colptr[j + 1]]
    }

    /// Iterates stored entries as `(row, col, value)`, column by column.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |j| {
            self.col_rows(j)
                .iter()
                .zip(self.col_values(j))
                .map(move |(&i, &v)| (i, j, v))
        })
    }

    /// Value at `(i, j)` of the full symmetric matrix.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        match self.col_rows(c).binary_search(&r) {
            Ok(p) => self.col_values(c)[p],
            Err(_) => 0.0,
        }
    }

    /// `y = A x` using the symmetric expansion of the stored triangle.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: x.len(),
            });
        }
        let mut y = vec![0.0; self.n];
        for (i, j, v) in self.iter() {
            y[i] += v * x[j];
            if i != j {
                y[j] += v * x[i];
            }
        }
        Ok(y)
    }

    /// Infinity norm (maximum absolute row sum) of the full matrix.
    pub fn norm_inf(&self) -> f64 {
        let mut sums = vec![0.0f64; self.n];
        for (i, j, v) in self.iter() {
            sums[i] += v.abs();
            if i != j {
                sums[j] += v.abs();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Frobenius norm of the full matrix.
    pub fn norm_fro(&self) -> f64 {
        let sq: f64 = self
            .iter()
            .map(|(i, j, v)| if i == j { v * v } else { 2.0 * v * v })
            .sum();
        libm::sqrt(sq)
    }

    /// Dense column-major copy of the full symmetric matrix.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut d = vec![0.0; n * n];
        for (i, j, v) in self.iter() {
            d[i + j * n] = v;
            d[j + i * n] = v;
        }
        d
    }
}

/// A bijection on `0..n`, stored as `old -> new` with its inverse cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    perm: Vec<usize>,
    inv: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            inv: (0..n).collect(),
        }
    }

    /// Builds a permutation from `perm[old] = new`.
    pub fn from_old_to_new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut inv = vec![usize::MAX; n];
        for (old, &new) in perm.iter().enumerate() {
            if new >= n || inv[new] != usize::MAX {
                return Err(Error::Validation("permutation is not a bijection"));
            }
            inv[new] = old;
        }
        Ok(Self { perm, inv })
    }

    /// Builds a permutation from an ordering, `order[new] = old`.
    pub fn from_new_to_old(order: Vec<usize>) -> Result<Self> {
        let p = Self::from_old_to_new(order)?;
        Ok(Self {
            perm: p.inv,
            inv: p.perm,
        })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// New position of original index `old`.
    pub fn apply(&self, old: usize) -> usize {
        self.perm[old]
    }

    /// Original index now living at position `new`.
    pub fn apply_inverse(&self, new: usize) -> usize {
        self.inv[new]
    }

    pub fn old_to_new(&self) -> &[usize] {
        &self.perm
    }

    pub fn new_to_old(&self) -> &[usize] {
        &self.inv
    }

    pub fn inverse(&self) -> Self {
        Self {
            perm: self.inv.clone(),
            inv: self.perm.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// The permutation applying `self` first and then `then`.
    pub fn then(&self, then: &Permutation) -> Result<Self> {
        if then.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: then.len(),
            });
        }
        Self::from_old_to_new(self.perm.iter().map(|&p| then.perm[p]).collect())
    }

    /// Moves `x[old]` to position `new`.
    pub fn permute_vec<T: Copy>(&self, x: &[T]) -> Vec<T> {
        self.inv.iter().map(|&old| x[old]).collect()
    }

    /// Inverse of [`permute_vec`](Self::permute_vec).
    pub fn unpermute_vec<T: Copy>(&self, x: &[T]) -> Vec<T> {
        self.perm.iter().map(|&new| x[new]).collect()
    }
}

/// Computes `P A Pᵀ`: entry `(i, j)` of `a` moves to `(perm(i), perm(j))`.
pub fn permute_symmetric(
    a: &SymmetricSparseMatrix,
    perm: &Permutation,
) -> Result<SymmetricSparseMatrix> {
    if perm.len() != a.n() {
        return Err(Error::Dimension {
            expected: a.n(),
            found: perm.len(),
        });
    }
    let n = a.n();
    let mut counts = vec![0usize; n + 1];
    for (i, j, _) in a.iter() {
        let c = perm.apply(i).min(perm.apply(j));
        counts[c + 1] += 1;
    }
    for j in 0..n {
        counts[j + 1] += counts[j];
    }
    let colptr = counts.clone();
    let mut next = counts;
    let mut rowidx = vec![0; a.nnz()];
    let mut values = vec![0.0; a.nnz()];
    for (i, j, v) in a.iter() {
        let (pi, pj) = (perm.apply(i), perm.apply(j));
        let (r, c) = if pi >= pj { (pi, pj) } else { (pj, pi) };
        rowidx[next[c]] = r;
        values[next[c]] = v;
        next[c] += 1;
    }
    for j in 0..n {
        let (lo, hi) = (colptr[j], colptr[j + 1]);
        let mut col: Vec<(usize, f64)> = rowidx[lo..hi]
            .iter()
            .copied()
            .zip(values[lo..hi].iter().copied())
            .collect();
        col.sort_unstable_by_key(|&(r, _)| r);
        for (k, (r, v)) in col.into_iter().enumerate() {
            rowidx[lo + k] = r;
            values[lo + k] = v;
        }
    }
    Ok(SymmetricSparseMatrix {
        n,
        colptr,
        rowidx,
        values,
    })
}
