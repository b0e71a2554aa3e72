use alloc::vec;
use alloc::vec::Vec;

use super::EliminationTree;
use crate::error::{Error, Result};
use crate::matrix::{Permutation, SymmetricSparseMatrix};

/// Sparsity pattern of the Cholesky factor `L`, column by column.
///
/// Each column lists its row indices in increasing order, diagonal first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorStructure {
    colptr: Vec<usize>,
    rowidx: Vec<usize>,
}

impl FactorStructure {
    /// Builds a structure from per-column row lists, validating ordering.
    pub fn from_columns(columns: Vec<Vec<usize>>) -> Result<Self> {
        let n = columns.len();
        let mut colptr = Vec::with_capacity(n + 1);
        let mut rowidx = Vec::new();
        colptr.push(0);
        for (j, col) in columns.into_iter().enumerate() {
            if col.first() != Some(&j) {
                return Err(Error::Validation("factor column must start with its diagonal"));
            }
            if col.windows(2).any(|w| w[0] >= w[1]) || col.last().is_some_and(|&r| r >= n) {
                return Err(Error::Validation("factor rows must be increasing and in range"));
            }
            rowidx.extend(col);
            colptr.push(rowidx.len());
        }
        Ok(Self { colptr, rowidx })
    }

    /// Pattern of the lower triangle of `a` itself.
    pub fn of_matrix(a: &SymmetricSparseMatrix) -> Self {
        Self {
            colptr: a.colptr().to_vec(),
            rowidx: a.rowidx().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.colptr.len() - 1
    }

    /// Total stored entries, diagonal included.
    pub fn nnz(&self) -> usize {
        self.rowidx.len()
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.rowidx[self.colptr[j]..self.colptr[j + 1]]
    }

    pub fn count(&self, j: usize) -> usize {
        self.colptr[j + 1] - self.colptr[j]
    }

    /// Relabels rows and columns through `perm`.
    ///
    /// The permutation must keep every column's rows at or below it, which
    /// holds for any topological reordering of the elimination tree.
    pub fn permuted(&self, perm: &Permutation) -> Result<Self> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: perm.len(),
            });
        }
        let mut cols = vec![Vec::new(); n];
        for (j, col) in cols.iter_mut().enumerate() {
            let old = perm.apply_inverse(j);
            let mut rows: Vec<usize> = self.column(old).iter().map(|&r| perm.apply(r)).collect();
            rows.sort_unstable();
            *col = rows;
        }
        Self::from_columns(cols)
            .map_err(|_| Error::Validation("permutation does not preserve the lower-triangular pattern"))
    }
}

/// Row-merge symbolic factorization: column `j` of `L` is the pattern of
/// `A(:, j)` merged with the patterns of its elimination-tree children.
pub fn symbolic_factor(a: &SymmetricSparseMatrix, tree: &EliminationTree) -> FactorStructure {
    let n = a.n();
    let children = tree.children();
    let mut cols: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut mark = vec![usize::MAX; n];
    for j in 0..n {
        let mut rows = Vec::new();
        mark[j] = j;
        rows.push(j);
        for &i in a.col_rows(j) {
            if mark[i] != j {
                mark[i] = j;
                rows.push(i);
            }
        }
        for &c in &children[j] {
            for &i in &cols[c][1..] {
                if mark[i] != j {
                    mark[i] = j;
                    rows.push(i);
                }
            }
        }
        rows.sort_unstable();
        cols.push(rows);
    }
    FactorStructure::from_columns(cols).expect("row-merge produces a valid lower pattern")
}
