use alloc::vec;
use alloc::vec::Vec;

use super::FactorStructure;
use crate::matrix::SymmetricSparseMatrix;

/// Elimination forest: `parent(j)` is the smallest row index below the
/// diagonal in column `j` of the factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationTree {
    parent: Vec<Option<usize>>,
}

impl EliminationTree {
    pub fn from_parents(parent: Vec<Option<usize>>) -> Self {
        debug_assert!(parent
            .iter()
            .enumerate()
            .all(|(j, p)| p.is_none_or(|p| p > j)));
        Self { parent }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, j: usize) -> Option<usize> {
        self.parent[j]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Children lists, each in ascending order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.parent.len()];
        for (j, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                ch[p].push(j);
            }
        }
        ch
    }
}

/// Source for [`build_etree`].
pub trait EtreeSource {
    fn etree(&self) -> EliminationTree;
}

impl EtreeSource for FactorStructure {
    fn etree(&self) -> EliminationTree {
        EliminationTree {
            parent: (0..self.n()).map(|j| self.column(j).get(1).copied()).collect(),
        }
    }
}

impl EtreeSource for SymmetricSparseMatrix {
    // Liu's algorithm with path compression through a virtual ancestor array.
    fn etree(&self) -> EliminationTree {
        let n = self.n();
        // row k of the lower triangle lists the i < k with a(k, i) != 0
        let mut row_start = vec![0usize; n + 1];
        for (i, j, _) in self.iter() {
            if i != j {
                row_start[i + 1] += 1;
            }
        }
        for k in 0..n {
            row_start[k + 1] += row_start[k];
        }
        let mut fill = row_start.clone();
        let mut row_cols = vec![0usize; row_start[n]];
        for (i, j, _) in self.iter() {
            if i != j {
                row_cols[fill[i]] = j;
                fill[i] += 1;
            }
        }
        let mut parent = vec![None; n];
        let mut ancestor: Vec<Option<usize>> = vec![None; n];
        for k in 0..n {
            for &start in &row_cols[row_start[k]..row_start[k + 1]] {
                let mut i = start;
                loop {
                    let next = ancestor[i];
                    ancestor[i] = Some(k);
                    match next {
                        None => {
                            parent[i] = Some(k);
                            break;
                        }
                        Some(a) if a == k => break,
                        Some(a) => i = a,
                    }
                }
            }
        }
        EliminationTree { parent }
    }
}

/// Elimination tree of a factor pattern or, via Liu's construction, of `A`.
pub fn build_etree<S: EtreeSource + ?Sized>(source: &S) -> EliminationTree {
    source.etree()
}
