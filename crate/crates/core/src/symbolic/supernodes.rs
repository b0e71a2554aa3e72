use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use super::{EliminationTree, FactorStructure};
use crate::error::{Error, Result};
use crate::matrix::Permutation;

/// A run of consecutive factor columns stored as one dense panel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Supernode {
    /// Global column range.
    pub columns: Range<usize>,
    /// Sorted row index set, beginning with the supernode's own columns.
    pub rows: Vec<usize>,
}

impl Supernode {
    /// Number of columns.
    pub fn width(&self) -> usize {
        self.columns.len()
    }

    /// Number of rows in the panel, diagonal block included.
    pub fn length(&self) -> usize {
        self.rows.len()
    }

    /// Columns times length; the quantity compared against offload thresholds.
    pub fn size(&self) -> usize {
        self.width() * self.length()
    }

    /// Rows strictly below the diagonal block.
    pub fn below(&self) -> &[usize] {
        &self.rows[self.width()..]
    }

    /// Lower-trapezoid entry count (what the panel contributes to `nnz(L)`).
    pub fn storage(&self) -> usize {
        trapezoid(self.width(), self.length())
    }
}

pub(crate) fn trapezoid(width: usize, length: usize) -> usize {
    width * length - width * width.saturating_sub(1) / 2
}

/// Partition of the factor columns into supernodes plus the supernodal tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupernodePartition {
    n: usize,
    supernodes: Vec<Supernode>,
    snode: Vec<usize>,
    sparent: Vec<Option<usize>>,
}

impl SupernodePartition {
    /// Assembles a partition from supernodes listed in column order.
    ///
    /// The supernodal parent of each supernode is the owner of its first
    /// below-diagonal row.
    pub fn from_supernodes(n: usize, supernodes: Vec<Supernode>) -> Result<Self> {
        let mut snode = vec![usize::MAX; n];
        let mut next = 0;
        for (s, sn) in supernodes.iter().enumerate() {
            if sn.columns.start != next || sn.columns.is_empty() || sn.columns.end > n {
                return Err(Error::Validation("supernode column ranges must partition 0..n"));
            }
            if sn.rows.len() < sn.width()
                || sn.rows[..sn.width()].iter().copied().ne(sn.columns.clone())
                || sn.rows.windows(2).any(|w| w[0] >= w[1])
                || sn.rows.last().is_some_and(|&r| r >= n)
            {
                return Err(Error::Validation(
                    "supernode rows must be sorted and begin with its columns",
                ));
            }
            for c in sn.columns.clone() {
                snode[c] = s;
            }
            next = sn.columns.end;
        }
        if next != n {
            return Err(Error::Validation("supernode column ranges must partition 0..n"));
        }
        let sparent = supernodes
            .iter()
            .map(|sn| sn.below().first().map(|&r| snode[r]))
            .collect();
        Ok(Self {
            n,
            supernodes,
            snode,
            sparent,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of supernodes.
    pub fn len(&self) -> usize {
        self.supernodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supernodes.is_empty()
    }

    pub fn supernodes(&self) -> &[Supernode] {
        &self.supernodes
    }

    pub fn get(&self, s: usize) -> &Supernode {
        &self.supernodes[s]
    }

    /// Supernode owning column `j`.
    pub fn snode(&self, j: usize) -> usize {
        self.snode[j]
    }

    pub fn sparent(&self, s: usize) -> Option<usize> {
        self.sparent[s]
    }

    pub fn sparents(&self) -> &[Option<usize>] {
        &self.sparent
    }

    /// Whether `ancestor` lies strictly above `s` in the supernodal tree.
    pub fn is_proper_ancestor(&self, s: usize, ancestor: usize) -> bool {
        let mut cur = self.sparent[s];
        while let Some(p) = cur {
            if p == ancestor {
                return true;
            }
            if p > ancestor {
                return false;
            }
            cur = self.sparent[p];
        }
        false
    }

    /// Total lower-trapezoid storage over all panels (explicit zeros included).
    pub fn storage(&self) -> usize {
        self.supernodes.iter().map(Supernode::storage).sum()
    }

    /// The pattern the panels store, padding zeros included.
    pub fn padded_structure(&self) -> FactorStructure {
        let mut cols = Vec::with_capacity(self.n);
        for sn in &self.supernodes {
            for (k, _) in sn.columns.clone().enumerate() {
                cols.push(sn.rows[k..].to_vec());
            }
        }
        FactorStructure::from_columns(cols).expect("partition rows form a valid pattern")
    }

    /// Relabels every row through `perm`, which must map each supernode's
    /// columns onto a contiguous range in the same supernode order.
    pub(crate) fn relabeled(&self, perm: &Permutation) -> Result<Self> {
        let supernodes = self
            .supernodes
            .iter()
            .map(|sn| {
                let mut rows: Vec<usize> = sn.rows.iter().map(|&r| perm.apply(r)).collect();
                rows.sort_unstable();
                Supernode {
                    columns: sn.columns.clone(),
                    rows,
                }
            })
            .collect();
        Self::from_supernodes(self.n, supernodes)
    }
}

/// Fundamental supernode detection: column `j + 1` joins `j`'s supernode when
/// `parent(j) = j + 1` and `|L(:, j)| = |L(:, j + 1)| + 1`.
pub fn detect_supernodes(l: &FactorStructure, tree: &EliminationTree) -> SupernodePartition {
    let n = l.n();
    let mut supernodes = Vec::new();
    let mut start = 0;
    for j in 0..n {
        let extends = j + 1 < n && tree.parent(j) == Some(j + 1) && l.count(j) == l.count(j + 1) + 1;
        if !extends {
            supernodes.push(Supernode {
                columns: start..j + 1,
                rows: l.column(start).to_vec(),
            });
            start = j + 1;
        }
    }
    SupernodePartition::from_supernodes(n, supernodes)
        .expect("fundamental supernodes form a valid partition")
}
