//! The full symbolic pipeline: fill-reducing ordering, elimination tree,
//! factor structure, fundamental supernodes, merging, partition refinement
//! and RLB row blocks, composed into a single permutation.

use alloc::vec::Vec;

use crate::dense::KernelBackend;
use crate::error::{Error, Result};
use crate::matrix::{permute_symmetric, Permutation, SymmetricSparseMatrix};
use crate::numeric::{factor_rl, factor_rlb, workspace_capacity, FactorPanels};
use crate::offload::{run_offloaded, OffloadConfig, OffloadRun};
use crate::ordering::minimum_degree;
use crate::solve::solve;
use crate::symbolic::{
    block_structure, build_etree, detect_supernodes, merge_supernodes, refine_partition,
    symbolic_factor, BlockStructure, SupernodePartition,
};

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    /// Fill-reducing ordering (old to new). Minimum degree when `None`.
    pub ordering: Option<Permutation>,
    /// Merge budget as a fraction of `nnz(L)`; `0` disables merging.
    pub merge_cap: f64,
    /// Reorder columns inside supernodes to reduce RLB block counts.
    pub refine: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            ordering: None,
            merge_cap: 0.25,
            refine: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AnalysisStats {
    pub n: usize,
    /// Stored lower-triangle entries of the input.
    pub nnz_a: usize,
    /// `nnz(L)` under the fill-reducing ordering.
    pub nnz_l: usize,
    pub fundamental_supernodes: usize,
    pub supernodes: usize,
    /// Panel storage after merging, explicit zeros included.
    pub storage: usize,
    /// `storage / nnz_l - 1`.
    pub storage_growth: f64,
    pub blocks_before_refine: usize,
    pub blocks: usize,
    /// Packed entries of the largest RL update matrix.
    pub workspace_capacity: usize,
}

/// Everything the numeric phase needs, in the final index space.
#[derive(Debug, Clone)]
pub struct Analysis {
    /// Original index to factor index.
    pub permutation: Permutation,
    /// The input matrix under `permutation`.
    pub matrix: SymmetricSparseMatrix,
    pub partition: SupernodePartition,
    pub blocks: BlockStructure,
    pub stats: AnalysisStats,
}

impl Analysis {
    pub fn new(a: &SymmetricSparseMatrix, options: &AnalysisOptions) -> Result<Self> {
        let n = a.n();
        let ordering = match &options.ordering {
            Some(p) if p.len() != n => {
                return Err(Error::Dimension {
                    expected: n,
                    found: p.len(),
                })
            }
            Some(p) => p.clone(),
            None => minimum_degree(a),
        };
        let ordered = permute_symmetric(a, &ordering)?;
        let tree = build_etree(&ordered);
        let factor = symbolic_factor(&ordered, &tree);
        let fundamental = detect_supernodes(&factor, &tree);

        let (mut partition, mut permutation) = if options.merge_cap > 0.0 {
            let merged = merge_supernodes(&fundamental, &factor, options.merge_cap);
            (merged.partition, ordering.then(&merged.permutation)?)
        } else {
            (fundamental.clone(), ordering)
        };
        let blocks_before_refine = block_structure(&partition).total_blocks();
        if options.refine {
            let refined = refine_partition(&partition, &partition.padded_structure())?;
            permutation = permutation.then(&refined.permutation)?;
            partition = refined.partition;
        }
        let blocks = block_structure(&partition);
        let matrix = permute_symmetric(a, &permutation)?;
        let storage = partition.storage();
        let stats = AnalysisStats {
            n,
            nnz_a: a.nnz(),
            nnz_l: factor.nnz(),
            fundamental_supernodes: fundamental.len(),
            supernodes: partition.len(),
            storage,
            storage_growth: if factor.nnz() == 0 {
                0.0
            } else {
                storage as f64 / factor.nnz() as f64 - 1.0
            },
            blocks_before_refine,
            blocks: blocks.total_blocks(),
            workspace_capacity: workspace_capacity(&partition),
        };
        Ok(Self {
            permutation,
            matrix,
            partition,
            blocks,
            stats,
        })
    }

    /// Fills in the original column of a pivot failure.
    pub fn locate(&self, err: Error) -> Error {
        match err {
            Error::NotPositiveDefinite { column, .. } => Error::NotPositiveDefinite {
                column,
                original: Some(self.permutation.apply_inverse(column)),
            },
            other => other,
        }
    }

    pub fn factor_rl<B: KernelBackend + ?Sized>(&self, backend: &mut B) -> Result<FactorPanels> {
        factor_rl(&self.matrix, &self.partition, backend).map_err(|e| self.locate(e))
    }

    pub fn factor_rlb<B: KernelBackend + ?Sized>(&self, backend: &mut B) -> Result<FactorPanels> {
        factor_rlb(&self.matrix, &self.partition, &self.blocks, backend).map_err(|e| self.locate(e))
    }

    pub fn factor_offloaded(&self, config: &OffloadConfig) -> Result<OffloadRun> {
        run_offloaded(&self.matrix, &self.partition, &self.blocks, config)
            .map_err(|e| self.locate(e))
    }

    /// Solves `A x = b` in the original index space.
    pub fn solve(&self, factor: &FactorPanels, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.stats.n {
            return Err(Error::Dimension {
                expected: self.stats.n,
                found: b.len(),
            });
        }
        let x = solve(factor, &self.permutation.permute_vec(b))?;
        Ok(self.permutation.unpermute_vec(&x))
    }
}
