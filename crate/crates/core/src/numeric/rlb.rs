use super::{factor_diagonal_and_panel, kernel_error, FactorObserver, FactorPanels, KernelCall, KernelOp};
use crate::dense::KernelBackend;
use crate::error::Result;
use crate::matrix::SymmetricSparseMatrix;
use crate::symbolic::{Block, BlockStructure, SupernodePartition};

/// Row offset inside the panel of `upper.ancestor` where `lower`'s rows
/// land. For `lower == upper` this is the block's own destination offset.
pub fn target_offset(partition: &SupernodePartition, upper: &Block, lower: &Block) -> usize {
    if upper.ancestor == lower.ancestor && upper.rows == lower.rows {
        return upper.dest_offset;
    }
    partition
        .get(upper.ancestor)
        .rows
        .binary_search(&lower.rows.start)
        .expect("lower block rows lie in the upper block's ancestor")
}

pub fn factor_rlb<B: KernelBackend + ?Sized>(
    a: &SymmetricSparseMatrix,
    partition: &SupernodePartition,
    blocks: &BlockStructure,
    backend: &mut B,
) -> Result<FactorPanels> {
    factor_rlb_observed(a, partition, blocks, backend, &mut ())
}

/// RLB: after potrf/trsm, every block pair `(B, B')` with `B` at or above
/// `B'` issues syrk (`B = B'`, into `L[B, B]`) or gemm (into `L[B', B]`)
/// directly on the panel of `B`'s ancestor. No update workspace.
pub fn factor_rlb_observed<B: KernelBackend + ?Sized>(
    a: &SymmetricSparseMatrix,
    partition: &SupernodePartition,
    blocks: &BlockStructure,
    backend: &mut B,
    observer: &mut dyn FactorObserver,
) -> Result<FactorPanels> {
    if blocks.len() != partition.len() {
        return Err(crate::Error::Validation("block structure does not match the partition"));
    }
    let mut panels = FactorPanels::scatter(a, partition)?;
    for s in 0..partition.len() {
        rlb_step(backend, partition, blocks, &mut panels, s, observer)?;
    }
    Ok(panels)
}

/// One RLB supernode step on `backend`.
pub(crate) fn rlb_step<B: KernelBackend + ?Sized>(
    backend: &mut B,
    partition: &SupernodePartition,
    blocks: &BlockStructure,
    panels: &mut FactorPanels,
    s: usize,
    observer: &mut dyn FactorObserver,
) -> Result<()> {
    let sn = partition.get(s);
    let width = sn.width();
    let first = sn.columns.start;
    let (done, rest) = panels.panels_mut().split_at_mut(s + 1);
    let source = &mut done[s];
    factor_diagonal_and_panel(backend, partition, source, s, observer)?;
    let list = blocks.of(s);
    for (p, upper) in list.iter().enumerate() {
        let ancestor = upper.ancestor;
        let anc = partition.get(ancestor);
        let col = upper.rows.start - anc.columns.start;
        let target = &mut rest[ancestor - s - 1];
        let right = source.sub(upper.source_offset, 0, upper.len(), width);
        for lower in &list[p..] {
            let row = target_offset(partition, upper, lower);
            let op = if core::ptr::eq(upper, lower) {
                backend
                    .syrk(target.sub_mut(row, col, upper.len(), upper.len()), right)
                    .map_err(|e| kernel_error(e, first))?;
                KernelOp::Syrk
            } else {
                let left = source.sub(lower.source_offset, 0, lower.len(), width);
                backend
                    .gemm(target.sub_mut(row, col, lower.len(), upper.len()), left, right)
                    .map_err(|e| kernel_error(e, first))?;
                KernelOp::Gemm
            };
            observer.kernel(&KernelCall {
                op,
                source: s,
                target: Some(ancestor),
                rows: lower.rows.clone(),
                cols: upper.rows.clone(),
            });
        }
    }
    Ok(())
}
