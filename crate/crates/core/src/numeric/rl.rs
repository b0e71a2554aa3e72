use alloc::vec;
use alloc::vec::Vec;

use super::{factor_diagonal_and_panel, kernel_error, FactorObserver, FactorPanels, KernelCall, KernelOp};
use crate::dense::KernelBackend;
use crate::error::Result;
use crate::matrix::SymmetricSparseMatrix;
use crate::symbolic::{relative_indices, SupernodePartition};

/// Largest packed update matrix, `max t(t + 1) / 2` with `t` the number of
/// rows below a supernode's diagonal block.
pub fn workspace_capacity(partition: &SupernodePartition) -> usize {
    partition
        .supernodes()
        .iter()
        .map(|sn| {
            let t = sn.below().len();
            t * (t + 1) / 2
        })
        .max()
        .unwrap_or(0)
}

/// Preallocated buffer holding one packed lower-triangular update matrix.
#[derive(Debug, Clone)]
pub struct UpdateWorkspace {
    buf: Vec<f64>,
    order: usize,
}

impl UpdateWorkspace {
    pub fn new(capacity: usize) -> Self {
        Self {
            buf: vec![0.0; capacity],
            order: 0,
        }
    }

    pub fn with_capacity_for(partition: &SupernodePartition) -> Self {
        Self::new(workspace_capacity(partition))
    }

    pub fn capacity(&self) -> usize {
        self.buf.len()
    }

    /// Order of the update matrix currently held.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Zeroed packed storage for an update matrix of order `t`.
    pub fn prepare(&mut self, t: usize) -> &mut [f64] {
        let len = t * (t + 1) / 2;
        assert!(len <= self.buf.len(), "update matrix exceeds workspace capacity");
        self.order = t;
        let u = &mut self.buf[..len];
        u.fill(0.0);
        u
    }

    pub fn packed(&self) -> &[f64] {
        &self.buf[..self.order * (self.order + 1) / 2]
    }
}

/// Adds the packed update matrix of supernode `s` (held in `update`, order
/// `t` = rows below `s`'s diagonal block) into every ancestor panel, walking
/// ancestors in ascending order and locating rows through relative indices.
/// Returns the number of entries assembled.
pub fn assemble_update(
    update: &[f64],
    s: usize,
    panels: &mut FactorPanels,
    partition: &SupernodePartition,
    observer: &mut dyn FactorObserver,
) -> Result<usize> {
    let below = partition.get(s).below();
    let t = below.len();
    debug_assert!(update.len() >= t * (t + 1) / 2);
    let mut total = 0;
    let mut q = 0;
    while q < t {
        let ancestor = partition.snode(below[q]);
        let target = partition.get(ancestor);
        let map = relative_indices(partition, s, ancestor)?;
        // shared rows are exactly below[q..], so positions align with them
        debug_assert_eq!(map.rows.as_slice(), &below[q..]);
        let positions: Vec<usize> = map.positions(target.length()).collect();
        let first_q = q;
        let panel = panels.panel_mut(ancestor);
        let mut entries = 0;
        while q < t && below[q] < target.columns.end {
            let col = below[q] - target.columns.start;
            let start = q * (2 * t - q + 1) / 2;
            for (k, p) in (q..t).enumerate() {
                panel[(positions[p - first_q], col)] += update[start + k];
            }
            entries += t - q;
            q += 1;
        }
        observer.assembled(s, ancestor, entries);
        total += entries;
    }
    Ok(total)
}

pub fn factor_rl<B: KernelBackend + ?Sized>(
    a: &SymmetricSparseMatrix,
    partition: &SupernodePartition,
    backend: &mut B,
) -> Result<FactorPanels> {
    factor_rl_observed(a, partition, backend, &mut ())
}

/// RL: per supernode, left to right: potrf, trsm, syrk of the rows below the
/// diagonal block into the workspace, then assembly into the ancestors.
pub fn factor_rl_observed<B: KernelBackend + ?Sized>(
    a: &SymmetricSparseMatrix,
    partition: &SupernodePartition,
    backend: &mut B,
    observer: &mut dyn FactorObserver,
) -> Result<FactorPanels> {
    let mut panels = FactorPanels::scatter(a, partition)?;
    let mut workspace = UpdateWorkspace::with_capacity_for(partition);
    for s in 0..partition.len() {
        rl_step(backend, partition, &mut panels, &mut workspace, s, observer)?;
    }
    Ok(panels)
}

/// One RL supernode step on `backend`.
pub(crate) fn rl_step<B: KernelBackend + ?Sized>(
    backend: &mut B,
    partition: &SupernodePartition,
    panels: &mut FactorPanels,
    workspace: &mut UpdateWorkspace,
    s: usize,
    observer: &mut dyn FactorObserver,
) -> Result<()> {
    factor_diagonal_and_panel(backend, partition, panels.panel_mut(s), s, observer)?;
    let sn = partition.get(s);
    let t = sn.below().len();
    if t == 0 {
        return Ok(());
    }
    let width = sn.width();
    let u = workspace.prepare(t);
    backend
        .syrk_packed(u, panels.panel(s).sub(width, 0, t, width))
        .map_err(|e| kernel_error(e, sn.columns.start))?;
    observer.kernel(&KernelCall {
        op: KernelOp::Syrk,
        source: s,
        target: None,
        rows: sn.below()[0]..sn.below()[t - 1] + 1,
        cols: sn.below()[0]..sn.below()[t - 1] + 1,
    });
    observer.update_matrix(s, sn.below(), workspace.packed());
    assemble_update(workspace.packed(), s, panels, partition, observer)?;
    Ok(())
}
