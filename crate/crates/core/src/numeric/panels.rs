use alloc::vec;
use alloc::vec::Vec;

use super::{kernel_error, FactorObserver, KernelCall, KernelOp};
use crate::dense::{DensePanel, KernelBackend};
use crate::error::{Error, Result};
use crate::matrix::SymmetricSparseMatrix;
use crate::symbolic::SupernodePartition;

/// Numeric factor storage: one full-rectangle panel of `length x width` per
/// supernode. Entries above each column's diagonal position are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPanels {
    partition: SupernodePartition,
    panels: Vec<DensePanel>,
}

impl FactorPanels {
    /// Panels holding the lower triangle of `a`, zero elsewhere.
    pub fn scatter(a: &SymmetricSparseMatrix, partition: &SupernodePartition) -> Result<Self> {
        if a.n() != partition.n() {
            return Err(Error::Dimension {
                expected: partition.n(),
                found: a.n(),
            });
        }
        let mut owner = vec![usize::MAX; a.n()];
        let mut pos = vec![0usize; a.n()];
        let mut panels = Vec::with_capacity(partition.len());
        for (s, sn) in partition.supernodes().iter().enumerate() {
            for (p, &r) in sn.rows.iter().enumerate() {
                owner[r] = s;
                pos[r] = p;
            }
            let mut panel = DensePanel::zeros(sn.length(), sn.width());
            for (k, c) in sn.columns.clone().enumerate() {
                for (&i, &v) in a.col_rows(c).iter().zip(a.col_values(c)) {
                    if owner[i] != s {
                        return Err(Error::Validation(
                            "matrix entry outside the supernode's row structure",
                        ));
                    }
                    panel[(pos[i], k)] = v;
                }
            }
            panels.push(panel);
        }
        Ok(Self {
            partition: partition.clone(),
            panels,
        })
    }

    /// All-zero panels shaped like `partition`.
    pub fn zeros(partition: &SupernodePartition) -> Self {
        Self {
            partition: partition.clone(),
            panels: partition
                .supernodes()
                .iter()
                .map(|sn| DensePanel::zeros(sn.length(), sn.width()))
                .collect(),
        }
    }

    pub fn partition(&self) -> &SupernodePartition {
        &self.partition
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn panel(&self, s: usize) -> &DensePanel {
        &self.panels[s]
    }

    pub fn panel_mut(&mut self, s: usize) -> &mut DensePanel {
        &mut self.panels[s]
    }

    pub fn panels(&self) -> &[DensePanel] {
        &self.panels
    }

    pub(crate) fn panels_mut(&mut self) -> &mut [DensePanel] {
        &mut self.panels
    }

    /// Stored lower-triangular entries as `(row, col, value)`.
    pub fn to_triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (sn, panel) in self.partition.supernodes().iter().zip(&self.panels) {
            for (k, c) in sn.columns.clone().enumerate() {
                for (p, &r) in sn.rows.iter().enumerate().skip(k) {
                    out.push((r, c, panel[(p, k)]));
                }
            }
        }
        out
    }

    /// `L(i, j)`, zero outside the stored pattern.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i < j {
            return 0.0;
        }
        let s = self.partition.snode(j);
        let sn = self.partition.get(s);
        match sn.rows.binary_search(&i) {
            Ok(p) => self.panels[s][(p, j - sn.columns.start)],
            Err(_) => 0.0,
        }
    }

    /// Largest absolute stored entry of `L`.
    pub fn max_abs(&self) -> f64 {
        self.to_triplets()
            .into_iter()
            .fold(0.0, |m, (_, _, v)| m.max(v.abs()))
    }

    /// Dense column-major copy of `L` (lower triangle only).
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n();
        let mut d = vec![0.0; n * n];
        for (i, j, v) in self.to_triplets() {
            d[i + j * n] = v;
        }
        d
    }

    /// `‖A - L Lᵀ‖_F / ‖A‖_F`, with `L Lᵀ` accumulated supernode by
    /// supernode into panel-shaped storage (its pattern lies inside the
    /// stored factor pattern).
    pub fn reconstruction_error(&self, a: &SymmetricSparseMatrix) -> Result<f64> {
        let mut prod = FactorPanels::zeros(&self.partition);
        let mut pos = vec![0usize; self.n()];
        for (s, sn) in self.partition.supernodes().iter().enumerate() {
            let panel = &self.panels[s];
            let len = sn.length();
            let width = sn.width();
            // rows of L restricted to this supernode, upper part of the
            // diagonal block masked to zero
            let mut rows_l = vec![0.0; len * width];
            for p in 0..len {
                for k in 0..width.min(p + 1) {
                    rows_l[p * width + k] = panel[(p, k)];
                }
            }
            let mut q = 0;
            while q < len {
                let c = sn.rows[q];
                let t = self.partition.snode(c);
                let target = self.partition.get(t);
                for (p, &r) in target.rows.iter().enumerate() {
                    pos[r] = p;
                }
                while q < len && sn.rows[q] < target.columns.end {
                    let col = sn.rows[q] - target.columns.start;
                    let rq = &rows_l[q * width..(q + 1) * width];
                    for p in q..len {
                        let rp = &rows_l[p * width..(p + 1) * width];
                        let v: f64 = rp.iter().zip(rq).map(|(x, y)| x * y).sum();
                        prod.panels[t][(pos[sn.rows[p]], col)] += v;
                    }
                    q += 1;
                }
            }
        }
        let reference = FactorPanels::scatter(a, &self.partition)?;
        let mut err = 0.0;
        for (s, sn) in self.partition.supernodes().iter().enumerate() {
            for k in 0..sn.width() {
                for p in k..sn.length() {
                    let d = reference.panels[s][(p, k)] - prod.panels[s][(p, k)];
                    err += if p == k { d * d } else { 2.0 * d * d };
                }
            }
        }
        let norm = a.norm_fro();
        Ok(libm::sqrt(err) / if norm > 0.0 { norm } else { 1.0 })
    }
}

/// potrf on the diagonal block of supernode `s` followed by trsm on the
/// rows below it. trsm is issued even when there are no rows below.
pub(crate) fn factor_diagonal_and_panel<B: KernelBackend + ?Sized>(
    backend: &mut B,
    partition: &SupernodePartition,
    panel: &mut DensePanel,
    s: usize,
    observer: &mut dyn FactorObserver,
) -> Result<()> {
    let sn = partition.get(s);
    let width = sn.width();
    let below = sn.length() - width;
    let first = sn.columns.start;
    backend
        .potrf(panel.sub_mut(0, 0, width, width))
        .map_err(|e| kernel_error(e, first))?;
    observer.kernel(&KernelCall {
        op: KernelOp::Potrf,
        source: s,
        target: Some(s),
        rows: sn.columns.clone(),
        cols: sn.columns.clone(),
    });
    let mut diag = DensePanel::zeros(width, width);
    for k in 0..width {
        for i in k..width {
            diag[(i, k)] = panel[(i, k)];
        }
    }
    backend
        .trsm(diag.as_ref(), panel.sub_mut(width, 0, below, width))
        .map_err(|e| kernel_error(e, first))?;
    observer.kernel(&KernelCall {
        op: KernelOp::Trsm,
        source: s,
        target: Some(s),
        rows: sn.below().first().map_or(0..0, |&r| r..sn.rows[sn.length() - 1] + 1),
        cols: sn.columns.clone(),
    });
    Ok(())
}
