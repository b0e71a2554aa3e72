//! Supernodal right-looking numeric factorization: the RL variant (full
//! update matrix in a workspace, then assembly) and the RLB variant (block
//! pair updates applied directly to ancestor panels).

mod panels;
mod rl;
mod rlb;

use core::ops::Range;

pub use panels::FactorPanels;
pub use rl::{assemble_update, factor_rl, factor_rl_observed, workspace_capacity, UpdateWorkspace};
pub use rlb::{factor_rlb, factor_rlb_observed, target_offset};

pub(crate) use panels::factor_diagonal_and_panel;
pub(crate) use rl::rl_step;
pub(crate) use rlb::rlb_step;

use crate::dense::KernelError;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelOp {
    Potrf,
    Trsm,
    Syrk,
    Gemm,
}

/// One dense kernel issued by a driver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelCall {
    pub op: KernelOp,
    /// Supernode being factored.
    pub source: usize,
    /// Supernode whose panel is written; `None` for the RL update workspace.
    pub target: Option<usize>,
    /// Global rows and columns of the written region.
    pub rows: Range<usize>,
    pub cols: Range<usize>,
}

/// Instrumentation hooks for the numeric drivers. All methods default to no-ops.
pub trait FactorObserver {
    fn kernel(&mut self, _call: &KernelCall) {}
    /// RL only: the packed update matrix of `source` over its below-diagonal `rows`.
    fn update_matrix(&mut self, _source: usize, _rows: &[usize], _packed: &[f64]) {}
    /// RL only: `entries` values of `source`'s update matrix added into `target`.
    fn assembled(&mut self, _source: usize, _target: usize, _entries: usize) {}
}

impl FactorObserver for () {}

pub(crate) fn kernel_error(err: KernelError, first_column: usize) -> Error {
    match err {
        KernelError::NotPositiveDefinite(k) => Error::NotPositiveDefinite {
            column: first_column + k,
            original: None,
        },
        KernelError::SingularBlock(k) => Error::SingularBlock {
            column: first_column + k,
        },
        KernelError::DimensionMismatch => Error::Validation("kernel operand dimensions disagree"),
    }
}
