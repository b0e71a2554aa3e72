//! Right-looking supernodal sparse Cholesky factorization.
//!
//! The crate is `no_std` (it needs `alloc`). It covers the whole algorithmic
//! pipeline: symmetric permutation and minimum-degree ordering, symbolic
//! analysis (elimination tree, factor structure, supernodes, merging,
//! partition refinement, relative indices, row blocks), dense reference
//! kernels, the RL and RLB numeric drivers, a simulated accelerator with
//! a transfer ledger for the offload schedules, and triangular solves.
//!
//! File formats, timing and the command line live in the companion `rlchol`
//! crate.
#![no_std]

extern crate alloc;

pub mod analysis;
pub mod dense;
pub mod error;
pub mod matrix;
pub mod numeric;
pub mod offload;
pub mod ordering;
pub mod solve;
pub mod symbolic;

pub use analysis::{Analysis, AnalysisOptions, AnalysisStats};
pub use dense::{DensePanel, HostBackend, KernelBackend, MatMut, MatRef};
pub use error::{Error, Result};
pub use matrix::{Permutation, SymmetricSparseMatrix};
pub use numeric::{factor_rl, factor_rlb, workspace_capacity, FactorPanels};
pub use offload::{
    dispatch, run_offloaded, run_rl_offloaded, run_rlb_offloaded, OffloadConfig, OffloadRun,
    Placement, TransferLedger, Variant,
};
pub use ordering::minimum_degree;
pub use solve::{backward_solve, forward_solve, residual, solve};
pub use symbolic::{
    block_structure, build_etree, detect_supernodes, merge_supernodes, refine_partition,
    relative_indices, symbolic_factor, BlockStructure, EliminationTree, FactorStructure,
    SupernodePartition,
};
