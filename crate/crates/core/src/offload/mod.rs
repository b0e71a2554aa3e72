//! Host/device execution schedules for the numeric drivers against a
//! simulated accelerator.
//!
//! Supernodes whose size (`width x length`) is below the active threshold
//! run on the host exactly as in the host drivers. The others are uploaded,
//! factored on the device, and their update contributions are copied back
//! and assembled on the host:
//!
//! * RL: `H2D(panel) potrf trsm D2H~(panel) syrk D2H(update)`, the last two
//!   omitted when nothing lies below the diagonal block.
//! * RLB aggregated: every block-pair kernel writes into one device buffer,
//!   copied back with a single transfer.
//! * RLB streamed: each block-pair kernel gets its own buffer, copied back
//!   and assembled right away.

mod device;
mod ledger;

use alloc::vec::Vec;

pub use device::{BufferId, BufferKind, SimulatedDevice};
pub use ledger::{
    ledger_summary, EventKind, KindTotals, LedgerSummary, SupernodeTraffic, SyncMode,
    TransferEvent, TransferLedger,
};

use crate::dense::packed_index;
use crate::error::{Error, Result};
use crate::matrix::SymmetricSparseMatrix;
use crate::numeric::{
    factor_diagonal_and_panel, kernel_error, rl_step, rlb_step, target_offset, FactorPanels,
    UpdateWorkspace, assemble_update,
};
use crate::symbolic::{Block, BlockStructure, Supernode, SupernodePartition};
use crate::HostBackend;
use crate::KernelBackend;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Rl,
    RlbAggregated,
    RlbStreamed,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Rl => "rl",
            Variant::RlbAggregated => "rlb-aggregated",
            Variant::RlbStreamed => "rlb-streamed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OffloadConfig {
    pub rl_threshold: usize,
    pub rlb_threshold: usize,
    pub variant: Variant,
    /// Device memory in bytes; unlimited when `None`.
    pub device_memory_limit: Option<usize>,
}

impl Default for OffloadConfig {
    fn default() -> Self {
        Self {
            rl_threshold: 600_000,
            rlb_threshold: 750_000,
            variant: Variant::Rl,
            device_memory_limit: None,
        }
    }
}

impl OffloadConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            ..Self::default()
        }
    }

    /// Same threshold for both variants.
    pub fn with_threshold(mut self, threshold: usize) -> Self {
        self.rl_threshold = threshold;
        self.rlb_threshold = threshold;
        self
    }

    pub fn with_memory_limit(mut self, bytes: Option<usize>) -> Self {
        self.device_memory_limit = bytes;
        self
    }

    /// Threshold of the active variant.
    pub fn threshold(&self) -> usize {
        match self.variant {
            Variant::Rl => self.rl_threshold,
            Variant::RlbAggregated | Variant::RlbStreamed => self.rlb_threshold,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Host,
    Device,
}

/// Host when `size(sn)` is strictly below the active threshold.
pub fn dispatch(sn: &Supernode, config: &OffloadConfig) -> Placement {
    if sn.size() < config.threshold() {
        Placement::Host
    } else {
        Placement::Device
    }
}

#[derive(Debug, Clone)]
pub struct OffloadRun {
    pub factor: FactorPanels,
    pub ledger: TransferLedger,
    /// Supernodes that ran on the device, ascending.
    pub offloaded: Vec<usize>,
    /// Largest total of simultaneously resident update buffers, in bytes.
    pub peak_update_bytes: usize,
    /// Largest total of simultaneously resident buffers, in bytes.
    pub peak_resident_bytes: usize,
}

impl OffloadRun {
    fn finish(factor: FactorPanels, device: SimulatedDevice, offloaded: Vec<usize>) -> Self {
        let peak_update_bytes = device.peak_update_bytes();
        let peak_resident_bytes = device.peak_resident_bytes();
        Self {
            factor,
            ledger: device.into_ledger(),
            offloaded,
            peak_update_bytes,
            peak_resident_bytes,
        }
    }
}

/// Runs the schedule selected by `config.variant`.
pub fn run_offloaded(
    a: &SymmetricSparseMatrix,
    partition: &SupernodePartition,
    blocks: &BlockStructure,
    config: &OffloadConfig,
) -> Result<OffloadRun> {
    match config.variant {
        Variant::Rl => run_rl_offloaded(a, partition, config),
        Variant::RlbAggregated | Variant::RlbStreamed => {
            run_rlb_offloaded(a, partition, blocks, config)
        }
    }
}

/// Uploads and factors supernode `s`'s panel on the device, queues its
/// async copy back, and returns the device handle.
fn device_factor(
    device: &mut SimulatedDevice,
    partition: &SupernodePartition,
    panels: &FactorPanels,
    s: usize,
) -> Result<BufferId> {
    device.set_context(s);
    let pid = device.upload(panels.panel(s), "panel")?;
    let mut panel = device.take(pid);
    let outcome = factor_diagonal_and_panel(device, partition, &mut panel, s, &mut ());
    device.restore(pid, panel);
    outcome?;
    device.download_async(pid, s, "panel");
    Ok(pid)
}

pub fn run_rl_offloaded(
    a: &SymmetricSparseMatrix,
    partition: &SupernodePartition,
    config: &OffloadConfig,
) -> Result<OffloadRun> {
    let config = OffloadConfig {
        variant: Variant::Rl,
        ..*config
    };
    let mut panels = FactorPanels::scatter(a, partition)?;
    let mut workspace = UpdateWorkspace::with_capacity_for(partition);
    let mut host = HostBackend::new();
    let mut device = SimulatedDevice::new(config.device_memory_limit);
    let mut offloaded = Vec::new();
    for (s, sn) in partition.supernodes().iter().enumerate() {
        debug_assert!(!device.is_pending(s));
        if dispatch(sn, &config) == Placement::Host {
            rl_step(&mut host, partition, &mut panels, &mut workspace, s, &mut ())?;
            continue;
        }
        offloaded.push(s);
        let pid = device_factor(&mut device, partition, &panels, s)?;
        let t = sn.below().len();
        if t > 0 {
            let width = sn.width();
            let uid = device.alloc(BufferKind::Update, t * (t + 1) / 2, 1)?;
            let panel = device.take(pid);
            let mut update = device.take(uid);
            let outcome = device.syrk_packed(update.data_mut(), panel.sub(width, 0, t, width));
            device.restore(pid, panel);
            device.restore(uid, update);
            outcome.map_err(|e| kernel_error(e, sn.columns.start))?;
            let host_u = workspace.prepare(t);
            host_u.copy_from_slice(device.download(uid, "update"));
            device.free(uid);
            assemble_update(workspace.packed(), s, &mut panels, partition, &mut ())?;
        }
        device.free(pid);
    }
    device.synchronize(&mut panels);
    Ok(OffloadRun::finish(panels, device, offloaded))
}

/// Entries of the device output for the pair `(upper, lower)`: packed
/// lower triangle for the diagonal (syrk) pair, full rectangle otherwise.
fn pair_len(upper: &Block, lower: &Block, same: bool) -> usize {
    if same {
        upper.len() * (upper.len() + 1) / 2
    } else {
        lower.len() * upper.len()
    }
}

/// Adds a device block-pair output into the target ancestor panel.
fn assemble_pair(
    panels: &mut FactorPanels,
    partition: &SupernodePartition,
    upper: &Block,
    lower: &Block,
    same: bool,
    out: &[f64],
) {
    let ancestor = upper.ancestor;
    let col = upper.rows.start - partition.get(ancestor).columns.start;
    let row = target_offset(partition, upper, lower);
    let target = panels.panel_mut(ancestor);
    let b = upper.len();
    if same {
        for j in 0..b {
            for i in j..b {
                target[(row + i, col + j)] += out[packed_index(b, i, j)];
            }
        }
    } else {
        let m = lower.len();
        for j in 0..b {
            for i in 0..m {
                target[(row + i, col + j)] += out[i + j * m];
            }
        }
    }
}

/// Runs the block-pair kernel `(upper, lower)` of supernode `s` into
/// `out`, which starts zeroed so it receives the negated contribution.
#[allow(clippy::too_many_arguments)]
fn pair_kernel(
    device: &mut SimulatedDevice,
    panel: &crate::dense::DensePanel,
    width: usize,
    upper: &Block,
    lower: &Block,
    same: bool,
    out: &mut [f64],
    first_column: usize,
) -> Result<()> {
    let right = panel.sub(upper.source_offset, 0, upper.len(), width);
    let outcome = if same {
        device.syrk_packed(out, right)
    } else {
        let left = panel.sub(lower.source_offset, 0, lower.len(), width);
        let m = lower.len();
        device.gemm(crate::dense::MatMut::new(out, m, upper.len(), m), left, right)
    };
    outcome.map_err(|e| kernel_error(e, first_column))
}

pub fn run_rlb_offloaded(
    a: &SymmetricSparseMatrix,
    partition: &SupernodePartition,
    blocks: &BlockStructure,
    config: &OffloadConfig,
) -> Result<OffloadRun> {
    if config.variant == Variant::Rl {
        return Err(Error::Validation("RLB offload needs an RLB variant"));
    }
    if blocks.len() != partition.len() {
        return Err(Error::Validation("block structure does not match the partition"));
    }
    let streamed = config.variant == Variant::RlbStreamed;
    let mut panels = FactorPanels::scatter(a, partition)?;
    let mut host = HostBackend::new();
    let mut device = SimulatedDevice::new(config.device_memory_limit);
    let mut offloaded = Vec::new();
    for (s, sn) in partition.supernodes().iter().enumerate() {
        debug_assert!(!device.is_pending(s));
        if dispatch(sn, config) == Placement::Host {
            rlb_step(&mut host, partition, blocks, &mut panels, s, &mut ())?;
            continue;
        }
        offloaded.push(s);
        let pid = device_factor(&mut device, partition, &panels, s)?;
        let width = sn.width();
        let first = sn.columns.start;
        let list = blocks.of(s);
        let pairs: Vec<(usize, usize)> = (0..list.len())
            .flat_map(|p| (p..list.len()).map(move |q| (p, q)))
            .collect();
        if streamed {
            for &(p, q) in &pairs {
                let (upper, lower) = (&list[p], &list[q]);
                let len = pair_len(upper, lower, p == q);
                let uid = device.alloc(BufferKind::Update, len, 1)?;
                let panel = device.take(pid);
                let mut out = device.take(uid);
                let outcome =
                    pair_kernel(&mut device, &panel, width, upper, lower, p == q, out.data_mut(), first);
                device.restore(pid, panel);
                device.restore(uid, out);
                outcome?;
                let data = device.download(uid, "update");
                assemble_pair(&mut panels, partition, upper, lower, p == q, data);
                device.free(uid);
            }
        } else if !pairs.is_empty() {
            let lens: Vec<usize> = pairs
                .iter()
                .map(|&(p, q)| pair_len(&list[p], &list[q], p == q))
                .collect();
            let total: usize = lens.iter().sum();
            let uid = device.alloc(BufferKind::Update, total, 1)?;
            let panel = device.take(pid);
            let mut out = device.take(uid);
            let mut offset = 0;
            let mut outcome = Ok(());
            for (&(p, q), &len) in pairs.iter().zip(&lens) {
                outcome = pair_kernel(
                    &mut device,
                    &panel,
                    width,
                    &list[p],
                    &list[q],
                    p == q,
                    &mut out.data_mut()[offset..offset + len],
                    first,
                );
                if outcome.is_err() {
                    break;
                }
                offset += len;
            }
            device.restore(pid, panel);
            device.restore(uid, out);
            outcome?;
            let data = device.download(uid, "updates");
            let mut offset = 0;
            for (&(p, q), &len) in pairs.iter().zip(&lens) {
                assemble_pair(
                    &mut panels,
                    partition,
                    &list[p],
                    &list[q],
                    p == q,
                    &data[offset..offset + len],
                );
                offset += len;
            }
            device.free(uid);
        }
        device.free(pid);
    }
    device.synchronize(&mut panels);
    Ok(OffloadRun::finish(panels, device, offloaded))
}
