use alloc::vec::Vec;

use super::ledger::{EventKind, SyncMode, TransferEvent, TransferLedger};
use crate::dense::{self, DensePanel, KernelBackend, KernelError, MatMut, MatRef};
use crate::error::{Error, Result};
use crate::numeric::FactorPanels;

const VALUE_BYTES: usize = core::mem::size_of::<f64>();

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BufferKind {
    Panel,
    Update,
}

/// Handle to a device-resident buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BufferId(usize);

#[derive(Debug)]
struct Buffer {
    kind: BufferKind,
    bytes: usize,
    data: DensePanel,
}

/// A stand-in accelerator: device memory is host memory with capacity
/// accounting, kernels are the host reference kernels, and every transfer
/// and launch is appended to a [`TransferLedger`].
///
/// Async device-to-host copies are staged and only land in host storage at
/// [`SimulatedDevice::synchronize`].
#[derive(Debug)]
pub struct SimulatedDevice {
    limit: Option<usize>,
    store: Vec<Option<Buffer>>,
    resident: usize,
    peak_resident: usize,
    update_resident: usize,
    peak_update: usize,
    pending: Vec<(usize, DensePanel)>,
    ledger: TransferLedger,
    context: usize,
}

impl SimulatedDevice {
    pub fn new(limit: Option<usize>) -> Self {
        Self {
            limit,
            store: Vec::new(),
            resident: 0,
            peak_resident: 0,
            update_resident: 0,
            peak_update: 0,
            pending: Vec::new(),
            ledger: TransferLedger::new(),
            context: 0,
        }
    }

    /// Supernode that subsequent events are attributed to.
    pub fn set_context(&mut self, supernode: usize) {
        self.context = supernode;
    }

    pub fn ledger(&self) -> &TransferLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> TransferLedger {
        self.ledger
    }

    pub fn resident_bytes(&self) -> usize {
        self.resident
    }

    pub fn peak_resident_bytes(&self) -> usize {
        self.peak_resident
    }

    pub fn peak_update_bytes(&self) -> usize {
        self.peak_update
    }

    fn event(&mut self, kind: EventKind, bytes: usize, sync: SyncMode, label: &'static str) {
        self.ledger.record(TransferEvent {
            kind,
            bytes,
            sync,
            supernode: self.context,
            label,
        });
    }

    /// Reserves a zeroed `rows x cols` buffer.
    pub fn alloc(&mut self, kind: BufferKind, rows: usize, cols: usize) -> Result<BufferId> {
        let bytes = rows * cols * VALUE_BYTES;
        let required = self.resident + bytes;
        if let Some(limit) = self.limit {
            if required > limit {
                return Err(Error::DeviceMemoryExceeded {
                    supernode: self.context,
                    required,
                    limit,
                });
            }
        }
        self.resident = required;
        self.peak_resident = self.peak_resident.max(self.resident);
        if kind == BufferKind::Update {
            self.update_resident += bytes;
            self.peak_update = self.peak_update.max(self.update_resident);
        }
        let buffer = Buffer {
            kind,
            bytes,
            data: DensePanel::zeros(rows, cols),
        };
        let slot = match self.store.iter().position(Option::is_none) {
            Some(i) => {
                self.store[i] = Some(buffer);
                i
            }
            None => {
                self.store.push(Some(buffer));
                self.store.len() - 1
            }
        };
        Ok(BufferId(slot))
    }

    pub fn free(&mut self, id: BufferId) {
        let buffer = self.store[id.0].take().expect("double free of a device buffer");
        self.resident -= buffer.bytes;
        if buffer.kind == BufferKind::Update {
            self.update_resident -= buffer.bytes;
        }
    }

    pub fn buffer(&self, id: BufferId) -> &DensePanel {
        &self.store[id.0].as_ref().expect("freed device buffer").data
    }

    pub fn buffer_mut(&mut self, id: BufferId) -> &mut DensePanel {
        &mut self.store[id.0].as_mut().expect("freed device buffer").data
    }

    /// Moves a buffer's contents out so it can be passed to kernels running
    /// on this device; capacity stays reserved until [`Self::restore`].
    pub(crate) fn take(&mut self, id: BufferId) -> DensePanel {
        core::mem::replace(self.buffer_mut(id), DensePanel::zeros(0, 0))
    }

    pub(crate) fn restore(&mut self, id: BufferId, data: DensePanel) {
        *self.buffer_mut(id) = data;
    }

    /// Allocates a panel buffer and copies `host` into it (synchronous H2D).
    pub fn upload(&mut self, host: &DensePanel, label: &'static str) -> Result<BufferId> {
        let id = self.alloc(BufferKind::Panel, host.rows(), host.cols())?;
        self.buffer_mut(id).data_mut().copy_from_slice(host.data());
        let bytes = host.data().len() * VALUE_BYTES;
        self.event(EventKind::HostToDevice, bytes, SyncMode::Sync, label);
        Ok(id)
    }

    /// Synchronous D2H: the returned data is immediately readable on host.
    pub fn download(&mut self, id: BufferId, label: &'static str) -> &[f64] {
        let bytes = self.buffer(id).data().len() * VALUE_BYTES;
        self.event(EventKind::DeviceToHost, bytes, SyncMode::Sync, label);
        self.buffer(id).data()
    }

    /// Async D2H of supernode `s`'s panel; the copy reaches host storage at
    /// the next [`Self::synchronize`].
    pub fn download_async(&mut self, id: BufferId, s: usize, label: &'static str) {
        let staged = self.buffer(id).clone();
        let bytes = staged.data().len() * VALUE_BYTES;
        self.event(EventKind::DeviceToHost, bytes, SyncMode::Async, label);
        self.pending.push((s, staged));
    }

    /// Whether supernode `s` has an async copy in flight.
    pub fn is_pending(&self, s: usize) -> bool {
        self.pending.iter().any(|(p, _)| *p == s)
    }

    /// Completion point for all in-flight async copies.
    pub fn synchronize(&mut self, panels: &mut FactorPanels) {
        for (s, staged) in self.pending.drain(..) {
            *panels.panel_mut(s) = staged;
        }
    }

    fn launch(&mut self, label: &'static str) {
        self.event(EventKind::Kernel, 0, SyncMode::Sync, label);
    }
}

/// Kernels run on caller-provided storage treated as device memory; each
/// launch is logged against the current context supernode.
impl KernelBackend for SimulatedDevice {
    fn name(&self) -> &'static str {
        "simdev"
    }

    fn potrf(&mut self, a: MatMut<'_>) -> core::result::Result<(), KernelError> {
        self.launch("potrf");
        dense::potrf(a)
    }

    fn trsm(&mut self, l: MatRef<'_>, b: MatMut<'_>) -> core::result::Result<(), KernelError> {
        self.launch("trsm");
        dense::trsm(l, b)
    }

    fn syrk(&mut self, c: MatMut<'_>, a: MatRef<'_>) -> core::result::Result<(), KernelError> {
        self.launch("syrk");
        dense::syrk(c, a)
    }

    fn syrk_packed(&mut self, c: &mut [f64], a: MatRef<'_>) -> core::result::Result<(), KernelError> {
        self.launch("syrk");
        dense::syrk_packed(c, a)
    }

    fn gemm(&mut self, c: MatMut<'_>, a: MatRef<'_>, b: MatRef<'_>) -> core::result::Result<(), KernelError> {
        self.launch("gemm");
        dense::gemm(c, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_is_enforced() {
        let mut dev = SimulatedDevice::new(Some(100));
        dev.set_context(3);
        let a = dev.alloc(BufferKind::Panel, 10, 1).unwrap();
        assert_eq!(dev.resident_bytes(), 80);
        let err = dev.alloc(BufferKind::Update, 3, 1).unwrap_err();
        assert_eq!(
            err,
            Error::DeviceMemoryExceeded {
                supernode: 3,
                required: 104,
                limit: 100
            }
        );
        dev.free(a);
        let b = dev.alloc(BufferKind::Update, 12, 1).unwrap();
        assert_eq!(dev.peak_update_bytes(), 96);
        assert_eq!(dev.peak_resident_bytes(), 96);
        dev.free(b);
        assert_eq!(dev.resident_bytes(), 0);
    }

    #[test]
    fn kernels_match_host_bitwise() {
        let a = DensePanel::from_rows(&[&[4.0, 0.0], &[2.0, 5.0]]);
        let mut host = a.clone();
        let mut dev_copy = a.clone();
        dense::potrf(host.as_mut()).unwrap();
        let mut dev = SimulatedDevice::new(None);
        dev.potrf(dev_copy.as_mut()).unwrap();
        assert_eq!(host, dev_copy);
        assert_eq!(dev.ledger().trace(0), "potrf");
    }
}
