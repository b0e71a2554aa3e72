use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    HostToDevice,
    DeviceToHost,
    Kernel,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::HostToDevice => "H2D",
            EventKind::DeviceToHost => "D2H",
            EventKind::Kernel => "kernel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SyncMode {
    Sync,
    Async,
}

impl SyncMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SyncMode::Sync => "sync",
            SyncMode::Async => "async",
        }
    }
}

/// One recorded transfer or kernel launch. Kernel events carry zero bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferEvent {
    pub kind: EventKind,
    pub bytes: usize,
    pub sync: SyncMode,
    pub supernode: usize,
    pub label: &'static str,
}

impl TransferEvent {
    /// Compact token used by [`TransferLedger::trace`]: `H2D:panel`,
    /// `D2H~:panel` (the `~` marks async), or the kernel name.
    pub fn token(&self) -> String {
        let mut out = String::new();
        match self.kind {
            EventKind::Kernel => out.push_str(self.label),
            kind => {
                out.push_str(kind.as_str());
                if self.sync == SyncMode::Async {
                    out.push('~');
                }
                out.push(':');
                out.push_str(self.label);
            }
        }
        out
    }
}

/// Append-only record of device activity, in issue order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransferLedger {
    events: Vec<TransferEvent>,
}

impl TransferLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn record(&mut self, event: TransferEvent) {
        self.events.push(event);
    }

    pub fn events(&self) -> &[TransferEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Events of supernode `s`, in order.
    pub fn for_supernode(&self, s: usize) -> impl Iterator<Item = &TransferEvent> + '_ {
        self.events.iter().filter(move |e| e.supernode == s)
    }

    /// Distinct supernodes that appear in the ledger, ascending.
    pub fn supernodes(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.events.iter().map(|e| e.supernode).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Space-separated tokens of supernode `s`'s events, for matching
    /// against a schedule template.
    pub fn trace(&self, s: usize) -> String {
        let mut out = String::new();
        for (i, e) in self.for_supernode(s).enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&e.token());
        }
        out
    }

    pub fn summary(&self) -> LedgerSummary {
        ledger_summary(self)
    }

    /// CSV with header `event_index,kind,bytes,sync,supernode,label`;
    /// supernode ids are written 1-based.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("event_index,kind,bytes,sync,supernode,label\n");
        for (i, e) in self.events.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                i,
                e.kind.as_str(),
                e.bytes,
                e.sync.as_str(),
                e.supernode + 1,
                e.label
            );
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KindTotals {
    pub count: usize,
    pub bytes: usize,
}

impl KindTotals {
    fn add(&mut self, bytes: usize) {
        self.count += 1;
        self.bytes += bytes;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SupernodeTraffic {
    pub supernode: usize,
    pub h2d: KindTotals,
    pub d2h: KindTotals,
    pub kernels: usize,
}

/// Ledger totals per event kind plus a per-supernode breakdown sorted by
/// supernode id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LedgerSummary {
    pub h2d: KindTotals,
    pub d2h: KindTotals,
    pub kernels: KindTotals,
    pub per_supernode: Vec<SupernodeTraffic>,
}

impl LedgerSummary {
    /// Number of supernodes with at least one event.
    pub fn offloaded(&self) -> usize {
        self.per_supernode.len()
    }
}

pub fn ledger_summary(ledger: &TransferLedger) -> LedgerSummary {
    let mut summary = LedgerSummary::default();
    let mut per: BTreeMap<usize, SupernodeTraffic> = BTreeMap::new();
    for e in ledger.events() {
        let entry = per.entry(e.supernode).or_insert(SupernodeTraffic {
            supernode: e.supernode,
            ..SupernodeTraffic::default()
        });
        match e.kind {
            EventKind::HostToDevice => {
                summary.h2d.add(e.bytes);
                entry.h2d.add(e.bytes);
            }
            EventKind::DeviceToHost => {
                summary.d2h.add(e.bytes);
                entry.d2h.add(e.bytes);
            }
            EventKind::Kernel => {
                summary.kernels.add(e.bytes);
                entry.kernels += 1;
            }
        }
    }
    summary.per_supernode = per.into_values().collect();
    summary
}
