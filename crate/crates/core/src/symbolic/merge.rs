//! Greedy child-parent supernode merging under a storage growth cap.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use super::supernodes::trapezoid;
use super::{FactorStructure, Supernode, SupernodePartition};
use crate::matrix::Permutation;

/// One applied merge, in terms of the input partition's supernode indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeStep {
    /// Topmost input supernode of the absorbed child group.
    pub child: usize,
    /// Topmost input supernode of the surviving parent group.
    pub parent: usize,
    /// Explicit zeros the merge introduced.
    pub added: usize,
}

/// Result of [`merge_supernodes`].
///
/// Merged groups are generally not contiguous in the input column order, so
/// the coarser partition lives in a reordered index space described by
/// `permutation` (input index to output index). The reordering is a
/// topological order of the elimination tree and does not change fill.
#[derive(Debug, Clone)]
pub struct Amalgamation {
    pub partition: SupernodePartition,
    pub permutation: Permutation,
    pub original_storage: usize,
    pub added_storage: usize,
    pub steps: Vec<MergeStep>,
}

impl Amalgamation {
    /// Relative storage growth, `added / original`.
    pub fn growth(&self) -> f64 {
        if self.original_storage == 0 {
            0.0
        } else {
            self.added_storage as f64 / self.original_storage as f64
        }
    }
}

struct Group {
    rows: Vec<usize>,
    columns: Vec<usize>,
    parent: Option<usize>,
    children: Vec<usize>,
    alive: bool,
    version: u32,
}

impl Group {
    fn storage(&self) -> usize {
        trapezoid(self.columns.len(), self.rows.len())
    }
}

fn union_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn union_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - common
}

fn merge_cost(child: &Group, parent: &Group) -> usize {
    let width = child.columns.len() + parent.columns.len();
    trapezoid(width, union_len(&child.rows, &parent.rows)) - child.storage() - parent.storage()
}

/// Explicit zeros added by merging supernode `child` into its parent.
pub fn merge_cost_of(partition: &SupernodePartition, child: usize) -> Option<usize> {
    let parent = partition.sparent(child)?;
    let (c, p) = (partition.get(child), partition.get(parent));
    let width = c.width() + p.width();
    Some(trapezoid(width, union_len(&c.rows, &p.rows)) - c.storage() - p.storage())
}

/// Repeatedly merges the child-parent pair that adds the fewest explicit
/// zeros, stopping before cumulative added storage would exceed
/// `cap * nnz(L)`. Ties go to the smallest child index.
pub fn merge_supernodes(
    partition: &SupernodePartition,
    structure: &FactorStructure,
    cap: f64,
) -> Amalgamation {
    let n = partition.n();
    let count = partition.len();
    let original_storage = structure.nnz();
    let budget = cap.max(0.0) * original_storage as f64;

    let mut groups: Vec<Group> = partition
        .supernodes()
        .iter()
        .enumerate()
        .map(|(s, sn)| Group {
            rows: sn.rows.clone(),
            columns: sn.columns.clone().collect(),
            parent: partition.sparent(s),
            children: Vec::new(),
            alive: true,
            version: 0,
        })
        .collect();
    for s in 0..count {
        if let Some(p) = groups[s].parent {
            groups[p].children.push(s);
        }
    }

    // (cost, child, child version, parent, parent version)
    let mut heap = BinaryHeap::new();
    for s in 0..count {
        if let Some(p) = groups[s].parent {
            heap.push(Reverse((merge_cost(&groups[s], &groups[p]), s, 0u32, p, 0u32)));
        }
    }

    let mut added_storage = 0usize;
    let mut steps = Vec::new();
    while let Some(Reverse((cost, c, cv, p, pv))) = heap.pop() {
        let stale = !groups[c].alive
            || !groups[p].alive
            || groups[c].version != cv
            || groups[p].version != pv
            || groups[c].parent != Some(p);
        if stale {
            continue;
        }
        if (added_storage + cost) as f64 > budget {
            break;
        }
        added_storage += cost;
        steps.push(MergeStep {
            child: c,
            parent: p,
            added: cost,
        });

        let child = core::mem::replace(
            &mut groups[c],
            Group {
                rows: Vec::new(),
                columns: Vec::new(),
                parent: None,
                children: Vec::new(),
                alive: false,
                version: cv + 1,
            },
        );
        for &g in &child.children {
            groups[g].parent = Some(p);
        }
        let parent = &mut groups[p];
        parent.rows = union_sorted(&child.rows, &parent.rows);
        parent.columns = union_sorted(&child.columns, &parent.columns);
        parent.children.retain(|&g| g != c);
        parent.children.extend(child.children);
        parent.children.sort_unstable();
        parent.version += 1;

        let pv = groups[p].version;
        if let Some(pp) = groups[p].parent {
            heap.push(Reverse((
                merge_cost(&groups[p], &groups[pp]),
                p,
                pv,
                pp,
                groups[pp].version,
            )));
        }
        for &g in &groups[p].children {
            heap.push(Reverse((
                merge_cost(&groups[g], &groups[p]),
                g,
                groups[g].version,
                p,
                pv,
            )));
        }
    }

    // Order surviving groups by their last column; each group's parent holds
    // a larger column, so this is topological and keeps groups contiguous.
    let mut alive: Vec<usize> = (0..count).filter(|&g| groups[g].alive).collect();
    alive.sort_by_key(|&g| *groups[g].columns.last().unwrap());
    let mut order = Vec::with_capacity(n);
    for &g in &alive {
        order.extend_from_slice(&groups[g].columns);
    }
    let permutation =
        Permutation::from_new_to_old(order).expect("groups partition the columns");

    let mut supernodes = Vec::with_capacity(alive.len());
    let mut start = 0;
    for &g in &alive {
        let width = groups[g].columns.len();
        let mut rows: Vec<usize> = groups[g].rows.iter().map(|&r| permutation.apply(r)).collect();
        rows.sort_unstable();
        supernodes.push(Supernode {
            columns: start..start + width,
            rows,
        });
        start += width;
    }
    let merged = SupernodePartition::from_supernodes(n, supernodes)
        .expect("merged groups form a valid partition");
    Amalgamation {
        partition: merged,
        permutation,
        original_storage,
        added_storage,
        steps,
    }
}
