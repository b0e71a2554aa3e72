use alloc::vec::Vec;
use core::ops::Range;

use super::SupernodePartition;

/// A maximal run of consecutive global rows of one supernode that all fall
/// inside a single ancestor's column range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Supernode whose columns contain the rows.
    pub ancestor: usize,
    /// Global rows covered.
    pub rows: Range<usize>,
    /// Position of the first row in the source supernode's row set.
    pub source_offset: usize,
    /// Position of the first row in the ancestor's row set.
    pub dest_offset: usize,
}

impl Block {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Per-supernode RLB row blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStructure {
    blocks: Vec<Vec<Block>>,
}

impl BlockStructure {
    pub fn of(&self, s: usize) -> &[Block] {
        &self.blocks[s]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block count summed over supernodes.
    pub fn total_blocks(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// RLB update-kernel calls for supernode `s`: one per block pair with
    /// the first block at or above the second, `b(b + 1) / 2`.
    pub fn update_calls(&self, s: usize) -> usize {
        let b = self.blocks[s].len();
        b * (b + 1) / 2
    }
}

pub fn block_structure(partition: &SupernodePartition) -> BlockStructure {
    let mut blocks = Vec::with_capacity(partition.len());
    for sn in partition.supernodes() {
        let mut list: Vec<Block> = Vec::new();
        let below = sn.below();
        let mut k = 0;
        while k < below.len() {
            let first = below[k];
            let ancestor = partition.snode(first);
            let limit = partition.get(ancestor).columns.end;
            let mut end = k + 1;
            while end < below.len() && below[end] == below[end - 1] + 1 && below[end] < limit {
                end += 1;
            }
            let dest = &partition.get(ancestor).rows;
            let dest_offset = dest
                .binary_search(&first)
                .expect("descendant rows are contained in the ancestor's rows");
            list.push(Block {
                ancestor,
                rows: first..below[end - 1] + 1,
                source_offset: sn.width() + k,
                dest_offset,
            });
            k = end;
        }
        blocks.push(list);
    }
    BlockStructure { blocks }
}
