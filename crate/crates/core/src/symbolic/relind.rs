use alloc::vec::Vec;

use super::SupernodePartition;
use crate::error::{Error, Result};

/// Relative indices of a descendant supernode's rows inside an ancestor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeIndexMap {
    /// Global rows shared by both supernodes, increasing.
    pub rows: Vec<usize>,
    /// Distance of each shared row from the bottom of the ancestor's row set.
    pub distances: Vec<usize>,
}

impl RelativeIndexMap {
    /// Panel row position (from the top) of each shared row in the ancestor.
    pub fn positions(&self, ancestor_length: usize) -> impl Iterator<Item = usize> + '_ {
        self.distances.iter().map(move |&d| ancestor_length - 1 - d)
    }
}

/// `relind(J, J')`: for each global row in `rows(J) ∩ rows(J')`, its distance
/// from the bottom of `rows(J')`. `ancestor` must be a proper ancestor of `s`.
pub fn relative_indices(
    partition: &SupernodePartition,
    s: usize,
    ancestor: usize,
) -> Result<RelativeIndexMap> {
    if s >= partition.len() || ancestor >= partition.len() {
        return Err(Error::Validation("supernode index out of range"));
    }
    if !partition.is_proper_ancestor(s, ancestor) {
        return Err(Error::Validation("relative indices need a proper ancestor"));
    }
    let src = &partition.get(s).rows;
    let dst = &partition.get(ancestor).rows;
    let mut rows = Vec::new();
    let mut distances = Vec::new();
    let (mut a, mut b) = (0, 0);
    while a < src.len() && b < dst.len() {
        match src[a].cmp(&dst[b]) {
            core::cmp::Ordering::Less => a += 1,
            core::cmp::Ordering::Greater => b += 1,
            core::cmp::Ordering::Equal => {
                rows.push(src[a]);
                distances.push(dst.len() - 1 - b);
                a += 1;
                b += 1;
            }
        }
    }
    Ok(RelativeIndexMap { rows, distances })
}
