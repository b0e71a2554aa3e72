//! Structure computation: elimination tree, factor pattern, supernodes,
//! merging, partition refinement, relative indices and RLB row blocks.

mod blocks;
mod etree;
mod merge;
mod refine;
mod relind;
mod structure;
mod supernodes;

pub use blocks::{block_structure, Block, BlockStructure};
pub use etree::{build_etree, EliminationTree};
pub use merge::{merge_cost_of, merge_supernodes, Amalgamation, MergeStep};
pub use refine::{refine_partition, Refinement};
pub use relind::{relative_indices, RelativeIndexMap};
pub use structure::{symbolic_factor, FactorStructure};
pub use supernodes::{detect_supernodes, Supernode, SupernodePartition};
