//! Compressed quadtree solver for growing disks.
//!
//! Chains of cells with a single non-empty child are collapsed into one
//! edge, which bounds the tree by O(n) nodes. Candidate pairs are lifted to
//! the deepest surviving ancestor, and an unmarked node defers to the mark
//! of its compressed only child.

mod cnp;
mod solve;
mod tree;

pub use cnp::{compute_cnp_c, reference_cnp_c};
pub use solve::{run_cquadtree, solve_cquadtree, CompressedRun, CqBuild};
pub use tree::{
    build_compressed_direct, build_compressed_from_q, CompressedQuadtree, CqChildren, CqNode,
    CqNodeId, CqPayload,
};
