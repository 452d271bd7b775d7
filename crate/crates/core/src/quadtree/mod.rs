//! Quadtree solver for growing disks.
//!
//! Centers are normalized into the unit square and a full quadtree is built
//! over them. Two unrelated cells of comparable size that lie close
//! together form a candidate pair; every elimination is witnessed by the
//! largest cells the two disks cover at that moment, and those cells form a
//! candidate pair. The solver walks each disk upward from its leaf in
//! priority order, marking the cells it covers before its elimination and
//! testing the disks marked on partner cells.

pub mod cell;
mod cnp;
mod solve;
mod tree;

pub use cell::{is_candidate_pair, Cell, FixedPoint, Normalization, MAX_LEVEL};
pub use cnp::{compute_cnp, CandidatePairs};
pub use solve::{run_quadtree, solve_quadtree, QuadtreeRun};
#[allow(unused_imports)]
pub(crate) use solve::require_disks;
#[allow(unused_imports)]
pub(crate) use tree::cover_time;
pub use tree::{NodeId, QNode, Quadtree};
