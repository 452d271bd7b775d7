//! Elimination order of growing prioritized shapes.
//!
//! Every shape starts as a point and grows at its own rate. When two shapes
//! touch, the one with the larger index (lower priority) disappears. This
//! crate computes the instant and the order in which shapes disappear.
//!
//! Solvers:
//!
//! * [`solve_naive`] and [`solve_simulation`]: quadratic references for any
//!   shape kind.
//! * [`solve_quadtree`]: disks, via candidate pairs of quadtree cells.
//! * [`solve_cquadtree`]: disks, via a compressed quadtree.
//! * [`solve_squares`]: axis-aligned squares, via lower envelopes stored in
//!   rotated range trees.
//!
//! All solvers break ties between equal touch times in favour of the
//! higher-priority eliminator, so their schedules can be compared exactly.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cquadtree;
mod error;
pub mod harness;
mod instance;
pub mod naive;
pub mod quadtree;
mod schedule;
pub mod squares;
mod stats;
mod validate;

pub use cquadtree::solve_cquadtree;
pub use error::{Error, Result};
pub use instance::{Instance, ShapeKind, TouchTime};
pub use naive::{solve_naive, solve_simulation};
pub use quadtree::solve_quadtree;
pub use schedule::{Divergence, Elimination, EliminationSchedule};
pub use squares::solve_squares;
pub use stats::{compute_stats, exact_spread, InstanceStats, EXACT_SPREAD_MAX_SHAPES};
pub use validate::{validate_instance, ValidationReport, Violation, STRICT_MAX_SHAPES};
