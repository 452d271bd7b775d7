//! Growing squares in the plane in O(n polylog n).
//!
//! Around a query square `q` the plane splits into four quadrants; inside
//! one of them the L∞ distance is a difference of a single coordinate, so
//! the squares with final elimination times become decreasing segments
//! `t ↦ c_j − v_j t` on `[0, t_j]` and the query is a ray `t ↦ c_q + v_q t`
//! shot at their lower envelope. Rotated range trees select the quadrant
//! members, and prefix blocks over the priority order keep the structures
//! static while elimination times are still being fixed.

mod envelope;
mod range;

use std::ops::Range;

pub use envelope::{build_envelope, EnvelopePiece, EnvelopeSegment, LowerEnvelope};
pub use range::{build_quadrant_structure, Quadrant, QuadrantEntry, QuadrantStructure};

use crate::error::{Error, Result};
use crate::instance::{Instance, ShapeKind};
use crate::schedule::{Best, EliminationSchedule};

/// Static blocks over the priority order. When index `f` is final, the
/// block `[f + 1 − L, f + 1)` with `L` the lowest set bit of `f + 1` is
/// built; a prefix `[0, i)` is then the union of the blocks named by the
/// set bits of `i`.
#[derive(Clone, Debug, Default)]
pub struct PrefixTree {
    /// Block ending at position `e`, stored at `e - 1`.
    blocks: Vec<Option<QuadrantStructure>>,
}

#[inline]
fn lowbit(e: usize) -> usize {
    e & e.wrapping_neg()
}

/// Disjoint blocks whose union is `[0, i)`, largest first.
pub fn prefix_ranges(i: usize) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut e = i;
    while e > 0 {
        let start = e - lowbit(e);
        out.push(start..e);
        e = start;
    }
    out.reverse();
    out
}

impl PrefixTree {
    pub fn new(n: usize) -> Self {
        PrefixTree {
            blocks: (0..n).map(|_| None).collect(),
        }
    }

    /// Records that `entries[f]` is final, where `entries` holds every
    /// index up to `f`, and builds the block ending there.
    pub fn finalize(&mut self, f: usize, entries: &[QuadrantEntry]) -> Result<()> {
        let end = f + 1;
        let start = end - lowbit(end);
        // Blocks nested in the new one are never queried again.
        for slot in &mut self.blocks[start..f] {
            *slot = None;
        }
        self.blocks[f] = Some(build_quadrant_structure(&entries[start..end])?);
        Ok(())
    }

    /// Offers the first hit among indices `[0, i)` to `best`.
    fn offer_prefix(&self, i: usize, center: [f64; 2], rate: f64, best: &mut Best) {
        for r in prefix_ranges(i) {
            let block = self.blocks[r.end - 1]
                .as_ref()
                .expect("prefix blocks are built before use");
            block.offer_to(center, rate, best);
        }
    }

    /// First hit among indices `[0, i)` as `(owner, time)`.
    pub fn query(&self, i: usize, center: [f64; 2], rate: f64) -> Option<(usize, f64)> {
        let mut best = Best::NONE;
        self.offer_prefix(i, center, rate, &mut best);
        best.eliminator().map(|j| (j, best.time))
    }
}

pub fn solve_squares(instance: &Instance) -> Result<EliminationSchedule> {
    if instance.kind() != ShapeKind::Square || instance.dim() != 2 {
        return Err(Error::UnsupportedShape {
            algorithm: "squares",
            required: "square",
        });
    }
    instance.check_structure()?;
    let n = instance.len();
    let mut prefix = PrefixTree::new(n);
    let mut entries = Vec::with_capacity(n);
    let mut best = vec![Best::NONE; n];
    for i in 0..n {
        let c = instance.center(i);
        let center = [c[0], c[1]];
        let rate = instance.rate(i);
        let mut b = Best::NONE;
        prefix.offer_prefix(i, center, rate, &mut b);
        best[i] = b;
        entries.push(QuadrantEntry {
            owner: i,
            center,
            rate,
            end: b.time,
        });
        prefix.finalize(i, &entries)?;
    }
    Ok(EliminationSchedule::from_best(&best))
}
