use rustc_hash::FxHashSet;

use super::cnp::{compute_cnp, CandidatePairs};
use super::tree::{NodeId, Quadtree};
use crate::error::{Error, Result};
use crate::instance::{Instance, ShapeKind};
use crate::schedule::{Best, EliminationSchedule};

/// Result of a quadtree solve together with the sizes of its structures.
#[derive(Clone, Debug)]
pub struct QuadtreeRun {
    pub schedule: EliminationSchedule,
    pub tree: Quadtree,
    pub pairs: CandidatePairs,
}

pub fn solve_quadtree(instance: &Instance) -> Result<EliminationSchedule> {
    run_quadtree(instance, None).map(|r| r.schedule)
}

/// Solves and keeps the tree and pairs. When `trace` is given, every disk
/// pair whose touch time is evaluated is recorded as `(smaller, larger)`.
pub fn run_quadtree(
    instance: &Instance,
    mut trace: Option<&mut FxHashSet<(usize, usize)>>,
) -> Result<QuadtreeRun> {
    require_disks(instance, "quadtree")?;
    instance.check_structure()?;
    let n = instance.len();
    let tree = Quadtree::from_centers((0..n).map(|i| instance.center(i)))?;
    let pairs = compute_cnp(&tree, instance.rate_ratio());

    let root = tree.root();
    let mut occupant: Vec<Option<usize>> = vec![None; tree.len()];
    occupant[root] = Some(0);
    let mut best = vec![Best::NONE; n];
    for i in 0..n {
        let rate = instance.rate(i);
        let mut b = Best::NONE;
        let mut node: NodeId = tree.leaf_of(i);
        while node != root && b.time >= tree.tau_unchecked(node, i, rate) {
            occupant[node] = Some(i);
            for &partner in pairs.partners(node) {
                let Some(j) = occupant[partner] else {
                    continue;
                };
                if j >= i {
                    continue;
                }
                let t = instance.touch(i, j);
                if let Some(log) = trace.as_deref_mut() {
                    log.insert((j, i));
                }
                if t <= best[j].time {
                    b.offer(t, j);
                }
            }
            node = tree.node(node).parent.expect("non-root nodes have parents");
        }
        best[i] = b;
    }
    Ok(QuadtreeRun {
        schedule: EliminationSchedule::from_best(&best),
        tree,
        pairs,
    })
}

pub(crate) fn require_disks(instance: &Instance, algorithm: &'static str) -> Result<()> {
    if instance.kind() != ShapeKind::Disk || instance.dim() != 2 {
        return Err(Error::UnsupportedShape {
            algorithm,
            required: "disk",
        });
    }
    Ok(())
}
