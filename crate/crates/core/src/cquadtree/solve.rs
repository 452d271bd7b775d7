use rustc_hash::FxHashSet;

use super::cnp::compute_cnp_c;
use super::tree::{CompressedQuadtree, CqNodeId};
use crate::error::Result;
use crate::instance::Instance;
use crate::quadtree::{require_disks, CandidatePairs};
use crate::schedule::{Best, EliminationSchedule};

/// How the compressed tree is obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CqBuild {
    /// Build the full quadtree, then compress it.
    #[default]
    Derived,
    /// Build from Morton order.
    Direct,
}

#[derive(Clone, Debug)]
pub struct CompressedRun {
    pub schedule: EliminationSchedule,
    pub tree: CompressedQuadtree,
    pub pairs: CandidatePairs,
}

pub fn solve_cquadtree(instance: &Instance) -> Result<EliminationSchedule> {
    run_cquadtree(instance, CqBuild::Derived, None).map(|r| r.schedule)
}

/// Solves with the chosen build. When `trace` is given, every disk pair
/// whose touch time is evaluated is recorded as `(smaller, larger)`.
pub fn run_cquadtree(
    instance: &Instance,
    build: CqBuild,
    mut trace: Option<&mut FxHashSet<(usize, usize)>>,
) -> Result<CompressedRun> {
    require_disks(instance, "cquadtree")?;
    instance.check_structure()?;
    let n = instance.len();
    let centers = (0..n).map(|i| instance.center(i));
    let tree = match build {
        CqBuild::Derived => CompressedQuadtree::from_centers(centers)?,
        CqBuild::Direct => CompressedQuadtree::from_centers_direct(centers)?,
    };
    let pairs = compute_cnp_c(&tree, instance.rate_ratio());

    let root = tree.root();
    let mut marks: Vec<Option<usize>> = vec![None; tree.len()];
    marks[root] = Some(0);
    let mut best = vec![Best::NONE; n];
    for i in 0..n {
        let rate = instance.rate(i);
        let mut b = Best::NONE;
        let mut below: Option<CqNodeId> = None;
        let mut node: CqNodeId = tree.point_node(i);
        while node != root {
            if b.time < tree.tau_unchecked(node, i, rate) {
                // The disk does not cover `node`, but it may cover some of
                // the cells of the singular path compressed below it. Those
                // cells lift their pairs to `node`.
                if below.is_some_and(|c| covers_hidden_cell(&tree, c, i, rate, b.time)) {
                    examine(&tree, &pairs, &marks, &best, instance, i, node, &mut b, &mut trace);
                }
                break;
            }
            marks[node] = Some(i);
            examine(&tree, &pairs, &marks, &best, instance, i, node, &mut b, &mut trace);
            below = Some(node);
            node = tree.node(node).parent.expect("non-root nodes have parents");
        }
        best[i] = b;
    }
    Ok(CompressedRun {
        schedule: EliminationSchedule::from_best(&best),
        tree,
        pairs,
    })
}

/// Whether the disk covers, by time `t`, the parent cell of `child` while
/// that parent was compressed away.
fn covers_hidden_cell(tree: &CompressedQuadtree, child: CqNodeId, i: usize, rate: f64, t: f64) -> bool {
    let node = tree.node(child);
    let (Some(cell), Some(parent)) = (node.cell(), node.parent) else {
        return false;
    };
    if !node.compressed || cell.level <= tree.level(parent) + 1 {
        return false;
    }
    let hidden = cell.parent().expect("deeper than its parent");
    t >= crate::quadtree::cover_time(hidden, tree.point(i), rate, tree.normalization().scale)
}

#[allow(clippy::too_many_arguments)]
fn examine(
    tree: &CompressedQuadtree,
    pairs: &CandidatePairs,
    marks: &[Option<usize>],
    best: &[Best],
    instance: &Instance,
    i: usize,
    node: CqNodeId,
    b: &mut Best,
    trace: &mut Option<&mut FxHashSet<(usize, usize)>>,
) {
    for &partner in pairs.partners(node) {
        let Some(j) = tree.resolve_occupant(marks, partner) else {
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
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive::solve_naive;
    use crate::quadtree::solve_quadtree;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_disks(n: usize, rates: (f64, f64), seed: u64) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.random(), rng.random()]).collect();
        let rs: Vec<f64> = (0..n).map(|_| rng.random_range(rates.0..=rates.1)).collect();
        Instance::disks(&pts, &rs).unwrap()
    }

    #[test]
    fn three_disks() {
        let inst = Instance::disks(&[[0.0, 0.0], [4.0, 0.0], [1.0, 0.0]], &[1.0; 3]).unwrap();
        assert_eq!(solve_cquadtree(&inst).unwrap(), solve_naive(&inst).unwrap());
    }

    #[test]
    fn two_disks() {
        let inst = Instance::disks(&[[0.0, 0.0], [3.0, 0.0]], &[1.0, 2.0]).unwrap();
        let s = solve_cquadtree(&inst).unwrap();
        assert_eq!((s.records()[0].victim, s.records()[0].time.value()), (1, 1.0));
    }

    #[test]
    fn eliminator_found_through_a_compressed_path() {
        // Disk 3 is eliminated by disk 2 while covering a cell that the
        // compression hid inside the singular path above its leaf.
        let inst = Instance::disks(
            &[[5.0, 3.0], [14.0, 3.0], [9.0, 0.0], [10.0, 1.0]],
            &[3.0, 4.0, 3.0, 4.0],
        )
        .unwrap();
        assert!(crate::validate_instance(&inst, true).is_clean());
        assert_eq!(solve_cquadtree(&inst).unwrap(), solve_naive(&inst).unwrap());
    }

    #[test]
    fn wide_rates_match_naive_and_quadtree() {
        let inst = random_disks(512, (1.0, 256.0), 5);
        let naive = solve_naive(&inst).unwrap();
        assert_eq!(solve_cquadtree(&inst).unwrap(), naive);
        assert_eq!(solve_quadtree(&inst).unwrap(), naive);
        let direct = run_cquadtree(&inst, CqBuild::Direct, None).unwrap();
        assert_eq!(direct.schedule, naive);
    }
}
