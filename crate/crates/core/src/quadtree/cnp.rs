use super::cell::{is_candidate_pair, max_level_gap, Cell};
use super::tree::{NodeId, Quadtree};

/// Symmetric candidate-pair lists over the non-empty nodes of a quadtree.
///
/// Empty cells never become occupied, so pairs involving them cannot name
/// a pair of disks and are not stored.
#[derive(Clone, Debug, Default)]
pub struct CandidatePairs {
    adjacency: Vec<Vec<NodeId>>,
    pairs: usize,
}

impl CandidatePairs {
    pub(crate) fn from_forward(mut forward: Vec<Vec<NodeId>>) -> Self {
        let mut adjacency = vec![Vec::new(); forward.len()];
        let mut pairs = 0;
        for (a, list) in forward.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            pairs += list.len();
            for &b in list.iter() {
                adjacency[b].push(a);
            }
        }
        for (a, list) in forward.into_iter().enumerate() {
            adjacency[a].extend(list);
            adjacency[a].sort_unstable();
        }
        CandidatePairs { adjacency, pairs }
    }

    /// Partners of a node (both directions).
    pub fn partners(&self, id: NodeId) -> &[NodeId] {
        &self.adjacency[id]
    }

    /// Number of unordered pairs.
    pub fn len(&self) -> usize {
        self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs == 0
    }

    pub fn is_symmetric(&self) -> bool {
        self.adjacency
            .iter()
            .enumerate()
            .all(|(a, list)| list.iter().all(|&b| self.adjacency[b].binary_search(&a).is_ok()))
    }

    /// All unordered pairs as `(smaller id, larger id)`.
    pub fn pair_list(&self) -> Vec<(NodeId, NodeId)> {
        let mut out: Vec<_> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Same-level or coarser cells that can pair with a cell `k` levels finer.
/// Indices are offsets from the coarse ancestor of the fine cell; the exact
/// filter runs afterwards.
fn window_radius(k: u32) -> i64 {
    // Gap ≤ 2√2(1 + 2^-k) coarse sides, plus the cell holding the fine box.
    let reach = 2.0 * std::f64::consts::SQRT_2 * (1.0 + (-(k as f64)).exp2());
    reach.ceil() as i64 + 1
}

/// Computes candidate pairs by scanning, for every non-empty node, the
/// same-level and coarser levels within a size ratio of `4Δ`.
pub fn compute_cnp(tree: &Quadtree, delta: f64) -> CandidatePairs {
    let kmax = max_level_gap(delta);
    let mut forward: Vec<Vec<NodeId>> = vec![Vec::new(); tree.len()];
    for (id, node) in tree.nodes().iter().enumerate() {
        if !node.nonempty {
            continue;
        }
        let cell = node.cell;
        for k in 0..=kmax.min(cell.level) {
            let anchor = cell.ancestor_at(cell.level - k);
            let r = window_radius(k);
            let limit = 1i64 << anchor.level;
            for dx in -r..=r {
                let x = anchor.x as i64 + dx;
                if !(0..limit).contains(&x) {
                    continue;
                }
                for dy in -r..=r {
                    let y = anchor.y as i64 + dy;
                    if !(0..limit).contains(&y) {
                        continue;
                    }
                    let other = Cell::new(anchor.level, x as u64, y as u64);
                    if !is_candidate_pair(cell, other, delta) {
                        continue;
                    }
                    match tree.lookup(other) {
                        Some(oid) if tree.node(oid).nonempty && (k > 0 || oid > id) => {
                            forward[id].push(oid)
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    CandidatePairs::from_forward(forward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force(tree: &Quadtree, delta: f64) -> Vec<(NodeId, NodeId)> {
        let live: Vec<NodeId> = (0..tree.len()).filter(|&i| tree.node(i).nonempty).collect();
        let mut out = Vec::new();
        for (k, &a) in live.iter().enumerate() {
            for &b in &live[k + 1..] {
                if is_candidate_pair(tree.node(a).cell, tree.node(b).cell, delta) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    #[test]
    fn matches_brute_force_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let pts: Vec<[f64; 2]> = (0..64).map(|_| [rng.random(), rng.random()]).collect();
        let tree = Quadtree::build(&pts).unwrap();
        for delta in [1.0, 3.0, 40.0] {
            let cnp = compute_cnp(&tree, delta);
            assert!(cnp.is_symmetric());
            assert_eq!(cnp.pair_list(), brute_force(&tree, delta), "delta {delta}");
        }
    }

    #[test]
    fn matches_brute_force_clustered() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut pts = Vec::new();
        for c in [[0.2, 0.2], [0.7, 0.6]] {
            for _ in 0..20 {
                pts.push([
                    c[0] + rng.random_range(-1e-3..1e-3),
                    c[1] + rng.random_range(-1e-3..1e-3),
                ]);
            }
        }
        let tree = Quadtree::build(&pts).unwrap();
        let cnp = compute_cnp(&tree, 8.0);
        assert_eq!(cnp.pair_list(), brute_force(&tree, 8.0));
    }

    #[test]
    fn window_covers_reach() {
        assert_eq!(window_radius(0), 7);
        assert!(window_radius(10) >= 4);
    }
}
