use super::tree::{CompressedQuadtree, CqNodeId};
use crate::quadtree::{compute_cnp, is_candidate_pair, Cell, CandidatePairs, Quadtree};

/// Whether `(ν, x)` is a compressed candidate pair, for `|ν| < |x|`: some
/// quadtree node whose deepest compressed ancestor is `x` pairs with `ν`.
/// Those nodes are `x` and the cells of the singular path hidden below it.
/// Larger cells are closer to `ν`, so the largest one within the size
/// ratio decides.
pub(crate) fn compressed_pair_ok(
    t: &CompressedQuadtree,
    nu: Cell,
    x: CqNodeId,
    delta: f64,
    kmax: u32,
) -> bool {
    let xc = t.node(x).cell().expect("cell node");
    let level = xc.level.max(nu.level.saturating_sub(kmax));
    let rep = if level == xc.level {
        xc
    } else {
        match t.compressed_child(x).and_then(|c| t.node(c).cell()) {
            Some(bottom) if level < bottom.level => bottom.ancestor_at(level),
            _ => return false,
        }
    };
    is_candidate_pair(nu, rep, delta)
}

/// Compressed candidate pairs, found top-down: same-level partners from the
/// cell index, larger partners among the pairs of the parent.
pub fn compute_cnp_c(t: &CompressedQuadtree, delta: f64) -> CandidatePairs {
    let kmax = crate::quadtree::cell::max_level_gap(delta);
    let mut order: Vec<CqNodeId> = (0..t.len())
        .filter(|&id| t.node(id).nonempty && !t.node(id).is_point())
        .collect();
    order.sort_by_key(|&id| t.level(id));

    let mut adjacency: Vec<Vec<CqNodeId>> = vec![Vec::new(); t.len()];
    let mut forward: Vec<Vec<CqNodeId>> = vec![Vec::new(); t.len()];
    let mut found = Vec::new();
    for &id in &order {
        let cell = t.node(id).cell().unwrap();
        found.clear();
        let limit = 1i64 << cell.level;
        for dx in -7..=7i64 {
            for dy in -7..=7i64 {
                let (x, y) = (cell.x as i64 + dx, cell.y as i64 + dy);
                if !(0..limit).contains(&x) || !(0..limit).contains(&y) {
                    continue;
                }
                let other = Cell::new(cell.level, x as u64, y as u64);
                if !is_candidate_pair(cell, other, delta) {
                    continue;
                }
                if let Some(oid) = t.lookup(other) {
                    if oid > id && t.node(oid).nonempty {
                        found.push(oid);
                    }
                }
            }
        }
        if let Some(parent) = t.node(id).parent {
            found.extend(adjacency[parent].iter().copied().filter(|&x| {
                t.level(x) < cell.level && compressed_pair_ok(t, cell, x, delta, kmax)
            }));
        }
        for &other in &found {
            adjacency[id].push(other);
            adjacency[other].push(id);
            forward[id].push(other);
        }
    }
    CandidatePairs::from_forward(forward)
}

/// Compressed candidate pairs straight from the definition, through the
/// uncompressed pairs and `π`.
pub fn reference_cnp_c(q: &Quadtree, t: &CompressedQuadtree, delta: f64) -> CandidatePairs {
    let cnp = compute_cnp(q, delta);
    let mut forward: Vec<Vec<CqNodeId>> = vec![Vec::new(); t.len()];
    for (qid, node) in q.nodes().iter().enumerate() {
        let Some(id) = t.lookup(node.cell) else {
            continue;
        };
        for &other in cnp.partners(qid) {
            let p = t.pi(q.node(other).cell);
            if t.level(p) <= node.cell.level {
                forward[id.min(p)].push(id.max(p));
            }
        }
    }
    CandidatePairs::from_forward(forward)
}
