use rustc_hash::FxHashMap;

use super::cell::{to_fixed, Cell, FixedPoint, Normalization, MAX_LEVEL};
use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Clone, Debug)]
pub struct QNode {
    pub cell: Cell,
    pub parent: Option<NodeId>,
    pub children: Option<[NodeId; 4]>,
    /// The center held by a non-empty leaf.
    pub center: Option<usize>,
    /// Whether the cell contains at least one center.
    pub nonempty: bool,
}

impl QNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

/// Full quadtree over normalized centers.
///
/// A cell is split when it holds two or more centers, or when it holds one
/// center and another center lies in its 5×5 block of same-level cells.
/// Every split materializes all four children. The result: each leaf holds
/// at most one center and each center leaf is ringed by two layers of
/// empty same-level cells.
#[derive(Clone, Debug)]
pub struct Quadtree {
    pub(crate) nodes: Vec<QNode>,
    pub(crate) index: FxHashMap<Cell, NodeId>,
    pub(crate) leaf_of: Vec<NodeId>,
    pub(crate) points: Vec<[f64; 2]>,
    pub(crate) fixed: Vec<FixedPoint>,
    pub(crate) normalization: Normalization,
    depth: u32,
}

impl Quadtree {
    /// Builds the tree over points already inside the unit square.
    pub fn build(points: &[[f64; 2]]) -> Result<Self> {
        Self::build_normalized(points.to_vec(), Normalization::IDENTITY)
    }

    /// Normalizes input-unit centers into the unit square and builds.
    pub fn from_centers<'a>(centers: impl IntoIterator<Item = &'a [f64]> + Clone) -> Result<Self> {
        let norm = Normalization::fit(centers.clone());
        let points = centers.into_iter().map(|c| norm.apply(c)).collect();
        Self::build_normalized(points, norm)
    }

    fn build_normalized(points: Vec<[f64; 2]>, normalization: Normalization) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::TooFewShapes { needed: 1, got: 0 });
        }
        let fixed = to_fixed(&points)?;
        let mut tree = Quadtree {
            nodes: vec![QNode {
                cell: Cell::ROOT,
                parent: None,
                children: None,
                center: None,
                nonempty: true,
            }],
            index: FxHashMap::default(),
            leaf_of: vec![usize::MAX; points.len()],
            points,
            fixed,
            normalization,
            depth: 0,
        };
        tree.index.insert(Cell::ROOT, 0);

        let mut frontier: Vec<(NodeId, Vec<usize>)> = vec![(0, (0..tree.points.len()).collect())];
        let mut level = 0;
        while !frontier.is_empty() {
            let occupied: FxHashMap<(u64, u64), ()> = frontier
                .iter()
                .filter(|(_, pts)| !pts.is_empty())
                .map(|&(id, _)| ((tree.nodes[id].cell.x, tree.nodes[id].cell.y), ()))
                .collect();
            let mut next = Vec::new();
            for (id, pts) in frontier {
                let cell = tree.nodes[id].cell;
                let split = match pts.len() {
                    0 => false,
                    1 => crowded(cell, &occupied),
                    _ => true,
                };
                if !split {
                    if let [p] = pts[..] {
                        tree.nodes[id].center = Some(p);
                        tree.leaf_of[p] = id;
                    }
                    continue;
                }
                if level == MAX_LEVEL {
                    let a = pts[0];
                    let b = crowding_partner(&tree, a, &pts);
                    return Err(Error::ResolutionExceeded(a.min(b), a.max(b), MAX_LEVEL));
                }
                let mut parts: [Vec<usize>; 4] = Default::default();
                for p in pts {
                    let c = Cell::containing(tree.fixed[p], level + 1);
                    parts[((c.x & 1) | ((c.y & 1) << 1)) as usize].push(p);
                }
                let mut ids = [0; 4];
                for (q, (child, part)) in cell.children().into_iter().zip(parts).enumerate() {
                    let cid = tree.nodes.len();
                    tree.nodes.push(QNode {
                        cell: child,
                        parent: Some(id),
                        children: None,
                        center: None,
                        nonempty: !part.is_empty(),
                    });
                    tree.index.insert(child, cid);
                    ids[q] = cid;
                    next.push((cid, part));
                }
                tree.nodes[id].children = Some(ids);
            }
            frontier = next;
            level += 1;
        }
        tree.depth = tree.nodes.iter().map(|n| n.cell.level).max().unwrap_or(0);
        Ok(tree)
    }

    pub fn nodes(&self) -> &[QNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &QNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    /// Deepest level of any node.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// The leaf holding center `i`.
    pub fn leaf_of(&self, i: usize) -> NodeId {
        self.leaf_of[i]
    }

    pub fn lookup(&self, cell: Cell) -> Option<NodeId> {
        self.index.get(&cell).copied()
    }

    pub fn point(&self, i: usize) -> [f64; 2] {
        self.points[i]
    }

    pub fn fixed_point(&self, i: usize) -> FixedPoint {
        self.fixed[i]
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Ancestors of a node from itself up to the root.
    pub fn path_to_root(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(Some(id), move |&n| self.nodes[n].parent)
    }

    /// First time (in input units) at which a disk centered at point `i`
    /// and growing at `rate` covers the node's cell; 0 for leaves.
    pub fn tau(&self, id: NodeId, i: usize, rate: f64) -> Result<f64> {
        if !self.nodes[id].cell.contains(self.fixed[i]) {
            return Err(Error::InvalidParams(format!(
                "center {} is not inside cell {:?}",
                i + 1,
                self.nodes[id].cell
            )));
        }
        Ok(self.tau_unchecked(id, i, rate))
    }

    #[inline]
    pub(crate) fn tau_unchecked(&self, id: NodeId, i: usize, rate: f64) -> f64 {
        let node = &self.nodes[id];
        if node.is_leaf() {
            0.0
        } else {
            cover_time(node.cell, self.points[i], rate, self.normalization.scale)
        }
    }
}

/// Time for a disk at normalized `p` growing at `rate` (input units) to cover
/// `cell`: the farthest corner decides.
#[inline]
pub(crate) fn cover_time(cell: Cell, p: [f64; 2], rate: f64, scale: f64) -> f64 {
    let far = cell
        .corners()
        .iter()
        .map(|c| (c[0] - p[0]).hypot(c[1] - p[1]))
        .fold(0.0, f64::max);
    far * scale / rate
}

fn crowded(cell: Cell, occupied: &FxHashMap<(u64, u64), ()>) -> bool {
    let (x, y) = (cell.x as i64, cell.y as i64);
    let limit = 1i64 << cell.level;
    for dx in -2..=2i64 {
        for dy in -2..=2i64 {
            let (nx, ny) = (x + dx, y + dy);
            if (dx, dy) != (0, 0)
                && (0..limit).contains(&nx)
                && (0..limit).contains(&ny)
                && occupied.contains_key(&(nx as u64, ny as u64))
            {
                return true;
            }
        }
    }
    false
}

/// Some other point still too close to `a` at the deepest level, for the
/// resolution error message.
fn crowding_partner(tree: &Quadtree, a: usize, pts: &[usize]) -> usize {
    if let Some(&b) = pts.iter().find(|&&b| b != a) {
        return b;
    }
    let ca = Cell::containing(tree.fixed[a], MAX_LEVEL);
    (0..tree.points.len())
        .filter(|&b| b != a)
        .min_by_key(|&b| ca.index_distance(Cell::containing(tree.fixed[b], MAX_LEVEL)))
        .unwrap_or(a)
}
