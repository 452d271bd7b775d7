use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::quadtree::{Cell, FixedPoint, Normalization, Quadtree, MAX_LEVEL};

pub type CqNodeId = usize;

/// What a node of the compressed tree stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CqPayload {
    Cell(Cell),
    /// A size-zero node for the center of disk `i`.
    Point(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CqChildren {
    None,
    One(CqNodeId),
    Four([CqNodeId; 4]),
}

#[derive(Clone, Debug)]
pub struct CqNode {
    pub payload: CqPayload,
    pub parent: Option<CqNodeId>,
    /// Whether the edge from the parent replaces a singular path or joins a
    /// center's point node to its leaf.
    pub compressed: bool,
    pub children: CqChildren,
    pub nonempty: bool,
}

impl CqNode {
    pub fn cell(&self) -> Option<Cell> {
        match self.payload {
            CqPayload::Cell(c) => Some(c),
            CqPayload::Point(_) => None,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self.payload, CqPayload::Point(_))
    }
}

/// Compressed quadtree: the quadtree with every maximal singular path
/// `ν₁ … ν_k` replaced by one edge `ν₁ → ν_k`, plus a point node under the
/// leaf of every center.
#[derive(Clone, Debug)]
pub struct CompressedQuadtree {
    nodes: Vec<CqNode>,
    index: FxHashMap<Cell, CqNodeId>,
    point_of: Vec<CqNodeId>,
    points: Vec<[f64; 2]>,
    fixed: Vec<FixedPoint>,
    normalization: Normalization,
}

/// Compresses an already built quadtree.
pub fn build_compressed_from_q(tree: &Quadtree) -> CompressedQuadtree {
    let mut b = Builder::new(tree.num_points());
    derive(tree, tree.root(), None, &mut b);
    b.finish(
        tree.points.clone(),
        tree.fixed.clone(),
        tree.normalization(),
    )
}

/// Builds the compressed tree straight from points in the unit square by
/// sorting them in Morton order.
pub fn build_compressed_direct(points: &[[f64; 2]]) -> Result<CompressedQuadtree> {
    build_direct(points.to_vec(), Normalization::IDENTITY)
}

impl CompressedQuadtree {
    /// Normalizes input-unit centers and builds through the full quadtree.
    pub fn from_centers<'a>(centers: impl IntoIterator<Item = &'a [f64]> + Clone) -> Result<Self> {
        Ok(build_compressed_from_q(&Quadtree::from_centers(centers)?))
    }

    /// Normalizes input-unit centers and builds in Morton order.
    pub fn from_centers_direct<'a>(
        centers: impl IntoIterator<Item = &'a [f64]> + Clone,
    ) -> Result<Self> {
        let norm = Normalization::fit(centers.clone());
        let points = centers.into_iter().map(|c| norm.apply(c)).collect();
        build_direct(points, norm)
    }

    pub fn nodes(&self) -> &[CqNode] {
        &self.nodes
    }

    pub fn node(&self, id: CqNodeId) -> &CqNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> CqNodeId {
        0
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// The point node of center `i`.
    pub fn point_node(&self, i: usize) -> CqNodeId {
        self.point_of[i]
    }

    pub fn lookup(&self, cell: Cell) -> Option<CqNodeId> {
        self.index.get(&cell).copied()
    }

    /// Normalized location of center `i`.
    pub fn point(&self, i: usize) -> [f64; 2] {
        self.points[i]
    }

    pub fn fixed_point(&self, i: usize) -> FixedPoint {
        self.fixed[i]
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// Level of a cell node; point nodes sit below every level.
    pub fn level(&self, id: CqNodeId) -> u32 {
        match self.nodes[id].payload {
            CqPayload::Cell(c) => c.level,
            CqPayload::Point(_) => MAX_LEVEL + 1,
        }
    }

    /// The only child, when it hangs off a compressed edge.
    pub fn compressed_child(&self, id: CqNodeId) -> Option<CqNodeId> {
        match self.nodes[id].children {
            CqChildren::One(c) if self.nodes[c].compressed => Some(c),
            _ => None,
        }
    }

    /// Deepest node whose cell contains `cell` (the node itself if present).
    pub fn pi(&self, cell: Cell) -> CqNodeId {
        (0..=cell.level)
            .rev()
            .find_map(|l| self.lookup(cell.ancestor_at(l)))
            .expect("the root contains every cell")
    }

    /// Cells of nodes with four children, sorted.
    pub fn branching_cells(&self) -> Vec<Cell> {
        let mut out: Vec<Cell> = self
            .nodes
            .iter()
            .filter(|n| matches!(n.children, CqChildren::Four(_)))
            .filter_map(CqNode::cell)
            .collect();
        out.sort_unstable();
        out
    }

    /// All cells in the tree, sorted.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out: Vec<Cell> = self.nodes.iter().filter_map(CqNode::cell).collect();
        out.sort_unstable();
        out
    }

    /// First time a disk of `rate` centered at point `i` covers the node;
    /// 0 for point nodes and for leaves holding a center.
    #[inline]
    pub(crate) fn tau_unchecked(&self, id: CqNodeId, i: usize, rate: f64) -> f64 {
        let node = &self.nodes[id];
        match (node.payload, node.children) {
            (CqPayload::Point(_), _) => 0.0,
            (CqPayload::Cell(_), CqChildren::One(c)) if self.nodes[c].is_point() => 0.0,
            (CqPayload::Cell(cell), _) => crate::quadtree::cover_time(
                cell,
                self.points[i],
                rate,
                self.normalization.scale,
            ),
        }
    }

    /// The disk marked on a node, or on its compressed only child.
    pub fn resolve_occupant(&self, marks: &[Option<usize>], id: CqNodeId) -> Option<usize> {
        marks[id].or_else(|| self.compressed_child(id).and_then(|c| marks[c]))
    }
}

struct Builder {
    nodes: Vec<CqNode>,
    index: FxHashMap<Cell, CqNodeId>,
    point_of: Vec<CqNodeId>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder {
            nodes: Vec::with_capacity(4 * n + 2),
            index: FxHashMap::default(),
            point_of: vec![usize::MAX; n],
        }
    }

    fn push(
        &mut self,
        payload: CqPayload,
        parent: Option<CqNodeId>,
        compressed: bool,
        nonempty: bool,
    ) -> CqNodeId {
        let id = self.nodes.len();
        match payload {
            CqPayload::Cell(c) => {
                self.index.insert(c, id);
            }
            CqPayload::Point(i) => self.point_of[i] = id,
        }
        self.nodes.push(CqNode {
            payload,
            parent,
            compressed,
            children: CqChildren::None,
            nonempty,
        });
        id
    }

    /// Adds the top and bottom of a singular path and links them.
    fn path(&mut self, top: Cell, bottom: Cell, parent: Option<CqNodeId>) -> CqNodeId {
        let t = self.push(CqPayload::Cell(top), parent, false, true);
        if bottom == top {
            return t;
        }
        let b = self.push(CqPayload::Cell(bottom), Some(t), true, true);
        self.nodes[t].children = CqChildren::One(b);
        b
    }

    fn attach_point(&mut self, leaf: CqNodeId, i: usize) {
        let z = self.push(CqPayload::Point(i), Some(leaf), true, true);
        self.nodes[leaf].children = CqChildren::One(z);
    }

    fn finish(
        self,
        points: Vec<[f64; 2]>,
        fixed: Vec<FixedPoint>,
        normalization: Normalization,
    ) -> CompressedQuadtree {
        CompressedQuadtree {
            nodes: self.nodes,
            index: self.index,
            point_of: self.point_of,
            points,
            fixed,
            normalization,
        }
    }
}

fn derive(q: &Quadtree, top: usize, parent: Option<CqNodeId>, b: &mut Builder) {
    let mut bottom = top;
    while let Some(ch) = q.node(bottom).children {
        let mut nonempty = ch.iter().filter(|&&c| q.node(c).nonempty);
        match (nonempty.next(), nonempty.next()) {
            (Some(&only), None) => bottom = only,
            _ => break,
        }
    }
    let id = b.path(q.node(top).cell, q.node(bottom).cell, parent);
    match q.node(bottom).children {
        None => {
            let i = q.node(bottom).center.expect("a singular path ends at a center");
            b.attach_point(id, i);
        }
        Some(ch) => {
            let mut ids = [0; 4];
            for (slot, c) in ids.iter_mut().zip(ch) {
                if q.node(c).nonempty {
                    *slot = b.nodes.len();
                    derive(q, c, Some(id), b);
                } else {
                    *slot = b.push(CqPayload::Cell(q.node(c).cell), Some(id), false, false);
                }
            }
            b.nodes[id].children = CqChildren::Four(ids);
        }
    }
}

/// Interleaves 53-bit coordinates: x bits at even positions, y bits at odd.
fn morton(p: FixedPoint) -> u128 {
    fn spread(v: u64) -> u128 {
        let mut v = v as u128;
        v = (v | (v << 32)) & 0x0000_0000_FFFF_FFFF_0000_0000_FFFF_FFFF;
        v = (v | (v << 16)) & 0x0000_FFFF_0000_FFFF_0000_FFFF_0000_FFFF;
        v = (v | (v << 8)) & 0x00FF_00FF_00FF_00FF_00FF_00FF_00FF_00FF;
        v = (v | (v << 4)) & 0x0F0F_0F0F_0F0F_0F0F_0F0F_0F0F_0F0F_0F0F;
        v = (v | (v << 2)) & 0x3333_3333_3333_3333_3333_3333_3333_3333;
        v = (v | (v << 1)) & 0x5555_5555_5555_5555_5555_5555_5555_5555;
        v
    }
    spread(p.x) | (spread(p.y) << 1)
}

/// Inclusive Morton range of a cell.
fn morton_range(cell: Cell) -> (u128, u128) {
    let shift = 2 * (MAX_LEVEL - cell.level);
    let lo = morton(FixedPoint { x: cell.x, y: cell.y }) << shift;
    (lo, lo | ((1u128 << shift) - 1))
}

struct Direct {
    codes: Vec<u128>,
    order: Vec<usize>,
    fixed: Vec<FixedPoint>,
}

impl Direct {
    fn any_in(&self, cell: Cell) -> bool {
        let (lo, hi) = morton_range(cell);
        let k = self.codes.partition_point(|&c| c < lo);
        k < self.codes.len() && self.codes[k] <= hi
    }

    /// Another center lies in the 5×5 block around `p`'s cell at `level`.
    fn crowded(&self, p: FixedPoint, level: u32) -> bool {
        let c = Cell::containing(p, level);
        let limit = 1i64 << level;
        for dx in -2..=2i64 {
            for dy in -2..=2i64 {
                let (x, y) = (c.x as i64 + dx, c.y as i64 + dy);
                if (dx, dy) != (0, 0)
                    && (0..limit).contains(&x)
                    && (0..limit).contains(&y)
                    && self.any_in(Cell::new(level, x as u64, y as u64))
                {
                    return true;
                }
            }
        }
        false
    }

    /// Leaf level of a center that is alone in its cell at `from`: the
    /// shallowest level at which its 5×5 block holds no other center. The
    /// block shrinks with depth, so crowding is monotone and a binary
    /// search applies.
    fn leaf_level(&self, i: usize, from: u32) -> Result<u32> {
        let p = self.fixed[i];
        if self.crowded(p, MAX_LEVEL) {
            let c = Cell::containing(p, MAX_LEVEL);
            let other = (0..self.fixed.len())
                .filter(|&j| j != i)
                .min_by_key(|&j| c.index_distance(Cell::containing(self.fixed[j], MAX_LEVEL)))
                .unwrap_or(i);
            return Err(Error::ResolutionExceeded(i.min(other), i.max(other), MAX_LEVEL));
        }
        let (mut lo, mut hi) = (from, MAX_LEVEL);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.crowded(p, mid) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    fn lca(&self, a: usize, b: usize) -> Cell {
        let h = 127 - (self.codes[a] ^ self.codes[b]).leading_zeros();
        Cell::containing(self.fixed[self.order[a]], MAX_LEVEL - 1 - h / 2)
    }

    fn build(
        &self,
        top: Cell,
        range: std::ops::Range<usize>,
        parent: Option<CqNodeId>,
        b: &mut Builder,
    ) -> Result<()> {
        if range.len() == 1 {
            let i = self.order[range.start];
            let level = self.leaf_level(i, top.level)?;
            let id = b.path(top, Cell::containing(self.fixed[i], level), parent);
            b.attach_point(id, i);
            return Ok(());
        }
        let bottom = self.lca(range.start, range.end - 1);
        let id = b.path(top, bottom, parent);
        let mut ids = [0; 4];
        let mut start = range.start;
        for (slot, child) in ids.iter_mut().zip(bottom.children()) {
            let (_, hi) = morton_range(child);
            let end = start + self.codes[start..range.end].partition_point(|&c| c <= hi);
            if end > start {
                *slot = b.nodes.len();
                self.build(child, start..end, Some(id), b)?;
            } else {
                *slot = b.push(CqPayload::Cell(child), Some(id), false, false);
            }
            start = end;
        }
        b.nodes[id].children = CqChildren::Four(ids);
        Ok(())
    }
}

fn build_direct(points: Vec<[f64; 2]>, normalization: Normalization) -> Result<CompressedQuadtree> {
    if points.is_empty() {
        return Err(Error::TooFewShapes { needed: 1, got: 0 });
    }
    let fixed = crate::quadtree::cell::to_fixed(&points)?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    let keys: Vec<u128> = fixed.iter().map(|&p| morton(p)).collect();
    order.sort_unstable_by_key(|&i| keys[i]);
    let direct = Direct {
        codes: order.iter().map(|&i| keys[i]).collect(),
        order,
        fixed,
    };
    let mut b = Builder::new(points.len());
    direct.build(Cell::ROOT, 0..points.len(), None, &mut b)?;
    Ok(b.finish(points, direct.fixed, normalization))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform(n: usize, seed: u64) -> Vec<[f64; 2]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| [rng.random(), rng.random()]).collect()
    }

    fn assert_shape(t: &CompressedQuadtree) {
        for (id, n) in t.nodes().iter().enumerate() {
            match n.children {
                CqChildren::None => assert!(!n.nonempty || n.is_point()),
                CqChildren::One(c) => {
                    assert!(t.node(c).compressed);
                    assert_eq!(t.node(c).parent, Some(id));
                }
                CqChildren::Four(ch) => {
                    let cell = n.cell().unwrap();
                    for (c, want) in ch.into_iter().zip(cell.children()) {
                        assert_eq!(t.node(c).cell(), Some(want));
                        assert_eq!(t.node(c).parent, Some(id));
                        assert!(!t.node(c).compressed);
                    }
                    assert!(ch.iter().filter(|&&c| t.node(c).nonempty).count() >= 2);
                }
            }
            // No two single-child cell nodes in a row.
            if let (CqChildren::One(c), Some(p)) = (n.children, n.parent) {
                if !t.node(c).is_point() {
                    assert!(!matches!(t.node(p).children, CqChildren::One(_)));
                }
            }
        }
        for i in 0..t.num_points() {
            let z = t.point_node(i);
            assert_eq!(t.node(z).payload, CqPayload::Point(i));
            assert!(t.node(z).compressed);
        }
    }

    #[test]
    fn opposite_corners() {
        let q = Quadtree::build(&[[0.1, 0.1], [0.9, 0.9]]).unwrap();
        let t = build_compressed_from_q(&q);
        assert_shape(&t);
        // Root, its four children, two level-2 leaves, two point nodes.
        assert_eq!(t.len(), 9);
        assert_eq!(t.branching_cells(), vec![Cell::ROOT]);
        let leaf = t.node(t.point_node(0)).parent.unwrap();
        assert_eq!(t.node(leaf).cell(), Some(Cell::new(2, 0, 0)));
        let top = t.node(leaf).parent.unwrap();
        assert_eq!(t.node(top).cell(), Some(Cell::new(1, 0, 0)));
        assert_eq!(t.compressed_child(top), Some(leaf));
    }

    #[test]
    fn single_point() {
        let q = Quadtree::build(&[[0.4, 0.4]]).unwrap();
        let t = build_compressed_from_q(&q);
        assert_eq!(t.len(), 2);
        assert_eq!(t.compressed_child(t.root()), Some(t.point_node(0)));
        let d = build_compressed_direct(&[[0.4, 0.4]]).unwrap();
        assert_eq!(d.cells(), t.cells());
    }

    #[test]
    fn uniform_structure_and_size() {
        for n in [64, 300] {
            let pts = uniform(n, n as u64);
            let t = build_compressed_from_q(&Quadtree::build(&pts).unwrap());
            assert_shape(&t);
            assert!(t.len() <= 10 * n + 2);
        }
    }

    #[test]
    fn direct_matches_derived() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut pts = uniform(1024, 3);
        // Tight cluster, a near-collision across a coarse boundary.
        pts.extend((0..50).map(|_| [0.3 + rng.random::<f64>() * 1e-6, 0.6 + rng.random::<f64>() * 1e-6]));
        pts.push([0.5 - 1e-9, 0.25]);
        pts.push([0.5 + 1e-9, 0.25]);
        let derived = build_compressed_from_q(&Quadtree::build(&pts).unwrap());
        let direct = build_compressed_direct(&pts).unwrap();
        assert_shape(&direct);
        assert_eq!(direct.branching_cells(), derived.branching_cells());
        assert_eq!(direct.cells(), derived.cells());
        for i in 0..pts.len() {
            let a = direct.node(direct.node(direct.point_node(i)).parent.unwrap()).cell();
            let b = derived.node(derived.node(derived.point_node(i)).parent.unwrap()).cell();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn pi_finds_deepest_ancestor() {
        let q = Quadtree::build(&[[0.1, 0.1], [0.9, 0.9]]).unwrap();
        let t = build_compressed_from_q(&q);
        // An empty sibling of the leaf was compressed away.
        let gone = Cell::new(2, 1, 0);
        assert!(t.lookup(gone).is_none());
        assert_eq!(t.node(t.pi(gone)).cell(), Some(Cell::new(1, 0, 0)));
        assert_eq!(t.node(t.pi(Cell::new(2, 0, 0))).cell(), Some(Cell::new(2, 0, 0)));
    }

    #[test]
    fn resolve_occupant_rules() {
        let q = Quadtree::build(&[[0.1, 0.1], [0.9, 0.9]]).unwrap();
        let t = build_compressed_from_q(&q);
        let mut marks = vec![None; t.len()];
        let z = t.point_node(1);
        let leaf = t.node(z).parent.unwrap();
        let top = t.node(leaf).parent.unwrap();
        marks[z] = Some(1);
        assert_eq!(t.resolve_occupant(&marks, leaf), Some(1));
        assert_eq!(t.resolve_occupant(&marks, top), None);
        marks[leaf] = Some(1);
        assert_eq!(t.resolve_occupant(&marks, top), Some(1));
        marks[top] = Some(0);
        assert_eq!(t.resolve_occupant(&marks, top), Some(0));
        assert_eq!(t.resolve_occupant(&marks, t.root()), None);
    }

    #[test]
    fn morton_ranges_nest() {
        let c = Cell::new(3, 5, 2);
        let (lo, hi) = morton_range(c);
        for child in c.children() {
            let (a, b) = morton_range(child);
            assert!(lo <= a && b <= hi);
        }
        let p = FixedPoint { x: 5 << 50, y: 2 << 50 };
        assert_eq!(morton(p), lo);
    }
}
