use serde::{Deserialize, Serialize};

use super::envelope::{merge_pieces, EnvelopePiece, EnvelopeSegment, LowerEnvelope};
use crate::schedule::Best;

/// The four cones around a center in which one coordinate decides the L∞
/// distance. North holds the points with `y_j − y_q ≥ |x_j − x_q|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    North,
    East,
    South,
    West,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::North, Quadrant::East, Quadrant::South, Quadrant::West];

    /// Range keys `(a, b)` and the deciding coordinate `c` of a point.
    /// `p_j` is in this quadrant of `q` iff `a_j ≥ a_q` and `b_j ≥ b_q`,
    /// and then the L∞ distance is `c_j − c_q`.
    #[inline]
    pub fn keys(self, p: [f64; 2]) -> (f64, f64, f64) {
        let (u, w) = (p[0] + p[1], p[1] - p[0]);
        match self {
            Quadrant::North => (u, w, p[1]),
            Quadrant::South => (-u, -w, -p[1]),
            Quadrant::East => (u, -w, p[0]),
            Quadrant::West => (-u, w, -p[0]),
        }
    }

    pub fn contains(self, q: [f64; 2], p: [f64; 2]) -> bool {
        let (aq, bq, _) = self.keys(q);
        let (ap, bp, _) = self.keys(p);
        ap >= aq && bp >= bq
    }
}

/// A square whose elimination time is final.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadrantEntry {
    pub owner: usize,
    pub center: [f64; 2],
    pub rate: f64,
    /// Elimination time; infinite for the survivor.
    pub end: f64,
}

#[derive(Clone, Copy, Debug)]
struct Keyed {
    a: f64,
    b: f64,
    segment: EnvelopeSegment,
}

/// Segment tree over a sorted key array; `nodes[k]` holds the payload for
/// the range of heap node `k`.
#[derive(Clone, Debug)]
struct SuffixTree<T> {
    keys: Vec<f64>,
    nodes: Vec<Option<T>>,
}

impl<T> SuffixTree<T> {
    fn build(keys: Vec<f64>, leaf: &mut impl FnMut(usize) -> T, join: &mut impl FnMut(&T, &T) -> T) -> Self {
        let mut tree = SuffixTree {
            nodes: (0..2 * keys.len().next_power_of_two()).map(|_| None).collect(),
            keys,
        };
        let len = tree.keys.len();
        tree.fill(1, 0, len, leaf, join);
        tree
    }

    fn fill(
        &mut self,
        node: usize,
        lo: usize,
        hi: usize,
        leaf: &mut impl FnMut(usize) -> T,
        join: &mut impl FnMut(&T, &T) -> T,
    ) {
        let value = if hi - lo == 1 {
            leaf(lo)
        } else {
            let mid = (lo + hi) / 2;
            self.fill(2 * node, lo, mid, leaf, join);
            self.fill(2 * node + 1, mid, hi, leaf, join);
            let (l, r) = (&self.nodes[2 * node], &self.nodes[2 * node + 1]);
            join(l.as_ref().unwrap(), r.as_ref().unwrap())
        };
        self.nodes[node] = Some(value);
    }

    /// Calls `visit` on the canonical nodes of the entries with key `≥ key`.
    fn suffix(&self, key: f64, visit: &mut impl FnMut(&T)) {
        let from = self.keys.partition_point(|&k| k < key);
        if from < self.keys.len() {
            self.walk(1, 0, self.keys.len(), from, visit);
        }
    }

    fn walk(&self, node: usize, lo: usize, hi: usize, from: usize, visit: &mut impl FnMut(&T)) {
        if from <= lo {
            visit(self.nodes[node].as_ref().unwrap());
            return;
        }
        let mid = (lo + hi) / 2;
        if from < mid {
            self.walk(2 * node, lo, mid, from, visit);
        }
        self.walk(2 * node + 1, mid, hi, from, visit);
    }
}

/// Envelopes over the entries of one primary range, sorted by `b`.
#[derive(Clone, Debug)]
struct Secondary {
    tree: SuffixTree<LowerEnvelope>,
}

impl Secondary {
    fn new(entries: &[Keyed]) -> Self {
        let mut sorted = entries.to_vec();
        sorted.sort_by(|x, y| x.b.total_cmp(&y.b));
        let keys = sorted.iter().map(|e| e.b).collect();
        let mut leaf = |k: usize| {
            let s = sorted[k].segment;
            LowerEnvelope::from_pieces(vec![EnvelopePiece {
                segment: s,
                start: 0.0,
                end: s.end,
            }])
        };
        let mut join = |l: &LowerEnvelope, r: &LowerEnvelope| {
            LowerEnvelope::from_pieces(merge_pieces(l.pieces(), r.pieces()))
        };
        Secondary {
            tree: SuffixTree::build(keys, &mut leaf, &mut join),
        }
    }
}

/// Two-level range tree over rotated coordinates for one quadrant.
#[derive(Clone, Debug)]
struct RangeTree {
    primary: SuffixTree<Secondary>,
}

impl RangeTree {
    fn new(quadrant: Quadrant, entries: &[QuadrantEntry]) -> Self {
        let mut keyed: Vec<Keyed> = entries
            .iter()
            .map(|e| {
                let (a, b, c) = quadrant.keys(e.center);
                Keyed {
                    a,
                    b,
                    segment: EnvelopeSegment {
                        owner: e.owner,
                        intercept: c,
                        rate: e.rate,
                        end: e.end,
                    },
                }
            })
            .collect();
        keyed.sort_by(|x, y| x.a.total_cmp(&y.a));
        let keys = keyed.iter().map(|e| e.a).collect();
        // Each primary node sees a contiguous run of the a-order.
        let mut leaf = |k: usize| (k, k + 1);
        let mut join = |l: &(usize, usize), r: &(usize, usize)| (l.0, r.1);
        let spans = SuffixTree::build(keys, &mut leaf, &mut join);
        let nodes = spans
            .nodes
            .iter()
            .map(|span| span.map(|(lo, hi)| Secondary::new(&keyed[lo..hi])))
            .collect();
        RangeTree {
            primary: SuffixTree {
                keys: spans.keys,
                nodes,
            },
        }
    }

    fn query(&self, quadrant: Quadrant, center: [f64; 2], rate: f64, best: &mut Best) {
        let (a, b, c) = quadrant.keys(center);
        self.primary.suffix(a, &mut |sec: &Secondary| {
            sec.tree.suffix(b, &mut |env: &LowerEnvelope| {
                if let Some((owner, t)) = env.ray_shoot(c, rate) {
                    best.offer(t, owner);
                }
            })
        });
    }
}

/// Answers elimination queries against a set of squares with final
/// elimination times: the first square the query square touches while
/// that square is still alive.
#[derive(Clone, Debug)]
pub struct QuadrantStructure {
    trees: [RangeTree; 4],
    len: usize,
}

pub fn build_quadrant_structure(entries: &[QuadrantEntry]) -> crate::Result<QuadrantStructure> {
    if entries.is_empty() {
        return Err(crate::Error::EmptyEnvelope);
    }
    if let Some(e) = entries.iter().find(|e| !(e.rate > 0.0) || !(e.end > 0.0)) {
        return Err(crate::Error::InvalidParams(format!(
            "square {} needs a positive rate and elimination time",
            e.owner
        )));
    }
    Ok(QuadrantStructure {
        trees: Quadrant::ALL.map(|q| RangeTree::new(q, entries)),
        len: entries.len(),
    })
}

impl QuadrantStructure {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// First hit in one quadrant as `(owner, time)`.
    pub fn query_quadrant(&self, quadrant: Quadrant, center: [f64; 2], rate: f64) -> Option<(usize, f64)> {
        let mut best = Best::NONE;
        self.trees[quadrant as usize].query(quadrant, center, rate, &mut best);
        best.eliminator().map(|j| (j, best.time))
    }

    /// First hit over all quadrants, ties to the smaller owner.
    pub fn query(&self, center: [f64; 2], rate: f64) -> Option<(usize, f64)> {
        let mut best = Best::NONE;
        self.offer_to(center, rate, &mut best);
        best.eliminator().map(|j| (j, best.time))
    }

    pub(crate) fn offer_to(&self, center: [f64; 2], rate: f64, best: &mut Best) {
        for q in Quadrant::ALL {
            self.trees[q as usize].query(q, center, rate, best);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;
    use crate::naive::solve_naive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn entry(owner: usize, center: [f64; 2], rate: f64, end: f64) -> QuadrantEntry {
        QuadrantEntry {
            owner,
            center,
            rate,
            end,
        }
    }

    #[test]
    fn north_hit() {
        let s = build_quadrant_structure(&[entry(0, [0.0, 2.0], 1.0, f64::INFINITY)]).unwrap();
        assert_eq!(s.query_quadrant(Quadrant::North, [0.0, 0.0], 1.0), Some((0, 1.0)));
        assert_eq!(s.query([0.0, 0.0], 1.0), Some((0, 1.0)));
    }

    #[test]
    fn east_only() {
        let s = build_quadrant_structure(&[entry(0, [3.0, 0.5], 2.0, f64::INFINITY)]).unwrap();
        let q = [0.0, 0.0];
        for quad in [Quadrant::North, Quadrant::South, Quadrant::West] {
            assert_eq!(s.query_quadrant(quad, q, 1.0), None, "{quad:?}");
        }
        assert_eq!(s.query_quadrant(Quadrant::East, q, 1.0), Some((0, 1.0)));
    }

    #[test]
    fn quadrants_cover_the_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let q = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let p = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let n = Quadrant::ALL.iter().filter(|d| d.contains(q, p)).count();
            assert!((1..=2).contains(&n));
        }
        // Diagonal points sit on two boundaries.
        assert!(Quadrant::North.contains([0.0, 0.0], [1.0, 1.0]));
        assert!(Quadrant::East.contains([0.0, 0.0], [1.0, 1.0]));
    }

    #[test]
    fn random_queries_match_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let pts: Vec<[f64; 2]> = (0..64).map(|_| [rng.random(), rng.random()]).collect();
        let rates: Vec<f64> = (0..64).map(|_| rng.random_range(1.0..4.0)).collect();
        let inst = Instance::squares(&pts, &rates).unwrap();
        let sched = solve_naive(&inst).unwrap();
        let mut end = vec![f64::INFINITY; 64];
        for r in sched.records() {
            end[r.victim] = r.time.value();
        }
        let entries: Vec<QuadrantEntry> =
            (0..64).map(|j| entry(j, pts[j], rates[j], end[j])).collect();
        let s = build_quadrant_structure(&entries).unwrap();
        for _ in 0..64 {
            let q: [f64; 2] = [rng.random(), rng.random()];
            let v = rng.random_range(1.0..4.0);
            let expect = entries
                .iter()
                .map(|e| {
                    let d = (e.center[0] - q[0]).abs().max((e.center[1] - q[1]).abs());
                    (d / (v + e.rate), e.owner, e.end)
                })
                .filter(|&(t, _, end)| t <= end)
                .map(|(t, j, _)| (t, j))
                .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)))
                .map(|(t, j)| (j, t));
            assert_eq!(s.query(q, v), expect);
        }
    }
}
