use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deepest cell level. Normalized coordinates are held as 53-bit fixed
/// point, so a level-53 cell is a single representable coordinate step.
pub const MAX_LEVEL: u32 = 53;

const FIXED_ONE: f64 = (1u64 << MAX_LEVEL) as f64;

/// A dyadic square `[x, x+1) × [y, y+1)` scaled by `2^-level` inside the
/// unit square. Cells touching the unit square's top or right edge are
/// closed there, so every point of `[0,1]²` lies in exactly one cell per
/// level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub level: u32,
    pub x: u64,
    pub y: u64,
}

impl Cell {
    pub const ROOT: Cell = Cell {
        level: 0,
        x: 0,
        y: 0,
    };

    pub fn new(level: u32, x: u64, y: u64) -> Self {
        debug_assert!(level <= MAX_LEVEL && x >> level == 0 && y >> level == 0);
        Cell { level, x, y }
    }

    /// The level-`level` cell containing a fixed-point location.
    #[inline]
    pub fn containing(p: FixedPoint, level: u32) -> Self {
        let shift = MAX_LEVEL - level;
        Cell {
            level,
            x: p.x >> shift,
            y: p.y >> shift,
        }
    }

    pub fn parent(self) -> Option<Cell> {
        (self.level > 0).then(|| self.ancestor_at(self.level - 1))
    }

    /// The ancestor (or self) at a coarser or equal level.
    #[inline]
    pub fn ancestor_at(self, level: u32) -> Cell {
        debug_assert!(level <= self.level);
        let k = self.level - level;
        Cell {
            level,
            x: self.x >> k,
            y: self.y >> k,
        }
    }

    /// Children in quadrant order `(x bit) | (y bit) << 1`.
    pub fn children(self) -> [Cell; 4] {
        let (l, x, y) = (self.level + 1, self.x << 1, self.y << 1);
        [
            Cell::new(l, x, y),
            Cell::new(l, x + 1, y),
            Cell::new(l, x, y + 1),
            Cell::new(l, x + 1, y + 1),
        ]
    }

    /// Side length in normalized units.
    pub fn side(self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    /// Diameter `|ν|` in normalized units.
    pub fn diameter(self) -> f64 {
        std::f64::consts::SQRT_2 * self.side()
    }

    /// `[x_min, y_min, x_max, y_max]` in normalized units.
    pub fn bounds(self) -> [f64; 4] {
        let s = self.side();
        [
            self.x as f64 * s,
            self.y as f64 * s,
            (self.x + 1) as f64 * s,
            (self.y + 1) as f64 * s,
        ]
    }

    pub fn corners(self) -> [[f64; 2]; 4] {
        let [x0, y0, x1, y1] = self.bounds();
        [[x0, y0], [x1, y0], [x0, y1], [x1, y1]]
    }

    /// Whether `self` is a proper ancestor of `other`.
    #[inline]
    pub fn is_ancestor_of(self, other: Cell) -> bool {
        self.level < other.level && other.ancestor_at(self.level) == self
    }

    /// Whether one cell contains the other.
    #[inline]
    pub fn related(self, other: Cell) -> bool {
        if self.level <= other.level {
            other.ancestor_at(self.level) == self
        } else {
            self.ancestor_at(other.level) == other
        }
    }

    #[inline]
    pub fn contains(self, p: FixedPoint) -> bool {
        Cell::containing(p, self.level) == self
    }

    /// Chebyshev distance between same-level cell indices.
    pub fn index_distance(self, other: Cell) -> u64 {
        debug_assert_eq!(self.level, other.level);
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }

    /// Squared smallest distance `d(ν, ν')` between the two closed cells, in
    /// units of the finer cell's side. Exact.
    pub fn gap_squared(self, other: Cell) -> u128 {
        let (fine, coarse) = if self.level >= other.level {
            (self, other)
        } else {
            (other, self)
        };
        let k = fine.level - coarse.level;
        let axis_gap = |f: u64, c: u64| -> u128 {
            let (f0, f1) = (f as u128, f as u128 + 1);
            let (c0, c1) = ((c as u128) << k, ((c as u128) + 1) << k);
            c0.saturating_sub(f1).max(f0.saturating_sub(c1))
        };
        let (gx, gy) = (axis_gap(fine.x, coarse.x), axis_gap(fine.y, coarse.y));
        gx * gx + gy * gy
    }
}

/// Whether two cells form a candidate pair for rate ratio `delta`:
/// unrelated, diameters within a factor `4Δ` of each other, and
/// `d(ν, ν') ≤ 2(|ν| + |ν'|)`.
pub fn is_candidate_pair(a: Cell, b: Cell, delta: f64) -> bool {
    if a.related(b) {
        return false;
    }
    let k = a.level.abs_diff(b.level);
    if (k as f64).exp2() > 4.0 * delta {
        return false;
    }
    // In finer-side units: |fine| = √2, |coarse| = √2·2^k, so the distance
    // test squares to gap² ≤ 8(1 + 2^k)².
    let sum = 1u128 + (1u128 << k);
    a.gap_squared(b) <= 8 * sum * sum
}

/// Largest level gap `k` with `2^k ≤ 4Δ`.
pub fn max_level_gap(delta: f64) -> u32 {
    let mut k = 0;
    while k < MAX_LEVEL && ((k + 1) as f64).exp2() <= 4.0 * delta {
        k += 1;
    }
    k
}

/// A normalized location as 53-bit fixed point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedPoint {
    pub x: u64,
    pub y: u64,
}

impl FixedPoint {
    /// Exact for coordinates in `[0, 1)`; 1.0 lands in the last cell.
    pub fn from_normalized(p: [f64; 2]) -> Self {
        let q = |v: f64| ((v * FIXED_ONE) as u64).min((1u64 << MAX_LEVEL) - 1);
        FixedPoint { x: q(p[0]), y: q(p[1]) }
    }
}

/// Affine map from input coordinates into the unit square.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub translate: [f64; 2],
    pub scale: f64,
}

impl Normalization {
    pub const IDENTITY: Normalization = Normalization {
        translate: [0.0, 0.0],
        scale: 1.0,
    };

    /// Bounding square of the points, padded by `1e-9` relative so that no
    /// point maps onto the far edge.
    pub fn fit<'a>(points: impl IntoIterator<Item = &'a [f64]>) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for a in 0..2 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        if !lo[0].is_finite() {
            return Self::IDENTITY;
        }
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let scale = if extent > 0.0 {
            extent * (1.0 + 1e-9)
        } else {
            1.0
        };
        Normalization {
            translate: lo,
            scale,
        }
    }

    pub fn apply(&self, p: &[f64]) -> [f64; 2] {
        [
            (p[0] - self.translate[0]) / self.scale,
            (p[1] - self.translate[1]) / self.scale,
        ]
    }
}

/// Checks that points lie in the closed unit square and are distinct at
/// fixed-point resolution; returns them in fixed point.
pub(crate) fn to_fixed(points: &[[f64; 2]]) -> Result<Vec<FixedPoint>> {
    let mut fixed = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if !p.iter().all(|v| (0.0..=1.0).contains(v)) {
            return Err(Error::InvalidInstance(format!(
                "normalized point {} = {:?} outside the unit square",
                i + 1,
                p
            )));
        }
        fixed.push(FixedPoint::from_normalized(*p));
    }
    let mut order: Vec<usize> = (0..fixed.len()).collect();
    order.sort_unstable_by_key(|&i| fixed[i]);
    for w in order.windows(2) {
        if fixed[w[0]] == fixed[w[1]] {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::InvalidInstance(format!(
                "duplicate centers after normalization: shapes {} and {}",
                a + 1,
                b + 1
            )));
        }
    }
    Ok(fixed)
}
