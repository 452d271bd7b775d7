use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The decreasing segment `t ↦ intercept − rate·t` on `[0, end]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSegment {
    pub owner: usize,
    pub intercept: f64,
    pub rate: f64,
    /// Last time the segment exists; may be infinite.
    pub end: f64,
}

impl EnvelopeSegment {
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        self.intercept - self.rate * t
    }

    /// Time at which the ray `t ↦ y + v·t` meets the line, if `y` starts
    /// at or below it.
    #[inline]
    fn meets(&self, y: f64, v: f64) -> f64 {
        (self.intercept - y) / (self.rate + v)
    }
}

/// A maximal interval on which one segment is lowest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePiece {
    pub segment: EnvelopeSegment,
    pub start: f64,
    pub end: f64,
}

/// Envelopes up to this many pieces are searched linearly.
const SCAN_PIECES: usize = 16;

/// Lower envelope of segments that all start at `t = 0`.
///
/// Pieces tile `[0, horizon)`; the envelope may jump up where a segment
/// ends. For ray shooting, a segment tree over the pieces keeps, per node,
/// the lower convex hull of the pieces' right endpoints. The ray first
/// meets the envelope in the first piece whose right endpoint lies on or
/// below the ray.
#[derive(Clone, Debug, Default)]
pub struct LowerEnvelope {
    pieces: Vec<EnvelopePiece>,
    /// Per tree node: hull vertex range in `hull`, and whether the range
    /// holds a piece that never ends.
    tree: Vec<(u32, u32, bool)>,
    hull: Vec<[f64; 2]>,
}

/// Builds the envelope by divide and conquer.
pub fn build_envelope(segments: &[EnvelopeSegment]) -> Result<LowerEnvelope> {
    if segments.is_empty() {
        return Err(Error::EmptyEnvelope);
    }
    if let Some(s) = segments
        .iter()
        .find(|s| !(s.rate > 0.0) || !(s.end > 0.0) || !s.intercept.is_finite())
    {
        return Err(Error::InvalidParams(format!(
            "segment of owner {} must have a positive rate and end",
            s.owner
        )));
    }
    Ok(LowerEnvelope::from_pieces(pieces_of(segments)))
}

fn pieces_of(segments: &[EnvelopeSegment]) -> Vec<EnvelopePiece> {
    match segments {
        [s] => vec![EnvelopePiece {
            segment: *s,
            start: 0.0,
            end: s.end,
        }],
        _ => {
            let (l, r) = segments.split_at(segments.len() / 2);
            merge_pieces(&pieces_of(l), &pieces_of(r))
        }
    }
}

/// Whether `a` lies below `b` on the open interval `(lo, hi)`, and where
/// that changes. Returns the lower segment on `(lo, t)` and on `(t, hi)`.
fn lower_of(
    a: &EnvelopeSegment,
    b: &EnvelopeSegment,
    lo: f64,
    hi: f64,
) -> (EnvelopeSegment, f64, EnvelopeSegment) {
    // Ties prefer the higher-priority owner.
    let first = |x: &EnvelopeSegment, y: &EnvelopeSegment| {
        if x.owner <= y.owner {
            *x
        } else {
            *y
        }
    };
    if a.rate == b.rate {
        let low = if a.intercept == b.intercept {
            first(a, b)
        } else if a.intercept < b.intercept {
            *a
        } else {
            *b
        };
        return (low, hi, low);
    }
    // The steeper line is below after the crossing.
    let (steep, flat) = if a.rate > b.rate { (a, b) } else { (b, a) };
    let cross = (steep.intercept - flat.intercept) / (steep.rate - flat.rate);
    if cross <= lo {
        (*steep, hi, *steep)
    } else if cross >= hi {
        (*flat, hi, *flat)
    } else {
        (*flat, cross, *steep)
    }
}

/// Pointwise minimum of two envelopes.
pub(crate) fn merge_pieces(x: &[EnvelopePiece], y: &[EnvelopePiece]) -> Vec<EnvelopePiece> {
    let mut out: Vec<EnvelopePiece> = Vec::with_capacity(x.len() + y.len());
    let mut push = |segment: EnvelopeSegment, start: f64, end: f64| {
        if !(start < end) {
            return;
        }
        if let Some(last) = out.last_mut() {
            if last.segment.owner == segment.owner && last.end == start {
                last.end = end;
                return;
            }
        }
        out.push(EnvelopePiece {
            segment,
            start,
            end,
        });
    };
    let (mut i, mut j) = (0, 0);
    let mut t = 0.0;
    loop {
        // Skip pieces that end at or before `t`.
        while i < x.len() && x[i].end <= t {
            i += 1;
        }
        while j < y.len() && y[j].end <= t {
            j += 1;
        }
        match (x.get(i), y.get(j)) {
            (None, None) => break,
            (Some(p), None) | (None, Some(p)) => {
                push(p.segment, t.max(p.start), p.end);
                t = p.end;
            }
            (Some(p), Some(q)) => {
                let start = t.max(p.start).max(q.start);
                if start > t {
                    // One side has a gap; the other covers `[t, start)`.
                    let cover = if p.start <= t { p } else { q };
                    push(cover.segment, t, start.min(cover.end));
                    t = start.min(cover.end);
                    continue;
                }
                let hi = p.end.min(q.end);
                let (before, cross, after) = lower_of(&p.segment, &q.segment, t, hi);
                push(before, t, cross);
                push(after, cross, hi);
                t = hi;
            }
        }
    }
    out
}

impl LowerEnvelope {
    pub(crate) fn from_pieces(pieces: Vec<EnvelopePiece>) -> Self {
        let mut env = LowerEnvelope {
            pieces,
            tree: Vec::new(),
            hull: Vec::new(),
        };
        if env.pieces.len() > SCAN_PIECES {
            let size = 2 * env.pieces.len().next_power_of_two();
            env.tree = vec![(0, 0, false); size];
            env.build_node(1, 0, env.pieces.len());
        }
        env
    }

    fn build_node(&mut self, node: usize, lo: usize, hi: usize) {
        if hi - lo > 1 {
            let mid = (lo + hi) / 2;
            self.build_node(2 * node, lo, mid);
            self.build_node(2 * node + 1, mid, hi);
        }
        let start = self.hull.len();
        let mut infinite = false;
        for p in &self.pieces[lo..hi] {
            if p.end.is_infinite() {
                infinite = true;
                continue;
            }
            let v = [p.end, p.segment.eval(p.end)];
            while self.hull.len() >= start + 2 {
                let [a, b] = [self.hull[self.hull.len() - 2], self.hull[self.hull.len() - 1]];
                // Drop `b` unless it lies strictly below segment a–v.
                let cross = (b[0] - a[0]) * (v[1] - a[1]) - (b[1] - a[1]) * (v[0] - a[0]);
                if cross <= 0.0 {
                    self.hull.pop();
                } else {
                    break;
                }
            }
            self.hull.push(v);
        }
        self.tree[node] = (start as u32, self.hull.len() as u32, infinite);
    }

    pub fn pieces(&self) -> &[EnvelopePiece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// End of the last piece.
    pub fn horizon(&self) -> f64 {
        self.pieces.last().map_or(0.0, |p| p.end)
    }

    /// Envelope value at `t`, or `None` past the horizon. At a piece
    /// boundary the earlier piece counts, since segments include their end.
    pub fn eval(&self, t: f64) -> Option<f64> {
        let k = self.pieces.partition_point(|p| p.end < t);
        self.pieces
            .get(k)
            .filter(|p| p.start <= t)
            .map(|p| p.segment.eval(t))
    }

    /// First point where the ray `t ↦ y + v·t` meets the envelope, as the
    /// owner and time. The ray must start at or below the envelope.
    ///
    /// Where rounding leaves several pieces hit at about the same time, the
    /// smallest `(time, owner)` among them wins.
    pub fn ray_shoot(&self, y: f64, v: f64) -> Option<(usize, f64)> {
        let k = if self.pieces.len() <= SCAN_PIECES {
            (0..self.pieces.len()).find(|&k| self.hit(k, y, v).is_some())?
        } else {
            self.descend(1, 0, self.pieces.len(), y, v)?
        };
        let mut found = self.hit(k, y, v)?;
        let near = found.1 + 1e-12 * found.1.abs().max(f64::MIN_POSITIVE);
        for other in k..self.pieces.len() {
            if other > k && self.pieces[other].start > near {
                break;
            }
            if let Some(h) = self.hit(other, y, v) {
                if (h.1, h.0) < (found.1, found.0) {
                    found = h;
                }
            }
        }
        Some(found)
    }

    /// The ray meets piece `k`'s segment no later than the piece ends.
    #[inline]
    fn hit(&self, k: usize, y: f64, v: f64) -> Option<(usize, f64)> {
        let p = &self.pieces[k];
        let t = p.segment.meets(y, v);
        (t <= p.end).then_some((p.segment.owner, t))
    }

    fn descend(&self, node: usize, lo: usize, hi: usize, y: f64, v: f64) -> Option<usize> {
        if !self.may_hit(node, y, v) {
            return None;
        }
        if hi - lo == 1 {
            return self.hit(lo, y, v).map(|_| lo);
        }
        let mid = (lo + hi) / 2;
        self.descend(2 * node, lo, mid, y, v)
            .or_else(|| self.descend(2 * node + 1, mid, hi, y, v))
    }

    /// Whether some right endpoint in the node's range may lie on or below
    /// the ray. Errs towards yes; `hit` decides exactly.
    fn may_hit(&self, node: usize, y: f64, v: f64) -> bool {
        let (start, end, infinite) = self.tree[node];
        if infinite {
            return true;
        }
        let hull = &self.hull[start as usize..end as usize];
        if hull.is_empty() {
            return false;
        }
        // y_k − v·t_k is convex along the hull; its minimum sits where the
        // edge slope first reaches v.
        let (mut lo, mut hi) = (0, hull.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            let [a, b] = [hull[mid], hull[mid + 1]];
            if b[1] - a[1] < v * (b[0] - a[0]) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let [tk, yk] = hull[lo];
        let gap = yk - v * tk - y;
        gap <= 1e-12 * (yk.abs() + (v * tk).abs() + y.abs())
    }
}
