//! Spread and rate-ratio statistics used for reporting and for the
//! candidate-pair thresholds.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Largest instance for which the exact O(n²) spread is computed.
pub const EXACT_SPREAD_MAX_SHAPES: usize = 4096;

/// Morton-order predecessors compared when seeding the closest-pair search.
const MORTON_WINDOW: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceStats {
    /// Largest rate value over smallest rate value.
    pub delta: f64,
    /// Bounding-box diagonal over closest-pair distance. The diagonal
    /// overestimates the diameter by at most √d, so this is a reporting
    /// figure, not the spread itself.
    pub phi_approx: f64,
    /// Exact spread, when requested.
    pub phi_exact: Option<f64>,
    /// `min(log2 Φ, log2 Δ)`, using the exact spread when available.
    pub alpha: f64,
}

pub fn compute_stats(instance: &Instance, exact: bool) -> Result<InstanceStats> {
    let n = instance.len();
    if n < 2 {
        return Err(Error::TooFewShapes { needed: 2, got: n });
    }
    if exact && n > EXACT_SPREAD_MAX_SHAPES {
        return Err(Error::TooManyShapes {
            algorithm: "exact spread",
            max: EXACT_SPREAD_MAX_SHAPES,
            got: n,
        });
    }
    let delta = instance.rate_ratio();
    let min_dist = closest_pair_distance(instance);
    if min_dist == 0.0 {
        return Err(Error::InvalidInstance("duplicate centers".into()));
    }
    let phi_approx = (bbox_diagonal(instance) / min_dist).max(1.0);
    let phi_exact = exact.then(|| exact_spread(instance));
    let phi = phi_exact.unwrap_or(phi_approx);
    Ok(InstanceStats {
        delta,
        phi_approx,
        phi_exact,
        alpha: phi.log2().min(delta.log2()),
    })
}

/// Spread by brute force over all pairs.
pub fn exact_spread(instance: &Instance) -> f64 {
    let n = instance.len();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        for j in i + 1..n {
            let d = dist(instance.center(i), instance.center(j));
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    hi / lo
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn bbox(instance: &Instance) -> (Vec<f64>, Vec<f64>) {
    let d = instance.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for i in 0..instance.len() {
        for (a, &c) in instance.center(i).iter().enumerate() {
            lo[a] = lo[a].min(c);
            hi[a] = hi[a].max(c);
        }
    }
    (lo, hi)
}

fn bbox_diagonal(instance: &Instance) -> f64 {
    let (lo, hi) = bbox(instance);
    dist(&lo, &hi)
}

/// Closest-pair distance. In the plane: a Morton-order window scan gives an
/// upper bound, then a grid of that cell size finds the true minimum. In
/// other dimensions: a sweep along the first axis.
fn closest_pair_distance(instance: &Instance) -> f64 {
    if instance.dim() == 2 {
        planar_closest_pair(instance)
    } else {
        sweep_closest_pair(instance)
    }
}

fn planar_closest_pair(instance: &Instance) -> f64 {
    let n = instance.len();
    let (lo, hi) = bbox(instance);
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let quantize = |v: f64, origin: f64| (((v - origin) / extent) * u32::MAX as f64) as u32;
    let mut keyed: Vec<(u64, usize)> = (0..n)
        .map(|i| {
            let c = instance.center(i);
            (
                interleave(quantize(c[0], lo[0]), quantize(c[1], lo[1])),
                i,
            )
        })
        .collect();
    keyed.sort_unstable();

    let mut best = f64::INFINITY;
    for k in 1..n {
        for w in k.saturating_sub(MORTON_WINDOW)..k {
            best = best.min(dist(
                instance.center(keyed[k].1),
                instance.center(keyed[w].1),
            ));
        }
    }
    if best == 0.0 {
        return 0.0;
    }

    // Any pair closer than `best` lies in the same or adjacent grid cells.
    let h = best;
    let cell = |c: &[f64]| {
        (
            ((c[0] - lo[0]) / h).floor() as i64,
            ((c[1] - lo[1]) / h).floor() as i64,
        )
    };
    let mut grid: FxHashMap<(i64, i64), Vec<usize>> = FxHashMap::default();
    for i in 0..n {
        grid.entry(cell(instance.center(i))).or_default().push(i);
    }
    for i in 0..n {
        let (cx, cy) = cell(instance.center(i));
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = grid.get(&(cx + dx, cy + dy)) {
                    for &j in bucket.iter().filter(|&&j| j > i) {
                        best = best.min(dist(instance.center(i), instance.center(j)));
                    }
                }
            }
        }
    }
    best
}

fn sweep_closest_pair(instance: &Instance) -> f64 {
    let mut order: Vec<usize> = (0..instance.len()).collect();
    order.sort_by(|&a, &b| instance.center(a)[0].total_cmp(&instance.center(b)[0]));
    let mut best = f64::INFINITY;
    for (k, &i) in order.iter().enumerate() {
        let xi = instance.center(i)[0];
        for &j in &order[k + 1..] {
            if instance.center(j)[0] - xi >= best {
                break;
            }
            best = best.min(dist(instance.center(i), instance.center(j)));
        }
    }
    best
}

fn interleave(x: u32, y: u32) -> u64 {
    fn spread(v: u32) -> u64 {
        let mut v = v as u64;
        v = (v | (v << 16)) & 0x0000_FFFF_0000_FFFF;
        v = (v | (v << 8)) & 0x00FF_00FF_00FF_00FF;
        v = (v | (v << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
        v = (v | (v << 2)) & 0x3333_3333_3333_3333;
        v = (v | (v << 1)) & 0x5555_5555_5555_5555;
        v
    }
    spread(x) | (spread(y) << 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn delta_is_rate_ratio() {
        let inst =
            Instance::disks(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], &[1.0, 2.0, 4.0]).unwrap();
        assert_eq!(compute_stats(&inst, false).unwrap().delta, 4.0);
    }

    #[test]
    fn two_points_have_unit_spread() {
        let inst = Instance::disks(&[[0.0, 0.0], [1.0, 0.0]], &[1.0, 1.0]).unwrap();
        let s = compute_stats(&inst, true).unwrap();
        assert_eq!(s.phi_exact, Some(1.0));
        assert_eq!(s.alpha, 0.0);
    }

    #[test]
    fn approximate_spread_within_factor_two_of_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<[f64; 2]> = (0..100).map(|_| [rng.random(), rng.random()]).collect();
        let inst = Instance::disks(&pts, &[1.0; 100]).unwrap();
        let s = compute_stats(&inst, true).unwrap();
        let exact = s.phi_exact.unwrap();
        assert!(s.phi_approx >= exact / 2.0 && s.phi_approx <= exact * 2.0);
    }

    #[test]
    fn planar_closest_pair_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let pts: Vec<[f64; 2]> = (0..300).map(|_| [rng.random(), rng.random()]).collect();
            let inst = Instance::disks(&pts, &[1.0; 300]).unwrap();
            let mut brute = f64::INFINITY;
            for i in 0..300 {
                for j in i + 1..300 {
                    brute = brute.min(dist(inst.center(i), inst.center(j)));
                }
            }
            assert_eq!(closest_pair_distance(&inst), brute);
        }
    }

    #[test]
    fn sweep_handles_higher_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let coords: Vec<f64> = (0..3 * 200).map(|_| rng.random_range(-5.0..5.0)).collect();
        let inst =
            Instance::new(crate::ShapeKind::Ball, 3, coords, vec![1.0; 200]).unwrap();
        let mut brute = f64::INFINITY;
        for i in 0..200 {
            for j in i + 1..200 {
                brute = brute.min(dist(inst.center(i), inst.center(j)));
            }
        }
        assert_eq!(closest_pair_distance(&inst), brute);
    }

    #[test]
    fn needs_two_shapes() {
        let inst = Instance::disks(&[[0.0, 0.0]], &[1.0]).unwrap();
        assert!(matches!(
            compute_stats(&inst, false),
            Err(Error::TooFewShapes { .. })
        ));
    }
}
