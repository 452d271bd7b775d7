//! Reference solvers.
//!
//! [`solve_naive`] fixes elimination times in priority order: shape `i` is
//! eliminated by the higher-priority shape that it touches first among
//! those still alive at the touching instant. [`solve_simulation`] replays
//! the growth process event by event. The two share nothing but
//! [`Instance::touch`], so each serves as the oracle for the other and both
//! serve as oracles for the fast solvers.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::schedule::{Best, EliminationSchedule};

/// Largest instance accepted by [`solve_simulation`]; it materializes all
/// `n(n-1)/2` events.
pub const SIMULATION_MAX_SHAPES: usize = 8192;

/// O(n²) solver over any shape kind.
pub fn solve_naive(instance: &Instance) -> Result<EliminationSchedule> {
    instance.check_structure()?;
    let n = instance.len();
    let mut best = vec![Best::NONE; n];
    for i in 1..n {
        let mut b = Best::NONE;
        for (j, bj) in best[..i].iter().enumerate() {
            let t = instance.touch(i, j);
            // Shape 0 never dies; its time stays at +∞.
            if t <= bj.time {
                b.offer(t, j);
            }
        }
        best[i] = b;
    }
    Ok(EliminationSchedule::from_best(&best))
}

/// A potential encounter between shapes `first < second`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EventQueueEntry {
    pub time: f64,
    pub first: u32,
    pub second: u32,
}

/// Event-driven simulation: every pair is an event, processed in order of
/// `(time, first, second)`. An event fires if the lower-priority shape is
/// still alive and the higher-priority one has not died strictly earlier.
/// Dead shapes are tombstoned and their stale events skipped on pop.
pub fn solve_simulation(instance: &Instance) -> Result<EliminationSchedule> {
    instance.check_structure()?;
    let n = instance.len();
    if n > SIMULATION_MAX_SHAPES {
        return Err(Error::TooManyShapes {
            algorithm: "simulation",
            max: SIMULATION_MAX_SHAPES,
            got: n,
        });
    }
    let mut events = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            events.push(EventQueueEntry {
                time: instance.touch(i, j),
                first: i as u32,
                second: j as u32,
            });
        }
    }
    events.sort_unstable_by(|a, b| {
        a.time
            .total_cmp(&b.time)
            .then(a.first.cmp(&b.first))
            .then(a.second.cmp(&b.second))
    });

    let mut best = vec![Best::NONE; n];
    let mut alive = n;
    for e in events {
        if alive <= 1 {
            break;
        }
        let (i, j) = (e.first as usize, e.second as usize);
        if best[j].eliminator().is_some() {
            continue;
        }
        // `i` may have died at this very instant and still take `j` along.
        if best[i].time < e.time {
            continue;
        }
        best[j] = Best {
            time: e.time,
            by: i,
        };
        alive -= 1;
    }
    Ok(EliminationSchedule::from_best(&best))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_disks() -> Instance {
        Instance::disks(&[[0.0, 0.0], [4.0, 0.0], [1.0, 0.0]], &[1.0; 3]).unwrap()
    }

    fn triples(s: &EliminationSchedule) -> Vec<(usize, usize, f64)> {
        s.records()
            .iter()
            .map(|r| (r.victim, r.eliminator, r.time.value()))
            .collect()
    }

    #[test]
    fn three_disks_by_hand() {
        let s = solve_naive(&three_disks()).unwrap();
        assert_eq!(triples(&s), vec![(2, 0, 0.5), (1, 0, 2.0)]);
        assert_eq!(s.survivor(), 0);
        assert_eq!(solve_simulation(&three_disks()).unwrap(), s);
    }

    #[test]
    fn single_shape() {
        let inst = Instance::disks(&[[0.0, 0.0]], &[1.0]).unwrap();
        for s in [solve_naive(&inst).unwrap(), solve_simulation(&inst).unwrap()] {
            assert!(s.records().is_empty());
            assert_eq!(s.survivor(), 0);
        }
    }

    #[test]
    fn two_disks() {
        let inst = Instance::disks(&[[0.0, 0.0], [3.0, 0.0]], &[1.0, 2.0]).unwrap();
        assert_eq!(triples(&solve_simulation(&inst).unwrap()), vec![(1, 0, 1.0)]);
    }

    #[test]
    fn lower_bound_pair() {
        // Bottom disks at (2,0),(4,0) rate 1; top disks above them, rates 2, 3.
        let inst = Instance::disks(
            &[[2.0, 0.0], [4.0, 0.0], [2.0, 1.0], [4.0, 1.0]],
            &[1.0, 1.0, 2.0, 3.0],
        )
        .unwrap();
        let s = solve_naive(&inst).unwrap();
        let t = s.times();
        let e = s.eliminators();
        assert_eq!(t[2].value(), 1.0 / 3.0);
        assert_eq!(e[2], Some(0));
        assert_eq!(t[3].value(), 1.0 / 4.0);
        assert_eq!(e[3], Some(1));
    }

    #[test]
    fn dead_shapes_do_not_eliminate() {
        // Shape 1 dies at 0.5 (touching 0); shape 2 would meet it later.
        let inst =
            Instance::disks(&[[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]], &[1.0, 1.0, 1.0]).unwrap();
        let s = solve_naive(&inst).unwrap();
        assert_eq!(triples(&s), vec![(1, 0, 0.5), (2, 0, 1.5)]);
        assert_eq!(solve_simulation(&inst).unwrap(), s);
    }

    #[test]
    fn ties_resolve_to_higher_priority_in_both_solvers() {
        // Collinear, equal spacing: every neighbouring pair touches at 1.
        let pts: Vec<[f64; 2]> = (0..6).map(|k| [2.0 * k as f64, 0.0]).collect();
        let inst = Instance::disks(&pts, &[1.0; 6]).unwrap();
        let a = solve_naive(&inst).unwrap();
        let b = solve_simulation(&inst).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.eliminators()[1..], [Some(0), Some(1), Some(2), Some(3), Some(4)]);
    }

    #[test]
    fn invalid_instances_are_rejected() {
        let inst = Instance::disks(&[[0.0, 0.0], [0.0, 0.0]], &[1.0, 1.0]).unwrap();
        assert!(solve_naive(&inst).is_err());
        assert!(solve_simulation(&inst).is_err());
    }
}
