use serde::Serialize;

use super::generate::{generate, GenKind, GenParams};
use super::verify::Algorithm;
use crate::error::{Error, Result};
use crate::instance::{Instance, ShapeKind};
use crate::schedule::EliminationSchedule;

/// Relative tolerance on the top-row times `1/(1 + v)`.
pub const SORTLB_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SortlbOutcome {
    pub algorithm: Algorithm,
    /// `None` when the check passed.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SortlbReport {
    pub n: usize,
    pub seed: u64,
    pub outcomes: Vec<SortlbOutcome>,
}

impl SortlbReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.failure.is_none())
    }
}

/// Checks that the first `n` eliminations are the top row in decreasing
/// rate order, each at `1/(1 + v)` and before any bottom-row elimination.
pub fn check_sortlb_schedule(instance: &Instance, schedule: &EliminationSchedule) -> Option<String> {
    let n = instance.len() / 2;
    let mut expected: Vec<usize> = (n..2 * n).collect();
    expected.sort_by(|&a, &b| instance.rate(b).total_cmp(&instance.rate(a)));
    let records = schedule.records();
    for (k, (&want, r)) in expected.iter().zip(records).enumerate() {
        let exact = 1.0 / (1.0 + instance.rate(want));
        let t = r.time.value();
        if r.victim != want || (t - exact).abs() > SORTLB_TOLERANCE * exact {
            let prefix: Vec<String> = records[..=k]
                .iter()
                .map(|r| format!("{}@{:.17e}", r.victim + 1, r.time.value()))
                .collect();
            return Some(format!(
                "elimination {} should be shape {} at {:.17e}; prefix: {}",
                k + 1,
                want + 1,
                exact,
                prefix.join(" ")
            ));
        }
    }
    let last_top = records[n - 1].time.value();
    if let Some(r) = records[n..].iter().find(|r| r.time.value() <= last_top) {
        return Some(format!(
            "bottom shape {} dies at {} before the top row is done",
            r.victim + 1,
            r.time
        ));
    }
    None
}

/// Runs the sorting construction with `n` top-row shapes whose rates are
/// drawn from `(1, rate_max]`.
pub fn sortlb_check(
    n: usize,
    seed: u64,
    rate_max: f64,
    shape: ShapeKind,
    algorithms: &[Algorithm],
) -> Result<SortlbReport> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("sortlb-check needs n ≥ 2, got {n}")));
    }
    let params = GenParams::new(GenKind::Sortlb, n, seed).rates(1.0, rate_max).shape(shape);
    let instance = generate(&params)?;
    let outcomes = algorithms
        .iter()
        .map(|&algorithm| {
            let schedule = algorithm.solve(&instance)?;
            Ok(SortlbOutcome {
                algorithm,
                failure: check_sortlb_schedule(&instance, &schedule),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SortlbReport { n, seed, outcomes })
}

/// Solvers that accept the construction and finish quickly at size `n`.
pub fn default_sortlb_algorithms(n: usize, shape: ShapeKind) -> Vec<Algorithm> {
    Algorithm::ALL
        .into_iter()
        .filter(|a| a.supports(shape, 2))
        .filter(|&a| a != Algorithm::Sim || 2 * n <= crate::naive::SIMULATION_MAX_SHAPES)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sortlb_instance;
    use crate::naive::solve_naive;

    #[test]
    fn two_top_shapes() {
        let inst = sortlb_instance(ShapeKind::Disk, &[2.0, 3.0]).unwrap();
        for algo in default_sortlb_algorithms(2, ShapeKind::Disk) {
            let s = algo.solve(&inst).unwrap();
            let head: Vec<(usize, f64)> = s.records()[..2]
                .iter()
                .map(|r| (r.victim, r.time.value()))
                .collect();
            assert_eq!(head, vec![(3, 0.25), (2, 1.0 / 3.0)], "{algo}");
            assert_eq!(check_sortlb_schedule(&inst, &s), None);
        }
    }

    #[test]
    fn three_top_shapes_fastest_first() {
        let inst = sortlb_instance(ShapeKind::Disk, &[10.0, 5.0, 2.0]).unwrap();
        let s = solve_naive(&inst).unwrap();
        let head: Vec<usize> = s.records()[..3].iter().map(|r| r.victim).collect();
        assert_eq!(head, vec![3, 4, 5]);
        let times: Vec<f64> = s.records()[..3].iter().map(|r| r.time.value()).collect();
        assert_eq!(times, vec![1.0 / 11.0, 1.0 / 6.0, 1.0 / 3.0]);
    }

    #[test]
    fn squares_follow_the_same_order() {
        let report = sortlb_check(50, 4, 100.0, ShapeKind::Square, &default_sortlb_algorithms(50, ShapeKind::Square))
            .unwrap();
        assert_eq!(report.outcomes.len(), 3);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn detects_a_wrong_order() {
        let inst = sortlb_instance(ShapeKind::Disk, &[2.0, 3.0]).unwrap();
        let s = solve_naive(&inst).unwrap();
        let mut records = s.records().to_vec();
        records.swap(0, 1);
        let bad = EliminationSchedule::unchecked(4, records);
        let msg = check_sortlb_schedule(&inst, &bad).unwrap();
        assert!(msg.contains("should be shape 4"), "{msg}");
    }

    #[test]
    fn disks_pass_at_moderate_size() {
        let algos = default_sortlb_algorithms(300, ShapeKind::Disk);
        assert_eq!(algos.len(), 4);
        assert!(sortlb_check(300, 9, 100.0, ShapeKind::Disk, &algos).unwrap().passed());
    }
}
