//! Structural and general-position checks.

use std::cmp::Ordering;
use std::fmt;

use num::{BigRational, Signed, Zero};
use serde::Serialize;

use crate::instance::Instance;

/// Largest instance for which the strict O(n²) general-position check runs.
pub const STRICT_MAX_SHAPES: usize = 8192;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateCenters { first: usize, second: usize },
    NonpositiveRate { index: usize },
    NonFinite { index: usize },
    /// Two distinct pairs touch at exactly the same instant.
    GeneralPosition {
        first: (usize, usize),
        second: (usize, usize),
        time: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::DuplicateCenters { first, second } => {
                write!(f, "duplicate centers: shapes {} and {}", first + 1, second + 1)
            }
            Violation::NonpositiveRate { index } => {
                write!(f, "nonpositive rate: shape {}", index + 1)
            }
            Violation::NonFinite { index } => {
                write!(f, "non-finite value: shape {}", index + 1)
            }
            Violation::GeneralPosition {
                first,
                second,
                time,
            } => write!(
                f,
                "general position: pairs ({},{}) and ({},{}) both touch at {time}",
                first.0 + 1,
                first.1 + 1,
                second.0 + 1,
                second.1 + 1
            ),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// `Some(true)` when the strict check ran and found no tie, `Some(false)`
    /// when it found one, `None` when it did not run.
    pub general_position: Option<bool>,
}

impl ValidationReport {
    /// No structural violations. Ties do not count.
    pub fn is_structurally_valid(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| !matches!(v, Violation::GeneralPosition { .. }))
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Reports structural problems and, in strict mode, ties between touch
/// times. Never fails; callers decide what to do with the report.
pub fn validate_instance(instance: &Instance, strict: bool) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = instance.len();
    for i in 0..n {
        if instance
            .center(i)
            .iter()
            .chain(instance.rates(i))
            .any(|v| !v.is_finite())
        {
            report.violations.push(Violation::NonFinite { index: i });
        } else if instance.rates(i).iter().any(|&r| r <= 0.0) {
            report.violations.push(Violation::NonpositiveRate { index: i });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp_points(instance.center(a), instance.center(b)).then(a.cmp(&b)));
    for w in order.windows(2) {
        if cmp_points(instance.center(w[0]), instance.center(w[1])) == Ordering::Equal {
            report.violations.push(Violation::DuplicateCenters {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
            });
        }
    }

    if strict && report.violations.is_empty() && n <= STRICT_MAX_SHAPES {
        let ties = general_position_ties(instance);
        report.general_position = Some(ties.is_empty());
        report.violations.extend(ties);
    }
    report
}

fn cmp_points(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// At most this many ties are listed in a report.
const MAX_REPORTED_TIES: usize = 32;

/// Finds pairs of pairs with exactly equal touch times. Floating-point
/// times narrow the search to near-equal runs; equality within a run is
/// decided on exact rationals.
fn general_position_ties(instance: &Instance) -> Vec<Violation> {
    let n = instance.len();
    let mut pairs: Vec<(f64, u32, u32)> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((instance.touch(i, j), i as u32, j as u32));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut ties = Vec::new();
    let mut start = 0;
    while start < pairs.len() && ties.len() < MAX_REPORTED_TIES {
        let mut end = start + 1;
        while end < pairs.len() && near(pairs[end - 1].0, pairs[end].0) {
            end += 1;
        }
        if end - start > 1 {
            let mut run: Vec<(BigRational, (usize, usize), f64)> = pairs[start..end]
                .iter()
                .map(|&(t, i, j)| {
                    let (i, j) = (i as usize, j as usize);
                    (exact_touch_key(instance, i, j), (i, j), t)
                })
                .collect();
            run.sort_by(|a, b| a.0.cmp(&b.0));
            for w in run.windows(2) {
                if w[0].0 == w[1].0 && ties.len() < MAX_REPORTED_TIES {
                    ties.push(Violation::GeneralPosition {
                        first: w[0].1,
                        second: w[1].1,
                        time: w[0].2,
                    });
                }
            }
        }
        start = end;
    }
    ties
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("validated values are finite")
}

/// A key that orders pairs exactly like their touch times: the squared time
/// for Euclidean shapes (no square roots), the time itself otherwise.
pub(crate) fn exact_touch_key(instance: &Instance, i: usize, j: usize) -> BigRational {
    let (a, b) = (instance.center(i), instance.center(j));
    let deltas = a.iter().zip(b).map(|(&x, &y)| (exact(x) - exact(y)).abs());
    if instance.euclidean() {
        let sq: BigRational = deltas.map(|d| &d * &d).fold(BigRational::zero(), |s, v| s + v);
        let sum = exact(instance.rate(i)) + exact(instance.rate(j));
        sq / (&sum * &sum)
    } else if instance.kind().per_axis_rates() {
        let (ri, rj) = (instance.rates(i), instance.rates(j));
        deltas
            .enumerate()
            .map(|(axis, d)| d / (exact(ri[axis]) + exact(rj[axis])))
            .max()
            .unwrap_or_else(BigRational::zero)
    } else {
        let linf = deltas.max().unwrap_or_else(BigRational::zero);
        linf / (exact(instance.rate(i)) + exact(instance.rate(j)))
    }
}
