use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::cquadtree::{run_cquadtree, solve_cquadtree, CqBuild};
use crate::error::{Error, Result};
use crate::instance::{Instance, ShapeKind};
use crate::naive::{solve_naive, solve_simulation};
use crate::quadtree::{run_quadtree, solve_quadtree};
use crate::schedule::{Divergence, Elimination, EliminationSchedule};
use crate::squares::solve_squares;
use crate::validate::{validate_instance, STRICT_MAX_SHAPES};

/// Relative tolerance for comparing times across solvers.
pub const TIME_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Naive,
    Sim,
    Quadtree,
    Cquadtree,
    Squares,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Naive,
        Algorithm::Sim,
        Algorithm::Quadtree,
        Algorithm::Cquadtree,
        Algorithm::Squares,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Sim => "sim",
            Algorithm::Quadtree => "quadtree",
            Algorithm::Cquadtree => "cquadtree",
            Algorithm::Squares => "squares",
        }
    }

    /// Whether the solver accepts instances of this shape and dimension.
    pub fn supports(self, kind: ShapeKind, dim: usize) -> bool {
        match self {
            Algorithm::Naive | Algorithm::Sim => true,
            Algorithm::Quadtree | Algorithm::Cquadtree => kind == ShapeKind::Disk && dim == 2,
            Algorithm::Squares => kind == ShapeKind::Square && dim == 2,
        }
    }

    /// The solvers that accept the instance's shape.
    pub fn compatible(instance: &Instance) -> Vec<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .filter(|a| a.supports(instance.kind(), instance.dim()))
            .collect()
    }

    pub fn solve(self, instance: &Instance) -> Result<EliminationSchedule> {
        match self {
            Algorithm::Naive => solve_naive(instance),
            Algorithm::Sim => solve_simulation(instance),
            Algorithm::Quadtree => solve_quadtree(instance),
            Algorithm::Cquadtree => solve_cquadtree(instance),
            Algorithm::Squares => solve_squares(instance),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.token() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown algorithm '{s}'")))
    }
}

/// Where two solvers first disagree, with what is needed to debug it.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyDivergence {
    pub left: Algorithm,
    pub right: Algorithm,
    pub at: Divergence,
    pub context: Vec<String>,
}

impl fmt::Display for VerifyDivergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |r: Option<Elimination>| match r {
            Some(r) => format!("shape {} by {} at {:.17e}", r.victim + 1, r.eliminator + 1, r.time.value()),
            None => "nothing".to_string(),
        };
        write!(
            f,
            "{} and {} diverge at record {}: {} has {}, {} has {}",
            self.left,
            self.right,
            self.at.position + 1,
            self.left,
            show(self.at.left),
            self.right,
            show(self.at.right)
        )?;
        for line in &self.context {
            write!(f, "\n  {line}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub algorithms: Vec<Algorithm>,
    pub schedules: Vec<EliminationSchedule>,
    pub divergence: Option<VerifyDivergence>,
    /// Set when strict validation ran and found ties or other problems.
    pub warning: Option<String>,
}

impl VerifyReport {
    pub fn agrees(&self) -> bool {
        self.divergence.is_none()
    }
}

/// Runs every listed solver and compares each with the first.
pub fn verify(instance: &Instance, algorithms: &[Algorithm], strict: bool) -> Result<VerifyReport> {
    if algorithms.len() < 2 {
        return Err(Error::InvalidParams("verify needs at least two algorithms".into()));
    }
    if let Some(a) = algorithms
        .iter()
        .find(|a| !a.supports(instance.kind(), instance.dim()))
    {
        return Err(Error::UnsupportedShape {
            algorithm: a.token(),
            required: if *a == Algorithm::Squares { "square" } else { "disk" },
        });
    }
    let warning = (strict && instance.len() <= STRICT_MAX_SHAPES)
        .then(|| validate_instance(instance, true))
        .filter(|r| !r.is_clean())
        .map(|r| {
            format!(
                "instance is not in strict general position ({}); schedules may differ on ties",
                r.violations[0]
            )
        });
    let schedules = algorithms
        .iter()
        .map(|a| a.solve(instance))
        .collect::<Result<Vec<_>>>()?;
    let divergence = (1..schedules.len()).find_map(|k| {
        compare_schedules(&schedules[0], &schedules[k]).map(|at| VerifyDivergence {
            left: algorithms[0],
            right: algorithms[k],
            context: divergence_context(instance, algorithms[0], algorithms[k], &at),
            at,
        })
    });
    Ok(VerifyReport {
        algorithms: algorithms.to_vec(),
        schedules,
        divergence,
        warning,
    })
}

/// Exact victims and eliminators, times to [`TIME_TOLERANCE`].
pub fn compare_schedules(a: &EliminationSchedule, b: &EliminationSchedule) -> Option<Divergence> {
    a.first_divergence(b, TIME_TOLERANCE)
}

/// Touch times of the disagreeing pairs and, for the quadtree solvers,
/// whether each pair was examined.
fn divergence_context(instance: &Instance, left: Algorithm, right: Algorithm, at: &Divergence) -> Vec<String> {
    let pairs: Vec<(usize, usize)> = [at.left, at.right]
        .into_iter()
        .flatten()
        .map(|r| (r.eliminator, r.victim))
        .collect();
    let mut out: Vec<String> = pairs
        .iter()
        .map(|&(e, v)| {
            format!(
                "t({}, {}) = {:.17e}",
                e + 1,
                v + 1,
                instance.touch(e, v)
            )
        })
        .collect();
    for algo in [left, right] {
        let mut trace = FxHashSet::default();
        let ran = match algo {
            Algorithm::Quadtree => run_quadtree(instance, Some(&mut trace)).is_ok(),
            Algorithm::Cquadtree => run_cquadtree(instance, CqBuild::Derived, Some(&mut trace)).is_ok(),
            _ => false,
        };
        if ran {
            for &(e, v) in &pairs {
                let seen = trace.contains(&(e.min(v), e.max(v)));
                out.push(format!(
                    "{algo} {} pair ({}, {})",
                    if seen { "examined" } else { "never examined" },
                    e + 1,
                    v + 1
                ));
            }
        }
    }
    out
}
