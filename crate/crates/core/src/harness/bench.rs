use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::generate::{generate, GenKind, GenParams};
use super::verify::Algorithm;
use crate::cquadtree::{run_cquadtree, CqBuild};
use crate::error::{Error, Result};
use crate::instance::{Instance, ShapeKind};
use crate::quadtree::run_quadtree;
use crate::stats::compute_stats;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub n_list: Vec<usize>,
    pub repeats: usize,
    pub seed: u64,
    pub kind: GenKind,
    pub shape: ShapeKind,
    pub rate_min: f64,
    pub rate_max: f64,
}

impl BenchConfig {
    pub fn new(algorithms: Vec<Algorithm>, n_list: Vec<usize>) -> Self {
        BenchConfig {
            algorithms,
            n_list,
            repeats: 3,
            seed: 1,
            kind: GenKind::Uniform,
            shape: ShapeKind::Disk,
            rate_min: 1.0,
            rate_max: 1.0,
        }
    }
}

/// One (algorithm, n) cell: the median over repeats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRun {
    pub algorithm: Algorithm,
    pub n: usize,
    pub seconds: f64,
    pub nodes: Option<usize>,
    pub pairs: Option<usize>,
    pub delta: f64,
    pub phi_approx: f64,
    pub alpha: f64,
}

/// `time(next_n) / time(n)` for consecutive sizes of one algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRatio {
    pub algorithm: Algorithm,
    pub n: usize,
    pub next_n: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub runs: Vec<BenchRun>,
    pub ratios: Vec<BenchRatio>,
}

/// Times one solve and returns the structure sizes where there are any.
pub fn timed_solve(algorithm: Algorithm, instance: &Instance) -> Result<(f64, Option<usize>, Option<usize>)> {
    let start = Instant::now();
    let sizes = match algorithm {
        Algorithm::Quadtree => {
            let run = run_quadtree(instance, None)?;
            (Some(run.tree.len()), Some(run.pairs.len()))
        }
        Algorithm::Cquadtree => {
            let run = run_cquadtree(instance, CqBuild::Derived, None)?;
            (Some(run.tree.len()), Some(run.pairs.len()))
        }
        _ => {
            algorithm.solve(instance)?;
            (None, None)
        }
    };
    Ok((start.elapsed().as_secs_f64(), sizes.0, sizes.1))
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        (values[k / 2 - 1] + values[k / 2]) / 2.0
    }
}

/// Each repeat solves a fresh instance drawn from `seed + repeat`.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    if config.repeats == 0 || config.n_list.is_empty() || config.algorithms.is_empty() {
        return Err(Error::InvalidParams(
            "bench needs algorithms, sizes and at least one repeat".into(),
        ));
    }
    let mut report = BenchReport::default();
    for &algorithm in &config.algorithms {
        let mut previous: Option<(usize, f64)> = None;
        for &n in &config.n_list {
            let mut times = Vec::with_capacity(config.repeats);
            let mut last = None;
            for r in 0..config.repeats {
                let params = GenParams::new(config.kind, n, config.seed.wrapping_add(r as u64))
                    .rates(config.rate_min, config.rate_max)
                    .shape(config.shape);
                let instance = generate(&params)?;
                let (t, nodes, pairs) = timed_solve(algorithm, &instance)?;
                times.push(t);
                if r == 0 {
                    last = Some((instance, nodes, pairs));
                }
            }
            let (instance, nodes, pairs) = last.expect("at least one repeat");
            let stats = compute_stats(&instance, false).ok();
            let seconds = median(&mut times);
            report.runs.push(BenchRun {
                algorithm,
                n: instance.len(),
                seconds,
                nodes,
                pairs,
                delta: instance.rate_ratio(),
                phi_approx: stats.map_or(1.0, |s| s.phi_approx),
                alpha: stats.map_or(0.0, |s| s.alpha),
            });
            if let Some((pn, pt)) = previous {
                report.ratios.push(BenchRatio {
                    algorithm,
                    n: pn,
                    next_n: n,
                    ratio: seconds / pt,
                });
            }
            previous = Some((n, seconds));
        }
    }
    Ok(report)
}

impl BenchReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn table(&self) -> String {
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
        let mut out = format!(
            "{:<10} {:>8} {:>12} {:>10} {:>10} {:>8} {:>10} {:>6}\n",
            "algorithm", "n", "seconds", "nodes", "pairs", "delta", "phi", "alpha"
        );
        for r in &self.runs {
            writeln!(
                out,
                "{:<10} {:>8} {:>12.6} {:>10} {:>10} {:>8.2} {:>10.3e} {:>6.2}",
                r.algorithm.token(),
                r.n,
                r.seconds,
                opt(r.nodes),
                opt(r.pairs),
                r.delta,
                r.phi_approx,
                r.alpha
            )
            .unwrap();
        }
        if !self.ratios.is_empty() {
            out.push('\n');
            for r in &self.ratios {
                writeln!(
                    out,
                    "{:<10} time({})/time({}) = {:.3}",
                    r.algorithm.token(),
                    r.next_n,
                    r.n,
                    r.ratio
                )
                .unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_has_cells_and_ratios() {
        let mut config = BenchConfig::new(vec![Algorithm::Naive, Algorithm::Cquadtree], vec![64, 128]);
        config.repeats = 2;
        let report = run_bench(&config).unwrap();
        assert_eq!(report.runs.len(), 4);
        assert_eq!(report.ratios.len(), 2);
        let cq = &report.runs[2];
        assert!(cq.nodes.unwrap() <= 10 * 64 + 2 && cq.pairs.is_some());
        assert!(report.runs[0].nodes.is_none());
        let json: BenchReport = serde_json::from_str(&report.to_json().unwrap()).unwrap();
        assert_eq!(json.runs.len(), 4);
        assert!(report.table().contains("time(128)/time(64)"));
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn empty_config_is_rejected() {
        assert!(run_bench(&BenchConfig::new(vec![], vec![8])).is_err());
    }
}
