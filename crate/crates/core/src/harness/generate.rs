use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, ShapeKind};

/// Instance families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    /// Independent centers in the unit cube.
    Uniform,
    /// A jittered lattice in random order.
    Grid,
    /// Tight Gaussian clusters of widely varying size, for a large spread.
    Cluster,
    /// The sorting reduction: `n` slow shapes on a row and `n` fast ones
    /// just above them.
    Sortlb,
}

impl GenKind {
    pub const ALL: [GenKind; 4] = [GenKind::Uniform, GenKind::Grid, GenKind::Cluster, GenKind::Sortlb];

    pub fn token(self) -> &'static str {
        match self {
            GenKind::Uniform => "uniform",
            GenKind::Grid => "grid",
            GenKind::Cluster => "cluster",
            GenKind::Sortlb => "sortlb",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.token() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown instance kind '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub kind: GenKind,
    /// Number of shapes; for `sortlb`, the number per row.
    pub n: usize,
    pub seed: u64,
    pub rate_min: f64,
    pub rate_max: f64,
    pub shape: ShapeKind,
    pub dim: usize,
}

impl GenParams {
    pub fn new(kind: GenKind, n: usize, seed: u64) -> Self {
        GenParams {
            kind,
            n,
            seed,
            rate_min: 1.0,
            rate_max: 1.0,
            shape: ShapeKind::Disk,
            dim: 2,
        }
    }

    pub fn rates(mut self, lo: f64, hi: f64) -> Self {
        self.rate_min = lo;
        self.rate_max = hi;
        self
    }

    pub fn shape(mut self, shape: ShapeKind) -> Self {
        self.shape = shape;
        self
    }

    pub fn dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if !(self.rate_min > 0.0 && self.rate_min <= self.rate_max && self.rate_max.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "rate range [{}, {}] must be positive and ordered",
                self.rate_min, self.rate_max
            )));
        }
        if self.dim == 0 || (self.shape.planar() && self.dim != 2) {
            return Err(Error::InvalidParams(format!(
                "{} shapes need dimension 2, got {}",
                self.shape, self.dim
            )));
        }
        Ok(())
    }
}

/// Builds an instance; the same parameters always give the same instance.
pub fn generate(params: &GenParams) -> Result<Instance> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    if params.kind == GenKind::Sortlb {
        let top = distinct_rates(&mut rng, params.n, params.rate_min.max(1.0), params.rate_max)?;
        return sortlb_instance(params.shape, &top);
    }
    let d = params.dim;
    let centers = match params.kind {
        GenKind::Uniform => distinct_points(&mut rng, params.n, d, |rng| {
            (0..d).map(|_| rng.random::<f64>()).collect()
        }),
        GenKind::Grid => grid_points(&mut rng, params.n, d),
        GenKind::Cluster => cluster_points(&mut rng, params.n, d),
        GenKind::Sortlb => unreachable!(),
    };
    let width = if params.shape.per_axis_rates() { d } else { 1 };
    let rates = (0..params.n * width)
        .map(|_| log_uniform(&mut rng, params.rate_min, params.rate_max))
        .collect();
    Instance::new(params.shape, d, centers, rates)
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    rng.random_range(lo.ln()..=hi.ln()).exp().clamp(lo, hi)
}

/// Draws points until `n` distinct ones are found; flat output.
fn distinct_points(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: usize,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Vec<f64>,
) -> Vec<f64> {
    let mut seen = FxHashSet::default();
    let mut out = Vec::with_capacity(n * d);
    while out.len() < n * d {
        let p = draw(rng);
        if seen.insert(p.iter().map(|c| c.to_bits()).collect::<Vec<_>>()) {
            out.extend(p);
        }
    }
    out
}

fn grid_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<f64> {
    let side = (1..).find(|s: &usize| s.pow(d as u32) >= n).unwrap();
    let mut cells: Vec<usize> = (0..side.pow(d as u32)).collect();
    cells.shuffle(rng);
    let h = 1.0 / side as f64;
    let mut out = Vec::with_capacity(n * d);
    for &cell in &cells[..n] {
        let mut rest = cell;
        for _ in 0..d {
            let k = rest % side;
            rest /= side;
            out.push((k as f64 + 0.5 + rng.random_range(-0.25..0.25)) * h);
        }
    }
    out
}

fn cluster_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<f64> {
    let k = n.isqrt().clamp(1, 16);
    let clusters: Vec<(Vec<f64>, f64)> = (0..k)
        .map(|_| {
            let c = (0..d).map(|_| rng.random::<f64>()).collect();
            (c, 10f64.powf(rng.random_range(-5.0..-1.0)))
        })
        .collect();
    let mut next = 0;
    distinct_points(rng, n, d, |rng| {
        let (c, sigma) = &clusters[next % k];
        next += 1;
        let normal = Normal::new(0.0, *sigma).expect("positive deviation");
        c.iter().map(|&x| x + normal.sample(rng)).collect()
    })
}

/// `n` distinct values drawn uniformly from `(lo, hi]`.
fn distinct_rates(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if !(hi > lo) {
        return Err(Error::InvalidParams(format!(
            "sortlb needs top-row rates in ({lo}, {hi}], which is empty"
        )));
    }
    let mut seen = FxHashSet::default();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        // `random_range` is half-open; flip it to exclude `lo`.
        let v = hi - rng.random_range(0.0..hi - lo);
        if v > lo && seen.insert(v.to_bits()) {
            out.push(v);
        }
    }
    Ok(out)
}

/// The sorting construction for given top-row rates (each above 1): shape
/// `k` at `(2k, 0)` with rate 1, then shape `n + k` at `(2k, 1)` with rate
/// `top[k - 1]`, for `k = 1..n`.
pub fn sortlb_instance(shape: ShapeKind, top: &[f64]) -> Result<Instance> {
    if !shape.planar() {
        return Err(Error::InvalidParams(format!("sortlb needs a planar shape, got {shape}")));
    }
    if let Some(v) = top.iter().find(|&&v| !(v > 1.0)) {
        return Err(Error::InvalidParams(format!("top-row rates must exceed 1, got {v}")));
    }
    let n = top.len();
    let width = if shape.per_axis_rates() { 2 } else { 1 };
    let mut centers = Vec::with_capacity(4 * n);
    let mut rates = Vec::with_capacity(2 * n * width);
    for row in 0..2 {
        for (k, &t) in top.iter().enumerate() {
            centers.extend([2.0 * (k + 1) as f64, row as f64]);
            let v = if row == 0 { 1.0 } else { t };
            rates.extend(std::iter::repeat_n(v, width));
        }
    }
    Instance::new(shape, 2, centers, rates)
}
