//! Shapes, instances and pairwise touching times.
//!
//! Shapes are indexed from 0 in the API; index order is priority order, so a
//! smaller index always wins an encounter. Files and human-readable output
//! use 1-based indices.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The family of growing shapes in an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    /// Euclidean disk in the plane, scalar radius growth.
    Disk,
    /// Axis-aligned square in the plane (L∞ ball), scalar half-side growth.
    Square,
    /// Axis-aligned rectangle in the plane, per-axis half-extent growth.
    #[serde(rename = "rect")]
    Rectangle,
    /// Euclidean ball in any dimension.
    Ball,
    /// Axis-aligned box in any dimension, per-axis half-extent growth.
    Box,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 5] = [
        ShapeKind::Disk,
        ShapeKind::Square,
        ShapeKind::Rectangle,
        ShapeKind::Ball,
        ShapeKind::Box,
    ];

    /// Name used in instance files and on the command line.
    pub fn token(self) -> &'static str {
        match self {
            ShapeKind::Disk => "disk",
            ShapeKind::Square => "square",
            ShapeKind::Rectangle => "rect",
            ShapeKind::Ball => "ball",
            ShapeKind::Box => "box",
        }
    }

    /// Whether each shape carries one rate per axis instead of a scalar.
    pub fn per_axis_rates(self) -> bool {
        matches!(self, ShapeKind::Rectangle | ShapeKind::Box)
    }

    /// Whether the kind is only defined in the plane.
    pub fn planar(self) -> bool {
        matches!(
            self,
            ShapeKind::Disk | ShapeKind::Square | ShapeKind::Rectangle
        )
    }

    fn euclidean(self) -> bool {
        matches!(self, ShapeKind::Disk | ShapeKind::Ball)
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for ShapeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ShapeKind::ALL
            .into_iter()
            .find(|k| k.token() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown shape '{s}'")))
    }
}

/// A nonnegative instant, or "never" (+∞).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TouchTime(f64);

impl TouchTime {
    pub const ZERO: TouchTime = TouchTime(0.0);
    pub const NEVER: TouchTime = TouchTime(f64::INFINITY);

    /// Returns `None` for negative or NaN values.
    pub fn new(value: f64) -> Option<Self> {
        (value >= 0.0).then_some(TouchTime(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_never(self) -> bool {
        self.0 == f64::INFINITY
    }
}

impl PartialEq for TouchTime {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for TouchTime {}

impl PartialOrd for TouchTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TouchTime {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for TouchTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_never() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// An ordered set of growing shapes of one kind.
///
/// Centers and rates are stored flat: center `i` occupies
/// `centers[i * dim..(i + 1) * dim]`, and rates take one slot per shape for
/// scalar kinds or `dim` slots for rectangles and boxes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    kind: ShapeKind,
    dim: usize,
    centers: Vec<f64>,
    rates: Vec<f64>,
}

impl Instance {
    /// Checks the shape/dimension/length bookkeeping. Value checks (distinct
    /// centers, positive rates) are left to [`crate::validate_instance`].
    pub fn new(kind: ShapeKind, dim: usize, centers: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInstance("dimension must be positive".into()));
        }
        if kind.planar() && dim != 2 {
            return Err(Error::InvalidInstance(format!(
                "{kind} instances are planar, got dimension {dim}"
            )));
        }
        if !centers.len().is_multiple_of(dim) {
            return Err(Error::InvalidInstance(format!(
                "{} center coordinates is not a multiple of dimension {dim}",
                centers.len()
            )));
        }
        let n = centers.len() / dim;
        let width = if kind.per_axis_rates() { dim } else { 1 };
        if rates.len() != n * width {
            return Err(Error::InvalidInstance(format!(
                "expected {} rate values for {n} {kind} shapes, got {}",
                n * width,
                rates.len()
            )));
        }
        Ok(Instance {
            kind,
            dim,
            centers,
            rates,
        })
    }

    pub fn disks(centers: &[[f64; 2]], rates: &[f64]) -> Result<Self> {
        Self::new(ShapeKind::Disk, 2, centers.concat(), rates.to_vec())
    }

    pub fn squares(centers: &[[f64; 2]], rates: &[f64]) -> Result<Self> {
        Self::new(ShapeKind::Square, 2, centers.concat(), rates.to_vec())
    }

    pub fn rectangles(centers: &[[f64; 2]], rates: &[[f64; 2]]) -> Result<Self> {
        Self::new(ShapeKind::Rectangle, 2, centers.concat(), rates.concat())
    }

    pub fn kind(&self) -> ShapeKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.centers.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn center(&self, i: usize) -> &[f64] {
        &self.centers[i * self.dim..(i + 1) * self.dim]
    }

    /// The rate values of shape `i`: one scalar, or one per axis.
    pub fn rates(&self, i: usize) -> &[f64] {
        let w = self.rate_width();
        &self.rates[i * w..(i + 1) * w]
    }

    /// Scalar growth rate. For per-axis kinds this is the first component.
    pub fn rate(&self, i: usize) -> f64 {
        self.rates[i * self.rate_width()]
    }

    pub fn rate_width(&self) -> usize {
        if self.kind.per_axis_rates() {
            self.dim
        } else {
            1
        }
    }

    /// The first instant at which shapes `i` and `j` intersect, ignoring all
    /// other shapes.
    pub fn touch_time(&self, i: usize, j: usize) -> Result<TouchTime> {
        let len = self.len();
        for index in [i, j] {
            if index >= len {
                return Err(Error::IndexOutOfRange { index, len });
            }
        }
        if i == j {
            return Err(Error::SameIndex(i));
        }
        Ok(TouchTime(self.touch(i, j)))
    }

    /// Unchecked touch time. Symmetric in `i` and `j` bit for bit.
    #[inline]
    pub(crate) fn touch(&self, i: usize, j: usize) -> f64 {
        let d = self.dim;
        let (a, b) = (&self.centers[i * d..i * d + d], &self.centers[j * d..j * d + d]);
        match self.kind {
            ShapeKind::Disk | ShapeKind::Ball => {
                let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                sq.sqrt() / (self.rates[i] + self.rates[j])
            }
            ShapeKind::Square => {
                let linf = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                linf / (self.rates[i] + self.rates[j])
            }
            ShapeKind::Rectangle | ShapeKind::Box => {
                let (ri, rj) = (&self.rates[i * d..i * d + d], &self.rates[j * d..j * d + d]);
                (0..d)
                    .map(|axis| (a[axis] - b[axis]).abs() / (ri[axis] + rj[axis]))
                    .fold(0.0, f64::max)
            }
        }
    }

    /// Whether the touch time is a Euclidean distance over a rate sum, in
    /// which case exact comparisons square both sides.
    pub(crate) fn euclidean(&self) -> bool {
        self.kind.euclidean()
    }

    /// Fails unless all rates are positive and finite and all centers are
    /// finite and pairwise distinct.
    pub fn check_structure(&self) -> Result<()> {
        let report = crate::validate::validate_instance(self, false);
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidInstance(v.to_string())),
        }
    }

    /// Same instance with every coordinate multiplied by `s`.
    pub fn scaled_coordinates(&self, s: f64) -> Self {
        Instance {
            centers: self.centers.iter().map(|c| c * s).collect(),
            ..self.clone()
        }
    }

    /// Same instance with every rate multiplied by `s`.
    pub fn scaled_rates(&self, s: f64) -> Self {
        Instance {
            rates: self.rates.iter().map(|r| r * s).collect(),
            ..self.clone()
        }
    }

    /// Appends one shape at the lowest priority.
    pub fn push(&mut self, center: &[f64], rates: &[f64]) -> Result<()> {
        if center.len() != self.dim || rates.len() != self.rate_width() {
            return Err(Error::InvalidInstance(
                "pushed shape does not match instance dimension".into(),
            ));
        }
        self.centers.extend_from_slice(center);
        self.rates.extend_from_slice(rates);
        Ok(())
    }

    /// The first `n` shapes.
    pub fn prefix(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Instance {
            kind: self.kind,
            dim: self.dim,
            centers: self.centers[..n * self.dim].to_vec(),
            rates: self.rates[..n * self.rate_width()].to_vec(),
        }
    }

    /// Ratio of the largest to the smallest rate value.
    pub fn rate_ratio(&self) -> f64 {
        let (lo, hi) = self
            .rates
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
        if self.rates.is_empty() {
            1.0
        } else {
            hi / lo
        }
    }
}
