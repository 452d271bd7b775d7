//! Shared fixtures for the criterion benches.

use prioshapes::harness::{generate, GenKind, GenParams};
use prioshapes::squares::{EnvelopeSegment, QuadrantEntry};
use prioshapes::{Instance, ShapeKind};

/// Sizes measured by the solver benches.
pub const SIZES: [usize; 3] = [1_000, 4_000, 16_000];

/// Seeded instance with rates in `[1, rate_max]`.
pub fn instance(kind: GenKind, shape: ShapeKind, n: usize, rate_max: f64) -> Instance {
    let params = GenParams::new(kind, n, 7).rates(1.0, rate_max).shape(shape);
    generate(&params).expect("fixture parameters are valid")
}

/// Segments whose intercepts, rates and ends come from a uniform instance.
pub fn segments(m: usize) -> Vec<EnvelopeSegment> {
    let inst = instance(GenKind::Uniform, ShapeKind::Disk, m, 8.0);
    (0..m)
        .map(|i| {
            let c = inst.center(i);
            EnvelopeSegment {
                owner: i,
                intercept: c[0],
                rate: inst.rate(i),
                end: 0.5 + 4.0 * c[1],
            }
        })
        .collect()
}

/// Square centers as quadrant entries, all alive until `end`.
pub fn entries(m: usize) -> Vec<QuadrantEntry> {
    let inst = instance(GenKind::Uniform, ShapeKind::Square, m, 8.0);
    (0..m)
        .map(|i| {
            let c = inst.center(i);
            QuadrantEntry {
                owner: i,
                center: [c[0], c[1]],
                rate: inst.rate(i),
                end: 0.05 + c[0] * c[1],
            }
        })
        .collect()
}
