//! Rectangles as corner pairs.
//!
//! A rectangle grows from its center, so after one unit of time it spans
//! `center ± rate` on each axis. Its two opposite corners at that instant
//! describe it fully.

use crate::error::{Error, Result};
use crate::instance::{Instance, ShapeKind};

/// Center and per-axis rates from the lower-left and upper-right corners
/// reached after one unit of time.
pub fn rect_from_corners(lo: [f64; 2], hi: [f64; 2]) -> Result<([f64; 2], [f64; 2])> {
    let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    let rates = [(hi[0] - lo[0]) / 2.0, (hi[1] - lo[1]) / 2.0];
    if !(rates[0] > 0.0 && rates[1] > 0.0) {
        return Err(Error::InvalidParams(format!(
            "corners {lo:?} and {hi:?} do not span a rectangle"
        )));
    }
    Ok((center, rates))
}

/// Corners of rectangle `i` after one unit of time.
pub fn rect_corners(instance: &Instance, i: usize) -> Result<([f64; 2], [f64; 2])> {
    if instance.kind() != ShapeKind::Rectangle {
        return Err(Error::InvalidParams(format!("{} is not a rectangle instance", instance.kind())));
    }
    if i >= instance.len() {
        return Err(Error::IndexOutOfRange { index: i, len: instance.len() });
    }
    let (c, r) = (instance.center(i), instance.rates(i));
    Ok(([c[0] - r[0], c[1] - r[1]], [c[0] + r[0], c[1] + r[1]]))
}

/// A rectangle instance from corner pairs, in priority order.
pub fn rectangles_from_corners(corners: &[([f64; 2], [f64; 2])]) -> Result<Instance> {
    let mut centers = Vec::with_capacity(corners.len());
    let mut rates = Vec::with_capacity(corners.len());
    for &(lo, hi) in corners {
        let (c, r) = rect_from_corners(lo, hi)?;
        centers.push(c);
        rates.push(r);
    }
    Instance::rectangles(&centers, &rates)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corners_round_trip() {
        let corners = [([0.0, 0.0], [2.0, 4.0]), ([5.0, -1.0], [6.0, 3.0])];
        let inst = rectangles_from_corners(&corners).unwrap();
        assert_eq!((inst.center(0), inst.rates(0)), (&[1.0, 2.0][..], &[1.0, 2.0][..]));
        for (i, &c) in corners.iter().enumerate() {
            assert_eq!(rect_corners(&inst, i).unwrap(), c);
        }
        // Overlap on x needs (5.5 − 1)/(0.5 + 1) = 3, on y (1 − 1)/… = 0.
        assert_eq!(inst.touch_time(0, 1).unwrap().value(), 3.0);
    }

    #[test]
    fn degenerate_corners_are_rejected() {
        assert!(rect_from_corners([1.0, 0.0], [1.0, 2.0]).is_err());
        assert!(rect_from_corners([2.0, 2.0], [0.0, 0.0]).is_err());
    }
}
