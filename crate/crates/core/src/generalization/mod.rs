//! Sparse dot images: equidistant resampling of traced edges followed by
//! Ramer–Douglas–Peucker simplification, with an ε search that meets a
//! caller-supplied dot budget.

mod budget;
mod rdp;
mod resample;

pub use budget::{simplify_to_budget, EpsRange};
pub use rdp::{rdp_keep_indices, rdp_simplify, rdp_steps, RdpStep};
pub use resample::resample_equidistant;

use crate::geometry::{centroid, Point};

/// The sparse dot image: simplified edge points in normalized coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DotCloud {
    pub points: Vec<Point>,
    /// Index of the traced polyline each dot came from.
    pub source_polyline_ids: Vec<usize>,
    /// RDP tolerance in pixels that produced this cloud.
    pub epsilon: f64,
    pub source: String,
    pub width: usize,
    pub height: usize,
}

impl DotCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Larger bounding-box side after [`normalize_points`].
pub const NORMALIZED_EXTENT: f64 = 0.8;

/// Translate the centroid to (0.5, 0.5) and scale uniformly so the larger
/// bounding-box side equals [`NORMALIZED_EXTENT`]. A cloud with zero extent
/// collapses onto the centre.
pub fn normalize_points(points: &[Point]) -> Vec<Point> {
    if points.is_empty() {
        return Vec::new();
    }
    let c = centroid(points);
    let (mut minx, mut maxx, mut miny, mut maxy) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points {
        minx = minx.min(p.x);
        maxx = maxx.max(p.x);
        miny = miny.min(p.y);
        maxy = maxy.max(p.y);
    }
    let extent = (maxx - minx).max(maxy - miny);
    if extent <= 0.0 {
        return vec![Point::new(0.5, 0.5); points.len()];
    }
    let s = NORMALIZED_EXTENT / extent;
    points
        .iter()
        .map(|p| Point::new(0.5 + (p.x - c.x) * s, 0.5 + (p.y - c.y) * s))
        .collect()
}

pub fn normalize_cloud(cloud: &DotCloud) -> DotCloud {
    DotCloud {
        points: normalize_points(&cloud.points),
        ..cloud.clone()
    }
}
