use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{rdp_simplify, DotCloud};
use crate::error::{Result, SdrError};
use crate::geometry::Point;
use crate::imaging::Polyline;

/// Bracket for the ε search, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsRange {
    pub min: f64,
    pub max: f64,
}

impl Default for EpsRange {
    fn default() -> Self {
        EpsRange { min: 2.0, max: 64.0 }
    }
}

const MAX_BISECTIONS: usize = 40;
const BRACKET_WIDTH: f64 = 1e-3;

fn simplify_all(lines: &[Polyline], epsilon: f64) -> Result<Vec<Polyline>> {
    lines
        .par_iter()
        .map(|l| rdp_simplify(l, epsilon))
        .collect()
}

fn total(lines: &[Polyline]) -> usize {
    lines.iter().map(Polyline::len).sum()
}

/// Find the smallest ε (to within the bisection bracket) whose simplified
/// point count over all polylines fits in `budget`, and build the dot cloud
/// for it. Coordinates are pixel centres divided by the longer image side.
pub fn simplify_to_budget(
    lines: &[Polyline],
    budget: usize,
    range: EpsRange,
    width: usize,
    height: usize,
    source: &str,
) -> Result<DotCloud> {
    if budget < 2 {
        return Err(SdrError::invalid(format!("budget {budget} must be >= 2")));
    }
    if !(range.min >= 0.0 && range.max > range.min && range.max.is_finite()) {
        return Err(SdrError::invalid(format!(
            "epsilon range [{}, {}] must satisfy 0 <= min < max",
            range.min, range.max
        )));
    }
    let lines: Vec<Polyline> = lines.iter().filter(|l| !l.is_empty()).cloned().collect();
    if lines.is_empty() {
        return Err(SdrError::invalid("no polylines to simplify"));
    }

    let at_min = simplify_all(&lines, range.min)?;
    let (epsilon, simplified) = if total(&at_min) <= budget {
        (range.min, at_min)
    } else {
        let at_max = simplify_all(&lines, range.max)?;
        let min_count = total(&at_max);
        if min_count > budget {
            return Err(SdrError::BudgetUnreachable { budget, min_count });
        }
        // Invariant: count(lo) > budget >= count(hi).
        let (mut lo, mut hi, mut best) = (range.min, range.max, at_max);
        for _ in 0..MAX_BISECTIONS {
            if hi - lo < BRACKET_WIDTH {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let s = simplify_all(&lines, mid)?;
            if total(&s) <= budget {
                hi = mid;
                best = s;
            } else {
                lo = mid;
            }
        }
        (hi, best)
    };

    let scale = width.max(height) as f64;
    let mut points: Vec<Point> = Vec::new();
    let mut ids = Vec::new();
    for (id, line) in simplified.iter().enumerate() {
        for p in &line.points {
            let q = Point::new(
                ((p.x + 0.5) / scale).clamp(0.0, 1.0),
                ((p.y + 0.5) / scale).clamp(0.0, 1.0),
            );
            // Dots from different chains may coincide; keep the first.
            if !points.contains(&q) {
                points.push(q);
                ids.push(id);
            }
        }
    }
    Ok(DotCloud {
        points,
        source_polyline_ids: ids,
        epsilon,
        source: source.to_string(),
        width,
        height,
    })
}
