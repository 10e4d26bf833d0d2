use crate::error::{Result, SdrError};
use crate::imaging::Polyline;

/// Place dots every `spacing` pixels of arc length, starting at the first
/// point. Open chains also keep their last point when it lies more than
/// half a spacing beyond the final sample; closed chains walk their
/// closing segment and never repeat the start.
pub fn resample_equidistant(line: &Polyline, spacing: f64) -> Result<Polyline> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(SdrError::invalid(format!("spacing {spacing} must be positive")));
    }
    if line.points.is_empty() {
        return Err(SdrError::invalid("cannot resample an empty polyline"));
    }
    if line.points.len() == 1 {
        return Ok(line.clone());
    }

    let mut verts = line.points.clone();
    if line.closed {
        verts.push(line.points[0]);
    }
    let total: f64 = verts.windows(2).map(|w| w[0].dist(w[1])).sum();
    let tol = 1e-9 * total.max(1.0);

    let mut out = vec![verts[0]];
    let mut seg = 0;
    let mut seg_start = 0.0;
    let mut k = 1usize;
    loop {
        let target = k as f64 * spacing;
        let in_range = if line.closed {
            target < total - tol
        } else {
            target <= total + tol
        };
        if !in_range {
            break;
        }
        // Advance to the segment containing `target`.
        loop {
            let len = verts[seg].dist(verts[seg + 1]);
            if seg_start + len >= target - tol || seg + 2 == verts.len() {
                let t = if len > 0.0 {
                    ((target - seg_start) / len).clamp(0.0, 1.0)
                } else {
                    1.0
                };
                out.push(verts[seg].lerp(verts[seg + 1], t));
                break;
            }
            seg_start += len;
            seg += 1;
        }
        k += 1;
    }

    if !line.closed {
        let last = *line.points.last().unwrap();
        if out.last().unwrap().dist(last) > spacing / 2.0 {
            out.push(last);
        }
    }
    let closed = line.closed && out.len() >= 3;
    Ok(Polyline {
        points: out,
        closed,
    })
}
