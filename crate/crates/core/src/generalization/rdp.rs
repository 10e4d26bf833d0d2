use crate::error::{Result, SdrError};
use crate::geometry::{centroid, point_segment_distance_sq, Point};
use crate::imaging::Polyline;

/// One split decision of the recursion over `points[first..=last]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RdpStep {
    pub first: usize,
    pub last: usize,
    /// Interior point farthest from the baseline and its distance.
    pub farthest: usize,
    pub distance: f64,
    pub kept: bool,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon >= 0.0 && !epsilon.is_nan() {
        Ok(())
    } else {
        Err(SdrError::invalid(format!("epsilon {epsilon} must be >= 0")))
    }
}

/// Core recursion on an open chain, run with an explicit stack. Marks
/// survivors in `keep` and reports each split decision to `observe`.
fn rdp_mark(points: &[Point], epsilon: f64, keep: &mut [bool], observe: &mut dyn FnMut(RdpStep)) {
    let n = points.len();
    if n == 0 {
        return;
    }
    keep[0] = true;
    keep[n - 1] = true;
    let mut stack = vec![(0, n - 1)];
    while let Some((first, last)) = stack.pop() {
        if last <= first + 1 {
            continue;
        }
        let (a, b) = (points[first], points[last]);
        // Work in squared distances so that ties and the ε test are decided
        // without square-root rounding.
        let mut farthest = first + 1;
        let mut best_sq = f64::NEG_INFINITY;
        for (i, &p) in points.iter().enumerate().take(last).skip(first + 1) {
            let d_sq = point_segment_distance_sq(p, a, b);
            if d_sq > best_sq {
                best_sq = d_sq;
                farthest = i;
            }
        }
        let kept = best_sq > epsilon * epsilon;
        observe(RdpStep {
            first,
            last,
            farthest,
            distance: best_sq.sqrt(),
            kept,
        });
        if kept {
            keep[farthest] = true;
            stack.push((farthest, last));
            stack.push((first, farthest));
        }
    }
}

/// Indices of an open chain that survive simplification, ascending.
pub fn rdp_keep_indices(points: &[Point], epsilon: f64) -> Vec<usize> {
    let mut keep = vec![false; points.len()];
    rdp_mark(points, epsilon, &mut keep, &mut |_| {});
    (0..points.len()).filter(|&i| keep[i]).collect()
}

/// Every split decision made while simplifying an open chain.
pub fn rdp_steps(points: &[Point], epsilon: f64) -> Vec<RdpStep> {
    let mut keep = vec![false; points.len()];
    let mut steps = Vec::new();
    rdp_mark(points, epsilon, &mut keep, &mut |s| steps.push(s));
    steps
}

/// Split points of a closed chain: the vertex farthest from the centroid
/// and the vertex farthest from that one (lowest index on ties).
fn closed_split(points: &[Point]) -> (usize, usize) {
    let c = centroid(points);
    let argmax = |f: &dyn Fn(Point) -> f64, skip: Option<usize>| {
        let mut best = (usize::MAX, f64::NEG_INFINITY);
        for (i, &p) in points.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let d = f(p);
            if d > best.1 {
                best = (i, d);
            }
        }
        best.0
    };
    let a = argmax(&|p| p.dist_sq(c), None);
    let pa = points[a];
    let b = argmax(&|p| p.dist_sq(pa), Some(a));
    (a, b)
}

/// Ramer–Douglas–Peucker simplification. The result is a subsequence of the
/// input that keeps both endpoints of open chains. Closed chains are cut at
/// two split vertices into open halves, each simplified on its own.
pub fn rdp_simplify(line: &Polyline, epsilon: f64) -> Result<Polyline> {
    check_epsilon(epsilon)?;
    let n = line.points.len();
    if n <= 2 || (line.closed && n < 3) {
        return Ok(line.clone());
    }
    if !line.closed {
        let points = rdp_keep_indices(&line.points, epsilon)
            .into_iter()
            .map(|i| line.points[i])
            .collect();
        return Ok(Polyline::open(points));
    }

    let (a, b) = closed_split(&line.points);
    let mut keep = vec![false; n];
    for (from, to) in [(a, b), (b, a)] {
        let len = (to + n - from) % n + 1;
        let idx: Vec<usize> = (0..len).map(|k| (from + k) % n).collect();
        let half: Vec<Point> = idx.iter().map(|&i| line.points[i]).collect();
        for k in rdp_keep_indices(&half, epsilon) {
            keep[idx[k]] = true;
        }
    }
    let points: Vec<Point> = (0..n).filter(|&i| keep[i]).map(|i| line.points[i]).collect();
    let closed = points.len() >= 3;
    Ok(Polyline { points, closed })
}
