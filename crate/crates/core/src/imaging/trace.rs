use super::EdgeMap;
use crate::geometry::Point;

/// Ordered chain of points. Traced chains hold integer pixel coordinates;
/// resampled and simplified chains hold arbitrary sub-pixel positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl Polyline {
    pub fn open(points: Vec<Point>) -> Self {
        Polyline {
            points,
            closed: false,
        }
    }

    pub fn closed(points: Vec<Point>) -> Self {
        Polyline {
            points,
            closed: true,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Arc length, including the closing segment for closed chains.
    pub fn arc_length(&self) -> f64 {
        let open: f64 = self.points.windows(2).map(|w| w[0].dist(w[1])).sum();
        match (self.closed, self.points.first(), self.points.last()) {
            (true, Some(&a), Some(&b)) if self.points.len() > 1 => open + b.dist(a),
            _ => open,
        }
    }
}

const FOUR: [(isize, isize); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];
const DIAG: [(isize, isize); 4] = [(-1, -1), (1, -1), (-1, 1), (1, 1)];

/// Chain edge pixels into polylines.
///
/// Each chain starts at the unvisited edge pixel with the smallest `(y, x)`
/// and repeatedly steps to an unvisited 8-neighbour: edge-adjacent
/// neighbours are preferred over diagonal ones, and within each class the
/// smallest `(y, x)` wins. A chain of at least three pixels whose endpoints
/// touch is marked closed.
pub fn trace_contours(edges: &EdgeMap) -> Vec<Polyline> {
    let (w, h) = (edges.width, edges.height);
    let mut visited = vec![false; w * h];
    let mut out = Vec::new();

    let next_in = |x: usize, y: usize, offs: &[(isize, isize)], visited: &[bool]| {
        // Offsets are listed in ascending (dy, dx) order.
        offs.iter().find_map(|&(dx, dy)| {
            let nx = x as isize + dx;
            let ny = y as isize + dy;
            if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                return None;
            }
            let i = ny as usize * w + nx as usize;
            (edges.mask[i] && !visited[i]).then_some((nx as usize, ny as usize))
        })
    };

    for start in 0..w * h {
        if !edges.mask[start] || visited[start] {
            continue;
        }
        let (mut x, mut y) = (start % w, start / w);
        visited[start] = true;
        let mut pixels = vec![(x, y)];
        while let Some((nx, ny)) =
            next_in(x, y, &FOUR, &visited).or_else(|| next_in(x, y, &DIAG, &visited))
        {
            visited[ny * w + nx] = true;
            pixels.push((nx, ny));
            x = nx;
            y = ny;
        }
        let (fx, fy) = pixels[0];
        let (lx, ly) = pixels[pixels.len() - 1];
        let closed = pixels.len() >= 3 && fx.abs_diff(lx) <= 1 && fy.abs_diff(ly) <= 1;
        out.push(Polyline {
            points: pixels
                .into_iter()
                .map(|(x, y)| Point::new(x as f64, y as f64))
                .collect(),
            closed,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(w: usize, h: usize, on: &[(usize, usize)]) -> EdgeMap {
        let mut e = EdgeMap::empty(w, h);
        for &(x, y) in on {
            e.set(x, y, true);
        }
        e
    }

    fn pts(p: &Polyline) -> Vec<(i64, i64)> {
        p.points.iter().map(|p| (p.x as i64, p.y as i64)).collect()
    }

    #[test]
    fn empty_map() {
        assert!(trace_contours(&EdgeMap::empty(5, 5)).is_empty());
    }

    #[test]
    fn single_pixel() {
        let lines = trace_contours(&map(5, 5, &[(2, 2)]));
        assert_eq!(lines.len(), 1);
        assert_eq!(pts(&lines[0]), vec![(2, 2)]);
        assert!(!lines[0].closed);
    }

    #[test]
    fn horizontal_run() {
        let on: Vec<_> = (1..6).map(|x| (x, 3)).collect();
        let lines = trace_contours(&map(8, 6, &on));
        assert_eq!(lines.len(), 1);
        assert_eq!(pts(&lines[0]), vec![(1, 3), (2, 3), (3, 3), (4, 3), (5, 3)]);
        assert!(!lines[0].closed);
    }

    #[test]
    fn square_ring_traced_from_top_left() {
        let on = [
            (1, 1), (2, 1), (3, 1),
            (1, 2), (3, 2),
            (1, 3), (2, 3), (3, 3),
        ];
        let lines = trace_contours(&map(5, 5, &on));
        assert_eq!(lines.len(), 1);
        assert!(lines[0].closed);
        assert_eq!(
            pts(&lines[0]),
            vec![(1, 1), (2, 1), (3, 1), (3, 2), (3, 3), (2, 3), (1, 3), (1, 2)]
        );
    }

    #[test]
    fn every_pixel_in_exactly_one_chain() {
        let on = [(1, 1), (2, 2), (3, 1), (5, 5), (6, 5), (1, 6), (7, 7), (6, 7)];
        let e = map(9, 9, &on);
        let lines = trace_contours(&e);
        let total: usize = lines.iter().map(Polyline::len).sum();
        assert_eq!(total, on.len());
        let mut seen: Vec<_> = lines.iter().flat_map(pts).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), on.len());
        for l in &lines {
            for w in l.points.windows(2) {
                assert!((w[0].x - w[1].x).abs() <= 1.0 && (w[0].y - w[1].y).abs() <= 1.0);
            }
        }
        assert_eq!(trace_contours(&e), lines);
    }
}
