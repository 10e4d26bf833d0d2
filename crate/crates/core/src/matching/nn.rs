use crate::geometry::Point;

/// Exact nearest-neighbour search over a fixed point set, accelerated by a
/// uniform grid. Results always equal a linear scan, including the
/// lowest-index tie-break between equidistant candidates.
#[derive(Debug, Clone)]
pub struct NearestNeighborIndex {
    points: Vec<Point>,
    origin: Point,
    cell: f64,
    cols: usize,
    rows: usize,
    /// Point indices per cell (row-major), ascending.
    cells: Vec<Vec<usize>>,
}

impl NearestNeighborIndex {
    /// Returns `None` for an empty point list.
    pub fn new(points: &[Point]) -> Option<Self> {
        if points.is_empty() {
            return None;
        }
        let (mut minx, mut maxx, mut miny, mut maxy) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in points {
            minx = minx.min(p.x);
            maxx = maxx.max(p.x);
            miny = miny.min(p.y);
            maxy = maxy.max(p.y);
        }
        let extent = (maxx - minx).max(maxy - miny);
        let per_side = (points.len() as f64).sqrt().ceil().max(1.0);
        let cell = if extent > 0.0 { extent / per_side } else { 1.0 };
        let cols = (((maxx - minx) / cell).floor() as usize + 1).max(1);
        let rows = (((maxy - miny) / cell).floor() as usize + 1).max(1);
        let mut index = NearestNeighborIndex {
            points: points.to_vec(),
            origin: Point::new(minx, miny),
            cell,
            cols,
            rows,
            cells: vec![Vec::new(); cols * rows],
        };
        for (i, p) in points.iter().enumerate() {
            let (c, r) = index.cell_of(*p);
            index.cells[r * cols + c].push(i);
        }
        Some(index)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    fn cell_of(&self, p: Point) -> (usize, usize) {
        let clamp = |v: f64, n: usize| -> usize {
            if v.is_nan() || v <= 0.0 {
                0
            } else {
                (v.floor() as usize).min(n - 1)
            }
        };
        (
            clamp((p.x - self.origin.x) / self.cell, self.cols),
            clamp((p.y - self.origin.y) / self.cell, self.rows),
        )
    }

    /// Index and squared distance of the nearest stored point.
    pub fn nearest(&self, q: Point) -> (usize, f64) {
        let (cx, cy) = self.cell_of(q);
        let (cx, cy) = (cx as isize, cy as isize);
        let mut best = (usize::MAX, f64::INFINITY);
        let max_ring = self.cols.max(self.rows) as isize;
        for r in 0..=max_ring {
            for y in cy - r..=cy + r {
                if y < 0 || y >= self.rows as isize {
                    continue;
                }
                let on_edge_row = y == cy - r || y == cy + r;
                let step = if on_edge_row || r == 0 { 1 } else { (2 * r) as usize };
                let mut x = cx - r;
                while x <= cx + r {
                    if x >= 0 && x < self.cols as isize {
                        for &i in &self.cells[y as usize * self.cols + x as usize] {
                            let d = q.dist_sq(self.points[i]);
                            if d < best.1 || (d == best.1 && i < best.0) {
                                best = (i, d);
                            }
                        }
                    }
                    x += step as isize;
                }
            }
            if best.0 != usize::MAX {
                match self.unvisited_bound(q, cx, cy, r) {
                    None => break,
                    Some(lb) if best.1 < lb * lb * (1.0 - 1e-9) => break,
                    _ => {}
                }
            }
        }
        best
    }

    /// Lower bound on the distance from `q` to any cell outside the
    /// `(2r+1)²` block around `(cx, cy)`; `None` when no such cell exists.
    fn unvisited_bound(&self, q: Point, cx: isize, cy: isize, r: isize) -> Option<f64> {
        let mut lb = f64::INFINITY;
        let c = self.cell;
        if cx - r > 0 {
            lb = lb.min((q.x - (self.origin.x + (cx - r) as f64 * c)).max(0.0));
        }
        if cx + r + 1 < self.cols as isize {
            lb = lb.min((self.origin.x + (cx + r + 1) as f64 * c - q.x).max(0.0));
        }
        if cy - r > 0 {
            lb = lb.min((q.y - (self.origin.y + (cy - r) as f64 * c)).max(0.0));
        }
        if cy + r + 1 < self.rows as isize {
            lb = lb.min((self.origin.y + (cy + r + 1) as f64 * c - q.y).max(0.0));
        }
        lb.is_finite().then_some(lb)
    }
}
