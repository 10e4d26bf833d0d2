use super::EdgeMap;

/// Zhang–Suen thinning: peel boundary pixels in two alternating sub-passes
/// until none can be removed without breaking 8-connectivity or shortening
/// a line end. Sobel bands two or more pixels wide collapse to one-pixel
/// curves, which then chain into a single polyline per contour.
pub fn thin_edges(edges: &EdgeMap) -> EdgeMap {
    let (w, h) = (edges.width, edges.height);
    let mut out = edges.clone();
    if w < 3 || h < 3 {
        return out;
    }
    let mut removals = Vec::new();
    loop {
        let mut changed = false;
        for pass in 0..2 {
            removals.clear();
            for y in 1..h - 1 {
                for x in 1..w - 1 {
                    if out.get(x, y) && removable(&out, x, y, pass) {
                        removals.push((x, y));
                    }
                }
            }
            for &(x, y) in &removals {
                out.set(x, y, false);
            }
            changed |= !removals.is_empty();
        }
        if !changed {
            return out;
        }
    }
}

fn removable(m: &EdgeMap, x: usize, y: usize, pass: usize) -> bool {
    // P2..P9 clockwise from north.
    let p = [
        m.get(x, y - 1),
        m.get(x + 1, y - 1),
        m.get(x + 1, y),
        m.get(x + 1, y + 1),
        m.get(x, y + 1),
        m.get(x - 1, y + 1),
        m.get(x - 1, y),
        m.get(x - 1, y - 1),
    ];
    let b = p.iter().filter(|&&v| v).count();
    if !(2..=6).contains(&b) {
        return false;
    }
    let a = (0..8).filter(|&i| !p[i] && p[(i + 1) % 8]).count();
    if a != 1 {
        return false;
    }
    let (n, e, s, wst) = (p[0], p[2], p[4], p[6]);
    if pass == 0 {
        !(n && e && s) && !(e && s && wst)
    } else {
        !(n && e && wst) && !(n && s && wst)
    }
}

/// Remove the redundant corner pixels of 4-connected staircases so that a
/// diagonal edge becomes a plain 8-connected line.
///
/// Pixels are visited in raster order and deleted in place when two
/// perpendicular 4-neighbours are set and the pixel is simple for
/// 8-connectivity (Yokoi connectivity number 1). Line ends and junction
/// pixels are never simple, so curves keep their length and topology.
pub fn remove_staircase(edges: &EdgeMap) -> EdgeMap {
    let (w, h) = (edges.width, edges.height);
    let mut out = edges.clone();
    if w < 3 || h < 3 {
        return out;
    }
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            if out.get(x, y) && staircase_corner(&out, x, y) {
                out.set(x, y, false);
            }
        }
    }
    out
}

fn staircase_corner(m: &EdgeMap, x: usize, y: usize) -> bool {
    // x1..x8 counter-clockwise from east.
    let v = [
        m.get(x + 1, y),
        m.get(x + 1, y - 1),
        m.get(x, y - 1),
        m.get(x - 1, y - 1),
        m.get(x - 1, y),
        m.get(x - 1, y + 1),
        m.get(x, y + 1),
        m.get(x + 1, y + 1),
    ];
    let (e, n, wst, s) = (v[0], v[2], v[4], v[6]);
    if !((n && e) || (e && s) || (s && wst) || (wst && n)) {
        return false;
    }
    let off = |i: usize| u8::from(!v[i % 8]);
    let connectivity: u8 = [0, 2, 4, 6]
        .iter()
        .map(|&k| off(k) - off(k) * off(k + 1) * off(k + 2))
        .sum();
    connectivity == 1
}
