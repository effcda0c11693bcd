//! Planar ring predicates over (x = longitude, y = latitude) degrees.

pub type Point = [f64; 2];
pub type Ring = Vec<Point>;

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn within_box(p: Point, a: Point, b: Point) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

pub fn on_segment(p: Point, a: Point, b: Point) -> bool {
    cross(a, b, p) == 0.0 && within_box(p, a, b)
}

/// Closed-segment intersection, including touching and collinear overlap.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && within_box(a, c, d))
        || (d2 == 0.0 && within_box(b, c, d))
        || (d3 == 0.0 && within_box(c, a, b))
        || (d4 == 0.0 && within_box(d, a, b))
}

/// True when `ring` is closed and has at least four points.
pub fn is_closed(ring: &[Point]) -> bool {
    ring.len() >= 4 && ring.first() == ring.last()
}

/// Scans every pair of non-adjacent edges of a closed ring.
pub fn is_simple(ring: &[Point]) -> bool {
    let n = ring.len() - 1; // edge count
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_intersect(ring[i], ring[i + 1], ring[j], ring[j + 1]) {
                return false;
            }
        }
    }
    true
}

pub fn on_ring_boundary(ring: &[Point], p: Point) -> bool {
    ring.windows(2).any(|w| on_segment(p, w[0], w[1]))
}

/// Even-odd crossing count of a horizontal ray from `p` towards +x.
pub fn ray_crossings(ring: &[Point], p: Point) -> usize {
    let mut count = 0;
    for w in ring.windows(2) {
        let (a, b) = (w[0], w[1]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                count += 1;
            }
        }
    }
    count
}

/// Even-odd containment over all rings (exterior plus holes); a point on
/// any ring boundary counts as inside.
pub fn polygon_contains(rings: &[Ring], p: Point) -> bool {
    if rings.iter().any(|r| on_ring_boundary(r, p)) {
        return true;
    }
    rings.iter().map(|r| ray_crossings(r, p)).sum::<usize>() % 2 == 1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn of(ring: &[Point]) -> BBox {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in ring {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        BBox { min, max }
    }

    pub fn contains(&self, p: Point) -> bool {
        p[0] >= self.min[0] && p[0] <= self.max[0] && p[1] >= self.min[1] && p[1] <= self.max[1]
    }
}
