//! Low-level geometric primitives: points, 2D polygon predicates, and
//! segment-vs-prism intersection used by the line-of-sight caster.
//!
//! Buildings are vertical prisms (a 2D footprint extruded from z = 0 to its
//! height), so every occlusion query reduces to 2D polygon work plus two
//! horizontal clipping planes. All predicates here use a strict-interior
//! convention: points exactly on a face, edge, or roof plane count as
//! *outside*.

/// A point (or position vector) in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    /// Point at parameter `t` along the segment from `self` to `other`.
    pub fn lerp(&self, other: &Point3, t: f64) -> Point3 {
        Point3::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
            self.z + t * (other.z - self.z),
        )
    }
}

/// Axis-aligned bounding box used to prune prism intersection tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Aabb {
    /// Tight box around a footprint extruded from z = 0 to `height`.
    pub fn of_prism(footprint: &[[f64; 2]], height: f64) -> Self {
        let mut min = [f64::INFINITY, f64::INFINITY, 0.0];
        let mut max = [f64::NEG_INFINITY, f64::NEG_INFINITY, height];
        for v in footprint {
            min[0] = min[0].min(v[0]);
            min[1] = min[1].min(v[1]);
            max[0] = max[0].max(v[0]);
            max[1] = max[1].max(v[1]);
        }
        Self { min, max }
    }

    /// Conservative slab test: does the closed segment `a`..`b` touch the box?
    pub fn segment_overlaps(&self, a: &Point3, b: &Point3) -> bool {
        let pa = [a.x, a.y, a.z];
        let pb = [b.x, b.y, b.z];
        let mut t0 = 0.0f64;
        let mut t1 = 1.0f64;
        for ax in 0..3 {
            let d = pb[ax] - pa[ax];
            if d == 0.0 {
                if pa[ax] < self.min[ax] || pa[ax] > self.max[ax] {
                    return false;
                }
            } else {
                let inv = 1.0 / d;
                let mut ta = (self.min[ax] - pa[ax]) * inv;
                let mut tb = (self.max[ax] - pa[ax]) * inv;
                if ta > tb {
                    std::mem::swap(&mut ta, &mut tb);
                }
                t0 = t0.max(ta);
                t1 = t1.min(tb);
                if t0 > t1 {
                    return false;
                }
            }
        }
        true
    }
}

/// Twice the signed area of the triangle (a, b, c); positive when the turn
/// a->b->c is counter-clockwise.
fn orient2d(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Signed polygon area (shoelace); positive for counter-clockwise vertex
/// order.
pub fn polygon_signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        acc += a[0] * b[1] - b[0] * a[1];
    }
    acc / 2.0
}

fn point_on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    if orient2d(a, b, p) != 0.0 {
        return false;
    }
    p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

/// Closed-segment intersection test (shared endpoints and touching count).
fn segments_intersect(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = orient2d(q1, q2, p1);
    let d2 = orient2d(q1, q2, p2);
    let d3 = orient2d(p1, p2, q1);
    let d4 = orient2d(p1, p2, q2);

    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && point_on_segment(q1, q2, p1))
        || (d2 == 0.0 && point_on_segment(q1, q2, p2))
        || (d3 == 0.0 && point_on_segment(p1, p2, q1))
        || (d4 == 0.0 && point_on_segment(p1, p2, q2))
}

/// True when the polygon is simple: no repeated vertices, no zero-length or
/// back-tracking edges, and no two non-adjacent edges touching.
pub fn polygon_is_simple(poly: &[[f64; 2]]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if a == b {
            return false;
        }
        // A spike (next edge doubling back along this one) is degenerate.
        let c = poly[(i + 2) % n];
        if orient2d(a, b, c) == 0.0 {
            let ab = [b[0] - a[0], b[1] - a[1]];
            let bc = [c[0] - b[0], c[1] - b[1]];
            if ab[0] * bc[0] + ab[1] * bc[1] < 0.0 {
                return false;
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            // Adjacent edges share an endpoint by construction; skip them.
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (a1, a2) = (poly[i], poly[(i + 1) % n]);
            let (b1, b2) = (poly[j], poly[(j + 1) % n]);
            if segments_intersect(a1, a2, b1, b2) {
                return false;
            }
        }
    }
    true
}

/// Even-odd point-in-polygon test with an explicit boundary check first:
/// points on an edge or vertex return `false` (strict interior).
pub fn point_in_polygon_strict(p: [f64; 2], poly: &[[f64; 2]]) -> bool {
    let n = poly.len();
    for i in 0..n {
        if point_on_segment(poly[i], poly[(i + 1) % n], p) {
            return false;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x_int = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x_int {
                inside = !inside;
            }
        }
    }
    inside
}

/// Does the open segment (a, b) pass through the *interior* of the prism
/// extruded from `footprint` over z in (0, height)?
///
/// The segment is cut at every polygon-edge crossing and at the z = 0 and
/// z = height planes; inside-ness is constant on each resulting piece, so
/// testing piece midpoints is exact up to floating-point tangencies.
pub fn segment_enters_prism(a: &Point3, b: &Point3, footprint: &[[f64; 2]], height: f64) -> bool {
    let a2 = [a.x, a.y];
    let d2 = [b.x - a.x, b.y - a.y];

    let mut ts: Vec<f64> = vec![0.0, 1.0];

    let dz = b.z - a.z;
    if dz != 0.0 {
        for plane in [0.0, height] {
            let t = (plane - a.z) / dz;
            if t > 0.0 && t < 1.0 {
                ts.push(t);
            }
        }
    }

    let n = footprint.len();
    for i in 0..n {
        let e1 = footprint[i];
        let e2 = footprint[(i + 1) % n];
        let e = [e2[0] - e1[0], e2[1] - e1[1]];
        let denom = d2[0] * e[1] - d2[1] * e[0];
        if denom == 0.0 {
            // Parallel or collinear: grazing along an edge never enters the
            // interior, and the midpoint tests handle it.
            continue;
        }
        let w = [e1[0] - a2[0], e1[1] - a2[1]];
        let t = (w[0] * e[1] - w[1] * e[0]) / denom;
        let s = (w[0] * d2[1] - w[1] * d2[0]) / denom;
        if t > 0.0 && t < 1.0 && (0.0..=1.0).contains(&s) {
            ts.push(t);
        }
    }

    ts.sort_by(f64::total_cmp);
    for w in ts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 <= t0 {
            continue;
        }
        let tm = 0.5 * (t0 + t1);
        let p = a.lerp(b, tm);
        if p.z > 0.0 && p.z < height && point_in_polygon_strict([p.x, p.y], footprint) {
            return true;
        }
    }
    false
}
