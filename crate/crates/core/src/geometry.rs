//! Planar primitives: points, segments, polygons with holes, and the
//! epsilon-guarded predicates the rest of the crate is built on.
//!
//! All predicates use an absolute tolerance of [`EPS`] input units. Instances
//! are expected at roughly unit-to-thousand scale.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Collinearity / touching tolerance, in input units.
pub const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }

    /// Angle of the direction from `self` to `other`, in `(-pi, pi]`.
    pub fn angle_to(self, other: Point) -> f64 {
        (other.y - self.y).atan2(other.x - self.x)
    }

    pub fn approx_eq(self, other: Point) -> bool {
        self.dist(other) <= EPS
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    /// Rejects zero-length segments.
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a.approx_eq(b) {
            return Err(Error::DegenerateSegment(a));
        }
        Ok(Segment { a, b })
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Projection parameter of `p` onto the line through the segment,
    /// measured in length units from `a`.
    fn along(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        (p - self.a).dot(d) / d.norm()
    }

    /// Euclidean distance from `p` to the closed segment.
    pub fn distance_to(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        let len2 = d.dot(d);
        if len2 == 0.0 {
            return p.dist(self.a);
        }
        let t = ((p - self.a).dot(d) / len2).clamp(0.0, 1.0);
        p.dist(self.a.lerp(self.b, t))
    }

    fn bbox_overlaps(&self, other: &Segment) -> bool {
        let (ax0, ax1) = minmax(self.a.x, self.b.x);
        let (ay0, ay1) = minmax(self.a.y, self.b.y);
        let (bx0, bx1) = minmax(other.a.x, other.b.x);
        let (by0, by1) = minmax(other.a.y, other.b.y);
        ax0 <= bx1 + EPS && bx0 <= ax1 + EPS && ay0 <= by1 + EPS && by0 <= ay1 + EPS
    }
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Sign of the signed area of triangle `pqr`: `+1` for a left turn, `-1` for
/// a right turn and `0` when the smallest triangle height is within [`EPS`].
pub fn orientation(p: Point, q: Point, r: Point) -> i8 {
    let cross = (q - p).cross(r - p);
    let longest = p.dist(q).max(q.dist(r)).max(r.dist(p));
    if cross.abs() <= EPS * longest {
        0
    } else if cross > 0.0 {
        1
    } else {
        -1
    }
}

/// Result of intersecting two closed segments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SegmentIntersection {
    Disjoint,
    /// The segments cross at a single point interior to both.
    ProperCross(Point),
    /// The segments share a single point that is an endpoint of at least one.
    Touch(Point),
    /// The segments are collinear and share a sub-segment of positive length.
    Overlap(Segment),
}

pub fn segments_intersect(s1: &Segment, s2: &Segment) -> SegmentIntersection {
    use SegmentIntersection::*;
    if !s1.bbox_overlaps(s2) {
        return Disjoint;
    }
    let (a, b, c, d) = (s1.a, s1.b, s2.a, s2.b);
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);

    if o1 == 0 && o2 == 0 {
        return collinear_intersection(s1, s2);
    }
    if o1 * o2 < 0 && o3 * o4 < 0 {
        let r = b - a;
        let s = d - c;
        let t = (c - a).cross(s) / r.cross(s);
        return ProperCross(a.lerp(b, t));
    }
    let on = |seg: &Segment, p: Point| {
        let t = seg.along(p);
        t >= -EPS && t <= seg.length() + EPS
    };
    if o1 == 0 && on(s1, c) {
        return Touch(c);
    }
    if o2 == 0 && on(s1, d) {
        return Touch(d);
    }
    if o3 == 0 && on(s2, a) {
        return Touch(a);
    }
    if o4 == 0 && on(s2, b) {
        return Touch(b);
    }
    Disjoint
}

fn collinear_intersection(s1: &Segment, s2: &Segment) -> SegmentIntersection {
    let len = s1.length();
    // Candidate interval endpoints are the actual input points so that
    // overlaps reproduce input coordinates exactly.
    let mut pts = [
        (0.0, s1.a),
        (len, s1.b),
        (s1.along(s2.a), s2.a),
        (s1.along(s2.b), s2.b),
    ];
    let (c_lo, c_hi) = minmax(pts[2].0, pts[3].0);
    let lo = c_lo.max(0.0);
    let hi = c_hi.min(len);
    if hi < lo - EPS {
        return SegmentIntersection::Disjoint;
    }
    pts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let pick = |t: f64| {
        pts.iter()
            .min_by(|x, y| (x.0 - t).abs().total_cmp(&(y.0 - t).abs()))
            .map(|x| x.1)
            .unwrap()
    };
    let p_lo = pick(lo);
    let p_hi = pick(hi);
    if hi - lo <= EPS || p_lo.approx_eq(p_hi) {
        SegmentIntersection::Touch(p_lo)
    } else {
        SegmentIntersection::Overlap(Segment { a: p_lo, b: p_hi })
    }
}

/// Twice the signed area; positive for counterclockwise rings.
pub fn signed_area2(ring: &[Point]) -> f64 {
    let n = ring.len();
    (0..n).map(|i| ring[i].cross(ring[(i + 1) % n])).sum()
}

/// Strict interior test by ray casting. Points on the boundary may go
/// either way; callers check the boundary first.
fn ring_contains(ring: &[Point], p: Point) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (pi, pj) = (ring[i], ring[j]);
        if (pi.y > p.y) != (pj.y > p.y) {
            let x = pj.x + (p.y - pj.y) / (pi.y - pj.y) * (pi.x - pj.x);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn ring_edges(ring: &[Point]) -> impl Iterator<Item = Segment> + '_ {
    let n = ring.len();
    (0..n).map(move |i| Segment {
        a: ring[i],
        b: ring[(i + 1) % n],
    })
}

fn on_ring_boundary(ring: &[Point], p: Point) -> bool {
    ring_edges(ring).any(|e| e.distance_to(p) <= EPS)
}

fn ring_is_simple(ring: &[Point]) -> bool {
    let n = ring.len();
    let edges: Vec<Segment> = ring_edges(ring).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            match segments_intersect(&edges[i], &edges[j]) {
                SegmentIntersection::Disjoint => {}
                SegmentIntersection::Touch(_) if adjacent => {}
                _ => return false,
            }
        }
    }
    true
}

/// Closed free space: a counterclockwise outer boundary minus the open
/// interiors of clockwise holes.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonWithHoles {
    outer: Vec<Point>,
    holes: Vec<Vec<Point>>,
}

impl PolygonWithHoles {
    /// Validates simplicity, containment and disjointness, and normalizes
    /// ring orientation (outer counterclockwise, holes clockwise).
    pub fn new(mut outer: Vec<Point>, mut holes: Vec<Vec<Point>>) -> Result<Self> {
        let check_ring = |ring: &[Point], what: &str| -> Result<()> {
            if ring.len() < 3 {
                return Err(Error::InvalidPolygon(format!("{what} has fewer than 3 vertices")));
            }
            if ring.iter().any(|p| !p.is_finite()) {
                return Err(Error::InvalidPolygon(format!("{what} has non-finite coordinates")));
            }
            if signed_area2(ring).abs() <= EPS {
                return Err(Error::InvalidPolygon(format!("{what} has zero area")));
            }
            if !ring_is_simple(ring) {
                return Err(Error::InvalidPolygon(format!("{what} is not simple")));
            }
            Ok(())
        };
        check_ring(&outer, "outer boundary")?;
        if signed_area2(&outer) < 0.0 {
            outer.reverse();
        }
        for (k, hole) in holes.iter_mut().enumerate() {
            check_ring(hole, &format!("hole {k}"))?;
            if signed_area2(hole) > 0.0 {
                hole.reverse();
            }
            let strictly_inside = hole
                .iter()
                .all(|&p| ring_contains(&outer, p) && !on_ring_boundary(&outer, p));
            let crosses_outer = ring_edges(hole).any(|e| {
                ring_edges(&outer)
                    .any(|o| segments_intersect(&e, &o) != SegmentIntersection::Disjoint)
            });
            if !strictly_inside || crosses_outer {
                return Err(Error::InvalidPolygon(format!(
                    "hole {k} is not strictly inside the outer boundary"
                )));
            }
        }
        for i in 0..holes.len() {
            for j in (i + 1)..holes.len() {
                let touching = ring_edges(&holes[i]).any(|e| {
                    ring_edges(&holes[j])
                        .any(|o| segments_intersect(&e, &o) != SegmentIntersection::Disjoint)
                });
                let nested = ring_contains(&holes[i], holes[j][0])
                    || ring_contains(&holes[j], holes[i][0]);
                if touching || nested {
                    return Err(Error::InvalidPolygon(format!("holes {i} and {j} are not disjoint")));
                }
            }
        }
        Ok(PolygonWithHoles { outer, holes })
    }

    /// Axis-aligned rectangle with no holes.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Self::new(rect_ring(x0, y0, x1, y1), Vec::new())
    }

    pub fn outer(&self) -> &[Point] {
        &self.outer
    }

    pub fn holes(&self) -> &[Vec<Point>] {
        &self.holes
    }

    /// All boundary vertices, outer ring first, then holes in order.
    pub fn vertices(&self) -> impl Iterator<Item = Point> + '_ {
        self.outer
            .iter()
            .chain(self.holes.iter().flatten())
            .copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.outer.len() + self.holes.iter().map(Vec::len).sum::<usize>()
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        ring_edges(&self.outer).chain(self.holes.iter().flat_map(|h| ring_edges(h)))
    }

    /// `(min, max)` corners of the outer boundary.
    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.outer {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    fn on_boundary(&self, p: Point) -> bool {
        self.edges().any(|e| e.distance_to(p) <= EPS)
    }
}

pub fn rect_ring(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point> {
    vec![
        Point::new(x0, y0),
        Point::new(x1, y0),
        Point::new(x1, y1),
        Point::new(x0, y1),
    ]
}

/// True iff `p` lies inside or on the outer boundary and not strictly
/// inside any hole.
pub fn point_in_free_space(f: &PolygonWithHoles, p: Point) -> bool {
    if !p.is_finite() {
        return false;
    }
    if f.on_boundary(p) {
        return true;
    }
    ring_contains(&f.outer, p) && !f.holes.iter().any(|h| ring_contains(h, p))
}

/// True iff every point of the segment lies in the closed free space.
pub fn segment_in_free_space(f: &PolygonWithHoles, s: &Segment) -> bool {
    points_see_each_other(f, s.a, s.b)
}

/// Visibility test between two points of the free space. Grazing along the
/// boundary or through a reflex vertex counts as visible.
pub fn points_see_each_other(f: &PolygonWithHoles, a: Point, b: Point) -> bool {
    if !point_in_free_space(f, a) || !point_in_free_space(f, b) {
        return false;
    }
    let len = a.dist(b);
    if len <= EPS {
        return true;
    }
    let seg = Segment { a, b };
    let mut cuts = vec![0.0, len];
    for e in f.edges() {
        match segments_intersect(&seg, &e) {
            SegmentIntersection::Disjoint => {}
            SegmentIntersection::ProperCross(_) => return false,
            SegmentIntersection::Touch(p) => cuts.push(seg.along(p)),
            SegmentIntersection::Overlap(o) => {
                cuts.push(seg.along(o.a));
                cuts.push(seg.along(o.b));
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).all(|w| {
        if w[1] - w[0] <= EPS {
            return true;
        }
        let mid = a.lerp(b, 0.5 * (w[0] + w[1]) / len);
        point_in_free_space(f, mid)
    })
}

/// Snap index for merging points that coincide within a tolerance.
#[derive(Clone, Debug)]
pub struct PointIndex {
    tol: f64,
    cells: std::collections::HashMap<(i64, i64), Vec<usize>>,
    points: Vec<Point>,
}

impl PointIndex {
    pub fn new(tol: f64) -> Self {
        PointIndex {
            tol,
            cells: Default::default(),
            points: Vec::new(),
        }
    }

    fn cell(&self, p: Point) -> (i64, i64) {
        ((p.x / self.tol).floor() as i64, (p.y / self.tol).floor() as i64)
    }

    pub fn find(&self, p: Point) -> Option<usize> {
        let (cx, cy) = self.cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(cx + dx, cy + dy)) {
                    if let Some(&id) = ids.iter().find(|&&id| self.points[id].dist(p) <= self.tol) {
                        return Some(id);
                    }
                }
            }
        }
        None
    }

    /// Index of the stored point within tolerance of `p`, inserting `p` if
    /// there is none. The boolean is true for fresh insertions.
    pub fn insert(&mut self, p: Point) -> (usize, bool) {
        if let Some(id) = self.find(p) {
            return (id, false);
        }
        let id = self.points.len();
        self.points.push(p);
        let c = self.cell(p);
        self.cells.entry(c).or_default().push(id);
        (id, true)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
