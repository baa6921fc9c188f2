//! Shortest-path metric of a polygon with holes.
//!
//! Distances are realized on a visibility graph over the polygon vertices
//! and a set of registered sites (the disk centers). Every registered site
//! owns a shortest-path tree over the polygon vertices, so site-to-site
//! queries only need one extra hop.
//!
//! Ties between equal-length paths are broken by a symbolic perturbation:
//! bending at polygon vertex `v` costs an extra `2^v * eps`. Comparing two
//! perturbations amounts to comparing the sets of bend vertices as binary
//! numbers, which is additive along paths. Shortest paths are therefore
//! unique and any two of them meet in a single connected piece.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{point_in_free_space, points_see_each_other, Point, PolygonWithHoles};

pub type SiteId = usize;

/// Relative tolerance under which two path lengths count as tied.
const LENGTH_TIE: f64 = 1e-10;

/// A polyline between two points of the free space.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicPath {
    pub vertices: Vec<Point>,
    pub length: f64,
}

impl GeodesicPath {
    pub fn from_vertices(vertices: Vec<Point>) -> Self {
        let length = vertices.windows(2).map(|w| w[0].dist(w[1])).sum();
        GeodesicPath { vertices, length }
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        *self.vertices.last().unwrap()
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        GeodesicPath {
            vertices,
            length: self.length,
        }
    }

    /// Point at arc-length `t` from the start (clamped to the path).
    pub fn point_at(&self, t: f64) -> Point {
        let mut rest = t.max(0.0);
        for w in self.vertices.windows(2) {
            let len = w[0].dist(w[1]);
            if rest <= len {
                return if len > 0.0 { w[0].lerp(w[1], rest / len) } else { w[0] };
            }
            rest -= len;
        }
        self.end()
    }

    /// Arc-length parameter of the point of the path closest to `p`.
    pub fn param_of(&self, p: Point) -> f64 {
        let mut best = (f64::INFINITY, 0.0);
        let mut acc = 0.0;
        for w in self.vertices.windows(2) {
            let d = w[1] - w[0];
            let len2 = d.dot(d);
            let len = len2.sqrt();
            let s = if len2 > 0.0 {
                ((p - w[0]).dot(d) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let dist = p.dist(w[0].lerp(w[1], s));
            if dist < best.0 {
                best = (dist, acc + s * len);
            }
            acc += len;
        }
        if self.vertices.len() == 1 {
            return 0.0;
        }
        best.1
    }
}

/// A shortest-path metric on a closed free space with a registered site set.
///
/// Downstream modules only talk to this trait, so other metrics (terrains,
/// weighted regions) can be plugged in without touching them.
pub trait GeodesicMetric: Sync {
    fn contains(&self, q: Point) -> bool;
    fn site_count(&self) -> usize;
    fn site(&self, s: SiteId) -> Point;
    fn distance(&self, s: SiteId, t: SiteId) -> Result<f64>;
    fn shortest_path(&self, s: SiteId, t: SiteId) -> Result<GeodesicPath>;
    /// Distance from an arbitrary point of the free space to a site.
    fn distance_from_point(&self, q: Point, t: SiteId) -> Result<f64>;

    /// For each `(site, radius)` whether `d(q, site) <= radius` (with the
    /// crate tolerance). Implementations may batch work per query point.
    fn balls_containing(&self, q: Point, balls: &[(SiteId, f64)]) -> Result<Vec<bool>> {
        balls
            .iter()
            .map(|&(s, r)| Ok(self.distance_from_point(q, s)? <= r + crate::geometry::EPS))
            .collect()
    }
}

/// Set of bend vertices, compared as a binary number (highest index first).
#[derive(Clone, Debug, PartialEq, Eq)]
struct BendSet(Vec<u64>);

impl BendSet {
    fn empty(bits: usize) -> Self {
        BendSet(vec![0; bits.div_ceil(64).max(1)])
    }

    fn with(&self, v: usize) -> Self {
        let mut out = self.clone();
        out.0[v / 64] |= 1 << (v % 64);
        out
    }
}

impl Ord for BendSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for BendSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
struct PathKey {
    length: f64,
    bends: BendSet,
    hops: u32,
}

impl PathKey {
    fn cmp(&self, other: &PathKey) -> Ordering {
        let scale = self.length.max(other.length).max(1.0);
        if (self.length - other.length).abs() > LENGTH_TIE * scale {
            return self.length.total_cmp(&other.length);
        }
        self.bends
            .cmp(&other.bends)
            .then(self.hops.cmp(&other.hops))
    }
}

/// Per-site shortest-path tree over the polygon vertices.
#[derive(Clone, Debug)]
struct SiteTree {
    /// `None` for unreachable polygon vertices.
    key: Vec<Option<PathKey>>,
    /// Predecessor polygon vertex, `None` when reached directly from the site.
    pred: Vec<Option<usize>>,
}

/// Visibility graph over polygon vertices followed by registered sites.
#[derive(Clone, Debug)]
pub struct VisibilityGraph {
    free_space: PolygonWithHoles,
    nodes: Vec<Point>,
    poly_count: usize,
    visible: Vec<Vec<u64>>,
    adjacency: Vec<Vec<(usize, f64)>>,
    trees: Vec<SiteTree>,
    /// All-pairs lengths between polygon vertices.
    poly_dist: Vec<Vec<f64>>,
}

fn bit(row: &[u64], j: usize) -> bool {
    row[j / 64] >> (j % 64) & 1 == 1
}

impl VisibilityGraph {
    /// Builds the graph over the polygon vertices and `sites`. Every site
    /// must lie in the free space.
    pub fn build(free_space: &PolygonWithHoles, sites: &[Point]) -> Result<Self> {
        for &s in sites {
            if !point_in_free_space(free_space, s) {
                return Err(Error::OutsideFreeSpace(s));
            }
        }
        let mut nodes: Vec<Point> = free_space.vertices().collect();
        let poly_count = nodes.len();
        nodes.extend_from_slice(sites);
        let n = nodes.len();
        let words = n.div_ceil(64);

        // Row i holds visibility towards every j > i; mirrored afterwards.
        let upper: Vec<Vec<u64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0u64; words];
                for j in (i + 1)..n {
                    if points_see_each_other(free_space, nodes[i], nodes[j]) {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
                row
            })
            .collect();
        let mut visible = upper;
        for i in 0..n {
            for j in (i + 1)..n {
                if bit(&visible[i], j) {
                    visible[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        let adjacency: Vec<Vec<(usize, f64)>> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && bit(&visible[i], j))
                    .map(|j| (j, nodes[i].dist(nodes[j])))
                    .collect()
            })
            .collect();

        let mut graph = VisibilityGraph {
            free_space: free_space.clone(),
            nodes,
            poly_count,
            visible,
            adjacency,
            trees: Vec::new(),
            poly_dist: Vec::new(),
        };
        graph.poly_dist = (0..poly_count)
            .into_par_iter()
            .map(|v| graph.poly_lengths_from(v))
            .collect();
        graph.trees = (0..sites.len())
            .into_par_iter()
            .map(|s| graph.site_tree(poly_count + s))
            .collect();
        Ok(graph)
    }

    pub fn free_space(&self) -> &PolygonWithHoles {
        &self.free_space
    }

    /// Number of polygon vertices; site `s` is node `polygon_vertex_count() + s`.
    pub fn polygon_vertex_count(&self) -> usize {
        self.poly_count
    }

    pub fn node(&self, i: usize) -> Point {
        self.nodes[i]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Whether the arc between nodes `i` and `j` exists.
    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        i != j && bit(&self.visible[i], j)
    }

    /// Visible neighbors of node `i` with their Euclidean lengths.
    pub fn arcs(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    pub fn arc_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Site index of a registered point, if any.
    pub fn site_index(&self, p: Point) -> Option<SiteId> {
        self.nodes[self.poly_count..]
            .iter()
            .position(|&q| q.approx_eq(p))
    }

    fn check_site(&self, s: SiteId) -> Result<()> {
        if s < self.nodes.len() - self.poly_count {
            Ok(())
        } else {
            Err(Error::UnknownSite(s))
        }
    }

    /// Dense Dijkstra from polygon vertex `v` over polygon vertices only.
    fn poly_lengths_from(&self, v: usize) -> Vec<f64> {
        let p = self.poly_count;
        let mut dist = vec![f64::INFINITY; p];
        let mut done = vec![false; p];
        dist[v] = 0.0;
        for _ in 0..p {
            let Some(u) = (0..p)
                .filter(|&u| !done[u] && dist[u].is_finite())
                .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
            else {
                break;
            };
            done[u] = true;
            for &(w, len) in &self.adjacency[u] {
                if w < p && dist[u] + len < dist[w] {
                    dist[w] = dist[u] + len;
                }
            }
        }
        dist
    }

    /// Tie-broken Dijkstra from node `src` (a site) over polygon vertices.
    fn site_tree(&self, src: usize) -> SiteTree {
        let p = self.poly_count;
        let mut key: Vec<Option<PathKey>> = vec![None; p];
        let mut pred = vec![None; p];
        let mut done = vec![false; p];
        let empty = BendSet::empty(p);
        for &(v, len) in &self.adjacency[src] {
            if v < p {
                key[v] = Some(PathKey {
                    length: len,
                    bends: empty.with(v),
                    hops: 1,
                });
            }
        }
        loop {
            let mut best: Option<usize> = None;
            for u in 0..p {
                if done[u] || key[u].is_none() {
                    continue;
                }
                best = match best {
                    Some(b) if key[b].as_ref().unwrap().cmp(key[u].as_ref().unwrap()).is_le() => {
                        Some(b)
                    }
                    _ => Some(u),
                };
            }
            let Some(u) = best else { break };
            done[u] = true;
            let ku = key[u].clone().unwrap();
            for &(w, len) in &self.adjacency[u] {
                if w >= p || done[w] {
                    continue;
                }
                let cand = PathKey {
                    length: ku.length + len,
                    bends: ku.bends.with(w),
                    hops: ku.hops + 1,
                };
                let better = match &key[w] {
                    None => true,
                    Some(k) => cand.cmp(k).is_lt(),
                };
                if better {
                    key[w] = Some(cand);
                    pred[w] = Some(u);
                }
            }
        }
        SiteTree { key, pred }
    }

    /// Best path from site `s` to site `t` as (key, last polygon vertex).
    fn best_route(&self, s: SiteId, t: SiteId) -> Option<(PathKey, Option<usize>)> {
        let p = self.poly_count;
        let (ns, nt) = (p + s, p + t);
        let tree = &self.trees[s];
        let mut best: Option<(PathKey, Option<usize>)> = None;
        if self.has_arc(ns, nt) || self.nodes[ns].approx_eq(self.nodes[nt]) {
            best = Some((
                PathKey {
                    length: self.nodes[ns].dist(self.nodes[nt]),
                    bends: BendSet::empty(p),
                    hops: 1,
                },
                None,
            ));
        }
        for &(v, len) in &self.adjacency[nt] {
            if v >= p {
                continue;
            }
            let Some(kv) = &tree.key[v] else { continue };
            let cand = PathKey {
                length: kv.length + len,
                bends: kv.bends.clone(),
                hops: kv.hops + 1,
            };
            let better = match &best {
                None => true,
                Some((k, _)) => cand.cmp(k).is_lt(),
            };
            if better {
                best = Some((cand, Some(v)));
            }
        }
        best
    }

    fn canonical_path(&self, s: SiteId, t: SiteId) -> Result<GeodesicPath> {
        let p = self.poly_count;
        if s == t {
            return Ok(GeodesicPath {
                vertices: vec![self.nodes[p + s]],
                length: 0.0,
            });
        }
        let (key, last) = self.best_route(s, t).ok_or(Error::Unreachable(s, t))?;
        let mut rev = vec![self.nodes[p + t]];
        let mut cur = last;
        while let Some(v) = cur {
            rev.push(self.nodes[v]);
            cur = self.trees[s].pred[v];
        }
        rev.push(self.nodes[p + s]);
        rev.reverse();
        Ok(GeodesicPath {
            vertices: rev,
            length: key.length,
        })
    }

    /// Visible polygon vertices of an arbitrary point.
    fn visible_corners(&self, q: Point) -> Vec<(usize, f64)> {
        (0..self.poly_count)
            .filter(|&v| points_see_each_other(&self.free_space, q, self.nodes[v]))
            .map(|v| (v, q.dist(self.nodes[v])))
            .collect()
    }

    fn distance_via_tree(&self, q: Point, corners: &[(usize, f64)], t: SiteId) -> f64 {
        let nt = self.poly_count + t;
        let mut best = f64::INFINITY;
        if points_see_each_other(&self.free_space, q, self.nodes[nt]) {
            best = q.dist(self.nodes[nt]);
        }
        for &(v, len) in corners {
            if let Some(k) = &self.trees[t].key[v] {
                best = best.min(len + k.length);
            }
        }
        best
    }

    /// Geodesic distance between two arbitrary points of the free space.
    pub fn distance_between(&self, a: Point, b: Point) -> Result<f64> {
        for q in [a, b] {
            if !point_in_free_space(&self.free_space, q) {
                return Err(Error::OutsideFreeSpace(q));
            }
        }
        if points_see_each_other(&self.free_space, a, b) {
            return Ok(a.dist(b));
        }
        let ca = self.visible_corners(a);
        let cb = self.visible_corners(b);
        let mut best = f64::INFINITY;
        for &(u, lu) in &ca {
            for &(v, lv) in &cb {
                best = best.min(lu + self.poly_dist[u][v] + lv);
            }
        }
        if best.is_finite() {
            Ok(best)
        } else {
            Err(Error::Unreachable(usize::MAX, usize::MAX))
        }
    }
}

impl GeodesicMetric for VisibilityGraph {
    fn contains(&self, q: Point) -> bool {
        point_in_free_space(&self.free_space, q)
    }

    fn site_count(&self) -> usize {
        self.nodes.len() - self.poly_count
    }

    fn site(&self, s: SiteId) -> Point {
        self.nodes[self.poly_count + s]
    }

    fn distance(&self, s: SiteId, t: SiteId) -> Result<f64> {
        Ok(self.shortest_path(s, t)?.length)
    }

    /// Unique tie-broken shortest path. The path is always computed from the
    /// smaller site index so both directions return the same polyline.
    fn shortest_path(&self, s: SiteId, t: SiteId) -> Result<GeodesicPath> {
        self.check_site(s)?;
        self.check_site(t)?;
        if s <= t {
            self.canonical_path(s, t)
        } else {
            Ok(self.canonical_path(t, s)?.reversed())
        }
    }

    fn distance_from_point(&self, q: Point, t: SiteId) -> Result<f64> {
        self.check_site(t)?;
        if !point_in_free_space(&self.free_space, q) {
            return Err(Error::OutsideFreeSpace(q));
        }
        let corners = self.visible_corners(q);
        let d = self.distance_via_tree(q, &corners, t);
        if d.is_finite() {
            Ok(d)
        } else {
            Err(Error::Unreachable(t, t))
        }
    }

    fn balls_containing(&self, q: Point, balls: &[(SiteId, f64)]) -> Result<Vec<bool>> {
        if !point_in_free_space(&self.free_space, q) {
            return Err(Error::OutsideFreeSpace(q));
        }
        let mut corners: Option<Vec<(usize, f64)>> = None;
        let mut out = Vec::with_capacity(balls.len());
        for &(t, r) in balls {
            self.check_site(t)?;
            let bound = r + crate::geometry::EPS;
            // Geodesic distance is never below the Euclidean one.
            if q.dist(self.site(t)) > bound {
                out.push(false);
                continue;
            }
            let corners = corners.get_or_insert_with(|| self.visible_corners(q));
            out.push(self.distance_via_tree(q, corners, t) <= bound);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rect_ring;

    fn holed_square() -> PolygonWithHoles {
        PolygonWithHoles::new(
            rect_ring(0.0, 0.0, 10.0, 10.0),
            vec![rect_ring(4.0, 4.0, 6.0, 6.0)],
        )
        .unwrap()
    }

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn convex_room_is_euclidean() {
        let f = PolygonWithHoles::rectangle(0.0, 0.0, 10.0, 10.0).unwrap();
        let v = VisibilityGraph::build(&f, &[p(1.0, 1.0), p(9.0, 9.0)]).unwrap();
        let (a, b) = (v.polygon_vertex_count(), v.polygon_vertex_count() + 1);
        assert!(v.has_arc(a, b));
        let path = v.shortest_path(0, 1).unwrap();
        assert_eq!(path.vertices, vec![p(1.0, 1.0), p(9.0, 9.0)]);
        assert!((path.length - 8.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn hole_blocks_and_corner_grazes() {
        let f = holed_square();
        let v = VisibilityGraph::build(&f, &[p(2.0, 5.0), p(8.0, 5.0)]).unwrap();
        let pc = v.polygon_vertex_count();
        assert!(!v.has_arc(pc, pc + 1));
        // polygon vertex 4 is the hole corner (4,4) after orientation fix
        let corner = (0..pc).find(|&i| v.node(i).approx_eq(p(4.0, 4.0))).unwrap();
        assert!(v.has_arc(pc, corner));
    }

    #[test]
    fn detour_around_hole() {
        let f = holed_square();
        let v = VisibilityGraph::build(&f, &[p(2.0, 5.0), p(8.0, 5.0)]).unwrap();
        let path = v.shortest_path(0, 1).unwrap();
        let expected = 2.0 + 2.0 * 5f64.sqrt();
        assert!((path.length - expected).abs() < 1e-9);
        assert_eq!(path.vertices.len(), 4);
        let bends = [path.vertices[1], path.vertices[2]];
        let below = [p(4.0, 4.0), p(6.0, 4.0)];
        let above = [p(4.0, 6.0), p(6.0, 6.0)];
        assert!(bends == below || bends == above);
        // reverse query follows the identical polyline
        let back = v.shortest_path(1, 0).unwrap();
        assert_eq!(back.reversed().vertices, path.vertices);
    }

    #[test]
    fn diagonal_around_hole() {
        let f = holed_square();
        let v = VisibilityGraph::build(&f, &[p(1.0, 1.0), p(9.0, 9.0)]).unwrap();
        let d = v.distance(0, 1).unwrap();
        assert!((d - 2.0 * 34f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn zero_length_path() {
        let f = holed_square();
        let v = VisibilityGraph::build(&f, &[p(1.0, 1.0)]).unwrap();
        let path = v.shortest_path(0, 0).unwrap();
        assert_eq!(path.length, 0.0);
        assert_eq!(path.vertices.len(), 1);
    }

    #[test]
    fn site_outside_rejected() {
        let f = holed_square();
        assert!(matches!(
            VisibilityGraph::build(&f, &[p(5.0, 5.0)]),
            Err(Error::OutsideFreeSpace(_))
        ));
    }

    #[test]
    fn unknown_site() {
        let f = holed_square();
        let v = VisibilityGraph::build(&f, &[p(1.0, 1.0)]).unwrap();
        assert!(matches!(v.distance(0, 3), Err(Error::UnknownSite(3))));
    }

    #[test]
    fn point_queries_match_site_queries() {
        let f = holed_square();
        let v = VisibilityGraph::build(&f, &[p(2.0, 5.0), p(8.0, 5.0)]).unwrap();
        let d1 = v.distance_from_point(p(2.0, 5.0), 1).unwrap();
        let d2 = v.distance_between(p(2.0, 5.0), p(8.0, 5.0)).unwrap();
        assert!((d1 - (2.0 + 2.0 * 5f64.sqrt())).abs() < 1e-9);
        assert!((d1 - d2).abs() < 1e-9);
        let inside = v.balls_containing(p(5.0, 3.9), &[(0, 3.3), (1, 3.0)]).unwrap();
        assert_eq!(inside, vec![true, false]);
    }

    #[test]
    fn path_parameters() {
        let path = GeodesicPath::from_vertices(vec![p(0.0, 0.0), p(3.0, 0.0), p(3.0, 4.0)]);
        assert_eq!(path.length, 7.0);
        assert_eq!(path.point_at(5.0), p(3.0, 2.0));
        assert!((path.param_of(p(3.0, 2.0)) - 5.0).abs() < 1e-12);
        assert_eq!(path.point_at(100.0), p(3.0, 4.0));
    }
}
