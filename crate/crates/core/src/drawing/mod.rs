//! Drawings of the intersection graph by realized shortest paths, their
//! crossings, and planarization into a plane graph.

mod arrangement;
mod planarize;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::disk_graph::IntersectionGraph;
use crate::error::Result;
use crate::geometry::Point;
use crate::metric::GeodesicPath;

pub(crate) use arrangement::Arrangement;
pub(crate) use planarize::planarize_with;
pub use planarize::{planarize, verify_planarization, PlanarizedGraph, VertexKind};

/// Angular tolerance used when comparing strand directions.
const ANGLE_EPS: f64 = 1e-12;

/// One realized edge path `pi_ij`, oriented from disk `i` to disk `j`.
#[derive(Clone, Debug)]
pub struct DrawnPath {
    /// Local indices of the two disks.
    pub disks: (usize, usize),
    /// Disk ids of the two disks.
    pub ids: (usize, usize),
    pub path: GeodesicPath,
    /// Arc-length parameter of the split point `m_ij`.
    pub split_param: f64,
    pub split_point: Point,
}

impl DrawnPath {
    /// Local index of the disk owning the half-edge at parameter `t`.
    pub fn half_owner(&self, t: f64) -> usize {
        if t <= self.split_param {
            self.disks.0
        } else {
            self.disks.1
        }
    }

    /// Disk id of the half-edge owner at parameter `t`.
    pub fn half_owner_id(&self, t: f64) -> usize {
        if t <= self.split_param {
            self.ids.0
        } else {
            self.ids.1
        }
    }
}

/// The set of realized paths of a graph, one per edge.
#[derive(Clone, Debug)]
pub struct PathDrawing {
    pub paths: Vec<DrawnPath>,
    /// Centers of all disks of the graph (isolated ones included), by local index.
    pub centers: Vec<Point>,
    /// Ids of all disks of the graph, by local index.
    pub ids: Vec<usize>,
}

impl PathDrawing {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub(crate) fn arrangement(&self) -> Result<Arrangement> {
        let polylines: Vec<Vec<Point>> = self.paths.iter().map(|p| p.path.vertices.clone()).collect();
        let labels: Vec<(usize, usize)> = self.paths.iter().map(|p| p.ids).collect();
        Arrangement::build(&polylines, &self.centers, &labels)
    }
}

/// Draws every edge of `g` by its realized shortest path.
pub fn realize_drawing(g: &IntersectionGraph) -> PathDrawing {
    let paths = g
        .edges()
        .iter()
        .map(|e| DrawnPath {
            disks: (e.a, e.b),
            ids: (g.disk(e.a).id, g.disk(e.b).id),
            path: e.path.clone(),
            split_param: e.meeting_param,
            split_point: e.meeting_point,
        })
        .collect();
    PathDrawing {
        paths,
        centers: g.disks().iter().map(|d| d.center).collect(),
        ids: g.ids(),
    }
}

/// A transversal crossing of two realized paths.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub location: Point,
    /// Indices of the two paths in the drawing, first < second.
    pub paths: (usize, usize),
    /// Arc-length parameters of the crossing along each path.
    pub params: (f64, f64),
    /// Crossings on the first path between this one and its split point,
    /// both ends included.
    pub lambda1: usize,
    /// Same count on the second path.
    pub lambda2: usize,
}

/// Counter-clockwise angle from direction `from` to direction `to`, in `[0, 2pi)`.
pub(crate) fn ccw_angle(from: Point, to: Point) -> f64 {
    let a = to.y.atan2(to.x) - from.y.atan2(from.x);
    let two_pi = std::f64::consts::TAU;
    let a = a.rem_euclid(two_pi);
    if a >= two_pi - ANGLE_EPS {
        0.0
    } else {
        a
    }
}

/// Whether the strands `a_in -> a_out` and `b_in -> b_out` through a common
/// point interleave, given as directions away from that point.
fn interleaved(a_in: Point, a_out: Point, b_in: Point, b_out: Point) -> bool {
    let span = ccw_angle(a_in, a_out);
    let inside = |d: Point| {
        let t = ccw_angle(a_in, d);
        t > ANGLE_EPS && t < span - ANGLE_EPS
    };
    inside(b_in) != inside(b_out)
}

/// Transversal crossings between pairs of paths. Shared subpaths, shared
/// endpoints and endpoints lying on another path are not crossings.
pub fn find_crossings(drawing: &PathDrawing) -> Result<Vec<Crossing>> {
    let arr = drawing.arrangement()?;
    Ok(crossings_in(&arr, drawing))
}

pub(crate) fn crossings_in(arr: &Arrangement, drawing: &PathDrawing) -> Vec<Crossing> {
    let mut pairs: Vec<_> = arr
        .shared
        .iter()
        .filter(|(_, list)| list.len() == 1)
        .collect();
    pairs.sort_unstable_by_key(|(k, _)| **k);
    let mut out: Vec<Crossing> = pairs
        .par_iter()
        .filter_map(|(&(p, q), list)| {
            let (kp, kq) = list[0];
            let (wp, wq) = (&arr.walks[p], &arr.walks[q]);
            if kp == 0 || kp + 1 == wp.len() || kq == 0 || kq + 1 == wq.len() {
                return None;
            }
            let x = arr.nodes[wp[kp]];
            let dir = |n: usize| arr.nodes[n] - x;
            if !interleaved(dir(wp[kp - 1]), dir(wp[kp + 1]), dir(wq[kq - 1]), dir(wq[kq + 1])) {
                return None;
            }
            Some(Crossing {
                location: x,
                paths: (p, q),
                params: (arr.params[p][kp], arr.params[q][kq]),
                lambda1: 0,
                lambda2: 0,
            })
        })
        .collect();

    let mut on_path: Vec<Vec<f64>> = vec![Vec::new(); drawing.paths.len()];
    for c in &out {
        on_path[c.paths.0].push(c.params.0);
        on_path[c.paths.1].push(c.params.1);
    }
    for list in &mut on_path {
        list.sort_by(f64::total_cmp);
    }
    let count = |p: usize, t: f64| {
        let m = drawing.paths[p].split_param;
        let (lo, hi) = if t <= m { (t, m) } else { (m, t) };
        let list = &on_path[p];
        let tol = 1e-9 * (1.0 + hi.abs());
        let start = list.partition_point(|&s| s < lo - tol);
        let end = list.partition_point(|&s| s <= hi + tol);
        end - start
    };
    for c in &mut out {
        c.lambda1 = count(c.paths.0, c.params.0);
        c.lambda2 = count(c.paths.1, c.params.1);
    }
    out
}

/// Measured quantities of the crossing structure of a drawing.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AuditReport {
    pub crossings: usize,
    /// Sum of the ply over all crossings.
    pub total_ply: usize,
    pub max_ply: usize,
    /// Number of crossings per value of `min(lambda1, lambda2)`.
    pub label_histogram: BTreeMap<usize, usize>,
}

/// Audit of the crossings of the drawing of `g`.
pub fn crossing_audit(drawing: &PathDrawing, g: &IntersectionGraph) -> Result<AuditReport> {
    let crossings = find_crossings(drawing)?;
    audit_crossings(&crossings, g)
}

pub fn audit_crossings(crossings: &[Crossing], g: &IntersectionGraph) -> Result<AuditReport> {
    let plies = crossings
        .par_iter()
        .map(|c| g.ply_at_point(c.location))
        .collect::<Result<Vec<_>>>()?;
    let mut label_histogram = BTreeMap::new();
    for c in crossings {
        *label_histogram.entry(c.lambda1.min(c.lambda2)).or_insert(0) += 1;
    }
    Ok(AuditReport {
        crossings: crossings.len(),
        total_ply: plies.iter().sum(),
        max_ply: plies.iter().copied().max().unwrap_or(0),
        label_histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk_graph::{build_intersection_graph, GeodesicDisk};
    use crate::geometry::PolygonWithHoles;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn graph(f: PolygonWithHoles, disks: &[(f64, f64, f64)]) -> IntersectionGraph {
        let disks: Vec<_> = disks
            .iter()
            .enumerate()
            .map(|(k, &(x, y, r))| GeodesicDisk::new(k + 1, p(x, y), r))
            .collect();
        build_intersection_graph(&f, &disks).unwrap().1
    }

    fn chain() -> IntersectionGraph {
        let f = PolygonWithHoles::rectangle(0.0, 0.0, 100.0, 10.0).unwrap();
        let d: Vec<_> = (1..=5).map(|k| (10.0 * k as f64, 5.0, 6.0)).collect();
        graph(f, &d)
    }

    fn cluster() -> IntersectionGraph {
        let f = PolygonWithHoles::rectangle(0.0, 0.0, 10.0, 10.0).unwrap();
        graph(f, &[(4.0, 4.0, 3.0), (4.0, 6.0, 3.0), (6.0, 4.0, 3.0), (6.0, 6.0, 3.0)])
    }

    #[test]
    fn chain_drawing_is_collinear_without_crossings() {
        let g = chain();
        let d = realize_drawing(&g);
        assert_eq!(d.len(), 4);
        assert!(d.paths.iter().all(|p| p.path.vertices.iter().all(|v| v.y == 5.0)));
        assert!(find_crossings(&d).unwrap().is_empty());
        let audit = crossing_audit(&d, &g).unwrap();
        assert_eq!((audit.crossings, audit.total_ply), (0, 0));
    }

    #[test]
    fn empty_and_single_edge_drawings() {
        let f = PolygonWithHoles::rectangle(0.0, 0.0, 10.0, 10.0).unwrap();
        assert!(realize_drawing(&graph(f.clone(), &[])).is_empty());
        assert_eq!(realize_drawing(&graph(f, &[(1.0, 1.0, 1.0), (2.0, 1.0, 1.0)])).len(), 1);
    }

    pub(crate) fn straight(segments: &[(Point, Point)]) -> PathDrawing {
        let mut centers = Vec::new();
        let paths = segments
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| {
                centers.push(a);
                centers.push(b);
                DrawnPath {
                    disks: (2 * k, 2 * k + 1),
                    ids: (2 * k, 2 * k + 1),
                    path: GeodesicPath::from_vertices(vec![a, b]),
                    split_param: 0.5 * a.dist(b),
                    split_point: a.lerp(b, 0.5),
                }
            })
            .collect();
        PathDrawing {
            paths,
            ids: (0..centers.len()).collect(),
            centers,
        }
    }

    #[test]
    fn two_straight_paths_cross_once() {
        let d = straight(&[(p(0.0, 0.0), p(2.0, 2.0)), (p(0.0, 2.0), p(2.0, 0.0))]);
        let xs = find_crossings(&d).unwrap();
        assert_eq!(xs.len(), 1);
        assert!(xs[0].location.approx_eq(p(1.0, 1.0)));
    }

    #[test]
    fn touching_paths_do_not_cross() {
        let d = straight(&[(p(0.0, 0.0), p(2.0, 2.0)), (p(2.0, 0.0), p(1.0, 1.0))]);
        assert!(find_crossings(&d).unwrap().is_empty());
        let bend = straight(&[(p(0.0, 0.0), p(2.0, 2.0))]);
        let mut d = bend.clone();
        d.paths.push(DrawnPath {
            path: GeodesicPath::from_vertices(vec![p(0.0, 2.0), p(1.0, 1.0), p(0.0, 1.5)]),
            ..bend.paths[0].clone()
        });
        assert!(find_crossings(&d).unwrap().is_empty());
    }

    #[test]
    fn cluster_diagonals_cross_at_center() {
        let g = cluster();
        let d = realize_drawing(&g);
        let xs = find_crossings(&d).unwrap();
        assert_eq!(xs.len(), 1);
        assert!(xs[0].location.approx_eq(p(5.0, 5.0)));
        assert_eq!((xs[0].lambda1, xs[0].lambda2), (1, 1));
        let audit = crossing_audit(&d, &g).unwrap();
        assert_eq!((audit.crossings, audit.total_ply, audit.max_ply), (1, 4, 4));
        assert_eq!(audit.label_histogram.get(&1), Some(&1));
    }

    #[test]
    fn disjoint_edges_have_no_crossings() {
        let f = PolygonWithHoles::rectangle(0.0, 0.0, 10.0, 10.0).unwrap();
        let g = graph(f, &[(1.0, 1.0, 1.0), (3.0, 1.0, 1.0), (1.0, 8.0, 1.0), (3.0, 8.0, 1.0)]);
        let d = realize_drawing(&g);
        assert_eq!(crossing_audit(&d, &g).unwrap().crossings, 0);
    }

    #[test]
    fn crossings_lie_in_their_half_edge_disks() {
        let g = cluster();
        let d = realize_drawing(&g);
        for x in find_crossings(&d).unwrap() {
            for (path, t) in [(x.paths.0, x.params.0), (x.paths.1, x.params.1)] {
                let owner = d.paths[path].half_owner(t);
                let dist = g.distance_to_center(x.location, owner).unwrap();
                assert!(dist <= g.disk(owner).radius + 1e-9);
            }
        }
    }
}
