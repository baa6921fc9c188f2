//! Geodesic disks and their intersection graph.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{point_in_free_space, Point, PointIndex, PolygonWithHoles, EPS};
use crate::metric::{GeodesicMetric, GeodesicPath, SiteId, VisibilityGraph};

/// `{q in F : d(q, center) <= radius}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicDisk {
    pub id: usize,
    pub center: Point,
    pub radius: f64,
}

impl GeodesicDisk {
    pub fn new(id: usize, center: Point, radius: f64) -> Self {
        GeodesicDisk { id, center, radius }
    }
}

/// One edge of the intersection graph with its realized center-to-center
/// path, oriented from disk `a` to disk `b` (local indices, `a < b`).
#[derive(Clone, Debug)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub path: GeodesicPath,
    /// Arc-length parameter of the meeting point along `path`.
    pub meeting_param: f64,
    pub meeting_point: Point,
}

impl GraphEdge {
    /// Local index of the disk whose half of the path contains parameter `t`.
    pub fn half_owner(&self, t: f64) -> usize {
        if t <= self.meeting_param {
            self.a
        } else {
            self.b
        }
    }
}

pub type SharedMetric = Arc<dyn GeodesicMetric + Send + Sync>;

/// Intersection graph of a disk set. Disks are addressed by local index
/// (their position in [`IntersectionGraph::disks`]); ids are kept for
/// reporting and for induced subgraphs.
#[derive(Clone)]
pub struct IntersectionGraph {
    metric: SharedMetric,
    disks: Vec<GeodesicDisk>,
    sites: Vec<SiteId>,
    index: HashMap<usize, usize>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<GraphEdge>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl std::fmt::Debug for IntersectionGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntersectionGraph")
            .field("disks", &self.disks.len())
            .field("edges", &self.edges.len())
            .finish()
    }
}

/// Parameter of the meeting point: midpoint of the feasible interval
/// `[max(0, d - r_j), min(r_i, d)]` along the path from `p_i`.
pub fn meeting_parameter(d: f64, ri: f64, rj: f64) -> f64 {
    0.5 * ((d - rj).max(0.0) + ri.min(d))
}

/// Two geodesic disks intersect iff `d(p_i, p_j) <= r_i + r_j`.
pub fn disks_intersect(v: &VisibilityGraph, di: &GeodesicDisk, dj: &GeodesicDisk) -> Result<bool> {
    let si = v.site_index(di.center).ok_or(Error::OutsideFreeSpace(di.center))?;
    let sj = v.site_index(dj.center).ok_or(Error::OutsideFreeSpace(dj.center))?;
    sites_intersect(v, si, di.radius, sj, dj.radius)
}

fn sites_intersect(m: &dyn GeodesicMetric, si: SiteId, ri: f64, sj: SiteId, rj: f64) -> Result<bool> {
    if m.site(si).dist(m.site(sj)) > ri + rj + EPS {
        return Ok(false);
    }
    Ok(m.distance(si, sj)? <= ri + rj + EPS)
}

fn validate_disks(f: Option<&PolygonWithHoles>, disks: &[GeodesicDisk]) -> Result<()> {
    let mut seen = HashSet::new();
    for d in disks {
        if !seen.insert(d.id) {
            return Err(Error::DuplicateDisk(d.id));
        }
        if !(d.radius.is_finite() && d.radius >= 0.0) {
            return Err(Error::InvalidRadius(d.id));
        }
        if let Some(f) = f {
            if !point_in_free_space(f, d.center) {
                return Err(Error::DiskOutsideFreeSpace {
                    id: d.id,
                    center: d.center,
                });
            }
        }
    }
    Ok(())
}

/// Builds the visibility-graph metric with every disk center registered and
/// the intersection graph on top of it.
pub fn build_intersection_graph(
    f: &PolygonWithHoles,
    disks: &[GeodesicDisk],
) -> Result<(Arc<VisibilityGraph>, IntersectionGraph)> {
    validate_disks(Some(f), disks)?;
    let centers: Vec<Point> = disks.iter().map(|d| d.center).collect();
    let v = Arc::new(VisibilityGraph::build(f, &centers)?);
    let g = IntersectionGraph::build(v.clone(), disks, (0..disks.len()).collect())?;
    Ok((v, g))
}

impl IntersectionGraph {
    /// Builds the graph given the metric site of every disk.
    pub fn build(metric: SharedMetric, disks: &[GeodesicDisk], sites: Vec<SiteId>) -> Result<Self> {
        validate_disks(None, disks)?;
        let n = disks.len();
        let per_disk: Vec<Vec<GraphEdge>> = (0..n)
            .into_par_iter()
            .map(|i| -> Result<Vec<GraphEdge>> {
                let mut out = Vec::new();
                for j in (i + 1)..n {
                    let (di, dj) = (&disks[i], &disks[j]);
                    if !sites_intersect(metric.as_ref(), sites[i], di.radius, sites[j], dj.radius)? {
                        continue;
                    }
                    let path = metric.shortest_path(sites[i], sites[j])?;
                    let t = meeting_parameter(path.length, di.radius, dj.radius);
                    out.push(GraphEdge {
                        a: i,
                        b: j,
                        meeting_point: path.point_at(t),
                        meeting_param: t,
                        path,
                    });
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let edges: Vec<GraphEdge> = per_disk.into_iter().flatten().collect();
        Ok(Self::assemble(metric, disks.to_vec(), sites, edges))
    }

    fn assemble(
        metric: SharedMetric,
        disks: Vec<GeodesicDisk>,
        sites: Vec<SiteId>,
        edges: Vec<GraphEdge>,
    ) -> Self {
        let n = disks.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut edge_index = HashMap::with_capacity(edges.len());
        for (k, e) in edges.iter().enumerate() {
            adjacency[e.a].push(e.b);
            adjacency[e.b].push(e.a);
            edge_index.insert((e.a, e.b), k);
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        let index = disks.iter().enumerate().map(|(k, d)| (d.id, k)).collect();
        IntersectionGraph {
            metric,
            disks,
            sites,
            index,
            adjacency,
            edges,
            edge_index,
        }
    }

    pub fn metric(&self) -> &SharedMetric {
        &self.metric
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn disks(&self) -> &[GeodesicDisk] {
        &self.disks
    }

    pub fn disk(&self, local: usize) -> &GeodesicDisk {
        &self.disks[local]
    }

    pub fn site(&self, local: usize) -> SiteId {
        self.sites[local]
    }

    /// Local index of a disk id.
    pub fn local(&self, id: usize) -> Result<usize> {
        self.index.get(&id).copied().ok_or(Error::UnknownDisk(id))
    }

    pub fn ids(&self) -> Vec<usize> {
        self.disks.iter().map(|d| d.id).collect()
    }

    pub fn neighbors(&self, local: usize) -> &[usize] {
        &self.adjacency[local]
    }

    pub fn degree(&self, local: usize) -> usize {
        self.adjacency[local].len()
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_index.contains_key(&(a.min(b), a.max(b)))
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<&GraphEdge> {
        self.edge_index
            .get(&(a.min(b), a.max(b)))
            .map(|&k| &self.edges[k])
    }

    /// Edge list as unordered id pairs `(min id, max id)`, sorted.
    pub fn edge_ids(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                let (x, y) = (self.disks[e.a].id, self.disks[e.b].id);
                (x.min(y), x.max(y))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Subgraph induced by the given local indices; local order follows the
    /// order of `locals` after sorting.
    pub fn induced(&self, locals: &[usize]) -> IntersectionGraph {
        let mut keep: Vec<usize> = locals.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut remap = vec![usize::MAX; self.disks.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let disks = keep.iter().map(|&k| self.disks[k]).collect();
        let sites = keep.iter().map(|&k| self.sites[k]).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| remap[e.a] != usize::MAX && remap[e.b] != usize::MAX)
            .map(|e| GraphEdge {
                a: remap[e.a],
                b: remap[e.b],
                ..e.clone()
            })
            .collect();
        Self::assemble(self.metric.clone(), disks, sites, edges)
    }

    /// Subgraph induced by disk ids.
    pub fn induced_by_ids(&self, ids: &[usize]) -> Result<IntersectionGraph> {
        let locals = ids.iter().map(|&id| self.local(id)).collect::<Result<Vec<_>>>()?;
        Ok(self.induced(&locals))
    }

    /// Local indices of the disks containing `q`.
    pub fn disks_containing(&self, q: Point) -> Result<Vec<usize>> {
        if !self.metric.contains(q) {
            return Err(Error::OutsideFreeSpace(q));
        }
        let balls: Vec<(SiteId, f64)> = self
            .disks
            .iter()
            .zip(&self.sites)
            .map(|(d, &s)| (s, d.radius))
            .collect();
        let inside = self.metric.balls_containing(q, &balls)?;
        Ok(inside
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(k, _)| k)
            .collect())
    }

    /// Number of disks containing `q`.
    pub fn ply_at_point(&self, q: Point) -> Result<usize> {
        Ok(self.disks_containing(q)?.len())
    }

    /// Geodesic distance from an arbitrary point to the center of a disk.
    pub fn distance_to_center(&self, q: Point, local: usize) -> Result<f64> {
        self.metric.distance_from_point(q, self.sites[local])
    }

    /// Whether disks `a` and `b` intersect under the metric.
    pub fn intersects(&self, a: usize, b: usize) -> Result<bool> {
        sites_intersect(
            self.metric.as_ref(),
            self.sites[a],
            self.disks[a].radius,
            self.sites[b],
            self.disks[b].radius,
        )
    }
}

/// Deduplicated candidate high-ply points: every center, every meeting
/// point and every given crossing point of the realized paths.
pub fn candidate_points(g: &IntersectionGraph, crossings: &[Point]) -> Vec<Point> {
    let mut index = PointIndex::new(1e-9);
    let centers = g.disks.iter().map(|d| d.center);
    let meets = g.edges.iter().map(|e| e.meeting_point);
    for p in centers.chain(meets).chain(crossings.iter().copied()) {
        if g.metric.contains(p) {
            index.insert(p);
        }
    }
    index.points().to_vec()
}
