//! Clique-based separators: ply reduction, degree pruning, planar
//! separation of the planarized drawing and lifting back to disks.

mod planar;
mod schedule;

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disk_graph::{build_intersection_graph, GeodesicDisk, IntersectionGraph};
use crate::drawing::{crossings_in, planarize_with, realize_drawing, PlanarizedGraph};
use crate::error::{Error, Result};
use crate::geometry::{Point, PointIndex, PolygonWithHoles, EPS};

pub use planar::{plane_graph_separator, separate_plane_graph, separate_unit, PlanarSeparation};
pub use schedule::{compute_schedule, rounds_for, to_f64, Rational, Schedule};

/// Smallest ply threshold used by the pipeline. Every meeting point already
/// has ply two, so a threshold of two would consume every edge.
pub const PLY_FLOOR: usize = 3;

/// Balance factor of the separator.
pub const DELTA: f64 = 2.0 / 3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Clique {
    /// Disks sharing a common point.
    PointClique { members: Vec<usize>, witness: Point },
    Singleton { member: usize },
}

impl Clique {
    pub fn members(&self) -> Vec<usize> {
        match self {
            Clique::PointClique { members, .. } => members.clone(),
            Clique::Singleton { member } => vec![*member],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Clique::PointClique { members, .. } => members.len(),
            Clique::Singleton { .. } => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Counters describing one run of the pipeline.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SeparatorStats {
    pub n: usize,
    pub ply_threshold: usize,
    pub point_cliques: usize,
    pub pruned: usize,
    pub residual_disks: usize,
    pub residual_edges: usize,
    pub drawing_crossings: usize,
    pub planarized_vertices: usize,
    pub crossing_vertices: usize,
    pub planar_separator: usize,
    pub lifted: usize,
    pub repair_rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliqueSeparator {
    pub cliques: Vec<Clique>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub stats: SeparatorStats,
}

impl CliqueSeparator {
    pub fn separator_ids(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.cliques.iter().flat_map(|c| c.members()).collect();
        out.sort_unstable();
        out
    }

    pub fn max_clique_size(&self) -> usize {
        self.cliques.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// `max(|A|, |B|) / n`, or zero for an empty instance.
    pub fn balance(&self) -> f64 {
        let n = self.stats.n.max(1);
        self.a.len().max(self.b.len()) as f64 / n as f64
    }
}

/// Largest side allowed for `n` disks: `ceil(2n / 3)`.
pub fn balance_bound(n: usize) -> usize {
    (2 * n).div_ceil(3)
}

/// Candidate point with the disk sets that make it a candidate of a
/// subgraph: it counts while all disks of at least one support are present.
struct Candidate {
    point: Point,
    supports: Vec<Vec<usize>>,
    containing: Vec<usize>,
}

/// Greedy ply reduction: while some candidate point of the remaining graph
/// lies in at least `threshold` remaining disks, those disks become a point
/// clique witnessed by that point.
pub fn reduce_ply(g: &IntersectionGraph, threshold: usize) -> Result<(Vec<Clique>, IntersectionGraph)> {
    if threshold < 2 {
        return Err(Error::InvalidParameter(format!("ply threshold must be at least 2, got {threshold}")));
    }
    let drawing = realize_drawing(g);
    let crossings = if drawing.is_empty() {
        Vec::new()
    } else {
        let arr = drawing.arrangement()?;
        crossings_in(&arr, &drawing)
    };

    let mut index = PointIndex::new(1e-9);
    let mut cands: Vec<Candidate> = Vec::new();
    let mut add = |p: Point, support: Vec<usize>| {
        let (k, fresh) = index.insert(p);
        if fresh {
            cands.push(Candidate {
                point: p,
                supports: Vec::new(),
                containing: Vec::new(),
            });
        }
        cands[k].supports.push(support);
    };
    for (i, d) in g.disks().iter().enumerate() {
        add(d.center, vec![i]);
    }
    for e in g.edges() {
        add(e.meeting_point, vec![e.a, e.b]);
    }
    for x in &crossings {
        let (p, q) = (&drawing.paths[x.paths.0], &drawing.paths[x.paths.1]);
        add(x.location, vec![p.disks.0, p.disks.1, q.disks.0, q.disks.1]);
    }
    let containing = cands
        .par_iter()
        .map(|c| g.disks_containing(c.point))
        .collect::<Result<Vec<_>>>()?;
    for (c, list) in cands.iter_mut().zip(containing) {
        c.containing = list;
    }

    let mut alive = vec![true; g.len()];
    let mut cliques = Vec::new();
    loop {
        let mut best: Option<(usize, usize)> = None;
        for (k, c) in cands.iter().enumerate() {
            if !c.supports.iter().any(|s| s.iter().all(|&i| alive[i])) {
                continue;
            }
            let ply = c.containing.iter().filter(|&&i| alive[i]).count();
            if best.is_none_or(|(_, b)| ply > b) {
                best = Some((k, ply));
            }
        }
        match best {
            Some((k, ply)) if ply >= threshold => {
                let members: Vec<usize> = cands[k].containing.iter().copied().filter(|&i| alive[i]).collect();
                for &i in &members {
                    alive[i] = false;
                }
                let mut ids: Vec<usize> = members.iter().map(|&i| g.disk(i).id).collect();
                ids.sort_unstable();
                cliques.push(Clique::PointClique {
                    members: ids,
                    witness: cands[k].point,
                });
            }
            _ => break,
        }
    }
    let rest: Vec<usize> = (0..g.len()).filter(|&i| alive[i]).collect();
    Ok((cliques, g.induced(&rest)))
}

/// Removes, in one batch, every disk whose degree is at least `threshold`.
pub fn prune_high_degree(g: &IntersectionGraph, threshold: usize) -> Result<(Vec<usize>, IntersectionGraph)> {
    if threshold < 1 {
        return Err(Error::InvalidParameter("degree threshold must be at least 1".into()));
    }
    let (high, rest): (Vec<usize>, Vec<usize>) = (0..g.len()).partition(|&i| g.degree(i) >= threshold);
    let mut ids: Vec<usize> = high.iter().map(|&i| g.disk(i).id).collect();
    ids.sort_unstable();
    Ok((ids, g.induced(&rest)))
}

/// Balanced separator of the planarized graph, weighted by disk centers.
pub fn planar_vertex_separator(pg: &PlanarizedGraph, delta: f64) -> Result<Vec<usize>> {
    Ok(separate_plane_graph(&pg.graph, &pg.center_weights(), delta)?.separator)
}

/// Disk ids owning the given planarized vertices.
pub fn lift_to_disks(pg: &PlanarizedGraph, separator: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = separator.iter().flat_map(|&v| pg.owners[v].iter().copied()).collect();
    set.into_iter().collect()
}

/// Builds the intersection graph of `disks` in `f` and separates it.
pub fn build_clique_separator(
    f: &PolygonWithHoles,
    disks: &[GeodesicDisk],
    epsilon: f64,
) -> Result<(IntersectionGraph, CliqueSeparator)> {
    let (_, g) = build_intersection_graph(f, disks)?;
    let sep = separate_graph(&g, epsilon)?;
    Ok((g, sep))
}

/// One pass of the pipeline without balance repair.
fn separate_once(g: &IntersectionGraph, schedule: &Schedule) -> Result<CliqueSeparator> {
    let n = g.len();
    let mut stats = SeparatorStats {
        n,
        ..Default::default()
    };
    stats.ply_threshold = schedule.ply_threshold(n, PLY_FLOOR);
    let (mut cliques, mut residual) = reduce_ply(g, stats.ply_threshold)?;
    stats.point_cliques = cliques.len();
    for t in schedule.degree_thresholds(n) {
        let (high, rest) = prune_high_degree(&residual, t)?;
        stats.pruned += high.len();
        cliques.extend(high.into_iter().map(|member| Clique::Singleton { member }));
        residual = rest;
    }
    stats.residual_disks = residual.len();
    stats.residual_edges = residual.edge_count();

    let drawing = realize_drawing(&residual);
    let arr = drawing.arrangement()?;
    stats.drawing_crossings = crossings_in(&arr, &drawing).len();
    let pg = planarize_with(&arr, &drawing)?;
    stats.planarized_vertices = pg.vertex_count();
    stats.crossing_vertices = pg.crossing_vertex_count();
    let split = separate_plane_graph(&pg.graph, &pg.center_weights(), DELTA)?;
    stats.planar_separator = split.separator.len();
    let lifted = lift_to_disks(&pg, &split.separator);
    stats.lifted = lifted.len();
    let lifted_set: HashSet<usize> = lifted.iter().copied().collect();
    cliques.extend(lifted.iter().map(|&member| Clique::Singleton { member }));

    let mut side_a = vec![false; pg.vertex_count()];
    for &v in &split.a {
        side_a[v] = true;
    }
    let mut side_b = vec![false; pg.vertex_count()];
    for &v in &split.b {
        side_b[v] = true;
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for local in 0..residual.len() {
        let id = residual.disk(local).id;
        if lifted_set.contains(&id) {
            continue;
        }
        let v = pg.center_vertex(local);
        if side_a[v] {
            a.push(id);
        } else if side_b[v] {
            b.push(id);
        } else {
            return Err(Error::InvalidParameter(format!("disk {id} lost by the planar separator")));
        }
    }
    a.sort_unstable();
    b.sort_unstable();
    Ok(CliqueSeparator { cliques, a, b, stats })
}

/// Clique-based separator of an intersection graph.
pub fn separate_graph(g: &IntersectionGraph, epsilon: f64) -> Result<CliqueSeparator> {
    let schedule = compute_schedule(epsilon)?;
    if g.is_empty() {
        return Ok(CliqueSeparator {
            cliques: Vec::new(),
            a: Vec::new(),
            b: Vec::new(),
            stats: SeparatorStats::default(),
        });
    }
    let mut sep = separate_once(g, &schedule)?;
    let n = g.len();
    let bound = balance_bound(n);
    while sep.a.len().max(sep.b.len()) > bound {
        sep.stats.repair_rounds += 1;
        if sep.stats.repair_rounds > 64 {
            return Err(Error::InvalidParameter("balance repair did not converge".into()));
        }
        let (large, other) = if sep.a.len() >= sep.b.len() {
            (std::mem::take(&mut sep.a), std::mem::take(&mut sep.b))
        } else {
            (std::mem::take(&mut sep.b), std::mem::take(&mut sep.a))
        };
        let sub = g.induced_by_ids(&large)?;
        let inner = separate_once(&sub, &schedule)?;
        sep.cliques.extend(inner.cliques);
        let mut pieces = [other, inner.a, inner.b];
        pieces.sort_by_key(|p| std::cmp::Reverse(p.len()));
        let [first, second, third] = pieces;
        let mut rest = second;
        rest.extend(third);
        rest.sort_unstable();
        sep.a = first;
        sep.b = rest;
    }
    Ok(sep)
}

/// Every invariant of a clique separator that fails, as readable messages.
pub fn verify_separator(g: &IntersectionGraph, sep: &CliqueSeparator) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let n = g.len();
    let mut role = vec![0u8; n];
    let mut place = |id: usize, r: u8, out: &mut Vec<String>| match g.local(id) {
        Err(_) => out.push(format!("unknown disk id {id}")),
        Ok(i) => {
            if role[i] != 0 {
                out.push(format!("disk {id} appears more than once"));
            }
            role[i] = r;
        }
    };
    for c in &sep.cliques {
        for id in c.members() {
            place(id, 3, &mut out);
        }
    }
    for &id in &sep.a {
        place(id, 1, &mut out);
    }
    for &id in &sep.b {
        place(id, 2, &mut out);
    }
    for (i, r) in role.iter().enumerate() {
        if *r == 0 {
            out.push(format!("disk {} is not covered", g.disk(i).id));
        }
    }
    for e in g.edges() {
        if role[e.a] * role[e.b] == 2 {
            out.push(format!(
                "edge ({}, {}) joins A and B",
                g.disk(e.a).id,
                g.disk(e.b).id
            ));
        }
    }
    for c in &sep.cliques {
        let members = c.members();
        let locals: Vec<usize> = members.iter().filter_map(|&id| g.local(id).ok()).collect();
        for (x, &i) in locals.iter().enumerate() {
            for &j in &locals[x + 1..] {
                if !g.intersects(i, j)? {
                    out.push(format!(
                        "clique members {} and {} do not intersect",
                        g.disk(i).id,
                        g.disk(j).id
                    ));
                }
            }
        }
        if let Clique::PointClique { witness, .. } = c {
            if !g.metric().contains(*witness) {
                out.push(format!("witness {witness} lies outside the free space"));
                continue;
            }
            for &i in &locals {
                let d = g.distance_to_center(*witness, i)?;
                if d > g.disk(i).radius + EPS {
                    out.push(format!("witness {witness} lies outside disk {}", g.disk(i).id));
                }
            }
        }
    }
    let bound = balance_bound(n);
    if sep.a.len().max(sep.b.len()) > bound {
        out.push(format!(
            "unbalanced: max(|A|, |B|) = {} exceeds {bound}",
            sep.a.len().max(sep.b.len())
        ));
    }
    Ok(out)
}
