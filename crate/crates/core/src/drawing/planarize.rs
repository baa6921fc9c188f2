//! Planarization of a path drawing by roundabout gadgets.
//!
//! Every arrangement node becomes a small disk whose boundary carries one
//! slot per strand end (a strand is one path using one arc) plus one stub
//! per disk centered at the node. Strands sharing an arc run side by side
//! in a fixed left-to-right order; inside the gadget each path is a chord
//! from its entry slot to its exit slot, and every pair of interleaving
//! chords becomes a crossing vertex owned by exactly two paths.
//!
//! Chords are realized exactly: slots sit on the parabola `y = x^2` at
//! integer abscissae, so the order of crossings along a chord is decided
//! in integer arithmetic.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ccw_angle, Arrangement, PathDrawing};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::plane::PlaneGraph;

const SLOT_SPACING: i64 = 1 << 20;
const JITTER: i64 = 1 << 19;
const MAX_ATTEMPTS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VertexKind {
    /// The center of a disk (local index).
    Center { disk: usize },
    /// A path passing through an arrangement node.
    Lane { path: usize, node: usize },
    /// Two paths crossing inside the gadget of an arrangement node.
    Crossing { paths: (usize, usize), node: usize },
}

/// Plane graph obtained from a drawing. Vertex `k < disk_ids.len()` is the
/// center vertex of local disk `k`.
#[derive(Clone, Debug)]
pub struct PlanarizedGraph {
    pub graph: PlaneGraph,
    pub kinds: Vec<VertexKind>,
    /// Owning disk ids of every vertex.
    pub owners: Vec<Vec<usize>>,
    /// Owning paths of every vertex (empty for centers).
    pub owner_paths: Vec<Vec<usize>>,
    /// Location of the arrangement node a vertex belongs to.
    pub positions: Vec<Point>,
    /// Vertex sequence of every path from its first to its last disk center.
    pub path_vertices: Vec<Vec<usize>>,
    pub disk_ids: Vec<usize>,
}

impl PlanarizedGraph {
    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn center_vertex(&self, local: usize) -> usize {
        local
    }

    pub fn crossing_vertex_count(&self) -> usize {
        self.kinds
            .iter()
            .filter(|k| matches!(k, VertexKind::Crossing { .. }))
            .count()
    }

    /// Unit weight on center vertices, zero elsewhere.
    pub fn center_weights(&self) -> Vec<f64> {
        self.kinds
            .iter()
            .map(|k| if matches!(k, VertexKind::Center { .. }) { 1.0 } else { 0.0 })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Node(usize),
    Stub(usize),
}

struct Ctx<'a> {
    arr: &'a Arrangement,
    ends: Vec<(usize, usize)>,
    stub_angle: Vec<f64>,
}

impl Ctx<'_> {
    fn step(&self, p: usize, i: i64) -> Step {
        let walk = &self.arr.walks[p];
        if i < 0 {
            Step::Stub(self.ends[p].0)
        } else if i as usize >= walk.len() {
            Step::Stub(self.ends[p].1)
        } else {
            Step::Node(walk[i as usize])
        }
    }

    fn dir(&self, from: usize, s: Step) -> Point {
        match s {
            Step::Node(n) => self.arr.nodes[n] - self.arr.nodes[from],
            Step::Stub(d) => Point::new(self.stub_angle[d].cos(), self.stub_angle[d].sin()),
        }
    }

    /// Left-to-right order of two strands that both run from `u` to `v`,
    /// decided by where their continuations beyond `v` part. `pos` is the
    /// walk index of `v` and `step` the walking direction.
    fn order_beyond(&self, u: usize, v: usize, a: (usize, i64, i64), b: (usize, i64, i64)) -> Ordering {
        let (mut prev, mut cur) = (u, v);
        let (mut ia, mut ib) = (a.1, b.1);
        loop {
            let na = self.step(a.0, ia + a.2);
            let nb = self.step(b.0, ib + b.2);
            if na == nb {
                match na {
                    Step::Node(n) => {
                        prev = cur;
                        cur = n;
                        ia += a.2;
                        ib += b.2;
                        continue;
                    }
                    Step::Stub(_) => return Ordering::Equal,
                }
            }
            let back = self.arr.nodes[prev] - self.arr.nodes[cur];
            let ta = ccw_angle(back, self.dir(cur, na));
            let tb = ccw_angle(back, self.dir(cur, nb));
            return tb.total_cmp(&ta);
        }
    }

    /// Strand `(path, k, forward)` uses walk positions `k, k + 1`; forward
    /// means it runs from the smaller node of the arc to the larger one.
    fn strand_order(&self, (u, v): (usize, usize), a: (usize, usize, bool), b: (usize, usize, bool)) -> Ordering {
        let beyond = |s: (usize, usize, bool)| {
            if s.2 {
                (s.0, s.1 as i64 + 1, 1)
            } else {
                (s.0, s.1 as i64, -1)
            }
        };
        let before = |s: (usize, usize, bool)| {
            if s.2 {
                (s.0, s.1 as i64, -1)
            } else {
                (s.0, s.1 as i64 + 1, 1)
            }
        };
        self.order_beyond(u, v, beyond(a), beyond(b))
            .then_with(|| self.order_beyond(v, u, before(a), before(b)).reverse())
            .then(a.0.cmp(&b.0))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Slot {
    Entry(usize, usize),
    Exit(usize, usize),
    Stub(usize),
}

struct Chord {
    path: usize,
    idx: usize,
    from: i64,
    to: i64,
}

struct CrossingInfo {
    a: usize,
    b_prev_left: bool,
}

/// Exact rational `num / den` with `den > 0`.
#[derive(Clone, Copy, Debug)]
struct Frac(i128, i128);

impl Frac {
    fn cmp(self, o: Frac) -> Ordering {
        (self.0 * o.1).cmp(&(o.0 * self.1))
    }
}

fn chord_crossing(a1: i64, a2: i64, b1: i64, b2: i64) -> Frac {
    let (a1, a2, b1, b2) = (a1 as i128, a2 as i128, b1 as i128, b2 as i128);
    let num = a1 * a2 - b1 * b2;
    let den = (a1 + a2) - (b1 + b2);
    if den < 0 {
        Frac(-num, -den)
    } else {
        Frac(num, den)
    }
}

/// Orientation of three points on the parabola `y = x^2`.
fn parabola_left(a: i64, b: i64, c: i64) -> bool {
    let (a, b, c) = (a as i128, b as i128, c as i128);
    (b - a).signum() * (c - a).signum() * (c - b).signum() > 0
}

fn stub_angles(arr: &Arrangement, incident: &[Vec<usize>], centers_at: &[Vec<usize>]) -> Vec<f64> {
    let mut out = vec![0.0; arr.extra_nodes.len()];
    for (c, disks) in centers_at.iter().enumerate() {
        if disks.is_empty() {
            continue;
        }
        let mut angles: Vec<f64> = incident[c]
            .iter()
            .map(|&e| {
                let (u, v) = arr.arcs[e];
                let other = if u == c { v } else { u };
                let d = arr.nodes[other] - arr.nodes[c];
                d.y.atan2(d.x)
            })
            .collect();
        angles.sort_by(f64::total_cmp);
        let s = disks.len() as f64;
        let tau = std::f64::consts::TAU;
        let (start, gap) = if angles.is_empty() {
            (0.0, tau)
        } else {
            let last = angles[angles.len() - 1];
            let mut best = (last, angles[0] + tau - last);
            for w in angles.windows(2) {
                if w[1] - w[0] > best.1 {
                    best = (w[0], w[1] - w[0]);
                }
            }
            best
        };
        for (k, &d) in disks.iter().enumerate() {
            let t = start + gap * (k as f64 + 1.0) / (s + 1.0);
            out[d] = t.sin().atan2(t.cos());
        }
    }
    out
}

/// Expands the drawing into a plane graph.
pub fn planarize(drawing: &PathDrawing) -> Result<PlanarizedGraph> {
    let arr = drawing.arrangement()?;
    planarize_with(&arr, drawing)
}

pub(crate) fn planarize_with(arr: &Arrangement, drawing: &PathDrawing) -> Result<PlanarizedGraph> {
    let n_disks = drawing.centers.len();
    let n_nodes = arr.nodes.len();
    let ends: Vec<(usize, usize)> = drawing.paths.iter().map(|p| p.disks).collect();

    let mut incident = vec![Vec::new(); n_nodes];
    for (e, &(u, v)) in arr.arcs.iter().enumerate() {
        incident[u].push(e);
        incident[v].push(e);
    }
    let mut centers_at = vec![Vec::new(); n_nodes];
    for d in 0..n_disks {
        centers_at[arr.extra_nodes[d]].push(d);
    }
    for list in &mut centers_at {
        list.sort_by_key(|&d| (drawing.ids[d], d));
    }
    let ctx = Ctx {
        arr,
        ends,
        stub_angle: stub_angles(arr, &incident, &centers_at),
    };

    // Bundles: strands per arc in left-to-right order along (u, v).
    let mut bundles: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); arr.arcs.len()];
    for (p, walk) in arr.walks.iter().enumerate() {
        for k in 0..walk.len().saturating_sub(1) {
            let e = arr.arc(walk[k], walk[k + 1]);
            bundles[e].push((p, k, walk[k] < walk[k + 1]));
        }
    }
    for (e, b) in bundles.iter_mut().enumerate() {
        let uv = arr.arcs[e];
        b.sort_by(|&x, &y| ctx.strand_order(uv, x, y));
    }

    // Slot sequence around every node, counter-clockwise.
    let mut slots: Vec<Vec<Slot>> = vec![Vec::new(); n_nodes];
    for c in 0..n_nodes {
        let mut items: Vec<(f64, Step)> = Vec::new();
        for &e in &incident[c] {
            let (u, v) = arr.arcs[e];
            let other = if u == c { v } else { u };
            let d = arr.nodes[other] - arr.nodes[c];
            items.push((d.y.atan2(d.x), Step::Node(e)));
        }
        for &d in &centers_at[c] {
            items.push((ctx.stub_angle[d], Step::Stub(d)));
        }
        items.sort_by(|x, y| x.0.total_cmp(&y.0));
        // Arcs are listed as `Step::Node(arc)` here.
        for (_, item) in items {
            match item {
                Step::Stub(d) => slots[c].push(Slot::Stub(d)),
                Step::Node(e) => {
                    let at_tail = arr.arcs[e].0 == c;
                    let strand_slot = |&(p, k, fwd): &(usize, usize, bool)| {
                        // Walk index of `c` and whether the path leaves through this arc.
                        let (idx, leaving) = match (at_tail, fwd) {
                            (true, true) => (k, true),
                            (true, false) => (k + 1, false),
                            (false, true) => (k + 1, false),
                            (false, false) => (k, true),
                        };
                        if leaving {
                            Slot::Exit(p, idx)
                        } else {
                            Slot::Entry(p, idx)
                        }
                    };
                    if at_tail {
                        slots[c].extend(bundles[e].iter().rev().map(strand_slot));
                    } else {
                        slots[c].extend(bundles[e].iter().map(strand_slot));
                    }
                }
            }
        }
    }

    let mut through: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
    for (p, walk) in arr.walks.iter().enumerate() {
        for (k, &c) in walk.iter().enumerate() {
            through[c].push((p, k));
        }
    }

    // Lane vertices, then crossing vertices node by node.
    let mut kinds: Vec<VertexKind> = (0..n_disks).map(|d| VertexKind::Center { disk: d }).collect();
    let mut positions: Vec<Point> = drawing.centers.clone();
    let mut lane: Vec<Vec<usize>> = Vec::with_capacity(arr.walks.len());
    for (p, walk) in arr.walks.iter().enumerate() {
        let mut ids = vec![usize::MAX; walk.len()];
        for k in 1..walk.len().saturating_sub(1) {
            ids[k] = kinds.len();
            kinds.push(VertexKind::Lane { path: p, node: walk[k] });
            positions.push(arr.nodes[walk[k]]);
        }
        lane.push(ids);
    }

    let mut infos: HashMap<usize, CrossingInfo> = HashMap::new();
    // Crossing vertices along every chord, in path direction.
    let mut on_chord: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    // Abscissa of the far chord end for edges at center vertices.
    let mut stub_ports: HashMap<(usize, usize), (i64, i64)> = HashMap::new();
    for c in 0..n_nodes {
        let (chords, crossings) = gadget(c, &slots[c], &through[c], &ctx)?;
        for ch in &chords {
            let last = arr.walks[ch.path].len() - 1;
            let (a, b) = ctx.ends[ch.path];
            if ch.idx == 0 {
                stub_ports.insert((ch.path, a), (ch.from, ch.to));
            }
            if ch.idx == last {
                stub_ports.insert((ch.path, b), (ch.to, ch.from));
            }
        }
        let base = kinds.len();
        for (k, (ia, ib, b_prev_left)) in crossings.iter().enumerate() {
            let (pa, pb) = (chords[*ia].path, chords[*ib].path);
            kinds.push(VertexKind::Crossing {
                paths: (pa.min(pb), pa.max(pb)),
                node: c,
            });
            positions.push(arr.nodes[c]);
            infos.insert(
                base + k,
                CrossingInfo {
                    a: pa,
                    b_prev_left: *b_prev_left,
                },
            );
        }
        let mut per_chord: Vec<Vec<(Frac, usize)>> = vec![Vec::new(); chords.len()];
        for (k, &(ia, ib, _)) in crossings.iter().enumerate() {
            let (x, y) = (&chords[ia], &chords[ib]);
            let at = chord_crossing(x.from, x.to, y.from, y.to);
            per_chord[ia].push((at, base + k));
            per_chord[ib].push((at, base + k));
        }
        for (ch, mut list) in chords.iter().zip(per_chord) {
            let ascending = ch.from < ch.to;
            list.sort_by(|x, y| if ascending { x.0.cmp(y.0) } else { y.0.cmp(x.0) });
            on_chord.insert((ch.path, ch.idx), list.into_iter().map(|x| x.1).collect());
        }
    }

    // Route every path and record its edges with rotation ranks.
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut ports: Vec<Vec<((u8, i64), usize)>> = vec![Vec::new(); kinds.len()];
    let mut path_vertices = Vec::with_capacity(arr.walks.len());
    for (p, walk) in arr.walks.iter().enumerate() {
        let (a, b) = ctx.ends[p];
        let mut seq = vec![a];
        for k in 0..walk.len() {
            if k > 0 && k + 1 < walk.len() {
                seq.push(lane[p][k]);
            }
            seq.extend(on_chord[&(p, k)].iter().copied());
        }
        seq.push(b);
        for w in seq.windows(2) {
            let e = edges.len();
            edges.push((w[0], w[1]));
            let rank = |v: usize, next: bool| -> (u8, i64) {
                match kinds[v] {
                    VertexKind::Center { disk } => {
                        let (stub, far) = stub_ports[&(p, disk)];
                        (u8::from(far < stub), far)
                    }
                    VertexKind::Lane { .. } => (u8::from(next), 0),
                    VertexKind::Crossing { .. } => {
                        let info = &infos[&v];
                        let r = match (info.a == p, next, info.b_prev_left) {
                            (true, true, _) => 0,
                            (true, false, _) => 2,
                            (false, false, true) | (false, true, false) => 1,
                            (false, _, _) => 3,
                        };
                        (r, 0)
                    }
                }
            };
            ports[w[0]].push((rank(w[0], true), 2 * e));
            ports[w[1]].push((rank(w[1], false), 2 * e + 1));
        }
        path_vertices.push(seq);
    }
    let rotation: Vec<Vec<usize>> = ports
        .into_iter()
        .map(|mut list| {
            list.sort_by_key(|x| x.0);
            list.into_iter().map(|x| x.1).collect()
        })
        .collect();
    let graph = PlaneGraph::from_rotation(kinds.len(), &edges, rotation)?;

    let owner_of = |p: usize, node: usize| -> usize {
        let k = arr.walks[p].iter().position(|&x| x == node).expect("node on path");
        drawing.paths[p].half_owner_id(arr.params[p][k])
    };
    let mut owners = Vec::with_capacity(kinds.len());
    let mut owner_paths = Vec::with_capacity(kinds.len());
    for kind in &kinds {
        match *kind {
            VertexKind::Center { disk } => {
                owners.push(vec![drawing.ids[disk]]);
                owner_paths.push(vec![]);
            }
            VertexKind::Lane { path, node } => {
                owners.push(vec![owner_of(path, node)]);
                owner_paths.push(vec![path]);
            }
            VertexKind::Crossing { paths, node } => {
                let mut o = vec![owner_of(paths.0, node), owner_of(paths.1, node)];
                o.sort_unstable();
                o.dedup();
                owners.push(o);
                owner_paths.push(vec![paths.0, paths.1]);
            }
        }
    }
    let pg = PlanarizedGraph {
        graph,
        kinds,
        owners,
        owner_paths,
        positions,
        path_vertices,
        disk_ids: drawing.ids.clone(),
    };
    pg.graph.check_planar()?;
    Ok(pg)
}

type GadgetCrossings = Vec<(usize, usize, bool)>;

/// Chords of the gadget at node `c` and their pairwise crossings as
/// `(chord a, chord b, whether b's entry side is left of a)`.
fn gadget(
    c: usize,
    slots: &[Slot],
    through: &[(usize, usize)],
    ctx: &Ctx,
) -> Result<(Vec<Chord>, GadgetCrossings)> {
    'attempt: for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64((c as u64) ^ (attempt << 48));
        let x: HashMap<Slot, i64> = slots
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i as i64 * SLOT_SPACING + rng.gen_range(0..JITTER)))
            .collect();
        let chords: Vec<Chord> = through
            .iter()
            .map(|&(p, k)| {
                let last = ctx.arr.walks[p].len() - 1;
                let (a, b) = ctx.ends[p];
                let from = if k == 0 { Slot::Stub(a) } else { Slot::Entry(p, k) };
                let to = if k == last { Slot::Stub(b) } else { Slot::Exit(p, k) };
                Chord {
                    path: p,
                    idx: k,
                    from: x[&from],
                    to: x[&to],
                }
            })
            .collect();
        let mut crossings = Vec::new();
        for i in 0..chords.len() {
            let (a1, a2) = (chords[i].from, chords[i].to);
            let (lo, hi) = (a1.min(a2), a1.max(a2));
            for (j, other) in chords.iter().enumerate().skip(i + 1) {
                let (b1, b2) = (other.from, other.to);
                if b1 == a1 || b1 == a2 || b2 == a1 || b2 == a2 {
                    continue;
                }
                let in1 = lo < b1 && b1 < hi;
                let in2 = lo < b2 && b2 < hi;
                if in1 != in2 {
                    crossings.push((i, j, parabola_left(a1, a2, b1)));
                }
            }
        }
        // Three chords through one point would make the order ambiguous.
        let mut per_chord: Vec<Vec<Frac>> = vec![Vec::new(); chords.len()];
        for &(i, j, _) in &crossings {
            let at = chord_crossing(chords[i].from, chords[i].to, chords[j].from, chords[j].to);
            per_chord[i].push(at);
            per_chord[j].push(at);
        }
        for list in &mut per_chord {
            list.sort_by(|x, y| x.cmp(*y));
            if list.windows(2).any(|w| w[0].cmp(w[1]) == Ordering::Equal) {
                continue 'attempt;
            }
        }
        return Ok((chords, crossings));
    }
    Err(Error::InvalidParameter(format!(
        "could not resolve concurrent chords at arrangement node {c}"
    )))
}

/// Checks the structural guarantees of a planarization and reports every
/// violation found.
pub fn verify_planarization(drawing: &PathDrawing, pg: &PlanarizedGraph) -> Vec<String> {
    let mut out = Vec::new();
    if !pg.graph.is_planar_embedding() {
        out.push("rotation system is not a plane embedding".to_string());
    }
    let mut pair_crossings: HashMap<(usize, usize), usize> = HashMap::new();
    for (v, kind) in pg.kinds.iter().enumerate() {
        let (want_paths, max_owners) = match kind {
            VertexKind::Center { disk } => {
                if pg.owners[v] != vec![pg.disk_ids[*disk]] {
                    out.push(format!("center vertex {v} is not owned by its disk alone"));
                }
                (0, 1)
            }
            VertexKind::Lane { .. } => (1, 1),
            VertexKind::Crossing { paths, .. } => {
                *pair_crossings.entry(*paths).or_insert(0) += 1;
                (2, 2)
            }
        };
        if pg.owner_paths[v].len() != want_paths {
            out.push(format!(
                "vertex {v} has {} owner paths, expected {want_paths}",
                pg.owner_paths[v].len()
            ));
        }
        if pg.owners[v].is_empty() || pg.owners[v].len() > max_owners {
            out.push(format!("vertex {v} has {} owner disks", pg.owners[v].len()));
        }
    }
    for (&(p, q), &count) in &pair_crossings {
        if count > 2 {
            out.push(format!("paths {p} and {q} cross {count} times"));
        }
    }

    let adjacent: HashSet<(usize, usize)> = pg
        .graph
        .edges()
        .flat_map(|(u, v)| [(u, v), (v, u)])
        .collect();
    for (p, dp) in drawing.paths.iter().enumerate() {
        let seq = &pg.path_vertices[p];
        if seq.first() != Some(&dp.disks.0) || seq.last() != Some(&dp.disks.1) {
            out.push(format!("path {p} does not run between its disk centers"));
            continue;
        }
        if seq.windows(2).any(|w| !adjacent.contains(&(w[0], w[1]))) {
            out.push(format!("path {p} uses a missing edge"));
        }
        for &v in &seq[1..seq.len() - 1] {
            if !pg.owner_paths[v].contains(&p) {
                out.push(format!("vertex {v} on path {p} is not owned by it"));
            }
        }
        let mut pts = vec![drawing.centers[dp.disks.0]];
        pts.extend(
            seq.iter()
                .filter(|&&v| matches!(pg.kinds[v], VertexKind::Lane { .. }))
                .map(|&v| pg.positions[v]),
        );
        pts.push(drawing.centers[dp.disks.1]);
        if !refines(&dp.path.vertices, &pts) {
            out.push(format!("lane vertices of path {p} do not reproduce its polyline"));
        }
    }
    out
}

/// Whether `pts` walks along `poly` in order and visits all its vertices.
fn refines(poly: &[Point], pts: &[Point]) -> bool {
    let tol = 1e-7;
    if poly.len() == 1 {
        return pts.iter().all(|q| q.dist(poly[0]) <= tol);
    }
    if pts.is_empty() || pts[0].dist(poly[0]) > tol {
        return false;
    }
    let (mut s, mut t) = (0usize, 0.0);
    for &q in &pts[1..] {
        if s + 1 >= poly.len() {
            return false;
        }
        if q.dist(poly[s + 1]) <= tol {
            s += 1;
            t = 0.0;
            continue;
        }
        let (a, b) = (poly[s], poly[s + 1]);
        let d = b - a;
        let len2 = d.dot(d);
        let tq = if len2 > 0.0 { (q - a).dot(d) / len2 } else { 0.0 };
        if !(0.0..=1.0).contains(&tq) || tq < t || q.dist(a.lerp(b, tq)) > tol {
            return false;
        }
        t = tq;
    }
    s + 1 == poly.len()
}

#[cfg(test)]
mod tests {
    use super::super::tests::straight;
    use super::*;
    use crate::disk_graph::{build_intersection_graph, GeodesicDisk};
    use crate::drawing::realize_drawing;
    use crate::geometry::{rect_ring, PolygonWithHoles};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn crossing_count(pg: &PlanarizedGraph) -> usize {
        pg.crossing_vertex_count()
    }

    #[test]
    fn two_crossing_paths() {
        let d = straight(&[(p(0.0, 0.0), p(2.0, 2.0)), (p(0.0, 2.0), p(2.0, 0.0))]);
        let pg = planarize(&d).unwrap();
        assert!(verify_planarization(&d, &pg).is_empty());
        assert_eq!(crossing_count(&pg), 1);
        let x = pg
            .kinds
            .iter()
            .position(|k| matches!(k, VertexKind::Crossing { .. }))
            .unwrap();
        assert_eq!(pg.graph.degree(x), 4);
        assert_eq!(pg.owners[x], vec![0, 2]);
    }

    #[test]
    fn three_paths_through_one_point() {
        let d = straight(&[
            (p(-1.0, 0.0), p(1.0, 0.0)),
            (p(0.0, -1.0), p(0.0, 1.0)),
            (p(-1.0, -1.0), p(1.0, 1.0)),
        ]);
        let pg = planarize(&d).unwrap();
        assert!(verify_planarization(&d, &pg).is_empty());
        assert_eq!(crossing_count(&pg), 3);
        let lanes = pg
            .kinds
            .iter()
            .filter(|k| matches!(k, VertexKind::Lane { .. }))
            .count();
        assert_eq!(lanes, 3);
    }

    #[test]
    fn chain_has_no_crossing_vertices() {
        let f = PolygonWithHoles::rectangle(0.0, 0.0, 100.0, 10.0).unwrap();
        let disks: Vec<_> = (1..=5)
            .map(|k| GeodesicDisk::new(k, p(10.0 * k as f64, 5.0), 6.0))
            .collect();
        let g = build_intersection_graph(&f, &disks).unwrap().1;
        let d = realize_drawing(&g);
        let pg = planarize(&d).unwrap();
        assert!(verify_planarization(&d, &pg).is_empty());
        assert_eq!(crossing_count(&pg), 0);
    }

    #[test]
    fn overlapping_bundles_stay_planar() {
        // Paths around a hole share the corridor along its edges.
        let f = PolygonWithHoles::new(
            rect_ring(0.0, 0.0, 20.0, 20.0),
            vec![rect_ring(8.0, 8.0, 12.0, 12.0)],
        )
        .unwrap();
        let centers = [
            (2.0, 10.0),
            (18.0, 10.5),
            (3.0, 9.0),
            (17.0, 11.0),
            (10.0, 5.0),
            (6.0, 7.0),
            (14.0, 7.5),
            (10.0, 15.0),
        ];
        let disks: Vec<_> = centers
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| GeodesicDisk::new(k, p(x, y), 9.0))
            .collect();
        let g = build_intersection_graph(&f, &disks).unwrap().1;
        let d = realize_drawing(&g);
        let pg = planarize(&d).unwrap();
        assert_eq!(verify_planarization(&d, &pg), Vec::<String>::new());
    }

    #[test]
    fn coincident_centers_get_separate_stubs() {
        let f = PolygonWithHoles::rectangle(0.0, 0.0, 10.0, 10.0).unwrap();
        let disks = [
            GeodesicDisk::new(1, p(5.0, 5.0), 1.0),
            GeodesicDisk::new(2, p(5.0, 5.0), 1.0),
            GeodesicDisk::new(3, p(6.0, 5.0), 1.0),
        ];
        let g = build_intersection_graph(&f, &disks).unwrap().1;
        let d = realize_drawing(&g);
        let pg = planarize(&d).unwrap();
        assert!(verify_planarization(&d, &pg).is_empty());
    }

    #[test]
    fn refinement_check() {
        let poly = [p(0.0, 0.0), p(2.0, 0.0), p(2.0, 2.0)];
        assert!(refines(&poly, &[p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0), p(2.0, 2.0)]));
        assert!(!refines(&poly, &[p(0.0, 0.0), p(2.0, 2.0)]));
        assert!(!refines(&poly, &[p(0.0, 0.0), p(1.0, 1.0), p(2.0, 0.0), p(2.0, 2.0)]));
    }
}
