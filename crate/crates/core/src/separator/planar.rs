//! Weighted planar vertex separators by BFS levels and a fundamental cycle
//! of a triangulation.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::plane::PlaneGraph;

const NONE: usize = usize::MAX;

/// A vertex separator `S` and the sides `A`, `B` of `G - S`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlanarSeparation {
    pub separator: Vec<usize>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

fn check_delta(delta: f64) -> Result<()> {
    if (2.0 / 3.0..1.0).contains(&delta) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "balance factor must lie in [2/3, 1), got {delta}"
        )))
    }
}

/// Separator of a plane graph with unit vertex weights.
pub fn separate_unit(g: &PlaneGraph, delta: f64) -> Result<PlanarSeparation> {
    separate_plane_graph(g, &vec![1.0; g.vertex_count()], delta)
}

/// Finds `S` such that every component of `G - S` weighs at most two
/// thirds of the total, then groups the components into two sides of
/// weight at most `delta` times the total each.
pub fn separate_plane_graph(g: &PlaneGraph, weights: &[f64], delta: f64) -> Result<PlanarSeparation> {
    check_delta(delta)?;
    g.check_planar()?;
    if weights.len() != g.vertex_count() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::InvalidParameter("one finite nonnegative weight per vertex required".into()));
    }
    let total: f64 = weights.iter().sum();
    let limit = component_limit(weights, total);

    let (comp, count) = g.components(&[]);
    let mut comp_w = vec![0.0; count];
    for v in 0..g.vertex_count() {
        comp_w[comp[v]] += weights[v];
    }
    let heavy = (0..count).max_by(|&x, &y| comp_w[x].total_cmp(&comp_w[y]).then(y.cmp(&x)));
    let mut separator = Vec::new();
    if let Some(h) = heavy {
        if comp_w[h] > limit {
            let members: Vec<usize> = (0..g.vertex_count()).filter(|&v| comp[v] == h).collect();
            separator = heavy_component_separator(g, weights, &members, limit);
        }
    }
    let sep = split_sides(g, weights, separator);
    let side = |s: &[usize]| s.iter().map(|&v| weights[v]).sum::<f64>();
    if side(&sep.a).max(side(&sep.b)) > (delta * total).max(limit) + 1e-9 {
        return Err(Error::InvalidParameter("planar separator failed to balance".into()));
    }
    Ok(sep)
}

/// Largest component weight allowed: two thirds of the total, rounded up
/// when every weight is an integer.
fn component_limit(weights: &[f64], total: f64) -> f64 {
    let third = 2.0 / 3.0 * total;
    if weights.iter().all(|w| w.fract() == 0.0) {
        (third - 1e-9).ceil() + 1e-9
    } else {
        third + 1e-9
    }
}

/// Whether every component of `G - S` weighs at most `limit`.
fn components_within(g: &PlaneGraph, weights: &[f64], sep: &[usize], limit: f64) -> bool {
    let mut removed = vec![false; g.vertex_count()];
    for &v in sep {
        removed[v] = true;
    }
    let (comp, count) = g.components(&removed);
    let mut w = vec![0.0; count];
    for v in 0..g.vertex_count() {
        if !removed[v] {
            w[comp[v]] += weights[v];
        }
    }
    w.iter().all(|&x| x <= limit)
}

/// Groups the components of `G - S` into two sides. A component weighing
/// at least a third goes alone; otherwise components are accumulated until
/// the first side reaches a third.
fn split_sides(g: &PlaneGraph, weights: &[f64], mut separator: Vec<usize>) -> PlanarSeparation {
    separator.sort_unstable();
    separator.dedup();
    let mut removed = vec![false; g.vertex_count()];
    for &v in &separator {
        removed[v] = true;
    }
    let (comp, count) = g.components(&removed);
    let mut w = vec![0.0; count];
    for v in 0..g.vertex_count() {
        if !removed[v] {
            w[comp[v]] += weights[v];
        }
    }
    let total: f64 = w.iter().sum();
    let mut in_a = vec![false; count];
    if let Some(big) = (0..count).find(|&c| w[c] >= total / 3.0 && w[c] > 0.0) {
        in_a[big] = true;
    } else {
        let mut acc = 0.0;
        for c in 0..count {
            if acc >= total / 3.0 && acc > 0.0 {
                break;
            }
            in_a[c] = true;
            acc += w[c];
        }
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for v in 0..g.vertex_count() {
        if removed[v] {
            continue;
        }
        if in_a[comp[v]] {
            a.push(v);
        } else {
            b.push(v);
        }
    }
    PlanarSeparation { separator, a, b }
}

/// BFS from `root` over the vertices with `allowed` set.
fn bfs_levels(g: &PlaneGraph, root: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut level = vec![NONE; g.vertex_count()];
    let mut parent_dart = vec![NONE; g.vertex_count()];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([root]);
    level[root] = 0;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &d in g.darts(v) {
            let w = g.head(d);
            if level[w] == NONE {
                level[w] = level[v] + 1;
                parent_dart[w] = d;
                queue.push_back(w);
            }
        }
    }
    (level, parent_dart, order)
}

fn heavy_component_separator(g: &PlaneGraph, weights: &[f64], members: &[usize], limit: f64) -> Vec<usize> {
    let root = members[0];
    let (level, parent_dart, order) = bfs_levels(g, root);
    let depth = order.iter().map(|&v| level[v]).max().unwrap_or(0);
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); depth + 1];
    let mut level_w = vec![0.0; depth + 1];
    for &v in &order {
        by_level[level[v]].push(v);
        level_w[level[v]] += weights[v];
    }
    let comp_w: f64 = level_w.iter().sum();

    // Weighted median level.
    let mut acc = 0.0;
    let mut l1 = depth;
    for (l, &w) in level_w.iter().enumerate() {
        acc += w;
        if acc >= comp_w / 2.0 {
            l1 = l;
            break;
        }
    }
    let size = |l: i64| -> usize {
        if l < 0 || l as usize > depth {
            0
        } else {
            by_level[l as usize].len()
        }
    };
    let l1i = l1 as i64;
    let l0 = (-1..=l1i)
        .min_by_key(|&l| (size(l) + 2 * (l1i - l) as usize, -l))
        .unwrap();
    let l2 = (l1i + 1..=depth as i64 + 1)
        .min_by_key(|&l| (size(l) + 2 * (l - l1i - 1) as usize, l))
        .unwrap();
    let level_set = |l: i64| -> Vec<usize> {
        if l < 0 || l as usize > depth {
            Vec::new()
        } else {
            by_level[l as usize].clone()
        }
    };

    let median = by_level[l1].clone();
    let mut outer = level_set(l0);
    outer.extend(level_set(l2));
    let middle_w: f64 = ((l0 + 1).max(0)..l2.min(depth as i64 + 1))
        .map(|l| level_w[l as usize])
        .sum();

    let mut best = median;
    if middle_w <= limit {
        if outer.len() < best.len() && components_within(g, weights, &outer, limit) {
            best = outer;
        }
        return best;
    }
    if let Some(cycle) = cycle_separator(g, weights, &level, &parent_dart, l0, l2, limit) {
        let mut cand = outer;
        cand.extend(cycle);
        cand.sort_unstable();
        cand.dedup();
        if cand.len() < best.len() && components_within(g, weights, &cand, limit) {
            best = cand;
        }
    }
    best
}

/// Working copy of a plane graph built from dart rotations.
struct Builder {
    edges: Vec<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
}

impl Builder {
    fn add_edge(&mut self, u: usize, v: usize) -> usize {
        self.edges.push((u, v));
        self.edges.len() - 1
    }
}

/// Fundamental-cycle separator of the middle levels `l0 < level < l2`:
/// levels up to `l0` are contracted to one root vertex, levels from `l2` on
/// are dropped, faces are triangulated with star vertices, and the first
/// balanced fundamental cycle of a BFS tree is returned (real vertices only).
fn cycle_separator(
    g: &PlaneGraph,
    weights: &[f64],
    level: &[usize],
    parent_dart: &[usize],
    l0: i64,
    l2: i64,
    limit: f64,
) -> Option<Vec<usize>> {
    let lvl = |v: usize| -> i64 {
        if level[v] == NONE {
            i64::MAX
        } else {
            level[v] as i64
        }
    };
    let is_mid = |v: usize| lvl(v) > l0 && lvl(v) < l2;
    let is_top = |v: usize| lvl(v) <= l0;
    let contracted = l0 >= 0;

    // Vertex ids in H: root first, then middle vertices.
    let mut id = vec![NONE; g.vertex_count()];
    let mut orig: Vec<usize> = Vec::new();
    let mut hw: Vec<f64> = Vec::new();
    let root_orig = (0..g.vertex_count()).find(|&v| level[v] == 0)?;
    if contracted {
        orig.push(NONE);
        hw.push(0.0);
    }
    for v in 0..g.vertex_count() {
        if is_mid(v) {
            id[v] = orig.len();
            orig.push(v);
            hw.push(weights[v]);
        }
    }
    let hroot = if contracted { 0 } else { id[root_orig] };
    let mut b = Builder {
        edges: Vec::new(),
        rotation: vec![Vec::new(); orig.len()],
    };

    // Map of g-darts kept in H to H-darts.
    let mut hdart: HashMap<usize, usize> = HashMap::new();
    for (e, (u, v)) in g.edges().enumerate() {
        let hu = if is_mid(u) { id[u] } else if contracted && is_top(u) { 0 } else { NONE };
        let hv = if is_mid(v) { id[v] } else if contracted && is_top(v) { 0 } else { NONE };
        if hu == NONE || hv == NONE || hu == hv {
            continue;
        }
        let he = b.add_edge(hu, hv);
        hdart.insert(2 * e, 2 * he);
        hdart.insert(2 * e + 1, 2 * he + 1);
    }
    for v in 0..g.vertex_count() {
        if is_mid(v) {
            b.rotation[id[v]] = g.darts(v).iter().filter_map(|d| hdart.get(d).copied()).collect();
        }
    }
    if contracted {
        // Walk around the BFS tree of the contracted levels.
        let is_child = |d: usize| {
            let w = g.head(d);
            is_top(w) && parent_dart[w] == d
        };
        let mut rot = Vec::new();
        let start = g.darts(root_orig);
        let mut stack: Vec<(usize, usize, usize)> = vec![(root_orig, 0, start.len())];
        while let Some(&mut (v, ref mut pos, len)) = stack.last_mut() {
            if *pos >= len {
                stack.pop();
                continue;
            }
            let darts = g.darts(v);
            let base = if v == root_orig {
                0
            } else {
                let back = parent_dart[v] ^ 1;
                darts.iter().position(|&d| d == back).unwrap() + 1
            };
            let d = darts[(base + *pos) % darts.len()];
            *pos += 1;
            if is_child(d) {
                let w = g.head(d);
                let wlen = g.degree(w) - 1;
                stack.push((w, 0, wlen));
            } else if let Some(&hd) = hdart.get(&d) {
                rot.push(hd);
            }
        }
        b.rotation[0] = rot;
    }
    let h = PlaneGraph::from_rotation(orig.len(), &b.edges, b.rotation.clone()).ok()?;
    if h.vertex_count() < 3 {
        return None;
    }

    // Triangulate: a star vertex inside every face that is not a triangle.
    let (faces, _) = h.faces();
    let mut after: HashMap<usize, usize> = HashMap::new();
    let mut star_rot: Vec<Vec<usize>> = Vec::new();
    for face in faces.iter().filter(|f| f.len() != 3) {
        let s = b.rotation.len() + star_rot.len();
        let mut rot = Vec::with_capacity(face.len());
        for &d in face {
            let e = b.add_edge(h.tail(d), s);
            after.insert(d, 2 * e);
            rot.push(2 * e + 1);
        }
        star_rot.push(rot);
    }
    let mut rotation: Vec<Vec<usize>> = b
        .rotation
        .iter()
        .map(|rot| {
            let mut out = Vec::with_capacity(rot.len());
            for &d in rot {
                out.push(d);
                if let Some(&x) = after.get(&d) {
                    out.push(x);
                }
            }
            out
        })
        .collect();
    hw.extend(std::iter::repeat_n(0.0, star_rot.len()));
    let real_count = orig.len();
    rotation.extend(star_rot);
    let t = PlaneGraph::from_rotation(rotation.len(), &b.edges, rotation).ok()?;
    if !t.is_planar_embedding() {
        return None;
    }

    let (tl, tpd, torder) = bfs_levels(&t, hroot);
    let (tfaces, face_of) = t.faces();
    let mut tree_edge = vec![false; t.edge_count()];
    for &v in &torder {
        if tpd[v] != NONE {
            tree_edge[tpd[v] / 2] = true;
        }
    }

    // Dual spanning tree on the non-tree edges.
    let nf = tfaces.len();
    let mut dual_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nf];
    for e in 0..t.edge_count() {
        if !tree_edge[e] {
            let (f1, f2) = (face_of[2 * e], face_of[2 * e + 1]);
            dual_adj[f1].push((f2, e));
            dual_adj[f2].push((f1, e));
        }
    }
    let mut dparent_edge = vec![NONE; nf];
    let mut tin = vec![0usize; nf];
    let mut tout = vec![0usize; nf];
    let mut seen = vec![false; nf];
    let mut face_w = vec![0.0; nf];
    for v in 0..t.vertex_count() {
        if let Some(&d) = t.darts(v).first() {
            face_w[face_of[d]] += hw[v];
        }
    }
    let mut sub_w = face_w.clone();
    let mut clock = 0;
    let mut stack = vec![(0usize, 0usize)];
    seen[0] = true;
    tin[0] = clock;
    clock += 1;
    while let Some(&mut (f, ref mut i)) = stack.last_mut() {
        if *i < dual_adj[f].len() {
            let (nf2, e) = dual_adj[f][*i];
            *i += 1;
            if !seen[nf2] {
                seen[nf2] = true;
                dparent_edge[nf2] = e;
                tin[nf2] = clock;
                clock += 1;
                stack.push((nf2, 0));
            }
        } else {
            tout[f] = clock;
            stack.pop();
            if let Some(&(parent, _)) = stack.last() {
                sub_w[parent] += sub_w[f];
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return None;
    }
    let total: f64 = hw.iter().sum();
    let assigned: Vec<usize> = (0..t.vertex_count())
        .map(|v| t.darts(v).first().map(|&d| face_of[d]).unwrap_or(NONE))
        .collect();

    let parent = |v: usize| if tpd[v] == NONE { NONE } else { t.tail(tpd[v]) };
    let mut best: Option<(usize, Vec<usize>)> = None;
    for e in 0..t.edge_count() {
        if tree_edge[e] {
            continue;
        }
        let (f1, f2) = (face_of[2 * e], face_of[2 * e + 1]);
        let child = if dparent_edge[f1] == e { f1 } else { f2 };
        let (mut x, mut y) = (t.tail(2 * e), t.head(2 * e));
        let mut cycle = Vec::new();
        while tl[x] > tl[y] {
            cycle.push(x);
            x = parent(x);
        }
        while tl[y] > tl[x] {
            cycle.push(y);
            y = parent(y);
        }
        while x != y {
            cycle.push(x);
            cycle.push(y);
            x = parent(x);
            y = parent(y);
        }
        cycle.push(x);
        let in_sub = |f: usize| f != NONE && tin[f] >= tin[child] && tin[f] < tout[child];
        let cycle_w: f64 = cycle.iter().map(|&v| hw[v]).sum();
        let on_cycle_inside: f64 = cycle.iter().filter(|&&v| in_sub(assigned[v])).map(|&v| hw[v]).sum();
        let inside = sub_w[child] - on_cycle_inside;
        let outside = total - cycle_w - inside;
        if inside > limit || outside > limit {
            continue;
        }
        let real: Vec<usize> = cycle
            .iter()
            .filter(|&&v| v < real_count && orig[v] != NONE)
            .map(|&v| orig[v])
            .collect();
        if best.as_ref().is_none_or(|(len, _)| real.len() < *len) {
            best = Some((real.len(), real));
        }
    }
    best.map(|(_, c)| c)
}

/// Separator of a plane graph in which every vertex counts (unit weights),
/// returned as a vertex set.
pub fn plane_graph_separator(g: &PlaneGraph, delta: f64) -> Result<Vec<usize>> {
    Ok(separate_unit(g, delta)?.separator)
}
