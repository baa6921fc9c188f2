//! Arrangement of the realized path polylines.
//!
//! Every path segment is split at all points it shares with other segments
//! (proper crossings, touches and overlap endpoints). Pieces between
//! consecutive split points become arcs between snapped nodes, identical
//! pieces merge, and every path turns into a walk over the nodes.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{segments_intersect, Point, PointIndex, Segment, SegmentIntersection};

/// Snapping tolerance relative to the extent of the drawing.
const SNAP: f64 = 1e-9;

#[derive(Clone, Debug)]
pub(crate) struct Arrangement {
    pub nodes: Vec<Point>,
    /// Node sequence of every path, from its first to its last vertex.
    pub walks: Vec<Vec<usize>>,
    /// Arc-length parameter of every walk node along its path.
    pub params: Vec<Vec<f64>>,
    /// Arcs as `(u, v)` with `u < v`.
    pub arcs: Vec<(usize, usize)>,
    pub arc_index: HashMap<(usize, usize), usize>,
    /// Node of every extra point passed to [`Arrangement::build`].
    pub extra_nodes: Vec<usize>,
    /// For every pair of paths `(p, q)` with `p < q` that share a node,
    /// the shared walk positions `(in p, in q)` sorted by position in `p`.
    pub shared: HashMap<(usize, usize), Vec<(usize, usize)>>,
}

impl Arrangement {
    /// `labels[p]` names path `p` in error messages.
    pub fn build(paths: &[Vec<Point>], extra: &[Point], labels: &[(usize, usize)]) -> Result<Self> {
        let (lo, hi) = paths
            .iter()
            .flatten()
            .chain(extra)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.x).min(p.y), hi.max(p.x).max(p.y))
            });
        let extent = if lo.is_finite() { (hi - lo).max(1.0) } else { 1.0 };
        let mut index = PointIndex::new(SNAP * extent);

        for p in paths.iter().flatten().chain(extra) {
            index.insert(*p);
        }
        let extra_nodes: Vec<usize> = extra.iter().map(|p| index.insert(*p).0).collect();

        // Unique segments keyed by their snapped endpoint nodes.
        let mut seg_key: HashMap<(usize, usize), usize> = HashMap::new();
        let mut segs: Vec<(usize, usize)> = Vec::new();
        let mut path_segs: Vec<Vec<(usize, bool)>> = Vec::with_capacity(paths.len());
        for path in paths {
            let mut list = Vec::new();
            for w in path.windows(2) {
                let (a, b) = (index.insert(w[0]).0, index.insert(w[1]).0);
                if a == b {
                    continue;
                }
                let key = (a.min(b), a.max(b));
                let id = *seg_key.entry(key).or_insert_with(|| {
                    segs.push(key);
                    segs.len() - 1
                });
                list.push((id, a < b));
            }
            path_segs.push(list);
        }

        let nodes_now = index.points().to_vec();
        let geo: Vec<Segment> = segs
            .iter()
            .map(|&(a, b)| Segment {
                a: nodes_now[a],
                b: nodes_now[b],
            })
            .collect();
        let hits = pairwise_hits(&geo);

        // Split points per segment, snapped and ordered along the segment.
        let mut pieces: Vec<Vec<usize>> = Vec::with_capacity(segs.len());
        for (s, &(a, b)) in segs.iter().enumerate() {
            let mut pts: Vec<usize> = hits[s].iter().map(|&p| index.insert(p).0).collect();
            pts.retain(|&n| n != a && n != b);
            let (pa, pb) = (index.points()[a], index.points()[b]);
            let d = pb - pa;
            let len2 = d.dot(d);
            let mut keyed: Vec<(f64, usize)> = pts
                .into_iter()
                .map(|n| ((index.points()[n] - pa).dot(d) / len2, n))
                .collect();
            keyed.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            let mut seq = vec![a];
            for (_, n) in keyed {
                if *seq.last().unwrap() != n {
                    seq.push(n);
                }
            }
            if *seq.last().unwrap() != b {
                seq.push(b);
            }
            pieces.push(seq);
        }
        let nodes = index.points().to_vec();

        let mut arcs = Vec::new();
        let mut arc_index = HashMap::new();
        for seq in &pieces {
            for w in seq.windows(2) {
                let key = (w[0].min(w[1]), w[0].max(w[1]));
                arc_index.entry(key).or_insert_with(|| {
                    arcs.push(key);
                    arcs.len() - 1
                });
            }
        }

        let mut walks = Vec::with_capacity(paths.len());
        let mut params = Vec::with_capacity(paths.len());
        for (p, path) in paths.iter().enumerate() {
            let mut walk = vec![index.find(path[0]).expect("path vertex registered")];
            for &(s, forward) in &path_segs[p] {
                let seq = &pieces[s];
                let iter: Box<dyn Iterator<Item = &usize>> = if forward {
                    Box::new(seq.iter())
                } else {
                    Box::new(seq.iter().rev())
                };
                for &n in iter {
                    if *walk.last().unwrap() != n {
                        walk.push(n);
                    }
                }
            }
            let mut seen = walk.clone();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InconsistentPaths {
                    first: labels[p],
                    second: labels[p],
                });
            }
            let mut acc = 0.0;
            let mut ps = Vec::with_capacity(walk.len());
            for (k, &n) in walk.iter().enumerate() {
                if k > 0 {
                    acc += nodes[walk[k - 1]].dist(nodes[n]);
                }
                ps.push(acc);
            }
            walks.push(walk);
            params.push(ps);
        }

        let mut through: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes.len()];
        for (p, walk) in walks.iter().enumerate() {
            for (k, &n) in walk.iter().enumerate() {
                through[n].push((p, k));
            }
        }
        let mut shared: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for list in &through {
            for (i, &(p, kp)) in list.iter().enumerate() {
                for &(q, kq) in &list[i + 1..] {
                    let entry = if p < q { ((p, q), (kp, kq)) } else { ((q, p), (kq, kp)) };
                    shared.entry(entry.0).or_default().push(entry.1);
                }
            }
        }
        for (&(p, q), list) in shared.iter_mut() {
            list.sort_unstable();
            if !contiguous(list) {
                return Err(Error::InconsistentPaths {
                    first: labels[p],
                    second: labels[q],
                });
            }
        }

        Ok(Arrangement {
            nodes,
            walks,
            params,
            arcs,
            arc_index,
            extra_nodes,
            shared,
        })
    }

    pub fn arc(&self, a: usize, b: usize) -> usize {
        self.arc_index[&(a.min(b), a.max(b))]
    }
}

/// Shared positions form one run in both walks: consecutive in the first
/// and consecutive with a constant step of +1 or -1 in the second.
fn contiguous(list: &[(usize, usize)]) -> bool {
    if list.len() < 2 {
        return true;
    }
    let step = list[1].1 as i64 - list[0].1 as i64;
    if step.abs() != 1 {
        return false;
    }
    list.windows(2)
        .all(|w| w[1].0 == w[0].0 + 1 && w[1].1 as i64 - w[0].1 as i64 == step)
}

/// All points where pairs of segments meet, collected per segment.
fn pairwise_hits(segs: &[Segment]) -> Vec<Vec<Point>> {
    let mut order: Vec<usize> = (0..segs.len()).collect();
    let min_x = |s: &Segment| s.a.x.min(s.b.x);
    let max_x = |s: &Segment| s.a.x.max(s.b.x);
    order.sort_by(|&i, &j| min_x(&segs[i]).total_cmp(&min_x(&segs[j])));
    let found: Vec<Vec<(usize, usize, Point)>> = order
        .par_iter()
        .enumerate()
        .map(|(pos, &i)| {
            let mut out = Vec::new();
            let reach = max_x(&segs[i]) + 1e-9;
            for &j in &order[pos + 1..] {
                if min_x(&segs[j]) > reach {
                    break;
                }
                match segments_intersect(&segs[i], &segs[j]) {
                    SegmentIntersection::Disjoint => {}
                    SegmentIntersection::ProperCross(p) | SegmentIntersection::Touch(p) => {
                        out.push((i, j, p));
                    }
                    SegmentIntersection::Overlap(o) => {
                        out.push((i, j, o.a));
                        out.push((i, j, o.b));
                    }
                }
            }
            out
        })
        .collect();
    let mut hits = vec![Vec::new(); segs.len()];
    for (i, j, p) in found.into_iter().flatten() {
        hits[i].push(p);
        hits[j].push(p);
    }
    hits
}
