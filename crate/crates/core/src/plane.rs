//! Combinatorial plane graphs given by a rotation system.
//!
//! Edge `e` owns darts `2e` (from its first endpoint) and `2e + 1` (from its
//! second endpoint). Every dart knows the next dart counter-clockwise around
//! its tail.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneGraph {
    n: usize,
    /// Head vertex of every dart.
    head: Vec<usize>,
    /// Next dart counter-clockwise around the tail.
    ccw: Vec<usize>,
    /// Previous dart counter-clockwise around the tail.
    cw: Vec<usize>,
    /// Darts around every vertex in counter-clockwise order.
    rotation: Vec<Vec<usize>>,
}

impl PlaneGraph {
    /// Builds the graph from an edge list and, for every vertex, its darts in
    /// counter-clockwise order. Loops are rejected.
    pub fn from_rotation(n: usize, edges: &[(usize, usize)], rotation: Vec<Vec<usize>>) -> Result<Self> {
        if rotation.len() != n {
            return Err(Error::InvalidParameter("rotation system size mismatch".into()));
        }
        let mut head = Vec::with_capacity(2 * edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidParameter(format!("bad edge ({u}, {v})")));
            }
            head.push(v);
            head.push(u);
        }
        let darts = head.len();
        let mut ccw = vec![usize::MAX; darts];
        let mut cw = vec![usize::MAX; darts];
        for (v, rot) in rotation.iter().enumerate() {
            for (k, &d) in rot.iter().enumerate() {
                if d >= darts || head[d ^ 1] != v || ccw[d] != usize::MAX {
                    return Err(Error::InvalidParameter(format!("bad rotation at vertex {v}")));
                }
                let next = rot[(k + 1) % rot.len()];
                ccw[d] = next;
                cw[next] = d;
            }
        }
        if ccw.contains(&usize::MAX) {
            return Err(Error::InvalidParameter("dart missing from rotation".into()));
        }
        Ok(PlaneGraph {
            n,
            head,
            ccw,
            cw,
            rotation,
        })
    }

    /// Straight-line embedding: rotations are sorted by angle.
    pub fn from_positions(pos: &[(f64, f64)], edges: &[(usize, usize)]) -> Result<Self> {
        let n = pos.len();
        let mut rotation = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            rotation[u].push(2 * e);
            rotation[v].push(2 * e + 1);
        }
        let angle = |d: usize| {
            let (u, v) = if d.is_multiple_of(2) { edges[d / 2] } else { (edges[d / 2].1, edges[d / 2].0) };
            (pos[v].1 - pos[u].1).atan2(pos[v].0 - pos[u].0)
        };
        for rot in &mut rotation {
            rot.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
        }
        PlaneGraph::from_rotation(n, edges, rotation)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.head.len() / 2
    }

    pub fn dart_count(&self) -> usize {
        self.head.len()
    }

    pub fn head(&self, d: usize) -> usize {
        self.head[d]
    }

    pub fn tail(&self, d: usize) -> usize {
        self.head[d ^ 1]
    }

    pub fn twin(d: usize) -> usize {
        d ^ 1
    }

    pub fn next_ccw(&self, d: usize) -> usize {
        self.ccw[d]
    }

    pub fn next_cw(&self, d: usize) -> usize {
        self.cw[d]
    }

    /// Darts leaving `v` in counter-clockwise order.
    pub fn darts(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rotation[v].iter().map(move |&d| self.head[d])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.edge_count()).map(move |e| (self.head[2 * e + 1], self.head[2 * e]))
    }

    /// Next dart along the face to the left of `d`.
    pub fn face_next(&self, d: usize) -> usize {
        self.cw[d ^ 1]
    }

    /// Faces as dart cycles, and the face index of every dart.
    pub fn faces(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut face_of = vec![usize::MAX; self.dart_count()];
        let mut faces = Vec::new();
        for start in 0..self.dart_count() {
            if face_of[start] != usize::MAX {
                continue;
            }
            let mut cycle = Vec::new();
            let mut d = start;
            while face_of[d] == usize::MAX {
                face_of[d] = faces.len();
                cycle.push(d);
                d = self.face_next(d);
            }
            faces.push(cycle);
        }
        (faces, face_of)
    }

    /// Connected component label of every vertex and the component count.
    pub fn components(&self, removed: &[bool]) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX || removed.get(s).copied().unwrap_or(false) {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if comp[w] == usize::MAX && !removed.get(w).copied().unwrap_or(false) {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// Whether the rotation system describes a genus-zero embedding: every
    /// component with at least one edge satisfies `V - E + F = 2`.
    pub fn is_planar_embedding(&self) -> bool {
        let (comp, count) = self.components(&[]);
        let (faces, _) = self.faces();
        let mut v = vec![0i64; count];
        let mut e = vec![0i64; count];
        let mut f = vec![0i64; count];
        for x in 0..self.n {
            v[comp[x]] += 1;
        }
        for (a, _) in self.edges() {
            e[comp[a]] += 1;
        }
        for face in &faces {
            f[comp[self.tail(face[0])]] += 1;
        }
        (0..count).all(|c| e[c] == 0 || v[c] - e[c] + f[c] == 2)
    }

    /// Fails with [`Error::NonPlanar`] unless the embedding has genus zero.
    pub fn check_planar(&self) -> Result<()> {
        if self.is_planar_embedding() {
            Ok(())
        } else {
            Err(Error::NonPlanar)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_diagonal() {
        let pos = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)];
        let g = PlaneGraph::from_positions(&pos, &edges).unwrap();
        assert!(g.is_planar_embedding());
        assert_eq!(g.faces().0.len(), 3);
    }

    #[test]
    fn k4_with_twisted_rotation_is_not_planar() {
        // K4 drawn with one vertex's rotation reversed has genus one.
        let pos = [(0.0, 0.0), (4.0, 0.0), (2.0, 4.0), (2.0, 1.0)];
        let edges = [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)];
        let g = PlaneGraph::from_positions(&pos, &edges).unwrap();
        assert!(g.is_planar_embedding());
        let mut rot: Vec<Vec<usize>> = (0..4).map(|v| g.darts(v).to_vec()).collect();
        rot[3].swap(0, 1);
        let bad = PlaneGraph::from_rotation(4, &edges, rot).unwrap();
        assert!(!bad.is_planar_embedding());
        assert!(matches!(bad.check_planar(), Err(Error::NonPlanar)));
    }

    #[test]
    fn isolated_vertices_are_fine() {
        let g = PlaneGraph::from_rotation(3, &[], vec![vec![]; 3]).unwrap();
        assert!(g.is_planar_embedding());
        assert_eq!(g.components(&[]).1, 3);
    }
}
