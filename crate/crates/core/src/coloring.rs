//! q-coloring by divide and conquer over clique separators, and a
//! brute-force checker.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::disk_graph::IntersectionGraph;
use crate::error::{Error, Result};
use crate::separator::separate_graph;

/// Largest instance the brute-force solver accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Subproblems of at most this many disks are colored by backtracking.
const BASE_SIZE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringResult {
    pub feasible: bool,
    /// Disk id to color in `1..=q`; empty when infeasible.
    pub assignment: BTreeMap<usize, usize>,
}

impl ColoringResult {
    fn infeasible() -> Self {
        ColoringResult {
            feasible: false,
            assignment: BTreeMap::new(),
        }
    }

    fn from_colors(g: &IntersectionGraph, colors: &[usize]) -> Self {
        ColoringResult {
            feasible: true,
            assignment: (0..g.len()).map(|i| (g.disk(i).id, colors[i])).collect(),
        }
    }
}

/// Partial coloring of the whole graph, by local index; zero is uncolored.
struct Search<'a> {
    g: &'a IntersectionGraph,
    q: usize,
    colors: Vec<usize>,
}

impl Search<'_> {
    fn allowed(&self, v: usize, c: usize) -> bool {
        self.g.neighbors(v).iter().all(|&w| self.colors[w] != c)
    }

    /// Backtracking over `order[k..]`, then `then` once all are colored.
    fn assign(&mut self, order: &[usize], k: usize, then: &mut dyn FnMut(&mut Self) -> Result<bool>) -> Result<bool> {
        if k == order.len() {
            return then(self);
        }
        let v = order[k];
        for c in 1..=self.q {
            if self.allowed(v, c) {
                self.colors[v] = c;
                if self.assign(order, k + 1, then)? {
                    return Ok(true);
                }
            }
        }
        self.colors[v] = 0;
        Ok(false)
    }

    /// Colors the disks `ids`, consistently with everything already colored.
    fn solve(&mut self, ids: &[usize], epsilon: f64) -> Result<bool> {
        let locals: Vec<usize> = ids.iter().map(|&id| self.g.local(id)).collect::<Result<_>>()?;
        if locals.len() <= BASE_SIZE {
            return self.assign(&locals, 0, &mut |_| Ok(true));
        }
        let sub = self.g.induced_by_ids(ids)?;
        let sep = separate_graph(&sub, epsilon)?;
        if sep.cliques.iter().any(|c| c.len() > self.q) {
            return Ok(false);
        }
        let order: Vec<usize> = sep
            .cliques
            .iter()
            .flat_map(|c| c.members())
            .map(|id| self.g.local(id))
            .collect::<Result<_>>()?;
        let (a, b) = (sep.a, sep.b);
        let solved = self.assign(&order, 0, &mut |s: &mut Self| {
            if !s.solve(&a, epsilon)? {
                return Ok(false);
            }
            if s.solve(&b, epsilon)? {
                return Ok(true);
            }
            for &id in &a {
                let v = s.g.local(id)?;
                s.colors[v] = 0;
            }
            Ok(false)
        })?;
        Ok(solved)
    }
}

/// Decides q-colorability by recursing over clique separators: a clique
/// larger than `q` is an immediate no, otherwise every proper coloring of
/// the separator is tried and both sides are colored consistently.
pub fn q_color_via_separator(g: &IntersectionGraph, q: usize, epsilon: f64) -> Result<ColoringResult> {
    crate::separator::rounds_for(epsilon)?;
    if g.is_empty() {
        return Ok(ColoringResult::from_colors(g, &[]));
    }
    if q == 0 {
        return Ok(ColoringResult::infeasible());
    }
    let mut s = Search {
        g,
        q,
        colors: vec![0; g.len()],
    };
    let ids = g.ids();
    if s.solve(&ids, epsilon)? {
        Ok(ColoringResult::from_colors(g, &s.colors))
    } else {
        Ok(ColoringResult::infeasible())
    }
}

/// Plain backtracking over all disks; at most [`BRUTE_FORCE_LIMIT`] disks.
pub fn brute_force_q_color(g: &IntersectionGraph, q: usize) -> Result<ColoringResult> {
    if g.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(g.len(), BRUTE_FORCE_LIMIT));
    }
    let mut s = Search {
        g,
        q,
        colors: vec![0; g.len()],
    };
    let order: Vec<usize> = (0..g.len()).collect();
    if s.assign(&order, 0, &mut |_| Ok(true))? {
        Ok(ColoringResult::from_colors(g, &s.colors))
    } else {
        Ok(ColoringResult::infeasible())
    }
}

/// Problems with a claimed coloring, checked edge by edge.
pub fn verify_coloring(g: &IntersectionGraph, q: usize, result: &ColoringResult) -> Vec<String> {
    let mut out = Vec::new();
    if !result.feasible {
        return out;
    }
    for i in 0..g.len() {
        let id = g.disk(i).id;
        match result.assignment.get(&id) {
            None => out.push(format!("disk {id} has no color")),
            Some(&c) if c == 0 || c > q => out.push(format!("disk {id} has color {c} outside 1..={q}")),
            _ => {}
        }
    }
    for (a, b) in g.edge_ids() {
        if let (Some(ca), Some(cb)) = (result.assignment.get(&a), result.assignment.get(&b)) {
            if ca == cb {
                out.push(format!("edge ({a}, {b}) is monochromatic"));
            }
        }
    }
    if result.assignment.len() != g.len() {
        out.push(format!("{} colors for {} disks", result.assignment.len(), g.len()));
    }
    out
}
