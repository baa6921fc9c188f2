//! Separator-tree hop-distance oracle with additive error at most one, and
//! the exact BFS oracle used as ground truth.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Add;

use crate::disk_graph::IntersectionGraph;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::separator::{separate_graph, Clique, CliqueSeparator, SeparatorStats};

/// Subproblems of at most this many disks become leaves with exact tables.
pub const LEAF_SIZE: usize = 8;

/// Hop count, or infinity for disconnected pairs. Sums saturate at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HopDistance(u32);

impl HopDistance {
    pub const INF: HopDistance = HopDistance(u32::MAX);
    pub const ZERO: HopDistance = HopDistance(0);

    pub fn new(hops: u32) -> Self {
        assert!(hops < u32::MAX, "hop count out of range");
        HopDistance(hops)
    }

    pub fn is_finite(self) -> bool {
        self.0 != u32::MAX
    }

    pub fn value(self) -> Option<u32> {
        self.is_finite().then_some(self.0)
    }
}

impl Add for HopDistance {
    type Output = HopDistance;

    fn add(self, other: HopDistance) -> HopDistance {
        if self.is_finite() && other.is_finite() {
            HopDistance(self.0 + other.0)
        } else {
            HopDistance::INF
        }
    }
}

impl fmt::Display for HopDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("INF"),
        }
    }
}

impl std::str::FromStr for HopDistance {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "INF" {
            return Ok(HopDistance::INF);
        }
        match s.parse::<u32>() {
            Ok(v) if v < u32::MAX => Ok(HopDistance(v)),
            _ => Err(format!("bad hop distance `{s}`")),
        }
    }
}

/// Multi-source BFS from `sources` (local indices) over `g`.
pub fn bfs_from(g: &IntersectionGraph, sources: &[usize]) -> Vec<HopDistance> {
    let mut dist = vec![HopDistance::INF; g.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] != HopDistance::ZERO {
            dist[s] = HopDistance::ZERO;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let next = HopDistance(dist[v].0 + 1);
        for &w in g.neighbors(v) {
            if dist[w] == HopDistance::INF {
                dist[w] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Plain BFS hop distance between two disk ids.
pub fn exact_hop_distance(g: &IntersectionGraph, i: usize, j: usize) -> Result<HopDistance> {
    let (a, b) = (g.local(i)?, g.local(j)?);
    Ok(bfs_from(g, &[a])[b])
}

/// Which part of a node's subproblem a disk belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Separator,
    A,
    B,
}

impl Side {
    fn code(self) -> &'static str {
        match self {
            Side::Separator => "S",
            Side::A => "A",
            Side::B => "B",
        }
    }
}

/// One node of the separator tree.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleNode {
    /// Disk ids of the subproblem, sorted.
    pub disks: Vec<usize>,
    /// Separator of the subproblem; `None` at leaves.
    pub separator: Option<CliqueSeparator>,
    /// Inner node: `table[r][k]` is the hop distance from `disks[r]` to
    /// clique `k` within the subproblem. Leaf: all pairwise distances.
    pub table: Vec<Vec<HopDistance>>,
    /// Side of every disk of the subproblem (inner nodes only).
    pub sides: Vec<Side>,
    /// Subtrees of the A and B parts, when nonempty.
    pub children: [Option<Box<OracleNode>>; 2],
}

impl OracleNode {
    pub fn is_leaf(&self) -> bool {
        self.separator.is_none()
    }

    fn row(&self, id: usize) -> Option<usize> {
        self.disks.binary_search(&id).ok()
    }

    fn clique_count(&self) -> usize {
        self.separator.as_ref().map_or(0, |s| s.cliques.len())
    }
}

/// Result of one query with the work it took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryTrace {
    pub value: HopDistance,
    pub lookups: usize,
    pub nodes: usize,
    /// Sum of the clique counts of the visited nodes.
    pub clique_budget: usize,
}

/// Recursive decomposition with per-node clique distance tables.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparatorTree {
    pub epsilon: f64,
    pub root: Option<OracleNode>,
}

fn leaf(g: &IntersectionGraph, disks: Vec<usize>, locals: &[usize]) -> OracleNode {
    let table = locals
        .iter()
        .map(|&a| {
            let d = bfs_from(g, &[a]);
            locals.iter().map(|&b| d[b]).collect()
        })
        .collect();
    OracleNode {
        disks,
        separator: None,
        table,
        sides: Vec::new(),
        children: [None, None],
    }
}

/// Subproblems below the root with at most [`LEAF_SIZE`] disks are leaves.
/// The root is separated whenever its separator has a clique, and is a
/// leaf otherwise if it is small.
fn build_node(g: &IntersectionGraph, epsilon: f64, is_root: bool) -> Result<OracleNode> {
    let mut disks = g.ids();
    disks.sort_unstable();
    let locals: Vec<usize> = disks.iter().map(|&id| g.local(id)).collect::<Result<_>>()?;
    if !is_root && disks.len() <= LEAF_SIZE {
        return Ok(leaf(g, disks, &locals));
    }
    let sep = separate_graph(g, epsilon)?;
    if is_root && disks.len() <= LEAF_SIZE && sep.cliques.is_empty() {
        return Ok(leaf(g, disks, &locals));
    }

    let columns: Vec<Vec<HopDistance>> = sep
        .cliques
        .iter()
        .map(|c| {
            let sources: Vec<usize> = c.members().iter().map(|&id| g.local(id)).collect::<Result<_>>()?;
            let d = bfs_from(g, &sources);
            Ok(locals.iter().map(|&v| d[v]).collect())
        })
        .collect::<Result<_>>()?;
    let table = (0..disks.len()).map(|r| columns.iter().map(|col| col[r]).collect()).collect();
    let mut sides = vec![Side::Separator; disks.len()];
    for (part, side) in [(&sep.a, Side::A), (&sep.b, Side::B)] {
        for id in part.iter() {
            let r = disks.binary_search(id).map_err(|_| Error::UnknownDisk(*id))?;
            sides[r] = side;
        }
    }
    let child = |part: &[usize]| -> Result<Option<Box<OracleNode>>> {
        if part.is_empty() {
            Ok(None)
        } else {
            Ok(Some(Box::new(build_node(&g.induced_by_ids(part)?, epsilon, false)?)))
        }
    };
    let (a, b) = rayon::join(|| child(&sep.a), || child(&sep.b));
    Ok(OracleNode {
        disks,
        separator: Some(sep),
        table,
        sides,
        children: [a?, b?],
    })
}

/// Builds the oracle: separate, fill clique tables by multi-source BFS,
/// and recurse into both sides down to leaves with exact tables.
pub fn build_separator_tree(g: &IntersectionGraph, epsilon: f64) -> Result<SeparatorTree> {
    crate::separator::rounds_for(epsilon)?;
    let root = if g.is_empty() { None } else { Some(build_node(g, epsilon, true)?) };
    Ok(SeparatorTree { epsilon, root })
}

impl SeparatorTree {
    fn nodes(&self) -> Vec<&OracleNode> {
        let mut out = Vec::new();
        let mut stack: Vec<&OracleNode> = self.root.iter().collect();
        while let Some(n) = stack.pop() {
            out.push(n);
            for c in n.children.iter().rev().flatten() {
                stack.push(c);
            }
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.nodes().len()
    }

    pub fn depth(&self) -> usize {
        fn depth(n: &OracleNode) -> usize {
            1 + n.children.iter().flatten().map(|c| depth(c)).max().unwrap_or(0)
        }
        self.root.as_ref().map_or(0, depth)
    }

    /// Entries of the clique tables: the sum over inner nodes of subproblem
    /// size times clique count.
    pub fn clique_entry_count(&self) -> usize {
        self.nodes().iter().map(|n| n.disks.len() * n.clique_count()).sum()
    }

    /// All stored entries, leaf tables included.
    pub fn entry_count(&self) -> usize {
        self.nodes().iter().map(|n| n.table.iter().map(Vec::len).sum::<usize>()).sum()
    }

    pub fn query(&self, i: usize, j: usize) -> Result<HopDistance> {
        Ok(self.query_traced(i, j)?.value)
    }

    /// Walks down from the root taking the minimum over every visited
    /// node's cliques of `hdist(i, C) + hdist(C, j)`, until `i` and `j`
    /// are split or one of them lies in the separator; leaves are exact.
    pub fn query_traced(&self, i: usize, j: usize) -> Result<QueryTrace> {
        let root = self.root.as_ref().ok_or(Error::UnknownDisk(i))?;
        let ri = root.row(i).ok_or(Error::UnknownDisk(i))?;
        let rj = root.row(j).ok_or(Error::UnknownDisk(j))?;
        let mut trace = QueryTrace {
            value: HopDistance::INF,
            lookups: 0,
            nodes: 0,
            clique_budget: 0,
        };
        let (mut node, mut ri, mut rj) = (root, ri, rj);
        loop {
            trace.nodes += 1;
            if node.is_leaf() {
                trace.lookups += 1;
                trace.value = trace.value.min(node.table[ri][rj]);
                return Ok(trace);
            }
            let k = node.clique_count();
            trace.clique_budget += k;
            for c in 0..k {
                trace.lookups += 2;
                trace.value = trace.value.min(node.table[ri][c] + node.table[rj][c]);
            }
            let (si, sj) = (node.sides[ri], node.sides[rj]);
            if si != sj || si == Side::Separator {
                return Ok(trace);
            }
            let slot = if si == Side::A { 0 } else { 1 };
            let child = node.children[slot].as_deref().expect("nonempty side has a subtree");
            ri = child.row(i).expect("side member is in the subtree");
            rj = child.row(j).expect("side member is in the subtree");
            node = child;
        }
    }
}

// Snapshot format, one record per line:
//
//   GDORACLE 1
//   EPSILON <eps>
//   NODES <count>
//   NODE <k> LEAF|INNER
//   DISKS <len> <ids...>
//   CLIQUES <count>                      (inner only)
//   CLIQUE POINT <x> <y> <len> <ids...>  or  CLIQUE SINGLE <id>
//   STATS <12 counters>                  (inner only)
//   SIDES <codes...>                     (inner only, one of S/A/B per disk)
//   TABLE <rows> <cols>
//   ROW <cols values, INF for unreachable> (one line per row)
//   CHILDREN <a|-> <b|->                 (inner only)
//   END
//
// Nodes are numbered in preorder, so children always follow their parent.

const MAGIC: &str = "GDORACLE 1";

fn stats_fields(s: &SeparatorStats) -> [usize; 12] {
    [
        s.n,
        s.ply_threshold,
        s.point_cliques,
        s.pruned,
        s.residual_disks,
        s.residual_edges,
        s.drawing_crossings,
        s.planarized_vertices,
        s.crossing_vertices,
        s.planar_separator,
        s.lifted,
        s.repair_rounds,
    ]
}

fn stats_from(f: &[usize]) -> SeparatorStats {
    SeparatorStats {
        n: f[0],
        ply_threshold: f[1],
        point_cliques: f[2],
        pruned: f[3],
        residual_disks: f[4],
        residual_edges: f[5],
        drawing_crossings: f[6],
        planarized_vertices: f[7],
        crossing_vertices: f[8],
        planar_separator: f[9],
        lifted: f[10],
        repair_rounds: f[11],
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

impl SeparatorTree {
    pub fn to_snapshot(&self) -> String {
        let nodes = self.nodes();
        let mut index = std::collections::HashMap::new();
        for (k, n) in nodes.iter().enumerate() {
            index.insert(*n as *const OracleNode, k);
        }
        let mut out = vec![MAGIC.to_string(), format!("EPSILON {}", self.epsilon), format!("NODES {}", nodes.len())];
        for (k, n) in nodes.iter().enumerate() {
            out.push(format!("NODE {k} {}", if n.is_leaf() { "LEAF" } else { "INNER" }));
            out.push(format!("DISKS {} {}", n.disks.len(), join(&n.disks)).trim_end().to_string());
            if let Some(sep) = &n.separator {
                out.push(format!("CLIQUES {}", sep.cliques.len()));
                for c in &sep.cliques {
                    out.push(match c {
                        Clique::PointClique { members, witness } => format!(
                            "CLIQUE POINT {} {} {} {}",
                            witness.x,
                            witness.y,
                            members.len(),
                            join(members)
                        ),
                        Clique::Singleton { member } => format!("CLIQUE SINGLE {member}"),
                    });
                }
                out.push(format!("STATS {}", join(stats_fields(&sep.stats))));
                out.push(format!("SIDES {}", join(n.sides.iter().map(|s| s.code()))).trim_end().to_string());
            }
            let cols = n.table.first().map_or(n.clique_count(), Vec::len);
            out.push(format!("TABLE {} {cols}", n.table.len()));
            for row in &n.table {
                out.push(format!("ROW {}", join(row)).trim_end().to_string());
            }
            if !n.is_leaf() {
                let name = |c: &Option<Box<OracleNode>>| {
                    c.as_deref()
                        .map_or("-".to_string(), |c| index[&(c as *const OracleNode)].to_string())
                };
                out.push(format!("CHILDREN {} {}", name(&n.children[0]), name(&n.children[1])));
            }
        }
        out.push("END".into());
        let mut s = out.join("\n");
        s.push('\n');
        s
    }

    pub fn from_snapshot(text: &str) -> Result<Self> {
        let mut r = Reader {
            lines: text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).collect(),
            pos: 0,
        };
        r.expect_line(MAGIC)?;
        let epsilon: f64 = r.keyword("EPSILON")?.parse_one()?;
        let count: usize = r.keyword("NODES")?.parse_one()?;
        let mut raw: Vec<(OracleNode, [Option<usize>; 2])> = Vec::with_capacity(count);
        for k in 0..count {
            let mut f = r.keyword("NODE")?;
            let idx: usize = f.next_parse()?;
            let kind = f.next_word()?;
            if idx != k {
                return Err(r.error(format!("expected node {k}, found {idx}")));
            }
            let leaf = match kind.as_str() {
                "LEAF" => true,
                "INNER" => false,
                other => return Err(r.error(format!("unknown node kind `{other}`"))),
            };
            let disks = r.keyword("DISKS")?.counted_list()?;
            let mut separator = None;
            let mut sides = Vec::new();
            if !leaf {
                let cc: usize = r.keyword("CLIQUES")?.parse_one()?;
                let mut cliques = Vec::with_capacity(cc);
                for _ in 0..cc {
                    let mut f = r.keyword("CLIQUE")?;
                    cliques.push(match f.next_word()?.as_str() {
                        "POINT" => {
                            let (x, y): (f64, f64) = (f.next_parse()?, f.next_parse()?);
                            let members = f.counted_list()?;
                            Clique::PointClique {
                                members,
                                witness: Point::new(x, y),
                            }
                        }
                        "SINGLE" => Clique::Singleton { member: f.parse_one()? },
                        other => return Err(r.error(format!("unknown clique kind `{other}`"))),
                    });
                }
                let stats: Vec<usize> = r.keyword("STATS")?.rest()?;
                if stats.len() != 12 {
                    return Err(r.error("STATS needs 12 counters".into()));
                }
                let f = r.keyword("SIDES")?;
                for w in f.words {
                    sides.push(match w {
                        "S" => Side::Separator,
                        "A" => Side::A,
                        "B" => Side::B,
                        other => return Err(r.error(format!("unknown side `{other}`"))),
                    });
                }
                if sides.len() != disks.len() {
                    return Err(r.error("SIDES length differs from DISKS".into()));
                }
                let pick = |s: Side| -> Vec<usize> {
                    disks.iter().zip(&sides).filter(|(_, &x)| x == s).map(|(&d, _)| d).collect()
                };
                separator = Some(CliqueSeparator {
                    cliques,
                    a: pick(Side::A),
                    b: pick(Side::B),
                    stats: stats_from(&stats),
                });
            }
            let mut f = r.keyword("TABLE")?;
            let (rows, cols): (usize, usize) = (f.next_parse()?, f.next_parse()?);
            let expected_cols = if leaf { disks.len() } else { separator.as_ref().unwrap().cliques.len() };
            if rows != disks.len() || cols != expected_cols {
                return Err(r.error(format!("table shape {rows}x{cols} does not match the node")));
            }
            let mut table = Vec::with_capacity(rows);
            for _ in 0..rows {
                let row: Vec<HopDistance> = r.keyword("ROW")?.rest()?;
                if row.len() != cols {
                    return Err(r.error(format!("expected {cols} table values")));
                }
                table.push(row);
            }
            let mut links = [None, None];
            if !leaf {
                let mut f = r.keyword("CHILDREN")?;
                for slot in &mut links {
                    let w = f.next_word()?;
                    if w != "-" {
                        let c: usize = w.parse().map_err(|_| r.error(format!("bad child `{w}`")))?;
                        if c <= k || c >= count {
                            return Err(r.error(format!("child {c} out of order")));
                        }
                        *slot = Some(c);
                    }
                }
            }
            raw.push((
                OracleNode {
                    disks,
                    separator,
                    table,
                    sides,
                    children: [None, None],
                },
                links,
            ));
        }
        r.expect_line("END")?;
        // Children follow their parents, so assemble from the back.
        let mut built: Vec<Option<OracleNode>> = vec![None; count];
        for k in (0..count).rev() {
            let (mut node, links) = raw.pop().expect("one raw node per index");
            for (slot, link) in links.iter().enumerate() {
                if let Some(c) = link {
                    let child = built[*c]
                        .take()
                        .ok_or_else(|| Error::Snapshot {
                            line: 0,
                            message: format!("node {c} has two parents"),
                        })?;
                    node.children[slot] = Some(Box::new(child));
                }
            }
            built[k] = Some(node);
        }
        if built.iter().skip(1).any(Option::is_some) {
            return Err(Error::Snapshot {
                line: 0,
                message: "some nodes are not reachable from the root".into(),
            });
        }
        Ok(SeparatorTree {
            epsilon,
            root: built.into_iter().next().flatten(),
        })
    }
}

struct Reader<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

struct Fields<'a> {
    line: usize,
    words: std::str::SplitWhitespace<'a>,
}

impl<'a> Reader<'a> {
    fn error(&self, message: String) -> Error {
        let line = self.lines.get(self.pos.saturating_sub(1)).map_or(0, |(n, _)| n + 1);
        Error::Snapshot { line, message }
    }

    fn next(&mut self) -> Result<(usize, &'a str)> {
        let item = self.lines.get(self.pos).copied().ok_or(Error::Snapshot {
            line: self.lines.last().map_or(0, |(n, _)| n + 1),
            message: "unexpected end of snapshot".into(),
        })?;
        self.pos += 1;
        Ok(item)
    }

    fn expect_line(&mut self, want: &str) -> Result<()> {
        let (_, l) = self.next()?;
        if l.trim() == want {
            Ok(())
        } else {
            Err(self.error(format!("expected `{want}`")))
        }
    }

    fn fields(&mut self) -> Result<Fields<'a>> {
        let (n, l) = self.next()?;
        Ok(Fields {
            line: n + 1,
            words: l.split_whitespace(),
        })
    }

    fn keyword(&mut self, key: &str) -> Result<Fields<'a>> {
        let mut f = self.fields()?;
        match f.words.next() {
            Some(w) if w == key => Ok(f),
            _ => Err(self.error(format!("expected `{key}` record"))),
        }
    }
}

impl Fields<'_> {
    fn error(&self, message: String) -> Error {
        Error::Snapshot {
            line: self.line,
            message,
        }
    }

    fn next_word(&mut self) -> Result<String> {
        self.words
            .next()
            .map(str::to_string)
            .ok_or_else(|| self.error("missing field".into()))
    }

    fn next_parse<T: std::str::FromStr>(&mut self) -> Result<T> {
        let w = self.next_word()?;
        w.parse().map_err(|_| self.error(format!("cannot parse `{w}`")))
    }

    fn parse_one<T: std::str::FromStr>(mut self) -> Result<T> {
        let v = self.next_parse()?;
        if self.words.next().is_some() {
            return Err(self.error("trailing fields".into()));
        }
        Ok(v)
    }

    fn rest<T: std::str::FromStr>(self) -> Result<Vec<T>> {
        let line = self.line;
        self.words
            .map(|w| {
                w.parse().map_err(|_| Error::Snapshot {
                    line,
                    message: format!("cannot parse `{w}`"),
                })
            })
            .collect()
    }

    fn counted_list(mut self) -> Result<Vec<usize>> {
        let len: usize = self.next_parse()?;
        let items: Vec<usize> = Fields {
            line: self.line,
            words: self.words,
        }
        .rest()?;
        if items.len() != len {
            return Err(Error::Snapshot {
                line: self.line,
                message: format!("expected {len} items, found {}", items.len()),
            });
        }
        Ok(items)
    }
}
