//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Every check compares library output against an oracle written here,
//! independently of the library internals. The scaling criterion is soft:
//! it is reported but never fails the run.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};
use std::process::ExitCode;
use std::time::Instant;

use geodisk::bench::{run_bench, slope_reports, BenchSpec};
use geodisk::coloring::{brute_force_q_color, q_color_via_separator, ColoringResult};
use geodisk::drawing::{planarize, realize_drawing, verify_planarization, PlanarizedGraph, VertexKind};
use geodisk::instance::{generate_instance, preset, GeneratorParams, Instance};
use geodisk::oracle::build_separator_tree;
use geodisk::separator::{compute_schedule, separate_graph, verify_separator, Clique, Rational, Schedule};
use geodisk::{build_intersection_graph, disks_intersect, GeodesicDisk, IntersectionGraph, Point, VisibilityGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    name: &'static str,
    pass: bool,
    soft: bool,
    detail: String,
}

fn graph_of(inst: &Instance) -> IntersectionGraph {
    build_intersection_graph(&inst.free_space, &inst.disks).expect("instance builds").1
}

/// The separator suite: sizes spread over [20, 300], 0 to 5 holes, and the
/// three epsilons in rotation.
fn suite() -> Vec<(Instance, f64)> {
    const EPS: [f64; 3] = [0.5, 0.25, 0.125];
    (0..100u64)
        .map(|i| {
            let n = 20 + (i as usize * 37) % 281;
            let holes = i as usize % 6;
            let inst = generate_instance(&GeneratorParams::family(n, holes, 1000 + i)).expect("generator");
            (inst, EPS[i as usize % 3])
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Separator soundness

fn check_separator_independently(g: &IntersectionGraph, sep: &geodisk::separator::CliqueSeparator) -> Vec<String> {
    let mut out = Vec::new();
    let all: HashSet<usize> = g.ids().into_iter().collect();
    let s: Vec<usize> = sep.cliques.iter().flat_map(|c| c.members()).collect();
    let mut seen = HashSet::new();
    for &id in s.iter().chain(&sep.a).chain(&sep.b) {
        if !all.contains(&id) || !seen.insert(id) {
            out.push(format!("disk {id} unknown or repeated"));
        }
    }
    if seen.len() != all.len() {
        out.push("parts do not cover every disk".into());
    }
    let a: HashSet<usize> = sep.a.iter().copied().collect();
    let b: HashSet<usize> = sep.b.iter().copied().collect();
    for (u, v) in g.edge_ids() {
        if (a.contains(&u) && b.contains(&v)) || (b.contains(&u) && a.contains(&v)) {
            out.push(format!("edge ({u}, {v}) joins the sides"));
        }
    }
    for c in &sep.cliques {
        let m = c.members();
        for (x, &p) in m.iter().enumerate() {
            for &q in &m[x + 1..] {
                if !g.has_edge(g.local(p).unwrap(), g.local(q).unwrap()) {
                    out.push(format!("clique members {p} and {q} are not adjacent"));
                }
            }
        }
        if let Clique::PointClique { members, witness } = c {
            for &id in members {
                let l = g.local(id).unwrap();
                let d = g.distance_to_center(*witness, l).unwrap();
                if d > g.disk(l).radius + 1e-9 {
                    out.push(format!("witness outside disk {id}"));
                }
            }
        }
    }
    let bound = (2 * g.len()).div_ceil(3);
    if sep.a.len().max(sep.b.len()) > bound {
        out.push("unbalanced".into());
    }
    out
}

fn separator_soundness(suite: &[(Instance, f64)]) -> Outcome {
    let start = Instant::now();
    let results: Vec<(usize, usize, usize)> = suite
        .par_iter()
        .map(|(inst, eps)| {
            let g = graph_of(inst);
            let sep = separate_graph(&g, *eps).expect("separator");
            let lib = verify_separator(&g, &sep).expect("verifier").len();
            let own = check_separator_independently(&g, &sep).len();
            (lib, own, sep.cliques.len())
        })
        .collect();
    let bad = results.iter().filter(|r| r.0 + r.1 > 0).count();
    let max_cliques = results.iter().map(|r| r.2).max().unwrap_or(0);
    Outcome {
        name: "separator soundness",
        pass: bad == 0,
        soft: false,
        detail: format!(
            "{} instances, {bad} with violations, largest separator {max_cliques} cliques, {:.1}s",
            results.len(),
            start.elapsed().as_secs_f64()
        ),
    }
}

// ---------------------------------------------------------------------------
// Schedule exactness

fn schedule_exactness() -> Outcome {
    let r = |n, d| Rational::new(n, d);
    let one = Rational::from_integer(1);
    let mut problems = Vec::new();
    for k in 1..=20u32 {
        let s = Schedule::with_rounds(k, 0.0).expect("schedule");
        let a = &s.alphas;
        let target = one - a[0];
        if a.len() != k as usize {
            problems.push(format!("k={k}: {} exponents", a.len()));
            continue;
        }
        if k == 1 {
            // With no pruning round the drawing keeps all its edges.
            if (r(3, 1) + a[0]) / 4 != target {
                problems.push("k=1: balance equation".into());
            }
        } else {
            if (r(3, 1) + a[0]) / 2 - a[1] != target {
                problems.push(format!("k={k}: first pruning equation"));
            }
            for i in 1..a.len() - 1 {
                if one + (a[0] + a[i]) / 2 - a[i + 1] != target {
                    problems.push(format!("k={k}: pruning equation {i}"));
                }
            }
            if (r(2, 1) + a[0] + a[a.len() - 1]) / 4 != target {
                problems.push(format!("k={k}: final separator equation"));
            }
            if a.windows(2).skip(1).any(|w| w[1] >= w[0]) || a[1] >= one {
                problems.push(format!("k={k}: degree exponents not decreasing"));
            }
        }
        let eps = 0.5f64.powi(k as i32);
        let c = compute_schedule(eps).expect("schedule");
        if c.k != k || geodisk::separator::to_f64(&c.exponent) > 0.75 + eps {
            problems.push(format!("k={k}: epsilon {eps} maps to {} rounds", c.k));
        }
    }
    let half = compute_schedule(0.5).unwrap();
    let quarter = compute_schedule(0.25).unwrap();
    if half.alphas != vec![r(1, 5)] || half.exponent != r(4, 5) {
        problems.push("epsilon 1/2 does not give alpha 1/5, exponent 4/5".into());
    }
    if quarter.alphas != vec![r(3, 13), r(11, 13)] || quarter.exponent != r(10, 13) {
        problems.push("epsilon 1/4 does not give (3/13, 11/13), exponent 10/13".into());
    }
    Outcome {
        name: "schedule exactness",
        pass: problems.is_empty(),
        soft: false,
        detail: if problems.is_empty() {
            "k = 1..20 exact; 1/5 -> 4/5 and (3/13, 11/13) -> 10/13 reproduced".into()
        } else {
            problems.join("; ")
        },
    }
}

// ---------------------------------------------------------------------------
// Oracle additive error

fn bfs(n: usize, adj: &[Vec<usize>], s: usize) -> Vec<Option<u32>> {
    let mut d = vec![None; n];
    d[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        let du = d[u].unwrap();
        for &w in &adj[u] {
            if d[w].is_none() {
                d[w] = Some(du + 1);
                q.push_back(w);
            }
        }
    }
    d
}

fn oracle_additive_error() -> Outcome {
    const EPS: [f64; 3] = [0.5, 0.25, 0.125];
    let rows: Vec<(usize, usize, usize)> = (0..30u64)
        .into_par_iter()
        .map(|i| {
            let n = 10 + (i as usize * 53) % 191;
            let mut p = GeneratorParams::family(n, i as usize % 4, 2000 + i);
            // Mostly connected instances, with a sparse one in five.
            p.radius = if i % 5 == 0 { (2.0, 4.0) } else { (4.0, 8.0) };
            let g = graph_of(&generate_instance(&p).unwrap());
            let tree = build_separator_tree(&g, EPS[i as usize % 3]).expect("oracle");
            let ids = g.ids();
            let index: HashMap<usize, usize> = ids.iter().enumerate().map(|(k, &id)| (id, k)).collect();
            let mut adj = vec![Vec::new(); ids.len()];
            for (a, b) in g.edge_ids() {
                adj[index[&a]].push(index[&b]);
                adj[index[&b]].push(index[&a]);
            }
            let (mut violations, mut disconnected) = (0, 0);
            for s in 0..ids.len() {
                let exact = bfs(ids.len(), &adj, s);
                for t in 0..ids.len() {
                    let est = tree.query(ids[s], ids[t]).unwrap().value();
                    let ok = match (exact[t], est) {
                        (Some(e), Some(d)) => d <= e && e <= d + 1,
                        (None, None) => {
                            disconnected += 1;
                            true
                        }
                        _ => false,
                    };
                    violations += usize::from(!ok);
                }
            }
            (ids.len() * ids.len(), violations, disconnected)
        })
        .collect();
    let pairs: usize = rows.iter().map(|r| r.0).sum();
    let bad: usize = rows.iter().map(|r| r.1).sum();
    let disc: usize = rows.iter().map(|r| r.2).sum();
    Outcome {
        name: "oracle additive error",
        pass: bad == 0,
        soft: false,
        detail: format!("30 instances, {pairs} pairs ({disc} disconnected), {bad} violations"),
    }
}

// ---------------------------------------------------------------------------
// Metric correctness against a lattice graph

/// Axis-parallel rectangles, as the generator and the presets produce.
#[derive(Clone, Copy, Debug)]
struct Rect {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Rect {
    fn of(ring: &[Point]) -> Rect {
        let xs = ring.iter().map(|p| p.x);
        let ys = ring.iter().map(|p| p.y);
        Rect {
            x0: xs.clone().fold(f64::INFINITY, f64::min),
            x1: xs.fold(f64::NEG_INFINITY, f64::max),
            y0: ys.clone().fold(f64::INFINITY, f64::min),
            y1: ys.fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn strictly_contains(&self, p: Point) -> bool {
        const T: f64 = 1e-9;
        p.x > self.x0 + T && p.x < self.x1 - T && p.y > self.y0 + T && p.y < self.y1 - T
    }

    /// Whether the segment enters the open interior.
    fn blocks(&self, a: Point, b: Point) -> bool {
        const T: f64 = 1e-9;
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        for (p, d, lo, hi) in [(a.x, b.x - a.x, self.x0 + T, self.x1 - T), (a.y, b.y - a.y, self.y0 + T, self.y1 - T)] {
            if d == 0.0 {
                if p <= lo || p >= hi {
                    return false;
                }
            } else {
                let (u, v) = ((lo - p) / d, (hi - p) / d);
                t0 = t0.max(u.min(v));
                t1 = t1.min(u.max(v));
            }
        }
        t1 - t0 > 1e-12
    }
}

struct Lattice {
    outer: Rect,
    holes: Vec<Rect>,
    corners: Vec<Point>,
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0)
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

const STENCIL: i64 = 6;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Lattice {
    fn new(inst: &Instance) -> Lattice {
        let holes: Vec<Rect> = inst.free_space.holes().iter().map(|h| Rect::of(h)).collect();
        Lattice {
            outer: Rect::of(inst.free_space.outer()),
            corners: inst.free_space.holes().iter().flatten().copied().collect(),
            holes,
        }
    }

    fn free(&self, p: Point) -> bool {
        p.x >= self.outer.x0 && p.x <= self.outer.x1 && p.y >= self.outer.y0 && p.y <= self.outer.y1
            && !self.holes.iter().any(|h| h.strictly_contains(p))
    }

    fn visible(&self, a: Point, b: Point) -> bool {
        !self.holes.iter().any(|h| h.blocks(a, b))
    }

    /// Shortest path from `s` to `t` in the lattice of `cells` per side,
    /// with the coprime stencil and the hole corners, `s` and `t` attached
    /// to every lattice or extra node within stencil range.
    fn distance(&self, s: Point, t: Point, cells: i64) -> f64 {
        let (w, h) = (self.outer.x1 - self.outer.x0, self.outer.y1 - self.outer.y0);
        let step = w.max(h) / cells as f64;
        let (nx, ny) = ((w / step).round() as i64 + 1, (h / step).round() as i64 + 1);
        let lattice = (nx * ny) as usize;
        let pos = |k: usize| -> Point {
            if k < lattice {
                let (i, j) = (k as i64 % nx, k as i64 / nx);
                Point::new(self.outer.x0 + i as f64 * step, self.outer.y0 + j as f64 * step)
            } else if k - lattice < self.corners.len() {
                self.corners[k - lattice]
            } else if k - lattice == self.corners.len() {
                s
            } else {
                t
            }
        };
        let extra: Vec<usize> = (lattice..lattice + self.corners.len() + 2).collect();
        let target = lattice + self.corners.len() + 1;
        let range = STENCIL as f64 * step;
        // Links between extra nodes and every node within range.
        let mut links: HashMap<usize, Vec<usize>> = HashMap::new();
        for &e in &extra {
            let p = pos(e);
            let (ci, cj) = (((p.x - self.outer.x0) / step).floor() as i64, ((p.y - self.outer.y0) / step).floor() as i64);
            for j in (cj - STENCIL).max(0)..=(cj + STENCIL + 1).min(ny - 1) {
                for i in (ci - STENCIL).max(0)..=(ci + STENCIL + 1).min(nx - 1) {
                    let k = (j * nx + i) as usize;
                    let q = pos(k);
                    if q.dist(p) <= range && self.free(q) && self.visible(p, q) {
                        links.entry(e).or_default().push(k);
                        links.entry(k).or_default().push(e);
                    }
                }
            }
            for &f in &extra {
                if f != e && pos(f).dist(p) <= range && self.visible(p, pos(f)) {
                    links.entry(e).or_default().push(f);
                }
            }
        }
        let stencil: Vec<(i64, i64)> = (-STENCIL..=STENCIL)
            .flat_map(|dx| (-STENCIL..=STENCIL).map(move |dy| (dx, dy)))
            .filter(|&(dx, dy)| gcd(dx, dy) == 1)
            .collect();
        let total = target + 1;
        let mut dist = vec![f64::INFINITY; total];
        let source = target - 1;
        dist[source] = 0.0;
        let mut heap = BinaryHeap::from([Item(0.0, source)]);
        while let Some(Item(d, u)) = heap.pop() {
            if u == target {
                return d;
            }
            if d > dist[u] {
                continue;
            }
            let pu = pos(u);
            let mut relax = |v: usize, heap: &mut BinaryHeap<Item>| {
                let nd = d + pu.dist(pos(v));
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Item(nd, v));
                }
            };
            if u < lattice {
                let (i, j) = (u as i64 % nx, u as i64 / nx);
                for &(dx, dy) in &stencil {
                    let (a, b) = (i + dx, j + dy);
                    if a < 0 || b < 0 || a >= nx || b >= ny {
                        continue;
                    }
                    let v = (b * nx + a) as usize;
                    if self.free(pos(v)) && self.visible(pu, pos(v)) {
                        relax(v, &mut heap);
                    }
                }
            }
            if let Some(vs) = links.get(&u) {
                for &v in vs {
                    relax(v, &mut heap);
                }
            }
        }
        f64::INFINITY
    }

    /// Refines the lattice until two successive answers agree within 0.2%.
    fn refined_distance(&self, s: Point, t: Point) -> f64 {
        let mut prev = self.distance(s, t, 40);
        for cells in [80, 160] {
            let next = self.distance(s, t, cells);
            if (prev - next).abs() <= 2e-3 * next {
                return next;
            }
            prev = next;
        }
        prev
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Point {
        loop {
            let p = Point::new(rng.gen_range(self.outer.x0..self.outer.x1), rng.gen_range(self.outer.y0..self.outer.y1));
            if self.free(p) {
                return p;
            }
        }
    }
}

fn metric_correctness() -> Outcome {
    let mut problems = Vec::new();

    // Worked values in the holed preset, from the unfolded path around the hole.
    let holed = preset("holed", 0).unwrap();
    let vg = VisibilityGraph::build(&holed.free_space, &[]).unwrap();
    let cases = [
        ((2.0, 5.0), (8.0, 5.0), 2.0 + 2.0 * 5f64.sqrt()),
        ((1.0, 1.0), (9.0, 9.0), 2.0 * 34f64.sqrt()),
    ];
    for ((a, b), (c, d), want) in cases {
        let got = vg.distance_between(Point::new(a, b), Point::new(c, d)).unwrap();
        if (got - want).abs() > 1e-9 {
            problems.push(format!("holed preset: {got} instead of {want}"));
        }
    }

    // Lattice oracle on holed instances, 50 queries each.
    let instances: Vec<Instance> = (0..6u64)
        .map(|i| generate_instance(&GeneratorParams::family(12, 1 + i as usize % 5, 3000 + i)).unwrap())
        .collect();
    let errors: Vec<(f64, bool)> = instances
        .par_iter()
        .enumerate()
        .flat_map(|(i, inst)| {
            let lat = Lattice::new(inst);
            let vg = VisibilityGraph::build(&inst.free_space, &[]).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
            let pairs: Vec<(Point, Point)> = (0..50).map(|_| (lat.sample(&mut rng), lat.sample(&mut rng))).collect();
            pairs
                .into_par_iter()
                .map(|(s, t)| {
                    let d = vg.distance_between(s, t).unwrap();
                    let grid = lat.refined_distance(s, t);
                    // Lattice paths are free-space paths, so they never undercut.
                    ((grid - d) / d.max(1e-12), grid >= d - 1e-6 * d.max(1.0))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let worst = errors.iter().map(|e| e.0).fold(0.0, f64::max);
    let undercut = errors.iter().filter(|e| !e.1).count();
    if worst > 0.01 || undercut > 0 {
        problems.push(format!("lattice disagreement {:.3}%, {undercut} undercuts", 100.0 * worst));
    }

    // No holes: straight-line distances.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let open = generate_instance(&GeneratorParams::family(30, 0, 4000)).unwrap();
    let vo = VisibilityGraph::build(&open.free_space, &[]).unwrap();
    let side = open.free_space.bounds().1.x;
    let mut euclid = 0.0f64;
    for _ in 0..200 {
        let a = Point::new(rng.gen_range(0.0..side), rng.gen_range(0.0..side));
        let b = Point::new(rng.gen_range(0.0..side), rng.gen_range(0.0..side));
        euclid = euclid.max((vo.distance_between(a, b).unwrap() - a.dist(b)).abs());
    }
    if euclid > 1e-9 {
        problems.push(format!("euclidean deviation {euclid:e}"));
    }

    // Axioms on 1000 triples in a holed instance.
    let inst = &instances[4];
    let lat = Lattice::new(inst);
    let vg = VisibilityGraph::build(&inst.free_space, &[]).unwrap();
    let mut axiom_failures = 0;
    for _ in 0..1000 {
        let (a, b, c) = (lat.sample(&mut rng), lat.sample(&mut rng), lat.sample(&mut rng));
        let ab = vg.distance_between(a, b).unwrap();
        let ba = vg.distance_between(b, a).unwrap();
        let bc = vg.distance_between(b, c).unwrap();
        let ac = vg.distance_between(a, c).unwrap();
        if (ab - ba).abs() > 1e-9 || ac > ab + bc + 1e-9 || ab < 0.0 {
            axiom_failures += 1;
        }
    }
    if axiom_failures > 0 {
        problems.push(format!("{axiom_failures} triples break the axioms"));
    }
    Outcome {
        name: "metric correctness",
        pass: problems.is_empty(),
        soft: false,
        detail: if problems.is_empty() {
            format!(
                "{} lattice queries within {:.3}%, euclidean within {euclid:.1e}, 1000 triples ok",
                errors.len(),
                100.0 * worst
            )
        } else {
            problems.join("; ")
        },
    }
}

// ---------------------------------------------------------------------------
// Intersection test against dense sampling

/// Sampling spacing of the membership search.
const SPACING: f64 = 0.1;

/// Searches the free space on a grid of `SPACING` for a point within
/// `r + slack` of both centers.
fn common_sample(vg: &VisibilityGraph, lat: &Lattice, a: (Point, f64), b: (Point, f64), slack: f64) -> bool {
    let x0 = (a.0.x - a.1).max(b.0.x - b.1) - slack;
    let x1 = (a.0.x + a.1).min(b.0.x + b.1) + slack;
    let y0 = (a.0.y - a.1).max(b.0.y - b.1) - slack;
    let y1 = (a.0.y + a.1).min(b.0.y + b.1) + slack;
    if x0 > x1 || y0 > y1 {
        return false;
    }
    let (nx, ny) = (((x1 - x0) / SPACING).ceil() as usize, ((y1 - y0) / SPACING).ceil() as usize);
    (0..=nx).any(|i| {
        (0..=ny).any(|j| {
            let q = Point::new(x0 + i as f64 * SPACING, y0 + j as f64 * SPACING);
            if !lat.free(q) || q.dist(a.0) > a.1 + slack || q.dist(b.0) > b.1 + slack {
                return false;
            }
            vg.distance_between(q, a.0).unwrap() <= a.1 + slack && vg.distance_between(q, b.0).unwrap() <= b.1 + slack
        })
    })
}

fn intersection_equivalence() -> Outcome {
    let cases: Vec<(usize, bool, bool)> = (0..200usize)
        .into_par_iter()
        .map(|k| {
            let inst = generate_instance(&GeneratorParams::family(16, 1 + k % 5, 5000 + (k / 20) as u64)).unwrap();
            let lat = Lattice::new(&inst);
            let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
            let ca = lat.sample(&mut rng);
            let cb = loop {
                let p = lat.sample(&mut rng);
                if p.dist(ca) < 16.0 {
                    break p;
                }
            };
            let perturb = |r: f64, rng: &mut ChaCha8Rng| r + if rng.gen_bool(0.5) { 1e-6 } else { -1e-6 };
            let ra = perturb(rng.gen_range(1.0..7.0), &mut rng);
            let rb = perturb(rng.gen_range(1.0..7.0), &mut rng);
            let vg = VisibilityGraph::build(&inst.free_space, &[ca, cb]).unwrap();
            let claim = disks_intersect(&vg, &GeodesicDisk::new(1, ca, ra), &GeodesicDisk::new(2, cb, rb)).unwrap();
            // A common point lies within SPACING of some sample point, so
            // a true claim must be confirmed with that slack; a false claim
            // must not be contradicted even at the exact radii.
            let agrees = if claim {
                common_sample(&vg, &lat, (ca, ra), (cb, rb), SPACING)
            } else {
                !common_sample(&vg, &lat, (ca, ra), (cb, rb), 0.0)
            };
            let decisive = if claim {
                common_sample(&vg, &lat, (ca, ra), (cb, rb), 0.0)
            } else {
                !common_sample(&vg, &lat, (ca, ra), (cb, rb), SPACING)
            };
            (usize::from(claim), agrees, decisive)
        })
        .collect();
    let positives: usize = cases.iter().map(|c| c.0).sum();
    let bad = cases.iter().filter(|c| !c.1).count();
    let decisive = cases.iter().filter(|c| c.2).count();
    Outcome {
        name: "intersection test equivalence",
        pass: bad == 0,
        soft: false,
        detail: format!(
            "200 pairs ({positives} intersecting), {bad} disagreements, {decisive} decided without slack"
        ),
    }
}

// ---------------------------------------------------------------------------
// Coloring agreement

fn exhaustive_colorable(n: usize, adj: &[Vec<usize>], q: usize) -> bool {
    fn go(v: usize, adj: &[Vec<usize>], q: usize, col: &mut Vec<usize>) -> bool {
        if v == col.len() {
            return true;
        }
        for c in 1..=q {
            if adj[v].iter().all(|&w| w >= v || col[w] != c) {
                col[v] = c;
                if go(v + 1, adj, q, col) {
                    return true;
                }
            }
        }
        col[v] = 0;
        false
    }
    go(0, adj, q, &mut vec![0; n])
}

fn proper(g: &IntersectionGraph, q: usize, r: &ColoringResult) -> bool {
    !r.feasible
        || (r.assignment.len() == g.len()
            && g.ids().iter().all(|id| r.assignment.get(id).is_some_and(|&c| (1..=q).contains(&c)))
            && g.edge_ids().iter().all(|(a, b)| r.assignment[a] != r.assignment[b]))
}

fn coloring_agreement() -> Outcome {
    let mut instances: Vec<Instance> = ["chain", "cluster", "triangle", "star", "cycle5", "holed"]
        .iter()
        .map(|name| preset(name, 7).unwrap())
        .collect();
    for seed in 0..40u64 {
        let mut p = GeneratorParams::family(5 + seed as usize % 10, seed as usize % 3, 6000 + seed);
        p.radius = (3.0, 7.0);
        instances.push(generate_instance(&p).unwrap());
    }
    let rows: Vec<(usize, usize, usize)> = instances
        .par_iter()
        .map(|inst| {
            let g = graph_of(inst);
            let ids = g.ids();
            let index: HashMap<usize, usize> = ids.iter().enumerate().map(|(k, &id)| (id, k)).collect();
            let mut adj = vec![Vec::new(); ids.len()];
            for (a, b) in g.edge_ids() {
                adj[index[&a]].push(index[&b]);
                adj[index[&b]].push(index[&a]);
            }
            let (mut disagree, mut improper, mut feasible) = (0, 0, 0);
            for q in 2..=4 {
                let truth = exhaustive_colorable(ids.len(), &adj, q);
                let sep = q_color_via_separator(&g, q, 0.25).unwrap();
                let brute = brute_force_q_color(&g, q).unwrap();
                disagree += usize::from(sep.feasible != truth || brute.feasible != truth);
                improper += usize::from(!proper(&g, q, &sep) || !proper(&g, q, &brute));
                feasible += usize::from(truth);
            }
            (disagree, improper, feasible)
        })
        .collect();
    let disagree: usize = rows.iter().map(|r| r.0).sum();
    let improper: usize = rows.iter().map(|r| r.1).sum();
    let feasible: usize = rows.iter().map(|r| r.2).sum();
    Outcome {
        name: "coloring agreement",
        pass: disagree == 0 && improper == 0,
        soft: false,
        detail: format!(
            "{} instances x q in 2..=4 ({feasible} colorable), {disagree} disagreements, {improper} improper assignments",
            instances.len()
        ),
    }
}

// ---------------------------------------------------------------------------
// Planarization validity

/// Genus zero by face tracing around heads, component by component.
fn genus_zero(pg: &PlanarizedGraph) -> bool {
    let g = &pg.graph;
    let n = g.vertex_count();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while c[r] != r {
            r = c[r];
        }
        c[x] = r;
        r
    }
    for (u, v) in g.edges() {
        let (a, b) = (find(&mut comp, u), find(&mut comp, v));
        comp[a] = b;
    }
    let mut euler: HashMap<usize, i64> = HashMap::new();
    let mut has_edge = HashSet::new();
    for v in 0..n {
        *euler.entry(find(&mut comp, v)).or_default() += 1;
    }
    for (u, _) in g.edges() {
        let c = find(&mut comp, u);
        *euler.entry(c).or_default() -= 1;
        has_edge.insert(c);
    }
    let mut seen = vec![false; g.dart_count()];
    for d0 in 0..g.dart_count() {
        if seen[d0] {
            continue;
        }
        let c = find(&mut comp, g.tail(d0));
        *euler.entry(c).or_default() += 1;
        let mut d = d0;
        while !seen[d] {
            seen[d] = true;
            d = g.next_ccw(geodisk::plane::PlaneGraph::twin(d));
        }
    }
    has_edge.iter().all(|c| euler[c] == 2)
}

fn planarization_validity(suite: &[(Instance, f64)]) -> Outcome {
    let rows: Vec<(usize, usize, usize, usize)> = suite
        .par_iter()
        .map(|(inst, _)| {
            let g = graph_of(inst);
            let drawing = realize_drawing(&g);
            let pg = planarize(&drawing).expect("planarization");
            let mut problems = verify_planarization(&drawing, &pg).len();
            problems += usize::from(!genus_zero(&pg));
            let crossings = pg.kinds.iter().filter(|k| matches!(k, VertexKind::Crossing { .. })).count();
            for (v, k) in pg.kinds.iter().enumerate() {
                if let VertexKind::Crossing { paths, .. } = k {
                    let mut own = pg.owner_paths[v].clone();
                    own.sort_unstable();
                    problems += usize::from(own != vec![paths.0.min(paths.1), paths.0.max(paths.1)] || paths.0 == paths.1);
                }
            }
            let adjacent: HashSet<(usize, usize)> = pg.graph.edges().flat_map(|(u, v)| [(u, v), (v, u)]).collect();
            for (p, dp) in drawing.paths.iter().enumerate() {
                let seq = &pg.path_vertices[p];
                let ends = seq.first() == Some(&dp.disks.0) && seq.last() == Some(&dp.disks.1);
                let linked = seq.windows(2).all(|w| adjacent.contains(&(w[0], w[1])));
                let owned = seq.len() >= 2 && seq[1..seq.len() - 1].iter().all(|&v| pg.owner_paths[v].contains(&p));
                problems += usize::from(!(ends && linked && owned));
            }
            (problems, crossings, pg.vertex_count(), drawing.paths.len())
        })
        .collect();
    let bad = rows.iter().filter(|r| r.0 > 0).count();
    let crossings: usize = rows.iter().map(|r| r.1).sum();
    let paths: usize = rows.iter().map(|r| r.3).sum();
    let largest = rows.iter().map(|r| r.2).max().unwrap_or(0);
    Outcome {
        name: "planarization validity",
        pass: bad == 0,
        soft: false,
        detail: format!(
            "{} drawings, {paths} paths, {crossings} crossing vertices, largest plane graph {largest} vertices, {bad} invalid",
            rows.len()
        ),
    }
}

// ---------------------------------------------------------------------------
// Empirical scaling

fn empirical_scaling() -> Vec<Outcome> {
    let spec = BenchSpec {
        family: "random".into(),
        sizes: vec![50, 100, 200, 400, 800],
        holes: 2,
        seeds: vec![1, 2, 3],
        epsilons: vec![0.125],
        timing: false,
        workers: 0,
    };
    let rows = run_bench(&spec).expect("bench");
    let failed = rows.iter().filter(|r| r.status != "ok").count();
    let report = slope_reports(&rows).into_iter().next();
    let (cs, es) = report.map(|r| (r.clique_slope, r.entry_slope)).unwrap_or((None, None));
    let show = |s: Option<f64>| s.map_or("n/a".to_string(), |v| format!("{v:.3}"));
    vec![
        Outcome {
            name: "scaling: clique count slope",
            pass: failed == 0 && cs.is_some_and(|s| s <= 0.85),
            soft: true,
            detail: format!("slope {} (target <= 0.85) over {} runs, {failed} failed", show(cs), rows.len()),
        },
        Outcome {
            name: "scaling: oracle entry slope",
            pass: failed == 0 && es.is_some_and(|s| s <= 1.9),
            soft: true,
            detail: format!("slope {} (target <= 1.9) over {} runs", show(es), rows.len()),
        },
    ]
}

fn main() -> ExitCode {
    let start = Instant::now();
    let suite = suite();
    let mut outcomes = vec![separator_soundness(&suite), schedule_exactness(), oracle_additive_error()];
    outcomes.push(metric_correctness());
    outcomes.push(intersection_equivalence());
    outcomes.push(coloring_agreement());
    outcomes.push(planarization_validity(&suite));
    outcomes.extend(empirical_scaling());
    for o in &outcomes {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let soft = if o.soft { " (soft, reported only)" } else { "" };
        println!("{verdict} {}{soft}: {}", o.name, o.detail);
    }
    let hard_failures = outcomes.iter().filter(|o| !o.pass && !o.soft).count();
    println!("acceptance finished in {:.1}s, {hard_failures} hard failures", start.elapsed().as_secs_f64());
    if hard_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
