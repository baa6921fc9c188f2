//! Benchmark harness: one CSV row per (instance, epsilon) run plus
//! log-log growth slopes.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disk_graph::build_intersection_graph;
use crate::drawing::{find_crossings, realize_drawing};
use crate::error::{Error, Result};
use crate::instance::{generate_instance, preset, GeneratorParams, Instance};
use crate::oracle::{bfs_from, build_separator_tree, HopDistance};
use crate::separator::{separate_graph, verify_separator};

/// Queries checked exactly per run are all pairs up to this size, and a
/// seeded sample of pairs beyond it.
const ALL_PAIRS_LIMIT: usize = 200;
const SAMPLED_SOURCES: usize = 40;
const SAMPLED_TARGETS: usize = 50;

/// Instances to run.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchSpec {
    /// `random` or the name of a preset.
    pub family: String,
    pub sizes: Vec<usize>,
    pub holes: usize,
    pub seeds: Vec<u64>,
    pub epsilons: Vec<f64>,
    /// Measure wall-clock times; off keeps the output byte-identical.
    pub timing: bool,
    /// Worker threads; zero uses the default pool.
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub family: String,
    pub seed: u64,
    pub epsilon: f64,
    pub n: usize,
    pub h: usize,
    pub m: usize,
    pub crossings: usize,
    pub cliques: usize,
    pub max_clique: usize,
    pub balance: f64,
    pub oracle_entries: usize,
    pub build_ms: Option<f64>,
    pub query_us: Option<f64>,
    pub max_additive_error: Option<u32>,
    pub status: String,
}

impl BenchRecord {
    fn failed(family: &str, seed: u64, epsilon: f64, n: usize, status: String) -> Self {
        BenchRecord {
            family: family.to_string(),
            seed,
            epsilon,
            n,
            h: 0,
            m: 0,
            crossings: 0,
            cliques: 0,
            max_clique: 0,
            balance: 0.0,
            oracle_entries: 0,
            build_ms: None,
            query_us: None,
            max_additive_error: None,
            status,
        }
    }
}

fn instance_for(family: &str, n: usize, holes: usize, seed: u64) -> Result<Instance> {
    if family == "random" {
        generate_instance(&GeneratorParams::family(n, holes, seed))
    } else {
        preset(family, n)
    }
}

/// Pairs of local indices whose oracle answers are checked.
fn query_pairs(n: usize, seed: u64) -> Vec<(usize, Vec<usize>)> {
    if n <= ALL_PAIRS_LIMIT {
        return (0..n).map(|a| (a, (0..n).collect())).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    (0..SAMPLED_SOURCES)
        .map(|_| {
            let a = rng.gen_range(0..n);
            (a, (0..SAMPLED_TARGETS).map(|_| rng.gen_range(0..n)).collect())
        })
        .collect()
}

fn run_one(family: &str, n: usize, holes: usize, seed: u64, epsilon: f64, timing: bool) -> Result<BenchRecord> {
    let inst = instance_for(family, n, holes, seed)?;
    let (_, g) = build_intersection_graph(&inst.free_space, &inst.disks)?;
    let crossings = find_crossings(&realize_drawing(&g))?.len();
    let sep = separate_graph(&g, epsilon)?;
    let violations = verify_separator(&g, &sep)?;
    let start = Instant::now();
    let tree = build_separator_tree(&g, epsilon)?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut worst: Option<u32> = Some(0);
    let mut contract_ok = true;
    let mut queries = 0usize;
    let mut query_time = 0.0;
    for (a, targets) in query_pairs(g.len(), seed) {
        let exact = bfs_from(&g, &[a]);
        for b in targets {
            let t = Instant::now();
            let d = tree.query(g.disk(a).id, g.disk(b).id)?;
            query_time += t.elapsed().as_secs_f64();
            queries += 1;
            let e = exact[b];
            if !(d <= e && e <= d + HopDistance::new(1)) || d.is_finite() != e.is_finite() {
                contract_ok = false;
            }
            if let (Some(x), Some(y)) = (e.value(), d.value()) {
                worst = worst.map(|w| w.max(x.saturating_sub(y)));
            }
        }
    }
    let status = if !violations.is_empty() {
        format!("separator violation: {}", violations[0])
    } else if !contract_ok {
        "oracle violation".to_string()
    } else {
        "ok".to_string()
    };
    Ok(BenchRecord {
        family: family.to_string(),
        seed,
        epsilon,
        n: g.len(),
        h: inst.hole_count(),
        m: g.edge_count(),
        crossings,
        cliques: sep.cliques.len(),
        max_clique: sep.max_clique_size(),
        balance: sep.balance(),
        oracle_entries: tree.entry_count(),
        build_ms: timing.then_some(build_ms),
        query_us: (timing && queries > 0).then(|| query_time * 1e6 / queries as f64),
        max_additive_error: if g.is_empty() { None } else { worst },
        status,
    })
}

/// Runs every (size, seed, epsilon) combination, in that nesting order.
/// Failures become rows with an error status.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRecord>> {
    if spec.epsilons.is_empty() {
        return Err(Error::InvalidParameter("the epsilon list is empty".into()));
    }
    if spec.sizes.is_empty() || spec.seeds.is_empty() {
        return Err(Error::InvalidParameter("sizes and seeds must be nonempty".into()));
    }
    for &eps in &spec.epsilons {
        crate::separator::rounds_for(eps)?;
    }
    let mut jobs = Vec::new();
    for &n in &spec.sizes {
        for &seed in &spec.seeds {
            for &eps in &spec.epsilons {
                jobs.push((n, seed, eps));
            }
        }
    }
    let run = || -> Vec<BenchRecord> {
        jobs.par_iter()
            .map(|&(n, seed, eps)| {
                run_one(&spec.family, n, spec.holes, seed, eps, spec.timing)
                    .unwrap_or_else(|e| BenchRecord::failed(&spec.family, seed, eps, n, format!("error: {e}")))
            })
            .collect()
    };
    if spec.workers == 0 {
        Ok(run())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Ok(pool.install(run))
    }
}

pub fn records_to_csv(records: &[BenchRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn records_from_csv(text: &str) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Least-squares slope of `ln y` against `ln x`, over points with
/// positive coordinates. `None` with fewer than two distinct `x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Growth slopes of one (family, epsilon) group.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeReport {
    pub family: String,
    pub epsilon: f64,
    pub runs: usize,
    pub clique_slope: Option<f64>,
    pub entry_slope: Option<f64>,
}

/// Slopes of clique count and oracle entries against `n`, over the rows
/// with status `ok`, grouped by family and epsilon.
pub fn slope_reports(records: &[BenchRecord]) -> Vec<SlopeReport> {
    let mut groups: BTreeMap<(String, u64), Vec<&BenchRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.status == "ok") {
        groups.entry((r.family.clone(), r.epsilon.to_bits())).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((family, eps), rows)| SlopeReport {
            family,
            epsilon: f64::from_bits(eps),
            runs: rows.len(),
            clique_slope: loglog_slope(&rows.iter().map(|r| (r.n as f64, r.cliques as f64)).collect::<Vec<_>>()),
            entry_slope: loglog_slope(&rows.iter().map(|r| (r.n as f64, r.oracle_entries as f64)).collect::<Vec<_>>()),
        })
        .collect()
}
