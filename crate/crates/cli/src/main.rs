//! `geodisk`: command-line surface of the geodesic disk graph toolkit.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use geodisk::bench::{records_to_csv, run_bench, slope_reports, BenchSpec};
use geodisk::coloring::{q_color_via_separator, verify_coloring};
use geodisk::drawing::{crossing_audit, planarize, realize_drawing, verify_planarization};
use geodisk::instance::{generate_instance, parse_instance, preset, write_instance, GeneratorParams, Instance};
use geodisk::oracle::{bfs_from, build_separator_tree, HopDistance, SeparatorTree};
use geodisk::render::{render_svg, Overlays};
use geodisk::separator::{compute_schedule, separate_graph, verify_separator};
use geodisk::{build_intersection_graph, Error, IntersectionGraph};

#[derive(Parser)]
#[command(name = "geodisk", version, about = "Geodesic disk graphs: separators, hop-distance oracles and coloring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a preset or random instance.
    Gen(GenArgs),
    /// Print the intersection graph of an instance.
    Graph(GraphArgs),
    /// Compute and verify a clique-based separator.
    Separate(SeparateArgs),
    /// Build or query a hop-distance oracle.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Decide q-colorability through clique separators.
    Color(ColorArgs),
    /// Crossing statistics and planarization checks of the drawing.
    Audit(AuditArgs),
    /// Render an instance as SVG.
    Render(RenderArgs),
    /// Run a benchmark family and write CSV rows.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Build, check against BFS, and write a snapshot.
    Build(OracleBuildArgs),
    /// Answer one query from a snapshot.
    Query(OracleQueryArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Overlay {
    Drawing,
    Separator,
    Planarized,
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Preset name (chain, cluster, triangle, star, cycle5, holed, empty) or `random`.
    #[arg(long, default_value = "random")]
    preset: String,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    holes: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Bounding box `x0,y0,x1,y1` of a random instance.
    #[arg(long, value_parser = parse_floats::<4>)]
    bbox: Option<Vec<f64>>,
    /// Radius range `lo,hi` of a random instance.
    #[arg(long, value_parser = parse_floats::<2>)]
    radius: Option<Vec<f64>>,
    /// Hole side range `lo,hi` of a random instance.
    #[arg(long, value_parser = parse_floats::<2>)]
    hole_side: Option<Vec<f64>>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SeparateArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Rational in (0, 1), such as `1/4` or `0.25`.
    #[arg(long, value_parser = parse_epsilon, default_value = "1/4")]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct OracleBuildArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_parser = parse_epsilon, default_value = "1/4")]
    epsilon: f64,
    #[arg(long)]
    snapshot: PathBuf,
}

#[derive(Args)]
struct OracleQueryArgs {
    #[arg(long)]
    snapshot: PathBuf,
    /// First disk id.
    #[arg(long)]
    from: usize,
    /// Second disk id.
    #[arg(long)]
    to: usize,
}

#[derive(Args)]
struct ColorArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    q: usize,
    #[arg(long, value_parser = parse_epsilon, default_value = "1/4")]
    epsilon: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Overlays to draw; repeat or separate with commas.
    #[arg(long, value_enum, value_delimiter = ',')]
    overlay: Vec<Overlay>,
    #[arg(long, value_parser = parse_epsilon, default_value = "1/4")]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "svg")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BenchArgs {
    /// `random` or a preset name.
    #[arg(long, default_value = "random")]
    family: String,
    #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    holes: usize,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    seeds: Vec<u64>,
    /// Comma-separated list of rationals.
    #[arg(long = "epsilon", value_delimiter = ',', value_parser = parse_epsilon, num_args = 0..)]
    epsilons: Vec<f64>,
    /// Record wall-clock times (the output is then not reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Also write the log-log slope report (JSON) to this file.
    #[arg(long)]
    slopes: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
            a / b
        }
        None => s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?,
    };
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("epsilon must lie strictly between 0 and 1, got `{s}`"))
    }
}

fn parse_floats<const N: usize>(s: &str) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("`{x}` is not a number")))
        .collect::<Result<_, _>>()?;
    if v.len() == N {
        Ok(v)
    } else {
        Err(format!("expected {N} comma-separated numbers"))
    }
}

/// Failure of a command with its exit code.
enum Failure {
    /// Bad input: exit code 2.
    Input(String),
    /// A violation or an infeasible answer: exit code 1.
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonPlanar | Error::InconsistentPaths { .. } => Failure::Violation(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: &Output, text: &str) -> CmdResult {
    match &output.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn load(path: &Path) -> Result<(Instance, IntersectionGraph), Failure> {
    let inst = parse_instance(&read(path)?)?;
    let (_, g) = build_intersection_graph(&inst.free_space, &inst.disks)?;
    Ok((inst, g))
}

fn gen(a: GenArgs) -> CmdResult {
    let inst = if a.preset == "random" {
        let mut p = GeneratorParams::family(a.n, a.holes, a.seed);
        if let Some(b) = a.bbox {
            p.bbox = (b[0], b[1], b[2], b[3]);
        }
        if let Some(r) = a.radius {
            p.radius = (r[0], r[1]);
        }
        if let Some(h) = a.hole_side {
            p.hole_side = (h[0], h[1]);
        }
        generate_instance(&p)?
    } else {
        preset(&a.preset, a.n)?
    };
    emit(&a.output, &write_instance(&inst))
}

fn graph(a: GraphArgs) -> CmdResult {
    let (_, g) = load(&a.instance)?;
    let text = match a.format {
        Format::Json => {
            let edges: Vec<Value> = g
                .edges()
                .iter()
                .map(|e| {
                    json!({
                        "a": g.disk(e.a).id,
                        "b": g.disk(e.b).id,
                        "length": e.path.length,
                        "meeting_point": [e.meeting_point.x, e.meeting_point.y],
                        "path": e.path.vertices.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty(&json!({"n": g.len(), "m": g.edge_count(), "edges": edges}))
        }
        Format::Csv => {
            let mut s = String::from("a,b,length\n");
            for e in g.edges() {
                s.push_str(&format!("{},{},{}\n", g.disk(e.a).id, g.disk(e.b).id, e.path.length));
            }
            s
        }
        Format::Svg => return Err(Failure::Input("graph supports json and csv".into())),
    };
    emit(&a.output, &text)
}

fn separate(a: SeparateArgs) -> CmdResult {
    let (inst, g) = load(&a.instance)?;
    let sep = separate_graph(&g, a.epsilon)?;
    let violations = verify_separator(&g, &sep)?;
    if !violations.is_empty() {
        return Err(Failure::Violation(format!("separator failed verification: {}", violations.join("; "))));
    }
    let text = match a.format {
        Format::Json => pretty(&json!({
            "schedule": compute_schedule(a.epsilon)?,
            "separator": sep,
            "clique_count": sep.cliques.len(),
        })),
        Format::Svg => render_svg(
            &inst,
            &Overlays {
                separator: Some(&sep),
                ..Default::default()
            },
        ),
        Format::Csv => return Err(Failure::Input("separate supports json and svg".into())),
    };
    emit(&a.output, &text)
}

/// Checks the oracle against BFS on every pair.
fn check_oracle(g: &IntersectionGraph, tree: &SeparatorTree) -> Result<Option<String>, Failure> {
    for a in 0..g.len() {
        let exact = bfs_from(g, &[a]);
        for (b, &e) in exact.iter().enumerate() {
            let (i, j) = (g.disk(a).id, g.disk(b).id);
            let d = tree.query(i, j)?;
            if !(d <= e && e <= d + HopDistance::new(1)) || d.is_finite() != e.is_finite() {
                return Ok(Some(format!("query ({i}, {j}) returned {d}, exact distance is {e}")));
            }
        }
    }
    Ok(None)
}

fn oracle(cmd: OracleCommand) -> CmdResult {
    match cmd {
        OracleCommand::Build(a) => {
            let (_, g) = load(&a.instance)?;
            let tree = build_separator_tree(&g, a.epsilon)?;
            if let Some(v) = check_oracle(&g, &tree)? {
                return Err(Failure::Violation(format!("oracle failed verification: {v}")));
            }
            fs::write(&a.snapshot, tree.to_snapshot())
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", a.snapshot.display())))?;
            println!(
                "{}",
                json!({
                    "nodes": tree.node_count(),
                    "depth": tree.depth(),
                    "entries": tree.entry_count(),
                    "clique_entries": tree.clique_entry_count(),
                })
            );
            Ok(())
        }
        OracleCommand::Query(a) => {
            let tree = SeparatorTree::from_snapshot(&read(&a.snapshot)?)?;
            let t = tree.query_traced(a.from, a.to)?;
            let value = t.value.value().map_or(Value::from("inf"), Value::from);
            println!("{}", json!({"from": a.from, "to": a.to, "distance": value, "lookups": t.lookups}));
            Ok(())
        }
    }
}

fn color(a: ColorArgs) -> CmdResult {
    let (_, g) = load(&a.instance)?;
    let result = q_color_via_separator(&g, a.q, a.epsilon)?;
    let problems = verify_coloring(&g, a.q, &result);
    if !problems.is_empty() {
        return Err(Failure::Violation(format!("coloring failed verification: {}", problems.join("; "))));
    }
    emit(&a.output, &pretty(&json!({"q": a.q, "result": result})))?;
    if result.feasible {
        Ok(())
    } else {
        Err(Failure::Violation(format!("the graph is not {}-colorable", a.q)))
    }
}

fn audit(a: AuditArgs) -> CmdResult {
    let (_, g) = load(&a.instance)?;
    let drawing = realize_drawing(&g);
    let report = crossing_audit(&drawing, &g)?;
    let pg = planarize(&drawing)?;
    let problems = verify_planarization(&drawing, &pg);
    emit(
        &a.output,
        &pretty(&json!({
            "n": g.len(),
            "m": g.edge_count(),
            "audit": report,
            "planarized_vertices": pg.vertex_count(),
            "crossing_vertices": pg.crossing_vertex_count(),
            "planarization_violations": problems,
        })),
    )?;
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(format!("{} planarization violations", problems.len())))
    }
}

fn render(a: RenderArgs) -> CmdResult {
    if a.format != Format::Svg {
        return Err(Failure::Input("render supports svg only".into()));
    }
    let (inst, g) = load(&a.instance)?;
    let drawing = realize_drawing(&g);
    let pg = if a.overlay.contains(&Overlay::Planarized) { Some(planarize(&drawing)?) } else { None };
    let sep = if a.overlay.contains(&Overlay::Separator) {
        let sep = separate_graph(&g, a.epsilon)?;
        let violations = verify_separator(&g, &sep)?;
        if !violations.is_empty() {
            return Err(Failure::Violation(format!("separator failed verification: {}", violations.join("; "))));
        }
        Some(sep)
    } else {
        None
    };
    let overlays = Overlays {
        drawing: a.overlay.contains(&Overlay::Drawing).then_some(&drawing),
        separator: sep.as_ref(),
        planarized: pg.as_ref(),
    };
    emit(&a.output, &render_svg(&inst, &overlays))
}

fn bench(a: BenchArgs) -> CmdResult {
    let spec = BenchSpec {
        family: a.family,
        sizes: a.sizes,
        holes: a.holes,
        seeds: a.seeds,
        epsilons: a.epsilons,
        timing: a.timing,
        workers: a.workers,
    };
    let rows = run_bench(&spec)?;
    let slopes = slope_reports(&rows);
    let text = match a.format {
        Format::Csv => records_to_csv(&rows)?,
        Format::Json => pretty(&json!({"records": rows, "slopes": slopes})),
        Format::Svg => return Err(Failure::Input("bench supports csv and json".into())),
    };
    emit(&a.output, &text)?;
    if let Some(p) = a.slopes {
        fs::write(&p, pretty(&json!(slopes))).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display())))?;
    }
    let bad = rows.iter().filter(|r| r.status != "ok").count();
    if bad == 0 {
        Ok(())
    } else {
        Err(Failure::Violation(format!("{bad} runs did not pass")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Graph(a) => graph(a),
        Command::Separate(a) => separate(a),
        Command::Oracle { command } => oracle(command),
        Command::Color(a) => color(a),
        Command::Audit(a) => audit(a),
        Command::Render(a) => render(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("geodisk: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("geodisk: {msg}");
            ExitCode::from(2)
        }
    }
}
