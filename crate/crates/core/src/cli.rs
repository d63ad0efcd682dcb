//! The `geostretch` command line.
//!
//! Every run prints one object with `command`, `config` (the fully resolved
//! arguments), `result` and, with `--timings`, `timings`. Exit codes: 0 ok,
//! 1 validation or check failure, 2 usage error, 3 I/O error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::analysis::{
    check_fps_bound, check_kcenter_transfer, check_kcenter_two_approx, check_nearest_source_detour,
    check_radius_sandwich, relative_eq, stretch_fast, stretch_naive, stretch_of_sources, BoundCheck,
    DEFAULT_NAIVE_CAP, RELATIVE_TOLERANCE,
};
use crate::bench::{linear_fit, random_pairs, time_median, time_queries, MIN_REPEATS};
use crate::error::Error;
use crate::exhaustive::{
    exists_sources_with_stretch, minimum_vertex_cover, optimal_kcenter_sources, optimal_stretch_sources,
    DEFAULT_BUDGET,
};
use crate::generate::{grid_mesh, random_connected_graph, Lengths};
use crate::graph::{read_edge_list, strip_comment, write_edge_list, Graph, ParallelEdgeWarning};
use crate::mesh::{read_off, write_off};
use crate::oracle::Oracle;
use crate::reduction::gadget::DEFAULT_XI;
use crate::reduction::{
    gadget_case_table, gadget_replace, read_embedding, reduction_equivalence_check, subdivide,
    subdivision_cover_check, CaseTable, GadgetParams,
};
use crate::sampling::{farthest_point_sampling, farthest_point_sampling_with_table, kcenter_radius, StartPolicy};

#[derive(Debug, Parser, Serialize)]
#[command(name = "geostretch", version, about = "Landmark distance oracles and stretch analysis")]
pub struct Cli {
    /// Worker threads for parallel stages [default: all cores]
    #[arg(long, global = true, env = "GEOSTRETCH_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include wall-clock timings in the output
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum InputKind {
    /// OFF if the extension or header says so, else edge list
    Auto,
    Graph,
    Mesh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Method {
    Fast,
    Naive,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Objective {
    Stretch,
    Kcenter,
    Vc,
    Exists,
}

#[derive(Debug, Args, Serialize)]
struct StartArgs {
    /// First FPS source
    #[arg(long, conflicts_with = "seed")]
    start: Option<usize>,
    /// Pick the first FPS source at random from this seed
    #[arg(long)]
    seed: Option<u64>,
}

impl StartArgs {
    fn policy(&self) -> StartPolicy {
        match (self.start, self.seed) {
            (_, Some(seed)) => StartPolicy::Seeded(seed),
            (Some(v), None) => StartPolicy::Vertex(v),
            (None, None) => StartPolicy::default(),
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Check a graph (edge list) or triangle mesh (OFF) file
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = InputKind::Auto)]
        kind: InputKind,
    },
    /// Select sources by farthest point sampling
    Sample {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        #[command(flatten)]
        #[serde(flatten)]
        start: StartArgs,
    },
    /// Build or query an oracle file
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Stretch factor of an oracle on its graph
    Stretch {
        graph: PathBuf,
        oracle: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Fast)]
        method: Method,
        /// Also check the radius and nearest-source inequalities
        #[arg(long)]
        check_bounds: bool,
        /// Largest graph for all-pairs computations
        #[arg(long, default_value_t = DEFAULT_NAIVE_CAP)]
        naive_cap: usize,
    },
    /// Exhaustive search over k-subsets
    Brute {
        graph: PathBuf,
        #[arg(long, value_enum)]
        objective: Objective,
        #[arg(short)]
        k: usize,
        /// Stretch threshold for `--objective exists`
        #[arg(long)]
        xi: Option<f64>,
        /// Maximum number of subsets to enumerate
        #[arg(long, default_value_t = DEFAULT_BUDGET as u64)]
        budget: u64,
        #[command(flatten)]
        #[serde(flatten)]
        start: StartArgs,
    },
    /// Build or verify the vertex cover reduction from a grid embedding
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Time oracle construction, queries and stretch evaluation
    Bench {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        /// Queries per timing pass
        #[arg(long, default_value_t = 10_000)]
        queries: usize,
        /// Timing passes; the median is reported (at least 5)
        #[arg(long, default_value_t = MIN_REPEATS)]
        repeats: usize,
        /// Source counts at which query time is measured
        #[arg(long, value_delimiter = ',', default_value = "10,50,100,200")]
        ladder: Vec<usize>,
        /// Seed for the random query pairs
        #[arg(long, default_value_t = 0)]
        query_seed: u64,
        #[arg(long, default_value_t = DEFAULT_NAIVE_CAP)]
        naive_cap: usize,
        #[command(flatten)]
        #[serde(flatten)]
        start: StartArgs,
    },
    /// Generate synthetic inputs
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum OracleCommand {
    /// Select sources (FPS unless `--sources` is given) and save the table
    Build {
        graph: PathBuf,
        #[arg(short, required_unless_present = "sources")]
        k: Option<usize>,
        /// Explicit comma-separated source list instead of FPS
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["k", "start", "seed"])]
        sources: Option<Vec<usize>>,
        #[arg(short)]
        output: PathBuf,
        #[command(flatten)]
        #[serde(flatten)]
        start: StartArgs,
    },
    /// Approximate distance between two vertices
    Query {
        oracle: PathBuf,
        #[arg(short)]
        p: usize,
        #[arg(short)]
        q: usize,
        /// Refuse to answer if the oracle was built for a different graph
        #[arg(long)]
        graph: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum GadgetCommand {
    /// Write G' as an edge list plus a `.trace.json` sidecar
    Build {
        embedding: PathBuf,
        #[arg(long, default_value_t = DEFAULT_XI)]
        xi: f64,
        #[arg(short)]
        output: PathBuf,
    },
    /// Check the gadget case table and both cover equivalences
    Verify {
        embedding: PathBuf,
        /// Largest cover size checked [default: vertex count]
        #[arg(short)]
        k: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_XI)]
        xi: f64,
        #[arg(long, default_value_t = DEFAULT_BUDGET as u64)]
        budget: u64,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum GenCommand {
    /// Triangulated rows x cols grid with unit spacing
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(short)]
        output: PathBuf,
        /// Write an OFF mesh instead of an edge list
        #[arg(long)]
        off: bool,
    },
    /// Random connected graph: spanning tree plus extra edges
    Random {
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        /// Lengths uniform in [0.5, 2) instead of 1
        #[arg(long)]
        mixed: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short)]
        output: PathBuf,
    },
}

enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

type CmdResult = std::result::Result<Report, Failure>;

fn exit_code_for(error: &Error) -> u8 {
    match error {
        Error::Io(_) => 3,
        Error::KTooLarge { .. }
        | Error::KTooSmall
        | Error::InvalidVertexId { .. }
        | Error::EmptySourceSet
        | Error::DuplicateSource(_)
        | Error::XiTooSmall(_)
        | Error::GraphTooLargeForNaive { .. }
        | Error::BudgetExceeded { .. } => 2,
        _ => 1,
    }
}

struct Report {
    result: Value,
    timings: Map<String, Value>,
    /// Rows written in CSV mode; otherwise `result` is flattened.
    table: Option<Vec<Value>>,
    failed: bool,
}

impl Report {
    fn new(result: impl Serialize) -> Self {
        Report {
            result: to_json(result),
            timings: Map::new(),
            table: None,
            failed: false,
        }
    }
}

fn to_json(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("output values serialize")
}

struct Clock(Map<String, Value>);

impl Clock {
    fn new() -> Self {
        Clock(Map::new())
    }

    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.insert(format!("{name}_seconds"), json!(start.elapsed().as_secs_f64()));
        out
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

/// Parses `args` (including the program name), runs the command, prints
/// its output and returns the exit code.
pub fn run(args: impl IntoIterator<Item = OsString>) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return 2;
        }
        // fails only if the pool already exists, as in repeated in-process runs
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let outcome = dispatch(&cli.command);
    match outcome {
        Ok(report) => {
            let code = if report.failed { 1 } else { 0 };
            match print_report(&cli, report) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    3
                }
            }
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            2
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn print_report(cli: &Cli, report: Report) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.format {
        Format::Json => {
            let mut config = to_json(&cli.command);
            if let Value::Object(map) = &mut config {
                map.insert("threads".into(), json!(rayon::current_num_threads()));
                map.insert("format".into(), to_json(cli.format));
                map.insert("timings".into(), json!(cli.timings));
                map.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
            }
            let mut doc = Map::new();
            doc.insert("command".into(), json!(command_name(&cli.command)));
            doc.insert("config".into(), config);
            doc.insert("result".into(), report.result);
            if cli.timings {
                doc.insert("timings".into(), Value::Object(report.timings));
            }
            serde_json::to_writer_pretty(&mut out, &Value::Object(doc))?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(&mut out);
            match report.table {
                Some(rows) if !rows.is_empty() => write_table(&mut writer, &rows)?,
                _ => {
                    writer.write_record(["key", "value"])?;
                    let mut flat = Vec::new();
                    flatten("", &report.result, &mut flat);
                    if cli.timings {
                        flatten("timings", &Value::Object(report.timings), &mut flat);
                    }
                    for (key, value) in flat {
                        writer.write_record([key, value])?;
                    }
                }
            }
            writer.flush()?;
        }
    }
    out.flush()
}

fn write_table<W: Write>(writer: &mut csv::Writer<W>, rows: &[Value]) -> io::Result<()> {
    let header: Vec<String> = match &rows[0] {
        Value::Object(map) => map.keys().cloned().collect(),
        _ => vec!["value".into()],
    };
    writer.write_record(&header)?;
    for row in rows {
        let record: Vec<String> = match row {
            Value::Object(map) => header.iter().map(|h| scalar(map.get(h).unwrap_or(&Value::Null))).collect(),
            other => vec![scalar(other)],
        };
        writer.write_record(&record)?;
    }
    Ok(())
}

fn scalar(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array()) => items
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Validate { .. } => "validate",
        Command::Sample { .. } => "sample",
        Command::Oracle(OracleCommand::Build { .. }) => "oracle build",
        Command::Oracle(OracleCommand::Query { .. }) => "oracle query",
        Command::Stretch { .. } => "stretch",
        Command::Brute { .. } => "brute",
        Command::Gadget(GadgetCommand::Build { .. }) => "gadget build",
        Command::Gadget(GadgetCommand::Verify { .. }) => "gadget verify",
        Command::Bench { .. } => "bench",
        Command::Gen(GenCommand::Grid { .. }) => "gen grid",
        Command::Gen(GenCommand::Random { .. }) => "gen random",
    }
}

fn dispatch(command: &Command) -> CmdResult {
    match command {
        Command::Validate { path, kind } => validate(path, *kind),
        Command::Sample { graph, k, start } => sample(graph, *k, start.policy()),
        Command::Oracle(OracleCommand::Build {
            graph,
            k,
            sources,
            output,
            start,
        }) => oracle_build(graph, *k, sources.as_deref(), output, start.policy()),
        Command::Oracle(OracleCommand::Query { oracle, p, q, graph }) => oracle_query(oracle, *p, *q, graph.as_deref()),
        Command::Stretch {
            graph,
            oracle,
            method,
            check_bounds,
            naive_cap,
        } => stretch(graph, oracle, *method, *check_bounds, *naive_cap),
        Command::Brute {
            graph,
            objective,
            k,
            xi,
            budget,
            start,
        } => brute(graph, *objective, *k, *xi, *budget as u128, start.policy()),
        Command::Gadget(GadgetCommand::Build { embedding, xi, output }) => gadget_build(embedding, *xi, output),
        Command::Gadget(GadgetCommand::Verify { embedding, k, xi, budget }) => {
            gadget_verify(embedding, *k, *xi, *budget as u128)
        }
        Command::Bench {
            graph,
            k,
            queries,
            repeats,
            ladder,
            query_seed,
            naive_cap,
            start,
        } => bench(graph, *k, *queries, *repeats, ladder, *query_seed, *naive_cap, start.policy()),
        Command::Gen(GenCommand::Grid { rows, cols, output, off }) => gen_grid(*rows, *cols, output, *off),
        Command::Gen(GenCommand::Random {
            n,
            extra,
            mixed,
            seed,
            output,
        }) => gen_random(*n, *extra, *mixed, *seed, output),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Error> {
    Ok(BufReader::new(File::open(path)?))
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn looks_like_off(path: &Path) -> Result<bool, Error> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("off")) {
        return Ok(true);
    }
    for line in open(path)?.lines() {
        let line = line?;
        let line = strip_comment(&line);
        if !line.is_empty() {
            return Ok(line.starts_with("OFF"));
        }
    }
    Ok(false)
}

fn load_graph(path: &Path) -> Result<(Graph, Vec<ParallelEdgeWarning>), Error> {
    if looks_like_off(path)? {
        Ok((read_off(open(path)?)?.to_graph()?, Vec::new()))
    } else {
        read_edge_list(open(path)?)
    }
}

fn graph_summary(graph: &Graph) -> Value {
    json!({
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "edge_stats": graph.edge_stats().ok(),
        "checksum": format!("{:016x}", graph.checksum()),
    })
}

fn validate(path: &Path, kind: InputKind) -> CmdResult {
    let mesh = match kind {
        InputKind::Auto => looks_like_off(path)?,
        InputKind::Graph => false,
        InputKind::Mesh => true,
    };
    if mesh {
        let mesh = read_off(open(path)?)?;
        let report = mesh.validate();
        let graph = mesh.to_graph().ok().map(|g| graph_summary(&g));
        let passed = report.passed();
        let mut out = Report::new(json!({
            "kind": "mesh",
            "valid": passed,
            "report": report,
            "graph": graph,
        }));
        out.table = Some(report.checks.iter().map(to_json).collect());
        out.failed = !passed;
        return Ok(out);
    }
    match read_edge_list(open(path)?) {
        Ok((graph, warnings)) => Ok(Report::new(json!({
            "kind": "graph",
            "valid": true,
            "graph": graph_summary(&graph),
            "warnings": warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        }))),
        Err(Error::Io(e)) => Err(Error::Io(e).into()),
        Err(e) => {
            let mut out = Report::new(json!({
                "kind": "graph",
                "valid": false,
                "error": e.to_string(),
            }));
            out.failed = true;
            Ok(out)
        }
    }
}

fn sample(path: &Path, k: usize, start: StartPolicy) -> CmdResult {
    let mut clock = Clock::new();
    let (graph, _) = clock.time("load", || load_graph(path))?;
    let set = clock.time("sample", || farthest_point_sampling(&graph, k, start))?;
    let mut out = Report::new(json!({
        "graph": graph_summary(&graph),
        "sources": set.sources,
        "radii": set.radii,
        "start": set.start,
        "covering_radius": set.final_radius(),
    }));
    out.table = Some(
        set.sources
            .iter()
            .zip(&set.radii)
            .enumerate()
            .map(|(i, (s, r))| json!({"index": i, "source": s, "covering_radius": r}))
            .collect(),
    );
    out.timings = clock.0;
    Ok(out)
}

fn oracle_build(
    path: &Path,
    k: Option<usize>,
    sources: Option<&[usize]>,
    output: &Path,
    start: StartPolicy,
) -> CmdResult {
    let mut clock = Clock::new();
    let (graph, _) = clock.time("load", || load_graph(path))?;
    let (oracle, selection) = clock.time("build", || -> Result<_, Error> {
        match sources {
            Some(list) => Ok((Oracle::build(&graph, list)?, json!({"method": "explicit"}))),
            None => {
                let k = k.expect("clap requires -k without --sources");
                let (set, table) = farthest_point_sampling_with_table(&graph, k, start)?;
                let selection = json!({"method": "fps", "start": set.start, "radii": set.radii});
                Ok((Oracle::from_table(&graph, table)?, selection))
            }
        }
    })?;
    clock.time("save", || oracle.save_to_path(output))?;
    let mut out = Report::new(json!({
        "output": output,
        "vertices": oracle.vertex_count(),
        "k": oracle.k(),
        "sources": oracle.sources(),
        "selection": selection,
        "covering_radius": oracle.covering_radius(),
        "graph_checksum": format!("{:016x}", oracle.graph_checksum()),
    }));
    out.timings = clock.0;
    Ok(out)
}

fn oracle_query(path: &Path, p: usize, q: usize, graph: Option<&Path>) -> CmdResult {
    let oracle = Oracle::load_from_path(path)?;
    if let Some(graph) = graph {
        oracle.check_graph(&load_graph(graph)?.0)?;
    }
    let approx = oracle.approx_distance(p, q)?;
    Ok(Report::new(json!({
        "p": p,
        "q": q,
        "approx_distance": approx.value,
        "witness_source": approx.witness_source,
        "nearest_source_p": oracle.nearest_source(p)?,
        "nearest_source_q": oracle.nearest_source(q)?,
    })))
}

fn stretch(path: &Path, oracle_path: &Path, method: Method, check_bounds: bool, naive_cap: usize) -> CmdResult {
    let mut clock = Clock::new();
    let (graph, _) = clock.time("load", || load_graph(path))?;
    let oracle = Oracle::load_for(open(oracle_path)?, &graph)?;
    let fast = match method {
        Method::Fast | Method::Both => Some(clock.time("fast", || stretch_fast(&graph, &oracle))?),
        Method::Naive => None,
    };
    let naive = match method {
        Method::Naive | Method::Both => Some(clock.time("naive", || stretch_naive(&graph, &oracle, naive_cap))?),
        Method::Fast => None,
    };
    let mut failed = false;
    let agree = match (&fast, &naive) {
        (Some(f), Some(n)) => {
            let same = relative_eq(f.stretch, n.stretch, RELATIVE_TOLERANCE);
            failed |= !same;
            Some(same)
        }
        _ => None,
    };
    let mut result = json!({
        "stretch": fast.as_ref().or(naive.as_ref()).map(|r| r.stretch),
        "fast": fast,
        "naive": naive,
        "methods_agree": agree,
    });
    if check_bounds {
        let (lower, upper) = clock.time("radius_bounds", || check_radius_sandwich(&graph, &oracle))?;
        let mut checks = vec![lower, upper];
        let mut detour = Value::Null;
        if graph.vertex_count() <= naive_cap {
            let report = clock.time("detour_bound", || check_nearest_source_detour(&graph, &oracle, naive_cap))?;
            detour = json!({
                "violations": report.violations.len(),
                "pairs_examined": report.pairs_examined,
                "tightest_pair": report.tightest_pair,
                "first_violations": &report.violations[..report.violations.len().min(10)],
            });
            failed |= !report.violations.is_empty();
            checks.push(report.tightest);
        }
        failed |= checks.iter().any(|c| !c.holds);
        result["bound_checks"] = to_json(&checks);
        result["nearest_source_detour"] = detour;
    }
    let mut out = Report::new(result);
    out.failed = failed;
    out.timings = clock.0;
    Ok(out)
}

fn brute(path: &Path, objective: Objective, k: usize, xi: Option<f64>, budget: u128, start: StartPolicy) -> CmdResult {
    let mut clock = Clock::new();
    let (graph, _) = clock.time("load", || load_graph(path))?;
    let mut checks: Vec<BoundCheck> = Vec::new();
    let result = match objective {
        Objective::Stretch => {
            let best = clock.time("search", || optimal_stretch_sources(&graph, k, budget))?;
            let fps = farthest_point_sampling(&graph, k, start)?;
            let fps_stretch = stretch_of_sources(&graph, &fps)?.stretch;
            checks.push(check_fps_bound(&graph, &fps, best.objective)?);
            json!({
                "optimal_stretch": best.objective,
                "best_sets": best.best_sets,
                "sets_examined": best.sets_examined,
                "fps": {"sources": fps.sources, "start": fps.start, "stretch": fps_stretch},
            })
        }
        Objective::Kcenter => {
            let best = clock.time("search", || optimal_kcenter_sources(&graph, k, budget))?;
            let fps = farthest_point_sampling(&graph, k, start)?;
            checks.push(check_kcenter_two_approx(&graph, &fps, best.objective)?);
            checks.push(check_kcenter_transfer(&graph, &fps, &best.best_sets[0])?);
            json!({
                "optimal_radius": best.objective,
                "best_sets": best.best_sets,
                "sets_examined": best.sets_examined,
                "fps": {"sources": fps.sources, "start": fps.start, "radius": kcenter_radius(&graph, &fps)?},
            })
        }
        Objective::Vc => {
            let edges: Vec<(usize, usize)> = graph.edges().iter().map(|e| (e.u, e.v)).collect();
            let cover = clock.time("search", || minimum_vertex_cover(graph.vertex_count(), &edges, k, budget))?;
            match cover {
                Some(c) => json!({
                    "max_k": k,
                    "cover_size": c.objective as usize,
                    "cover": c.best_sets[0],
                    "sets_examined": c.sets_examined,
                }),
                None => json!({"max_k": k, "cover_size": null, "cover": null}),
            }
        }
        Objective::Exists => {
            let xi = xi.ok_or_else(|| Failure::Usage("--objective exists requires --xi".into()))?;
            let found = clock.time("search", || exists_sources_with_stretch(&graph, k, xi, budget))?;
            json!({
                "xi": xi,
                "exists": found.exists,
                "witness": found.witness,
                "sets_examined": found.sets_examined,
            })
        }
    };
    let mut result = result;
    if !checks.is_empty() {
        result["bound_checks"] = to_json(&checks);
    }
    let mut out = Report::new(result);
    out.failed = checks.iter().any(|c| !c.holds);
    out.timings = clock.0;
    Ok(out)
}

fn trace_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".trace.json");
    PathBuf::from(name)
}

fn gadget_build(path: &Path, xi: f64, output: &Path) -> CmdResult {
    let params = GadgetParams::new(xi)?;
    let embedding = read_embedding(open(path)?)?;
    let (g_r, record) = subdivide(&embedding)?;
    let instance = gadget_replace(&g_r, &record, params)?;
    let mut writer = create(output)?;
    write_edge_list(&instance.g_prime, &mut writer)?;
    writer.flush()?;
    let trace = trace_path(output);
    let mut sidecar = create(&trace)?;
    serde_json::to_writer_pretty(
        &mut sidecar,
        &json!({
            "xi": instance.xi,
            "m": instance.m,
            "source_budget": "k + m",
            "input": {"vertices": embedding.vertex_count(), "edges": embedding.edge_pairs()},
            "subdivision": record,
            "faces": instance.faces,
            "gadgets": instance.gadgets,
        }),
    )
    .map_err(io::Error::from)?;
    writeln!(sidecar)?;
    sidecar.flush()?;
    let triangle = instance.faces_form_triangle_graph();
    let mut out = Report::new(json!({
        "output": output,
        "trace": trace,
        "input_vertices": embedding.vertex_count(),
        "subdivided_vertices": g_r.vertex_count(),
        "vertices": instance.g_prime.vertex_count(),
        "edges": instance.g_prime.edge_count(),
        "faces": instance.faces.len(),
        "m": instance.m,
        "xi": instance.xi,
        "edge_stats": instance.g_prime.edge_stats()?,
        "triangle_graph": triangle,
    }));
    out.failed = !triangle;
    Ok(out)
}

/// Compares the case table against its closed-form values.
fn case_table_matches(table: &CaseTable) -> bool {
    let close = |a: f64, b: f64| relative_eq(a, b, RELATIVE_TOLERANCE);
    table.single.iter().all(|row| {
        let expected = match row.case {
            "a_b" => table.xi,
            "v_a" | "v_b" => 3.0,
            _ => 1.0,
        };
        close(row.ratio, expected)
    }) && close(table.cross_max.ratio, 2.0)
}

fn gadget_verify(path: &Path, k: Option<usize>, xi: f64, budget: u128) -> CmdResult {
    let params = GadgetParams::new(xi)?;
    let embedding = read_embedding(open(path)?)?;
    let max_k = k.unwrap_or(embedding.vertex_count());
    let mut clock = Clock::new();
    let table = gadget_case_table(params);
    let cases_ok = case_table_matches(&table);
    let cover = clock.time("subdivision_check", || subdivision_cover_check(&embedding, budget))?;
    let equivalence = clock.time("equivalence_check", || {
        reduction_equivalence_check(&embedding, params, max_k, budget)
    })?;
    let mut out = Report::new(json!({
        "case_table": table,
        "case_table_matches": cases_ok,
        "subdivision": cover,
        "equivalence": equivalence,
    }));
    out.table = Some(equivalence.rows.iter().map(to_json).collect());
    out.failed = !(cases_ok && cover.all_agree && equivalence.all_agree);
    out.timings = clock.0;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn bench(
    path: &Path,
    k: usize,
    queries: usize,
    repeats: usize,
    ladder: &[usize],
    query_seed: u64,
    naive_cap: usize,
    start: StartPolicy,
) -> CmdResult {
    if repeats < MIN_REPEATS {
        return Err(Failure::Usage(format!("--repeats must be at least {MIN_REPEATS}")));
    }
    if queries == 0 {
        return Err(Failure::Usage("--queries must be positive".into()));
    }
    let (graph, _) = load_graph(path)?;
    let n = graph.vertex_count();
    if k > n {
        return Err(Error::KTooLarge { k, n }.into());
    }
    let (build_seconds, built) = time_median(repeats, || farthest_point_sampling_with_table(&graph, k, start));
    let (set, table) = built?;
    let oracle = Oracle::from_table(&graph, table)?;

    let mut ks: Vec<usize> = ladder.iter().copied().filter(|&x| x >= 1 && x <= k).collect();
    ks.push(k);
    ks.sort_unstable();
    ks.dedup();
    let pairs = random_pairs(n, queries, query_seed);
    let rows: Vec<Value> = ks
        .iter()
        .map(|&kk| {
            let seconds = time_queries(&oracle.prefix(kk), &pairs, repeats);
            json!({"k": kk, "seconds_per_query": seconds})
        })
        .collect();
    let fit = (ks.len() >= 2).then(|| {
        let xs: Vec<f64> = ks.iter().map(|&x| x as f64).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r["seconds_per_query"].as_f64().unwrap_or(0.0)).collect();
        linear_fit(&xs, &ys)
    });

    let (fast_seconds, fast) = time_median(repeats, || stretch_fast(&graph, &oracle));
    let fast = fast?;
    let naive = if n <= naive_cap {
        let (seconds, report) = time_median(repeats, || stretch_naive(&graph, &oracle, naive_cap));
        Some(json!({"seconds": seconds, "stretch": report?.stretch}))
    } else {
        None
    };
    let mut out = Report::new(json!({
        "graph": graph_summary(&graph),
        "k": k,
        "start": set.start,
        "repeats": repeats,
        "queries": queries,
        "build_seconds": build_seconds,
        "query_ladder": rows,
        "query_fit": fit,
        "stretch_fast": {"seconds": fast_seconds, "stretch": fast.stretch},
        "stretch_naive": naive,
    }));
    out.table = Some(rows);
    Ok(out)
}

fn gen_grid(rows: usize, cols: usize, output: &Path, off: bool) -> CmdResult {
    let mesh = grid_mesh(rows, cols)?;
    let mut writer = create(output)?;
    let graph = mesh.to_graph()?;
    if off {
        write_off(&mesh, &mut writer)?;
    } else {
        write_edge_list(&graph, &mut writer)?;
    }
    writer.flush()?;
    Ok(Report::new(json!({
        "output": output,
        "graph": graph_summary(&graph),
        "faces": mesh.faces().len(),
    })))
}

fn gen_random(n: usize, extra: usize, mixed: bool, seed: u64, output: &Path) -> CmdResult {
    let lengths = if mixed { Lengths::Uniform(0.5, 2.0) } else { Lengths::Unit };
    let graph = random_connected_graph(n, extra, lengths, seed)?;
    let mut writer = create(output)?;
    write_edge_list(&graph, &mut writer)?;
    writer.flush()?;
    Ok(Report::new(json!({
        "output": output,
        "graph": graph_summary(&graph),
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn start_policy_from_flags() {
        let s = StartArgs { start: Some(3), seed: None };
        assert_eq!(s.policy(), StartPolicy::Vertex(3));
        let s = StartArgs { start: None, seed: Some(9) };
        assert_eq!(s.policy(), StartPolicy::Seeded(9));
        let s = StartArgs { start: None, seed: None };
        assert_eq!(s.policy(), StartPolicy::Vertex(0));
    }

    #[test]
    fn flatten_nested() {
        let mut out = Vec::new();
        flatten("", &json!({"a": {"b": 1, "c": [1, 2]}, "d": [{"e": null}]}), &mut out);
        assert_eq!(
            out,
            vec![
                ("a.b".to_string(), "1".to_string()),
                ("a.c".to_string(), "[1,2]".to_string()),
                ("d.0.e".to_string(), String::new()),
            ]
        );
    }
}
