use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use bcp_core::bcep::{solve_bcep2_with, BcepOptions};
use bcp_core::dp::solve_bcp2_tw_with;
use bcp_core::field::DEFAULT_BITS;
use bcp_core::generators::{gen_clique_reduction, gen_composition, gen_random, Generated, RandomKind, RandomParams};
use bcp_core::io::{emit_solution, parse_graph, parse_points, parse_solution, write_graph, write_points, Witness};
use bcp_core::oracle::{solve_bcep2_oracle, solve_bcp2_oracle};
use bcp_core::planar::solve_bcp2_planar_stats;
use bcp_core::treedecomp::{make_nice, min_fill_decomposition};
use bcp_core::udg::{solve_bcp2_udg_stats, DiskInstance};
use bcp_core::{verify_bcep2, verify_bcp2, BcepSemantics, Error, Graph, Stats, VertexPartitionWitness};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bcp", version, about = "Balanced connected 2-partition solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a vertex partition instance.
    Solve(SolveArgs),
    /// Decide an edge partition instance.
    EdgeSolve(EdgeSolveArgs),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Check a solution document against an instance.
    Verify(VerifyArgs),
    /// Run engines over instances and print CSV.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Input {
    /// Graph file (`p n m` header, `e u v` lines).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Point file (`x y` per line); edges join points within the threshold.
    #[arg(long)]
    points: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Engine {
    Auto,
    Oracle,
    Treewidth,
    Planar,
    Udg,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EdgeEngine {
    Auto,
    Oracle,
    Matroid,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    n1: usize,
    #[arg(long, value_enum, default_value = "auto")]
    engine: Engine,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 1.0)]
    threshold: f64,
    /// Accepted for uniformity; vertex engines are deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Omit elapsed_ms so output is byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
    /// Print the nice tree decomposition (anchors 0 and 1) to stderr.
    #[arg(long)]
    dump_td: bool,
}

#[derive(Args)]
struct EdgeSolveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    n1: usize,
    #[arg(long, value_enum, default_value = "auto")]
    engine: EdgeEngine,
    #[arg(long)]
    semantics: Option<BcepSemantics>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BITS)]
    field_bits: u32,
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Clique gadget; n1 is written as a comment line.
    CliqueReduction {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Chained copies of planar instances sharing n1 = k.
    Composition {
        #[arg(long = "graph", required = true)]
        graphs: Vec<PathBuf>,
        #[arg(long)]
        k: usize,
    },
    Random {
        #[arg(long, value_parser = parse_kind)]
        kind: RandomKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = RandomParams::default().density)]
        density: f64,
        #[arg(long, default_value_t = RandomParams::default().width)]
        width: f64,
        #[arg(long, default_value_t = RandomParams::default().height)]
        height: f64,
    },
}

fn parse_kind(s: &str) -> Result<RandomKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    n1: usize,
    #[arg(long)]
    solution: PathBuf,
    #[arg(long, default_value = "spanning")]
    semantics: BcepSemantics,
    #[arg(long, default_value_t = 1.0)]
    threshold: f64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long = "graph", required = true)]
    graphs: Vec<PathBuf>,
    #[arg(long)]
    n1: usize,
    #[arg(long = "engine", value_enum, default_values = ["treewidth"])]
    engines: Vec<Engine>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    no_timing: bool,
}

enum Failure {
    Usage(anyhow::Error),
    Limit(String),
    Rejected(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::Limit(msg)) => Failure::Limit(msg.clone()),
            _ => Failure::Usage(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

type Outcome<T> = Result<T, Failure>;

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    parse_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_disk(path: &Path, threshold: f64) -> anyhow::Result<DiskInstance> {
    let pts = parse_points(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(DiskInstance::build(pts, threshold)?)
}

fn engine_name(e: Engine) -> &'static str {
    match e {
        Engine::Auto => "auto",
        Engine::Oracle => "oracle",
        Engine::Treewidth => "treewidth",
        Engine::Planar => "planar",
        Engine::Udg => "udg",
    }
}

/// Runs one vertex engine; `auto` resolves to a concrete engine first.
fn run_vertex(
    g: &Graph,
    disk: Option<&DiskInstance>,
    n1: usize,
    engine: Engine,
    jobs: usize,
) -> Outcome<(Option<VertexPartitionWitness>, Stats, &'static str)> {
    let engine = match engine {
        Engine::Auto if disk.is_some() => Engine::Udg,
        Engine::Auto => {
            return match solve_bcp2_tw_with(g, n1, jobs) {
                Ok((w, s)) => Ok((w, s, "treewidth")),
                Err(Error::Limit(msg)) => {
                    eprintln!("treewidth engine gave up ({msg}); falling back to the oracle");
                    Ok((solve_bcp2_oracle(g, n1)?, Stats::new(), "oracle"))
                }
                Err(e) => Err(e.into()),
            };
        }
        e => e,
    };
    let (w, s) = match engine {
        Engine::Oracle => (solve_bcp2_oracle(g, n1)?, Stats::new()),
        Engine::Treewidth => solve_bcp2_tw_with(g, n1, jobs)?,
        Engine::Planar => solve_bcp2_planar_stats(g, n1)?,
        Engine::Udg => {
            let di = disk.ok_or_else(|| Failure::Usage(anyhow!("the udg engine needs --points")))?;
            solve_bcp2_udg_stats(di, n1)?
        }
        Engine::Auto => unreachable!(),
    };
    Ok((w, s, engine_name(engine)))
}

fn load_input(input: &Input, threshold: f64) -> anyhow::Result<(Graph, Option<DiskInstance>)> {
    match (&input.graph, &input.points) {
        (Some(path), None) => Ok((load_graph(path)?, None)),
        (None, Some(path)) => {
            let di = load_disk(path, threshold)?;
            Ok((di.graph.clone(), Some(di)))
        }
        _ => Err(anyhow!("give exactly one of --graph and --points")),
    }
}

fn solve(args: SolveArgs) -> Outcome<()> {
    let (g, disk) = load_input(&args.input, args.threshold)?;
    if args.jobs == 0 {
        return Err(Failure::Usage(anyhow!("--jobs must be at least 1")));
    }
    if args.dump_td && g.vertex_count() >= 2 {
        let ntd = make_nice(&min_fill_decomposition(&g), &g, 0, 1)?;
        eprint!("{}", ntd.dump());
    }
    let start = Instant::now();
    let (w, mut stats, name) = run_vertex(&g, disk.as_ref(), args.n1, args.engine, args.jobs)?;
    if let Some(w) = &w {
        if !verify_bcp2(&g, w, args.n1)? {
            return Err(Failure::Rejected(format!("{name} engine returned an invalid witness")));
        }
    }
    stats.set("seed", args.seed);
    if !args.no_timing {
        stats.set("elapsed_ms", start.elapsed().as_millis() as u64);
    }
    print!("{}", emit_solution(w.map(Witness::Vertex).as_ref(), name, args.n1, &stats));
    Ok(())
}

fn edge_solve(args: EdgeSolveArgs) -> Outcome<()> {
    let g = load_graph(&args.graph)?;
    let semantics = args.semantics.unwrap_or_else(|| {
        eprintln!("note: no --semantics given; using spanning (G − E₁ must stay connected on all vertices)");
        BcepSemantics::Spanning
    });
    let engine = match (args.engine, semantics) {
        (EdgeEngine::Matroid, BcepSemantics::EdgeInduced) => {
            return Err(Failure::Usage(anyhow!("the matroid engine supports only spanning semantics")));
        }
        (EdgeEngine::Auto, BcepSemantics::Spanning) => EdgeEngine::Matroid,
        (EdgeEngine::Auto, BcepSemantics::EdgeInduced) => EdgeEngine::Oracle,
        (e, _) => e,
    };
    let start = Instant::now();
    let (w, mut stats, name) = match engine {
        EdgeEngine::Matroid => {
            let opts = BcepOptions {
                seed: args.seed,
                field_bits: args.field_bits,
            };
            let (w, s) = solve_bcep2_with(&g, args.n1, opts)?;
            (w, s, "matroid")
        }
        _ => (solve_bcep2_oracle(&g, args.n1, semantics)?, Stats::new(), "oracle"),
    };
    if let Some(w) = &w {
        if !verify_bcep2(&g, w, args.n1, semantics)? {
            return Err(Failure::Rejected(format!("{name} engine returned an invalid witness")));
        }
    }
    stats.set("seed", args.seed);
    stats.set("semantics", semantics.to_string());
    if !args.no_timing {
        stats.set("elapsed_ms", start.elapsed().as_millis() as u64);
    }
    print!("{}", emit_solution(w.map(Witness::Edge).as_ref(), name, args.n1, &stats));
    Ok(())
}

fn generate(cmd: GenCommand) -> Outcome<()> {
    match cmd {
        GenCommand::CliqueReduction { graph, k } => {
            let r = gen_clique_reduction(&load_graph(&graph)?, k)?;
            if r.degenerate {
                eprintln!("warning: n1 = {} leaves the second side empty", r.n1);
            }
            print!("# n1 {}\n{}", r.n1, write_graph(&r.graph));
        }
        GenCommand::Composition { graphs, k } => {
            let inputs = graphs
                .iter()
                .map(|p| Ok((load_graph(p)?, k)))
                .collect::<anyhow::Result<Vec<_>>>()?;
            print!("# n1 {k}\n{}", write_graph(&gen_composition(&inputs, k)?));
        }
        GenCommand::Random {
            kind,
            n,
            seed,
            density,
            width,
            height,
        } => {
            let params = RandomParams {
                density,
                width,
                height,
            };
            match gen_random(kind, n, seed, params)? {
                Generated::Graph(g) => print!("{}", write_graph(&g)),
                Generated::Points(p) => print!("{}", write_points(&p)),
            }
        }
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Outcome<()> {
    let (g, _) = load_input(&args.input, args.threshold)?;
    let witness = parse_solution(&read(&args.solution)?)?;
    let ok = match &witness {
        None => {
            println!("no witness to check");
            return Ok(());
        }
        Some(Witness::Vertex(w)) => verify_bcp2(&g, w, args.n1)?,
        Some(Witness::Edge(w)) => verify_bcep2(&g, w, args.n1, args.semantics)?,
    };
    if ok {
        println!("valid");
        Ok(())
    } else {
        Err(Failure::Rejected("witness rejected".into()))
    }
}

fn bench(args: BenchArgs) -> Outcome<()> {
    let mut out = csv::Writer::from_writer(std::io::stdout());
    let io = |e: csv::Error| Failure::Usage(e.into());
    out.write_record(["instance", "engine", "answer", "states", "elapsed_ms"]).map_err(io)?;
    for path in &args.graphs {
        let g = load_graph(path)?;
        for &engine in &args.engines {
            let start = Instant::now();
            let (answer, states) = match run_vertex(&g, None, args.n1, engine, args.jobs) {
                Ok((w, stats, _)) => {
                    if let Some(w) = &w {
                        if !verify_bcp2(&g, w, args.n1)? {
                            return Err(Failure::Rejected(format!("{} on {}", engine_name(engine), path.display())));
                        }
                    }
                    let states = stats.get_u64("states").unwrap_or(0);
                    (if w.is_some() { "yes" } else { "no" }, states.to_string())
                }
                Err(Failure::Limit(_)) => ("limit", String::new()),
                Err(e) => return Err(e),
            };
            let elapsed = if args.no_timing {
                0
            } else {
                start.elapsed().as_millis()
            };
            out.write_record([
                path.display().to_string(),
                engine_name(engine).to_string(),
                answer.to_string(),
                states,
                elapsed.to_string(),
            ])
            .map_err(io)?;
        }
    }
    out.flush().map_err(|e| Failure::Usage(e.into()))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::EdgeSolve(a) => edge_solve(a),
        Command::Gen(c) => generate(c),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Limit(msg)) => {
            eprintln!("error: engine limit exceeded: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Rejected(msg)) => {
            eprintln!("error: verifier rejected: {msg}");
            ExitCode::from(4)
        }
    }
}
