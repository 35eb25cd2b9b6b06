use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use cdc_embed::embedding::{
    analyze, parse_embedding, verify_fdc, EmbeddingError, DEFAULT_ENUMERATION_GUARD,
};
use cdc_embed::graph::{
    cyclic_edge_connectivity, generate_gn, generate_k33, generate_k4, generate_petersen,
    generate_prism, generate_random_cubic_bridgeless, generate_theta, parse_graph, to_edge_list,
    to_graph6, CubicGraph, CyclicConnectivity, GraphFormat,
};
use cdc_embed::oracle::{
    check_petersen_nonextension, min_singular_exhaustive, petersen_nonextension_by_filter,
};
use cdc_embed::pipelines::{
    embed_half_n, embed_over_2k, embed_tenth_n, write_report, BoundName, PipelineError,
    PipelineResult,
};
use cdc_embed::tree_packing::pipeline_cyclically_2k;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "cdc",
    version,
    about = "Embeddings of bridgeless cubic graphs with few singular edges"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an embedding with one of the constructive strategies.
    Embed(EmbedArgs),
    /// Re-trace an embedding and check that its faces double cover the edges.
    Verify(VerifyArgs),
    /// Exhaustive searches.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Write a generated graph.
    Gen(GenArgs),
    /// Run every applicable strategy on each graph of a directory, as CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Graph6,
    EdgeList,
}

impl From<Format> for GraphFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Graph6 => GraphFormat::Graph6,
            Format::EdgeList => GraphFormat::EdgeList,
        }
    }
}

#[derive(Args)]
struct GraphInput {
    #[arg(long, short)]
    input: PathBuf,
    /// Defaults to graph6 for `.g6` files and edge_list otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct EmbedArgs {
    #[command(flatten)]
    graph: GraphInput,
    #[arg(long, short, value_parser = parse_strategy)]
    strategy: BoundName,
    /// Connectivity parameter for over-2k and cyclic-2k; computed when omitted.
    #[arg(long)]
    k: Option<usize>,
    /// Accepted for uniformity; every strategy is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    graph: GraphInput,
    #[arg(long, short)]
    embedding: PathBuf,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Fewest singular edges over all embeddings of a small graph.
    MinSingular {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_GUARD)]
        guard: usize,
    },
    /// Every extension of the two Petersen 5-circuits has a singular edge.
    PetersenExtension {
        /// Also filter all normalised embeddings as a cross-check.
        #[arg(long)]
        slow: bool,
    },
}

#[derive(Args)]
struct GenArgs {
    /// petersen | prism | k4 | theta | k33 | gn N | random N SEED
    #[arg(required = true, num_args = 1..=3)]
    spec: Vec<String>,
    #[arg(long, value_enum, default_value = "edge-list")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    dir: PathBuf,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Write 0 in the wall_ms column so output is reproducible.
    #[arg(long)]
    no_timing: bool,
}

fn parse_strategy(s: &str) -> Result<BoundName, String> {
    s.parse()
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code,
            error: error.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = if e.is_precondition() { 3 } else { 4 };
        Failure::new(code, e)
    }
}

type CliResult = Result<(), Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| Failure::new(2, e))
}

fn format_of(path: &Path, format: Option<Format>) -> GraphFormat {
    match format {
        Some(f) => f.into(),
        None if path.extension().is_some_and(|e| e == "g6") => GraphFormat::Graph6,
        None => GraphFormat::EdgeList,
    }
}

fn load_graph(input: &GraphInput) -> Result<CubicGraph, Failure> {
    load_path(&input.input, input.format)
}

fn load_path(path: &Path, format: Option<Format>) -> Result<CubicGraph, Failure> {
    let bytes = read(path)?;
    parse_graph(&bytes, format_of(path, format))
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(|e| Failure::new(2, e))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// k for the cyclic-2k strategy: half the exact cyclic edge connectivity.
fn auto_2k(g: &CubicGraph) -> Result<usize, PipelineError> {
    match cyclic_edge_connectivity(g) {
        Ok(CyclicConnectivity::Finite { value, .. }) if value >= 2 => Ok(value / 2),
        Ok(c) => Err(PipelineError::CyclicConnectivityTooLow {
            required: 2,
            actual: c.value(),
        }),
        Err(_) => Err(PipelineError::NeedExplicitK),
    }
}

fn run_strategy(
    g: &CubicGraph,
    strategy: BoundName,
    k: Option<usize>,
) -> Result<PipelineResult, PipelineError> {
    match strategy {
        BoundName::HalfN => embed_half_n(g),
        BoundName::TenthN => embed_tenth_n(g),
        BoundName::Over2k => embed_over_2k(g, k),
        BoundName::Cyclic2k => {
            let k = match k {
                Some(k) => k,
                None => auto_2k(g)?,
            };
            pipeline_cyclically_2k(g, k)
        }
    }
}

fn cmd_embed(args: EmbedArgs) -> CliResult {
    let g = load_graph(&args.graph)?;
    let result = run_strategy(&g, args.strategy, args.k)?;
    let report = write_report(&g, &result);
    emit(args.out.as_deref(), &report)?;
    if args.out.is_some() {
        println!(
            "singular {} ≤ {} ({}), bender-richmond bound {}",
            result.singular_count(),
            result.bound(),
            result.bound_name,
            result.report.bender_richmond_bound
        );
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> CliResult {
    let g = load_graph(&args.graph)?;
    let text = read(&args.embedding)?;
    let text = String::from_utf8(text).map_err(|e| Failure::new(2, e))?;
    let emb = parse_embedding(&g, &text).map_err(|e| {
        let code = match e {
            EmbeddingError::Syntax { .. } => 2,
            _ => 1,
        };
        Failure::new(code, e)
    })?;
    let report = analyze(&g, &emb);
    let mut s = String::new();
    for f in &report.faces {
        writeln!(s, "face {}: {f}", f.len()).unwrap();
    }
    let singular: Vec<String> = report.singular.iter().map(|e| e.to_string()).collect();
    writeln!(s, "faces: {}", report.face_count).unwrap();
    writeln!(
        s,
        "singular: {} [{}]",
        report.singular.len(),
        singular.join(" ")
    )
    .unwrap();
    writeln!(s, "chi: {}", report.euler_characteristic).unwrap();
    writeln!(s, "orientable: {}", report.orientable).unwrap();
    writeln!(s, "surface: {}", report.surface).unwrap();
    print!("{s}");
    verify_fdc(&g, &report.faces)
        .map_err(|e| Failure::new(1, anyhow!("verification failed: {e}")))?;
    println!("ok");
    Ok(())
}

fn cmd_oracle(cmd: OracleCommand) -> CliResult {
    match cmd {
        OracleCommand::MinSingular { graph, guard } => {
            let g = load_graph(&graph)?;
            let (count, witness) =
                min_singular_exhaustive(&g, guard).map_err(|e| Failure::new(3, e))?;
            println!("# min singular: {count}");
            print!("{}", cdc_embed::embedding::write_embedding(&g, &witness));
        }
        OracleCommand::PetersenExtension { slow } => {
            let r = check_petersen_nonextension();
            println!("extensions enumerated: {}", r.extensions);
            println!("min singular over extensions: {}", r.min_singular);
            println!(
                "other faces divisible by 4: {}",
                r.other_faces_divisible_by_4
            );
            let lengths: Vec<String> = r.circuit_lengths.iter().map(|l| l.to_string()).collect();
            println!("circuit lengths: {}", lengths.join(" "));
            println!("no 4- or 12-circuit: {}", r.no_4_or_12_circuit);
            if slow {
                let (hits, min) = petersen_nonextension_by_filter();
                println!("normalised embeddings with both circuits facial: {hits}");
                println!("min singular by filtering: {min}");
                if min != r.min_singular {
                    return Err(Failure::new(
                        4,
                        anyhow!("filter disagrees with enumeration"),
                    ));
                }
            }
            if r.min_singular == 0 {
                return Err(Failure::new(
                    4,
                    anyhow!("an extension without singular edges exists"),
                ));
            }
        }
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> CliResult {
    let usage = || {
        Failure::new(
            2,
            anyhow!("expected petersen | prism | k4 | theta | k33 | gn N | random N SEED"),
        )
    };
    let int = |s: Option<&String>| -> Result<u64, Failure> {
        s.ok_or_else(usage)?
            .parse()
            .map_err(|_| Failure::new(2, anyhow!("expected an integer, got {s:?}")))
    };
    let spec = &args.spec;
    let g = match spec[0].as_str() {
        "petersen" => generate_petersen(),
        "prism" => generate_prism(),
        "k4" => generate_k4(),
        "theta" => generate_theta(),
        "k33" => generate_k33(),
        "gn" => {
            generate_gn(int(spec.get(1))? as usize, args.seed).map_err(|e| Failure::new(3, e))?
        }
        "random" => {
            let seed = match spec.get(2) {
                Some(_) => int(spec.get(2))?,
                None => args.seed,
            };
            generate_random_cubic_bridgeless(int(spec.get(1))? as usize, seed)
                .map_err(|e| Failure::new(3, e))?
        }
        _ => return Err(usage()),
    };
    let text = match args.format {
        Format::EdgeList => to_edge_list(&g),
        Format::Graph6 => to_graph6(&g).map_err(|e| Failure::new(3, e))? + "\n",
    };
    emit(args.out.as_deref(), &text)
}

struct Row {
    name: String,
    n: usize,
    strategy: BoundName,
    bound: usize,
    singular: usize,
    chi: i64,
    orientable: bool,
    br_bound: usize,
    wall_ms: u128,
}

fn cmd_bench(args: BenchArgs) -> CliResult {
    let mut files: Vec<PathBuf> = fs::read_dir(&args.dir)
        .with_context(|| format!("reading {}", args.dir.display()))
        .map_err(|e| Failure::new(2, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    let graphs = files
        .iter()
        .map(|p| {
            let name = p
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            load_path(p, None).map(|g| (name, g))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, BoundName)> = (0..graphs.len())
        .flat_map(|i| BoundName::ALL.into_iter().map(move |s| (i, s)))
        .collect();
    let results: Vec<Option<Result<Row, PipelineError>>> = jobs
        .par_iter()
        .map(|&(i, strategy)| {
            let (name, g) = &graphs[i];
            let start = Instant::now();
            match run_strategy(g, strategy, None) {
                Ok(r) => Some(Ok(Row {
                    name: name.clone(),
                    n: g.vertex_count(),
                    strategy,
                    bound: r.bound(),
                    singular: r.singular_count(),
                    chi: r.report.euler_characteristic,
                    orientable: r.report.orientable,
                    br_bound: r.report.bender_richmond_bound,
                    wall_ms: if args.no_timing {
                        0
                    } else {
                        start.elapsed().as_millis()
                    },
                })),
                Err(e) if e.is_precondition() => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect();
    let mut rows = Vec::new();
    for r in results.into_iter().flatten() {
        rows.push(r?);
    }
    rows.sort_by(|a, b| (&a.name, a.strategy.strategy()).cmp(&(&b.name, b.strategy.strategy())));
    let mut csv = String::from("name,n,strategy,bound,singular,chi,orientable,br_bound,wall_ms\n");
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            r.name,
            r.n,
            r.strategy,
            r.bound,
            r.singular,
            r.chi,
            r.orientable,
            r.br_bound,
            r.wall_ms
        )
        .unwrap();
    }
    emit(args.out.as_deref(), &csv)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Embed(a) => cmd_embed(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Oracle(c) => cmd_oracle(c),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
