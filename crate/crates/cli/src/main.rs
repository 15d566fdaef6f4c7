//! `dcm`: compute, screen, recognize, and construct distance-count matrices.
//!
//! Exit codes: 0 yes/pass/positive, 1 no/reject/negative, 2 error, 3 unknown.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dcm_core::generate::{random_graph, rng_from_seed, DEFAULT_SEED};
use dcm_core::matrices::{parse_matrix, ParsedMatrix};
use dcm_core::reduction::{parse_solution, parse_tpp};
use dcm_core::sequences::parse_sequence;
use dcm_core::{
    build_gadget, build_matrix, cdcm_of, dcm_of, erdos_gallai_check, havel_hakimi,
    realize_good_sequence, recognize, screen, solve_tpp, BoundMode, Candidate, CdcMatrix,
    DcMatrix, DegreeSequence, GoodSequence, Graph, MatchPolicy, MatrixKind, Orientation,
    PredecessorBoundConfig, RecognitionOutcome, SearchLimits, TppOutcome, UnknownReason,
};

const EXIT_PASS: u8 = 0;
const EXIT_REJECT: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "dcm", version, about = "Distance-count matrix toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the DCM (or CDCM) of a graph file.
    Compute(ComputeArgs),
    /// Screen a candidate matrix with sound necessary conditions.
    Check(CheckArgs),
    /// Decide exactly whether a matrix is the (C)DCM of some graph.
    Recognize(RecognizeArgs),
    /// Emit the candidate matrix of a three-partition instance.
    Reduce(ReduceArgs),
    /// Build the witness graph of a solved three-partition instance.
    Gadget(GadgetArgs),
    /// Solve a three-partition instance exactly.
    SolveTpp(SolveTppArgs),
    /// Realize a good sequence as a graph whose cumulative row 0 matches.
    RealizeGood(RealizeGoodArgs),
    /// Test (and optionally realize) a degree sequence.
    Degseq(DegseqArgs),
    /// Generate a seeded random graph in the graph text format.
    RandomGraph(RandomGraphArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Directed,
    Undirected,
}

impl From<ModeArg> for Orientation {
    fn from(mode: ModeArg) -> Orientation {
        match mode {
            ModeArg::Directed => Orientation::Directed,
            ModeArg::Undirected => Orientation::Undirected,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Dcm,
    Cdcm,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Erdős–Gallai inequalities.
    Eg,
    /// Havel–Hakimi elimination (constructive).
    Hh,
}

#[derive(Args)]
struct ComputeArgs {
    /// Graph file (`D <n>`/`U <n>` header, one `tail head` pair per line).
    graph: PathBuf,
    /// Emit the cumulative matrix instead of the plain one.
    #[arg(long)]
    cumulative: bool,
    /// Sort rows lexicographically before printing.
    #[arg(long)]
    canonical: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Matrix file (`DCM`/`CDCM` marker, then n rows of n integers).
    matrix: PathBuf,
    /// Override the kind marker in the file.
    #[arg(long)]
    kind: Option<KindArg>,
    #[arg(long, value_enum, default_value_t = ModeArg::Directed)]
    mode: ModeArg,
    /// Also search for an explicit predecessor subset per row.
    #[arg(long)]
    exact_bounds: bool,
    /// Node budget for the exact subset search, per row.
    #[arg(long, default_value_t = 1_000_000)]
    subset_budget: u64,
    /// Emit line-oriented key=value records instead of prose.
    #[arg(long)]
    machine: bool,
}

#[derive(Args)]
struct RecognizeArgs {
    matrix: PathBuf,
    /// Override the kind marker in the file.
    #[arg(long)]
    kind: Option<KindArg>,
    #[arg(long, value_enum, default_value_t = ModeArg::Directed)]
    mode: ModeArg,
    /// Refuse to search matrices larger than this.
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    /// Time budget in seconds.
    #[arg(long, default_value_t = 60)]
    timeout: u64,
    /// Search-node budget.
    #[arg(long)]
    node_budget: Option<u64>,
    /// Match rows as a multiset instead of binding them to node ids.
    #[arg(long)]
    permute: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Instance file: a line holding m, then one line of 3m integers.
    tpp: PathBuf,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GadgetArgs {
    tpp: PathBuf,
    /// Solve the instance first.
    #[arg(long, conflicts_with = "solution")]
    solve: bool,
    /// Use a solution file (m lines of three 0-based indices).
    #[arg(long)]
    solution: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveTppArgs {
    tpp: PathBuf,
}

#[derive(Args)]
struct RealizeGoodArgs {
    /// Sequence file: one line of integers.
    sequence: PathBuf,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DegseqArgs {
    sequence: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Print a realization (requires --method hh).
    #[arg(long)]
    realize: bool,
}

#[derive(Args)]
struct RandomGraphArgs {
    #[arg(long)]
    nodes: usize,
    /// Independent arc probability.
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Undirected)]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Compute(args) => cmd_compute(args),
        Command::Check(args) => cmd_check(args),
        Command::Recognize(args) => cmd_recognize(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Gadget(args) => cmd_gadget(args),
        Command::SolveTpp(args) => cmd_solve_tpp(args),
        Command::RealizeGood(args) => cmd_realize_good(args),
        Command::Degseq(args) => cmd_degseq(args),
        Command::RandomGraph(args) => cmd_random_graph(args),
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read_file(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Parsed matrix with an optional kind override from the command line.
fn load_candidate(path: &Path, kind: Option<KindArg>) -> Result<(MatrixKind, Vec<Vec<u64>>)> {
    let ParsedMatrix { kind: marker, rows } =
        parse_matrix(&read_file(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let kind = match kind {
        Some(KindArg::Dcm) => MatrixKind::Dcm,
        Some(KindArg::Cdcm) => MatrixKind::Cdcm,
        None => marker,
    };
    Ok((kind, rows))
}

fn cmd_compute(args: ComputeArgs) -> Result<u8> {
    let g = load_graph(&args.graph)?;
    let text = if args.cumulative {
        let mut m = cdcm_of(&g);
        if args.canonical {
            m = m.canonicalize();
        }
        m.to_string()
    } else {
        let mut m = dcm_of(&g);
        if args.canonical {
            m = m.canonicalize();
        }
        m.to_string()
    };
    emit(args.output.as_deref(), &text)?;
    Ok(EXIT_PASS)
}

fn cmd_check(args: CheckArgs) -> Result<u8> {
    let (kind, rows) = load_candidate(&args.matrix, args.kind)?;
    let cfg = PredecessorBoundConfig {
        mode: if args.exact_bounds { BoundMode::Exact } else { BoundMode::Relaxed },
        budget: args.subset_budget,
    };
    let report = match kind {
        MatrixKind::Dcm => {
            let m = DcMatrix::from_rows(rows)?;
            screen(Candidate::Dcm(&m), args.mode.into(), &cfg)
        }
        MatrixKind::Cdcm => {
            let m = CdcMatrix::from_rows(rows)?;
            screen(Candidate::Cdcm(&m), args.mode.into(), &cfg)
        }
    };
    print!("{}", if args.machine { report.render_machine() } else { report.render_text() });
    Ok(if report.passed() { EXIT_PASS } else { EXIT_REJECT })
}

fn cmd_recognize(args: RecognizeArgs) -> Result<u8> {
    let (kind, rows) = load_candidate(&args.matrix, args.kind)?;
    let limits = SearchLimits {
        max_nodes: args.max_n,
        time_budget: Duration::from_secs(args.timeout),
        expansion_budget: args.node_budget.unwrap_or(u64::MAX),
        policy: if args.permute { MatchPolicy::UpToPermutation } else { MatchPolicy::FixedRows },
    };
    let mode: Orientation = args.mode.into();
    let outcome = match kind {
        MatrixKind::Dcm => {
            let m = DcMatrix::from_rows(rows)?;
            recognize(Candidate::Dcm(&m), mode, &limits)
        }
        MatrixKind::Cdcm => {
            let m = CdcMatrix::from_rows(rows)?;
            recognize(Candidate::Cdcm(&m), mode, &limits)
        }
    };
    let stats = outcome.stats();
    let mut text = String::new();
    let code = match &outcome {
        RecognitionOutcome::Yes { witness, .. } => {
            text.push_str("# verdict=yes\n");
            text.push_str(&format!(
                "# explored={} elapsed_ms={}\n",
                stats.expansions,
                stats.elapsed.as_millis()
            ));
            text.push_str(&witness.to_string());
            EXIT_PASS
        }
        RecognitionOutcome::No { .. } => {
            text.push_str("# verdict=no\n");
            text.push_str(&format!(
                "# explored={} elapsed_ms={}\n",
                stats.expansions,
                stats.elapsed.as_millis()
            ));
            EXIT_REJECT
        }
        RecognitionOutcome::Unknown { reason, .. } => {
            let reason = match reason {
                UnknownReason::NodeLimit => "node-limit",
                UnknownReason::TimeBudget => "time-budget",
                UnknownReason::ExpansionBudget => "expansion-budget",
            };
            text.push_str(&format!("# verdict=unknown reason={reason}\n"));
            text.push_str(&format!(
                "# explored={} elapsed_ms={}\n",
                stats.expansions,
                stats.elapsed.as_millis()
            ));
            EXIT_UNKNOWN
        }
    };
    emit(args.output.as_deref(), &text)?;
    Ok(code)
}

fn cmd_reduce(args: ReduceArgs) -> Result<u8> {
    let inst = parse_tpp(&read_file(&args.tpp)?)?;
    let matrix = build_matrix(&inst)?;
    emit(args.output.as_deref(), &matrix.to_string())?;
    Ok(EXIT_PASS)
}

fn cmd_gadget(args: GadgetArgs) -> Result<u8> {
    let inst = parse_tpp(&read_file(&args.tpp)?)?;
    let solution = if args.solve {
        match solve_tpp(&inst) {
            TppOutcome::Positive(sol) => sol,
            TppOutcome::Negative => {
                eprintln!("instance is negative; no witness graph exists");
                return Ok(EXIT_REJECT);
            }
            TppOutcome::Unknown => {
                eprintln!("instance exceeds the solver budget");
                return Ok(EXIT_UNKNOWN);
            }
        }
    } else {
        match &args.solution {
            Some(path) => parse_solution(&read_file(path)?)?,
            None => bail!("pass --solve or --solution <file>"),
        }
    };
    let (graph, layout) = build_gadget(&inst, &solution)?;
    let mut text = graph.to_string();
    for (node, role) in layout.roles().iter().enumerate() {
        text.push_str(&format!("# node {node} role {role}\n"));
    }
    emit(args.output.as_deref(), &text)?;
    Ok(EXIT_PASS)
}

fn cmd_solve_tpp(args: SolveTppArgs) -> Result<u8> {
    let inst = parse_tpp(&read_file(&args.tpp)?)?;
    match solve_tpp(&inst) {
        TppOutcome::Positive(sol) => {
            if let Some(t) = inst.target() {
                println!("# t={t}");
            }
            for triple in sol.triples() {
                let values: Vec<String> = triple
                    .iter()
                    .map(|&i| inst.values()[i].to_string())
                    .collect();
                println!(
                    "{} {} {}  # {} = t",
                    triple[0],
                    triple[1],
                    triple[2],
                    values.join(" + ")
                );
            }
            Ok(EXIT_PASS)
        }
        TppOutcome::Negative => {
            println!("negative");
            Ok(EXIT_REJECT)
        }
        TppOutcome::Unknown => {
            println!("unknown");
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn cmd_realize_good(args: RealizeGoodArgs) -> Result<u8> {
    let values = parse_sequence(&read_file(&args.sequence)?)?;
    match GoodSequence::new(values) {
        Ok(good) => {
            let g = realize_good_sequence(&good);
            emit(args.output.as_deref(), &g.to_string())?;
            Ok(EXIT_PASS)
        }
        Err(_) => {
            eprintln!("sequence is not good (must start at 1, strictly increase, then stay constant)");
            Ok(EXIT_REJECT)
        }
    }
}

fn cmd_degseq(args: DegseqArgs) -> Result<u8> {
    let values = parse_sequence(&read_file(&args.sequence)?)?;
    let d = DegreeSequence::new(values);
    match args.method {
        MethodArg::Eg => {
            if args.realize {
                bail!("--realize requires --method hh");
            }
            if erdos_gallai_check(&d) {
                println!("graphical");
                Ok(EXIT_PASS)
            } else {
                println!("not graphical");
                Ok(EXIT_REJECT)
            }
        }
        MethodArg::Hh => match havel_hakimi(&d) {
            Ok(g) => {
                println!("graphical");
                if args.realize {
                    print!("{g}");
                }
                Ok(EXIT_PASS)
            }
            Err(rej) => {
                println!("not graphical step={}", rej.step);
                Ok(EXIT_REJECT)
            }
        },
    }
}

fn cmd_random_graph(args: RandomGraphArgs) -> Result<u8> {
    if !(0.0..=1.0).contains(&args.density) {
        bail!("--density must be within [0, 1]");
    }
    let mut rng = rng_from_seed(args.seed);
    let g = random_graph(&mut rng, args.nodes, args.density, args.mode.into());
    emit(args.output.as_deref(), &g.to_string())?;
    Ok(EXIT_PASS)
}
