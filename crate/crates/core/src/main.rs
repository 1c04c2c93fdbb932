use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dmcs_core::baselines::{export_lp, DEFAULT_K, DEFAULT_NODE_LIMIT};
use dmcs_core::generator::{generate, topology_stats, GenConfig};
use dmcs_core::harness::{
    parse_list, run_compare, run_solver, summarize, write_records, Algorithm, CompareConfig,
    RunRecord, SolverOptions, RUN_COLUMNS, SUMMARY_COLUMNS,
};
use dmcs_core::multilevel::{MaxDelayScope, MultilevelNetwork};
use dmcs_core::network::{Delay, NodeId};
use dmcs_core::{validate_embedding, Error, Network, Request, SolutionDocument};

const EXIT_FEASIBLE: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "dmcs",
    version,
    about = "Delay-guaranteed minimum cost SFC embedding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random connected instance.
    Generate(GenerateArgs),
    /// Solve one request on an instance file.
    Solve(SolveArgs),
    /// Sweep sizes and seeds over several algorithms, writing CSV.
    Compare(CompareArgs),
    /// Print MSCP/MSDP for an instance or for generated instances.
    Stats(StatsArgs),
    /// Write the integer program for a request as an LP file.
    ExportLp(ExportLpArgs),
    /// Check a solution file against an instance and request.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON generator config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RequestArgs {
    #[arg(long)]
    source: NodeId,
    #[arg(long)]
    target: NodeId,
    #[arg(long)]
    chain_length: usize,
    #[arg(long)]
    delay_bound: Delay,
}

impl RequestArgs {
    fn request(&self) -> Request {
        Request::new(
            self.source,
            self.target,
            self.chain_length,
            self.delay_bound,
        )
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Candidates,
    All,
}

impl From<ScopeArg> for MaxDelayScope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Candidates => MaxDelayScope::Candidates,
            ScopeArg::All => MaxDelayScope::AllNodes,
        }
    }
}

#[derive(Args)]
struct SolverFlags {
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    node_limit: usize,
    /// Nodes the maximum node delay in the per-arc budget ranges over.
    #[arg(long, value_enum, default_value = "candidates")]
    max_delay_scope: ScopeArg,
}

impl SolverFlags {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            k: self.k,
            node_limit: self.node_limit,
            scope: self.max_delay_scope.into(),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    algo: String,
    #[command(flatten)]
    request: RequestArgs,
    #[command(flatten)]
    solver: SolverFlags,
    /// Solution document; stdout carries only the CSV row.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the multilevel network (greedy only) as JSON.
    #[arg(long)]
    dump_multilevel: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Sizes, e.g. `20,30` or `20..60:10`.
    #[arg(long, default_value = "20..60:10")]
    sizes: String,
    #[arg(long, default_value = "0..29")]
    seeds: String,
    /// Chain lengths, same list syntax.
    #[arg(long, default_value = "3")]
    chain_length: String,
    /// Comma-separated algorithms.
    #[arg(long, default_value = "greedy,ksp")]
    algo: String,
    /// Fixed delay bound; per-instance default when absent.
    #[arg(long)]
    delay_bound: Option<Delay>,
    #[arg(long)]
    p: Option<f64>,
    #[command(flatten)]
    solver: SolverFlags,
    /// Per-run CSV; the summary goes next to it as `<stem>_summary.csv`.
    #[arg(long)]
    csv: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long, conflicts_with_all = ["nodes", "seeds", "p"])]
    instance: Option<PathBuf>,
    /// Sizes to generate when no instance is given.
    #[arg(long)]
    nodes: Option<String>,
    #[arg(long, default_value = "0..19")]
    seeds: String,
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct ExportLpArgs {
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    request: RequestArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    #[command(flatten)]
    request: RequestArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_FEASIBLE
            });
        }
    };
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Stats(args) => cmd_stats(args),
        Command::ExportLp(args) => cmd_export_lp(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn load_network(path: &Path) -> Result<Network, Error> {
    Network::from_json(&fs::read_to_string(path)?)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<u8, Error> {
    let mut cfg = match &args.config {
        Some(path) => serde_json::from_str(&fs::read_to_string(path)?)?,
        None => GenConfig::default(),
    };
    if let Some(n) = args.nodes {
        cfg.n = n;
    }
    if args.p.is_some() {
        cfg.p = args.p;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let net = generate(&cfg)?;
    write_output(args.out.as_deref(), &(net.to_json() + "\n"))?;
    Ok(EXIT_FEASIBLE)
}

fn cmd_solve(args: SolveArgs) -> Result<u8, Error> {
    let algo: Algorithm = args.algo.parse()?;
    let net = load_network(&args.instance)?;
    let req = args.request.request();
    let opts = args.solver.options();

    if let Some(path) = &args.dump_multilevel {
        if algo != Algorithm::Greedy {
            return Err(Error::Validation(
                "--dump-multilevel applies to greedy only".into(),
            ));
        }
        // A structurally infeasible request has no multilevel network; the
        // solver below reports it.
        if let Ok(ml) = MultilevelNetwork::for_request(&net, &req, opts.scope) {
            let text = serde_json::to_string_pretty(&ml.dump(&net))?;
            fs::write(path, text + "\n")?;
        }
    }

    let (result, ms) = run_solver(&net, &req, algo, &opts);
    let doc = match &result {
        Ok(emb) => emb.to_document(),
        Err(e) if e.is_infeasible() => SolutionDocument::infeasible(algo.as_str()),
        Err(_) => return result.map(|_| EXIT_ERROR),
    };
    if let Some(path) = &args.out {
        fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")?;
    }

    let instance_id = args
        .instance
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let record = RunRecord::new(&instance_id, &net, None, algo, &req, &result, ms);
    write_records(io::stdout().lock(), &RUN_COLUMNS, &[record])?;

    match result {
        Ok(_) => Ok(EXIT_FEASIBLE),
        Err(e) => {
            eprintln!("infeasible: {e}");
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn summary_path(csv: &Path) -> PathBuf {
    let stem = csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    csv.with_file_name(format!("{stem}_summary.csv"))
}

fn cmd_compare(args: CompareArgs) -> Result<u8, Error> {
    let algorithms = args
        .algo
        .split(',')
        .map(|a| a.trim().parse())
        .collect::<Result<Vec<Algorithm>, Error>>()?;
    let cfg = CompareConfig {
        sizes: parse_list(&args.sizes)?,
        seeds: parse_list(&args.seeds)?,
        chain_lengths: parse_list(&args.chain_length)?,
        algorithms,
        delay_bound: args.delay_bound,
        p: args.p,
        options: args.solver.options(),
    };
    let rows = run_compare(&cfg);
    write_records(fs::File::create(&args.csv)?, &RUN_COLUMNS, &rows)?;

    let summary = summarize(&rows);
    write_records(
        fs::File::create(summary_path(&args.csv))?,
        &SUMMARY_COLUMNS,
        &summary,
    )?;
    write_records(io::stdout().lock(), &SUMMARY_COLUMNS, &summary)?;
    Ok(EXIT_FEASIBLE)
}

fn cmd_stats(args: StatsArgs) -> Result<u8, Error> {
    if let Some(path) = &args.instance {
        let stats = topology_stats(&load_network(path)?)?;
        println!("{}", serde_json::to_string_pretty(&stats)?);
        return Ok(EXIT_FEASIBLE);
    }
    let Some(nodes) = &args.nodes else {
        return Err(Error::Validation(
            "stats needs --instance or --nodes".into(),
        ));
    };
    let sizes: Vec<usize> = parse_list(nodes)?;
    let seeds: Vec<u64> = parse_list(&args.seeds)?;

    #[derive(serde::Serialize)]
    struct Row {
        n: usize,
        seeds: usize,
        mscp: f64,
        msdp: f64,
    }
    let mut rows = Vec::new();
    for n in sizes {
        let (mut mscp, mut msdp) = (0.0, 0.0);
        for &seed in &seeds {
            let cfg = GenConfig {
                p: args.p,
                ..GenConfig::new(n, seed)
            };
            let stats = topology_stats(&generate(&cfg)?)?;
            mscp += stats.mscp;
            msdp += stats.msdp;
        }
        let k = seeds.len() as f64;
        rows.push(Row {
            n,
            seeds: seeds.len(),
            mscp: mscp / k,
            msdp: msdp / k,
        });
    }
    write_records(io::stdout().lock(), &["n", "seeds", "mscp", "msdp"], &rows)?;
    Ok(EXIT_FEASIBLE)
}

fn cmd_export_lp(args: ExportLpArgs) -> Result<u8, Error> {
    let net = load_network(&args.instance)?;
    let lp = export_lp(&net, &args.request.request())?;
    write_output(args.out.as_deref(), &lp)?;
    Ok(EXIT_FEASIBLE)
}

fn cmd_validate(args: ValidateArgs) -> Result<u8, Error> {
    let net = load_network(&args.instance)?;
    let doc: SolutionDocument = serde_json::from_str(&fs::read_to_string(&args.solution)?)?;
    let Some(emb) = doc.to_embedding() else {
        println!("solution is marked infeasible");
        return Ok(EXIT_INFEASIBLE);
    };
    let report = validate_embedding(&net, &args.request.request(), &emb);
    print!("{report}");
    if report.passed() {
        Ok(EXIT_FEASIBLE)
    } else {
        Ok(EXIT_ERROR)
    }
}
