//! `netdens`: decompose, measure, generate, and compare graphs from the
//! command line.
//!
//! Every run is reproducible: all randomness flows from `--seed`, and a
//! missing seed is drawn once and printed so the run can be repeated.
//! Data outputs are byte-identical across reruns of the same invocation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;

use netdens::decompose::{decompose, verify_decomposition, DensityDecomposition};
use netdens::generate::{generate_from_spec, GenError, ModelKind, ModelSpec};
use netdens::graph::{parse_edgelist, write_edgelist, Graph, LabelMap, ParseOptions};
use netdens::metrics::{
    bhattacharyya, degree_distribution, density_distribution, edge_bias_report, AplMode,
    ClusteringMode, MetricReport,
};

#[derive(Parser)]
#[command(name = "netdens", version, about = "Density decomposition toolkit")]
struct Cli {
    /// Worker threads for sampled metrics; defaults to NETDENS_THREADS or
    /// all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a graph into its density rings.
    Decompose(DecomposeArgs),
    /// Report similarity, clustering, path length, and both distributions.
    Metrics(MetricsArgs),
    /// Build a graph from a model specification.
    Generate(GenerateArgs),
    /// Compare the distributions of two graphs.
    Compare(CompareArgs),
    /// Tabulate observed vs expected cross-ring edge fractions as CSV.
    EdgeBias(EdgeBiasArgs),
}

#[derive(clap::Args)]
struct DecomposeArgs {
    /// Edge-list file (whitespace or custom-separated, `#` comments).
    #[arg(long)]
    input: PathBuf,
    /// Destination for the decomposition JSON; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Re-check every ring's density window and the witness orientation;
    /// failures exit with status 3.
    #[arg(long)]
    verify: bool,
    /// Include the witness orientation (tail, head per edge) in the JSON.
    #[arg(long)]
    emit_orientation: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClusteringArg {
    /// Nodes with fewer than two neighbors enter the average as zero.
    Include,
    /// Nodes with fewer than two neighbors are left out of the average.
    Exclude,
}

#[derive(clap::Args)]
struct MetricsArgs {
    #[arg(long)]
    input: PathBuf,
    /// Destination for the metrics JSON; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Estimate path length from this many sampled sources instead of all.
    #[arg(long)]
    apl_sample: Option<usize>,
    /// Seed for sampling; drawn and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// How nodes with fewer than two neighbors enter the clustering
    /// average.
    #[arg(long, value_enum, default_value_t = ClusteringArg::Include)]
    clustering: ClusteringArg,
}

#[derive(clap::Args)]
struct GenerateArgs {
    /// Model description as JSON; inline flags below override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Model kind: rdd, hsw, sw, pa, gnp, regular, or ds.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// JSON file with an array of ring counts or fractions.
    #[arg(long)]
    dist: Option<PathBuf>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k_lattice: Option<usize>,
    #[arg(long)]
    n0: Option<usize>,
    /// Comma-separated degrees, e.g. 3,3,2,2.
    #[arg(long)]
    degree_sequence: Option<String>,
    /// Merge components with degree-preserving swaps (ds model).
    #[arg(long)]
    connect: bool,
    /// Generation seed; drawn and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Edge-list destination; the resolved spec is echoed alongside as
    /// `<output>.spec.json`.
    #[arg(long)]
    output: PathBuf,
}

#[derive(clap::Args)]
struct CompareArgs {
    #[arg(long)]
    input_a: PathBuf,
    #[arg(long)]
    input_b: PathBuf,
    /// Destination for the comparison JSON; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EdgeBiasArgs {
    #[arg(long)]
    input: PathBuf,
    /// Destination for the CSV; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Failures mapped onto the stable exit-code contract: 1 usage, 2 parse,
/// 3 verification, 4 infeasible specification.
enum CliError {
    Usage(String),
    Parse(String),
    Verify(String),
    Infeasible(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Verify(_) => 3,
            CliError::Infeasible(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Parse(m)
            | CliError::Verify(m)
            | CliError::Infeasible(m) => m,
        }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> CliError {
        match e {
            GenError::InvalidParameter(_) | GenError::MissingParameter { .. } => {
                CliError::Usage(e.to_string())
            }
            GenError::Infeasible(_) | GenError::OddDegreeSum | GenError::NotGraphical { .. } => {
                CliError::Infeasible(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version land here too; keep their zero status.
            let zero = e.exit_code() == 0;
            let _ = e.print();
            return ExitCode::from(if zero { 0 } else { 1 });
        }
    };
    configure_threads(cli.threads);
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn configure_threads(flag: Option<usize>) {
    let threads = flag.or_else(|| {
        std::env::var("NETDENS_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Decompose(args) => cmd_decompose(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Compare(args) => cmd_compare(args),
        Command::EdgeBias(args) => cmd_edge_bias(args),
    }
}

fn load_graph(path: &Path) -> Result<(Graph, LabelMap), CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_edgelist(BufReader::new(file), &ParseOptions::default())
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, contents)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let drawn = rand::thread_rng().gen();
        eprintln!("seed: {drawn}");
        drawn
    })
}

#[derive(Serialize)]
struct DecompositionJson {
    n: usize,
    m: usize,
    k: usize,
    ring_sizes: Vec<usize>,
    rank: BTreeMap<String, u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orientation: Option<Vec<[String; 2]>>,
}

fn decomposition_json(
    g: &Graph,
    labels: &LabelMap,
    d: &DensityDecomposition,
    emit_orientation: bool,
) -> DecompositionJson {
    let rank = (0..g.node_count() as u32)
        .map(|v| (labels.label(v).to_string(), d.rank(v)))
        .collect();
    let orientation = emit_orientation.then(|| {
        d.witness()
            .directed_edges(g)
            .map(|(tail, head)| {
                [labels.label(tail).to_string(), labels.label(head).to_string()]
            })
            .collect()
    });
    DecompositionJson {
        n: g.node_count(),
        m: g.edge_count(),
        k: d.k(),
        ring_sizes: d.ring_sizes().to_vec(),
        rank,
        orientation,
    }
}

fn cmd_decompose(args: DecomposeArgs) -> Result<(), CliError> {
    let (g, labels) = load_graph(&args.input)?;
    let d = decompose(&g);
    let json = decomposition_json(&g, &labels, &d, args.emit_orientation);
    let mut text = serde_json::to_string_pretty(&json).expect("serializable report");
    text.push('\n');
    emit(args.output.as_deref(), &text)?;
    eprintln!(
        "n = {}, m = {}, k = {}, ring sizes {:?}",
        g.node_count(),
        g.edge_count(),
        d.k(),
        d.ring_sizes()
    );
    if args.verify {
        let report = verify_decomposition(&g, &d);
        if !report.pass() {
            return Err(CliError::Verify(report.failures().join("; ")));
        }
        eprintln!("verification passed");
    }
    Ok(())
}

fn cmd_metrics(args: MetricsArgs) -> Result<(), CliError> {
    let (g, _) = load_graph(&args.input)?;
    let apl_mode = match args.apl_sample {
        Some(sources) => AplMode::Sampled { sources, seed: resolve_seed(args.seed) },
        None => AplMode::Exact,
    };
    let clustering_mode = match args.clustering {
        ClusteringArg::Include => ClusteringMode::CountLowDegreeAsZero,
        ClusteringArg::Exclude => ClusteringMode::ExcludeLowDegree,
    };
    let report = MetricReport::compute(&g, apl_mode, clustering_mode);
    let mut text = serde_json::to_string_pretty(&report).expect("serializable report");
    text.push('\n');
    emit(args.output.as_deref(), &text)?;
    eprintln!("n = {}, m = {}", g.node_count(), g.edge_count());
    Ok(())
}

fn parse_degree_sequence(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad degree `{part}` in --degree-sequence")))
        })
        .collect()
}

fn resolve_spec(args: &GenerateArgs) -> Result<ModelSpec, CliError> {
    let mut spec = match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<ModelSpec>(&text)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
        }
        None => {
            let kind = args
                .kind
                .as_deref()
                .ok_or_else(|| CliError::Usage("either --spec or --kind is required".into()))?;
            let kind: ModelKind = kind.parse().map_err(|e: GenError| CliError::Usage(e.to_string()))?;
            ModelSpec {
                kind,
                n: None,
                dist: None,
                p: None,
                c: None,
                d: None,
                k_lattice: None,
                n0: None,
                degree_sequence: None,
                connect: None,
                seed: None,
            }
        }
    };
    if let Some(kind) = &args.kind {
        spec.kind = kind.parse().map_err(|e: GenError| CliError::Usage(e.to_string()))?;
    }
    if let Some(path) = &args.dist {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let values: Vec<f64> = serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        spec.dist = Some(values);
    }
    if let Some(text) = &args.degree_sequence {
        spec.degree_sequence = Some(parse_degree_sequence(text)?);
    }
    if args.n.is_some() {
        spec.n = args.n;
    }
    if args.p.is_some() {
        spec.p = args.p;
    }
    if args.c.is_some() {
        spec.c = args.c;
    }
    if args.d.is_some() {
        spec.d = args.d;
    }
    if args.k_lattice.is_some() {
        spec.k_lattice = args.k_lattice;
    }
    if args.n0.is_some() {
        spec.n0 = args.n0;
    }
    if args.connect {
        spec.connect = Some(true);
    }
    if args.seed.is_some() {
        spec.seed = args.seed;
    }
    spec.seed = Some(resolve_seed(spec.seed));
    Ok(spec)
}

fn cmd_generate(args: GenerateArgs) -> Result<(), CliError> {
    let spec = resolve_spec(&args)?;
    let generated = generate_from_spec(&spec)?;
    let g = &generated.graph;

    let labels = LabelMap::numeric(g.node_count());
    let mut edge_text = Vec::new();
    write_edgelist(g, &labels, &mut edge_text).expect("writing to memory cannot fail");
    std::fs::write(&args.output, &edge_text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", args.output.display())))?;

    let sidecar = PathBuf::from(format!("{}.spec.json", args.output.display()));
    let mut spec_text = serde_json::to_string_pretty(&spec).expect("serializable spec");
    spec_text.push('\n');
    std::fs::write(&sidecar, spec_text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", sidecar.display())))?;

    eprintln!(
        "wrote {} ({} nodes, {} edges); spec echoed to {}",
        args.output.display(),
        g.node_count(),
        g.edge_count(),
        sidecar.display()
    );
    if let Some(d) = &generated.decomposition {
        eprintln!("built ring sizes {:?}", d.ring_sizes());
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareJson {
    beta_rho_rho: f64,
    beta_delta_delta: f64,
    beta_rho_delta_a: f64,
    beta_rho_delta_b: f64,
}

fn cmd_compare(args: CompareArgs) -> Result<(), CliError> {
    let (a, _) = load_graph(&args.input_a)?;
    let (b, _) = load_graph(&args.input_b)?;
    let rho_a = density_distribution(&decompose(&a), true);
    let rho_b = density_distribution(&decompose(&b), true);
    let delta_a = degree_distribution(&a, true);
    let delta_b = degree_distribution(&b, true);
    let json = CompareJson {
        beta_rho_rho: bhattacharyya(&rho_a, &rho_b),
        beta_delta_delta: bhattacharyya(&delta_a, &delta_b),
        beta_rho_delta_a: bhattacharyya(&rho_a, &delta_a),
        beta_rho_delta_b: bhattacharyya(&rho_b, &delta_b),
    };
    let mut text = serde_json::to_string_pretty(&json).expect("serializable report");
    text.push('\n');
    emit(args.output.as_deref(), &text)
}

fn cmd_edge_bias(args: EdgeBiasArgs) -> Result<(), CliError> {
    let (g, _) = load_graph(&args.input)?;
    let d = decompose(&g);
    let report = edge_bias_report(&g, &d);
    let mut csv = String::from("i,j,actual,expected,diff\n");
    for e in &report.entries {
        writeln!(csv, "{},{},{},{},{}", e.i, e.j, e.actual, e.expected, e.diff)
            .expect("writing to memory cannot fail");
    }
    for s in &report.summaries {
        writeln!(csv, "summary,{},{},{},{}", s.gap, s.min, s.avg, s.max)
            .expect("writing to memory cannot fail");
    }
    emit(args.output.as_deref(), &csv)
}
