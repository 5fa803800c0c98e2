use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde_json::json;

use otrisym::generator::{self, PlantedSpec, Sizes};
use otrisym::graph::{
    largest_connected_component, load_edge_list, load_labels, save_assignment, IndexMode, Listing,
    LoadOptions,
};
use otrisym::runner::{self, BenchConfig, DetectConfig, Init, Method};
use otrisym::{metrics, Error, Graph};

#[derive(Parser)]
#[command(name = "otrisym", version, about = "Community detection under the degree-corrected block model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a detection method several times and keep the best result.
    Detect(DetectArgs),
    /// Compare a predicted labeling with ground truth (NMI, AMI).
    Eval(EvalArgs),
    /// Sample a planted-partition graph.
    Gen(GenArgs),
    /// Time methods on planted graphs of increasing size.
    Bench(BenchArgs),
    /// Extract the largest connected component.
    Lcc(LccArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list: `i j [multiplicity]` lines, optional node-count header.
    #[arg(long)]
    graph: PathBuf,
    /// Node tokens are 1-based indices.
    #[arg(long, conflicts_with = "zero_based")]
    one_based: bool,
    /// Node tokens are 0-based indices (default: arbitrary ids, relabelled densely).
    #[arg(long)]
    zero_based: bool,
    /// Lines are symmetric matrix entries rather than undirected edges.
    #[arg(long)]
    entries: bool,
    #[arg(long)]
    drop_self_loops: bool,
}

impl GraphArgs {
    fn load(&self) -> otrisym::Result<Graph> {
        let index = if self.one_based {
            IndexMode::OneBased
        } else if self.zero_based {
            IndexMode::ZeroBased
        } else {
            IndexMode::Dense
        };
        let opts = LoadOptions {
            index,
            listing: if self.entries { Listing::Entries } else { Listing::Edges },
            drop_self_loops: self.drop_self_loops,
            ..LoadOptions::default()
        };
        let g = load_edge_list(&self.graph, opts)?;
        info!("loaded {}: {} nodes, {} stored entries", self.graph.display(), g.n(), g.nnz());
        Ok(g)
    }

    fn name(&self) -> String {
        self.graph
            .file_stem()
            .map_or_else(|| "graph".into(), |s| s.to_string_lossy().into_owned())
    }
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Ground-truth `node community` file for scoring.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(short = 'r')]
    r: usize,
    #[arg(long, value_enum, default_value = "frost")]
    method: Method,
    #[arg(long, value_enum, default_value = "svca")]
    init: Init,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Columns averaged per SVCA component.
    #[arg(long)]
    svca_p: Option<usize>,
    /// Wall-clock budget per run, in seconds.
    #[arg(long)]
    timeout_s: Option<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Ground-truth `node community` file.
    #[arg(long)]
    labels: PathBuf,
    /// Predicted `node community` file.
    #[arg(long)]
    pred: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(short = 'r')]
    r: usize,
    #[arg(long, default_value_t = 0.2)]
    mu: f64,
    #[arg(long, default_value_t = 20.0)]
    avg_degree: f64,
    /// Power-law propensity exponent; uniform propensities when absent.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 50.0)]
    max_degree: f64,
    /// Comma-separated community sizes (default: balanced).
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix; writes `.edges`, `.labels` and `.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "1000,2000,4000")]
    sizes: Vec<usize>,
    /// Fixed community count; by default `r = round(r_scale * sqrt(n))`.
    #[arg(short = 'r')]
    r: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    r_scale: f64,
    #[arg(long, default_value_t = 0.2)]
    mu: f64,
    #[arg(long, default_value_t = 20.0)]
    avg_degree: f64,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 50.0)]
    max_degree: f64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "frost,kn,klem")]
    methods: Vec<Method>,
    #[arg(long, value_enum, default_value = "svca")]
    init: Init,
    #[arg(long, default_value_t = 3)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    timeout_s: Option<f64>,
    #[arg(long, default_value = "bench.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct LccArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Labels to restrict to the component.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Output prefix; writes `.edges`, `.ids` and optionally `.labels`.
    #[arg(long)]
    out: PathBuf,
}

fn timeout(secs: Option<f64>) -> otrisym::Result<Option<Duration>> {
    secs.map(|s| {
        Duration::try_from_secs_f64(s).map_err(|_| Error::Invalid(format!("bad timeout {s}")))
    })
    .transpose()
}

fn ensure_parent(path: &Path) -> otrisym::Result<()> {
    match path.parent().filter(|d| !d.as_os_str().is_empty()) {
        Some(dir) => fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        }),
        None => Ok(()),
    }
}

fn write(path: &Path, text: &str) -> otrisym::Result<()> {
    ensure_parent(path)?;
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn detect(a: DetectArgs) -> otrisym::Result<()> {
    let g = a.graph.load()?;
    let truth = a.labels.as_ref().map(|p| load_labels(p, &g)).transpose()?;
    let cfg = DetectConfig {
        runs: a.runs,
        base_seed: a.seed,
        max_iter: a.max_iter,
        rel_tol: a.rel_tol,
        svca_p: a.svca_p,
        timeout: timeout(a.timeout_s)?,
        workers: a.workers,
        ..DetectConfig::new(a.r, a.method, a.init)
    };
    let mut outcome = runner::detect(&g, truth.as_ref(), &cfg)?;
    let dir = runner::write_outputs(&a.out, &a.graph.name(), &g, &cfg, &mut outcome)?;
    info!("wrote {}", dir.display());
    println!("{}", serde_json::to_string_pretty(&outcome.best().result)?);
    Ok(())
}

fn eval(a: EvalArgs) -> otrisym::Result<()> {
    let g = a.graph.load()?;
    let truth = load_labels(&a.labels, &g)?;
    let pred = load_labels(&a.pred, &g)?;
    let s = metrics::score_labels(&pred, &truth)?;
    println!("{}", serde_json::to_string_pretty(&s)?);
    Ok(())
}

fn planted_spec(
    n: usize,
    r: usize,
    mu: f64,
    avg_degree: f64,
    gamma: Option<f64>,
    max_degree: f64,
    seed: u64,
) -> PlantedSpec {
    let spec = PlantedSpec::balanced(n, r, mu, avg_degree, seed);
    match gamma {
        Some(gm) => spec.with_power_law(gm, max_degree),
        None => spec,
    }
}

fn gen(a: GenArgs) -> otrisym::Result<()> {
    let mut spec = planted_spec(a.n, a.r, a.mu, a.avg_degree, a.gamma, a.max_degree, a.seed);
    if let Some(s) = a.sizes {
        spec.sizes = Sizes::Explicit(s);
    }
    let planted = generator::generate(&spec)?;
    let edges = with_suffix(&a.out, ".edges");
    ensure_parent(&edges)?;
    planted.graph.save_edge_list(&edges)?;
    save_assignment(
        with_suffix(&a.out, ".labels"),
        &planted.graph,
        &planted.factors.partition.assignment,
    )?;
    let sidecar = json!({
        "spec": spec,
        "sample_seed": generator::sample_seed(spec.seed),
        "nodes": planted.graph.n(),
        "adjacency_total": planted.graph.total(),
        "cross_fraction": generator::cross_fraction(&planted.graph, &planted.factors.partition),
    });
    write(&with_suffix(&a.out, ".json"), &serde_json::to_string_pretty(&sidecar)?)?;
    println!("{}", serde_json::to_string(&sidecar)?);
    Ok(())
}

fn bench(a: BenchArgs) -> otrisym::Result<()> {
    let specs: Vec<PlantedSpec> = a
        .sizes
        .iter()
        .map(|&n| {
            let r = a
                .r
                .unwrap_or_else(|| ((a.r_scale * (n as f64).sqrt()).round() as usize).max(1));
            planted_spec(n, r, a.mu, a.avg_degree, a.gamma, a.max_degree, a.seed)
        })
        .collect();
    let cfg = BenchConfig {
        methods: a.methods,
        init: a.init,
        runs: a.runs,
        base_seed: a.seed,
        timeout: timeout(a.timeout_s)?,
        max_iter: a.max_iter,
    };
    let rows = runner::bench_scaling(&specs, &cfg)?;
    let csv = runner::bench_csv(&rows);
    write(&a.out, &csv)?;
    print!("{csv}");
    Ok(())
}

fn lcc(a: LccArgs) -> otrisym::Result<()> {
    let g = a.graph.load()?;
    let labels = a.labels.as_ref().map(|p| load_labels(p, &g)).transpose()?;
    let comp = largest_connected_component(&g)?;
    let edges = with_suffix(&a.out, ".edges");
    ensure_parent(&edges)?;
    comp.graph.save_edge_list(&edges)?;
    let ids: String = comp
        .new_to_old
        .iter()
        .enumerate()
        .map(|(new, &old)| format!("{new} {}\n", g.ids()[old]))
        .collect();
    write(&with_suffix(&a.out, ".ids"), &format!("# index original_id\n{ids}"))?;
    if let Some(labels) = labels {
        let text: String = comp
            .new_to_old
            .iter()
            .enumerate()
            .filter_map(|(new, &old)| labels.assignment[old].map(|k| format!("{new} {k}\n")))
            .collect();
        write(&with_suffix(&a.out, ".labels"), &text)?;
    }
    println!(
        "{}",
        json!({"nodes": comp.graph.n(), "of": g.n(), "adjacency_total": comp.graph.total()})
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Detect(a) => detect(a),
        Command::Eval(a) => eval(a),
        Command::Gen(a) => gen(a),
        Command::Bench(a) => bench(a),
        Command::Lcc(a) => lcc(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                _ if e.is_numerical() => 3,
                Error::Parse { .. } | Error::IndexOverflow(_) | Error::Json(_) | Error::Invalid(_) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
