//! Multi-run orchestration, result files and scaling benchmarks.
//!
//! Each of `runs` restarts uses seed `base_seed + k`; the best run is the one
//! with the smallest Frobenius error (FROST) or largest log-likelihood
//! (KN, KL-EM), ties going to the lower run index.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dcbm::{self, InferConfig};
use crate::eigen::Basis;
use crate::error::{Error, Result};
use crate::frost::{self, FrostConfig, StopReason, TraceRow};
use crate::generator::{self, PlantedSpec};
use crate::graph::{save_assignment, Graph, Labels};
use crate::metrics;
use crate::model::{FactorDump, MixingMatrix, Partition, ScaledAssignment, ZeroRowPolicy};
use crate::svca::{self, SvcaConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Frost,
    Kn,
    Klem,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Frost => "frost",
            Method::Kn => "kn",
            Method::Klem => "klem",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Init {
    Svca,
    Random,
}

impl Init {
    pub fn name(self) -> &'static str {
        match self {
            Init::Svca => "svca",
            Init::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Objective {
    FrobeniusError(f64),
    LogLikelihood(f64),
}

impl Objective {
    pub fn value(self) -> f64 {
        match self {
            Objective::FrobeniusError(x) | Objective::LogLikelihood(x) => x,
        }
    }

    /// Strictly better; NaN is never better.
    pub fn better_than(self, other: Objective) -> bool {
        match (self, other) {
            (Objective::FrobeniusError(a), Objective::FrobeniusError(b)) => a < b || b.is_nan() && !a.is_nan(),
            (Objective::LogLikelihood(a), Objective::LogLikelihood(b)) => a > b || b.is_nan() && !a.is_nan(),
            _ => panic!("objectives of different kinds"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub method: Method,
    pub init: Init,
    pub run: usize,
    pub seed: u64,
    pub objective: Objective,
    /// Set once the run's labels have been written.
    pub partition_path: Option<PathBuf>,
    pub runtime_seconds: f64,
    /// Part of `runtime_seconds` spent building the initial point.
    pub init_seconds: f64,
    /// Outer iterations (FROST) or sweeps (KN, KL-EM).
    pub iterations: usize,
    pub timed_out: bool,
    pub nmi: Option<f64>,
    pub ami: Option<f64>,
}

/// Everything a single run produced.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub result: RunResult,
    pub partition: Partition,
    pub factors: Option<(ScaledAssignment, MixingMatrix)>,
    pub trace: Vec<TraceRow>,
}

#[derive(Debug, Clone)]
pub struct DetectConfig {
    pub r: usize,
    pub method: Method,
    pub init: Init,
    pub runs: usize,
    pub base_seed: u64,
    /// FROST outer iterations or DCBM sweeps; `None` keeps the solver default.
    pub max_iter: Option<usize>,
    pub rel_tol: Option<f64>,
    pub svca_p: Option<usize>,
    /// Wall-clock budget per run.
    pub timeout: Option<Duration>,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl DetectConfig {
    pub fn new(r: usize, method: Method, init: Init) -> Self {
        DetectConfig {
            r,
            method,
            init,
            runs: 10,
            base_seed: 0,
            max_iter: None,
            rel_tol: None,
            svca_p: None,
            timeout: None,
            workers: None,
        }
    }

    pub fn runs(mut self, runs: usize) -> Self {
        self.runs = runs;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.base_seed = seed;
        self
    }

    fn svca_config(&self, seed: u64) -> SvcaConfig {
        SvcaConfig {
            p: self.svca_p,
            ..SvcaConfig::with_seed(seed)
        }
    }
}

#[derive(Debug, Clone)]
pub struct DetectOutcome {
    /// Ordered by run index.
    pub runs: Vec<RunOutput>,
    pub best: usize,
}

impl DetectOutcome {
    pub fn best(&self) -> &RunOutput {
        &self.runs[self.best]
    }

    pub fn results(&self) -> Vec<RunResult> {
        self.runs.iter().map(|r| r.result.clone()).collect()
    }
}

fn initial_point(
    g: &Graph,
    cfg: &DetectConfig,
    seed: u64,
    basis: Option<&Basis>,
) -> Result<(ScaledAssignment, MixingMatrix, Partition)> {
    match cfg.init {
        Init::Svca => {
            let scfg = cfg.svca_config(seed);
            let init = match basis {
                Some(b) => svca::svca_init_with_basis(g, b, cfg.r, &scfg)?,
                None => svca::svca_init(g, cfg.r, &scfg)?,
            };
            Ok((init.z, init.theta, init.partition))
        }
        Init::Random => {
            let p = Partition::random(g.n(), cfg.r, seed);
            let z = ScaledAssignment::from_partition(&p);
            let theta = frost::update_theta(g, &z);
            Ok((z, theta, p))
        }
    }
}

/// One restart with seed `base_seed + run`.
pub fn run_once(
    g: &Graph,
    cfg: &DetectConfig,
    run: usize,
    basis: Option<&Basis>,
    truth: Option<&Labels>,
) -> Result<RunOutput> {
    let seed = cfg.base_seed.wrapping_add(run as u64);
    let start = Instant::now();
    let deadline = cfg.timeout.map(|t| start + t);
    let (z0, theta0, p0) = initial_point(g, cfg, seed, basis)?;
    let init_seconds = start.elapsed().as_secs_f64();

    let (objective, partition, factors, trace, iterations, timed_out) = match cfg.method {
        Method::Frost => {
            let mut fcfg = FrostConfig {
                seed,
                deadline,
                ..FrostConfig::default()
            };
            if let Some(m) = cfg.max_iter {
                fcfg.max_outer_iterations = m;
            }
            if let Some(t) = cfg.rel_tol {
                fcfg.rel_tol = t;
            }
            let res = frost::frost_solve(g, z0, theta0, &fcfg)?;
            let p = res.z.to_partition(ZeroRowPolicy::Random(seed))?;
            (
                Objective::FrobeniusError(res.error()),
                p,
                Some((res.z.clone(), res.theta.clone())),
                res.trace.clone(),
                res.iterations(),
                res.stop == StopReason::Deadline,
            )
        }
        Method::Kn | Method::Klem => {
            let mut icfg = InferConfig {
                seed,
                deadline,
                ..InferConfig::default()
            };
            if let Some(m) = cfg.max_iter {
                icfg.max_sweeps = m;
            }
            let res = if cfg.method == Method::Kn {
                dcbm::kn_infer(g, &p0, &icfg)?
            } else {
                dcbm::klem_infer(g, &p0, &icfg)?
            };
            (
                Objective::LogLikelihood(res.log_likelihood),
                res.partition,
                None,
                Vec::new(),
                res.sweeps,
                res.timed_out,
            )
        }
    };
    let runtime_seconds = start.elapsed().as_secs_f64();
    let scores = truth
        .map(|t| metrics::score(&partition.assignment, t))
        .transpose()?;
    Ok(RunOutput {
        result: RunResult {
            method: cfg.method,
            init: cfg.init,
            run,
            seed,
            objective,
            partition_path: None,
            runtime_seconds,
            init_seconds,
            iterations,
            timed_out,
            nmi: scores.map(|s| s.nmi),
            ami: scores.map(|s| s.ami),
        },
        partition,
        factors,
        trace,
    })
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs all restarts in memory. With SVCA initialization the dominant
/// subspace is computed once (seeded by `base_seed`) and shared.
pub fn detect(g: &Graph, truth: Option<&Labels>, cfg: &DetectConfig) -> Result<DetectOutcome> {
    if cfg.runs == 0 {
        return Err(Error::Invalid("runs must be at least 1".into()));
    }
    if cfg.r == 0 || cfg.r > g.n() {
        return Err(Error::Invalid(format!("r={} for {} nodes", cfg.r, g.n())));
    }
    let basis = match cfg.init {
        Init::Svca => Some(svca::dominant_subspace(g, cfg.r, &cfg.svca_config(cfg.base_seed))?),
        Init::Random => None,
    };
    let runs: Vec<RunOutput> = with_pool(cfg.workers, || {
        (0..cfg.runs)
            .into_par_iter()
            .map(|k| run_once(g, cfg, k, basis.as_ref(), truth))
            .collect::<Result<Vec<_>>>()
    })??;
    let mut best = 0;
    for (k, run) in runs.iter().enumerate().skip(1) {
        if run.result.objective.better_than(runs[best].result.objective) {
            best = k;
        }
    }
    Ok(DetectOutcome { runs, best })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn summary_csv(results: &[RunResult]) -> String {
    let mut out = String::from(
        "run,seed,method,init,objective_kind,objective,iterations,runtime_seconds,init_seconds,timed_out,nmi,ami\n",
    );
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.6}"));
    for r in results {
        let kind = match r.objective {
            Objective::FrobeniusError(_) => "frobenius_error",
            Objective::LogLikelihood(_) => "log_likelihood",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.12e},{},{:.6},{:.6},{},{},{}",
            r.run,
            r.seed,
            r.method.name(),
            r.init.name(),
            kind,
            r.objective.value(),
            r.iterations,
            r.runtime_seconds,
            r.init_seconds,
            r.timed_out,
            opt(r.nmi),
            opt(r.ami)
        );
    }
    out
}

/// Writes `{out}/{graph}/{method}-{init}/` with `run-{k}.json`,
/// `run-{k}.labels`, `runs.jsonl`, `best.labels`, `summary.csv` and, for
/// FROST, `best-trace.csv` and `best-factors.json`. Returns the directory.
pub fn write_outputs(
    out: &Path,
    graph_name: &str,
    g: &Graph,
    cfg: &DetectConfig,
    outcome: &mut DetectOutcome,
) -> Result<PathBuf> {
    let dir = out
        .join(graph_name)
        .join(format!("{}-{}", cfg.method.name(), cfg.init.name()));
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut lines = String::new();
    for run in outcome.runs.iter_mut() {
        let k = run.result.run;
        let labels = dir.join(format!("run-{k}.labels"));
        save_assignment(&labels, g, &run.partition.assignment)?;
        run.result.partition_path = Some(labels);
        let json = serde_json::to_string(&run.result)?;
        write_file(&dir.join(format!("run-{k}.json")), &json)?;
        lines.push_str(&json);
        lines.push('\n');
    }
    write_file(&dir.join("runs.jsonl"), &lines)?;
    write_file(&dir.join("summary.csv"), &summary_csv(&outcome.results()))?;
    let best = outcome.best();
    save_assignment(dir.join("best.labels"), g, &best.partition.assignment)?;
    if let Some((z, theta)) = &best.factors {
        FactorDump::new(z, theta).save(dir.join("best-factors.json"))?;
        frost::save_trace(dir.join("best-trace.csv"), &best.trace)?;
    }
    Ok(dir)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub r: usize,
    pub edges: u64,
    pub method: Method,
    pub init: Init,
    pub runs: usize,
    pub mean_runtime_seconds: f64,
    /// Mean time per outer iteration or sweep, initialization excluded.
    pub mean_seconds_per_iteration: f64,
    pub mean_iterations: f64,
    pub mean_ami: f64,
    pub timed_out: bool,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub init: Init,
    pub runs: usize,
    pub base_seed: u64,
    pub timeout: Option<Duration>,
    pub max_iter: Option<usize>,
}

/// Generates each spec's graph and times every method on it. Once a method
/// times out at some size it is not run on later specs; those rows are
/// marked as timed out with NaN measurements.
pub fn bench_scaling(specs: &[PlantedSpec], cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    let mut dropped = vec![false; cfg.methods.len()];
    for spec in specs {
        let planted = generator::generate(spec)?;
        let g = &planted.graph;
        let truth = Labels::complete(&planted.factors.partition.assignment);
        for (mi, &method) in cfg.methods.iter().enumerate() {
            let mut row = BenchRow {
                n: spec.n,
                r: spec.r,
                edges: g.upper_entries().map(|(i, j, a)| if i == j { a / 2 } else { a }).sum(),
                method,
                init: cfg.init,
                runs: cfg.runs,
                mean_runtime_seconds: f64::NAN,
                mean_seconds_per_iteration: f64::NAN,
                mean_iterations: f64::NAN,
                mean_ami: f64::NAN,
                timed_out: true,
            };
            if !dropped[mi] {
                let dcfg = DetectConfig {
                    runs: cfg.runs,
                    base_seed: cfg.base_seed,
                    max_iter: cfg.max_iter,
                    timeout: cfg.timeout,
                    workers: Some(1),
                    ..DetectConfig::new(spec.r, method, cfg.init)
                };
                let outcome = detect(g, Some(&truth), &dcfg)?;
                let results = outcome.results();
                let k = results.len() as f64;
                let timed_out = results.iter().any(|r| r.timed_out);
                row.mean_runtime_seconds = results.iter().map(|r| r.runtime_seconds).sum::<f64>() / k;
                row.mean_iterations = results.iter().map(|r| r.iterations as f64).sum::<f64>() / k;
                row.mean_seconds_per_iteration = results
                    .iter()
                    .map(|r| (r.runtime_seconds - r.init_seconds) / r.iterations.max(1) as f64)
                    .sum::<f64>()
                    / k;
                row.mean_ami = results.iter().filter_map(|r| r.ami).sum::<f64>() / k;
                row.timed_out = timed_out;
                dropped[mi] = timed_out;
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "n,r,edges,method,init,runs,mean_runtime_seconds,mean_seconds_per_iteration,mean_iterations,mean_ami,timed_out\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.6e},{:.6e},{:.3},{:.6},{}",
            r.n,
            r.r,
            r.edges,
            r.method.name(),
            r.init.name(),
            r.runs,
            r.mean_runtime_seconds,
            r.mean_seconds_per_iteration,
            r.mean_iterations,
            r.mean_ami,
            r.timed_out
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::example_graph;

    #[test]
    fn example_frost_best_is_one() {
        let g = example_graph();
        let cfg = DetectConfig::new(2, Method::Frost, Init::Svca).runs(10);
        let out = detect(&g, None, &cfg).unwrap();
        assert_eq!(out.runs.len(), 10);
        let best = out.best().result.objective;
        assert!(matches!(best, Objective::FrobeniusError(e) if (e - 1.0).abs() < 1e-5));
        for (k, run) in out.runs.iter().enumerate() {
            assert_eq!(run.result.run, k);
            assert!(!run.result.objective.better_than(best));
        }
    }

    #[test]
    fn planted_no_mixing_is_recovered() {
        let p = generator::generate(&PlantedSpec::balanced(200, 4, 0.0, 12.0, 3)).unwrap();
        let truth = Labels::complete(&p.factors.partition.assignment);
        for method in [Method::Frost, Method::Kn, Method::Klem] {
            let cfg = DetectConfig::new(4, method, Init::Svca).runs(1);
            let out = detect(&p.graph, Some(&truth), &cfg).unwrap();
            let ami = out.best().result.ami.unwrap();
            assert!((ami - 1.0).abs() < 1e-9, "{method:?}: {ami}");
        }
    }

    #[test]
    fn reproducible_and_order_independent() {
        let p = generator::generate(&PlantedSpec::balanced(120, 3, 0.2, 8.0, 1)).unwrap();
        let mut cfg = DetectConfig::new(3, Method::Kn, Init::Random).runs(6).seed(40);
        cfg.workers = Some(1);
        let a = detect(&p.graph, None, &cfg).unwrap();
        cfg.workers = Some(4);
        let b = detect(&p.graph, None, &cfg).unwrap();
        assert_eq!(a.best, b.best);
        for (x, y) in a.runs.iter().zip(&b.runs) {
            assert_eq!(x.partition, y.partition);
        }
    }

    #[test]
    fn best_is_monotone_in_runs() {
        let p = generator::generate(&PlantedSpec::balanced(90, 3, 0.4, 6.0, 2)).unwrap();
        let mut prev: Option<Objective> = None;
        for runs in 1..=5 {
            let cfg = DetectConfig::new(3, Method::Frost, Init::Random).runs(runs).seed(9);
            let best = detect(&p.graph, None, &cfg).unwrap().best().result.objective;
            if let Some(pr) = prev {
                assert!(!pr.better_than(best));
            }
            prev = Some(best);
        }
    }

    #[test]
    fn zero_timeout_marks_runs() {
        let p = generator::generate(&PlantedSpec::balanced(60, 2, 0.2, 6.0, 2)).unwrap();
        for method in [Method::Frost, Method::Kn, Method::Klem] {
            let mut cfg = DetectConfig::new(2, method, Init::Random).runs(2);
            cfg.timeout = Some(Duration::ZERO);
            let out = detect(&p.graph, None, &cfg).unwrap();
            assert!(out.runs.iter().all(|r| r.result.timed_out), "{method:?}");
        }
    }

    #[test]
    fn bench_timeout_and_empty() {
        let specs = [
            PlantedSpec::balanced(40, 2, 0.1, 5.0, 0),
            PlantedSpec::balanced(80, 2, 0.1, 5.0, 0),
        ];
        let empty = BenchConfig {
            methods: vec![],
            init: Init::Svca,
            runs: 1,
            base_seed: 0,
            timeout: None,
            max_iter: None,
        };
        let rows = bench_scaling(&specs, &empty).unwrap();
        assert!(rows.is_empty());
        assert_eq!(bench_csv(&rows).lines().count(), 1);

        let zero = BenchConfig {
            methods: vec![Method::Frost, Method::Kn],
            timeout: Some(Duration::ZERO),
            ..empty
        };
        let rows = bench_scaling(&specs, &zero).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.timed_out));
    }

    #[test]
    fn output_layout() {
        let dir = tempfile::tempdir().unwrap();
        let g = example_graph();
        let cfg = DetectConfig::new(2, Method::Frost, Init::Svca).runs(3);
        let mut out = detect(&g, None, &cfg).unwrap();
        let d = write_outputs(dir.path(), "example", &g, &cfg, &mut out).unwrap();
        assert_eq!(d, dir.path().join("example").join("frost-svca"));
        for f in ["run-0.json", "run-2.labels", "runs.jsonl", "best.labels", "summary.csv", "best-trace.csv", "best-factors.json"] {
            assert!(d.join(f).exists(), "{f}");
        }
        let parsed: RunResult =
            serde_json::from_str(&fs::read_to_string(d.join("run-1.json")).unwrap()).unwrap();
        assert_eq!(parsed.run, 1);
        assert!(matches!(parsed.objective, Objective::FrobeniusError(_)));
        assert_eq!(fs::read_to_string(d.join("summary.csv")).unwrap().lines().count(), 4);
    }
}
