//! Benchmark harness: random instances, per-method runs, resumable CSV.
//!
//! Instances are keyed by (model, n, parameter, repetition); per-instance
//! seeds derive from the base seed and the key, so sweeps are reproducible
//! and resumable. Workers compute records in parallel; rows are sorted by
//! instance key before writing, so output bytes never depend on scheduling
//! (runtime columns aside).

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::Args;

use gsmin::generate::{bounded_degree, erdos_renyi};
use gsmin::graph::Graph;
use gsmin::ilp::{
    build_edm_ilp, edm_identity_assignment, solve_with_options, SolveOptions, SolveStatus,
};
use gsmin::orbit::exact_mer;
use gsmin::sa::{edm_sa, SaConfig};

use crate::cmds::DEFAULT_NODE_BUDGET;
use crate::CliError;

pub const CSV_HEADER: &str =
    "model,n,param,seed,input_edges,sa_edges,exact_edges,sa_runtime_ms,ilp_runtime_ms,method";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum BenchModel {
    Er,
    Bounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum BenchMethod {
    Sa,
    Orbit,
    Ilp,
    Sailp,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub model: BenchModel,
    /// Vertex counts, e.g. `13` or `6,7,8`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Edge probabilities for the ER model.
    #[arg(long, value_delimiter = ',')]
    pub p_grid: Vec<f64>,
    /// Degree cap for the bounded-degree model.
    #[arg(long, default_value_t = 5)]
    pub d_lim: usize,
    /// Instances per parameter point.
    #[arg(long, default_value_t = 30)]
    pub count: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Methods to run per instance (sa plus one exact oracle make a row).
    #[arg(long, value_delimiter = ',', required = true)]
    pub methods: Vec<BenchMethod>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub kmax: usize,
    #[arg(long, default_value_t = 100.0)]
    pub t1: f64,
    /// Orbit member cap for the orbit oracle.
    #[arg(long, default_value_t = gsmin::orbit::DEFAULT_ORBIT_LIMIT)]
    pub limit: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Worker threads (default: GSMIN_THREADS or 1).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
struct InstanceKey {
    model: &'static str,
    n: usize,
    param: String,
    seed: u64,
}

struct Record {
    key: InstanceKey,
    input_edges: usize,
    sa_edges: Option<usize>,
    exact_edges: Option<usize>,
    sa_runtime_ms: Option<u64>,
    ilp_runtime_ms: Option<u64>,
    method: String,
}

impl Record {
    fn csv_row(&self) -> String {
        let opt = |v: &Option<usize>| v.map_or(String::new(), |x| x.to_string());
        let optu = |v: &Option<u64>| v.map_or(String::new(), |x| x.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.key.model,
            self.key.n,
            self.key.param,
            self.key.seed,
            self.input_edges,
            opt(&self.sa_edges),
            opt(&self.exact_edges),
            optu(&self.sa_runtime_ms),
            optu(&self.ilp_runtime_ms),
            self.method
        )
    }
}

fn instance_seed(base: u64, n: usize, param_idx: usize, rep: usize) -> u64 {
    // splitmix-style stirring keeps instance streams well separated
    let mut x = base
        .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(1 + n as u64))
        .wrapping_add(0x85eb_ca6bu64.wrapping_mul(1 + param_idx as u64))
        .wrapping_add(0xc2b2_ae35u64.wrapping_mul(1 + rep as u64));
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn generate(model: BenchModel, n: usize, p: f64, d_lim: usize, seed: u64) -> Result<Graph, CliError> {
    match model {
        BenchModel::Er => erdos_renyi(n, p, seed).map_err(|e| CliError::parse(e.to_string())),
        BenchModel::Bounded => {
            bounded_degree(n, d_lim, seed).map_err(|e| CliError::parse(e.to_string()))
        }
    }
}

fn run_instance(args: &BenchArgs, key: InstanceKey, g: &Graph) -> Result<Record, CliError> {
    let mut record = Record {
        key,
        input_edges: g.edge_count(),
        sa_edges: None,
        exact_edges: None,
        sa_runtime_ms: None,
        ilp_runtime_ms: None,
        method: args
            .methods
            .iter()
            .map(|m| format!("{m:?}").to_lowercase())
            .collect::<Vec<_>>()
            .join("+"),
    };
    let cfg = SaConfig::new(args.kmax, args.t1, record.key.seed);
    let mut sa_graph = None;
    for method in &args.methods {
        match method {
            BenchMethod::Sa => {
                let t = Instant::now();
                let res = edm_sa(g, &cfg);
                record.sa_runtime_ms = Some(t.elapsed().as_millis() as u64);
                record.sa_edges = Some(res.best_graph.edge_count());
                sa_graph = Some(res.best_graph);
            }
            BenchMethod::Orbit => {
                // the exact-method runtime shares the ilp_runtime_ms column
                let t = Instant::now();
                let (mer, _) = exact_mer(g, args.limit)
                    .map_err(|e| CliError::budget(format!("orbit oracle: {e}")))?;
                record.ilp_runtime_ms = Some(t.elapsed().as_millis() as u64);
                record.exact_edges = Some(mer.edge_count());
            }
            BenchMethod::Ilp | BenchMethod::Sailp => {
                let t = Instant::now();
                let base = match (method, &sa_graph) {
                    (BenchMethod::Sailp, Some(h)) => h.clone(),
                    (BenchMethod::Sailp, None) => edm_sa(g, &cfg).best_graph,
                    _ => g.clone(),
                };
                let model = build_edm_ilp(&base, None);
                let warm = edm_identity_assignment(&base);
                let sol = solve_with_options(
                    &model,
                    SolveOptions { node_budget: args.budget, warm_start: Some(warm), cancel: None },
                );
                if sol.status != SolveStatus::Optimal {
                    return Err(CliError::budget(format!(
                        "solver budget exhausted on {:?} n={} seed={}",
                        record.key.model, record.key.n, record.key.seed
                    )));
                }
                record.ilp_runtime_ms = Some(t.elapsed().as_millis() as u64);
                record.exact_edges = Some(sol.objective_value as usize);
            }
        }
    }
    Ok(record)
}

pub fn run_bench(args: BenchArgs) -> Result<(), CliError> {
    if args.model == BenchModel::Er && args.p_grid.is_empty() {
        return Err(CliError::parse("the ER model needs --p-grid"));
    }
    // parameter points: p values for ER, the single d_lim for bounded
    let params: Vec<String> = match args.model {
        BenchModel::Er => args.p_grid.iter().map(|p| p.to_string()).collect(),
        BenchModel::Bounded => vec![args.d_lim.to_string()],
    };
    let model_name = match args.model {
        BenchModel::Er => "er",
        BenchModel::Bounded => "bounded",
    };

    // resume: skip instance keys already present in the output file
    let existing: Vec<String> = match std::fs::read_to_string(&args.out) {
        Ok(text) => text.lines().skip(1).map(str::to_string).collect(),
        Err(_) => Vec::new(),
    };
    let have: std::collections::HashSet<String> = existing
        .iter()
        .filter_map(|row| {
            let mut it = row.split(',');
            Some(format!("{},{},{},{}", it.next()?, it.next()?, it.next()?, it.next()?))
        })
        .collect();

    struct Job {
        key: InstanceKey,
        p: f64,
    }
    let mut jobs = Vec::new();
    for &n in &args.n {
        for (pi, param) in params.iter().enumerate() {
            for rep in 0..args.count {
                let seed = instance_seed(args.seed, n, pi, rep);
                let key = InstanceKey { model: model_name, n, param: param.clone(), seed };
                let id = format!("{},{},{},{}", key.model, key.n, key.param, key.seed);
                if !have.contains(&id) {
                    jobs.push(Job { key, p: args.p_grid.get(pi).copied().unwrap_or(0.0) });
                }
            }
        }
    }

    let threads = args
        .threads
        .or_else(|| std::env::var("GSMIN_THREADS").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1)
        .max(1);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Record>> = Mutex::new(Vec::with_capacity(jobs.len()));
    let failure: Mutex<Option<CliError>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for _ in 0..threads.min(jobs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() || failure.lock().unwrap().is_some() {
                    return;
                }
                let job = &jobs[i];
                let outcome = generate(args.model, job.key.n, job.p, args.d_lim, job.key.seed)
                    .and_then(|g| run_instance(&args, job.key.clone(), &g));
                match outcome {
                    Ok(record) => results.lock().unwrap().push(record),
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                    }
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }

    // merge with resumed rows, sort by instance key, rewrite the file
    let mut rows: Vec<String> = existing;
    rows.extend(results.into_inner().unwrap().iter().map(Record::csv_row));
    rows.sort_by_key(|row| {
        let mut it = row.split(',');
        let model = it.next().unwrap_or_default().to_string();
        let n: usize = it.next().and_then(|s| s.parse().ok()).unwrap_or(0);
        let param = it.next().unwrap_or_default().to_string();
        let seed: u64 = it.next().and_then(|s| s.parse().ok()).unwrap_or(0);
        (model, n, param, seed)
    });
    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    std::fs::write(&args.out, text)
        .map_err(|e| CliError::parse(format!("cannot write {}: {e}", args.out.display())))?;
    Ok(())
}
