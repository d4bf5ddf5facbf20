//! The single-instance subcommands.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde_json::json;

use gsmin::grgs::{build_grgs, build_rgs, compare_protocols, comparison_csv};
use gsmin::ilp::{
    build_edm_ilp, decode_edm_solution, edm_identity_assignment, export_lp, solve_external,
    solve_with_options, SolveOptions, SolveStatus,
};
use gsmin::orbit::{enumerate_orbit, exact_mer};
use gsmin::sa::{edm_sa, SaConfig};
use gsmin::symplectic::lc_equivalent;

use crate::io::{load_graph, load_weights, save_graph, GraphFormat};
use crate::CliError;

/// Default size caps; orbit enumeration and the built-in solver scale
/// exponentially, so anything larger needs an explicit override.
const ORBIT_MAX_N: usize = 12;
const ILP_MAX_N: usize = 10;
pub const DEFAULT_NODE_BUDGET: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Sa,
    Ilp,
    Sailp,
    Orbit,
}

#[derive(Args)]
pub struct MinimizeArgs {
    /// Input graph (graph6 or JSON, sniffed).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// SA iteration budget.
    #[arg(long, default_value_t = 100)]
    pub kmax: usize,
    /// SA initial temperature.
    #[arg(long, default_value_t = 100.0)]
    pub t1: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Orbit member cap.
    #[arg(long, default_value_t = gsmin::orbit::DEFAULT_ORBIT_LIMIT)]
    pub limit: usize,
    /// Branch-and-bound node budget.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Write the minimised graph here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "graph6")]
    pub format: GraphFormat,
    /// Edge weight matrix (JSON) for weighted minimisation.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Override the per-method size caps.
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Include the SA energy trace in the report.
    #[arg(long)]
    pub trace: bool,
}

fn check_cap(n: usize, cap: usize, requested: Option<usize>, what: &str) -> Result<(), CliError> {
    let cap = requested.unwrap_or(cap);
    if n > cap {
        return Err(CliError::budget(format!(
            "{what} is capped at {cap} vertices (input has {n}); raise with --max-n"
        )));
    }
    Ok(())
}

pub fn run_minimize(args: MinimizeArgs) -> Result<(), CliError> {
    let g = load_graph(&args.input)?;
    let weights = match &args.weights {
        Some(p) => Some(load_weights(p, g.n())?),
        None => None,
    };
    let mut cfg = SaConfig::new(args.kmax.max(1), args.t1, args.seed);
    if let Some(w) = weights.clone() {
        cfg = cfg.with_weights(w);
    }
    let start = Instant::now();
    let (output, detail, budget_exhausted) = match args.method {
        Method::Sa => {
            let res = edm_sa(&g, &cfg);
            let detail = if args.trace {
                res.to_json(args.seed)
            } else {
                json!({ "lc_sequence": res.lc_sequence })
            };
            (res.best_graph, detail, false)
        }
        Method::Orbit => {
            check_cap(g.n(), ORBIT_MAX_N, args.max_n, "orbit enumeration")?;
            let (mer, seq) = exact_mer(&g, args.limit)
                .map_err(|e| CliError::budget(format!("orbit oracle failed: {e}")))?;
            (mer, json!({ "lc_sequence": seq }), false)
        }
        Method::Ilp | Method::Sailp => {
            check_cap(g.n(), ILP_MAX_N, args.max_n, "the built-in ILP solver")?;
            let base = if args.method == Method::Sailp { edm_sa(&g, &cfg).best_graph } else { g.clone() };
            let model = build_edm_ilp(&base, weights.as_ref());
            let warm = edm_identity_assignment(&base);
            let sol = solve_with_options(
                &model,
                SolveOptions { node_budget: args.budget, warm_start: Some(warm), cancel: None },
            );
            let (h, w) = decode_edm_solution(base.n(), &sol);
            let status = match sol.status {
                SolveStatus::Optimal => "optimal",
                SolveStatus::BudgetExhausted => "budget_exhausted",
                SolveStatus::Infeasible => unreachable!("EDM models are always feasible"),
            };
            (
                h,
                json!({ "witness": w, "status": status, "objective": sol.objective_value }),
                sol.status == SolveStatus::BudgetExhausted,
            )
        }
    };
    let runtime_ms = start.elapsed().as_millis() as u64;
    let mut report = json!({
        "method": format!("{:?}", args.method).to_lowercase(),
        "input_edges": g.edge_count(),
        "output_edges": output.edge_count(),
        "runtime_ms": runtime_ms,
        "seed": args.seed,
    });
    for (k, v) in detail.as_object().expect("detail is an object") {
        report[k] = v.clone();
    }
    println!("{report}");
    if let Some(out) = &args.out {
        save_graph(out, &output, args.format)?;
    }
    if budget_exhausted {
        return Err(CliError::budget("solver budget exhausted; printed the incumbent"));
    }
    Ok(())
}

#[derive(Args)]
pub struct CheckLcArgs {
    /// First graph.
    pub a: PathBuf,
    /// Second graph.
    pub b: PathBuf,
}

pub fn run_check_lc(args: CheckLcArgs) -> Result<(), CliError> {
    let a = load_graph(&args.a)?;
    let b = load_graph(&args.b)?;
    let witness = lc_equivalent(&a, &b).map_err(|e| CliError::parse(e.to_string()))?;
    // the witness is the local Clifford layer taking |b> to |a>
    println!(
        "{}",
        json!({ "lc_equivalent": witness.is_some(), "witness": witness })
    );
    Ok(())
}

#[derive(Args)]
pub struct OrbitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = gsmin::orbit::DEFAULT_ORBIT_LIMIT)]
    pub limit: usize,
    /// Write the member dump here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub max_n: Option<usize>,
}

pub fn run_orbit(args: OrbitArgs) -> Result<(), CliError> {
    let g = load_graph(&args.input)?;
    check_cap(g.n(), ORBIT_MAX_N, args.max_n, "orbit enumeration")?;
    let orbit = enumerate_orbit(&g, args.limit);
    let dump = |w: &mut dyn std::io::Write| orbit.write_jsonl(w);
    match &args.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| CliError::parse(format!("cannot write {}: {e}", path.display())))?;
            dump(&mut f).map_err(|e| CliError::parse(e.to_string()))?;
        }
        None => {
            let stdout = std::io::stdout();
            dump(&mut stdout.lock()).map_err(|e| CliError::parse(e.to_string()))?;
        }
    }
    if orbit.truncated() {
        return Err(CliError::budget(format!(
            "orbit truncated at {} members; raise --limit for closure",
            orbit.len()
        )));
    }
    Ok(())
}

#[derive(Args)]
pub struct IlpExportArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Write the LP file here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Also invoke the solver named by GSMIN_ILP_SOLVER and print its
    /// solution.
    #[arg(long)]
    pub solve_external: bool,
}

pub fn run_ilp_export(args: IlpExportArgs) -> Result<(), CliError> {
    let g = load_graph(&args.input)?;
    let weights = match &args.weights {
        Some(p) => Some(load_weights(p, g.n())?),
        None => None,
    };
    let model = build_edm_ilp(&g, weights.as_ref());
    let text = export_lp(&model);
    match &args.out {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| CliError::parse(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if args.solve_external {
        let sol = solve_external(&model).map_err(|e| CliError::budget(e.to_string()))?;
        let (h, _) = decode_edm_solution(g.n(), &sol);
        println!(
            "{}",
            json!({
                "objective": sol.objective_value,
                "output_edges": h.edge_count(),
                "output_graph6": gsmin::graph6::write_graph6(&h),
            })
        );
    }
    Ok(())
}

#[derive(Args)]
pub struct GrgsArgs {
    /// Build a repeater graph state with a complete core on 2m vertices.
    #[arg(long, conflicts_with = "central")]
    pub rgs: Option<usize>,
    /// Central graph file for a general gRGS.
    #[arg(long)]
    pub central: Option<PathBuf>,
    /// Leaves attached to every central vertex.
    #[arg(long, default_value_t = 1)]
    pub leaves: usize,
    /// Comma-separated fusion success probabilities.
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1.0")]
    pub p_grid: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub kmax: usize,
    #[arg(long, default_value_t = 100.0)]
    pub t1: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Single photons consumed per GHZ-3 resource; scales the resource
    /// columns (a heralded GHZ-3 costs six photons).
    #[arg(long, default_value_t = 1.0)]
    pub photons_per_ghz: f64,
    /// Write the comparison CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run_grgs(args: GrgsArgs) -> Result<(), CliError> {
    let grgs = match (&args.rgs, &args.central) {
        (Some(m), None) => {
            if *m == 0 {
                return Err(CliError::parse("--rgs needs m >= 1"));
            }
            build_rgs(*m)
        }
        (None, Some(path)) => {
            let central = load_graph(path)?;
            let n = central.n();
            build_grgs(central, vec![args.leaves; n])
                .map_err(|e| CliError::parse(e.to_string()))?
        }
        _ => return Err(CliError::parse("specify exactly one of --rgs or --central")),
    };
    if args.photons_per_ghz <= 0.0 {
        return Err(CliError::parse("--photons-per-ghz must be positive"));
    }
    let cfg = SaConfig::new(args.kmax.max(1), args.t1, args.seed);
    let mut cmp = compare_protocols(&grgs, &args.p_grid, &cfg)
        .map_err(|e| CliError::verification(e.to_string()))?;
    for row in &mut cmp.rows {
        row.naive_resources *= args.photons_per_ghz;
        row.commute_resources *= args.photons_per_ghz;
    }
    let csv = comparison_csv(&cmp.rows);
    match &args.out {
        Some(path) => std::fs::write(path, &csv)
            .map_err(|e| CliError::parse(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    eprintln!(
        "verification: ok (H has {} edges vs {}; word on {} qubits, sequence length {})",
        cmp.plan.h.edge_count(),
        grgs.central().edge_count(),
        cmp.plan.word.gates().len(),
        cmp.plan.lc_sequence.len()
    );
    Ok(())
}
