//! LP text format export and the external-solver bridge.
//!
//! The export targets the widely supported CPLEX-style LP format with
//! deterministic variable ordering, so identical models produce identical
//! bytes. Solutions come back as plain "name value" lines; the bridge
//! invokes the executable named by [`SOLVER_ENV`] as
//! `solver <model.lp> <solution path>` and expects exit status 0.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::process::Command;

use thiserror::Error;

use crate::ilp::{IlpModel, IlpSolution, SolveStatus, VarKind};

/// Environment variable naming the external ILP solver executable.
pub const SOLVER_ENV: &str = "GSMIN_ILP_SOLVER";

#[derive(Debug, Error)]
pub enum ExternalSolverError {
    #[error("environment variable {SOLVER_ENV} is not set")]
    NotConfigured,
    #[error("failed to run solver: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver exited with status {0}")]
    SolverFailed(String),
    #[error("bad solution line {0:?}")]
    BadSolutionLine(String),
    #[error("unknown variable {0:?} in solution")]
    UnknownVariable(String),
    #[error("value {value} for {name} is not integral or out of bounds")]
    BadValue { name: String, value: f64 },
}

fn push_term(out: &mut String, first: bool, coeff: f64, name: &str) {
    let mag = coeff.abs();
    match (first, coeff < 0.0) {
        (true, false) => out.push(' '),
        (true, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
        (false, true) => out.push_str(" - "),
    }
    if mag == mag.trunc() && mag.abs() < 1e15 {
        let _ = write!(out, "{} {}", mag as i64, name);
    } else {
        let _ = write!(out, "{mag} {name}");
    }
}

/// Serialises the model in LP format (objective, constraints, bounds,
/// binary and general sections).
pub fn export_lp(model: &IlpModel) -> String {
    let mut out = String::new();
    out.push_str("Minimize\n obj:");
    for (i, &(c, v)) in model.objective().iter().enumerate() {
        push_term(&mut out, i == 0, c, &model.variables()[v.0].name);
    }
    out.push_str("\nSubject To\n");
    for (i, c) in model.constraints().iter().enumerate() {
        let _ = write!(out, " c{i}:");
        for (t, &(k, v)) in c.terms.iter().enumerate() {
            push_term(&mut out, t == 0, k as f64, &model.variables()[v.0].name);
        }
        let _ = writeln!(out, " {} {}", c.relation.symbol(), c.rhs);
    }
    let generals: Vec<_> = model.variables().iter().filter(|v| v.kind == VarKind::Integer).collect();
    if !generals.is_empty() {
        out.push_str("Bounds\n");
        for v in &generals {
            let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, v.upper);
        }
    }
    let binaries: Vec<_> = model.variables().iter().filter(|v| v.kind == VarKind::Binary).collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for v in &binaries {
            let _ = writeln!(out, " {}", v.name);
        }
    }
    if !generals.is_empty() {
        out.push_str("Generals\n");
        for v in &generals {
            let _ = writeln!(out, " {}", v.name);
        }
    }
    out.push_str("End\n");
    out
}

/// Parses "name value" lines into a solution; unlisted variables default to
/// 0. Values must be integral within 1e-6 and inside their bounds.
pub fn parse_solution(model: &IlpModel, text: &str) -> Result<IlpSolution, ExternalSolverError> {
    let mut assignment = vec![0i64; model.variables().len()];
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('\\') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(ExternalSolverError::BadSolutionLine(line.to_string()));
        };
        let id = model
            .var_by_name(name)
            .ok_or_else(|| ExternalSolverError::UnknownVariable(name.to_string()))?;
        let value: f64 = value
            .parse()
            .map_err(|_| ExternalSolverError::BadSolutionLine(line.to_string()))?;
        let rounded = value.round();
        let var = &model.variables()[id.0];
        if (value - rounded).abs() > 1e-6
            || rounded < var.lower as f64
            || rounded > var.upper as f64
        {
            return Err(ExternalSolverError::BadValue { name: name.to_string(), value });
        }
        assignment[id.0] = rounded as i64;
    }
    let objective_value = model.objective_value(&assignment);
    Ok(IlpSolution { status: SolveStatus::Optimal, assignment, objective_value })
}

/// Writes the model to a temp file, invokes the solver named by
/// [`SOLVER_ENV`] as `solver <lp> <solution>`, and reads the result back.
pub fn solve_external(model: &IlpModel) -> Result<IlpSolution, ExternalSolverError> {
    let solver = std::env::var(SOLVER_ENV).map_err(|_| ExternalSolverError::NotConfigured)?;
    let dir = std::env::temp_dir();
    let tag = format!(
        "gsmin-{}-{:x}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or(0)
    );
    let lp_path = dir.join(format!("{tag}.lp"));
    let sol_path = dir.join(format!("{tag}.sol"));
    let result = run_solver(&solver, model, &lp_path, &sol_path);
    let _ = std::fs::remove_file(&lp_path);
    let _ = std::fs::remove_file(&sol_path);
    result
}

fn run_solver(
    solver: &str,
    model: &IlpModel,
    lp_path: &Path,
    sol_path: &Path,
) -> Result<IlpSolution, ExternalSolverError> {
    let mut file = std::fs::File::create(lp_path)?;
    file.write_all(export_lp(model).as_bytes())?;
    drop(file);
    let status = Command::new(solver).arg(lp_path).arg(sol_path).status()?;
    if !status.success() {
        return Err(ExternalSolverError::SolverFailed(status.to_string()));
    }
    let text = std::fs::read_to_string(sol_path)?;
    parse_solution(model, &text)
}
