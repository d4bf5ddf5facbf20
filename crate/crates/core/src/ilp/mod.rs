//! Integer linear programming for exact edge minimisation.
//!
//! [`build_edm_ilp`] emits the linearised LC-equivalence system over binary
//! witness bits and folded adjacency variables; [`solve_builtin`] is a
//! depth-first branch-and-bound solver with bounds propagation, good for a
//! dozen vertices; [`export_lp`] bridges to external solvers through the LP
//! text format. Weighted objectives cover the vertex-minor reduction.

mod build;
mod lp;
mod solve;

pub use build::{
    build_edm_ilp, decode_edm_solution, edm_constraint_count, edm_identity_assignment,
    edm_sailp, edm_variable_count, is_vertex_minor_ilp, vertex_minor_weights, VertexMinorError,
};
pub use lp::{export_lp, parse_solution, solve_external, ExternalSolverError, SOLVER_ENV};
pub use solve::{solve_builtin, solve_with_options, SolveOptions};

use std::collections::HashMap;

/// Handle to a declared variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Integer,
}

#[derive(Clone, Debug)]
pub struct IlpVariable {
    pub name: String,
    pub kind: VarKind,
    pub lower: i64,
    pub upper: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

/// `sum(coeff * var) REL rhs` with integer coefficients; duplicate variables
/// are merged at construction.
#[derive(Clone, Debug)]
pub struct LinearConstraint {
    pub terms: Vec<(i64, VarId)>,
    pub relation: Relation,
    pub rhs: i64,
}

/// A minimisation model over integer variables.
#[derive(Clone, Debug, Default)]
pub struct IlpModel {
    variables: Vec<IlpVariable>,
    constraints: Vec<LinearConstraint>,
    objective: Vec<(f64, VarId)>,
    by_name: HashMap<String, VarId>,
}

impl IlpModel {
    pub fn new() -> Self {
        IlpModel::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>, kind: VarKind, lower: i64, upper: i64) -> VarId {
        let name = name.into();
        assert!(lower <= upper, "empty domain for {name}");
        if kind == VarKind::Binary {
            assert!(lower == 0 && upper == 1, "binary {name} must have bounds (0, 1)");
        }
        let id = VarId(self.variables.len());
        let prev = self.by_name.insert(name.clone(), id);
        assert!(prev.is_none(), "duplicate variable name {name}");
        self.variables.push(IlpVariable { name, kind, lower, upper });
        id
    }

    pub fn add_constraint(&mut self, terms: Vec<(i64, VarId)>, relation: Relation, rhs: i64) {
        let mut merged: Vec<(i64, VarId)> = Vec::with_capacity(terms.len());
        let mut sorted = terms;
        sorted.sort_by_key(|&(_, v)| v);
        for (c, v) in sorted {
            assert!(v.0 < self.variables.len(), "undeclared variable in constraint");
            match merged.last_mut() {
                Some((mc, mv)) if *mv == v => *mc += c,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|&(c, _)| c != 0);
        self.constraints.push(LinearConstraint { terms: merged, relation, rhs });
    }

    pub fn set_objective(&mut self, terms: Vec<(f64, VarId)>) {
        for &(_, v) in &terms {
            assert!(v.0 < self.variables.len(), "undeclared variable in objective");
        }
        self.objective = terms;
    }

    pub fn variables(&self) -> &[IlpVariable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(f64, VarId)] {
        &self.objective
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn objective_value(&self, assignment: &[i64]) -> f64 {
        self.objective.iter().map(|&(c, v)| c * assignment[v.0] as f64).sum()
    }

    /// Whether a full assignment satisfies every constraint and bound.
    pub fn is_feasible(&self, assignment: &[i64]) -> bool {
        if assignment.len() != self.variables.len() {
            return false;
        }
        for (var, &val) in self.variables.iter().zip(assignment) {
            if val < var.lower || val > var.upper {
                return false;
            }
        }
        self.constraints.iter().all(|c| {
            let lhs: i64 = c.terms.iter().map(|&(k, v)| k * assignment[v.0]).sum();
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// Proven optimal within the search.
    Optimal,
    Infeasible,
    /// Node budget (or cancellation) hit; `assignment` holds the incumbent
    /// if one was found.
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct IlpSolution {
    pub status: SolveStatus,
    /// One value per declared variable; empty when no incumbent exists.
    pub assignment: Vec<i64>,
    pub objective_value: f64,
}
