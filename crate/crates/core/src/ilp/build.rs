//! Construction of the edge-minimisation ILP (EDM-ILP).
//!
//! For an input graph G the model searches over all LC-equivalent graphs H:
//! binary variables `AH_i_j` (one per unordered pair, symmetry folded in)
//! carry the objective, the witness diagonals p, q, r, s tie H to G through
//! the linearised LC-equivalence system
//!
//! ```text
//!   P A_H + Q + A_G R A_H + A_G S = 2 B
//! ```
//!
//! with products replaced by the standard three-inequality linearisation
//! (`y <= x`, `y <= z`, `y >= x + z - 1`) and the per-qubit symplectic
//! constraint encoded as `ZPS_i + ZRQ_i = 1` (exact over the integers,
//! since the product sum can never reach 2 while equalling 1 mod 2).
//! Every model is feasible: the identity witness with `A_H = A_G` satisfies
//! all constraints, and doubles as the warm start for the solver.

use thiserror::Error;

use crate::graph::{Graph, WeightMatrix};
use crate::ilp::{
    solve_with_options, IlpModel, IlpSolution, Relation, SolveOptions, SolveStatus, VarId,
    VarKind,
};
use crate::orbit::validate_subset;
use crate::sa::{edm_sa, SaConfig};
use crate::symplectic::SymplecticWitness;
use crate::gf2::BitVec;

/// Deterministic variable layout shared by the builder, the identity warm
/// start, and the solution decoder.
struct Layout {
    n: usize,
}

impl Layout {
    fn ah(&self, i: usize, j: usize) -> usize {
        let (i, j) = (i.min(j), i.max(j));
        debug_assert!(i < j && j < self.n);
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    fn pairs(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    fn p(&self, a: usize) -> usize {
        self.pairs() + a
    }

    fn q(&self, a: usize) -> usize {
        self.pairs() + self.n + a
    }

    fn r(&self, a: usize) -> usize {
        self.pairs() + 2 * self.n + a
    }

    fn s(&self, a: usize) -> usize {
        self.pairs() + 3 * self.n + a
    }

    /// Index among the n(n-1) ordered off-diagonal pairs, row-major.
    fn off_diag(&self, a: usize, j: usize) -> usize {
        debug_assert!(a != j);
        a * (self.n - 1) + if j < a { j } else { j - 1 }
    }

    fn zp(&self, a: usize, j: usize) -> usize {
        self.pairs() + 4 * self.n + self.off_diag(a, j)
    }

    fn zps(&self, a: usize) -> usize {
        self.pairs() + 4 * self.n + 2 * self.n * (self.n - 1) + a
    }

    fn b(&self, i: usize, j: usize) -> usize {
        self.pairs() + 4 * self.n + 2 * self.n * (self.n - 1) + 2 * self.n + i * self.n + j
    }
}

/// Total variable count of the EDM model on n vertices.
pub fn edm_variable_count(n: usize) -> usize {
    n * (n - 1) / 2 + 4 * n + 2 * n * (n - 1) + 2 * n + n * n
}

/// Total constraint count of the EDM model on n vertices.
pub fn edm_constraint_count(n: usize) -> usize {
    // main equalities + linearisation triples + per-qubit symplectic rows
    n * n + 3 * (2 * n * (n - 1) + 2 * n) + n
}

/// Builds the EDM-ILP for `g`, minimising the (optionally weighted) edge
/// count over the LC class. Variable names are stable: `AH_i_j`, `P_a`,
/// `Q_a`, `R_a`, `S_a`, `ZP_a_j`, `ZR_i_j`, `ZPS_a`, `ZRQ_a`, `B_i_j`,
/// all 0-based.
pub fn build_edm_ilp(g: &Graph, weights: Option<&WeightMatrix>) -> IlpModel {
    let n = g.n();
    if let Some(w) = weights {
        assert_eq!(w.n(), n, "weight matrix size must match the graph");
    }
    let lay = Layout { n };
    let mut m = IlpModel::new();

    let mut ah = Vec::with_capacity(lay.pairs());
    for i in 0..n {
        for j in (i + 1)..n {
            ah.push(m.add_variable(format!("AH_{i}_{j}"), VarKind::Binary, 0, 1));
        }
    }
    let bit = |prefix: &str, m: &mut IlpModel, a: usize| -> VarId {
        m.add_variable(format!("{prefix}_{a}"), VarKind::Binary, 0, 1)
    };
    let p: Vec<VarId> = (0..n).map(|a| bit("P", &mut m, a)).collect();
    let q: Vec<VarId> = (0..n).map(|a| bit("Q", &mut m, a)).collect();
    let r: Vec<VarId> = (0..n).map(|a| bit("R", &mut m, a)).collect();
    let s: Vec<VarId> = (0..n).map(|a| bit("S", &mut m, a)).collect();
    let mut zp = Vec::with_capacity(n * n.saturating_sub(1));
    let mut zr = Vec::with_capacity(n * n.saturating_sub(1));
    for a in 0..n {
        for j in 0..n {
            if a != j {
                zp.push(m.add_variable(format!("ZP_{a}_{j}"), VarKind::Binary, 0, 1));
            }
        }
    }
    for a in 0..n {
        for j in 0..n {
            if a != j {
                zr.push(m.add_variable(format!("ZR_{a}_{j}"), VarKind::Binary, 0, 1));
            }
        }
    }
    let zps: Vec<VarId> = (0..n).map(|a| bit("ZPS", &mut m, a)).collect();
    let zrq: Vec<VarId> = (0..n).map(|a| bit("ZRQ", &mut m, a)).collect();
    let mut b = Vec::with_capacity(n * n);
    for i in 0..n {
        let ub = (g.degree(i) as i64 + 3) / 2;
        for j in 0..n {
            b.push(m.add_variable(format!("B_{i}_{j}"), VarKind::Integer, 0, ub));
        }
    }

    debug_assert_eq!(m.variables().len(), edm_variable_count(n));
    let ahv = |i: usize, j: usize| ah[lay.ah(i, j)];
    let zpv = |a: usize, j: usize| zp[lay.off_diag(a, j)];
    let zrv = |a: usize, j: usize| zr[lay.off_diag(a, j)];

    // main equalities: entry (i, j) of P A_H + Q + A_G R A_H + A_G S = 2B
    for i in 0..n {
        for j in 0..n {
            let mut terms: Vec<(i64, VarId)> = Vec::new();
            if i != j {
                terms.push((1, zpv(i, j))); // p_i * A_H[i,j]
            } else {
                terms.push((1, q[i]));
            }
            for a in g.neighbors(i) {
                if a != j {
                    terms.push((1, zrv(j, a))); // r_a * A_H[a,j] = A_H[j,a] * r_a
                }
            }
            if i != j && g.has_edge(i, j) {
                terms.push((1, s[j]));
            }
            terms.push((-2, b[i * n + j]));
            m.add_constraint(terms, Relation::Eq, 0);
        }
    }

    // product linearisations: y = x * z as y <= x, y <= z, y >= x + z - 1
    let product = |m: &mut IlpModel, y: VarId, x: VarId, z: VarId| {
        m.add_constraint(vec![(1, y), (-1, x)], Relation::Le, 0);
        m.add_constraint(vec![(1, y), (-1, z)], Relation::Le, 0);
        m.add_constraint(vec![(1, y), (-1, x), (-1, z)], Relation::Ge, -1);
    };
    for a in 0..n {
        for j in 0..n {
            if a != j {
                product(&mut m, zpv(a, j), p[a], ahv(a, j));
            }
        }
    }
    for a in 0..n {
        for j in 0..n {
            if a != j {
                product(&mut m, zrv(a, j), ahv(a, j), r[j]);
            }
        }
    }
    for a in 0..n {
        product(&mut m, zps[a], p[a], s[a]);
        product(&mut m, zrq[a], r[a], q[a]);
    }

    // per-qubit symplectic constraint p_a s_a + r_a q_a = 1
    for a in 0..n {
        m.add_constraint(vec![(1, zps[a]), (1, zrq[a])], Relation::Eq, 1);
    }

    debug_assert_eq!(m.constraints().len(), edm_constraint_count(n));

    let mut objective = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let c = weights.map_or(1.0, |w| w.get(i, j));
            if c != 0.0 {
                objective.push((c, ahv(i, j)));
            }
        }
    }
    m.set_objective(objective);
    m
}

/// The always-feasible assignment encoding `A_H = A_G` with the identity
/// witness (p = s = 1, q = r = 0). Used to seed the solver's incumbent.
pub fn edm_identity_assignment(g: &Graph) -> Vec<i64> {
    let n = g.n();
    let lay = Layout { n };
    let mut x = vec![0i64; edm_variable_count(n)];
    for i in 0..n {
        for j in (i + 1)..n {
            if g.has_edge(i, j) {
                x[lay.ah(i, j)] = 1;
            }
        }
    }
    for a in 0..n {
        x[lay.p(a)] = 1;
        x[lay.s(a)] = 1;
        x[lay.zps(a)] = 1;
        for j in 0..n {
            if a != j && g.has_edge(a, j) {
                x[lay.zp(a, j)] = 1; // p_a * A_H[a,j]
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && g.has_edge(i, j) {
                x[lay.b(i, j)] = 1; // LHS = ZP + A_G[i,j]*s_j = 2
            }
        }
    }
    x
}

/// Reads the optimised graph and its witness out of a solution. The witness
/// is the local Clifford layer taking the decoded graph's state to the
/// input's state.
pub fn decode_edm_solution(n: usize, solution: &IlpSolution) -> (Graph, SymplecticWitness) {
    let lay = Layout { n };
    assert_eq!(solution.assignment.len(), edm_variable_count(n), "assignment size mismatch");
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if solution.assignment[lay.ah(i, j)] != 0 {
                g.set_edge(i, j, true);
            }
        }
    }
    let load = |f: &dyn Fn(usize) -> usize| {
        let mut v = BitVec::zeros(n);
        for a in 0..n {
            if solution.assignment[f(a)] != 0 {
                v.set(a, true);
            }
        }
        v
    };
    let w = SymplecticWitness::new(
        load(&|a| lay.p(a)),
        load(&|a| lay.q(a)),
        load(&|a| lay.r(a)),
        load(&|a| lay.s(a)),
    )
    .expect("solver enforces the per-qubit constraint");
    (g, w)
}

/// EDM-SAILP: anneal first, then prove (or improve) the result exactly with
/// the ILP. The solver is warm-started with the SA output, so the final
/// edge count never exceeds it.
pub fn edm_sailp(g: &Graph, cfg: &SaConfig, node_budget: u64) -> (Graph, IlpSolution) {
    let sa = edm_sa(g, cfg);
    let model = build_edm_ilp(&sa.best_graph, cfg.weights.as_ref());
    let warm = edm_identity_assignment(&sa.best_graph);
    let solution = solve_with_options(
        &model,
        SolveOptions { node_budget, warm_start: Some(warm), cancel: None },
    );
    let (h, _) = decode_edm_solution(g.n(), &solution);
    (h, solution)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VertexMinorError {
    #[error("{0}")]
    InvalidSubset(String),
    #[error("vertex {0} is isolated in the minor and no zero-weight pair names it")]
    UncoveredIsolated(usize),
    #[error("bad zero-weight pair ({0}, {1})")]
    BadZeroPair(usize, usize),
    #[error("solver budget exhausted before optimality")]
    BudgetExhausted,
}

/// Weight matrix of the vertex-minor reduction: -1 on the edges of `h`,
/// +1 on the remaining pairs inside `subset`, 0 elsewhere. For each vertex
/// of `subset` isolated in `h`, `zero_pairs` must name one incident pair
/// that receives weight 0 instead of +1.
pub fn vertex_minor_weights(
    g: &Graph,
    h: &Graph,
    subset: &[usize],
    zero_pairs: &[(usize, usize)],
) -> Result<WeightMatrix, VertexMinorError> {
    validate_subset(g.n(), h, subset).map_err(|e| VertexMinorError::InvalidSubset(e.to_string()))?;
    if h.n() != g.n() {
        return Err(VertexMinorError::InvalidSubset("minor must share the vertex set".into()));
    }
    let in_subset = |v: usize| subset.contains(&v);
    for &(v, u) in zero_pairs {
        if !in_subset(v) || !in_subset(u) || v == u || h.degree(v) != 0 {
            return Err(VertexMinorError::BadZeroPair(v, u));
        }
    }
    for &v in subset {
        if h.degree(v) == 0 && !zero_pairs.iter().any(|&(a, _)| a == v) {
            return Err(VertexMinorError::UncoveredIsolated(v));
        }
    }
    let mut w = WeightMatrix::zeros(g.n());
    for (ai, &i) in subset.iter().enumerate() {
        for &j in &subset[ai + 1..] {
            let zeroed = zero_pairs
                .iter()
                .any(|&(a, b)| (a == i && b == j) || (a == j && b == i));
            let value = if h.has_edge(i, j) {
                -1.0
            } else if zeroed {
                0.0
            } else {
                1.0
            };
            w.set(i, j, value);
        }
    }
    Ok(w)
}

/// Decides the labelled vertex-minor question through the weighted EDM
/// optimum: `h` is a vertex minor of `g` exactly when the optimum reaches
/// `-|E(h)|`, the smallest value the weights allow.
pub fn is_vertex_minor_ilp(
    g: &Graph,
    h: &Graph,
    subset: &[usize],
    node_budget: u64,
) -> Result<bool, VertexMinorError> {
    let weights = vertex_minor_weights(g, h, subset, &[])?;
    let model = build_edm_ilp(g, Some(&weights));
    let warm = edm_identity_assignment(g);
    let solution = solve_with_options(
        &model,
        SolveOptions { node_budget, warm_start: Some(warm), cancel: None },
    );
    if solution.status != SolveStatus::Optimal {
        return Err(VertexMinorError::BudgetExhausted);
    }
    let target = -(h.edge_count() as f64);
    Ok((solution.objective_value - target).abs() < 1e-6)
}
