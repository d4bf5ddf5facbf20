//! Depth-first branch and bound over bounded integer variables.
//!
//! Branching follows declaration order (the EDM models declare the
//! objective-carrying pair variables first, then the witness bits), trying
//! the objective-preferred value first. After every decision, bounds
//! propagation runs to a fixed point over the touched constraints; the
//! auxiliary product and parity variables of the EDM models are never
//! branched on in practice because propagation pins them. Incumbents prune
//! by objective lower bound. The search is deterministic.

use std::sync::atomic::{AtomicBool, Ordering};

use crate::ilp::{IlpModel, IlpSolution, Relation, SolveStatus, VarKind};

pub struct SolveOptions<'a> {
    /// Maximum number of search nodes before giving up with the incumbent.
    pub node_budget: u64,
    /// A known-feasible full assignment used to seed the incumbent.
    pub warm_start: Option<Vec<i64>>,
    /// Cooperative cancellation, checked at every node.
    pub cancel: Option<&'a AtomicBool>,
}

pub fn solve_builtin(model: &IlpModel, node_budget: u64) -> IlpSolution {
    solve_with_options(model, SolveOptions { node_budget, warm_start: None, cancel: None })
}

struct Search<'a> {
    model: &'a IlpModel,
    // constraint index per variable
    watched: Vec<Vec<u32>>,
    // objective coefficient per variable
    obj: Vec<f64>,
    lb: Vec<i64>,
    ub: Vec<i64>,
    trail: Vec<(u32, i64, i64)>, // (var, old lb, old ub)
    incumbent: Option<Vec<i64>>,
    incumbent_value: f64,
    nodes: u64,
    budget: u64,
    cancel: Option<&'a AtomicBool>,
    aborted: bool,
}

const EPS: f64 = 1e-9;

impl<'a> Search<'a> {
    fn new(model: &'a IlpModel, opts: &SolveOptions<'a>) -> Self {
        let nvars = model.variables().len();
        let mut watched = vec![Vec::new(); nvars];
        for (ci, c) in model.constraints().iter().enumerate() {
            for &(_, v) in &c.terms {
                watched[v.0].push(ci as u32);
            }
        }
        let mut obj = vec![0.0; nvars];
        for &(c, v) in model.objective() {
            obj[v.0] += c;
        }
        Search {
            model,
            watched,
            obj,
            lb: model.variables().iter().map(|v| v.lower).collect(),
            ub: model.variables().iter().map(|v| v.upper).collect(),
            trail: Vec::new(),
            incumbent: None,
            incumbent_value: f64::INFINITY,
            nodes: 0,
            budget: opts.node_budget,
            cancel: opts.cancel,
            aborted: false,
        }
    }

    #[inline]
    fn fixed(&self, v: usize) -> bool {
        self.lb[v] == self.ub[v]
    }

    fn set_lb(&mut self, v: usize, value: i64, queue: &mut Vec<u32>) -> bool {
        if value > self.ub[v] {
            return false;
        }
        if value > self.lb[v] {
            self.trail.push((v as u32, self.lb[v], self.ub[v]));
            self.lb[v] = value;
            queue.extend_from_slice(&self.watched[v]);
        }
        true
    }

    fn set_ub(&mut self, v: usize, value: i64, queue: &mut Vec<u32>) -> bool {
        if value < self.lb[v] {
            return false;
        }
        if value < self.ub[v] {
            self.trail.push((v as u32, self.lb[v], self.ub[v]));
            self.ub[v] = value;
            queue.extend_from_slice(&self.watched[v]);
        }
        true
    }

    /// Propagates bounds to a fixed point; false on conflict. Activities are
    /// computed per visit; any tightening re-queues the touched constraints,
    /// so stale (weaker) slacks within one pass stay sound.
    fn propagate(&mut self, queue: &mut Vec<u32>) -> bool {
        let model = self.model;
        while let Some(ci) = queue.pop() {
            let c = &model.constraints()[ci as usize];
            let (mut min_act, mut max_act) = (0i64, 0i64);
            for &(k, v) in &c.terms {
                if k > 0 {
                    min_act += k * self.lb[v.0];
                    max_act += k * self.ub[v.0];
                } else {
                    min_act += k * self.ub[v.0];
                    max_act += k * self.lb[v.0];
                }
            }
            let le = c.relation != Relation::Ge;
            let ge = c.relation != Relation::Le;
            if le && min_act > c.rhs {
                return false;
            }
            if ge && max_act < c.rhs {
                return false;
            }
            for &(k, v) in &c.terms {
                let v = v.0;
                if self.fixed(v) {
                    continue;
                }
                if le {
                    // k*x <= rhs - (min_act - own contribution)
                    let own_min = if k > 0 { k * self.lb[v] } else { k * self.ub[v] };
                    let slack = c.rhs - (min_act - own_min);
                    let ok = if k > 0 {
                        self.set_ub(v, slack.div_euclid(k), queue)
                    } else {
                        self.set_lb(v, -(slack.div_euclid(-k)), queue)
                    };
                    if !ok {
                        return false;
                    }
                }
                if ge {
                    // k*x >= rhs - (max_act - own contribution)
                    let own_max = if k > 0 { k * self.ub[v] } else { k * self.lb[v] };
                    let need = c.rhs - (max_act - own_max);
                    let ok = if k > 0 {
                        self.set_lb(v, -((-need).div_euclid(k)), queue)
                    } else {
                        self.set_ub(v, (-need).div_euclid(-k), queue)
                    };
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Objective lower bound under the current domains.
    fn bound(&self) -> f64 {
        self.model
            .objective()
            .iter()
            .map(|&(c, v)| if c > 0.0 { c * self.lb[v.0] as f64 } else { c * self.ub[v.0] as f64 })
            .sum()
    }

    fn next_branch_var(&self) -> Option<usize> {
        // binaries in declaration order, then any remaining integers
        let vars = self.model.variables();
        (0..vars.len())
            .find(|&v| vars[v].kind == VarKind::Binary && !self.fixed(v))
            .or_else(|| (0..vars.len()).find(|&v| !self.fixed(v)))
    }

    fn record_incumbent(&mut self) {
        let assignment: Vec<i64> = self.lb.clone();
        debug_assert!(self.model.is_feasible(&assignment), "propagation reached an infeasible leaf");
        let value = self.model.objective_value(&assignment);
        if value < self.incumbent_value - EPS {
            self.incumbent_value = value;
            self.incumbent = Some(assignment);
        }
    }

    fn dfs(&mut self) {
        self.nodes += 1;
        if self.nodes > self.budget
            || self.cancel.is_some_and(|c| c.load(Ordering::Relaxed))
        {
            self.aborted = true;
            return;
        }
        if self.bound() >= self.incumbent_value - EPS {
            return;
        }
        let Some(v) = self.next_branch_var() else {
            self.record_incumbent();
            return;
        };
        // fix the objective-preferred end of the domain first; the second
        // branch keeps the rest, which is complete for wide integers too
        let prefer_low = self.obj[v] >= 0.0;
        for side in 0..2 {
            if self.aborted {
                return;
            }
            let mark = self.trail.len();
            let mut queue: Vec<u32> = Vec::new();
            let ok = if prefer_low {
                if side == 0 {
                    self.set_ub(v, self.lb[v], &mut queue) // x = lb
                } else {
                    self.set_lb(v, self.lb[v] + 1, &mut queue) // x >= lb + 1
                }
            } else if side == 0 {
                self.set_lb(v, self.ub[v], &mut queue) // x = ub
            } else {
                self.set_ub(v, self.ub[v] - 1, &mut queue) // x <= ub - 1
            };
            if ok && self.propagate(&mut queue) {
                self.dfs();
            }
            while self.trail.len() > mark {
                let (var, lb, ub) = self.trail.pop().unwrap();
                self.lb[var as usize] = lb;
                self.ub[var as usize] = ub;
            }
        }
    }
}

pub fn solve_with_options(model: &IlpModel, opts: SolveOptions<'_>) -> IlpSolution {
    let mut search = Search::new(model, &opts);
    if let Some(warm) = &opts.warm_start {
        assert!(model.is_feasible(warm), "warm start must be feasible");
        search.incumbent_value = model.objective_value(warm);
        search.incumbent = Some(warm.clone());
    }

    // root propagation
    let mut queue: Vec<u32> = (0..model.constraints().len() as u32).collect();
    let root_ok = search.propagate(&mut queue);
    if root_ok {
        search.dfs();
    }

    let status = if search.aborted {
        SolveStatus::BudgetExhausted
    } else if search.incumbent.is_some() {
        SolveStatus::Optimal
    } else {
        SolveStatus::Infeasible
    };
    IlpSolution {
        status,
        objective_value: search.incumbent_value,
        assignment: search.incumbent.unwrap_or_default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{IlpModel, VarKind};

    fn toy_knapsack() -> IlpModel {
        // maximise 8a + 5b + 4c s.t. 6a + 4b + 3c <= 12 -> minimise the negation
        let mut m = IlpModel::new();
        let a = m.add_variable("a", VarKind::Binary, 0, 1);
        let b = m.add_variable("b", VarKind::Binary, 0, 1);
        let c = m.add_variable("c", VarKind::Binary, 0, 1);
        m.add_constraint(vec![(6, a), (4, b), (3, c)], Relation::Le, 12);
        m.set_objective(vec![(-8.0, a), (-5.0, b), (-4.0, c)]);
        m
    }

    #[test]
    fn knapsack_optimum() {
        let sol = solve_builtin(&toy_knapsack(), 1 << 20);
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.objective_value, -13.0);
        assert_eq!(sol.assignment, vec![1, 1, 0]);
    }

    #[test]
    fn infeasible_detected() {
        let mut m = IlpModel::new();
        let x = m.add_variable("x", VarKind::Binary, 0, 1);
        m.add_constraint(vec![(2, x)], Relation::Eq, 1);
        let sol = solve_builtin(&m, 1 << 20);
        assert_eq!(sol.status, SolveStatus::Infeasible);
    }

    #[test]
    fn equality_propagation_pins_integers() {
        // x + 2b = 5 with x binary forces x = 1, b = 2
        let mut m = IlpModel::new();
        let x = m.add_variable("x", VarKind::Binary, 0, 1);
        let b = m.add_variable("b", VarKind::Integer, 0, 10);
        m.add_constraint(vec![(1, x), (2, b)], Relation::Eq, 5);
        let sol = solve_builtin(&m, 1 << 20);
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.assignment, vec![1, 2]);
    }

    #[test]
    fn budget_exhaustion_keeps_warm_start() {
        let m = toy_knapsack();
        let warm = vec![1, 0, 0];
        let sol = solve_with_options(
            &m,
            SolveOptions { node_budget: 1, warm_start: Some(warm.clone()), cancel: None },
        );
        assert_eq!(sol.status, SolveStatus::BudgetExhausted);
        assert_eq!(sol.assignment, warm);
    }

    #[test]
    fn cancellation_stops_search() {
        let m = toy_knapsack();
        let cancel = AtomicBool::new(true);
        let sol = solve_with_options(
            &m,
            SolveOptions { node_budget: 1 << 20, warm_start: None, cancel: Some(&cancel) },
        );
        assert_eq!(sol.status, SolveStatus::BudgetExhausted);
        assert!(sol.assignment.is_empty());
    }

    #[test]
    fn negative_coefficient_bounds() {
        // minimise x - 2y with y <= x (binaries): optimum x = y = 1 -> -1
        let mut m = IlpModel::new();
        let x = m.add_variable("x", VarKind::Binary, 0, 1);
        let y = m.add_variable("y", VarKind::Binary, 0, 1);
        m.add_constraint(vec![(1, y), (-1, x)], Relation::Le, 0);
        m.set_objective(vec![(1.0, x), (-2.0, y)]);
        let sol = solve_builtin(&m, 1 << 20);
        assert_eq!(sol.objective_value, -1.0);
        assert_eq!(sol.assignment, vec![1, 1]);
    }
}
