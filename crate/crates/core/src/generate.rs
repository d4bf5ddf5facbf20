//! Random graph models: Erdős–Rényi and bounded-degree via Havel–Hakimi.
//!
//! All generators take an explicit seed and draw from ChaCha8, so identical
//! seeds give identical graphs on every platform.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("edge probability {0} outside [0, 1]")]
    BadProbability(String),
    #[error("need n >= 2 and d_lim >= 1, got n={n}, d_lim={d_lim}")]
    BadBoundedDegreeArgs { n: usize, d_lim: usize },
    #[error("no graphical connected degree sequence found within {0} attempts")]
    RetryBudgetExhausted(usize),
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p): each of the n(n-1)/2 pairs is an edge independently with
/// probability `p`. Pairs are visited in lexicographic order.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::BadProbability(p.to_string()));
    }
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p) {
                g.set_edge(i, j, true);
            }
        }
    }
    Ok(g)
}

/// Erdős–Gallai test: whether a non-increasing-sortable degree sequence is
/// realisable by a simple graph.
pub fn erdos_gallai_graphical(degrees: &[usize]) -> bool {
    let n = degrees.len();
    let mut d: Vec<usize> = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    if d.iter().any(|&x| x >= n.max(1)) && n > 0 && d[0] >= n {
        return false;
    }
    let total: usize = d.iter().sum();
    if !total.is_multiple_of(2) {
        return false;
    }
    let mut lhs = 0usize;
    for k in 1..=n {
        lhs += d[k - 1];
        let mut rhs = k * (k - 1);
        for &di in &d[k..] {
            rhs += di.min(k);
        }
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Realises a degree sequence as a simple graph by the Havel–Hakimi
/// construction (highest degree first, ties broken by lowest vertex index).
/// Returns `None` when the sequence is not graphical.
pub fn havel_hakimi(degrees: &[usize]) -> Option<Graph> {
    let n = degrees.len();
    let mut g = Graph::empty(n);
    let mut remaining: Vec<(usize, usize)> = degrees.iter().copied().zip(0..n).collect();
    loop {
        // sort by residual degree descending, index ascending
        remaining.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let (d, v) = remaining[0];
        if d == 0 {
            return Some(g);
        }
        if d >= remaining.len() {
            return None;
        }
        remaining[0].0 = 0;
        for slot in remaining.iter_mut().skip(1).take(d) {
            if slot.0 == 0 {
                return None;
            }
            slot.0 -= 1;
            g.set_edge(v, slot.1, true);
        }
    }
}

/// Reconnects a simple graph without changing its degree sequence, by
/// two-edge swaps between components. Requires minimum degree 1 and at
/// least n-1 edges in total; under those conditions some component always
/// contains a cycle edge to trade away.
fn connect_by_edge_swaps(mut g: Graph) -> Graph {
    loop {
        let comps = g.components();
        if comps.len() <= 1 {
            return g;
        }
        // a component with at least as many edges as vertices has a cycle
        let (donor_idx, donor) = comps
            .iter()
            .enumerate()
            .find(|(_, c)| component_edge_count(&g, c) >= c.len())
            .expect("edge count >= n-1 guarantees a cyclic component");
        let (u, v) = cycle_edge(&g, donor).expect("cyclic component has a cycle edge");
        let other = comps
            .iter()
            .enumerate()
            .find(|(i, _)| *i != donor_idx)
            .map(|(_, c)| c)
            .expect("at least two components");
        let (x, y) = first_edge(&g, other).expect("minimum degree 1 leaves no edgeless component");
        // swap {u,v},{x,y} -> {u,x},{v,y}: degrees unchanged, components merge
        g.set_edge(u, v, false);
        g.set_edge(x, y, false);
        g.set_edge(u, x, true);
        g.set_edge(v, y, true);
    }
}

fn component_edge_count(g: &Graph, comp: &[usize]) -> usize {
    comp.iter().map(|&v| g.degree(v)).sum::<usize>() / 2
}

fn first_edge(g: &Graph, comp: &[usize]) -> Option<(usize, usize)> {
    for &v in comp {
        if let Some(u) = g.neighbors(v).next() {
            return Some((v.min(u), v.max(u)));
        }
    }
    None
}

/// Finds an edge lying on a cycle (a DFS back edge) within a component.
fn cycle_edge(g: &Graph, comp: &[usize]) -> Option<(usize, usize)> {
    let root = *comp.first()?;
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for u in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                parent[u] = v;
                stack.push(u);
            } else if parent[v] != u {
                return Some((v.min(u), v.max(u)));
            }
        }
    }
    None
}

/// Samples a connected simple graph with maximum degree `d_lim`: degrees are
/// drawn uniformly from 1..=d_lim, the sum's parity is repaired, and the
/// sequence is accepted when it is graphical (Erdős–Gallai) with at least
/// n-1 edges; Havel–Hakimi realises it and edge swaps restore connectivity.
/// Resamples up to `RETRY_BUDGET` times before giving up.
pub fn bounded_degree(n: usize, d_lim: usize, seed: u64) -> Result<Graph, GenError> {
    const RETRY_BUDGET: usize = 1000;
    if n < 2 || d_lim == 0 {
        return Err(GenError::BadBoundedDegreeArgs { n, d_lim });
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..RETRY_BUDGET {
        let mut degs: Vec<usize> = (0..n).map(|_| rng.random_range(1..=d_lim)).collect();
        if !degs.iter().sum::<usize>().is_multiple_of(2) {
            // fix parity: bump the first entry with headroom, else drop one
            if let Some(d) = degs.iter_mut().find(|d| **d < d_lim) {
                *d += 1;
            } else if let Some(d) = degs.iter_mut().find(|d| **d > 1) {
                *d -= 1;
            }
        }
        let sum: usize = degs.iter().sum();
        if !sum.is_multiple_of(2) || sum / 2 < n - 1 || !erdos_gallai_graphical(&degs) {
            continue;
        }
        if let Some(g) = havel_hakimi(&degs) {
            return Ok(connect_by_edge_swaps(g));
        }
    }
    Err(GenError::RetryBudgetExhausted(RETRY_BUDGET))
}
