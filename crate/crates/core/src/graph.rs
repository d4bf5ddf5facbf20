//! Simple undirected graphs as symmetric bit matrices over GF(2).
//!
//! Adjacency rows are packed into `u64` blocks in one flat allocation, so a
//! local complementation is a handful of word-wide XORs and cloning a graph
//! is a single memcpy. All mutating operations return new values; a `Graph`
//! is immutable once built and safe to share across threads.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::Gf2Matrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex index {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    bpr: usize,     // u64 blocks per row
    bits: Vec<u64>, // n rows of bpr blocks; bit j of row i = edge {i,j}
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let bpr = n.div_ceil(64).max(1);
        Graph { n, bpr, bits: vec![0; n * bpr] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in 0..i {
                g.set_edge(i, j, true);
            }
        }
        g
    }

    /// Path 0-1-2-...-(n-1).
    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 1..n {
            g.set_edge(i - 1, i, true);
        }
        g
    }

    /// Cycle on n >= 3 vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.set_edge(n - 1, 0, true);
        g
    }

    /// Star with centre 0 and n-1 leaves.
    pub fn star(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 1..n {
            g.set_edge(0, i, true);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            if i >= n {
                return Err(GraphError::VertexOutOfRange(i, n));
            }
            if j >= n {
                return Err(GraphError::VertexOutOfRange(j, n));
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            g.set_edge(i, j, true);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.bpr..(i + 1) * self.bpr]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n && j < self.n, "edge ({i},{j}) out of range");
        self.row(i)[j / 64] >> (j % 64) & 1 != 0
    }

    pub(crate) fn set_edge(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.n && j < self.n && i != j, "bad edge ({i},{j})");
        let bpr = self.bpr;
        let (wi, mi) = (j / 64, 1u64 << (j % 64));
        let (wj, mj) = (i / 64, 1u64 << (i % 64));
        if value {
            self.bits[i * bpr + wi] |= mi;
            self.bits[j * bpr + wj] |= mj;
        } else {
            self.bits[i * bpr + wi] &= !mi;
            self.bits[j * bpr + wj] &= !mj;
        }
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(w, &b)| {
            let mut bits = b;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * 64 + i)
                }
            })
        })
    }

    /// Edges as sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in self.neighbors(i) {
                if j > i {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Complements the induced subgraph on the neighbourhood of `v`;
    /// everything else, including the edges at `v` itself, is unchanged.
    pub fn local_complement(&self, v: usize) -> Graph {
        assert!(v < self.n, "vertex {v} out of range for {} vertices", self.n);
        let mut g = self.clone();
        g.local_complement_in_place(v);
        g
    }

    pub(crate) fn local_complement_in_place(&mut self, v: usize) {
        let bpr = self.bpr;
        // the neighbourhood mask fits on the stack for n <= 256
        let mut small = [0u64; 4];
        let mask: &[u64] = if bpr <= 4 {
            small[..bpr].copy_from_slice(self.row(v));
            &small[..bpr]
        } else {
            return self.local_complement_in_place_large(v);
        };
        for u in ones(mask) {
            let row = &mut self.bits[u * bpr..(u + 1) * bpr];
            for (r, m) in row.iter_mut().zip(mask) {
                *r ^= m;
            }
            // the XOR above set the diagonal bit (u is its own mask member)
            row[u / 64] &= !(1u64 << (u % 64));
        }
    }

    fn local_complement_in_place_large(&mut self, v: usize) {
        let bpr = self.bpr;
        let mask: Vec<u64> = self.row(v).to_vec();
        for u in ones(&mask) {
            let row = &mut self.bits[u * bpr..(u + 1) * bpr];
            for (r, m) in row.iter_mut().zip(&mask) {
                *r ^= m;
            }
            row[u / 64] &= !(1u64 << (u % 64));
        }
    }

    /// Number of edges between the neighbours of `v`.
    pub fn neighbor_edge_count(&self, v: usize) -> usize {
        assert!(v < self.n, "vertex {v} out of range");
        let mask = self.row(v);
        let mut twice = 0usize;
        for u in ones(mask) {
            twice += self
                .row(u)
                .iter()
                .zip(mask)
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum::<usize>();
        }
        twice / 2
    }

    /// Local clustering coefficient: realised fraction of edges among the
    /// neighbours of `v`. Defined as 0 for vertices of degree 0 or 1.
    pub fn clustering_coefficient(&self, v: usize) -> f64 {
        let d = self.degree(v);
        if d <= 1 {
            return 0.0;
        }
        let possible = d * (d - 1) / 2;
        self.neighbor_edge_count(v) as f64 / possible as f64
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![0u64; self.bpr];
        seen[0] = 1;
        let mut stack = vec![0usize];
        let mut count = 1usize;
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if seen[u / 64] >> (u % 64) & 1 == 0 {
                    seen[u / 64] |= 1 << (u % 64);
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Whether the induced subgraphs of `self` and `other` agree on every
    /// pair from `subset` (labels taken as-is, not relabelled).
    pub fn agrees_on_subset(&self, other: &Graph, subset: &[usize]) -> bool {
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a + 1..] {
                if self.has_edge(i, j) != other.has_edge(i, j) {
                    return false;
                }
            }
        }
        true
    }

    pub fn adjacency_matrix(&self) -> Gf2Matrix {
        Gf2Matrix::from_fn(self.n, self.n, |i, j| i != j && self.has_edge(i, j))
    }

    /// Upper-triangle adjacency bits `(0,1),(0,2),...` packed LSB-first into
    /// `u64` words: the dedup key for orbit enumeration.
    pub fn adjacency_key(&self) -> Vec<u64> {
        let nbits = self.n * self.n.saturating_sub(1) / 2;
        let mut key = vec![0u64; nbits.div_ceil(64).max(1)];
        self.adjacency_key_into(&mut key);
        key
    }

    /// Writes the adjacency key into a caller-provided buffer of
    /// `key_words(n)` zeroable words (hot path of the orbit search).
    pub(crate) fn adjacency_key_into(&self, key: &mut [u64]) {
        key.fill(0);
        let mut pos = 0usize;
        for i in 0..self.n {
            let row = self.row(i);
            // bits j > i of row i, appended as one (n-i-1)-bit chunk
            let mut j = i + 1;
            while j < self.n {
                let w = j / 64;
                let take = (64 - j % 64).min(self.n - j);
                let chunk = (row[w] >> (j % 64)) & mask_low(take);
                or_bits(key, pos, chunk, take);
                pos += take;
                j += take;
            }
        }
    }

    pub(crate) fn key_words(n: usize) -> usize {
        (n * n.saturating_sub(1) / 2).div_ceil(64).max(1)
    }

    /// Rebuilds a graph from its `adjacency_key`.
    pub fn from_adjacency_key(n: usize, key: &[u64]) -> Graph {
        let mut g = Graph::empty(n);
        let mut pos = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                if key[pos / 64] >> (pos % 64) & 1 != 0 {
                    g.set_edge(i, j, true);
                }
                pos += 1;
            }
        }
        g
    }
}

#[inline]
fn mask_low(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn or_bits(dst: &mut [u64], pos: usize, chunk: u64, len: usize) {
    let w = pos / 64;
    let off = pos % 64;
    dst[w] |= chunk << off;
    if off + len > 64 {
        dst[w + 1] |= chunk >> (64 - off);
    }
}

fn ones(blocks: &[u64]) -> impl Iterator<Item = usize> + '_ {
    blocks.iter().enumerate().flat_map(|(w, &b)| {
        let mut bits = b;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + i)
            }
        })
    })
}

/// Compares two adjacency keys as bit strings (bit 0 most significant).
pub fn key_lex_cmp(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    debug_assert_eq!(a.len(), b.len());
    for (&x, &y) in a.iter().zip(b) {
        if x != y {
            let bit = (x ^ y).trailing_zeros();
            // the first differing bit decides: 0 sorts before 1
            return if x >> bit & 1 == 0 {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            };
        }
    }
    std::cmp::Ordering::Equal
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

// ---------------------------------------------------------------------------
// JSON schema: {"n": int, "edges": [[i, j], ...]} with i < j, sorted.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson { n: self.n, edges: self.edges() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        let edges: Vec<(usize, usize)> = raw.edges;
        Graph::from_edges(raw.n, &edges).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Edge weights live outside the graph.
// ---------------------------------------------------------------------------

/// Symmetric real edge weights with zero diagonal; entries may be negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightJson", into = "WeightJson")]
pub struct WeightMatrix {
    n: usize,
    w: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct WeightJson {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl WeightMatrix {
    pub fn zeros(n: usize) -> Self {
        WeightMatrix { n, w: vec![0.0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "weight index out of range");
        self.w[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(i < self.n && j < self.n && i != j, "bad weight index ({i},{j})");
        self.w[i * self.n + j] = value;
        self.w[j * self.n + i] = value;
    }

    /// Total weight of the edges of `g`.
    pub fn energy(&self, g: &Graph) -> f64 {
        assert_eq!(g.n(), self.n, "weight matrix size mismatch");
        g.edges().iter().map(|&(i, j)| self.get(i, j)).sum()
    }
}

impl From<WeightMatrix> for WeightJson {
    fn from(m: WeightMatrix) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.n {
            for j in (i + 1)..m.n {
                let v = m.get(i, j);
                if v != 0.0 {
                    entries.push((i, j, v));
                }
            }
        }
        WeightJson { n: m.n, entries }
    }
}

impl TryFrom<WeightJson> for WeightMatrix {
    type Error = String;

    fn try_from(raw: WeightJson) -> Result<Self, String> {
        let mut m = WeightMatrix::zeros(raw.n);
        for (i, j, v) in raw.entries {
            if i >= raw.n || j >= raw.n || i == j {
                return Err(format!("bad weight entry ({i},{j})"));
            }
            m.set(i, j, v);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_complement_triangle() {
        // K3 at vertex 0: the edge between the neighbours {1,2} is removed.
        let k3 = Graph::complete(3);
        let g = k3.local_complement(0);
        assert_eq!(g.edges(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn local_complement_star_leaf_is_identity() {
        // A leaf's neighbourhood is a single vertex: nothing to complement.
        let s4 = Graph::star(5);
        assert_eq!(s4.local_complement(1), s4);
    }

    #[test]
    fn local_complement_k5_gives_star() {
        let g = Graph::complete(5).local_complement(0);
        assert_eq!(g, Graph::star(5));
    }

    #[test]
    fn local_complement_involution_and_degree() {
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (2, 5)]).unwrap();
        for v in 0..6 {
            let lc = g.local_complement(v);
            assert_eq!(lc.degree(v), g.degree(v));
            assert_eq!(lc.local_complement(v), g);
        }
    }

    #[test]
    fn clustering_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(k3.clustering_coefficient(0), 1.0);
        let path = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(path.clustering_coefficient(0), 0.0);
        // degree <= 1 is defined as 0
        assert_eq!(path.clustering_coefficient(1), 0.0);
        assert_eq!(Graph::empty(2).clustering_coefficient(0), 0.0);
    }

    #[test]
    fn clustering_complement_identity() {
        // C_{L_v(G)}(v) = 1 - C_G(v) for vertices of degree >= 2; exact in
        // the edge counts: e' = possible - e.
        let g = Graph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)])
            .unwrap();
        for v in 0..7 {
            let d = g.degree(v);
            if d < 2 {
                continue;
            }
            let possible = d * (d - 1) / 2;
            let lc = g.local_complement(v);
            assert_eq!(lc.neighbor_edge_count(v), possible - g.neighbor_edge_count(v));
            assert!((lc.clustering_coefficient(v) - (1.0 - g.clustering_coefficient(v))).abs() < 1e-12);
        }
    }

    #[test]
    fn adjacency_key_roundtrip() {
        for n in [0usize, 1, 2, 5, 13, 64, 65, 70] {
            let mut g = Graph::empty(n);
            // a deterministic pseudo-pattern
            for i in 0..n {
                for j in (i + 1)..n {
                    if (i * 7 + j * 13) % 3 == 0 {
                        g.set_edge(i, j, true);
                    }
                }
            }
            let key = g.adjacency_key();
            assert_eq!(Graph::from_adjacency_key(n, &key), g);
        }
    }

    #[test]
    fn key_lex_order_matches_bit_strings() {
        // 3 vertices: key bits are (0,1),(0,2),(1,2)
        let a = Graph::from_edges(3, &[(0, 1)]).unwrap(); // 100
        let b = Graph::from_edges(3, &[(0, 2), (1, 2)]).unwrap(); // 011
        assert_eq!(key_lex_cmp(&b.adjacency_key(), &a.adjacency_key()), std::cmp::Ordering::Less);
    }

    #[test]
    fn graph_json_roundtrip() {
        let g = Graph::from_edges(5, &[(0, 4), (1, 2), (0, 1)]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"n":5,"edges":[[0,1],[0,4],[1,2]]}"#);
        let back: Graph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[0,2]]}"#).is_err());
    }

    #[test]
    fn weight_energy() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let mut w = WeightMatrix::zeros(3);
        w.set(0, 1, -1.0);
        w.set(1, 2, 2.5);
        w.set(0, 2, 100.0); // not an edge; must not count
        assert_eq!(w.energy(&g), 1.5);
    }
}
