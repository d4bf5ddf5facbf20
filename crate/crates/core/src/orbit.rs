//! Brute-force enumeration of LC orbits.
//!
//! The orbit of a graph under local complementation is explored breadth
//! first, deduplicating members by their exact labelled adjacency bit
//! string. Orbits grow exponentially with the vertex count, so members are
//! kept in a flat arena (packed keys plus parent links) behind a custom
//! open-addressing index; nothing is boxed per member. Enumeration order is
//! deterministic: members are expanded in insertion order and vertices are
//! tried in increasing order, so the recorded parent links always spell out
//! shortest complementation sequences.

use std::io::{self, Write};

use thiserror::Error;

use crate::graph::{key_lex_cmp, Graph};
use crate::graph6::write_graph6;

/// Default member cap. Truncation is reported, never silent: oracle
/// answers derived from a truncated orbit would be wrong.
pub const DEFAULT_ORBIT_LIMIT: usize = 5_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbitError {
    #[error("orbit truncated at {0} members before closure")]
    Truncated(usize),
    #[error("graph sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid vertex subset: {0}")]
    InvalidSubset(String),
}

// ---------------------------------------------------------------------------
// Flat key store with open addressing
// ---------------------------------------------------------------------------

struct KeyIndex {
    kw: usize, // words per key
    arena: Vec<u64>,
    table: Vec<u32>, // slot -> member index, u32::MAX = empty
    len: usize,
}

const EMPTY: u32 = u32::MAX;

#[inline]
fn hash_key(key: &[u64]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &w in key {
        h ^= w;
        h = h.wrapping_mul(0x1000_0000_01b3).rotate_left(23);
    }
    h
}

impl KeyIndex {
    fn new(kw: usize) -> Self {
        KeyIndex { kw, arena: Vec::new(), table: vec![EMPTY; 1024], len: 0 }
    }

    #[inline]
    fn key(&self, idx: u32) -> &[u64] {
        let i = idx as usize * self.kw;
        &self.arena[i..i + self.kw]
    }

    fn find(&self, key: &[u64]) -> Option<u32> {
        let mask = self.table.len() - 1;
        let mut slot = hash_key(key) as usize & mask;
        loop {
            match self.table[slot] {
                EMPTY => return None,
                idx => {
                    if self.key(idx) == key {
                        return Some(idx);
                    }
                }
            }
            slot = (slot + 1) & mask;
        }
    }

    /// Returns the member index and whether the key was newly inserted.
    fn insert_or_get(&mut self, key: &[u64]) -> (u32, bool) {
        if self.len * 10 >= self.table.len() * 7 {
            self.grow();
        }
        let mask = self.table.len() - 1;
        let mut slot = hash_key(key) as usize & mask;
        loop {
            match self.table[slot] {
                EMPTY => {
                    let idx = self.len as u32;
                    self.arena.extend_from_slice(key);
                    self.table[slot] = idx;
                    self.len += 1;
                    return (idx, true);
                }
                idx => {
                    if self.key(idx) == key {
                        return (idx, false);
                    }
                }
            }
            slot = (slot + 1) & mask;
        }
    }

    fn grow(&mut self) {
        let new_size = self.table.len() * 2;
        let mask = new_size - 1;
        let mut table = vec![EMPTY; new_size];
        for idx in 0..self.len as u32 {
            let mut slot = hash_key(self.key(idx)) as usize & mask;
            while table[slot] != EMPTY {
                slot = (slot + 1) & mask;
            }
            table[slot] = idx;
        }
        self.table = table;
    }
}

// ---------------------------------------------------------------------------
// Orbit enumeration
// ---------------------------------------------------------------------------

/// The (possibly truncated) orbit of a seed graph, with parent links
/// recording one shortest complementation sequence per member.
pub struct OrbitResult {
    n: usize,
    index: KeyIndex,
    parent: Vec<u32>,
    parent_vertex: Vec<u16>,
    truncated: bool,
}

impl OrbitResult {
    pub fn len(&self) -> usize {
        self.index.len
    }

    pub fn is_empty(&self) -> bool {
        self.index.len == 0
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> Graph {
        self.graph_at(0)
    }

    pub fn graph_at(&self, idx: u32) -> Graph {
        Graph::from_adjacency_key(self.n, self.index.key(idx))
    }

    pub fn edge_count_at(&self, idx: u32) -> usize {
        self.index.key(idx).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn contains(&self, g: &Graph) -> bool {
        g.n() == self.n && self.index.find(&g.adjacency_key()).is_some()
    }

    pub fn find(&self, g: &Graph) -> Option<u32> {
        if g.n() != self.n {
            return None;
        }
        self.index.find(&g.adjacency_key())
    }

    pub fn iter(&self) -> impl Iterator<Item = Graph> + '_ {
        (0..self.len() as u32).map(|i| self.graph_at(i))
    }

    /// Member with the fewest edges; ties broken by lexicographically
    /// smallest adjacency bit string.
    pub fn min_edge_member(&self) -> Option<u32> {
        let mut best: Option<(usize, u32)> = None;
        for idx in 0..self.len() as u32 {
            let e = self.edge_count_at(idx);
            best = Some(match best {
                None => (e, idx),
                Some((be, bi)) => {
                    use std::cmp::Ordering::*;
                    match e.cmp(&be) {
                        Less => (e, idx),
                        Greater => (be, bi),
                        Equal => match key_lex_cmp(self.index.key(idx), self.index.key(bi)) {
                            Less => (e, idx),
                            _ => (be, bi),
                        },
                    }
                }
            });
        }
        best.map(|(_, i)| i)
    }

    pub fn min_edge_count(&self) -> Option<usize> {
        (0..self.len() as u32).map(|i| self.edge_count_at(i)).min()
    }

    /// The complementation sequence from the seed to a member, read off the
    /// parent links.
    pub fn sequence_to(&self, idx: u32) -> Vec<usize> {
        let mut seq = Vec::new();
        let mut cur = idx;
        while cur != 0 {
            seq.push(self.parent_vertex[cur as usize] as usize);
            cur = self.parent[cur as usize];
        }
        seq.reverse();
        seq
    }

    /// One graph6 line per member followed by a summary object.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for g in self.iter() {
            let line = serde_json::to_string(&write_graph6(&g)).expect("string serializes");
            writeln!(out, "{line}")?;
        }
        let summary = serde_json::json!({
            "size": self.len(),
            "min_edges": self.min_edge_count(),
            "truncated": self.truncated(),
        });
        writeln!(out, "{summary}")
    }
}

/// BFS over local complementations, stopping early when `stop` returns true
/// for a newly discovered member. Returns the orbit and the hit, if any.
fn bfs_orbit(
    g: &Graph,
    limit: usize,
    mut stop: impl FnMut(u32, &Graph) -> bool,
) -> (OrbitResult, Option<u32>) {
    assert!(limit >= 1, "orbit limit must be at least 1");
    let n = g.n();
    let key = g.adjacency_key();
    let mut index = KeyIndex::new(key.len());
    index.insert_or_get(&key);
    let mut orbit = OrbitResult {
        n,
        index,
        parent: vec![0],
        parent_vertex: vec![0],
        truncated: false,
    };
    if stop(0, g) {
        return (orbit, Some(0));
    }

    let mut cursor: u32 = 0;
    let mut key_buf = vec![0u64; Graph::key_words(n)];
    while (cursor as usize) < orbit.len() {
        let current = orbit.graph_at(cursor);
        for v in 0..n {
            // complementing at a vertex of degree <= 1 is the identity
            if current.degree(v) <= 1 {
                continue;
            }
            let next = current.local_complement(v);
            next.adjacency_key_into(&mut key_buf);
            let (idx, inserted) = orbit.index.insert_or_get(&key_buf);
            if !inserted {
                continue;
            }
            orbit.parent.push(cursor);
            orbit.parent_vertex.push(v as u16);
            if stop(idx, &next) {
                return (orbit, Some(idx));
            }
            if orbit.len() > limit {
                orbit.truncated = true;
                return (orbit, None);
            }
        }
        cursor += 1;
    }
    (orbit, None)
}

/// Enumerates the LC orbit of `g`, up to `limit` members. Hitting the limit
/// is reported through the `truncated` flag, not as an error.
pub fn enumerate_orbit(g: &Graph, limit: usize) -> OrbitResult {
    bfs_orbit(g, limit, |_, _| false).0
}

/// Exact minimum edge representative via full orbit enumeration: the
/// sparsest member together with the complementation sequence reaching it.
pub fn exact_mer(g: &Graph, limit: usize) -> Result<(Graph, Vec<usize>), OrbitError> {
    let orbit = enumerate_orbit(g, limit);
    if orbit.truncated() {
        return Err(OrbitError::Truncated(orbit.len()));
    }
    let idx = orbit.min_edge_member().expect("orbit contains the seed");
    Ok((orbit.graph_at(idx), orbit.sequence_to(idx)))
}

/// Shortest complementation sequence from `g` to the labelled graph `h`, or
/// `None` when `h` lies outside the orbit.
pub fn lc_path(g: &Graph, h: &Graph, limit: usize) -> Result<Option<Vec<usize>>, OrbitError> {
    if g.n() != h.n() {
        return Err(OrbitError::SizeMismatch(g.n(), h.n()));
    }
    let target = h.adjacency_key();
    let (orbit, hit) = bfs_orbit(g, limit, |_, cand| cand.adjacency_key() == target);
    match hit {
        Some(idx) => Ok(Some(orbit.sequence_to(idx))),
        None if orbit.truncated() => Err(OrbitError::Truncated(orbit.len())),
        None => Ok(None),
    }
}

/// Whether `h` (given on the same labels as `g`, with edges inside
/// `subset`) is induced by some orbit member of `g` on `subset`.
pub fn is_vertex_minor(
    g: &Graph,
    h: &Graph,
    subset: &[usize],
    limit: usize,
) -> Result<bool, OrbitError> {
    if g.n() != h.n() {
        return Err(OrbitError::SizeMismatch(g.n(), h.n()));
    }
    validate_subset(g.n(), h, subset)?;
    let (orbit, hit) = bfs_orbit(g, limit, |_, cand| cand.agrees_on_subset(h, subset));
    match hit {
        Some(_) => Ok(true),
        None if orbit.truncated() => Err(OrbitError::Truncated(orbit.len())),
        None => Ok(false),
    }
}

pub(crate) fn validate_subset(n: usize, h: &Graph, subset: &[usize]) -> Result<(), OrbitError> {
    let mut seen = vec![false; n];
    for &v in subset {
        if v >= n {
            return Err(OrbitError::InvalidSubset(format!("vertex {v} out of range")));
        }
        if seen[v] {
            return Err(OrbitError::InvalidSubset(format!("vertex {v} repeated")));
        }
        seen[v] = true;
    }
    for (i, j) in h.edges() {
        if !seen[i] || !seen[j] {
            return Err(OrbitError::InvalidSubset(format!(
                "edge ({i},{j}) of the minor leaves the subset"
            )));
        }
    }
    Ok(())
}
