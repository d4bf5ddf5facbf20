//! Binary-symplectic stabilizer machinery and the polynomial-time
//! LC-equivalence test for graph states.
//!
//! A local Clifford layer is a per-qubit block matrix `M = [[P, Q], [R, S]]`
//! with binary diagonals. Two graph states |G>, |H> are LC-equivalent
//! exactly when `[A_G I] Omega M [A_H; I] = 0` has a solution, i.e. when
//! the linear system
//!
//! ```text
//!   P A_H + Q + A_G R A_H + A_G S = 0   (mod 2)
//! ```
//!
//! over the diagonals (p, q, r, s) admits a solution that also satisfies
//! the per-qubit symplectic constraint `p_i s_i + r_i q_i = 1`. (Flattened
//! presentations of this system sometimes move the diagonal factors to the
//! wrong side of `A_H`; the form above is the one the block condition
//! actually expands to, and the only one whose solutions transform one
//! tableau into the other.) Everything here is sign-free: stabilizer phases
//! are never tracked.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitVec, Gf2Matrix};
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("graph sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("witness violates the per-qubit constraint p_i*s_i + r_i*q_i = 1 at qubit {0}")]
    InvalidWitness(usize),
    #[error("tableau blocks must be square and of equal size")]
    BadTableauShape,
    #[error("tableau columns do not pairwise commute")]
    NonCommuting,
    #[error("tableau is rank-deficient")]
    RankDeficient,
}

// ---------------------------------------------------------------------------
// Witnesses
// ---------------------------------------------------------------------------

/// Per-qubit diagonal quadruples (p, q, r, s) certifying LC-equivalence.
#[derive(Clone, PartialEq, Eq)]
pub struct SymplecticWitness {
    p: BitVec,
    q: BitVec,
    r: BitVec,
    s: BitVec,
}

impl SymplecticWitness {
    /// Validates the symplectic constraint `p_i s_i + r_i q_i = 1` per qubit.
    pub fn new(p: BitVec, q: BitVec, r: BitVec, s: BitVec) -> Result<Self, SymplecticError> {
        let n = p.len();
        assert!(q.len() == n && r.len() == n && s.len() == n, "witness vector lengths differ");
        let w = SymplecticWitness { p, q, r, s };
        match w.first_constraint_violation() {
            Some(i) => Err(SymplecticError::InvalidWitness(i)),
            None => Ok(w),
        }
    }

    /// The identity map: p = s = 1, q = r = 0. It solves the linear system
    /// for any graph against itself.
    pub fn identity(n: usize) -> Self {
        let mut p = BitVec::zeros(n);
        let mut s = BitVec::zeros(n);
        for i in 0..n {
            p.set(i, true);
            s.set(i, true);
        }
        SymplecticWitness { p, q: BitVec::zeros(n), r: BitVec::zeros(n), s }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn bits(&self, i: usize) -> (bool, bool, bool, bool) {
        (self.p.get(i), self.q.get(i), self.r.get(i), self.s.get(i))
    }

    fn first_constraint_violation(&self) -> Option<usize> {
        (0..self.n()).find(|&i| {
            let (p, q, r, s) = self.bits(i);
            !((p & s) ^ (r & q))
        })
    }

    /// Splits a length-4n solution vector (p | q | r | s) of the linear
    /// system; returns None when the symplectic constraint fails somewhere.
    pub fn from_solution_vector(v: &BitVec, n: usize) -> Option<Self> {
        assert_eq!(v.len(), 4 * n, "solution vector must have length 4n");
        let part = |off: usize| {
            let mut out = BitVec::zeros(n);
            for i in 0..n {
                if v.get(off + i) {
                    out.set(i, true);
                }
            }
            out
        };
        SymplecticWitness::new(part(0), part(n), part(2 * n), part(3 * n)).ok()
    }

    /// Residual check of the linear system against a concrete pair of
    /// graphs: `P A_H + Q + A_G R A_H + A_G S = 0` over GF(2), where
    /// `(ga, gb) = (G, H)`.
    pub fn satisfies_linear_system(&self, ga: &Graph, gb: &Graph) -> bool {
        let n = self.n();
        if ga.n() != n || gb.n() != n {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                let mut acc = false;
                for a in ga.neighbors(i) {
                    // (A_G R A_H)[i,j] = sum_a A_G[i,a] r_a A_H[a,j]
                    acc ^= self.r.get(a) & gb.has_edge_or_false(a, j);
                }
                acc ^= self.p.get(i) & gb.has_edge_or_false(i, j);
                acc ^= ga.has_edge_or_false(i, j) & self.s.get(j);
                if i == j {
                    acc ^= self.q.get(i);
                }
                if acc {
                    return false;
                }
            }
        }
        true
    }

    /// The 2n x 2n block matrix `M = [[P, Q], [R, S]]` (diagonal blocks)
    /// acting on stacked `[x_block; z_block]` tableaux.
    pub fn symplectic_matrix(&self) -> Gf2Matrix {
        let n = self.n();
        Gf2Matrix::from_fn(2 * n, 2 * n, |i, j| {
            if i < n {
                (j < n && i == j && self.p.get(i)) || (j >= n && j - n == i && self.q.get(i))
            } else {
                let i = i - n;
                (j < n && i == j && self.r.get(i)) || (j >= n && j - n == i && self.s.get(i))
            }
        })
    }

    /// The per-qubit 2x2 block `[[p_i, q_i], [r_i, s_i]]`.
    pub fn local_block(&self, i: usize) -> LocalSymplectic {
        let (p, q, r, s) = self.bits(i);
        LocalSymplectic::from_entries(p, q, r, s)
    }
}

impl std::fmt::Debug for SymplecticWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Witness(p={:?}, q={:?}, r={:?}, s={:?})", self.p, self.q, self.r, self.s)
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    p: Vec<u8>,
    q: Vec<u8>,
    r: Vec<u8>,
    s: Vec<u8>,
}

impl Serialize for SymplecticWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let dump = |v: &BitVec| (0..v.len()).map(|i| u8::from(v.get(i))).collect();
        WitnessJson { p: dump(&self.p), q: dump(&self.q), r: dump(&self.r), s: dump(&self.s) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymplecticWitness {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = WitnessJson::deserialize(d)?;
        let n = raw.p.len();
        if raw.q.len() != n || raw.r.len() != n || raw.s.len() != n {
            return Err(serde::de::Error::custom("witness vectors must have equal length"));
        }
        let load = |v: &[u8]| BitVec::from_bools(&v.iter().map(|&b| b != 0).collect::<Vec<_>>());
        SymplecticWitness::new(load(&raw.p), load(&raw.q), load(&raw.r), load(&raw.s))
            .map_err(serde::de::Error::custom)
    }
}

impl Graph {
    #[inline]
    fn has_edge_or_false(&self, i: usize, j: usize) -> bool {
        i != j && self.has_edge(i, j)
    }
}

// ---------------------------------------------------------------------------
// The linear system
// ---------------------------------------------------------------------------

/// Coefficient matrix (n^2 rows, 4n columns) of the LC-equivalence system
/// `[A_G I] Omega M [A_H; I] = 0` in the unknowns
/// (p_1..p_n, q_1..q_n, r_1..r_n, s_1..s_n), with `(ga, gb) = (G, H)`.
/// Row (i, j) holds the GF(2) coefficients of entry (i, j) of
/// `P A_H + Q + A_G R A_H + A_G S`. A solution satisfying the per-qubit
/// constraint is a local Clifford layer taking the state of `gb` to the
/// state of `ga`.
pub fn bouchet_system(ga: &Graph, gb: &Graph) -> Result<Gf2Matrix, SymplecticError> {
    let n = ga.n();
    if gb.n() != n {
        return Err(SymplecticError::SizeMismatch(n, gb.n()));
    }
    let mut m = Gf2Matrix::zeros(n * n, 4 * n);
    for i in 0..n {
        for j in 0..n {
            let row = m.row_mut(i * n + j);
            if gb.has_edge_or_false(i, j) {
                row.flip(i); // p_i
            }
            if i == j {
                row.flip(n + i); // q_i
            }
            // r_a appears with coefficient A_G[i,a] * A_H[a,j]
            for a in ga.neighbors(i) {
                if gb.has_edge_or_false(a, j) {
                    row.flip(2 * n + a);
                }
            }
            if ga.has_edge_or_false(i, j) {
                row.flip(3 * n + j); // s_j
            }
        }
    }
    Ok(m)
}

/// Decides LC-equivalence of the graph states of `ga` and `gb`, returning a
/// witness when they are equivalent.
///
/// A null-space basis of the linear system is computed first; each basis
/// vector and each pairwise sum is tested against the per-qubit constraint
/// (the cheap early exits). Pairwise sums over an arbitrary basis are not
/// exhaustive, though: already for K3 against itself the only valid
/// solution is a sum of four basis vectors. So when the quick pass finds
/// nothing, the whole solution span is searched by a depth-first walk over
/// a block-echelon basis, pruning as soon as a finalised qubit block
/// violates the constraint. The echelon order makes blocks before the
/// current vector's leading block final, so dead prefixes are cut early
/// and structured cases (empty graphs, high-symmetry graphs) resolve in
/// near-linear time. Deterministic throughout, so witnesses are stable.
pub fn lc_equivalent(ga: &Graph, gb: &Graph) -> Result<Option<SymplecticWitness>, SymplecticError> {
    let n = ga.n();
    if gb.n() != n {
        return Err(SymplecticError::SizeMismatch(n, gb.n()));
    }
    if n == 0 {
        return Ok(Some(SymplecticWitness::identity(0)));
    }
    let basis = bouchet_system(ga, gb)?.null_space();
    for u in &basis {
        if let Some(w) = SymplecticWitness::from_solution_vector(u, n) {
            return Ok(Some(w));
        }
    }
    for (i, u) in basis.iter().enumerate() {
        for v in &basis[i + 1..] {
            let mut sum = u.clone();
            sum.xor_assign(v);
            if let Some(w) = SymplecticWitness::from_solution_vector(&sum, n) {
                return Ok(Some(w));
            }
        }
    }
    Ok(span_search(&basis, n).map(|v| {
        SymplecticWitness::from_solution_vector(&v, n).expect("search only returns valid vectors")
    }))
}

/// Column order interleaving the unknowns per qubit: (p_i, q_i, r_i, s_i).
#[inline]
fn reorder_col(c: usize, n: usize) -> usize {
    let (block, slot) = (c / 4, c % 4);
    slot * n + block
}

#[inline]
fn block_valid(v: &BitVec, block: usize) -> bool {
    // columns are in qubit-major order here
    let p = v.get(4 * block);
    let q = v.get(4 * block + 1);
    let r = v.get(4 * block + 2);
    let s = v.get(4 * block + 3);
    (p & s) ^ (r & q)
}

/// Complete search for a per-qubit-valid vector in the span of `basis`
/// (vectors over the original (p|q|r|s) column layout). Returns the vector
/// in the original layout.
fn span_search(basis: &[BitVec], n: usize) -> Option<BitVec> {
    if basis.is_empty() {
        return None;
    }
    // re-eliminate over qubit-major columns to get a block-echelon basis
    let reordered: Vec<BitVec> = basis
        .iter()
        .map(|v| {
            let mut row = BitVec::zeros(4 * n);
            for c in 0..4 * n {
                if v.get(reorder_col(c, n)) {
                    row.set(c, true);
                }
            }
            row
        })
        .collect();
    let mut m = Gf2Matrix::from_rows(reordered);
    m.rref_in_place();
    let rows: Vec<&BitVec> = (0..m.nrows()).map(|i| m.row(i)).filter(|r| r.any()).collect();
    let leads: Vec<usize> = rows.iter().map(|r| r.first_one().expect("nonzero row")).collect();

    fn dfs(
        rows: &[&BitVec],
        leads: &[usize],
        n: usize,
        k: usize,
        acc: &mut BitVec,
        checked: &mut usize,
    ) -> bool {
        let limit = if k == rows.len() { n } else { leads[k] / 4 };
        // blocks below the next leading block are final now
        while *checked < limit {
            if !block_valid(acc, *checked) {
                return false;
            }
            *checked += 1;
        }
        if k == rows.len() {
            return true;
        }
        let saved = *checked;
        if dfs(rows, leads, n, k + 1, acc, checked) {
            return true;
        }
        *checked = saved;
        acc.xor_assign(rows[k]);
        if dfs(rows, leads, n, k + 1, acc, checked) {
            return true;
        }
        acc.xor_assign(rows[k]);
        *checked = saved;
        false
    }

    let mut acc = BitVec::zeros(4 * n);
    let mut checked = 0usize;
    if !dfs(&rows, &leads, n, 0, &mut acc, &mut checked) {
        return None;
    }
    // map back to the (p | q | r | s) layout
    let mut out = BitVec::zeros(4 * n);
    for c in 0..4 * n {
        if acc.get(c) {
            out.set(reorder_col(c, n), true);
        }
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Tableaux
// ---------------------------------------------------------------------------

/// Stabilizer generators as columns of two stacked n x n binary blocks.
/// The graph state of `g` has tableau `[A_g; I]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabilizerTableau {
    x_block: Gf2Matrix,
    z_block: Gf2Matrix,
}

impl StabilizerTableau {
    /// Validates commutation (`X^T Z + Z^T X = 0`) and full column rank.
    pub fn new(x_block: Gf2Matrix, z_block: Gf2Matrix) -> Result<Self, SymplecticError> {
        let n = x_block.ncols();
        if x_block.nrows() != x_block.ncols()
            || z_block.nrows() != n
            || z_block.ncols() != n
        {
            return Err(SymplecticError::BadTableauShape);
        }
        let t = StabilizerTableau { x_block, z_block };
        if !t.omega_product(&t).is_zero() {
            return Err(SymplecticError::NonCommuting);
        }
        if t.x_block.vstack(&t.z_block).rank() != n {
            return Err(SymplecticError::RankDeficient);
        }
        Ok(t)
    }

    /// The canonical tableau `[A_g; I]` of a graph state.
    pub fn graph(g: &Graph) -> Self {
        StabilizerTableau { x_block: g.adjacency_matrix(), z_block: Gf2Matrix::identity(g.n()) }
    }

    pub fn n(&self) -> usize {
        self.x_block.ncols()
    }

    pub fn x_block(&self) -> &Gf2Matrix {
        &self.x_block
    }

    pub fn z_block(&self) -> &Gf2Matrix {
        &self.z_block
    }

    /// `X_1^T Z_2 + Z_1^T X_2`: entry (j, k) is the symplectic product of
    /// generator j of `self` with generator k of `other`.
    fn omega_product(&self, other: &StabilizerTableau) -> Gf2Matrix {
        let a = self.x_block.transpose().mul(&other.z_block);
        let b = self.z_block.transpose().mul(&other.x_block);
        a.add(&b)
    }

    /// Applies one local symplectic per qubit (row-wise 2x2 action).
    pub fn apply_locals(&self, gates: &[LocalSymplectic]) -> StabilizerTableau {
        assert_eq!(gates.len(), self.n(), "one gate per qubit required");
        let mut x = self.x_block.clone();
        let mut z = self.z_block.clone();
        for (i, gate) in gates.iter().enumerate() {
            let (a, b, c, d) = gate.entries();
            let xi = self.x_block.row(i).clone();
            let zi = self.z_block.row(i).clone();
            let mut nx = BitVec::zeros(self.n());
            let mut nz = BitVec::zeros(self.n());
            if a {
                nx.xor_assign(&xi);
            }
            if b {
                nx.xor_assign(&zi);
            }
            if c {
                nz.xor_assign(&xi);
            }
            if d {
                nz.xor_assign(&zi);
            }
            *x.row_mut(i) = nx;
            *z.row_mut(i) = nz;
        }
        StabilizerTableau { x_block: x, z_block: z }
    }
}

/// Transforms the tableau of `g` by the witness blocks: the new tableau is
/// `M [A_g; I] = [P A + Q; R A + S]`, which stabilizes the LC-transformed
/// state. With a witness from `lc_equivalent(a, b)`, applying it to `b`
/// yields a tableau spanning the stabilizer group of `a`.
pub fn apply_witness(g: &Graph, w: &SymplecticWitness) -> StabilizerTableau {
    assert_eq!(g.n(), w.n(), "witness size must match the graph");
    let n = g.n();
    let mut x = Gf2Matrix::zeros(n, n);
    let mut z = Gf2Matrix::zeros(n, n);
    for i in 0..n {
        let (p, q, r, s) = w.bits(i);
        for j in g.neighbors(i) {
            if p {
                x.set(i, j, true);
            }
            if r {
                z.set(i, j, true);
            }
        }
        if q {
            x.set(i, i, true);
        }
        if s {
            z.set(i, i, true);
        }
    }
    let t = StabilizerTableau { x_block: x, z_block: z };
    debug_assert!(t.omega_product(&t).is_zero());
    t
}

/// Recovers the graph whose state the tableau stabilizes: when the z block
/// is invertible the candidate adjacency is `X Z^{-1}`; the result is a
/// graph exactly when that product has zero diagonal (symmetry follows from
/// commutation). Returns None for non-graph bases.
pub fn tableau_to_graph(t: &StabilizerTableau) -> Option<Graph> {
    let n = t.n();
    let zinv = t.z_block.inverse()?;
    let a = t.x_block.mul(&zinv);
    debug_assert!(a.is_symmetric(), "commuting full-rank tableau must give symmetric X Z^-1");
    if (0..n).any(|i| a.get(i, i)) {
        return None;
    }
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if a.get(i, j) {
                g.set_edge(i, j, true);
            }
        }
    }
    Some(g)
}

/// Whether two valid tableaux generate the same stabilizer group. Both
/// column spans are maximal isotropic, so they coincide exactly when every
/// generator of one commutes with every generator of the other.
pub fn same_stabilizer_state(t1: &StabilizerTableau, t2: &StabilizerTableau) -> bool {
    assert_eq!(t1.n(), t2.n(), "tableaux must have equal size");
    t1.omega_product(t2).is_zero()
}

// ---------------------------------------------------------------------------
// Single-qubit symplectic group
// ---------------------------------------------------------------------------

/// One of the six invertible 2x2 matrices over GF(2): the sign-free image of
/// a single-qubit Clifford. Acts on a qubit's (x, z) tableau rows as
/// `x' = a x + b z`, `z' = c x + d z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalSymplectic(u8); // bit 0: a, bit 1: b, bit 2: c, bit 3: d

impl LocalSymplectic {
    pub const IDENTITY: Self = LocalSymplectic(0b1001);
    pub const H: Self = LocalSymplectic(0b0110);
    pub const S: Self = LocalSymplectic(0b1011); // x' = x + z, z' = z
    pub const HSH: Self = LocalSymplectic(0b1101); // x' = x, z' = x + z

    pub fn from_entries(a: bool, b: bool, c: bool, d: bool) -> Self {
        let m = LocalSymplectic(u8::from(a) | u8::from(b) << 1 | u8::from(c) << 2 | u8::from(d) << 3);
        assert!(m.is_invertible(), "2x2 block is singular");
        m
    }

    pub fn entries(self) -> (bool, bool, bool, bool) {
        (self.0 & 1 != 0, self.0 >> 1 & 1 != 0, self.0 >> 2 & 1 != 0, self.0 >> 3 & 1 != 0)
    }

    fn is_invertible(self) -> bool {
        let (a, b, c, d) = self.entries();
        (a & d) ^ (b & c)
    }

    /// The composite "apply `self`, then `next`" (matrix product next * self).
    pub fn then(self, next: LocalSymplectic) -> LocalSymplectic {
        let (a1, b1, c1, d1) = self.entries();
        let (a2, b2, c2, d2) = next.entries();
        LocalSymplectic::from_entries(
            (a2 & a1) ^ (b2 & c1),
            (a2 & b1) ^ (b2 & d1),
            (c2 & a1) ^ (d2 & c1),
            (c2 & b1) ^ (d2 & d1),
        )
    }

    /// A canonical gate word for this element, written in application order
    /// (leftmost gate acts first).
    pub fn label(self) -> &'static str {
        match self.0 {
            0b1001 => "I",
            0b0110 => "H",
            0b1011 => "S",
            0b1101 => "HSH",
            0b0111 => "HS",
            0b1110 => "SH",
            _ => unreachable!("singular block"),
        }
    }

    pub fn all() -> [LocalSymplectic; 6] {
        [
            LocalSymplectic(0b1001),
            LocalSymplectic(0b0110),
            LocalSymplectic(0b1011),
            LocalSymplectic(0b1101),
            LocalSymplectic(0b0111),
            LocalSymplectic(0b1110),
        ]
    }
}

impl std::fmt::Debug for LocalSymplectic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}
