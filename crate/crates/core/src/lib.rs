//! Edge minimisation of LC-equivalent graph states.
//!
//! A graph state can be rewritten by local Clifford gates into states whose
//! graphs differ by local complementations; sparser representatives are
//! cheaper to prepare. This crate provides:
//!
//! - [`graph`]: graphs as symmetric GF(2) bit matrices, local
//!   complementation, clustering metrics, random models, graph6 and JSON IO.
//! - [`symplectic`]: the binary-symplectic LC-equivalence test with witness
//!   extraction, and stabilizer tableaux.
//! - [`orbit`]: brute-force LC-orbit enumeration; the exact oracle for
//!   minimum edge representatives (MERs), shortest complementation
//!   sequences, and vertex minors.
//! - [`sa`]: simulated-annealing edge minimisation guided by the local
//!   clustering coefficient.
//! - [`ilp`]: the exact integer-linear-program formulation, a built-in
//!   branch-and-bound solver, LP-format export, and weighted objectives
//!   covering the vertex-minor reduction.
//! - [`grgs`]: generalised repeater graph states, the Commute-LC gate
//!   bookkeeping, and a simplified fusion resource estimator.

pub mod gf2;
pub mod generate;
pub mod graph;
pub mod graph6;
pub mod grgs;
pub mod ilp;
pub mod orbit;
pub mod sa;
pub mod symplectic;

pub use graph::{Graph, WeightMatrix};
pub use symplectic::{lc_equivalent, StabilizerTableau, SymplecticWitness};
