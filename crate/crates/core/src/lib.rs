//! Exactly checkable numerics for symmetry-protected adiabatic gates.
//!
//! The crate is split along the objects the gates are built from:
//!
//! - [`groups`]: finite groups as multiplication tables, their centers,
//!   derived subgroups, abelianizations and one-dimensional characters.
//! - [`projrep`]: projective representations, factor systems, the
//!   `φ_ω` nontriviality test and cohomology-class equivalence.
//! - [`gatechan`]: the twisted group-average channels `Γ_χ`, their unitary
//!   fixed points `W_χ` and the projective group law among them.
//! - [`mps`]: `(U_g, V_g)`-symmetric MPS tensors (AKLT, cluster) and the
//!   `A = Σ_χ W_χ ⊗ ⟨χ|` construction.
//! - [`chainsim`]: spin-1 chain Hamiltonians with a purified right edge,
//!   adiabatic schedules, and ground-space transport that extracts the
//!   logical gate.
//! - [`universality`]: π-rotation composition and the embedding gate sets.
//!
//! Everything here is `no_std` with `alloc`; file formats, the CLI and
//! reporting live in the companion `spaqt` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod chainsim;
pub mod eigen;
pub mod gatechan;
pub mod groups;
pub mod linalg;
pub mod mps;
pub mod projrep;
pub mod sparse;
pub mod spin;
pub mod universality;

pub use linalg::{CMat, CVec, C64};
