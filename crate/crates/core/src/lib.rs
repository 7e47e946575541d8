//! Metric operators for the one-parameter family of non-Hermitian
//! tridiagonal lattice Hamiltonians `H⁽ᴺ⁾(λ)`.
//!
//! The crate builds every real symmetric `Θ` with `Θ·H = Hᵀ·Θ` in two
//! independent ways, an exact null-space solve ([`oracle`]) and a recurrent
//! closed-form construction from sparse incidence matrices ([`closedform`]),
//! and provides the tools to compare them, decide positivity
//! ([`analysis`]) and study the large-N lattice limit ([`continuum`]).

pub mod analysis;
pub mod closedform;
pub mod continuum;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod oracle;

pub use error::{Error, Result};
