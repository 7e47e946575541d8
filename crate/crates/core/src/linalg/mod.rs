//! Exact and floating dense linear algebra used throughout the crate.

pub mod eigen;
pub mod kernel;
pub mod matrix;
pub mod poly;
pub mod scalar;

pub use eigen::{eigs_general, eigs_symmetric, inverse_iteration, SymmetricEigen, SYMMETRY_TOL};
pub use kernel::{null_space, rank, rank_of_vectors};
pub use matrix::Matrix;
pub use poly::IntPolynomial;
pub use scalar::{exact, exact_int, format_exact, parse_exact, to_f64, ExactScalar, Ring};
