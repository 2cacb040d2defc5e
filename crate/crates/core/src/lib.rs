//! Dense symmetric and generalized eigensolvers with the optimization and
//! dimensionality-reduction problems that reduce to them.
//!
//! - [`matrix`]: dense matrices, symmetric matrices, vectors and the shared
//!   predicates (symmetry, positive semi-definiteness).
//! - [`eigen`]: cyclic Jacobi eigen-decomposition, spectral reconstruction,
//!   and the characteristic-polynomial route for small matrices.
//! - [`gen_eigen`]: the pencil `A Φ = B Φ Λ` by reduction to `B⁻¹A` and by
//!   whitening `B`.
//! - [`rayleigh`]: Rayleigh quotients and the trace/reconstruction
//!   objectives, solved by reduction to eigenproblems.
//! - [`ml`]: PCA, Fisher discriminant analysis and kernel supervised PCA.
//! - [`cli`]: CSV input, result documents and the `genspectra` command.

pub mod cli;
pub mod eigen;
pub mod error;
pub mod gen_eigen;
pub mod matrix;
pub mod ml;
pub mod poly;
pub mod rayleigh;

pub use eigen::{eig_sym, spectral_reconstruct, EigenDecomposition, SortOrder};
pub use error::{Error, Result};
pub use gen_eigen::{
    pencil_residual, solve_quick_dirty, solve_rigorous, GenEigenSolution, Method, Pencil,
};
pub use matrix::{Matrix, SymMatrix, Vector};
