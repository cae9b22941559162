//! Algebraic connectivity and Fiedler vectors of graph Laplacians.

mod dense;
mod fiedler;
pub mod lanczos;
pub mod tridiag;

pub use dense::{dense_spectrum, DENSE_LIMIT};
pub use fiedler::{fiedler, EigenOptions, FiedlerResult, SEED_ENV};
pub use lanczos::{deflate_ones, initial_vector, lanczos_extend, lift, LanczosStatus, TridiagonalPair};
pub use tridiag::{inverse_iteration, tridiag_eigenvalues};
