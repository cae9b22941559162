//! Spectral nested dissection of sparse graphs.
//!
//! The pipeline: build a graph [`Laplacian`], compute its Fiedler vector with
//! an adaptively grown Lanczos run ([`eigen::fiedler`]), split the vertices
//! at the median valuation, turn the crossing edges into a vertex separator
//! by covering them ([`partition`]), and recurse ([`dissect`]). The
//! resulting ordering confines elimination fill to diagonal blocks and the
//! separator rows, which [`solve`] demonstrates on block systems.

pub mod dissect;
pub mod eigen;
pub mod error;
pub mod fixtures;
pub mod generators;
pub mod graph;
pub mod io;
pub mod partition;
pub mod select;
pub mod solve;

pub use error::{Error, ErrorClass, Result};
pub use graph::{Laplacian, SparseSymMatrix, VertexSet};
