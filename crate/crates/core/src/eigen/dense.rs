use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::SparseSymMatrix;

/// Largest order accepted by [`dense_spectrum`].
pub const DENSE_LIMIT: usize = 512;

/// Full spectrum of a small symmetric matrix, ascending.
pub fn dense_spectrum(m: &SparseSymMatrix) -> Result<Vec<f64>> {
    let n = m.n();
    if n > DENSE_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "dense spectrum limited to n <= {DENSE_LIMIT}, got {n}"
        )));
    }
    let mut dense = DMatrix::zeros(n, n);
    for i in 0..n {
        for (j, v) in m.row(i) {
            dense[(i, j)] = v;
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(dense).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    Ok(ev)
}
