use crate::error::Result;
use crate::graph::VertexSet;
use crate::select::median_valuation;

/// Halves of a median split of a valuation.
#[derive(Debug, Clone, PartialEq)]
pub struct MedianSplit {
    pub a_prime: VertexSet,
    pub b_prime: VertexSet,
    pub median: f64,
}

/// Splits at the lower median with exact tie comparison.
pub fn median_split(y: &[f64]) -> Result<MedianSplit> {
    median_split_with_tol(y, 0.0)
}

/// Splits at the lower median `x_m`.
///
/// `A' = {v : y_v <= x_m}`. While `|A'| - |B'| > 1`, vertices tied with the
/// median move from `A'` to `B'` in ascending index order. A vertex is tied
/// when `|y_v - x_m| <= tie_tol * max|y|`; `tie_tol = 0` means exact equality.
pub fn median_split_with_tol(y: &[f64], tie_tol: f64) -> Result<MedianSplit> {
    let median = median_valuation(y)?;
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tied = |v: f64| (v - median).abs() <= tie_tol * scale;
    let mut in_a: Vec<bool> = y.iter().map(|&v| v <= median || tied(v)).collect();
    let mut a_len = in_a.iter().filter(|&&x| x).count();
    let n = y.len();
    for (v, &val) in y.iter().enumerate() {
        if 2 * a_len <= n + 1 {
            break;
        }
        if in_a[v] && tied(val) {
            in_a[v] = false;
            a_len -= 1;
        }
    }
    let a_prime = (0..n).filter(|&v| in_a[v]).collect();
    let b_prime = (0..n).filter(|&v| !in_a[v]).collect();
    Ok(MedianSplit { a_prime, b_prime, median })
}
