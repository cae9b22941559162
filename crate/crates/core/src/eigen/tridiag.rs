//! Symmetric tridiagonal eigenvalues and inverse iteration.
//!
//! A tridiagonal matrix is given by its diagonal `alpha` (length `j`) and
//! off-diagonal `beta` (length `j - 1`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const MAX_QL_SWEEPS: usize = 64;
const INVERSE_ITERATIONS: usize = 5;
const INVERSE_RESIDUAL_TOL: f64 = 1e-6;

/// All eigenvalues of the symmetric tridiagonal matrix, ascending.
///
/// Implicitly shifted QL with Wilkinson-type shifts, deflating from the top.
pub fn tridiag_eigenvalues(alpha: &[f64], beta: &[f64]) -> Vec<f64> {
    let n = alpha.len();
    assert_eq!(beta.len(), n.saturating_sub(1), "off-diagonal length must be j - 1");
    let mut d = alpha.to_vec();
    let mut e = beta.to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                // Accept the current diagonal; never observed for finite input.
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    d
}

/// `T x` for a tridiagonal `T`.
pub fn tridiag_mul(alpha: &[f64], beta: &[f64], x: &[f64]) -> Vec<f64> {
    let n = alpha.len();
    (0..n)
        .map(|i| {
            let mut v = alpha[i] * x[i];
            if i > 0 {
                v += beta[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += beta[i] * x[i + 1];
            }
            v
        })
        .collect()
}

/// LU factors of a tridiagonal matrix with partial pivoting; the upper factor
/// has two super-diagonals after row interchanges.
struct TridiagLu {
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    dl: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    /// Factors `diag/off`; pivots smaller than `tiny` are replaced by `tiny`.
    fn factor(diag: &[f64], off: &[f64], tiny: f64) -> Self {
        let n = diag.len();
        let mut d = diag.to_vec();
        let mut du = off.to_vec();
        let mut dl = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let fix = |p: f64| if p.abs() < tiny { tiny.copysign(if p == 0.0 { 1.0 } else { p }) } else { p };
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                d[i] = fix(d[i]);
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if n > 0 {
            d[n - 1] = fix(d[n - 1]);
        }
        Self { d, du, du2, dl, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        for i in (0..n).rev() {
            let mut v = b[i];
            if i + 1 < n {
                v -= self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                v -= self.du2[i] * b[i + 2];
            }
            b[i] = v / self.d[i];
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `|| T w - (w^T T w) w ||` for unit `w`.
pub fn rayleigh_residual(alpha: &[f64], beta: &[f64], w: &[f64]) -> (f64, f64) {
    let tw = tridiag_mul(alpha, beta, w);
    let rq: f64 = tw.iter().zip(w).map(|(a, b)| a * b).sum();
    let r: Vec<f64> = tw.iter().zip(w).map(|(a, b)| a - rq * b).collect();
    (rq, norm(&r))
}

/// Unit eigenvector of `T` for the eigenvalue nearest `shift`.
///
/// Solves `(T - shift I) z = w` from a seeded random start, normalizing after
/// each solve, until the Rayleigh residual drops below `1e-6` (at most five
/// solves).
pub fn inverse_iteration(alpha: &[f64], beta: &[f64], shift: f64, seed: u64) -> Result<Vec<f64>> {
    let n = alpha.len();
    if n == 0 || beta.len() + 1 != n {
        return Err(Error::DimensionMismatch { expected: n.saturating_sub(1), found: beta.len() });
    }
    let scale = alpha
        .iter()
        .map(|a| a.abs())
        .chain(beta.iter().map(|b| b.abs()))
        .fold(shift.abs(), f64::max)
        .max(1.0);
    let shifted: Vec<f64> = alpha.iter().map(|a| a - shift).collect();
    let lu = TridiagLu::factor(&shifted, beta, f64::EPSILON * scale);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let nw = norm(&w);
    w.iter_mut().for_each(|x| *x /= nw);

    let mut residual = f64::INFINITY;
    for _ in 0..INVERSE_ITERATIONS {
        lu.solve(&mut w);
        let nz = norm(&w);
        if !nz.is_finite() || nz == 0.0 {
            return Err(Error::EigenvectorFailure(f64::NAN));
        }
        w.iter_mut().for_each(|x| *x /= nz);
        residual = rayleigh_residual(alpha, beta, &w).1;
        if residual <= INVERSE_RESIDUAL_TOL {
            return Ok(w);
        }
    }
    Err(Error::EigenvectorFailure(residual))
}
