//! Lanczos tridiagonalization of a Laplacian on the complement of `e`.
//!
//! Every product `L x` is projected with [`deflate_ones`], so the Krylov
//! space stays orthogonal to the all-ones null vector and the smallest Ritz
//! value approximates `λ₂` instead of 0.

use crate::error::{Error, Result};
use crate::graph::Laplacian;

/// `v - (eᵀv / n) e`.
pub fn deflate_ones(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    deflate_in_place(&mut out);
    out
}

pub(crate) fn deflate_in_place(v: &mut [f64]) {
    if v.is_empty() {
        return;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

/// Start vector `x_i = (i + 1) - (n + 1) / 2`, which is exactly mean-zero.
pub fn initial_vector(n: usize) -> Vec<f64> {
    let c = (n as f64 + 1.0) / 2.0;
    (0..n).map(|i| (i + 1) as f64 - c).collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Outcome of [`lanczos_extend`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LanczosStatus {
    /// All requested steps were taken.
    Extended,
    /// An invariant subspace was reached; `T` is final.
    Breakdown,
}

/// A partial Lanczos run: `T_j` plus the basis `Q` and the pending next
/// direction.
#[derive(Debug, Clone)]
pub struct TridiagonalPair {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<Vec<f64>>,
    // q_{j+1} and the coupling β_j that produced it
    pending: Option<(f64, Vec<f64>)>,
    breakdown: bool,
    matvecs: usize,
}

/// Relative size of `β` below which the recurrence is treated as broken down.
const BREAKDOWN_TOL: f64 = 1e-10;

impl TridiagonalPair {
    /// Seeds a run from `x0`, which is deflated against `e` and normalized.
    pub fn start(x0: &[f64]) -> Result<Self> {
        let mut q = deflate_ones(x0);
        let nq = norm2(&q);
        if !(nq > 0.0) || !nq.is_finite() {
            return Err(Error::InvalidParameter(
                "start vector has no component orthogonal to e".into(),
            ));
        }
        q.iter_mut().for_each(|x| *x /= nq);
        Ok(Self {
            alpha: Vec::new(),
            beta: Vec::new(),
            basis: Vec::new(),
            pending: Some((0.0, q)),
            breakdown: false,
            matvecs: 0,
        })
    }

    /// Current dimension `j`.
    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn is_breakdown(&self) -> bool {
        self.breakdown
    }

    /// `β_j`, the coupling to the next basis vector, unless the run broke down.
    pub fn next_beta(&self) -> Option<f64> {
        self.pending.as_ref().map(|(b, _)| *b)
    }

    /// Matrix-vector products spent so far.
    pub fn matvecs(&self) -> usize {
        self.matvecs
    }

    /// Largest `|q_iᵀ q_k|`, `i != k`, over the stored basis.
    pub fn max_orthogonality_loss(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.basis.len() {
            for k in 0..i {
                worst = worst.max(dot(&self.basis[i], &self.basis[k]).abs());
            }
        }
        worst
    }
}

/// Advances the recurrence by up to `steps` steps.
///
/// Each step costs one product with `L`; previously computed columns are
/// never recomputed. Returns [`LanczosStatus::Breakdown`] when `β_j`
/// vanishes (relative to `2Δ`) or the basis spans the whole complement of
/// `e`.
pub fn lanczos_extend(l: &Laplacian, state: &mut TridiagonalPair, steps: usize) -> Result<LanczosStatus> {
    let n = l.n();
    let scale = (2 * l.max_degree()).max(1) as f64;
    for _ in 0..steps {
        let Some((beta_prev, q)) = state.pending.take() else {
            return Ok(LanczosStatus::Breakdown);
        };
        if q.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: q.len() });
        }
        let mut w = l.apply(&q);
        state.matvecs += 1;
        deflate_in_place(&mut w);
        let a = dot(&q, &w);
        for (wi, qi) in w.iter_mut().zip(&q) {
            *wi -= a * qi;
        }
        if let Some(prev) = state.basis.last() {
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= beta_prev * pi;
            }
            state.beta.push(beta_prev);
        }
        deflate_in_place(&mut w);
        state.alpha.push(a);
        state.basis.push(q);

        let b = norm2(&w);
        if b <= BREAKDOWN_TOL * scale || state.basis.len() + 1 >= n {
            state.breakdown = true;
            return Ok(LanczosStatus::Breakdown);
        }
        w.iter_mut().for_each(|x| *x /= b);
        state.pending = Some((b, w));
    }
    Ok(LanczosStatus::Extended)
}

/// `y = Q w`.
pub fn lift(basis: &[Vec<f64>], w: &[f64]) -> Result<Vec<f64>> {
    if basis.len() != w.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), found: w.len() });
    }
    let n = basis.first().map_or(0, |q| q.len());
    let mut y = vec![0.0; n];
    for (q, &c) in basis.iter().zip(w) {
        if q.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: q.len() });
        }
        for (yi, qi) in y.iter_mut().zip(q) {
            *yi += c * qi;
        }
    }
    Ok(y)
}
