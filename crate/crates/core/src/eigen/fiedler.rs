use crate::eigen::lanczos::{
    deflate_in_place, dot, initial_vector, lanczos_extend, lift, norm2, LanczosStatus, TridiagonalPair,
};
use crate::eigen::tridiag::{inverse_iteration, rayleigh_residual, tridiag_eigenvalues};
use crate::error::{Error, Result};
use crate::graph::Laplacian;

/// Environment variable that overrides [`EigenOptions::seed`] in the CLI.
pub const SEED_ENV: &str = "FIEDLER_CUT_SEED";

const RITZ_TOL: f64 = 1e-4;

/// Tolerances and limits for [`fiedler`].
#[derive(Debug, Clone, PartialEq)]
pub struct EigenOptions {
    /// Stop growing `T_j` once the relative change of its smallest Ritz
    /// value falls to this level.
    pub l2tol: f64,
    /// Accept `(λ₂, y)` when `‖Ly - λ₂y‖ < rtol ‖y‖`.
    pub rtol: f64,
    /// Upper bound on `j * n`, the size of the stored basis.
    pub budget: usize,
    /// Once `l2tol` is met, keep extending until the Ritz residual estimate
    /// `β_j |e_jᵀ w|` of the unit Ritz vector falls to this level, or the
    /// budget is reached. `f64::INFINITY` stops on `l2tol` alone.
    pub ritz_tol: f64,
    pub max_restarts: usize,
    /// Seed of the inverse-iteration start vector.
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { l2tol: 1e-4, rtol: 1e-1, budget: 250_000, ritz_tol: RITZ_TOL, max_restarts: 8, seed: 0x5eed }
    }
}

impl EigenOptions {
    fn validate(&self) -> Result<()> {
        if !(self.l2tol > 0.0) || !(self.rtol > 0.0) || !(self.ritz_tol > 0.0) || self.budget == 0 || self.max_restarts == 0 {
            return Err(Error::InvalidParameter("eigen options must all be positive".into()));
        }
        Ok(())
    }
}

/// Converged algebraic connectivity and its eigenvector.
#[derive(Debug, Clone)]
pub struct FiedlerResult {
    pub lambda2: f64,
    pub y: Vec<f64>,
    /// Lanczos dimension of the accepted run.
    pub dim_used: usize,
    /// `‖Ly - λ₂y‖₂`.
    pub residual: f64,
    pub restarts: usize,
    /// Products with `L` over all runs, residual checks included.
    pub matvecs: usize,
    /// Ritz values of the accepted `T_j`, ascending.
    pub ritz_values: Vec<f64>,
    /// Worst pairwise inner product between stored basis vectors.
    pub orthogonality_loss: f64,
}

/// Computes `(λ₂, y)` with an adaptively grown Lanczos run.
///
/// `T_j` grows one step at a time until its smallest Ritz value settles
/// (relative change at most `l2tol`, `j >= 2`). The Ritz vector comes from
/// inverse iteration on `T_j` lifted through `Q`. If the residual test fails
/// the run restarts from the lifted vector.
pub fn fiedler(l: &Laplacian, opts: &EigenOptions) -> Result<FiedlerResult> {
    opts.validate()?;
    let n = l.n();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 vertices, got {n}")));
    }
    let components = l.components().len();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }

    let delta = l.max_degree() as f64;
    let (_, upper) = l.gershgorin_interval();
    let mut x0 = initial_vector(n);
    let mut restarts = 0;
    let mut matvecs = 0;
    loop {
        let mut state = TridiagonalPair::start(&x0)?;
        let mut lambda_old;
        let mut lambda_new = f64::INFINITY;
        let mut ritz = Vec::new();
        let mut settled = false;
        loop {
            let work = (state.dim() + 1) * n;
            if work > opts.budget {
                if settled {
                    break;
                }
                return Err(Error::BudgetExceeded { work, budget: opts.budget });
            }
            let status = lanczos_extend(l, &mut state, 1)?;
            ritz = tridiag_eigenvalues(state.alpha(), state.beta());
            lambda_old = lambda_new;
            lambda_new = ritz[0];
            if status == LanczosStatus::Breakdown {
                break;
            }
            settled |= state.dim() >= 2 && ((lambda_old - lambda_new) / lambda_new).abs() <= opts.l2tol;
            if settled && ritz_residual_estimate(&state, lambda_new, opts.seed) <= opts.ritz_tol {
                break;
            }
        }
        matvecs += state.matvecs();

        if lambda_new < -1e-8 {
            return Err(Error::NegativeEigenvalue(lambda_new));
        }
        if lambda_new <= 1e-8 * delta {
            return Err(Error::Disconnected { components: 2 });
        }

        let w = inverse_iteration(state.alpha(), state.beta(), lambda_new, opts.seed)?;
        let (lambda2, _) = rayleigh_residual(state.alpha(), state.beta(), &w);
        let mut y = lift(state.basis(), &w)?;
        deflate_in_place(&mut y);

        let ly = l.apply(&y);
        matvecs += 1;
        let r: Vec<f64> = ly.iter().zip(&y).map(|(a, b)| a - lambda2 * b).collect();
        let residual = norm2(&r);
        let ynorm = norm2(&y);
        if residual < opts.rtol * ynorm {
            debug_assert!(dot(&y, &vec![1.0; n]).abs() <= 1e-6 * (n as f64).sqrt() * ynorm);
            if lambda2 > upper + 1e-6 {
                return Err(Error::NonConvergence { restarts, residual });
            }
            return Ok(FiedlerResult {
                lambda2,
                y,
                dim_used: state.dim(),
                residual,
                restarts,
                matvecs,
                ritz_values: ritz,
                orthogonality_loss: state.max_orthogonality_loss(),
            });
        }
        restarts += 1;
        if restarts > opts.max_restarts {
            return Err(Error::NonConvergence { restarts: restarts - 1, residual });
        }
        x0 = y;
    }
}

fn ritz_residual_estimate(state: &TridiagonalPair, theta: f64, seed: u64) -> f64 {
    if !theta.is_finite() {
        return f64::INFINITY;
    }
    let beta = state.next_beta().unwrap_or(0.0);
    match inverse_iteration(state.alpha(), state.beta(), theta, seed) {
        Ok(w) => beta * w.last().map_or(0.0, |x| x.abs()),
        Err(_) => f64::INFINITY,
    }
}
