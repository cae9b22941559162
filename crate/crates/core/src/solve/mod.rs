//! One-level block solves of `C x = f` ordered by a vertex separator.
//!
//! With the unknowns ordered `A, B, S` the system reads
//!
//! ```text
//! [ H_A   0    M_Aᵀ ] [x_A]   [f_A]
//! [ 0     H_B  M_Bᵀ ] [x_B] = [f_B]
//! [ M_A   M_B  H_S  ] [x_S]   [f_S]
//! ```
//!
//! and the `A` and `B` blocks decouple once `x_S` is known.

mod dense;

pub use dense::{Dense, Ldlt, Lu};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{SparseSymMatrix, VertexSet};
use crate::partition::Partition;

/// Blocks of `C` and `f` in `A, B, S` order.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSystem {
    pub a: VertexSet,
    pub b: VertexSet,
    pub s: VertexSet,
    pub h_a: Dense,
    pub h_b: Dense,
    pub h_s: Dense,
    /// `|S| x |A|`.
    pub m_a: Dense,
    /// `|S| x |B|`.
    pub m_b: Dense,
    pub f_a: Vec<f64>,
    pub f_b: Vec<f64>,
    pub f_s: Vec<f64>,
}

fn position_map(n: usize, sets: [&VertexSet; 3]) -> Result<Vec<(u8, usize)>> {
    let mut pos = vec![(u8::MAX, 0); n];
    for (tag, set) in sets.into_iter().enumerate() {
        set.check_bounds(n)?;
        for (k, v) in set.iter().enumerate() {
            if pos[v].0 != u8::MAX {
                return Err(Error::InvalidParameter(format!("vertex {v} is in two blocks")));
            }
            pos[v] = (tag as u8, k);
        }
    }
    if let Some(v) = pos.iter().position(|p| p.0 == u8::MAX) {
        return Err(Error::InvalidParameter(format!("vertex {v} is in no block")));
    }
    Ok(pos)
}

/// Extracts the blocks of `c` and `f` for the split `a, b, s`.
pub fn block_split(c: &SparseSymMatrix, a: &VertexSet, b: &VertexSet, s: &VertexSet, f: &[f64]) -> Result<BlockSystem> {
    let n = c.n();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.len() });
    }
    if s.is_empty() {
        return Err(Error::EmptySeparator);
    }
    let pos = position_map(n, [a, b, s])?;
    let (na, nb, ns) = (a.len(), b.len(), s.len());
    let mut sys = BlockSystem {
        a: a.clone(),
        b: b.clone(),
        s: s.clone(),
        h_a: Dense::zeros(na, na),
        h_b: Dense::zeros(nb, nb),
        h_s: Dense::zeros(ns, ns),
        m_a: Dense::zeros(ns, na),
        m_b: Dense::zeros(ns, nb),
        f_a: a.iter().map(|v| f[v]).collect(),
        f_b: b.iter().map(|v| f[v]).collect(),
        f_s: s.iter().map(|v| f[v]).collect(),
    };
    for i in 0..n {
        let (ti, ki) = pos[i];
        for (j, v) in c.row(i) {
            let (tj, kj) = pos[j];
            match (ti, tj) {
                (0, 0) => sys.h_a.set(ki, kj, v),
                (1, 1) => sys.h_b.set(ki, kj, v),
                (2, 2) => sys.h_s.set(ki, kj, v),
                (2, 0) => sys.m_a.set(ki, kj, v),
                (2, 1) => sys.m_b.set(ki, kj, v),
                (0, 1) | (1, 0) if v != 0.0 => {
                    let (x, y) = if ti == 0 { (i, j) } else { (j, i) };
                    return Err(Error::NotASeparator { a: x, b: y });
                }
                _ => {}
            }
        }
    }
    Ok(sys)
}

impl BlockSystem {
    pub fn from_partition(c: &SparseSymMatrix, p: &Partition, f: &[f64]) -> Result<Self> {
        block_split(c, &p.a, &p.b, &p.s, f)
    }

    /// Unknowns in block order: `A`, then `B`, then `S`.
    pub fn order(&self) -> Vec<usize> {
        self.a.iter().chain(self.b.iter()).chain(self.s.iter()).collect()
    }

    pub fn n(&self) -> usize {
        self.a.len() + self.b.len() + self.s.len()
    }

    /// The permuted matrix `P C Pᵀ` reassembled from its blocks.
    pub fn assemble(&self) -> Dense {
        let (na, nb) = (self.a.len(), self.b.len());
        let ns = self.s.len();
        let mut out = Dense::zeros(self.n(), self.n());
        let put = |out: &mut Dense, block: &Dense, r0: usize, c0: usize| {
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    out.set(r0 + i, c0 + j, block.get(i, j));
                }
            }
        };
        put(&mut out, &self.h_a, 0, 0);
        put(&mut out, &self.h_b, na, na);
        put(&mut out, &self.h_s, na + nb, na + nb);
        put(&mut out, &self.m_a, na + nb, 0);
        put(&mut out, &self.m_b, na + nb, na);
        put(&mut out, &self.m_a.transpose(), 0, na + nb);
        put(&mut out, &self.m_b.transpose(), na, na + nb);
        debug_assert_eq!(out.rows(), na + nb + ns);
        out
    }

    /// Scatters block solutions back to original indices.
    pub fn scatter(&self, x_a: &[f64], x_b: &[f64], x_s: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.n()];
        for (set, part) in [(&self.a, x_a), (&self.b, x_b), (&self.s, x_s)] {
            for (v, &xv) in set.iter().zip(part) {
                x[v] = xv;
            }
        }
        x
    }
}

/// `x_S = (H_S - M_A H_A⁻¹ M_Aᵀ - M_B H_B⁻¹ M_Bᵀ)⁻¹ (f_S - M_A H_A⁻¹ f_A - M_B H_B⁻¹ f_B)`,
/// then `x_A = H_A⁻¹ (f_A - M_Aᵀ x_S)` and likewise for `B`.
pub fn schur_solve(sys: &BlockSystem) -> Result<Vec<f64>> {
    // per side: (H⁻¹ Mᵀ, H⁻¹ f)
    let side = |h: &Dense, m: &Dense, f: &[f64], name: &'static str| -> Result<(Dense, Vec<f64>)> {
        if h.rows() == 0 {
            return Ok((Dense::zeros(0, m.rows()), Vec::new()));
        }
        let lu = Lu::factor(h).ok_or(Error::SingularBlock(name))?;
        Ok((lu.solve_matrix(&m.transpose()), lu.solve(f)))
    };
    let (ra, rb) = rayon::join(
        || side(&sys.h_a, &sys.m_a, &sys.f_a, "H_A"),
        || side(&sys.h_b, &sys.m_b, &sys.f_b, "H_B"),
    );
    let ((xa_m, ua), (xb_m, ub)) = (ra?, rb?);

    let ns = sys.s.len();
    let ma_x = sys.m_a.mul(&xa_m);
    let mb_x = sys.m_b.mul(&xb_m);
    let mut schur = sys.h_s.clone();
    for i in 0..ns {
        for j in 0..ns {
            schur.set(i, j, schur.get(i, j) - ma_x.get(i, j) - mb_x.get(i, j));
        }
    }
    let (ma_u, mb_u) = (sys.m_a.mul_vec(&ua), sys.m_b.mul_vec(&ub));
    let rhs: Vec<f64> = (0..ns).map(|i| sys.f_s[i] - ma_u[i] - mb_u[i]).collect();
    let x_s = Lu::factor(&schur).ok_or(Error::SingularBlock("Schur complement"))?.solve(&rhs);

    let back = |x_m: &Dense, u: &[f64]| -> Vec<f64> {
        let t = x_m.mul_vec(&x_s);
        u.iter().zip(&t).map(|(a, b)| a - b).collect()
    };
    Ok(sys.scatter(&back(&xa_m, &ua), &back(&xb_m, &ub), &x_s))
}

/// Factors of one decoupled side: `H = L D Lᵀ` and `W = L⁻¹ Mᵀ`, so that
/// `N = Wᵀ D⁻¹` is the `S`-row block of the full factor.
struct SideFactor {
    ldlt: Option<Ldlt>,
    w: Dense,
}

impl SideFactor {
    fn new(h: &Dense, m: &Dense, name: &'static str) -> Result<Self> {
        if h.rows() == 0 {
            return Ok(Self { ldlt: None, w: Dense::zeros(0, m.rows()) });
        }
        let ldlt = Ldlt::factor(h).map_err(|pivot| Error::FactorizationFailure { block: name, pivot })?;
        let mut w = Dense::zeros(h.rows(), m.rows());
        for s in 0..m.rows() {
            for (k, v) in ldlt.forward(m.row(s)).into_iter().enumerate() {
                w.set(k, s, v);
            }
        }
        Ok(Self { ldlt: Some(ldlt), w })
    }

    fn d(&self) -> &[f64] {
        self.ldlt.as_ref().map_or(&[], |f| f.d())
    }

    /// `N y = Wᵀ D⁻¹ y`.
    fn n_mul(&self, y: &[f64]) -> Vec<f64> {
        let scaled: Vec<f64> = y.iter().zip(self.d()).map(|(a, d)| a / d).collect();
        self.w.tr_mul_vec(&scaled)
    }

    /// `Nᵀ x = D⁻¹ W x`.
    fn nt_mul(&self, x: &[f64]) -> Vec<f64> {
        self.w.mul_vec(x).iter().zip(self.d()).map(|(a, d)| a / d).collect()
    }

    /// `N D Nᵀ = Wᵀ D⁻¹ W`.
    fn schur_term(&self, ns: usize) -> Dense {
        let mut out = Dense::zeros(ns, ns);
        for (k, &d) in self.d().iter().enumerate() {
            let wk = self.w.row(k);
            for i in 0..ns {
                for j in 0..ns {
                    out.set(i, j, out.get(i, j) + wk[i] * wk[j] / d);
                }
            }
        }
        out
    }

    fn forward(&self, f: &[f64]) -> Vec<f64> {
        self.ldlt.as_ref().map_or_else(Vec::new, |l| l.forward(f))
    }

    fn backward(&self, z: &[f64]) -> Vec<f64> {
        self.ldlt.as_ref().map_or_else(Vec::new, |l| l.backward(z))
    }
}

/// Block `LDLᵀ` solve in three stages:
/// forward `L_A y_A = f_A`, `L_B y_B = f_B`, `L_S y_S = f_S - N_A y_A - N_B y_B`;
/// diagonal `z = D⁻¹ y`; backward `L_Sᵀ x_S = z_S`, `L_Aᵀ x_A = z_A - N_Aᵀ x_S`,
/// `L_Bᵀ x_B = z_B - N_Bᵀ x_S`.
pub fn ldlt_three_stage_solve(sys: &BlockSystem) -> Result<Vec<f64>> {
    let ns = sys.s.len();
    let (fa, fb) = rayon::join(
        || SideFactor::new(&sys.h_a, &sys.m_a, "H_A"),
        || SideFactor::new(&sys.h_b, &sys.m_b, "H_B"),
    );
    let (fa, fb) = (fa?, fb?);
    let (ta, tb) = (fa.schur_term(ns), fb.schur_term(ns));
    let mut schur = sys.h_s.clone();
    for i in 0..ns {
        for j in 0..ns {
            schur.set(i, j, schur.get(i, j) - ta.get(i, j) - tb.get(i, j));
        }
    }
    let ls = Ldlt::factor(&schur).map_err(|pivot| Error::FactorizationFailure { block: "S", pivot })?;

    // stage 1
    let (ya, yb) = (fa.forward(&sys.f_a), fb.forward(&sys.f_b));
    let (na_y, nb_y) = (fa.n_mul(&ya), fb.n_mul(&yb));
    let ys = ls.forward(&(0..ns).map(|i| sys.f_s[i] - na_y[i] - nb_y[i]).collect::<Vec<_>>());
    // stage 2
    let div = |y: &[f64], d: &[f64]| -> Vec<f64> { y.iter().zip(d).map(|(a, b)| a / b).collect() };
    let (za, zb, zs) = (div(&ya, fa.d()), div(&yb, fb.d()), div(&ys, ls.d()));
    // stage 3
    let x_s = ls.backward(&zs);
    let sub = |z: &[f64], t: Vec<f64>| -> Vec<f64> { z.iter().zip(&t).map(|(a, b)| a - b).collect() };
    let x_a = fa.backward(&sub(&za, fa.nt_mul(&x_s)));
    let x_b = fb.backward(&sub(&zb, fb.nt_mul(&x_s)));
    Ok(sys.scatter(&x_a, &x_b, &x_s))
}

/// Symbolic elimination of the `A` then `B` unknowns of `c`. Returns every
/// `(a, b)` pair with `a ∈ A`, `b ∈ B` that becomes structurally nonzero;
/// empty when `S` separates `A` from `B`.
pub fn cross_block_fill(c: &SparseSymMatrix, a: &VertexSet, b: &VertexSet) -> Vec<(usize, usize)> {
    let n = c.n();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|i| c.neighbors(i).filter(|&j| j != i).collect()).collect();
    let mut eliminated = vec![false; n];
    let mut fill = BTreeSet::new();
    for v in a.iter().chain(b.iter()) {
        eliminated[v] = true;
        let live: Vec<usize> = adj[v].iter().copied().filter(|&u| !eliminated[u]).collect();
        for (k, &x) in live.iter().enumerate() {
            for &y in &live[k + 1..] {
                if adj[x].insert(y) {
                    adj[y].insert(x);
                }
            }
        }
    }
    for u in a.iter() {
        for &w in &adj[u] {
            if b.contains(w) {
                fill.insert((u, w));
            }
        }
    }
    fill.into_iter().collect()
}

/// `‖C x - f‖₂ / ‖f‖₂`.
pub fn relative_residual(c: &SparseSymMatrix, x: &[f64], f: &[f64]) -> f64 {
    let cx = c.apply(x);
    let r: f64 = cx.iter().zip(f).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let nf: f64 = f.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nf == 0.0 {
        r
    } else {
        r / nf
    }
}
