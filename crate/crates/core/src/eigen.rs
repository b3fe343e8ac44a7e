//! Lowest eigenpairs of Hermitian operators.
//!
//! Small problems are diagonalized densely. Larger ones use Chebyshev-filtered
//! subspace iteration: a block wider than the wanted set is repeatedly passed
//! through a Chebyshev polynomial that damps the spectrum above the block's
//! top Ritz value, then Rayleigh–Ritz is applied. The block is several columns
//! wider than the largest multiplicity that has to be resolved, so exactly
//! degenerate ground levels come out complete. A warm start from the previous
//! parameter value makes each step of an adiabatic sweep cost one or two
//! filter passes.

use alloc::vec::Vec;

use thiserror::Error;

use crate::linalg::{cr, eigh, orthonormal_columns, CMat, CVec, C64};
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("subspace iteration did not converge: residual {residual:e} after {restarts} iterations")]
    NotConverged { residual: f64, restarts: usize },
    #[error("requested {requested} eigenpairs of a {dim}-dimensional operator")]
    TooMany { requested: usize, dim: usize },
}

/// A Hermitian linear operator that can be applied to a block of columns.
pub trait HermitianOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &CMat) -> CMat;
    fn to_dense(&self) -> CMat;
}

impl HermitianOperator for CMat {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &CMat) -> CMat {
        self * x
    }

    fn to_dense(&self) -> CMat {
        self.clone()
    }
}

impl HermitianOperator for SparseMatrix {
    fn dim(&self) -> usize {
        SparseMatrix::dim(self)
    }

    fn apply(&self, x: &CMat) -> CMat {
        let mut y = CMat::zeros(x.nrows(), x.ncols());
        self.apply_add(1.0, x, &mut y);
        y
    }

    fn to_dense(&self) -> CMat {
        SparseMatrix::to_dense(self)
    }
}

/// Lowest eigenvalues (ascending) with eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct LowestEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
    /// Largest residual `‖Hx − λx‖` among the returned pairs.
    pub residual: f64,
    /// Filter passes used (zero for the dense path).
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Operators up to this dimension are diagonalized densely.
    pub dense_limit: usize,
    /// Degree of the Chebyshev filter applied per iteration.
    pub degree: usize,
    /// Extra block columns beyond the wanted eigenpairs.
    pub padding: usize,
    pub max_iterations: usize,
    /// Residual tolerance relative to the spectral scale of the Ritz values.
    pub tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { dense_limit: 128, degree: 16, padding: 6, max_iterations: 500, tol: 1e-10 }
    }
}

/// Deterministic pseudo-random fill for start blocks (SplitMix64).
struct SplitMix(u64);

impl SplitMix {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }
}

fn start_block(n: usize, width: usize, guess: Option<&CMat>) -> CMat {
    let mut rng = SplitMix(0x5eed_1234_abcd_0001 ^ n as u64);
    let mut cols: Vec<CMat> = Vec::new();
    if let Some(g) = guess {
        cols.push(g.clone());
    }
    let have = guess.map(|g| g.ncols()).unwrap_or(0);
    if width > have {
        cols.push(CMat::from_fn(n, width - have, |_, _| C64::new(rng.next_f64(), rng.next_f64())));
    }
    let refs: Vec<_> = cols.iter().flat_map(|m| m.column_iter()).collect();
    let stacked = CMat::from_columns(&refs);
    let mut q = orthonormal_columns(&stacked, 1e-8);
    while q.ncols() < width {
        let extra = CMat::from_fn(n, width - q.ncols(), |_, _| C64::new(rng.next_f64(), rng.next_f64()));
        let refs: Vec<_> = q.column_iter().chain(extra.column_iter()).collect();
        q = orthonormal_columns(&CMat::from_columns(&refs), 1e-8);
    }
    q.columns(0, width).into_owned()
}

/// Upper bound on the spectrum from a short Lanczos run: the largest Ritz
/// value plus the norm of the last residual.
fn spectral_upper_bound<O: HermitianOperator + ?Sized>(op: &O, steps: usize) -> f64 {
    let n = op.dim();
    let mut v = start_block(n, 1, None);
    let mut basis: Vec<CVec> = Vec::new();
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut last = 0.0;
    for _ in 0..steps.min(n) {
        let col: CVec = v.column(0).into_owned();
        let mut w: CVec = op.apply(&v).column(0).into_owned();
        alpha.push(col.dotc(&w).re);
        basis.push(col);
        for _ in 0..2 {
            for q in &basis {
                let p = q.dotc(&w);
                w -= q * p;
            }
        }
        last = w.norm();
        if last < 1e-12 {
            break;
        }
        beta.push(last);
        v = CMat::from_columns(&[w / cr(last)]);
    }
    let k = alpha.len();
    let t = CMat::from_fn(k, k, |i, j| {
        if i == j {
            cr(alpha[i])
        } else if i + 1 == j {
            cr(beta[i])
        } else if j + 1 == i {
            cr(beta[j])
        } else {
            cr(0.0)
        }
    });
    let (vals, _) = eigh(&t);
    vals.last().copied().unwrap_or(0.0) + last
}

/// `p(H)X` for the degree-`degree` Chebyshev polynomial that is bounded on
/// `[lo, hi]` and grows fastest below it, scaled to stay `O(1)` at `low`.
fn chebyshev_filter<O: HermitianOperator + ?Sized>(op: &O, x: &CMat, degree: usize, lo: f64, hi: f64, low: f64) -> CMat {
    let e = (hi - lo) / 2.0;
    let c = (hi + lo) / 2.0;
    let mut sigma = e / (low - c);
    let tau = 2.0 / sigma;
    let mut prev = x.clone();
    let mut cur = (op.apply(x) - x * cr(c)) * cr(sigma / e);
    for _ in 1..degree {
        let next_sigma = 1.0 / (tau - sigma);
        let next = (op.apply(&cur) - &cur * cr(c)) * cr(2.0 * next_sigma / e) - &prev * cr(sigma * next_sigma);
        prev = cur;
        cur = next;
        sigma = next_sigma;
    }
    cur
}

/// The `nev` lowest eigenpairs of `op`, optionally warm-started from the
/// columns of `guess`.
pub fn lowest_eigenpairs<O: HermitianOperator + ?Sized>(
    op: &O,
    nev: usize,
    guess: Option<&CMat>,
    opts: &SolverOptions,
) -> Result<LowestEigen, EigenError> {
    let n = op.dim();
    if nev > n {
        return Err(EigenError::TooMany { requested: nev, dim: n });
    }
    if n <= opts.dense_limit {
        let h = op.to_dense();
        let (vals, vecs) = eigh(&h);
        return Ok(LowestEigen { values: vals[..nev].to_vec(), vectors: vecs.columns(0, nev).into_owned(), residual: 0.0, iterations: 0 });
    }

    let mut width = (nev + opts.padding.max(1)).max(guess.map(|g| g.ncols()).unwrap_or(0)).min(n);
    if 2 * width > n {
        // The block would cover most of the space; the dense solver is cheaper.
        let dense = SolverOptions { dense_limit: n, ..*opts };
        return lowest_eigenpairs(op, nev, None, &dense);
    }
    let hi = spectral_upper_bound(op, 40);
    let mut x = start_block(n, width, guess);
    let mut worst = f64::INFINITY;
    for iteration in 0..opts.max_iterations {
        let hx = op.apply(&x);
        let t = x.adjoint() * &hx;
        let (theta, y) = eigh(&((&t + t.adjoint()) * cr(0.5)));
        x = &x * &y;
        let hx = hx * &y;
        let scale = theta.iter().fold(hi.abs().max(1.0), |m, v| m.max(v.abs()));
        worst = (0..nev).map(|j| (hx.column(j) - x.column(j) * cr(theta[j])).norm()).fold(0.0, f64::max);
        if worst <= opts.tol * scale {
            return Ok(LowestEigen { values: theta[..nev].to_vec(), vectors: x.columns(0, nev).into_owned(), residual: worst, iterations: iteration });
        }
        let top = theta[width - 1];
        let spread = (hi - theta[0]).max(1e-300);
        if top - theta[nev - 1] < 1e-3 * spread && 2 * (width + nev) <= n {
            // The wanted level continues to the top of the block, so the
            // filter cannot separate it from what lies above: widen.
            width += nev.max(4);
            x = start_block(n, width, Some(&x));
            continue;
        }
        let lo = if top < hi { top } else { (theta[0] + hi) / 2.0 };
        let filtered = chebyshev_filter(op, &x, opts.degree.max(2), lo, hi, theta[0]);
        // Search span(X, p(H)X): the filter can shrink the components of
        // wanted vectors near `lo` far below round-off relative to the
        // ground level, and keeping X retains them.
        let refs: Vec<_> = x.column_iter().chain(filtered.column_iter()).collect();
        let q = orthonormal_columns(&CMat::from_columns(&refs), 1e-10);
        let hq = op.apply(&q);
        let t = q.adjoint() * &hq;
        let (_, y) = eigh(&((&t + t.adjoint()) * cr(0.5)));
        x = orthonormal_columns(&(&q * y.columns(0, width.min(q.ncols()))), 1e-10);
        if x.ncols() < width {
            x = start_block(n, width, Some(&x));
        }
    }
    Err(EigenError::NotConverged { residual: worst, restarts: opts.max_iterations })
}
