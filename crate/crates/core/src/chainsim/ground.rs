//! Lowest eigenvalue cluster of a Hermitian operator.

use alloc::vec::Vec;

use crate::eigen::{lowest_eigenpairs, HermitianOperator, SolverOptions};
use crate::linalg::CMat;

use super::ChainError;

/// Gaps at or below this (in units of `J`) count as degeneracies, and a
/// ground cluster separated by no more than this is rejected.
pub const GAP_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundSolver {
    pub eigen: SolverOptions,
    /// Cluster spread allowed relative to the gap above the cluster.
    pub tol_rel: f64,
}

impl Default for GroundSolver {
    fn default() -> Self {
        GroundSolver { eigen: SolverOptions { dense_limit: 128, ..SolverOptions::default() }, tol_rel: 1e-6 }
    }
}

#[derive(Debug, Clone)]
pub struct GroundSpace {
    /// Orthonormal columns spanning the ground cluster.
    pub frame: CMat,
    pub degeneracy: usize,
    pub gap: f64,
    /// The computed low-lying eigenvalues, ascending.
    pub energies: Vec<f64>,
    /// Low-lying eigenvectors kept for warm starts.
    pub vectors: CMat,
}

/// Smallest `k` such that the first `k` values spread by at most
/// `tol_rel·gap` and the gap to value `k` exceeds the floor.
fn cluster(values: &[f64], tol_rel: f64) -> Option<(usize, f64)> {
    for k in 1..values.len() {
        let gap = values[k] - values[k - 1];
        let spread = values[k - 1] - values[0];
        if gap > GAP_FLOOR && spread <= tol_rel * gap {
            return Some((k, gap));
        }
    }
    None
}

/// The ground cluster of `op`. `hint` is the expected degeneracy and
/// `guess` an optional warm-start block for the iterative solver.
pub fn ground_space<O: HermitianOperator + ?Sized>(
    op: &O,
    solver: &GroundSolver,
    hint: usize,
    guess: Option<&CMat>,
) -> Result<GroundSpace, ChainError> {
    let n = op.dim();
    if n == 1 {
        return Err(ChainError::NoGap { t: f64::NAN, gap: 0.0 });
    }
    let mut nev = if n <= solver.eigen.dense_limit { n } else { (hint.max(1) + 2).min(n) };
    loop {
        let eig = lowest_eigenpairs(op, nev, guess, &solver.eigen)?;
        if let Some((k, gap)) = cluster(&eig.values, solver.tol_rel) {
            // Keep a couple of extra vectors to warm-start the next solve.
            let keep = (k + 2).min(eig.values.len());
            return Ok(GroundSpace {
                frame: eig.vectors.columns(0, k).into_owned(),
                degeneracy: k,
                gap,
                energies: eig.values[..keep].to_vec(),
                vectors: eig.vectors.columns(0, keep).into_owned(),
            });
        }
        if nev == n {
            let gap = eig.values.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            return Err(ChainError::NoGap { t: f64::NAN, gap });
        }
        nev = (2 * nev).min(n);
    }
}
