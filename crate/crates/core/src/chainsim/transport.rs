//! Logical frames and discrete parallel transport of a degenerate ground space.
//!
//! Each step projects the frame onto the new ground space and re-orthonormalizes
//! it symmetrically, which is the discrete Kato transport. A frame carried by
//! every second step alone gives the step-doubling estimate.

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{cr, gauge_fix, gauge_fix_vec, identity, lowdin, max_abs, phase_distance, unitarity_residual, CMat, CVec};

use super::ground::{ground_space, GroundSolver, GroundSpace};
use super::layout::{ChainLayout, ProductOperator};
use super::schedule::ScheduledHamiltonian;
use super::ChainError;

/// Logical `Z` and `X` of one encoded qubit, as Hermitian involutions that
/// anticommute on the ground space.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalQubit {
    pub z: ProductOperator,
    pub x: ProductOperator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportOptions {
    /// Number of steps; rounded up to even for step doubling.
    pub steps: usize,
    pub solver: GroundSolver,
    /// Largest accepted step-doubling change of the gate (Frobenius, up to phase).
    pub convergence_tol: f64,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions { steps: 256, solver: GroundSolver::default(), convergence_tol: 1e-6 }
    }
}

#[derive(Debug, Clone)]
pub struct HolonomyResult {
    /// Defined up to a global phase; reported with its leading entry real positive.
    pub logical_unitary: CMat,
    pub min_gap: f64,
    pub gap_profile: Vec<(f64, f64)>,
    pub steps: usize,
    pub frame_residual: f64,
    pub step_doubling_change: f64,
    pub degeneracy: usize,
}

const FRAME_TOL: f64 = 1e-8;

/// Basis of the ground space labeled by the logical operators: column `b`
/// has `Z_q = (−1)^{b_q}` with qubit 0 the most significant bit, and
/// `|b⟩ = Π_q X_q^{b_q} |0…0⟩`.
pub fn logical_frame(layout: &ChainLayout, ground: &CMat, qubits: &[LogicalQubit]) -> Result<CMat, ChainError> {
    let d = ground.ncols();
    let q = qubits.len();
    if d != 1 << q {
        return Err(ChainError::Frame(format!("ground degeneracy {d} does not hold {q} qubits")));
    }
    let mut zs = Vec::with_capacity(q);
    let mut xs = Vec::with_capacity(q);
    for lq in qubits {
        let mz = lq.z.restricted(layout, ground);
        let mx = lq.x.restricted(layout, ground);
        let r = unitarity_residual(&mz).max(unitarity_residual(&mx));
        if r > FRAME_TOL {
            return Err(ChainError::Frame(format!("logical operators leave the ground space (residual {r:e})")));
        }
        zs.push(mz);
        xs.push(mx);
    }
    let mut proj = identity(d);
    for mz in &zs {
        proj = &proj * (identity(d) + mz) * cr(0.5);
    }
    let best = (0..d).max_by(|&a, &b| proj.column(a).norm().total_cmp(&proj.column(b).norm())).unwrap_or(0);
    let col: CVec = proj.column(best).into_owned();
    if col.norm() < 0.5 {
        return Err(ChainError::Frame(format!("no joint +1 eigenvector (weight {:e})", col.norm())));
    }
    let state = gauge_fix_vec(&(ground * (&col / cr(col.norm()))));
    let v0: CVec = ground.adjoint() * state;
    let mut cols = Vec::with_capacity(d);
    for b in 0..d {
        let mut v = v0.clone();
        for (k, mx) in xs.iter().enumerate() {
            if (b >> (q - 1 - k)) & 1 == 1 {
                v = mx * v;
            }
        }
        cols.push(v);
    }
    let coords = CMat::from_columns(&cols);
    let mut residual = max_abs(&(coords.adjoint() * &coords - identity(d)));
    for (k, mz) in zs.iter().enumerate() {
        let signs = CMat::from_fn(d, d, |i, j| if i == j { cr(if (i >> (q - 1 - k)) & 1 == 1 { -1.0 } else { 1.0 }) } else { cr(0.0) });
        residual = residual.max(max_abs(&(mz * &coords - &coords * signs)));
    }
    if residual > FRAME_TOL {
        return Err(ChainError::Frame(format!("logical operators do not form a Pauli frame (residual {residual:e})")));
    }
    Ok(ground * coords)
}

fn solve_at(sched: &ScheduledHamiltonian, t: f64, solver: &GroundSolver, hint: usize, guess: Option<&CMat>) -> Result<GroundSpace, ChainError> {
    let h = sched.at(t)?;
    ground_space(&h, solver, hint, guess).map_err(|e| match e {
        ChainError::NoGap { gap, .. } => ChainError::NoGap { t, gap },
        other => other,
    })
}

fn project(ground: &CMat, frame: &CMat) -> Result<CMat, ChainError> {
    lowdin(&(ground * (ground.adjoint() * frame))).ok_or_else(|| ChainError::Frame("transported frame lost rank".into()))
}

/// Transport the `logical_in` frame at `t = 0` to `t = 1` and read it off
/// against the `logical_out` frame.
pub fn transport_holonomy(
    sched: &ScheduledHamiltonian,
    logical_in: &[LogicalQubit],
    logical_out: &[LogicalQubit],
    opts: &TransportOptions,
) -> Result<HolonomyResult, ChainError> {
    let steps = opts.steps.max(2).div_ceil(2) * 2;
    let hint = 1 << logical_in.len();
    let g0 = solve_at(sched, 0.0, &opts.solver, hint, None)?;
    let degeneracy = g0.degeneracy;
    let mut frame = logical_frame(&sched.layout, &g0.frame, logical_in)?;
    let mut half = frame.clone();
    let mut gap_profile = Vec::with_capacity(steps + 1);
    gap_profile.push((0.0, g0.gap));
    let mut guess = g0.vectors;
    let mut ground = g0.frame;
    for k in 1..=steps {
        let t = k as f64 / steps as f64;
        let g = solve_at(sched, t, &opts.solver, degeneracy, Some(&guess))?;
        if g.degeneracy != degeneracy {
            return Err(ChainError::DegeneracyChange { t, expected: degeneracy, found: g.degeneracy });
        }
        frame = project(&g.frame, &frame)?;
        if k % 2 == 0 {
            half = project(&g.frame, &half)?;
        }
        gap_profile.push((t, g.gap));
        guess = g.vectors;
        ground = g.frame;
    }
    let out = logical_frame(&sched.layout, &ground, logical_out)?;
    let u = out.adjoint() * &frame;
    let u_half = out.adjoint() * &half;
    let change = phase_distance(&u, &u_half);
    let frame_residual = unitarity_residual(&u).max(unitarity_residual(&(frame.adjoint() * &frame)));
    if change > opts.convergence_tol {
        return Err(ChainError::NonConvergent { change });
    }
    let min_gap = gap_profile.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    Ok(HolonomyResult { logical_unitary: gauge_fix(&u), min_gap, gap_profile, steps, frame_residual, step_doubling_change: change, degeneracy })
}

/// `(t, Δ(t))` at `samples` uniformly spaced times including both ends.
pub fn gap_profile(sched: &ScheduledHamiltonian, samples: usize, solver: &GroundSolver) -> Result<Vec<(f64, f64)>, ChainError> {
    let samples = samples.max(2);
    let mut out = Vec::with_capacity(samples);
    let mut guess: Option<CMat> = None;
    let mut hint = 1;
    for k in 0..samples {
        let t = k as f64 / (samples - 1) as f64;
        let g = solve_at(sched, t, solver, hint, guess.as_ref())?;
        hint = g.degeneracy;
        out.push((t, g.gap));
        guess = Some(g.vectors);
    }
    Ok(out)
}
