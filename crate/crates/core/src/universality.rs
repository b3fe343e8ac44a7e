//! Logical single-qubit gates from π-rotations in several `D₂ ⊂ SO(3)`
//! embeddings.
//!
//! Rotations use the convention `R(n̂, θ) = exp(i(θ/2) n̂·σ⃗)`. Two π-rotations,
//! first about `m̂` then about `m̂′`, multiply to `R(n̂, 2 arccos(m̂·m̂′))` with
//! `n̂ ∝ m̂′×m̂`, which is the rotation about `m̂×m̂′` in the opposite sense
//! `exp(−i(θ/2) n̂·σ⃗)`. Gate comparisons ignore global phase.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use thiserror::Error;

use crate::linalg::vec3::{self, V3};
use crate::linalg::{c, cis, cr, from_rows, identity, max_abs, pauli_dot, phase_distance, trace_fidelity, CMat, ONE, ZERO};

const UNIT_TOL: f64 = 1e-9;

/// Fidelity threshold for a target gate to count as reached.
pub const REACH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UniversalityError {
    #[error("axis is not a unit vector")]
    NotUnitAxis,
    #[error("embedding axes are not orthogonal")]
    NotOrthogonal,
    #[error("axes are parallel or antiparallel")]
    ParallelAxes,
    #[error("axis index {0} is not one of the embedding's three axes")]
    BadAxisIndex(usize),
    #[error("geometric and matrix compositions disagree by {0:e}")]
    Inconsistent(f64),
}

fn unit(n: V3) -> Result<V3, UniversalityError> {
    if vec3::is_unit(n, UNIT_TOL) {
        Ok(n)
    } else {
        Err(UniversalityError::NotUnitAxis)
    }
}

/// A right-handed orthonormal triple `(m̂, m̂⊥, m̂×m̂⊥)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub axes: [V3; 3],
    pub label: String,
}

impl Embedding {
    pub fn new(m: V3, m_perp: V3, label: impl Into<String>) -> Result<Self, UniversalityError> {
        let (m, p) = (unit(m)?, unit(m_perp)?);
        if vec3::dot(m, p).abs() > UNIT_TOL {
            return Err(UniversalityError::NotOrthogonal);
        }
        Ok(Embedding { axes: [m, p, vec3::cross(m, p)], label: label.into() })
    }

    /// `x̂, ŷ, ẑ`.
    pub fn standard() -> Self {
        Embedding { axes: [vec3::X, vec3::Y, vec3::Z], label: String::from("standard") }
    }

    /// The standard embedding rotated by `angle` about `ẑ`.
    pub fn rotated_standard(angle: f64) -> Self {
        let r = |v| vec3::rotate(v, vec3::Z, angle);
        Embedding { axes: [r(vec3::X), r(vec3::Y), vec3::Z], label: format!("standard rotated {angle:.6} about z") }
    }

    /// `μ̂ = (x̂+ẑ)/√2, ν̂ = (x̂−ẑ)/√2, ŷ`.
    pub fn mu_nu_y() -> Self {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        Embedding { axes: [[s, 0.0, s], [s, 0.0, -s], vec3::Y], label: String::from("mu-nu-y") }
    }

    pub fn orthonormality_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                r = r.max((vec3::dot(self.axes[i], self.axes[j]) - target).abs());
            }
        }
        let handed = vec3::cross(self.axes[0], self.axes[1]);
        r.max((0..3).map(|k| (handed[k] - self.axes[2][k]).abs()).fold(0.0, f64::max))
    }
}

/// The four embeddings whose π-rotations reach `H`, `S` and `T`.
pub fn four_embeddings() -> Vec<Embedding> {
    use core::f64::consts::{FRAC_PI_4, FRAC_PI_8};
    vec![Embedding::standard(), Embedding::rotated_standard(-FRAC_PI_4), Embedding::rotated_standard(-FRAC_PI_8), Embedding::mu_nu_y()]
}

/// The same set without the `−π/4` embedding.
pub fn three_embeddings() -> Vec<Embedding> {
    use core::f64::consts::FRAC_PI_8;
    vec![Embedding::standard(), Embedding::rotated_standard(-FRAC_PI_8), Embedding::mu_nu_y()]
}

/// `exp(i(angle/2) axis·σ⃗)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalRotation {
    pub axis: V3,
    pub angle: f64,
    pub matrix: CMat,
}

impl LogicalRotation {
    pub fn new(axis: V3, angle: f64) -> Result<Self, UniversalityError> {
        let axis = unit(axis)?;
        let half = angle / 2.0;
        let matrix = identity(2) * cr(half.cos()) + pauli_dot(axis) * c(0.0, half.sin());
        Ok(LogicalRotation { axis, angle, matrix })
    }

    /// Largest entrywise deviation of `matrix` from the `(axis, angle)` formula,
    /// together with unitarity and `det = 1`.
    pub fn consistency_residual(&self) -> f64 {
        let half = self.angle / 2.0;
        let expected = identity(2) * cr(half.cos()) + pauli_dot(self.axis) * c(0.0, half.sin());
        let det = self.matrix[(0, 0)] * self.matrix[(1, 1)] - self.matrix[(0, 1)] * self.matrix[(1, 0)];
        max_abs(&(&self.matrix - expected))
            .max(max_abs(&(self.matrix.adjoint() * &self.matrix - identity(2))))
            .max((det - ONE).norm())
    }
}

pub fn pi_rotation(axis: V3) -> Result<LogicalRotation, UniversalityError> {
    LogicalRotation::new(axis, core::f64::consts::PI)
}

/// π about `m̂`, then π about `m̂′`. The geometric result is checked against
/// the product of the two matrices.
pub fn compose_pi_rotations(m: V3, m_prime: V3) -> Result<LogicalRotation, UniversalityError> {
    let (m, mp) = (unit(m)?, unit(m_prime)?);
    let n = vec3::cross(mp, m);
    let s = vec3::norm(n);
    if s < 1e-12 {
        return Err(UniversalityError::ParallelAxes);
    }
    let angle = 2.0 * vec3::dot(m, mp).clamp(-1.0, 1.0).acos();
    let r = LogicalRotation::new(vec3::scale(n, 1.0 / s), angle)?;
    let direct = pi_rotation(mp)?.matrix * pi_rotation(m)?.matrix;
    let d = phase_distance(&direct, &r.matrix);
    if d > 1e-9 {
        return Err(UniversalityError::Inconsistent(d));
    }
    Ok(r)
}

/// Which logical gate a chain protocol in an embedding performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainOperation {
    /// Decouple one site with the field along axis `i`.
    Decouple(usize),
    /// Decouple along axis `i`, turn the field to axis `j`, recouple.
    Holonomy(usize, usize),
}

/// The logical rotation the chain protocol produces (up to phase).
pub fn predict_chain_gate(embedding: &Embedding, op: ChainOperation) -> Result<LogicalRotation, UniversalityError> {
    let axis = |i: usize| embedding.axes.get(i).copied().ok_or(UniversalityError::BadAxisIndex(i));
    match op {
        ChainOperation::Decouple(i) => pi_rotation(axis(i)?),
        ChainOperation::Holonomy(i, j) => compose_pi_rotations(axis(i)?, axis(j)?),
    }
}

/// Number of distinct matrices generated by the π-rotations about the three
/// axes (exact, not up to phase).
pub fn closure_size(embedding: &Embedding) -> usize {
    let gens: Vec<CMat> = embedding.axes.iter().filter_map(|&a| pi_rotation(a).ok()).map(|r| r.matrix).collect();
    let mut elems = vec![identity(2)];
    let mut frontier = vec![identity(2)];
    while let Some(e) = frontier.pop() {
        for g in &gens {
            let p = &e * g;
            if !elems.iter().any(|x| max_abs(&(x - &p)) < 1e-9) {
                elems.push(p.clone());
                frontier.push(p);
            }
            if elems.len() > 64 {
                return elems.len();
            }
        }
    }
    elems.len()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetReport {
    pub name: String,
    pub reached: bool,
    pub fidelity: f64,
    /// Labels of the π-rotation axes used, in order of application.
    pub via: Vec<String>,
    /// Whether the match is to the adjoint of the target (accepted for `S`).
    pub adjoint: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateSetReport {
    pub rotations: Vec<(String, LogicalRotation)>,
    pub compositions: usize,
    pub targets: Vec<TargetReport>,
}

impl GateSetReport {
    pub fn all_reached(&self) -> bool {
        self.targets.iter().all(|t| t.reached)
    }

    pub fn target(&self, name: &str) -> Option<&TargetReport> {
        self.targets.iter().find(|t| t.name == name)
    }
}

/// Hadamard, Phase and π/8 gates.
pub fn standard_targets() -> Vec<(String, CMat, bool)> {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    vec![
        (String::from("H"), from_rows(&[&[cr(s), cr(s)], &[cr(s), cr(-s)]]), false),
        (String::from("S"), from_rows(&[&[ONE, ZERO], &[ZERO, c(0.0, 1.0)]]), true),
        (String::from("T"), from_rows(&[&[ONE, ZERO], &[ZERO, cis(core::f64::consts::FRAC_PI_4)]]), false),
    ]
}

/// All π-rotations of the embeddings, their ordered pairwise products, and
/// products of two such pairs, searched for each target.
pub fn embedding_gate_set(embeddings: &[Embedding]) -> GateSetReport {
    let names = ["m", "m_perp", "m×m_perp"];
    let mut rotations: Vec<(String, LogicalRotation)> = Vec::new();
    for e in embeddings {
        for (k, &a) in e.axes.iter().enumerate() {
            if let Ok(r) = pi_rotation(a) {
                // π-rotations about n̂ and −n̂ agree up to phase.
                if !rotations.iter().any(|(_, q)| phase_distance(&q.matrix, &r.matrix) < 1e-9) {
                    rotations.push((format!("{}:{}", e.label, names[k]), r));
                }
            }
        }
    }
    let mut level: Vec<(Vec<String>, CMat)> = rotations.iter().map(|(l, r)| (vec![l.clone()], r.matrix.clone())).collect();
    for (la, a) in &rotations {
        for (lb, b) in &rotations {
            if la != lb {
                level.push((vec![la.clone(), lb.clone()], &b.matrix * &a.matrix));
            }
        }
    }
    let compositions = level.len() - rotations.len();
    let mut targets = Vec::new();
    for (name, target, allow_adjoint) in standard_targets() {
        let candidates: Vec<(CMat, bool)> = if allow_adjoint { vec![(target.clone(), false), (target.adjoint(), true)] } else { vec![(target.clone(), false)] };
        let mut found: Option<TargetReport> = None;
        'search: for (t, adj) in &candidates {
            for (via, u) in &level {
                let f = trace_fidelity(t, u);
                if f >= 1.0 - REACH_TOL {
                    found = Some(TargetReport { name: name.clone(), reached: true, fidelity: f, via: via.clone(), adjoint: *adj });
                    break 'search;
                }
            }
        }
        if found.is_none() {
            // Products of two compositions, e.g. S = T·T.
            'deep: for (t, adj) in &candidates {
                for (va, a) in &level {
                    for (vb, b) in &level {
                        let f = trace_fidelity(t, &(b * a));
                        if f >= 1.0 - REACH_TOL {
                            let mut via = va.clone();
                            via.extend(vb.iter().cloned());
                            found = Some(TargetReport { name: name.clone(), reached: true, fidelity: f, via, adjoint: *adj });
                            break 'deep;
                        }
                    }
                }
            }
        }
        let best = found.unwrap_or_else(|| {
            let f = level.iter().map(|(_, u)| trace_fidelity(&target, u)).fold(0.0, f64::max);
            TargetReport { name: name.clone(), reached: false, fidelity: f, via: Vec::new(), adjoint: false }
        });
        targets.push(best);
    }
    GateSetReport { rotations, compositions, targets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

    #[test]
    fn pi_rotations_are_paulis() {
        let z = pi_rotation(vec3::Z).unwrap();
        assert!(max_abs(&(&z.matrix - from_rows(&[&[c(0.0, 1.0), ZERO], &[ZERO, c(0.0, -1.0)]]))) < 1e-15);
        assert!(phase_distance(&pi_rotation(vec3::X).unwrap().matrix, &pauli_dot(vec3::X)) < 1e-12);
        let h = &standard_targets()[0].1;
        assert!(trace_fidelity(h, &pi_rotation([FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2]).unwrap().matrix) > 1.0 - 1e-14);
        assert_eq!(pi_rotation([1.0, 1.0, 0.0]), Err(UniversalityError::NotUnitAxis));
    }

    #[test]
    fn composition_examples() {
        let r = compose_pi_rotations(vec3::Z, vec3::X).unwrap();
        assert!((r.angle - PI).abs() < 1e-12);
        assert!(vec3::dot(r.axis, vec3::Y).abs() > 1.0 - 1e-12);
        let s = compose_pi_rotations(vec3::X, [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).unwrap();
        assert!((s.angle - FRAC_PI_2).abs() < 1e-12);
        assert!(trace_fidelity(&standard_targets()[1].1, &s.matrix) > 1.0 - 1e-12);
        let t = compose_pi_rotations(vec3::X, [FRAC_PI_8.cos(), FRAC_PI_8.sin(), 0.0]).unwrap();
        assert!((t.angle - FRAC_PI_4).abs() < 1e-12);
        assert!(vec3::dot(t.axis, vec3::Z).abs() > 1.0 - 1e-12);
        assert_eq!(compose_pi_rotations(vec3::X, [-1.0, 0.0, 0.0]), Err(UniversalityError::ParallelAxes));
    }

    #[test]
    fn four_embeddings_reach_h_s_t() {
        for set in [four_embeddings(), three_embeddings()] {
            let rep = embedding_gate_set(&set);
            assert!(rep.all_reached(), "{:?}", rep.targets);
            for t in &rep.targets {
                assert!(t.fidelity >= 1.0 - REACH_TOL);
            }
        }
        let four = embedding_gate_set(&four_embeddings());
        assert!(four.targets.iter().all(|t| t.via.len() <= 2));
        let three = embedding_gate_set(&three_embeddings());
        assert_eq!(three.target("S").unwrap().via.len(), 4);
    }

    #[test]
    fn standard_embedding_alone_gives_paulis_only() {
        let rep = embedding_gate_set(&[Embedding::standard()]);
        assert!(!rep.target("H").unwrap().reached);
        assert_eq!(rep.rotations.len(), 3);
        assert_eq!(closure_size(&Embedding::standard()), 8);
        assert_eq!(closure_size(&Embedding::mu_nu_y()), 8);
    }

    #[test]
    fn chain_predictions() {
        let std = Embedding::standard();
        let hol = predict_chain_gate(&std, ChainOperation::Holonomy(2, 0)).unwrap();
        assert!(phase_distance(&hol.matrix, &pauli_dot(vec3::Y)) < 1e-12);
        let dec = predict_chain_gate(&std, ChainOperation::Decouple(2)).unwrap();
        assert!(phase_distance(&dec.matrix, &pauli_dot(vec3::Z)) < 1e-12);
        let had = predict_chain_gate(&Embedding::mu_nu_y(), ChainOperation::Decouple(0)).unwrap();
        assert!(trace_fidelity(&standard_targets()[0].1, &had.matrix) > 1.0 - 1e-14);
        assert_eq!(predict_chain_gate(&std, ChainOperation::Decouple(3)), Err(UniversalityError::BadAxisIndex(3)));
    }

    #[test]
    fn embeddings_are_right_handed() {
        for e in four_embeddings() {
            assert!(e.orthonormality_residual() < 1e-12, "{}", e.label);
        }
        assert_eq!(Embedding::new(vec3::X, [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0], "bad"), Err(UniversalityError::NotOrthogonal));
    }
}
