//! Twisted group-average channels and the elementary gates they fix.
//!
//! For a projective representation `V_g` and a character `χ`,
//! `Γ_χ(M) = (1/|G|) Σ_g χ(g) V_g M V_g†`. A matrix `W` is a fixed point of
//! `Γ_χ` exactly when `W V_g = χ(g) V_g W` for all `g`. For irreducible `V`
//! the fixed point is unique up to scale and, once normalized, unitary; the
//! fixed points of all channels form a projective representation of the
//! abelianization.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::groups::{characters, Character};
use crate::linalg::{eigh, fro_norm, gauge_fix, kron, unitarity_residual, unvec_row_major, CMat, C64};
use crate::projrep::ProjectiveRep;

/// Eigenvalues of a `Γ_χ` superoperator within this distance of one count as
/// fixed directions.
const FIXED_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GateError {
    #[error("matrix is {got}x{got}, representation acts on dimension {dim}")]
    DimensionMismatch { got: usize, dim: usize },
    #[error("representation is reducible; fixed points are not unique")]
    NotIrreducible,
    #[error("channel for character {character} has a {multiplicity}-dimensional fixed space")]
    DegenerateFixedSpace { character: usize, multiplicity: usize },
    #[error("fixed point for character {character} is not unitary (residual {residual:e})")]
    NonUnitaryFixedPoint { character: usize, residual: f64 },
    #[error("character {0} has a fixed point proportional to the identity")]
    NotFaithful(usize),
}

/// The matrix of `Γ_χ` acting on row-major vectorized `dim×dim` matrices:
/// `(1/|G|) Σ_g χ(g) V_g ⊗ V̄_g`.
pub fn gamma_superoperator(rep: &ProjectiveRep, chi: &Character) -> CMat {
    let d = rep.dim();
    let mut s = CMat::zeros(d * d, d * d);
    for g in rep.group().elements() {
        let v = rep.matrix(g);
        s += kron(v, &v.map(|z| z.conj())) * chi.value(g);
    }
    s / C64::new(rep.group().order() as f64, 0.0)
}

/// `Γ_χ(M)` evaluated directly from its definition.
pub fn apply_gamma(rep: &ProjectiveRep, chi: &Character, m: &CMat) -> Result<CMat, GateError> {
    let d = rep.dim();
    if m.nrows() != d || m.ncols() != d {
        return Err(GateError::DimensionMismatch { got: m.nrows(), dim: d });
    }
    let mut out = CMat::zeros(d, d);
    for g in rep.group().elements() {
        let v = rep.matrix(g);
        out += v * m * v.adjoint() * chi.value(g);
    }
    Ok(out / C64::new(rep.group().order() as f64, 0.0))
}

/// Dimension of the eigenvalue-one eigenspace of `Γ_χ`.
pub fn fixed_space_dimension(rep: &ProjectiveRep, chi: &Character) -> usize {
    let (vals, _) = eigh(&gamma_superoperator(rep, chi));
    vals.iter().filter(|&&l| (l - 1.0).abs() < FIXED_TOL).count()
}

/// `max_g ‖W V_g − χ(g) V_g W‖`.
pub fn intertwining_residual(rep: &ProjectiveRep, chi: &Character, w: &CMat) -> f64 {
    rep.group()
        .elements()
        .map(|g| {
            let v = rep.matrix(g);
            fro_norm(&(w * v - v * w * chi.value(g)))
        })
        .fold(0.0, f64::max)
}

/// The unitary fixed point of `Γ_χ`, normalized to `‖W‖_F = √dim` with its
/// leading entry real and positive; `None` when the channel has no fixed
/// point. `character` is only used to label errors.
pub fn fixed_point(rep: &ProjectiveRep, chi: &Character, character: usize) -> Result<Option<CMat>, GateError> {
    if !rep.is_irreducible() {
        return Err(GateError::NotIrreducible);
    }
    fixed_point_unchecked(rep, chi, character)
}

fn fixed_point_unchecked(rep: &ProjectiveRep, chi: &Character, character: usize) -> Result<Option<CMat>, GateError> {
    let d = rep.dim();
    let (vals, vecs) = eigh(&gamma_superoperator(rep, chi));
    let fixed: Vec<usize> = (0..vals.len()).filter(|&k| (vals[k] - 1.0).abs() < FIXED_TOL).collect();
    match fixed.len() {
        0 => Ok(None),
        1 => {
            let w = unvec_row_major(&vecs.column(fixed[0]).into_owned(), d, d);
            let w = &w * C64::new((d as f64).sqrt() / fro_norm(&w), 0.0);
            let residual = unitarity_residual(&w);
            if residual > 1e-9 {
                return Err(GateError::NonUnitaryFixedPoint { character, residual });
            }
            Ok(Some(gauge_fix(&w)))
        }
        multiplicity => Err(GateError::DegenerateFixedSpace { character, multiplicity }),
    }
}

/// Fixed points of every character channel and the phases of their products.
#[derive(Debug, Clone)]
pub struct GateTable {
    pub rep: ProjectiveRep,
    pub characters: Vec<Character>,
    /// `W_χ` per character, `None` where the channel has no fixed point.
    pub entries: Vec<Option<CMat>>,
    /// `α(χ,φ)` with `W_χ W_φ = α W_{χ·φ}`, where all three exist.
    pub alpha: Vec<Vec<Option<C64>>>,
    /// Index of `χ·φ` in `characters`.
    pub product: Vec<Vec<usize>>,
}

impl GateTable {
    /// Characters whose channel has no nonzero fixed point.
    pub fn missing(&self) -> Vec<usize> {
        (0..self.entries.len()).filter(|&k| self.entries[k].is_none()).collect()
    }

    /// Largest `‖W_χ W_φ − α W_{χφ}‖` over all available pairs.
    pub fn group_law_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, wi) in self.entries.iter().enumerate() {
            for (j, wj) in self.entries.iter().enumerate() {
                let k = self.product[i][j];
                if let (Some(a), Some(b), Some(c), Some(al)) = (wi, wj, &self.entries[k], self.alpha[i][j]) {
                    worst = worst.max(fro_norm(&(a * b - c * al)));
                }
            }
        }
        worst
    }

    /// Largest intertwining residual over all entries.
    pub fn intertwining_residual(&self) -> f64 {
        self.entries
            .iter()
            .zip(&self.characters)
            .filter_map(|(w, chi)| w.as_ref().map(|w| intertwining_residual(&self.rep, chi, w)))
            .fold(0.0, f64::max)
    }

    /// Largest deviation of `|α|` from one.
    pub fn alpha_modulus_residual(&self) -> f64 {
        self.alpha.iter().flatten().flatten().map(|a| (a.norm() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Build the full table for an irreducible representation, checking that
/// `W_χ ∝ I` only for the trivial character.
pub fn gate_table(rep: &ProjectiveRep) -> Result<GateTable, GateError> {
    if !rep.is_irreducible() {
        return Err(GateError::NotIrreducible);
    }
    let chars = characters(rep.group());
    let d = rep.dim();
    let mut entries = Vec::with_capacity(chars.len());
    for (k, chi) in chars.iter().enumerate() {
        let w = fixed_point_unchecked(rep, chi, k)?;
        if let Some(w) = &w {
            let tr = w.trace().norm();
            let is_scalar = tr > d as f64 - 1e-6;
            if is_scalar != chi.is_trivial() {
                return Err(GateError::NotFaithful(k));
            }
        }
        entries.push(w);
    }
    let n = chars.len();
    let product: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let p = chars[i].product(&chars[j]);
                    chars.iter().position(|c| *c == p).expect("characters are closed under products")
                })
                .collect()
        })
        .collect();
    let mut alpha = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if let (Some(a), Some(b), Some(c)) = (&entries[i], &entries[j], &entries[product[i][j]]) {
                alpha[i][j] = Some((a * b * c.adjoint()).trace() / C64::new(d as f64, 0.0));
            }
        }
    }
    Ok(GateTable { rep: rep.clone(), characters: chars, entries, alpha, product })
}

/// Outcome of the projector-algebra check `Γ_χ∘Γ_φ = δ_{χφ} Γ_χ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorReport {
    /// Largest `‖Γ_χ(Γ_φ(E)) − δ_{χφ}Γ_χ(E)‖` over character pairs and matrix units `E`.
    pub max_residual: f64,
    pub pairs: usize,
}

impl ProjectorReport {
    pub fn passed(&self) -> bool {
        self.max_residual < 1e-10
    }
}

pub fn check_projector_algebra(rep: &ProjectiveRep) -> ProjectorReport {
    let chars = characters(rep.group());
    let supers: Vec<CMat> = chars.iter().map(|c| gamma_superoperator(rep, c)).collect();
    let mut worst: f64 = 0.0;
    for (i, si) in supers.iter().enumerate() {
        for (j, sj) in supers.iter().enumerate() {
            let mut diff = si * sj;
            if i == j {
                diff -= si;
            }
            // Column k is the image of the k-th matrix unit.
            for col in diff.column_iter() {
                worst = worst.max(col.norm());
            }
        }
    }
    ProjectorReport { max_residual: worst, pairs: chars.len() * chars.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{FiniteGroup, Character};
    use crate::linalg::{identity, paulis, phase_distance, ONE};
    use crate::projrep::{pauli_rep, trivial_rep, two_chain_symmetry};

    fn klein_char(rep: &ProjectiveRep, kernel_label: &str) -> Character {
        let g = rep.group();
        let k = g.element(kernel_label).unwrap();
        characters(g).into_iter().find(|c| !c.is_trivial() && c.kernel().contains(&k)).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let rep = pauli_rep();
        let [i, _, _, z] = paulis();
        let triv = Character::trivial(4);
        assert!(fro_norm(&apply_gamma(&rep, &triv, &z).unwrap()) < 1e-14);
        assert!(fro_norm(&(apply_gamma(&rep, &triv, &i).unwrap() - &i)) < 1e-14);
        let chi_z = klein_char(&rep, "z");
        assert!(fro_norm(&(apply_gamma(&rep, &chi_z, &z).unwrap() - &z)) < 1e-14);
        assert!(matches!(apply_gamma(&rep, &triv, &identity(3)), Err(GateError::DimensionMismatch { .. })));
    }

    #[test]
    fn superoperator_matches_direct_application() {
        let rep = two_chain_symmetry().unwrap().half_pair;
        let chars = characters(rep.group());
        let m = CMat::from_fn(4, 4, |i, j| C64::new((i * 3 + j) as f64, (i as f64) - (j as f64)));
        for chi in &chars {
            let direct = apply_gamma(&rep, chi, &m).unwrap();
            let via = unvec_row_major(&(gamma_superoperator(&rep, chi) * crate::linalg::vec_row_major(&m)), 4, 4);
            assert!(fro_norm(&(direct - via)) < 1e-12);
        }
    }

    #[test]
    fn pauli_fixed_points_are_paulis() {
        let rep = pauli_rep();
        let [i, x, y, z] = paulis();
        for (label, target) in [("x", &x), ("y", &y), ("z", &z)] {
            let chi = klein_char(&rep, label);
            let w = fixed_point(&rep, &chi, 0).unwrap().unwrap();
            assert!(phase_distance(&w, target) < 1e-10, "{label}");
        }
        let w = fixed_point(&rep, &Character::trivial(4), 0).unwrap().unwrap();
        assert!(phase_distance(&w, &i) < 1e-12);
    }

    #[test]
    fn pauli_gate_table() {
        let table = gate_table(&pauli_rep()).unwrap();
        assert!(table.missing().is_empty());
        assert!(table.group_law_residual() < 1e-9);
        assert!(table.intertwining_residual() < 1e-9);
        assert!(table.alpha_modulus_residual() < 1e-12);
        assert!(phase_distance(table.entries[0].as_ref().unwrap(), &identity(2)) < 1e-12);
        assert!((table.entries[0].as_ref().unwrap()[(0, 0)] - ONE).norm() < 1e-12);
    }

    #[test]
    fn half_pair_gate_table_is_faithful() {
        let rep = two_chain_symmetry().unwrap().half_pair;
        let table = gate_table(&rep).unwrap();
        assert_eq!(table.characters.len(), 8);
        assert!(table.group_law_residual() < 1e-9);
        assert!(table.intertwining_residual() < 1e-9);
        let present: Vec<&CMat> = table.entries.iter().flatten().collect();
        for (a, wa) in present.iter().enumerate() {
            for wb in present.iter().skip(a + 1) {
                assert!(phase_distance(wa, wb) > 0.5);
            }
        }
    }

    #[test]
    fn projector_algebra() {
        assert!(check_projector_algebra(&pauli_rep()).max_residual < 1e-12);
        assert!(check_projector_algebra(&two_chain_symmetry().unwrap().half_pair).passed());
        let trivial_group = FiniteGroup::cyclic(1, "e");
        assert!(check_projector_algebra(&trivial_rep(&trivial_group, 2)).passed());
    }

    #[test]
    fn uniqueness_of_fixed_points() {
        for rep in [pauli_rep(), two_chain_symmetry().unwrap().half_pair] {
            for chi in characters(rep.group()) {
                assert!(fixed_space_dimension(&rep, &chi) <= 1);
            }
        }
    }

    #[test]
    fn reducible_rep_is_rejected() {
        let rep = pauli_rep();
        let doubled = rep.direct_sum(&rep).unwrap();
        assert_eq!(gate_table(&doubled).unwrap_err(), GateError::NotIrreducible);
    }
}
