//! `(U_g, V_g)`-symmetric MPS tensors.
//!
//! A tensor is a list of `d` matrices `A^i` of size `D×D`; `A^i_{αβ}` maps the
//! right virtual index `β` to the left virtual index `α`. The symmetry
//! condition is `V_g A^i V_g† = Σ_j A^j (U_g)_{ji}`, i.e.
//! `V_g A[ψ] V_g† = A[U_g ψ]` with `A[ψ] = Σ_i A^i ⟨i|ψ⟩`.
//!
//! For a basis state `|χ⟩` with `A[χ] = W_χ` a fixed point of `Γ_χ`,
//! `V_g W_χ V_g† = χ̄(g) W_χ`, so such states carry `U_g|χ⟩ = χ̄(g)|χ⟩`. The
//! built-in examples only involve real characters.

use alloc::vec::Vec;

use core::f64::consts::FRAC_1_SQRT_2;

use thiserror::Error;

use crate::gatechan::GateTable;
use crate::groups::FiniteGroup;
use crate::linalg::{c, cr, fro_norm, identity, kron, paulis, CMat, CVec, I, ONE, ZERO};
use crate::projrep::{pauli_rep, ProjectiveRep};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MpsError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("physical states are not orthonormal (residual {0:e})")]
    NonOrthonormalStates(f64),
}

#[derive(Debug, Clone)]
pub struct SymmetricMPSTensor {
    /// `A^i`, one `D×D` matrix per physical basis state.
    pub tensor: Vec<CMat>,
    /// `U_g` on the physical index, indexed like `v_rep`'s group.
    pub u_rep: Vec<CMat>,
    /// `V_g` on the virtual indices.
    pub v_rep: ProjectiveRep,
}

impl SymmetricMPSTensor {
    pub fn new(tensor: Vec<CMat>, u_rep: Vec<CMat>, v_rep: ProjectiveRep) -> Result<Self, MpsError> {
        let d = tensor.len();
        let dv = v_rep.dim();
        if d == 0 || tensor.iter().any(|a| a.nrows() != dv || a.ncols() != dv) {
            return Err(MpsError::ShapeMismatch("virtual matrices must match V_g"));
        }
        if u_rep.len() != v_rep.group().order() || u_rep.iter().any(|u| u.nrows() != d || u.ncols() != d) {
            return Err(MpsError::ShapeMismatch("U_g must be d×d for every group element"));
        }
        Ok(SymmetricMPSTensor { tensor, u_rep, v_rep })
    }

    pub fn phys_dim(&self) -> usize {
        self.tensor.len()
    }

    pub fn virt_dim(&self) -> usize {
        self.v_rep.dim()
    }

    pub fn group(&self) -> &FiniteGroup {
        self.v_rep.group()
    }

    /// `max_{g,i} ‖V_g A^i V_g† − Σ_j A^j (U_g)_{ji}‖`.
    pub fn symmetry_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for g in self.group().elements() {
            let v = self.v_rep.matrix(g);
            let u = &self.u_rep[g];
            for i in 0..self.phys_dim() {
                let lhs = v * &self.tensor[i] * v.adjoint();
                let mut rhs = CMat::zeros(self.virt_dim(), self.virt_dim());
                for (j, aj) in self.tensor.iter().enumerate() {
                    rhs += aj * u[(j, i)];
                }
                worst = worst.max(fro_norm(&(lhs - rhs)));
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_residual() < 1e-10
    }

    /// `max_{g,h} ‖U_g U_h − U_{gh}‖`.
    pub fn linearity_residual(&self) -> f64 {
        let grp = self.group();
        let mut worst: f64 = 0.0;
        for g in grp.elements() {
            for h in grp.elements() {
                worst = worst.max(fro_norm(&(&self.u_rep[g] * &self.u_rep[h] - &self.u_rep[grp.mul(g, h)])));
            }
        }
        worst
    }

    /// `A[ψ] = Σ_i A^i ⟨i|ψ⟩`.
    pub fn project_physical(&self, psi: &CVec) -> Result<CMat, MpsError> {
        if psi.len() != self.phys_dim() {
            return Err(MpsError::ShapeMismatch("state length must equal the physical dimension"));
        }
        let mut out = CMat::zeros(self.virt_dim(), self.virt_dim());
        for (a, &p) in self.tensor.iter().zip(psi.iter()) {
            out += a * p;
        }
        Ok(out)
    }

    /// `E = Σ_i A^i ⊗ Ā^i`.
    pub fn transfer_matrix(&self) -> CMat {
        let dv = self.virt_dim();
        let mut e = CMat::zeros(dv * dv, dv * dv);
        for a in &self.tensor {
            e += kron(a, &a.map(|z| z.conj()));
        }
        e
    }

    /// `max_g ‖(V_g⊗V̄_g) E (V_g⊗V̄_g)† − E‖`.
    pub fn transfer_symmetry_residual(&self) -> f64 {
        let e = self.transfer_matrix();
        self.group()
            .elements()
            .map(|g| {
                let v = self.v_rep.matrix(g);
                let vv = kron(v, &v.map(|z| z.conj()));
                fro_norm(&(&vv * &e * vv.adjoint() - &e))
            })
            .fold(0.0, f64::max)
    }

    /// Re-express the physical index in a new basis. Column `m` of `basis`
    /// holds the old basis state `|m⟩` in new coordinates; `basis` must be
    /// unitary.
    pub fn change_physical_basis(&self, basis: &CMat) -> Result<Self, MpsError> {
        let d = self.phys_dim();
        if basis.nrows() != d || basis.ncols() != d {
            return Err(MpsError::ShapeMismatch("basis change must be d×d"));
        }
        let tensor = (0..d)
            .map(|s| {
                let mut a = CMat::zeros(self.virt_dim(), self.virt_dim());
                for (m, am) in self.tensor.iter().enumerate() {
                    a += am * basis[(s, m)].conj();
                }
                a
            })
            .collect();
        let u_rep = self.u_rep.iter().map(|u| basis * u * basis.adjoint()).collect();
        SymmetricMPSTensor::new(tensor, u_rep, self.v_rep.clone())
    }
}

/// `A = Σ_χ W_χ ⊗ ⟨χ|` for the given (character index, physical state) pairs,
/// with `U_g = Σ_χ χ̄(g)|χ⟩⟨χ|` plus the identity on the complement of the
/// listed states.
pub fn from_fixed_points(gates: &GateTable, chi_states: &[(usize, CVec)]) -> Result<SymmetricMPSTensor, MpsError> {
    let d = chi_states.first().map(|(_, v)| v.len()).ok_or(MpsError::ShapeMismatch("no states given"))?;
    if chi_states.iter().any(|(_, v)| v.len() != d) {
        return Err(MpsError::ShapeMismatch("physical states differ in length"));
    }
    let mut gram_residual: f64 = 0.0;
    for (a, (_, va)) in chi_states.iter().enumerate() {
        for (b, (_, vb)) in chi_states.iter().enumerate() {
            let expect = if a == b { ONE } else { ZERO };
            gram_residual = gram_residual.max((va.dotc(vb) - expect).norm());
        }
    }
    if gram_residual > 1e-10 {
        return Err(MpsError::NonOrthonormalStates(gram_residual));
    }
    let dv = gates.rep.dim();
    let mut tensor = alloc::vec![CMat::zeros(dv, dv); d];
    for (k, psi) in chi_states {
        let w = gates.entries[*k].as_ref().ok_or(MpsError::ShapeMismatch("character has no fixed point"))?;
        for (i, a) in tensor.iter_mut().enumerate() {
            *a += w * psi[i].conj();
        }
    }
    let grp = gates.rep.group();
    let projector: CMat = chi_states.iter().fold(CMat::zeros(d, d), |acc, (_, v)| acc + v * v.adjoint());
    let complement = identity(d) - projector;
    let u_rep = grp
        .elements()
        .map(|g| {
            chi_states
                .iter()
                .fold(complement.clone(), |acc, (k, v)| acc + v * v.adjoint() * gates.characters[*k].value(g).conj())
        })
        .collect();
    SymmetricMPSTensor::new(tensor, u_rep, gates.rep.clone())
}

/// Klein-group element labels `x, y, z` as axis indices `0, 1, 2`.
fn klein_axis(label: &str) -> Option<usize> {
    match label {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        _ => None,
    }
}

/// The AKLT tensor `A = Σ_{m∈{x,y,z}} σᵐ ⊗ ⟨m|` in the Cartesian basis
/// `|x⟩, |y⟩, |z⟩` of zero-eigenvectors of `Sᵐ`. The π-rotation about `n̂`
/// acts diagonally with `χ_m(n) = +1` iff `m = n`.
pub fn aklt_tensor() -> SymmetricMPSTensor {
    let v_rep = pauli_rep();
    let [_, x, y, z] = paulis();
    let grp = v_rep.group().clone();
    let u_rep = grp
        .labels()
        .iter()
        .map(|l| match klein_axis(l) {
            None => identity(3),
            Some(n) => CMat::from_fn(3, 3, |i, j| if i != j { ZERO } else if i == n { ONE } else { -ONE }),
        })
        .collect();
    SymmetricMPSTensor::new(alloc::vec![x, y, z], u_rep, v_rep).expect("AKLT shapes")
}

/// Columns: `|x⟩, |y⟩, |z⟩` in the `Sᶻ` basis `|+1⟩, |0⟩, |−1⟩`:
/// `|x⟩ = (|−1⟩ − |+1⟩)/√2`, `|y⟩ = i(|−1⟩ + |+1⟩)/√2`, `|z⟩ = |0⟩`.
pub fn cartesian_to_sz() -> CMat {
    let s = FRAC_1_SQRT_2;
    CMat::from_columns(&[
        CVec::from_vec(alloc::vec![cr(-s), ZERO, cr(s)]),
        CVec::from_vec(alloc::vec![c(0.0, s), ZERO, c(0.0, s)]),
        CVec::from_vec(alloc::vec![ZERO, ONE, ZERO]),
    ])
}

/// The AKLT tensor with its physical index in the `Sᶻ` basis; there `U_g`
/// are the spin-1 π-rotations `exp(iπSᵐ)`.
pub fn aklt_tensor_sz() -> SymmetricMPSTensor {
    aklt_tensor().change_physical_basis(&cartesian_to_sz()).expect("unitary basis change")
}

/// The cluster tensor `A = 𝟙⊗⟨++| + σˣ⊗⟨+−| + σᶻ⊗⟨−+| − iσʸ⊗⟨−−|` on the
/// grouped pair basis `|++⟩, |+−⟩, |−+⟩, |−−⟩` (σˣ eigenstates). The Klein
/// element `x` is `σˣ⊗𝟙` (with `V = σˣ`), `z` is `𝟙⊗σˣ` (with `V = σᶻ`).
pub fn cluster_tensor() -> SymmetricMPSTensor {
    let v_rep = pauli_rep();
    let [i, x, y, z] = paulis();
    let grp = v_rep.group().clone();
    // Signs of σˣ on the first and second spin for |++⟩, |+−⟩, |−+⟩, |−−⟩.
    let first = [1.0, 1.0, -1.0, -1.0];
    let second = [1.0, -1.0, 1.0, -1.0];
    let u_rep = grp
        .labels()
        .iter()
        .map(|l| {
            let signs: [f64; 4] = core::array::from_fn(|k| match l.as_str() {
                "x" => first[k],
                "z" => second[k],
                "y" => first[k] * second[k],
                _ => 1.0,
            });
            CMat::from_diagonal(&CVec::from_iterator(4, signs.iter().map(|&s| cr(s))))
        })
        .collect();
    SymmetricMPSTensor::new(alloc::vec![i, x, z, y * (-I)], u_rep, v_rep).expect("cluster shapes")
}

/// Basis vector `e_k` of length `d`.
pub fn basis_state(d: usize, k: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[k] = ONE;
    v
}

/// Index of the Klein character whose kernel is `{e, m}`.
pub fn klein_character_index(gates: &GateTable, label: &str) -> Option<usize> {
    let grp = gates.rep.group();
    let m = grp.element(label)?;
    gates.characters.iter().position(|c| !c.is_trivial() && c.kernel().contains(&m))
}

/// Per-state phase distance between two tensors: `max_i min_φ ‖A^i − e^{iφ}B^i‖`.
pub fn tensor_phase_distance(a: &SymmetricMPSTensor, b: &SymmetricMPSTensor) -> f64 {
    a.tensor.iter().zip(&b.tensor).map(|(x, y)| crate::linalg::phase_distance(x, y)).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gatechan::{apply_gamma, fixed_point, gate_table};
    use crate::groups::characters;
    use crate::linalg::{phase_distance, unitarity_residual};
    use crate::spin;

    #[test]
    fn builtin_tensors_are_symmetric() {
        for t in [aklt_tensor(), aklt_tensor_sz(), cluster_tensor()] {
            assert!(t.symmetry_residual() < 1e-12);
            assert!(t.linearity_residual() < 1e-12);
            assert!(t.transfer_symmetry_residual() < 1e-12);
        }
    }

    #[test]
    fn flipped_sign_breaks_symmetry() {
        // Negating a whole matrix keeps the condition; negating one entry of σʸ
        // turns it into iσˣ, which transforms with the wrong character.
        let mut t = aklt_tensor();
        t.tensor[1] = -t.tensor[1].clone();
        assert!(t.is_symmetric());
        let mut t = aklt_tensor();
        t.tensor[1][(0, 1)] = -t.tensor[1][(0, 1)];
        assert!(!t.is_symmetric());
        assert!(t.symmetry_residual() > 1.0);
    }

    #[test]
    fn cartesian_basis_is_the_spin1_zero_eigenbasis() {
        let c = cartesian_to_sz();
        assert!(unitarity_residual(&c) < 1e-14);
        let s = spin::spin1();
        for (m, sm) in s.iter().enumerate() {
            let col = c.column(m).into_owned();
            assert!((sm * col).norm() < 1e-14);
        }
        let t = aklt_tensor_sz();
        let g = t.group();
        for (label, axis) in [("x", [1.0, 0.0, 0.0]), ("y", [0.0, 1.0, 0.0]), ("z", [0.0, 0.0, 1.0])] {
            let r = spin::rotation(&s, axis, core::f64::consts::PI);
            assert!(fro_norm(&(&t.u_rep[g.element(label).unwrap()] - r)) < 1e-12, "{label}");
        }
    }

    #[test]
    fn projections() {
        let [i, x, y, z] = paulis();
        let aklt = aklt_tensor();
        assert!(fro_norm(&(aklt.project_physical(&basis_state(3, 2)).unwrap() - &z)) < 1e-15);
        assert!(fro_norm(&(aklt.project_physical(&basis_state(3, 0)).unwrap() - &x)) < 1e-15);
        assert!(fro_norm(&aklt.project_physical(&CVec::zeros(3)).unwrap()) == 0.0);
        let cl = cluster_tensor();
        assert!(fro_norm(&(cl.project_physical(&basis_state(4, 1)).unwrap() - &x)) < 1e-15);
        assert!(fro_norm(&(cl.project_physical(&basis_state(4, 3)).unwrap() - y * (-I))) < 1e-15);
        assert!(fro_norm(&(cl.project_physical(&basis_state(4, 0)).unwrap() - i)) < 1e-15);
        assert!(matches!(cl.project_physical(&CVec::zeros(3)), Err(MpsError::ShapeMismatch(_))));
    }

    #[test]
    fn cluster_states_carry_distinct_characters() {
        let cl = cluster_tensor();
        let g = cl.group();
        let mut seen = Vec::new();
        for k in 0..4 {
            let values: Vec<f64> = g.elements().map(|e| cl.u_rep[e][(k, k)].re).collect();
            assert!(!seen.contains(&values));
            seen.push(values);
        }
    }

    #[test]
    fn fixed_points_match_projections() {
        let aklt = aklt_tensor();
        let chars = characters(aklt.group());
        for chi in &chars {
            // The projection onto the state carrying χ is a Γ_χ fixed point.
            for k in 0..3 {
                let a = aklt.project_physical(&basis_state(3, k)).unwrap();
                let carries = aklt.group().elements().all(|g| (aklt.u_rep[g][(k, k)] - chi.value(g).conj()).norm() < 1e-12);
                if carries {
                    assert!(fro_norm(&(apply_gamma(&aklt.v_rep, chi, &a).unwrap() - &a)) < 1e-10);
                    let w = fixed_point(&aklt.v_rep, chi, 0).unwrap().unwrap();
                    assert!(phase_distance(&w, &a) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn round_trip_through_gate_table() {
        let table = gate_table(&pauli_rep()).unwrap();
        let aklt_states: Vec<(usize, CVec)> =
            ["x", "y", "z"].iter().enumerate().map(|(k, l)| (klein_character_index(&table, l).unwrap(), basis_state(3, k))).collect();
        let rebuilt = from_fixed_points(&table, &aklt_states).unwrap();
        assert!(rebuilt.is_symmetric());
        assert!(tensor_phase_distance(&rebuilt, &aklt_tensor()) < 1e-10);

        let cluster_states: Vec<(usize, CVec)> = [(0usize, None), (1, Some("x")), (2, Some("z")), (3, Some("y"))]
            .iter()
            .map(|&(k, l)| (l.map(|l| klein_character_index(&table, l).unwrap()).unwrap_or(0), basis_state(4, k)))
            .collect();
        let rebuilt = from_fixed_points(&table, &cluster_states).unwrap();
        assert!(rebuilt.is_symmetric());
        assert!(tensor_phase_distance(&rebuilt, &cluster_tensor()) < 1e-10);
    }

    #[test]
    fn trivial_character_gives_product_tensor() {
        let table = gate_table(&pauli_rep()).unwrap();
        let t = from_fixed_points(&table, &[(0, basis_state(1, 0))]).unwrap();
        assert!(t.is_symmetric());
        assert!(phase_distance(&t.tensor[0], &identity(2)) < 1e-12);
    }

    #[test]
    fn non_orthonormal_states_are_rejected() {
        let table = gate_table(&pauli_rep()).unwrap();
        let v = basis_state(3, 0);
        assert!(matches!(from_fixed_points(&table, &[(1, v.clone()), (2, v)]), Err(MpsError::NonOrthonormalStates(_))));
    }
}
