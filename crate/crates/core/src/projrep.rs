//! Projective representations, factor systems and cohomology-class tests.
//!
//! A projective representation assigns a unitary `V_g` to every group element
//! such that `V_g V_h = ω(g,h) V_{gh}` for unit phases `ω`. The factor system
//! `ω` is determined up to the coboundaries `β(g)β(h)/β(gh)` coming from
//! rephasing each `V_g`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;

use thiserror::Error;

use crate::groups::{center, FiniteGroup, GroupError};
use crate::linalg::{cis, eigh, identity, kron, proportionality, unitarity_residual, CMat, C64, ONE, ZERO};
use crate::spin;

/// Tolerance for unitarity and projective closure.
pub const CLOSURE_TOL: f64 = 1e-10;
/// Separation from `|G|` required of a `φ_ω` certificate.
pub const CERTIFICATE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjRepError {
    #[error("expected {expected} matrices of size {dim}x{dim}, got a mismatch at element {element}")]
    DimensionMismatch { expected: usize, dim: usize, element: usize },
    #[error("matrix of element {element} is not unitary (residual {residual:e})")]
    NotUnitary { element: usize, residual: f64 },
    #[error("V_{g} V_{h} is not proportional to V_{{gh}} (residual {residual:e})")]
    NotProjective { g: usize, h: usize, residual: f64 },
    #[error("factor system value at ({g},{h}) is not a root of unity of order dividing {modulus}")]
    NotRootOfUnity { g: usize, h: usize, modulus: usize },
    #[error("factor systems belong to different groups")]
    GroupMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Unitary matrices indexed by the elements of a finite group, closed under
/// multiplication up to phases.
#[derive(Debug, Clone)]
pub struct ProjectiveRep {
    group: FiniteGroup,
    dim: usize,
    matrices: Vec<CMat>,
}

impl ProjectiveRep {
    /// Validate unitarity and projective closure.
    pub fn new(group: FiniteGroup, matrices: Vec<CMat>) -> Result<Self, ProjRepError> {
        let dim = matrices.first().map(|m| m.nrows()).unwrap_or(0);
        if matrices.len() != group.order() {
            return Err(ProjRepError::DimensionMismatch { expected: group.order(), dim, element: matrices.len() });
        }
        for (g, m) in matrices.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim || dim == 0 {
                return Err(ProjRepError::DimensionMismatch { expected: group.order(), dim, element: g });
            }
            let residual = unitarity_residual(m);
            if residual > CLOSURE_TOL {
                return Err(ProjRepError::NotUnitary { element: g, residual });
            }
        }
        let rep = ProjectiveRep { group, dim, matrices };
        rep.factor_system()?;
        Ok(rep)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &CMat {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    /// The factor system `ω(g,h)` with `V_g V_h = ω(g,h) V_{gh}`.
    pub fn factor_system(&self) -> Result<FactorSystem, ProjRepError> {
        let n = self.group.order();
        let mut omega = vec![ONE; n * n];
        for g in 0..n {
            for h in 0..n {
                let prod = &self.matrices[g] * &self.matrices[h];
                let (coeff, residual) = proportionality(&prod, &self.matrices[self.group.mul(g, h)]);
                if residual > CLOSURE_TOL * (self.dim as f64).max(1.0) || (coeff.norm() - 1.0).abs() > CLOSURE_TOL {
                    return Err(ProjRepError::NotProjective { g, h, residual });
                }
                omega[g * n + h] = coeff / coeff.norm();
            }
        }
        Ok(FactorSystem { group: self.group.clone(), omega })
    }

    /// Multiply every `V_g` by the phase `β(g)`.
    pub fn rephased(&self, beta: &GaugeFunction) -> ProjectiveRep {
        let matrices = self.matrices.iter().zip(&beta.values).map(|(m, &b)| m * b).collect();
        ProjectiveRep { group: self.group.clone(), dim: self.dim, matrices }
    }

    /// Rephase each `V_g` to unit determinant (choosing the principal root),
    /// which places every factor-system value on the `dim`-th roots of unity.
    pub fn det_normalized(&self) -> ProjectiveRep {
        let d = self.dim as f64;
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                let det = m.clone().determinant();
                m * cis(-det.arg() / d)
            })
            .collect();
        ProjectiveRep { group: self.group.clone(), dim: self.dim, matrices }
    }

    /// Block-diagonal direct sum with another representation of the same group.
    pub fn direct_sum(&self, other: &ProjectiveRep) -> Result<ProjectiveRep, ProjRepError> {
        if self.group != other.group {
            return Err(ProjRepError::GroupMismatch);
        }
        let (a, b) = (self.dim, other.dim);
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(x, y)| {
                let mut m = CMat::zeros(a + b, a + b);
                m.view_mut((0, 0), (a, a)).copy_from(x);
                m.view_mut((a, a), (b, b)).copy_from(y);
                m
            })
            .collect();
        ProjectiveRep::new(self.group.clone(), matrices)
    }

    /// Dimension of the commutant `{M : M V_g = V_g M ∀g}`.
    pub fn commutant_dimension(&self) -> usize {
        let d = self.dim;
        let id = identity(d);
        let mut gram = CMat::zeros(d * d, d * d);
        for v in &self.matrices {
            // Row-major vec: vec(VM) = (V⊗I)vec(M), vec(MV) = (I⊗Vᵀ)vec(M).
            let a = kron(v, &id) - kron(&id, &v.transpose());
            gram += a.adjoint() * a;
        }
        let (vals, _) = eigh(&gram);
        let scale = vals.last().copied().unwrap_or(0.0).max(1.0);
        vals.iter().filter(|&&x| x.abs() <= 1e-9 * scale).count()
    }

    /// Schur's criterion: the commutant consists of scalars only.
    pub fn is_irreducible(&self) -> bool {
        self.commutant_dimension() == 1
    }
}

/// `ω(g,h)` for every ordered pair, row-major in `(g, h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSystem {
    group: FiniteGroup,
    omega: Vec<C64>,
}

impl FactorSystem {
    pub fn trivial(group: &FiniteGroup) -> Self {
        FactorSystem { group: group.clone(), omega: vec![ONE; group.order() * group.order()] }
    }

    /// Wrap a table of phases; `omega[g][h] = ω(g,h)`.
    pub fn from_table(group: &FiniteGroup, omega: Vec<Vec<C64>>) -> Self {
        FactorSystem { group: group.clone(), omega: omega.into_iter().flatten().collect() }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    #[inline]
    pub fn get(&self, g: usize, h: usize) -> C64 {
        self.omega[g * self.group.order() + h]
    }

    /// Largest violation of `ω(g,h)ω(gh,k) = ω(h,k)ω(g,hk)` over all triples.
    pub fn cocycle_residual(&self) -> f64 {
        let grp = &self.group;
        let mut worst: f64 = 0.0;
        for g in grp.elements() {
            for h in grp.elements() {
                for k in grp.elements() {
                    let lhs = self.get(g, h) * self.get(grp.mul(g, h), k);
                    let rhs = self.get(h, k) * self.get(g, grp.mul(h, k));
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }

    /// Largest deviation of `|ω(g,h)|` from one.
    pub fn modulus_residual(&self) -> f64 {
        self.omega.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Phase exponents `k` with `ω = exp(2πik/modulus)`, or an error if some
    /// value is off that lattice by more than `1e-8`.
    pub fn exponents(&self, modulus: usize) -> Result<Vec<usize>, ProjRepError> {
        let n = self.group.order();
        let mut out = Vec::with_capacity(n * n);
        for (idx, z) in self.omega.iter().enumerate() {
            let k = (z.arg() * modulus as f64 / (2.0 * PI)).round();
            let k = k.rem_euclid(modulus as f64) as usize;
            if (cis(2.0 * PI * k as f64 / modulus as f64) - z).norm() > 1e-8 {
                return Err(ProjRepError::NotRootOfUnity { g: idx / n, h: idx % n, modulus });
            }
            out.push(k);
        }
        Ok(out)
    }

    /// Pointwise product `ω·ν̄`.
    pub fn ratio(&self, other: &FactorSystem) -> Result<FactorSystem, ProjRepError> {
        if self.group != other.group {
            return Err(ProjRepError::GroupMismatch);
        }
        let omega = self.omega.iter().zip(&other.omega).map(|(a, b)| a * b.conj()).collect();
        Ok(FactorSystem { group: self.group.clone(), omega })
    }

    /// Human-readable table with rows `g`, columns `h`.
    pub fn pretty(&self) -> String {
        let grp = &self.group;
        let width = grp.labels().iter().map(|l| l.chars().count()).max().unwrap_or(1).max(3);
        let mut out = format!("{:>width$} |", "ω");
        for h in grp.elements() {
            out.push_str(&format!(" {:>width$}", grp.label(h)));
        }
        out.push('\n');
        for g in grp.elements() {
            out.push_str(&format!("{:>width$} |", grp.label(g)));
            for h in grp.elements() {
                out.push_str(&format!(" {:>width$}", phase_label(self.get(g, h))));
            }
            out.push('\n');
        }
        out
    }
}

/// `1`, `-1`, `i`, `-i` for quarter-turn phases, otherwise `e^{iπ·x}`.
pub fn phase_label(z: C64) -> String {
    const TABLE: [(f64, f64, &str); 4] = [(1.0, 0.0, "1"), (-1.0, 0.0, "-1"), (0.0, 1.0, "i"), (0.0, -1.0, "-i")];
    for (re, im, s) in TABLE {
        if (z - C64::new(re, im)).norm() < 1e-9 {
            return s.into();
        }
    }
    format!("e^{{iπ·{:.4}}}", z.arg() / PI)
}

/// A phase `β(g)` per group element.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFunction {
    pub values: Vec<C64>,
}

impl GaugeFunction {
    /// Phases `exp(2πi·k_g/modulus)`.
    pub fn from_exponents(exponents: &[usize], modulus: usize) -> Self {
        GaugeFunction { values: exponents.iter().map(|&k| cis(2.0 * PI * k as f64 / modulus as f64)).collect() }
    }

    pub fn from_angles(angles: &[f64]) -> Self {
        GaugeFunction { values: angles.iter().map(|&a| cis(a)).collect() }
    }
}

/// `φ_ω(a) = Σ_b ω(a,b) ω*(b,a)`.
pub fn phi(omega: &FactorSystem, a: usize) -> C64 {
    omega.group.elements().fold(ZERO, |acc, b| acc + omega.get(a, b) * omega.get(b, a).conj())
}

/// A central element whose `φ_ω` differs from `|G|`, which certifies that `ω`
/// is not a coboundary. `None` is inconclusive.
pub fn nontriviality_certificate(omega: &FactorSystem) -> Option<usize> {
    let n = omega.group.order() as f64;
    center(&omega.group).members.into_iter().find(|&a| (phi(omega, a) - C64::new(n, 0.0)).norm() > CERTIFICATE_TOL)
}

/// `ω'(g,h) = ω(g,h) β(g)β(h)/β(gh)`.
pub fn gauge_transform(omega: &FactorSystem, beta: &GaugeFunction) -> FactorSystem {
    let grp = &omega.group;
    let n = grp.order();
    let mut out = omega.omega.clone();
    for g in 0..n {
        for h in 0..n {
            out[g * n + h] *= beta.values[g] * beta.values[h] * beta.values[grp.mul(g, h)].conj();
        }
    }
    FactorSystem { group: grp.clone(), omega: out }
}

/// Whether `ω/ν` is a coboundary.
///
/// Both systems must take values in the `2|G|`-th roots of unity. Writing
/// `ω/ν = exp(2πi r/n)`, the question is whether
/// `b(g) + b(h) − b(gh) ≡ r(g,h) (mod n)` has a real solution `b`. After
/// integer row reduction with unimodular operations the nonzero rows can match
/// any right-hand side, so the system is solvable iff every transformed
/// right-hand side on a zero row vanishes modulo `n`.
pub fn are_equivalent(omega: &FactorSystem, nu: &FactorSystem) -> Result<bool, ProjRepError> {
    let grp = omega.group.clone();
    let n = grp.order();
    let modulus = 2 * n;
    let r = omega.ratio(nu)?.exponents(modulus)?;
    omega.exponents(modulus)?;
    nu.exponents(modulus)?;

    let m = modulus as i64;
    let mut rows: Vec<(Vec<i64>, i64)> = Vec::with_capacity(n * n);
    for g in 0..n {
        for h in 0..n {
            let mut row = vec![0i64; n];
            row[g] += 1;
            row[h] += 1;
            row[grp.mul(g, h)] -= 1;
            rows.push((row, r[g * n + h] as i64));
        }
    }
    let rank = integer_row_echelon(&mut rows, m);
    Ok(rows[rank..].iter().all(|(_, rhs)| rhs.rem_euclid(m) == 0))
}

/// In-place integer row echelon form via Euclidean row operations (all
/// unimodular). Right-hand sides are carried modulo `m`. Returns the rank.
fn integer_row_echelon(rows: &mut [(Vec<i64>, i64)], m: i64) -> usize {
    let cols = rows.first().map(|r| r.0.len()).unwrap_or(0);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows.len() {
            break;
        }
        loop {
            // Smallest nonzero magnitude in this column at or below pivot_row.
            let best = (pivot_row..rows.len()).filter(|&i| rows[i].0[col] != 0).min_by_key(|&i| rows[i].0[col].abs());
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let p = rows[pivot_row].0[col];
            let mut done = true;
            for i in pivot_row + 1..rows.len() {
                let q = rows[i].0[col].div_euclid(p);
                if q != 0 {
                    let (prow, prhs) = rows[pivot_row].clone();
                    for (x, y) in rows[i].0.iter_mut().zip(&prow) {
                        *x -= q * y;
                    }
                    rows[i].1 = (rows[i].1 - q * prhs).rem_euclid(m);
                }
                if rows[i].0[col] != 0 {
                    done = false;
                }
            }
            if done {
                pivot_row += 1;
                break;
            }
        }
    }
    pivot_row
}

/// `e ↦ I, x ↦ σˣ, y ↦ σʸ, z ↦ σᶻ` on the Klein group.
pub fn pauli_rep() -> ProjectiveRep {
    let g = FiniteGroup::klein();
    let [i, x, y, z] = crate::linalg::paulis();
    let by_label = |l: &str| match l {
        "e" => i.clone(),
        "x" => x.clone(),
        "y" => y.clone(),
        _ => z.clone(),
    };
    let mats = g.labels().iter().map(|l| by_label(l)).collect();
    ProjectiveRep::new(g, mats).expect("Pauli matrices form a projective representation")
}

/// `g ↦ I_dim`.
pub fn trivial_rep(group: &FiniteGroup, dim: usize) -> ProjectiveRep {
    ProjectiveRep::new(group.clone(), vec![identity(dim); group.order()]).expect("identity representation")
}

/// The symmetry group of the two-chain coupling, realized by joint rotations
/// of a spin pair, together with its linear spin-1 pair representation and the
/// spin-½ pair projective representation.
#[derive(Debug, Clone)]
pub struct TwoChainSymmetry {
    /// Element labels are shortest words in `α`, `β`.
    pub group: FiniteGroup,
    /// `9×9` spin-1⊗spin-1 rotation operators (a linear representation).
    pub spin1_pair: Vec<CMat>,
    /// `4×4` spin-½⊗spin-½ rotation operators built from the same words.
    pub half_pair: ProjectiveRep,
}

/// Close the generators `α = (√Rᶻ, Rˣ)` and `β = (Rᵘ, Rᵘ)` with
/// `û = (x̂+ŷ)/√2`. Elements are identified by their faithful spin-1 images;
/// spin-½ operators follow the same words.
pub fn two_chain_symmetry() -> Result<TwoChainSymmetry, ProjRepError> {
    let s1 = spin::spin1();
    let sh = spin::spin_half();
    let u = [core::f64::consts::FRAC_1_SQRT_2, core::f64::consts::FRAC_1_SQRT_2, 0.0];
    let (x, z) = ([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]);
    let pair = |s: &[CMat; 3], n1, t1, n2, t2| kron(&spin::rotation(s, n1, t1), &spin::rotation(s, n2, t2));
    let alpha = (pair(&s1, z, PI / 2.0, x, PI), pair(&sh, z, PI / 2.0, x, PI));
    let beta = (pair(&s1, u, PI, u, PI), pair(&sh, u, PI, u, PI));
    let id = (identity(9), identity(4));
    let (group, elems) = FiniteGroup::generated_by(
        id,
        &[alpha, beta],
        &["α", "β"],
        |a, b| (&a.0 * &b.0, &a.1 * &b.1),
        |a, b| crate::linalg::max_abs(&(&a.0 - &b.0)) < 1e-9,
        64,
    )?;
    let (spin1_pair, half): (Vec<CMat>, Vec<CMat>) = elems.into_iter().unzip();
    let half_pair = ProjectiveRep::new(group.clone(), half)?;
    Ok(TwoChainSymmetry { group, spin1_pair, half_pair })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_named_group, derived_subgroup, is_isomorphic};
    use crate::linalg::{cr, I};

    #[test]
    fn pauli_factor_table() {
        let rep = pauli_rep();
        let w = rep.factor_system().unwrap();
        let g = rep.group();
        let e = |l: &str| g.element(l).unwrap();
        assert!((w.get(e("x"), e("y")) - I).norm() < 1e-12);
        assert!((w.get(e("y"), e("x")) + I).norm() < 1e-12);
        assert!((w.get(e("z"), e("x")) - I).norm() < 1e-12);
        assert!((w.get(e("x"), e("z")) + I).norm() < 1e-12);
        assert!((w.get(e("y"), e("z")) - I).norm() < 1e-12);
        assert!((w.get(e("z"), e("y")) + I).norm() < 1e-12);
        for a in g.elements() {
            assert!((w.get(a, a) - ONE).norm() < 1e-12);
        }
        assert!(w.cocycle_residual() < 1e-12);
    }

    #[test]
    fn phi_values() {
        let rep = pauli_rep();
        let w = rep.factor_system().unwrap();
        for a in rep.group().elements() {
            let expected = if a == rep.group().identity() { 4.0 } else { 0.0 };
            assert!((phi(&w, a) - cr(expected)).norm() < 1e-12);
        }
        let triv = FactorSystem::trivial(rep.group());
        assert!((phi(&triv, 1) - cr(4.0)).norm() < 1e-12);
        assert!(nontriviality_certificate(&w).is_some());
        assert!(nontriviality_certificate(&triv).is_none());
    }

    #[test]
    fn equivalence_on_the_lattice() {
        let rep = pauli_rep();
        let w = rep.factor_system().unwrap();
        let triv = FactorSystem::trivial(rep.group());
        assert!(are_equivalent(&w, &w).unwrap());
        assert!(!are_equivalent(&w, &triv).unwrap());
        let beta = GaugeFunction::from_exponents(&[0, 3, 5, 6], 8);
        assert!(are_equivalent(&w, &gauge_transform(&w, &beta)).unwrap());
        assert!(are_equivalent(&triv, &gauge_transform(&triv, &beta)).unwrap());
        let off = GaugeFunction::from_angles(&[0.0, 0.1, 0.2, 0.3]);
        assert!(matches!(are_equivalent(&w, &gauge_transform(&w, &off)), Err(ProjRepError::NotRootOfUnity { .. })));
    }

    #[test]
    fn irreducibility() {
        let rep = pauli_rep();
        assert!(rep.is_irreducible());
        let doubled = rep.direct_sum(&rep).unwrap();
        assert!(!doubled.is_irreducible());
        assert_eq!(doubled.commutant_dimension(), 4);
        assert!(!trivial_rep(rep.group(), 2).is_irreducible());
    }

    #[test]
    fn rephasing_matches_gauge_transform() {
        let rep = pauli_rep();
        let beta = GaugeFunction::from_angles(&[0.3, -1.2, 2.5, 0.7]);
        let lhs = rep.rephased(&beta).factor_system().unwrap();
        let rhs = gauge_transform(&rep.factor_system().unwrap(), &beta);
        for g in 0..4 {
            for h in 0..4 {
                assert!((lhs.get(g, h) - rhs.get(g, h)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn non_projective_input_is_rejected() {
        let g = FiniteGroup::klein();
        let [i, x, _, z] = crate::linalg::paulis();
        let mats = alloc::vec![i.clone(), x, i, z];
        assert!(matches!(ProjectiveRep::new(g, mats), Err(ProjRepError::NotProjective { .. })));
    }

    #[test]
    fn two_chain_group_is_d2_semidirect_z4() {
        let sym = two_chain_symmetry().unwrap();
        let abstract_g2 = build_named_group("D2_semidirect_Z4").unwrap();
        assert_eq!(sym.group.order(), 16);
        assert!(is_isomorphic(&sym.group, &abstract_g2));
        // Same generator words label the same elements in both groups.
        for a in sym.group.elements() {
            for b in sym.group.elements() {
                let ab = sym.group.label(sym.group.mul(a, b));
                let (a2, b2) = (abstract_g2.element(sym.group.label(a)).unwrap(), abstract_g2.element(sym.group.label(b)).unwrap());
                assert_eq!(abstract_g2.label(abstract_g2.mul(a2, b2)), ab);
            }
        }
        // The derived subgroup is {1, (Rᶻ, Rᶻ)}.
        let d = derived_subgroup(&sym.group);
        let nontrivial = d.members.iter().find(|&&m| m != sym.group.identity()).copied().unwrap();
        let s1 = spin::spin1();
        let rz = spin::rotation(&s1, [0.0, 0.0, 1.0], PI);
        assert!(crate::linalg::max_abs(&(&sym.spin1_pair[nontrivial] - kron(&rz, &rz))) < 1e-10);
    }

    #[test]
    fn half_pair_is_irreducible_and_nontrivial() {
        let sym = two_chain_symmetry().unwrap();
        let rep = &sym.half_pair;
        assert!(rep.is_irreducible());
        let w = rep.factor_system().unwrap();
        assert!(w.cocycle_residual() < 1e-10);
        let z = center(&sym.group);
        let mut zeros = 0;
        for &a in &z.members {
            if a != sym.group.identity() {
                assert!(phi(&w, a).norm() < 1e-9);
                zeros += 1;
            }
        }
        assert_eq!(zeros, 3);
        assert!(nontriviality_certificate(&w).is_some());
        let normalized = rep.det_normalized().factor_system().unwrap();
        assert!(!are_equivalent(&normalized, &FactorSystem::trivial(&sym.group)).unwrap());
    }
}
