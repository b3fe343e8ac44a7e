//! Chain Hamiltonians, conserved operators and the gate protocols built from them.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::vec3::{self, V3};
use crate::linalg::{cr, from_rows, identity, kron, pauli_dot, CMat, CVec, C64, I, ONE};
use crate::spin::{self, along};

use super::layout::{ChainLayout, OperatorTerm, ProductOperator, SpinSite, DEFAULT_DIM_CAP};
use super::schedule::{Schedule, ScheduledHamiltonian};
use super::transport::LogicalQubit;
use super::ChainError;

const AXIS_TOL: f64 = 1e-9;

fn check_axis(n: V3) -> Result<V3, ChainError> {
    if vec3::is_unit(n, AXIS_TOL) {
        Ok(n)
    } else {
        Err(ChainError::AxisNotUnit)
    }
}

/// A deterministic unit vector orthogonal to `n`.
fn perpendicular(n: V3) -> V3 {
    let k = (0..3).min_by(|&a, &b| n[a].abs().total_cmp(&n[b].abs())).unwrap_or(0);
    let mut e = [0.0; 3];
    e[k] = 1.0;
    vec3::normalized(vec3::cross(n, e))
}

fn dot_spins(a: &[CMat; 3], b: &[CMat; 3]) -> CMat {
    kron(&a[0], &b[0]) + kron(&a[1], &b[1]) + kron(&a[2], &b[2])
}

/// `J(S⃗_i·S⃗_j − β(S⃗_i·S⃗_j)²)` on two spin-1 sites.
pub fn bond_term(i: usize, j: usize, beta: f64, coupling: f64) -> OperatorTerm {
    let s = spin::spin1();
    let ss = dot_spins(&s, &s);
    let m = (&ss - &ss * &ss * cr(beta)) * cr(coupling);
    OperatorTerm { support: vec![i, j], matrix: m, label: format!("H[{i},{j}]") }
}

/// `J S⃗_i·s⃗_j` between a spin-1 site and a spin-½ site.
pub fn edge_term(i: usize, j: usize, coupling: f64) -> OperatorTerm {
    let m = dot_spins(&spin::spin1(), &spin::spin_half()) * cr(coupling);
    OperatorTerm { support: vec![i, j], matrix: m, label: format!("edge[{i},{j}]") }
}

fn beta_warning(beta: f64) -> Option<String> {
    (!(beta > -1.0 && beta < 1.0)).then(|| format!("beta = {beta} lies outside the Haldane range (-1, 1)"))
}

/// Bulk terms of the bilinear-biquadratic chain on spin-1 sites `0..n`.
pub fn haldane_hamiltonian(n: usize, coupling: f64, beta: f64) -> Result<Vec<OperatorTerm>, ChainError> {
    if n < 2 {
        return Err(ChainError::BadChainLength(n));
    }
    Ok((0..n - 1).map(|i| bond_term(i, i + 1, beta, coupling)).collect())
}

/// `n` spin-1 sites followed by a spin-½ coupled to site `n − 1`.
#[derive(Debug, Clone)]
pub struct EdgeChain {
    pub layout: ChainLayout,
    pub n: usize,
    pub bonds: Vec<OperatorTerm>,
    pub edge: OperatorTerm,
    pub warnings: Vec<String>,
}

impl EdgeChain {
    pub fn terms(&self) -> Vec<OperatorTerm> {
        let mut t = self.bonds.clone();
        t.push(self.edge.clone());
        t
    }
}

pub fn edge_coupled_chain(n: usize, coupling: f64, beta: f64) -> Result<EdgeChain, ChainError> {
    let bonds = haldane_hamiltonian(n, coupling, beta)?;
    let mut sites = vec![SpinSite::One; n];
    sites.push(SpinSite::Half);
    let layout = ChainLayout::new(sites, DEFAULT_DIM_CAP)?;
    Ok(EdgeChain { layout, n, bonds, edge: edge_term(n - 1, n, coupling), warnings: beta_warning(beta).into_iter().collect() })
}

/// `J(S⃗^m̂)²` on one spin-1 site; its unique ground state is `|S^m̂ = 0⟩`.
pub fn uniform_field_term(site: usize, axis: V3, coupling: f64) -> Result<OperatorTerm, ChainError> {
    let a = along(&spin::spin1(), check_axis(axis)?);
    Ok(OperatorTerm { support: vec![site], matrix: &a * &a * cr(coupling), label: format!("F[{site}]") })
}

/// `⊗_s exp(iθ n̂·S⃗_s)` over the listed sites, each with its own spin.
pub fn rotation_operator(layout: &ChainLayout, sites: &[usize], axis: V3, angle: f64, label: impl Into<String>) -> ProductOperator {
    let factors = sites.iter().map(|&s| (s, spin::rotation(&layout.sites()[s].spin_operators(), axis, angle))).collect();
    ProductOperator::new(ONE, factors, label)
}

/// `Σ^m̂` over the last `extent` spin-1 sites of the chain occupying sites
/// `start..start + n` and its spin-½ at `start + n`.
fn chain_sigma(layout: &ChainLayout, start: usize, n: usize, axis: V3, extent: usize) -> Result<ProductOperator, ChainError> {
    let axis = check_axis(axis)?;
    if extent > n || start + n >= layout.len() || layout.sites()[start + n] != SpinSite::Half {
        return Err(ChainError::BadBoundaryIndex { j: extent, n });
    }
    let sites: Vec<usize> = (start + n - extent..=start + n).collect();
    Ok(rotation_operator(layout, &sites, axis, core::f64::consts::PI, format!("Σ[{:?},{extent}]", axis)))
}

/// `Σ_n^m̂ = ⊗ exp(iπS^m̂) ⊗ exp(i(π/2)σ^m̂)` on an edge-coupled chain, over
/// the `extent` spin-1 sites adjacent to the spin-½.
pub fn conserved_operator(layout: &ChainLayout, axis: V3, extent: usize) -> Result<ProductOperator, ChainError> {
    let n = layout.len() - 1;
    chain_sigma(layout, 0, n, axis, extent)
}

/// Logical Paulis `−iΣ^ẑ`, `−iΣ^x̂` of the chain at `start..=start + n`.
pub fn logical_qubit(layout: &ChainLayout, start: usize, n: usize, extent: usize) -> Result<LogicalQubit, ChainError> {
    let z = chain_sigma(layout, start, n, vec3::Z, extent)?.scaled(-I);
    let x = chain_sigma(layout, start, n, vec3::X, extent)?.scaled(-I);
    Ok(LogicalQubit { z, x })
}

/// A schedule together with the logical frames it maps between and the gate
/// the symmetry argument predicts.
#[derive(Debug, Clone)]
pub struct GateProtocol {
    pub hamiltonian: ScheduledHamiltonian,
    pub logical_in: Vec<LogicalQubit>,
    pub logical_out: Vec<LogicalQubit>,
    pub prediction: CMat,
}

fn finish(
    chain: &EdgeChain,
    terms: Vec<(OperatorTerm, Schedule)>,
    description: String,
    conserved: Vec<ProductOperator>,
    extents: (usize, usize),
    prediction: CMat,
) -> Result<GateProtocol, ChainError> {
    let mut h = ScheduledHamiltonian::new(chain.layout.clone(), terms, description)?.with_conserved(conserved);
    h.warnings = chain.warnings.clone();
    let logical_in = vec![logical_qubit(&chain.layout, 0, chain.n, extents.0)?];
    let logical_out = vec![logical_qubit(&chain.layout, 0, chain.n, extents.1)?];
    Ok(GateProtocol { hamiltonian: h, logical_in, logical_out, prediction })
}

/// Moves the phase boundary from `j` to `j + 1`: fields frozen on sites `< j`,
/// `F_j` ramps on while `H_{j,j+1}` ramps off.
pub fn elementary_gate_schedule(n: usize, j: usize, beta: f64, axis: V3, coupling: f64) -> Result<GateProtocol, ChainError> {
    let chain = edge_coupled_chain(n, coupling, beta)?;
    if j + 2 > n {
        return Err(ChainError::BadBoundaryIndex { j, n });
    }
    let axis = check_axis(axis)?;
    let mut terms = Vec::new();
    for i in 0..j {
        terms.push((uniform_field_term(i, axis, coupling)?, Schedule::Constant(1.0)));
    }
    terms.push((uniform_field_term(j, axis, coupling)?, Schedule::rising()));
    for (k, b) in chain.bonds.iter().enumerate().skip(j) {
        terms.push((b.clone(), if k == j { Schedule::falling() } else { Schedule::Constant(1.0) }));
    }
    terms.push((chain.edge.clone(), Schedule::Constant(1.0)));
    let conserved = vec![conserved_operator(&chain.layout, axis, n - j)?, conserved_operator(&chain.layout, perpendicular(axis), n - j)?];
    finish(&chain, terms, format!("elementary gate N={n} j={j} beta={beta} axis={axis:?}"), conserved, (n - j, n - j - 1), pauli_dot(axis))
}

/// Global crossfade from the edge-coupled chain to the field on every spin-1
/// site, leaving the spin-½ free. The prediction is the per-site gate
/// `(m̂·σ⃗)^N`, one factor for every site the boundary sweeps over.
pub fn transistor_schedule(n: usize, beta: f64, axis: V3, coupling: f64) -> Result<GateProtocol, ChainError> {
    let chain = edge_coupled_chain(n, coupling, beta)?;
    let axis = check_axis(axis)?;
    let mut terms = Vec::new();
    for i in 0..n {
        terms.push((uniform_field_term(i, axis, coupling)?, Schedule::rising()));
    }
    for t in chain.terms() {
        terms.push((t, Schedule::falling()));
    }
    let conserved = vec![conserved_operator(&chain.layout, axis, n)?, conserved_operator(&chain.layout, perpendicular(axis), n)?];
    let w = pauli_dot(axis);
    let mut prediction = identity(2);
    for _ in 0..n {
        prediction = &prediction * &w;
    }
    finish(&chain, terms, format!("transistor N={n} beta={beta} axis={axis:?}"), conserved, (n, 0), prediction)
}

/// Which part of the decouple–rotate–recouple loop to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HolonomyStages {
    Full,
    /// Decouple site 0 into the field along `m̂`.
    Decouple,
    /// Recouple site 0 from the field along `m̂⊥`.
    Recouple,
}

/// Decouple site 0 with the field along `m̂`, turn the field axis to `m̂⊥`
/// in the plane they span, and recouple. The field axis is rotated
/// continuously, `(S^{n(θ)})²` with `n(θ) = cos θ m̂ + sin θ m̂⊥`, so the
/// decoupled spin keeps a unique ground state throughout.
pub fn single_qubit_holonomy_schedule(
    n: usize,
    beta: f64,
    m: V3,
    m_perp: V3,
    coupling: f64,
    stages: HolonomyStages,
) -> Result<GateProtocol, ChainError> {
    let chain = edge_coupled_chain(n, coupling, beta)?;
    let (m, m_perp) = (check_axis(m)?, check_axis(m_perp)?);
    if vec3::dot(m, m_perp).abs() > AXIS_TOL {
        return Err(ChainError::AxesNotOrthogonal);
    }
    let s = spin::spin1();
    let (a, b) = (along(&s, m), along(&s, m_perp));
    let cross = OperatorTerm { support: vec![0], matrix: (&a * &b + &b * &a) * cr(coupling), label: String::from("F×[0]") };
    let fm = uniform_field_term(0, m, coupling)?;
    let fp = uniform_field_term(0, m_perp, coupling)?;
    let (t1, t2) = (1.0 / 3.0, 2.0 / 3.0);
    let (sched_m, sched_p, sched_x, sched_g, extents, conserved, prediction) = match stages {
        HolonomyStages::Full => (
            Schedule::Sum(vec![Schedule::ramp(0.0, 1.0, 0.0, t1), Schedule::ramp(0.0, -1.0, t1, t2)]),
            Schedule::Sum(vec![Schedule::ramp(0.0, 1.0, t1, t2), Schedule::ramp(0.0, -1.0, t2, 1.0)]),
            Schedule::Bump { start: t1, end: t2, peak: 0.5 },
            Schedule::Sum(vec![Schedule::ramp(1.0, 0.0, 0.0, t1), Schedule::ramp(0.0, 1.0, t2, 1.0)]),
            (n, n),
            vec![conserved_operator(&chain.layout, vec3::cross(m, m_perp), n)?],
            pauli_dot(m_perp) * pauli_dot(m),
        ),
        HolonomyStages::Decouple => (
            Schedule::rising(),
            Schedule::Constant(0.0),
            Schedule::Constant(0.0),
            Schedule::falling(),
            (n, n - 1),
            vec![conserved_operator(&chain.layout, m, n)?, conserved_operator(&chain.layout, m_perp, n)?],
            pauli_dot(m),
        ),
        HolonomyStages::Recouple => (
            Schedule::Constant(0.0),
            Schedule::falling(),
            Schedule::Constant(0.0),
            Schedule::rising(),
            (n - 1, n),
            vec![conserved_operator(&chain.layout, m, n)?, conserved_operator(&chain.layout, m_perp, n)?],
            pauli_dot(m_perp),
        ),
    };
    let mut terms = vec![(fm, sched_m), (fp, sched_p), (cross, sched_x)];
    for (k, bnd) in chain.bonds.iter().enumerate() {
        terms.push((bnd.clone(), if k == 0 { sched_g.clone() } else { Schedule::Constant(1.0) }));
    }
    terms.push((chain.edge.clone(), Schedule::Constant(1.0)));
    terms.retain(|(_, s)| *s != Schedule::Constant(0.0));
    finish(&chain, terms, format!("holonomy {stages:?} N={n} beta={beta} m={m:?} m_perp={m_perp:?}"), conserved, extents, prediction)
}

/// `W^{AB} = [(Sˣ)²−(Sʸ)²]_A ⊗ Sᶻ_B + Sᶻ_A ⊗ [(Sˣ)²−(Sʸ)²]_B` on two spin-1 sites.
pub fn two_qubit_coupling(site_a: usize, site_b: usize, coupling: f64) -> OperatorTerm {
    let s = spin::spin1();
    let d = &s[0] * &s[0] - &s[1] * &s[1];
    let m = (kron(&d, &s[2]) + kron(&s[2], &d)) * cr(coupling);
    OperatorTerm { support: vec![site_a, site_b], matrix: m, label: format!("W[{site_a},{site_b}]") }
}

/// `½(−|1,1⟩ + |1,−1⟩ + |−1,1⟩ + |−1,−1⟩)` in the `Sᶻ` product basis.
pub fn xi_state() -> CVec {
    let mut v = CVec::zeros(9);
    v[0] = cr(-0.5);
    v[2] = cr(0.5);
    v[6] = cr(0.5);
    v[8] = cr(0.5);
    v
}

/// The pair `(g_A, g_B)` acting on chain A (sites `0..=n`) and chain B
/// (sites `n+1..=2n+1`) by rotations `exp(iθ n̂·S⃗)` on every site.
fn pair_operator(layout: &ChainLayout, n: usize, a: Option<(V3, f64)>, b: Option<(V3, f64)>, label: &str) -> ProductOperator {
    let mut factors = Vec::new();
    if let Some((axis, angle)) = a {
        factors.extend(rotation_operator(layout, &(0..=n).collect::<Vec<_>>(), axis, angle, "").factors);
    }
    if let Some((axis, angle)) = b {
        factors.extend(rotation_operator(layout, &(n + 1..=2 * n + 1).collect::<Vec<_>>(), axis, angle, "").factors);
    }
    ProductOperator::new(ONE, factors, label)
}

/// Conserved quantities of the two-chain gate: `(√Rᶻ, Rˣ)`, `(Rᵘ, Rᵘ)`,
/// `(Rᵛ, Rᵛ)`, `(Rᶻ, 1)` and `(1, Rᶻ)` with `u, v = (x̂ ± ŷ)/√2`.
pub fn two_chain_conserved(layout: &ChainLayout, n: usize) -> Vec<ProductOperator> {
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
    let u = [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0];
    let v = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0];
    vec![
        pair_operator(layout, n, Some((vec3::Z, FRAC_PI_2)), Some((vec3::X, PI)), "(√Rz,Rx)"),
        pair_operator(layout, n, Some((u, PI)), Some((u, PI)), "(Ru,Ru)"),
        pair_operator(layout, n, Some((v, PI)), Some((v, PI)), "(Rv,Rv)"),
        pair_operator(layout, n, Some((vec3::Z, PI)), None, "(Rz,1)"),
        pair_operator(layout, n, None, Some((vec3::Z, PI)), "(1,Rz)"),
    ]
}

/// Two edge-coupled chains of `n` spin-1 sites whose first sites are
/// simultaneously decoupled into the ground state of `W^{AB}`.
pub fn two_qubit_gate_schedule(n: usize, beta: f64, coupling: f64) -> Result<GateProtocol, ChainError> {
    let single = edge_coupled_chain(n, coupling, beta)?;
    let mut sites = single.layout.sites().to_vec();
    sites.extend_from_slice(single.layout.sites());
    let layout = ChainLayout::new(sites, DEFAULT_DIM_CAP)?;
    let off = n + 1;
    let mut terms = vec![(two_qubit_coupling(0, off, coupling), Schedule::rising())];
    for shift in [0, off] {
        for (k, b) in single.bonds.iter().enumerate() {
            let t = bond_term(b.support[0] + shift, b.support[1] + shift, beta, coupling);
            terms.push((t, if k == 0 { Schedule::falling() } else { Schedule::Constant(1.0) }));
        }
        terms.push((edge_term(n - 1 + shift, n + shift, coupling), Schedule::Constant(1.0)));
    }
    let conserved = two_chain_conserved(&layout, n);
    let mut h = ScheduledHamiltonian::new(layout.clone(), terms, format!("two-qubit gate N={n} beta={beta}"))?.with_conserved(conserved);
    h.warnings = single.warnings;
    let logical_in = vec![logical_qubit(&layout, 0, n, n)?, logical_qubit(&layout, off, n, n)?];
    let logical_out = vec![logical_qubit(&layout, 0, n, n - 1)?, logical_qubit(&layout, off, n, n - 1)?];
    let (o, p, m) = (C64::new(0.0, 0.0), ONE, -ONE);
    let prediction = from_rows(&[&[o, o, o, m], &[o, o, p, o], &[o, p, o, o], &[p, o, o, o]]);
    Ok(GateProtocol { hamiltonian: h, logical_in, logical_out, prediction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chainsim::{ground_space, GroundSolver};
    use crate::linalg::{eigh, max_abs};

    fn dense(layout: &ChainLayout, terms: &[OperatorTerm]) -> CMat {
        let mut h = CMat::zeros(layout.total_dim(), layout.total_dim());
        for t in terms {
            layout.embed(&t.support, &t.matrix).add_to_dense(1.0, &mut h);
        }
        h
    }

    #[test]
    fn spin1_pi_rotation_is_reflection() {
        let s = spin::spin1();
        let rz = spin::rotation(&s, vec3::Z, core::f64::consts::PI);
        let refl = identity(3) - &s[2] * &s[2] * cr(2.0);
        assert!(max_abs(&(&rz - &refl)) < 1e-12);
        assert!((rz[(0, 0)] + ONE).norm() < 1e-12 && (rz[(1, 1)] - ONE).norm() < 1e-12);
    }

    #[test]
    fn aklt_bond_ground_level() {
        // For β = −1/3 the bond is a shifted projector on total spin 2: the
        // lowest level holds spin 0 ⊕ spin 1.
        let (vals, _) = eigh(&bond_term(0, 1, -1.0 / 3.0, 1.0).matrix);
        let low = vals.iter().filter(|&&v| (v - vals[0]).abs() < 1e-10).count();
        assert_eq!(low, 4);
        assert!((vals[4] - vals[0] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn edge_chain_is_doubly_degenerate() {
        for beta in [-1.0 / 3.0, 0.0, 0.5] {
            for n in [3, 4] {
                let chain = edge_coupled_chain(n, 1.0, beta).unwrap();
                let h = dense(&chain.layout, &chain.terms());
                let g = ground_space(&h, &GroundSolver::default(), 2, None).unwrap();
                assert_eq!(g.degeneracy, 2, "n={n} beta={beta}");
                assert!(g.gap > 0.05);
            }
        }
    }

    #[test]
    fn sigma_operators_are_conserved_and_projective() {
        let chain = edge_coupled_chain(3, 1.0, -1.0 / 3.0).unwrap();
        let z = conserved_operator(&chain.layout, vec3::Z, 3).unwrap();
        let x = conserved_operator(&chain.layout, vec3::X, 3).unwrap();
        for t in chain.terms() {
            assert!(z.commutator_residual(&chain.layout, &t) < 1e-12);
            assert!(x.commutator_residual(&chain.layout, &t) < 1e-12);
        }
        let basis = identity(chain.layout.total_dim());
        let zm = z.apply(&chain.layout, &basis);
        let xm = x.apply(&chain.layout, &basis);
        assert!(max_abs(&(&zm * &zm + &basis)) < 1e-12);
        assert!(max_abs(&(&zm * &xm + &xm * &zm)) < 1e-12);
        // Extent zero is iσ on the spin-½ alone.
        let z0 = conserved_operator(&chain.layout, vec3::Z, 0).unwrap();
        assert_eq!(z0.factors.len(), 1);
        assert!(max_abs(&(&z0.factors[0].1 - pauli_dot(vec3::Z) * I)) < 1e-12);
    }

    #[test]
    fn field_ground_state_characters() {
        let f = uniform_field_term(0, vec3::Z, 1.0).unwrap();
        assert!(max_abs(&(&f.matrix - from_rows(&[&[ONE, cr(0.0), cr(0.0)], &[cr(0.0); 3], &[cr(0.0), cr(0.0), ONE]]))) < 1e-12);
        let s = spin::spin1();
        let e0 = CVec::from_column_slice(&[cr(0.0), ONE, cr(0.0)]);
        let rx = spin::rotation(&s, vec3::X, core::f64::consts::PI);
        assert!(((rx * &e0)[1] + ONE).norm() < 1e-12);
        assert!(uniform_field_term(0, [1.0, 1.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn xi_is_unique_ground_state_of_w() {
        let w = two_qubit_coupling(0, 1, 1.0).matrix;
        let g = ground_space(&w, &GroundSolver::default(), 1, None).unwrap();
        assert_eq!(g.degeneracy, 1);
        let xi = xi_state();
        assert!((xi.norm() - 1.0).abs() < 1e-14);
        assert!((g.frame.column(0).dotc(&xi).norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn xi_eigenvalue_table() {
        use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
        let s = spin::spin1();
        let r = |n: V3, a: f64| spin::rotation(&s, n, a);
        let u = [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0];
        let v = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0];
        let xi = xi_state();
        let table = [
            (kron(&r(vec3::Z, FRAC_PI_2), &r(vec3::X, PI)), I),
            (kron(&r(u, PI), &r(u, PI)), ONE),
            (kron(&r(v, PI), &r(v, PI)), ONE),
            (kron(&r(vec3::Z, PI), &identity(3)), -ONE),
            (kron(&identity(3), &r(vec3::Z, PI)), -ONE),
        ];
        for (g, lambda) in table {
            let gx = &g * &xi;
            assert!((&gx - &xi * lambda).norm() < 1e-12, "expected {lambda}");
        }
    }

    #[test]
    fn elementary_schedule_snapshots() {
        let p = elementary_gate_schedule(4, 1, -1.0 / 3.0, vec3::Z, 1.0).unwrap();
        let h = &p.hamiltonian;
        let chain = edge_coupled_chain(4, 1.0, -1.0 / 3.0).unwrap();
        let f = |i| uniform_field_term(i, vec3::Z, 1.0).unwrap();
        let mut at0 = vec![f(0)];
        at0.extend(chain.terms().into_iter().skip(1));
        let mut at1 = vec![f(0), f(1)];
        at1.extend(chain.terms().into_iter().skip(2));
        assert!(max_abs(&(h.dense(0.0).unwrap() - dense(&chain.layout, &at0))) < 1e-12);
        assert!(max_abs(&(h.dense(1.0).unwrap() - dense(&chain.layout, &at1))) < 1e-12);
        for k in 0..=10 {
            assert!(h.conserved_residual(k as f64 / 10.0).unwrap() < 1e-10);
        }
        assert!(matches!(elementary_gate_schedule(4, 3, 0.0, vec3::Z, 1.0), Err(ChainError::BadBoundaryIndex { .. })));
    }

    #[test]
    fn holonomy_and_two_chain_symmetries() {
        let p = single_qubit_holonomy_schedule(3, 0.0, vec3::Z, vec3::X, 1.0, HolonomyStages::Full).unwrap();
        for k in 0..=10 {
            assert!(p.hamiltonian.conserved_residual(k as f64 / 10.0).unwrap() < 1e-10);
        }
        // Midway the field points along (ẑ + x̂)/√2.
        let mid = p.hamiltonian.coefficients(0.5).unwrap();
        assert!((mid[0] - 0.5).abs() < 1e-12 && (mid[1] - 0.5).abs() < 1e-12 && (mid[2] - 0.5).abs() < 1e-12);
        assert!(matches!(
            single_qubit_holonomy_schedule(3, 0.0, vec3::Z, [FRAC, 0.0, FRAC], 1.0, HolonomyStages::Full),
            Err(ChainError::AxesNotOrthogonal)
        ));
        let q = two_qubit_gate_schedule(2, -1.0 / 3.0, 1.0).unwrap();
        for k in 0..=10 {
            assert!(q.hamiltonian.conserved_residual(k as f64 / 10.0).unwrap() < 1e-10);
        }
        assert_eq!(q.hamiltonian.dim(), 18 * 18);
    }

    const FRAC: f64 = core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn beta_outside_range_warns() {
        assert_eq!(edge_coupled_chain(2, 1.0, 1.5).unwrap().warnings.len(), 1);
        assert!(edge_coupled_chain(2, 1.0, 0.5).unwrap().warnings.is_empty());
    }
}
