//! Small dense complex linear algebra shared by every module.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Norms are Frobenius unless a
//! function says otherwise.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Build a matrix from row-major rows.
pub fn from_rows(rows: &[&[C64]]) -> CMat {
    let n = rows.len();
    let m = if n == 0 { 0 } else { rows[0].len() };
    CMat::from_fn(n, m, |i, j| rows[i][j])
}

/// The identity and Pauli matrices `[I, σˣ, σʸ, σᶻ]`.
pub fn paulis() -> [CMat; 4] {
    [
        identity(2),
        from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
        from_rows(&[&[ZERO, -I], &[I, ZERO]]),
        from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]),
    ]
}

/// `n̂·σ⃗` for a real 3-vector.
pub fn pauli_dot(axis: [f64; 3]) -> CMat {
    let [_, x, y, z] = paulis();
    x * cr(axis[0]) + y * cr(axis[1]) + z * cr(axis[2])
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn fro_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖M†M − I‖`.
pub fn unitarity_residual(m: &CMat) -> f64 {
    let n = m.ncols();
    fro_norm(&(m.adjoint() * m - identity(n)))
}

pub fn hermiticity_residual(m: &CMat) -> f64 {
    fro_norm(&(m - m.adjoint()))
}

/// `‖AB − BA‖`.
pub fn commutator_norm(a: &CMat, b: &CMat) -> f64 {
    fro_norm(&(a * b - b * a))
}

pub fn is_real(m: &CMat) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// Phase `φ` minimizing `‖a − e^{iφ} b‖`, returned as a unit complex number.
pub fn best_phase(a: &CMat, b: &CMat) -> C64 {
    let overlap = (b.adjoint() * a).trace();
    if overlap.norm() < 1e-300 {
        ONE
    } else {
        overlap / overlap.norm()
    }
}

/// `min_φ ‖a − e^{iφ} b‖`.
pub fn phase_distance(a: &CMat, b: &CMat) -> f64 {
    let p = best_phase(a, b);
    fro_norm(&(a - b * p))
}

/// `|tr(target† u)| / d`: one for equality up to global phase.
pub fn trace_fidelity(target: &CMat, u: &CMat) -> f64 {
    (target.adjoint() * u).trace().norm() / target.nrows() as f64
}

/// If `a = c·b` for some scalar `c`, returns `(c, ‖a − c b‖)`.
pub fn proportionality(a: &CMat, b: &CMat) -> (C64, f64) {
    let bb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    if bb == 0.0 {
        return (ZERO, fro_norm(a));
    }
    let coeff = (b.adjoint() * a).trace() / bb;
    (coeff, fro_norm(&(a - b * coeff)))
}

/// Index (row-major order) of the first entry whose modulus is within a
/// relative `1e-9` of the largest modulus.
pub fn leading_entry(m: &CMat) -> (usize, usize) {
    let top = max_abs(m);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)].norm() >= top * (1.0 - 1e-9) {
                return (i, j);
            }
        }
    }
    (0, 0)
}

/// Rephase `m` so its leading entry is real and positive.
pub fn gauge_fix(m: &CMat) -> CMat {
    let (i, j) = leading_entry(m);
    let z = m[(i, j)];
    if z.norm() == 0.0 {
        return m.clone();
    }
    m * (z.conj() / z.norm())
}

/// Rephase a vector so its leading component is real and positive.
pub fn gauge_fix_vec(v: &CVec) -> CVec {
    let top = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    match v.iter().find(|z| z.norm() >= top * (1.0 - 1e-9)) {
        Some(z) if z.norm() > 0.0 => v * (z.conj() / z.norm()),
        _ => v.clone(),
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors as columns. Real symmetric input takes the real path.
pub fn eigh(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    let (vals, vecs) = if is_real(h) {
        let eig = h.map(|z| z.re).symmetric_eigen();
        (eig.eigenvalues, eig.eigenvectors.map(cr))
    } else {
        // Symmetrize so round-off in the input never leaks into the solver.
        let hs = (h + h.adjoint()) * cr(0.5);
        let eig = hs.symmetric_eigen();
        (eig.eigenvalues, eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let values = order.iter().map(|&k| vals[k]).collect();
    let vectors = CMat::from_fn(n, n, |i, j| vecs[(i, order[j])]);
    (values, vectors)
}

/// `exp(iθA)` for Hermitian `A`.
pub fn exp_i_hermitian(a: &CMat, theta: f64) -> CMat {
    let (vals, vecs) = eigh(a);
    let phases = CVec::from_iterator(vals.len(), vals.iter().map(|&l| cis(theta * l)));
    let scaled = CMat::from_fn(vecs.nrows(), vecs.ncols(), |i, j| vecs[(i, j)] * phases[j]);
    scaled * vecs.adjoint()
}

/// Symmetric (Löwdin) orthonormalization `Y (Y†Y)^{-1/2}`. Returns `None`
/// when the columns are numerically dependent.
pub fn lowdin(y: &CMat) -> Option<CMat> {
    let gram = y.adjoint() * y;
    let (vals, vecs) = eigh(&gram);
    let top = vals.last().copied().unwrap_or(0.0);
    if vals.is_empty() || vals[0] <= 1e-14 * top.max(1e-300) || vals[0] <= 0.0 {
        return None;
    }
    let k = vals.len();
    let inv_sqrt = CMat::from_fn(k, k, |i, j| vecs[(i, j)] * cr(1.0 / vals[j].sqrt())) * vecs.adjoint();
    Some(y * inv_sqrt)
}

/// Modified Gram–Schmidt on columns, dropping those whose remaining norm
/// falls below `drop_tol` times their original norm.
pub fn orthonormal_columns(y: &CMat, drop_tol: f64) -> CMat {
    let mut out: Vec<CVec> = Vec::new();
    for j in 0..y.ncols() {
        let mut v: CVec = y.column(j).into_owned();
        let n0 = v.norm();
        if n0 == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &out {
                let p = q.dotc(&v);
                v -= q * p;
            }
        }
        let n1 = v.norm();
        if n1 > drop_tol * n0 {
            out.push(v / cr(n1));
        }
    }
    if out.is_empty() {
        return CMat::zeros(y.nrows(), 0);
    }
    CMat::from_columns(&out)
}

/// Dimension of the null space of `m` (columns), by eigenvalues of `m†m`
/// below `tol` relative to the largest singular value squared.
pub fn nullity(m: &CMat, tol: f64) -> usize {
    let gram = m.adjoint() * m;
    let (vals, _) = eigh(&gram);
    let scale = vals.last().copied().unwrap_or(0.0).max(1.0);
    vals.iter().filter(|&&v| v.abs() <= tol * scale).count()
}

/// Row-major vectorization.
pub fn vec_row_major(m: &CMat) -> CVec {
    CVec::from_iterator(m.nrows() * m.ncols(), (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]))
}

/// Inverse of [`vec_row_major`].
pub fn unvec_row_major(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// Real 3-vector helpers used for rotation axes.
pub mod vec3 {

    pub type V3 = [f64; 3];

    pub fn dot(a: V3, b: V3) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn cross(a: V3, b: V3) -> V3 {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    }

    pub fn norm(a: V3) -> f64 {
        dot(a, a).sqrt()
    }

    pub fn scale(a: V3, s: f64) -> V3 {
        [a[0] * s, a[1] * s, a[2] * s]
    }

    pub fn add(a: V3, b: V3) -> V3 {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    pub fn normalized(a: V3) -> V3 {
        scale(a, 1.0 / norm(a))
    }

    pub fn is_unit(a: V3, tol: f64) -> bool {
        (norm(a) - 1.0).abs() <= tol
    }

    /// Rotate `v` by `angle` about the unit axis `n` (Rodrigues).
    pub fn rotate(v: V3, n: V3, angle: f64) -> V3 {
        let (s, c) = angle.sin_cos();
        let k = cross(n, v);
        let d = dot(n, v) * (1.0 - c);
        [v[0] * c + k[0] * s + n[0] * d, v[1] * c + k[1] * s + n[1] * d, v[2] * c + k[2] * s + n[2] * d]
    }

    pub const X: V3 = [1.0, 0.0, 0.0];
    pub const Y: V3 = [0.0, 1.0, 0.0];
    pub const Z: V3 = [0.0, 0.0, 1.0];
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let [id, x, y, z] = paulis();
        assert!(fro_norm(&(&x * &y - &z * I)) < 1e-15);
        assert!(fro_norm(&(&x * &x - &id)) < 1e-15);
        assert!(commutator_norm(&x, &z) > 1.0);
    }

    #[test]
    fn eigh_sorted_and_orthonormal() {
        let [_, x, y, z] = paulis();
        let h = kron(&x, &y) + kron(&z, &z) * cr(0.5);
        let (vals, vecs) = eigh(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert!(unitarity_residual(&vecs) < 1e-12);
        let d = CMat::from_diagonal(&CVec::from_iterator(4, vals.iter().map(|&v| cr(v))));
        assert!(fro_norm(&(&vecs * d * vecs.adjoint() - &h)) < 1e-12);
    }

    #[test]
    fn exp_of_pauli_is_rotation() {
        let [id, _, _, z] = paulis();
        let u = exp_i_hermitian(&z, core::f64::consts::FRAC_PI_2);
        assert!(fro_norm(&(u - &z * I)) < 1e-14);
        let u = exp_i_hermitian(&z, core::f64::consts::PI);
        assert!(fro_norm(&(u + id)) < 1e-14);
    }

    #[test]
    fn lowdin_gives_orthonormal_columns() {
        let y = CMat::from_fn(5, 2, |i, j| c((i + 2 * j) as f64, (i * j) as f64 - 1.0));
        let q = lowdin(&y).unwrap();
        assert!(unitarity_residual(&q) < 1e-12);
        assert!(lowdin(&CMat::zeros(3, 1)).is_none());
    }

    #[test]
    fn phase_insensitive_comparisons() {
        let [_, x, _, _] = paulis();
        let y = &x * cis(0.7);
        assert!(phase_distance(&y, &x) < 1e-14);
        assert!((trace_fidelity(&x, &y) - 1.0).abs() < 1e-14);
        let g = gauge_fix(&y);
        assert!(fro_norm(&(g - &x)) < 1e-14);
    }

    #[test]
    fn rodrigues_rotation() {
        let r = vec3::rotate(vec3::X, vec3::Z, core::f64::consts::FRAC_PI_2);
        assert!((r[0]).abs() < 1e-15 && (r[1] - 1.0).abs() < 1e-15);
    }
}
