//! Spin operators for spin-½ and spin-1, and finite rotations built from them.
//!
//! Spin-1 matrices are in the `Sᶻ` basis ordered `|+1⟩, |0⟩, |−1⟩`; spin-½
//! matrices are `σ/2` in the basis `|↑⟩, |↓⟩`.

use crate::linalg::{c, cr, exp_i_hermitian, from_rows, vec3::V3, CMat, ZERO};

/// `[Sˣ, Sʸ, Sᶻ]` for spin one.
pub fn spin1() -> [CMat; 3] {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let (o, r) = (ZERO, cr(s));
    let sx = from_rows(&[&[o, r, o], &[r, o, r], &[o, r, o]]);
    let (p, m) = (c(0.0, s), c(0.0, -s));
    let sy = from_rows(&[&[o, m, o], &[p, o, m], &[o, p, o]]);
    let sz = from_rows(&[&[cr(1.0), o, o], &[o, o, o], &[o, o, cr(-1.0)]]);
    [sx, sy, sz]
}

/// `[Sˣ, Sʸ, Sᶻ] = σ/2` for spin one half.
pub fn spin_half() -> [CMat; 3] {
    let [_, x, y, z] = crate::linalg::paulis();
    [x * cr(0.5), y * cr(0.5), z * cr(0.5)]
}

/// `n̂·S` for an arbitrary (not necessarily unit) axis.
pub fn along(spins: &[CMat; 3], n: V3) -> CMat {
    &spins[0] * cr(n[0]) + &spins[1] * cr(n[1]) + &spins[2] * cr(n[2])
}

/// `exp(iθ n̂·S)`.
pub fn rotation(spins: &[CMat; 3], n: V3, theta: f64) -> CMat {
    exp_i_hermitian(&along(spins, n), theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fro_norm, identity, I};

    fn check_algebra(s: &[CMat; 3], casimir: f64) {
        let n = s[0].nrows();
        for (a, b, cc) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let comm = &s[a] * &s[b] - &s[b] * &s[a];
            assert!(fro_norm(&(comm - &s[cc] * I)) < 1e-14);
        }
        let cas = &s[0] * &s[0] + &s[1] * &s[1] + &s[2] * &s[2];
        assert!(fro_norm(&(cas - identity(n) * cr(casimir))) < 1e-14);
    }

    #[test]
    fn su2_algebra() {
        check_algebra(&spin1(), 2.0);
        check_algebra(&spin_half(), 0.75);
    }

    #[test]
    fn pi_rotation_of_spin1_sz0_state_is_minus_one() {
        let rx = rotation(&spin1(), [1.0, 0.0, 0.0], core::f64::consts::PI);
        assert!((rx[(1, 1)] + cr(1.0)).norm() < 1e-12);
        // 2π rotations are trivial for integer spin and −1 for half-integer spin.
        let full = rotation(&spin1(), [0.0, 1.0, 0.0], 2.0 * core::f64::consts::PI);
        assert!(fro_norm(&(full - identity(3))) < 1e-12);
        let half = rotation(&spin_half(), [0.0, 1.0, 0.0], 2.0 * core::f64::consts::PI);
        assert!(fro_norm(&(half + identity(2))) < 1e-12);
    }
}
