use proptest::prelude::*;

use spaqt_core::chainsim::Schedule;
use spaqt_core::eigen::{lowest_eigenpairs, SolverOptions};
use spaqt_core::groups::{center, characters, FiniteGroup};
use spaqt_core::linalg::{cis, eigh, phase_distance, trace_fidelity, vec3, CMat, C64};
use spaqt_core::projrep::{are_equivalent, gauge_transform, pauli_rep, phi, two_chain_symmetry, FactorSystem, GaugeFunction, ProjectiveRep};
use spaqt_core::universality::{compose_pi_rotations, pi_rotation, LogicalRotation};

fn builtin_reps() -> Vec<ProjectiveRep> {
    let g2 = two_chain_symmetry().unwrap();
    vec![pauli_rep(), g2.half_pair.clone(), g2.half_pair.det_normalized()]
}

fn unit_vector() -> impl Strategy<Value = [f64; 3]> {
    // Rejection keeps the direction uniform.
    prop::array::uniform3(-1.0f64..1.0).prop_filter("inside the unit ball, away from zero", |v| {
        let n = vec3::norm(*v);
        n > 1e-3 && n <= 1.0
    })
    .prop_map(vec3::normalized)
}

fn max_cocycle_gap(a: &FactorSystem, b: &FactorSystem, g: &FiniteGroup) -> f64 {
    let mut worst: f64 = 0.0;
    for x in g.elements() {
        for y in g.elements() {
            worst = worst.max((a.get(x, y) - b.get(x, y)).norm());
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition_matches_matrix_product(m in unit_vector(), mp in unit_vector()) {
        prop_assume!(vec3::norm(vec3::cross(m, mp)) > 1e-6);
        let r = compose_pi_rotations(m, mp).unwrap();
        let direct = pi_rotation(mp).unwrap().matrix * pi_rotation(m).unwrap().matrix;
        prop_assert!(phase_distance(&direct, &r.matrix) < 1e-10);
        prop_assert!(r.consistency_residual() < 1e-12);
        prop_assert!((r.angle - 2.0 * vec3::dot(m, mp).clamp(-1.0, 1.0).acos()).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rephasing_is_a_gauge_transform(seed in prop::collection::vec(-3.2f64..3.2, 16)) {
        for rep in builtin_reps() {
            let n = rep.group().order();
            let beta = GaugeFunction::from_angles(&seed[..n]);
            let lhs = rep.rephased(&beta).factor_system().unwrap();
            let rhs = gauge_transform(&rep.factor_system().unwrap(), &beta);
            prop_assert!(max_cocycle_gap(&lhs, &rhs, rep.group()) < 1e-12);
            prop_assert!(lhs.cocycle_residual() < 1e-10);
        }
    }

    #[test]
    fn phi_is_gauge_invariant_on_the_center(seed in prop::collection::vec(-3.2f64..3.2, 16)) {
        for rep in builtin_reps() {
            let g = rep.group();
            let omega = rep.factor_system().unwrap();
            let moved = gauge_transform(&omega, &GaugeFunction::from_angles(&seed[..g.order()]));
            for &a in &center(g).members {
                prop_assert!((phi(&omega, a) - phi(&moved, a)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn equivalence_is_an_equivalence_relation(b1 in prop::collection::vec(0usize..8, 16), b2 in prop::collection::vec(0usize..8, 16)) {
        for rep in [pauli_rep(), two_chain_symmetry().unwrap().half_pair.det_normalized()] {
            let g = rep.group();
            let n = g.order();
            let w = rep.factor_system().unwrap();
            let triv = FactorSystem::trivial(g);
            let w1 = gauge_transform(&w, &GaugeFunction::from_exponents(&b1[..n], 8));
            let w2 = gauge_transform(&w1, &GaugeFunction::from_exponents(&b2[..n], 8));
            prop_assert!(are_equivalent(&w1, &w1).unwrap());
            prop_assert!(are_equivalent(&w, &w1).unwrap() && are_equivalent(&w1, &w).unwrap());
            prop_assert!(are_equivalent(&w1, &w2).unwrap() && are_equivalent(&w, &w2).unwrap());
            let t1 = gauge_transform(&triv, &GaugeFunction::from_exponents(&b1[..n], 8));
            prop_assert!(!are_equivalent(&w2, &t1).unwrap() && !are_equivalent(&t1, &w2).unwrap());
        }
    }

    #[test]
    fn crossfade_ramps_mirror(t in 0.0f64..=1.0) {
        let (up, down) = (Schedule::rising(), Schedule::falling());
        prop_assert!((up.value(t) + down.value(t) - 1.0).abs() < 1e-15);
        prop_assert!((up.value(t) - down.value(1.0 - t)).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&up.value(t)));
    }

    #[test]
    fn trace_fidelity_ignores_global_phase(axis in unit_vector(), angle in -6.3f64..6.3, phase in -3.2f64..3.2) {
        let u = LogicalRotation::new(axis, angle).unwrap().matrix;
        prop_assert!((trace_fidelity(&u, &(&u * cis(phase))) - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn iterative_lowest_levels_match_dense(entries in prop::collection::vec(-1.0f64..1.0, 2 * 160 * 160), nev in 1usize..5) {
        let n = 160;
        let a = CMat::from_fn(n, n, |i, j| C64::new(entries[i * n + j], entries[n * n + i * n + j]));
        let h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
        let opts = SolverOptions::default();
        prop_assume!(n > opts.dense_limit);
        let (vals, _) = eigh(&h);
        let it = lowest_eigenpairs(&h, nev, None, &opts).unwrap();
        let scale = vals[n - 1].abs().max(vals[0].abs());
        for (k, (got, want)) in it.values.iter().zip(&vals).take(nev).enumerate() {
            prop_assert!((got - want).abs() < 1e-8 * scale, "level {}: {} vs {}", k, got, want);
        }
    }
}

#[test]
fn character_orthogonality_on_every_named_group() {
    for name in spaqt_core::groups::GROUP_NAMES {
        let g = spaqt_core::groups::build_named_group(name).unwrap();
        let chars = characters(&g);
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate() {
                let s: C64 = g.elements().map(|e| a.value(e) * b.value(e).conj()).sum();
                let expected = if i == j { g.order() as f64 } else { 0.0 };
                assert!((s - C64::new(expected, 0.0)).norm() < 1e-12, "{name}: {i}, {j}");
            }
            for x in g.elements() {
                for y in g.elements() {
                    assert!((a.value(g.mul(x, y)) - a.value(x) * a.value(y)).norm() < 1e-12);
                }
            }
        }
    }
}
