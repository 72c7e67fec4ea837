//! Randomized structural invariants: local-unitary invariance of the
//! criterion values, separability soundness of the partial transpose,
//! involution/adjoint identities, and noise-mixing linearity.

use entkit::bloch;
use entkit::criteria;
use entkit::matrix::{kron, trace_norm, CMatrix};
use entkit::state::DensityMatrix;
use entkit::states;

use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    // fix the phase ambiguity of QR so columns are Haar-distributed
    let phases = DVector::from_fn(d, |i, _| {
        let rii = r[(i, i)];
        if rii.norm() > 0.0 { rii / rii.norm() } else { Complex64::new(1.0, 0.0) }
    });
    let mut q = qr.q();
    for j in 0..d {
        let p = phases[j];
        for i in 0..d {
            q[(i, j)] *= p;
        }
    }
    q
}

fn conjugate(rho: &DensityMatrix, u_a: &CMatrix, u_b: &CMatrix) -> DensityMatrix {
    let u = kron(u_a, u_b).unwrap();
    DensityMatrix::new(rho.dim_a(), rho.dim_b(), &u * rho.matrix() * u.adjoint()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn criterion_values_are_local_unitary_invariant(
        seed in any::<u64>(), m in 2usize..=3, n in 2usize..=4
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = states::random_mixed_with_rng(m, n, m + n, &mut rng).unwrap();
        let rotated = conjugate(&rho, &random_unitary(m, &mut rng), &random_unitary(n, &mut rng));
        let before = criteria::full_report_strict(&rho).unwrap();
        let after = criteria::full_report_strict(&rotated).unwrap();
        for (b, a) in before.iter().zip(&after) {
            prop_assert!(
                (b.value - a.value).abs() <= 1e-9,
                "{:?}: {} vs {}", b.criterion, b.value, a.value
            );
        }
    }

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), m in 2usize..=3, n in 2usize..=4) {
        let rho = states::random_mixed(m, n, m * n, seed).unwrap();
        let twice = rho.partial_transpose_a();
        let mut back = CMatrix::zeros(m * n, m * n);
        for i in 0..m {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..n {
                        back[(i * n + j, k * n + l)] = twice[(k * n + j, i * n + l)];
                    }
                }
            }
        }
        prop_assert!((back - rho.matrix()).norm() <= 1e-14);
    }

    #[test]
    fn separable_partial_transpose_has_unit_trace_norm(
        seed in any::<u64>(), m in 2usize..=3, n in 2usize..=3, terms in 1usize..=8
    ) {
        let rho = states::random_separable(m, n, terms, seed).unwrap();
        let tn = trace_norm(&rho.partial_transpose_a()).unwrap();
        prop_assert!((tn - 1.0).abs() <= 1e-9, "‖T_A(ρ)‖ = {tn}");
    }

    #[test]
    fn product_state_realignment_is_rank_one(seed in any::<u64>(), m in 2usize..=3, n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = states::random_mixed_with_rng(m, 1, m, &mut rng).unwrap();
        let b = states::random_mixed_with_rng(n, 1, n, &mut rng).unwrap();
        let rho = DensityMatrix::product(a.matrix(), b.matrix()).unwrap();
        let sv = entkit::matrix::singular_values(&rho.realign()).unwrap();
        // one singular value √(Tr ρ_A² · Tr ρ_B²), all others zero
        let expected = (a.purity() * b.purity()).sqrt();
        prop_assert!((sv[0] - expected).abs() <= 1e-10, "sv0 = {} vs {expected}", sv[0]);
        for &s in &sv[1..] {
            prop_assert!(s <= 1e-10, "spurious singular value {s}");
        }
    }

    #[test]
    fn correlation_matrix_is_linear_in_noise_weight(
        seed in any::<u64>(), p in 0.0f64..=1.0
    ) {
        let rho = states::random_mixed(3, 3, 4, seed).unwrap();
        let t_full = bloch::decompose(&rho).unwrap().t;
        let mixed = states::white_noise_mix(&rho, p).unwrap().mixed;
        let t_mixed = bloch::decompose(&mixed).unwrap().t;
        prop_assert!((t_mixed - t_full * p).norm() <= 1e-10);
    }

    #[test]
    fn swap_preserves_criterion_verdicts(seed in any::<u64>(), m in 2usize..=3, n in 2usize..=4) {
        let rho = states::random_mixed(m, n, 2, seed).unwrap();
        let swapped = rho.swap_subsystems();
        let before = criteria::full_report_strict(&rho).unwrap();
        let after = criteria::full_report_strict(&swapped).unwrap();
        for (b, a) in before.iter().zip(&after) {
            prop_assert!(
                (b.value - a.value).abs() <= 1e-9,
                "{:?} changed under swap: {} vs {}", b.criterion, b.value, a.value
            );
            prop_assert_eq!(b.entangled, a.entangled);
        }
    }
}
