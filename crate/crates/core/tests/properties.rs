use proptest::prelude::*;

use mumkit::gellmann::GellMannBasis;
use mumkit::linalg::{conj, max_abs_diff, CMatrix, C64};
use mumkit::mum::{
    bloch_vector, build_mum_family, mub_unitaries, rotation_from_unitary, simplex_check,
    verify_mum, MumFamily,
};
use mumkit::ortho::{q_matrix, rotation_d3, RotationFixingDiagonal};
use mumkit::random::{random_density, random_pure_state, random_simplex, random_unitary, rng};
use mumkit::spectra::{sample_feasible_phases, synthesize_spectrum, validate_spectrum, Spectrum};
use mumkit::states::{dicke_schmidt, isotropic, mub_schmidt_mixture, DensityMatrix};
use mumkit::witness::{entanglement_monotone, evaluate, m_kappa, witness_matrix, WitnessConfig};

fn spectrum(d: usize, frac: f64, seed: u64) -> Spectrum {
    let kappa = 1.0 / d as f64 + frac * (1.0 - 1.0 / d as f64);
    let (ph, sign) = sample_feasible_phases(d, kappa, &mut rng(seed)).unwrap();
    synthesize_spectrum(d, kappa, &ph, sign).unwrap()
}

fn family(d: usize, frac: f64, seed: u64) -> MumFamily {
    build_mum_family(&spectrum(d, frac, seed), &mub_unitaries(d).unwrap()).unwrap()
}

fn state(d: usize, seed: u64, pure: bool) -> DensityMatrix {
    let mut g = rng(seed);
    let m = if pure {
        let v = random_pure_state(d * d, &mut g);
        &v * v.adjoint()
    } else {
        random_density(d * d, &mut g)
    };
    DensityMatrix::new((&m + m.adjoint()) * C64::new(0.5, 0.0), (d, d)).unwrap()
}

fn prime_or_four() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![2usize, 3, 4, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sampled_spectra_validate(d in 2usize..=9, frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let s = spectrum(d, frac, seed);
        let report = validate_spectrum(&s);
        prop_assert!(report.pass, "{:?}", report);
        prop_assert!(s.mu.iter().all(|&m| m >= -1.0 / d as f64 - 1e-12));
    }

    #[test]
    fn q_is_orthogonal_and_fixes_axis(d in 2usize..=9, frac in 0.01f64..=1.0, seed in any::<u64>()) {
        let q = q_matrix(&spectrum(d, frac, seed)).unwrap();
        prop_assert!(q.orthogonality_residual() <= 1e-10);
        prop_assert!(q.axis_residual() <= 1e-12);
    }

    #[test]
    fn trace_relation_agrees_with_simplex(d in prime_or_four(), frac in 0.05f64..=1.0, seed in any::<u64>(), biased in any::<bool>()) {
        let s = spectrum(d, frac, seed);
        let mut us = mub_unitaries(d).unwrap();
        if biased {
            us[1] = random_unitary(d, &mut rng(seed ^ 0x5eed));
        }
        let f = build_mum_family(&s, &us).unwrap();
        let mum = verify_mum(&f, 1e-10);
        let simplex = simplex_check(&f, &GellMannBasis::new(d).unwrap());
        prop_assert_eq!(mum.pass, simplex.pass);
        prop_assert_eq!(mum.pass, !biased);
    }

    #[test]
    fn elements_commute_within_measurement(d in prime_or_four(), frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let f = family(d, frac, seed);
        for p in &f.povms {
            prop_assert!(p.commutator_residual() <= 1e-10);
        }
    }

    #[test]
    fn rotation_lift_maps_bloch_vectors(d in prime_or_four(), frac in 0.05f64..=1.0, seed in any::<u64>()) {
        let f = family(d, frac, seed);
        let basis = GellMannBasis::new(d).unwrap();
        let base = f.povms[0].traceless_parts();
        for (b, u) in f.unitaries.iter().enumerate() {
            let r = rotation_from_unitary(u, &basis).unwrap();
            for (n, m) in f.povms[b].traceless_parts().iter().enumerate() {
                let src = nalgebra::DVector::from_vec(bloch_vector(&base[n], &basis).unwrap());
                let dst = bloch_vector(m, &basis).unwrap();
                let mapped = &r * src;
                prop_assert!(mapped.iter().zip(&dst).all(|(a, b)| (a - b).abs() <= 1e-8));
            }
        }
    }

    #[test]
    fn witness_reduced_form(d in prime_or_four(), frac in 0.0f64..=1.0, seed in any::<u64>(), pure in any::<bool>(), angle in 0.0f64..std::f64::consts::TAU) {
        let f = family(d, frac, seed);
        let rotations = if d == 3 {
            vec![rotation_d3(angle); f.len()]
        } else {
            vec![RotationFixingDiagonal::identity(d); f.len()]
        };
        let cfg = WitnessConfig::new(f, rotations, (0..d + 1).collect()).unwrap();
        let rho = state(d, seed.wrapping_add(1), pure);
        let direct = rho.expectation(&witness_matrix(&cfg));
        let reduced = cfg.excess_purity() - rho.expectation(&m_kappa(&cfg));
        let r = evaluate(&cfg, &rho).unwrap();
        prop_assert!((direct - reduced).abs() <= 1e-10);
        prop_assert!((direct - r.w_expectation).abs() <= 1e-10);
        for v in &r.block_values {
            prop_assert!(*v <= cfg.excess_purity() + 1e-10);
        }
    }

    #[test]
    fn isotropic_twirl_invariance(d in 2usize..=4, alpha in 0.0f64..1.0, seed in any::<u64>()) {
        let rho = isotropic(d, alpha).unwrap();
        let u = random_unitary(d, &mut rng(seed));
        let twirled = rho.local_conjugate(&conj(&u), &u);
        prop_assert!(max_abs_diff(&twirled.matrix, &rho.matrix) <= 1e-10);
    }

    #[test]
    fn rank_two_mixture_formula(seed in any::<u64>(), frac in 0.05f64..=1.0) {
        let mut g = rng(seed);
        let p = random_simplex(2, &mut g);
        let l0 = random_simplex(3, &mut g);
        let l1 = random_simplex(3, &mut g);
        let rho = mub_schmidt_mixture(&[(p[0], l0.clone()), (p[1], l1.clone())], 3).unwrap();
        let f = family(3, frac, seed);
        let cfg = WitnessConfig::identity(f).with_blocks(vec![0, 1]).unwrap();
        let r = evaluate(&cfg, &rho).unwrap();
        let e0 = entanglement_monotone(&l0).unwrap();
        let e1 = entanglement_monotone(&l1).unwrap();
        let expect = cfg.excess_purity() * (1.0 + p[0] * e0 + p[1] * e1);
        prop_assert!((r.m_total - expect).abs() <= 1e-8);
    }

    #[test]
    fn product_states_are_never_detected(d in prime_or_four(), frac in 0.0f64..=1.0, seed in any::<u64>(), angle in 0.0f64..std::f64::consts::TAU) {
        let f = family(d, frac, seed);
        let rotations = if d == 3 {
            (0..f.len()).map(|b| rotation_d3(angle * (b + 1) as f64)).collect()
        } else {
            vec![RotationFixingDiagonal::identity(d); f.len()]
        };
        let cfg = WitnessConfig::new(f, rotations, (0..d + 1).collect()).unwrap();
        let mut g = rng(seed.wrapping_mul(3));
        let a = random_density(d, &mut g);
        let b = random_density(d, &mut g);
        let herm = |m: CMatrix| (&m + m.adjoint()) * C64::new(0.5, 0.0);
        let rho = DensityMatrix::product(&herm(a), &herm(b)).unwrap();
        prop_assert!(evaluate(&cfg, &rho).unwrap().w_expectation >= -1e-10);
    }
}

#[test]
fn dicke_schmidt_normalization() {
    for n in 1..=6 {
        for k in 0..=2 * n {
            let l = dicke_schmidt(2 * n, k).unwrap();
            assert!((l.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn pure_states_saturate_aligned_block() {
    let f = family(3, 0.6, 77);
    let cfg = WitnessConfig::identity(f).with_blocks(vec![0]).unwrap();
    let mut g = rng(78);
    for _ in 0..50 {
        let psi = random_pure_state(9, &mut g);
        let sv = mumkit::linalg::schmidt_decompose(&psi, (3, 3)).unwrap();
        let (wa, wb) = sv.aligning_unitaries();
        let rho = DensityMatrix::pure(&psi, (3, 3)).unwrap().local_conjugate(&wa, &wb);
        let v = evaluate(&cfg, &rho).unwrap().block_values[0];
        assert!((v - cfg.excess_purity()).abs() <= 1e-10);
    }
}
