use homport::fock::{self, enumerate_configs, full_distribution, ParticleStatistics};
use homport::matrix::ComplexMatrix;
use homport::matrixfn::reference::naive_permanent;
use homport::matrixfn::{determinant, permanent};
use homport::multiport::{
    build_dft, build_lambda, compose_network, cycle_columns, is_unitary, phase_diagonal, random_unitary,
    NetworkElement,
};
use homport::oracle::expand_output_state;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use ParticleStatistics::{Boson, Fermion};

/// `perm(F_n)` of the unnormalized Fourier matrix for odd `n`, from a
/// 40-digit Ryser evaluation; scaled by `n^{-n/2}` below.
const ODD_FOURIER_PERMANENTS: [(usize, f64); 7] = [
    (3, -3.0),
    (5, -5.0),
    (7, -105.0),
    (9, 81.0),
    (11, 6765.0),
    (13, 175747.0),
    (15, 30375.0),
];

#[test]
fn dft_unitary_and_symmetric_up_to_16() {
    for n in 1..=16 {
        let u = build_dft(n).unwrap();
        assert!(is_unitary(&u, 1e-12), "n={n}");
        assert!(u.max_abs_diff(&u.transpose()).unwrap() <= 1e-15, "n={n}");
    }
}

#[test]
fn lambda_cycles_dft_columns_up_to_16() {
    for n in 1..=16 {
        let u = build_dft(n).unwrap();
        let lu = build_lambda(n).unwrap().mul(&u).unwrap();
        // 1-based: (ΛU)_{ji} = U_{j, mod_n(i)+1}
        for j in 1..=n {
            for i in 1..=n {
                let shifted = i % n + 1;
                assert!((lu.get(j - 1, i - 1) - u.get(j - 1, shifted - 1)).norm() <= 1e-15);
            }
        }
        assert!(lu.max_abs_diff(&cycle_columns(&u)).unwrap() <= 1e-15);
    }
}

#[test]
fn cyclic_permanent_identities_up_to_12() {
    for n in 1..=12 {
        let u = build_dft(n).unwrap();
        let lambda = build_lambda(n).unwrap();
        let lu = lambda.mul(&u).unwrap();
        let (pu, plu, pl) = (permanent(&u).unwrap(), permanent(&lu).unwrap(), permanent(&lambda).unwrap());
        assert!((pu - plu).norm() <= 1e-12, "n={n}");
        assert!((plu - pl * pu).norm() <= 1e-12, "n={n}");
    }
}

#[test]
fn even_dft_permanents_vanish() {
    for n in (2..=16).step_by(2) {
        let p = permanent(&build_dft(n).unwrap()).unwrap();
        assert!(p.norm() <= 1e-9 * n as f64, "n={n} |perm|={:e}", p.norm());
        assert!(p.norm_sqr() <= 1e-15);
    }
}

#[test]
fn odd_dft_permanents_match_exact_values() {
    for (n, integer) in ODD_FOURIER_PERMANENTS {
        let want = integer / (n as f64).powf(n as f64 / 2.0);
        let got = permanent(&build_dft(n).unwrap()).unwrap();
        assert!((got - Complex64::new(want, 0.0)).norm() <= 1e-12 * want.abs().max(1.0), "n={n}");
        assert!(got.norm() > 1e-9 * n as f64, "n={n} must not read as vanishing");
    }
}

#[test]
fn unitary_determinants_have_unit_modulus() {
    let mut rng = StdRng::seed_from_u64(31);
    for n in 1..=12 {
        for _ in 0..5 {
            let u = random_unitary(n, &mut rng).unwrap();
            assert!(is_unitary(&u, 1e-12));
            assert!((determinant(&u).norm() - 1.0).abs() <= 1e-10, "n={n}");
        }
    }
}

#[test]
fn distributions_normalized_up_to_8() {
    let mut rng = StdRng::seed_from_u64(41);
    for n in 1..=8 {
        let mut matrices = vec![build_dft(n).unwrap()];
        matrices.push(random_unitary(n, &mut rng).unwrap());
        for u in &matrices {
            for stats in [Boson, Fermion] {
                let d = full_distribution(u, stats).unwrap();
                assert!((d.total() - 1.0).abs() <= 1e-10, "n={n} {stats}");
                assert_eq!(d.entries().len(), enumerate_configs(n, stats).len());
            }
            let f = full_distribution(u, Fermion).unwrap();
            assert_eq!(f.entries().len(), 1);
            assert!((f.entries()[0].probability - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn boson_coincidence_parity_up_to_16() {
    for n in 2..=16 {
        let p = fock::coincidence_probability(&build_dft(n).unwrap(), Boson).unwrap();
        if n % 2 == 0 {
            assert!(p <= 1e-15, "n={n} p={p:e}");
        } else {
            assert!(p > 1e-15, "n={n} p={p:e}");
        }
    }
}

#[test]
fn oracle_agrees_with_fock_up_to_5() {
    let mut rng = StdRng::seed_from_u64(51);
    for n in 1..=5 {
        for _ in 0..4 {
            let u = random_unitary(n, &mut rng).unwrap();
            for stats in [Boson, Fermion] {
                let form = expand_output_state(&u, stats).unwrap();
                for e in full_distribution(&u, stats).unwrap().entries() {
                    assert!((form.amplitude(&e.config) - e.amplitude).norm() <= 1e-10, "n={n} {}", e.config);
                }
            }
        }
    }
}

fn phases(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-std::f64::consts::PI..std::f64::consts::PI, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn probabilities_ignore_port_phases(
        (n, seed, input, output) in (1usize..=6, any::<u64>())
            .prop_flat_map(|(n, seed)| (Just(n), Just(seed), phases(n), phases(n)))
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let u = random_unitary(n, &mut rng).unwrap();
        let twisted = phase_diagonal(&output).unwrap()
            .mul(&u).unwrap()
            .mul(&phase_diagonal(&input).unwrap()).unwrap();
        for stats in [Boson, Fermion] {
            let a = full_distribution(&u, stats).unwrap();
            let b = full_distribution(&twisted, stats).unwrap();
            for (x, y) in a.entries().iter().zip(b.entries()) {
                prop_assert_eq!(&x.config, &y.config);
                prop_assert!((x.probability - y.probability).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn ryser_matches_permutation_sum(
        (n, entries) in (1usize..=6).prop_flat_map(|n| (Just(n), prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n)))
    ) {
        let m = ComplexMatrix::new(n, entries.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap();
        let fast = permanent(&m).unwrap();
        let slow = naive_permanent(&m);
        prop_assert!((fast - slow).norm() <= 1e-12 * slow.norm().max(1.0));
    }

    #[test]
    fn composed_networks_are_unitary(
        n in 2usize..=8,
        raw in prop::collection::vec((0usize..64, 0usize..64, -3.2f64..3.2, -3.2f64..3.2, any::<bool>()), 0..40)
    ) {
        let elements: Vec<NetworkElement> = raw
            .into_iter()
            .map(|(a, b, theta, phi, is_plate)| {
                let p = a % n + 1;
                if is_plate {
                    NetworkElement::phase_plate(p, phi)
                } else {
                    let q = (p + b % (n - 1)) % n + 1;
                    let (s, c) = theta.sin_cos();
                    let e = Complex64::from_polar(1.0, phi);
                    NetworkElement::beam_splitter(p, q, [[e * c, Complex64::new(-s, 0.0)], [e * s, Complex64::new(c, 0.0)]])
                }
            })
            .collect();
        let m = compose_network(n, &elements).unwrap();
        prop_assert!(is_unitary(&m, 1e-12));
    }

    #[test]
    fn matrix_text_round_trips(
        (n, entries) in (1usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec((any::<f64>(), any::<f64>()), n * n)))
    ) {
        prop_assume!(entries.iter().all(|(a, b)| a.is_finite() && b.is_finite()));
        let m = ComplexMatrix::new(n, entries.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap();
        let back = ComplexMatrix::parse_text(&m.to_text()).unwrap();
        for (x, y) in m.as_slice().iter().zip(back.as_slice()) {
            // Negative zero is written as 0.
            prop_assert_eq!(x.re + 0.0, y.re);
            prop_assert_eq!(x.im + 0.0, y.im);
        }
    }
}
