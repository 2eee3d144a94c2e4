use super::*;
use crate::algebra::{local_qubit_algebra, spin_algebra};
use crate::purity::h_purity;
use crate::states::{ghz, haar_random, haar_random_with, product_state, werner};
use rand::SeedableRng;

#[test]
fn mixedness_closed_forms() {
    for m in [MixednessMeasure::Entropy, MixednessMeasure::Renyi] {
        assert_eq!(mixedness(&[1.0, 0.0, 0.0], m).unwrap(), 0.0);
    }
    let quarter = [0.25; 4];
    assert!((mixedness(&quarter, MixednessMeasure::Entropy).unwrap() - 4.0f64.ln()).abs() < 1e-15);
    assert!((mixedness(&quarter, MixednessMeasure::Renyi).unwrap() - 0.75).abs() < 1e-15);
    assert!((mixedness(&[0.5, 0.5], MixednessMeasure::Renyi).unwrap() - 0.5).abs() < 1e-15);
    assert!(mixedness(&[-0.1, 1.1], MixednessMeasure::Renyi).is_err());
    assert!(mixedness(&[0.3, 0.3], MixednessMeasure::Renyi).is_err());
}

#[test]
fn mixedness_is_concave_and_permutation_invariant() {
    use rand::Rng;
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(12);
    let mut random_dist = |k: usize| -> Vec<f64> {
        let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect()
    };
    for m in [MixednessMeasure::Entropy, MixednessMeasure::Renyi] {
        for _ in 0..50 {
            let p = random_dist(5);
            let q = random_dist(5);
            let lam = 0.37;
            let mixed: Vec<f64> = p
                .iter()
                .zip(&q)
                .map(|(a, b)| lam * a + (1.0 - lam) * b)
                .collect();
            let lhs = mixedness(&mixed, m).unwrap();
            let rhs = lam * mixedness(&p, m).unwrap() + (1.0 - lam) * mixedness(&q, m).unwrap();
            assert!(lhs >= rhs - 1e-12, "concavity violated: {lhs} < {rhs}");

            let mut shuffled = p.clone();
            shuffled.swap(0, 3);
            shuffled.swap(1, 4);
            assert!((mixedness(&shuffled, m).unwrap() - mixedness(&p, m).unwrap()).abs() < 1e-12);
        }
    }
}

fn quick_opts() -> RoofOptions {
    RoofOptions {
        restarts: 12,
        ..RoofOptions::default()
    }
}

#[test]
fn roof_on_pure_state_is_exact() {
    let alg = local_qubit_algebra(2).unwrap();
    let psi = haar_random(4, 11).unwrap();
    let rho = DensityMatrix::from_pure(&psi);
    let res = roof_purity_deficit(&rho, &alg, &quick_opts()).unwrap();
    let expect = 1.0 - h_purity(&psi, &alg).unwrap();
    assert!((res.value - expect).abs() < 1e-12);
    assert_eq!(res.ensemble.states.len(), 1);
    assert!(res.ensemble.reconstruction_error(&rho) < 1e-10);
}

#[test]
fn roof_vanishes_on_separable_mixture() {
    let alg = local_qubit_algebra(2).unwrap();
    let a = product_state(&[[0.0, 0.0, 1.0], [0.0, 0.0, 1.0]]).unwrap();
    let b = product_state(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
    let rho = DensityMatrix::mixture(&[(0.4, a), (0.6, b)]).unwrap();
    let res = roof_purity_deficit(&rho, &alg, &quick_opts()).unwrap();
    assert!(res.value < 2e-2, "separable roof {}", res.value);
    assert!(res.value <= res.baseline + 1e-12);
    assert!(res.ensemble.reconstruction_error(&rho) < 1e-8);
}

#[test]
fn roof_matches_squared_concurrence_on_werner_states() {
    let alg = local_qubit_algebra(2).unwrap();
    for p in [0.0, 0.5, 0.8] {
        let rho = werner(p).unwrap();
        let c = wootters_concurrence(&rho).unwrap();
        let res = roof_purity_deficit(&rho, &alg, &quick_opts()).unwrap();
        assert!(
            (res.value - c * c).abs() < 2e-2,
            "werner p={p}: roof {} vs C^2 {}",
            res.value,
            c * c
        );
        assert!(res.ensemble.reconstruction_error(&rho) < 1e-8);
    }
}

#[test]
fn roof_is_convex_under_mixing() {
    let alg = local_qubit_algebra(2).unwrap();
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(7);
    let opts = quick_opts();
    for trial in 0..3 {
        let a = haar_random_with(4, &mut rng).unwrap();
        let b = haar_random_with(4, &mut rng).unwrap();
        let rho_a = DensityMatrix::mixture(&[(0.55, a.clone()), (0.45, b.clone())]).unwrap();
        let c = haar_random_with(4, &mut rng).unwrap();
        let rho_b = DensityMatrix::mixture(&[(0.5, c.clone()), (0.5, a.clone())]).unwrap();
        let p = 0.35;
        let mixed = DensityMatrix::mixture(&[
            (p * 0.55, a.clone()),
            (p * 0.45, b),
            ((1.0 - p) * 0.5, c),
            ((1.0 - p) * 0.5, a),
        ])
        .unwrap();
        let va = roof_purity_deficit(&rho_a, &alg, &opts).unwrap().value;
        let vb = roof_purity_deficit(&rho_b, &alg, &opts).unwrap().value;
        let vm = roof_purity_deficit(&mixed, &alg, &opts).unwrap().value;
        assert!(
            vm <= p * va + (1.0 - p) * vb + 2.0 * opts.value_tol,
            "trial {trial}: {vm} vs {}",
            p * va + (1.0 - p) * vb
        );
    }
}

#[test]
fn roof_invariant_under_group_unitaries() {
    let alg = local_qubit_algebra(2).unwrap();
    let opts = quick_opts();
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(23);
    let a = haar_random_with(4, &mut rng).unwrap();
    let b = haar_random_with(4, &mut rng).unwrap();
    let rho = DensityMatrix::mixture(&[(0.7, a), (0.3, b)]).unwrap();
    let before = roof_purity_deficit(&rho, &alg, &opts).unwrap().value;
    let u = alg.random_group_unitary(&mut rng, 0.8).unwrap();
    let moved = u
        .matmul(&Operator::hermitian(rho.matrix().clone()).unwrap())
        .unwrap()
        .matmul(&u.adjoint())
        .unwrap();
    let rho_u = DensityMatrix::new(moved.into_matrix()).unwrap();
    let after = roof_purity_deficit(&rho_u, &alg, &opts).unwrap().value;
    assert!(
        (before - after).abs() <= 2.0 * opts.value_tol,
        "{before} vs {after}"
    );
}

#[test]
fn wootters_closed_forms() {
    let bell = DensityMatrix::from_pure(&ghz(2).unwrap());
    assert!((wootters_concurrence(&bell).unwrap() - 1.0).abs() < 1e-10);

    let prod = DensityMatrix::from_pure(
        &product_state(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]).unwrap(),
    );
    assert!(wootters_concurrence(&prod).unwrap() < 1e-10);

    // Werner family: C = max(0, (3p-1)/2).
    for p in [0.0, 0.25, 0.5, 0.8, 1.0] {
        let c = wootters_concurrence(&werner(p).unwrap()).unwrap();
        let expect = ((3.0 * p - 1.0) / 2.0).max(0.0);
        assert!((c - expect).abs() < 1e-10, "p={p}: {c} vs {expect}");
    }
    assert!(wootters_concurrence(&DensityMatrix::maximally_mixed(8)).is_err());
}

#[test]
fn squared_concurrence_equals_purity_deficit_on_pure_states() {
    let alg = local_qubit_algebra(2).unwrap();
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
    for _ in 0..40 {
        let psi = haar_random_with(4, &mut rng).unwrap();
        let c = wootters_concurrence(&DensityMatrix::from_pure(&psi)).unwrap();
        let p = h_purity(&psi, &alg).unwrap();
        assert!((c * c - (1.0 - p)).abs() < 1e-9);
    }
}

/// Brute-force oracle: minimize sigma over two-point chords through mu on
/// a deterministic direction grid (25 x 40 = 1000 directions, poles
/// included so the radial chord is sampled exactly).
fn chord_oracle(mu: &[f64; 3], r_max: f64, measure: MixednessMeasure) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..=24 {
        let theta = i as f64 * std::f64::consts::PI / 24.0;
        for j in 0..40 {
            let phi = j as f64 * std::f64::consts::TAU / 40.0;
            let d = [
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ];
            let mu_d: f64 = mu.iter().zip(&d).map(|(a, b)| a * b).sum();
            let mu2: f64 = mu.iter().map(|x| x * x).sum();
            let disc = mu_d * mu_d - (mu2 - r_max * r_max);
            if disc < 0.0 {
                continue;
            }
            let t_plus = -mu_d + disc.sqrt();
            let t_minus = -mu_d - disc.sqrt();
            if t_plus - t_minus < 1e-15 {
                continue;
            }
            let p = -t_minus / (t_plus - t_minus);
            best = best.min(measure.eval(&[p, 1.0 - p]));
        }
    }
    best
}

fn qubit_at_radius(r: f64) -> DensityMatrix {
    let mut m = Array2::<Complex64>::zeros((2, 2));
    m[[0, 0]] = Complex64::new((1.0 + r) / 2.0, 0.0);
    m[[1, 1]] = Complex64::new((1.0 - r) / 2.0, 0.0);
    DensityMatrix::new(m).unwrap()
}

#[test]
fn reduced_mixedness_chord_cases() {
    let alg = spin_algebra(0.5, 1).unwrap();
    let opts = ChordOptions::default();
    let r_max = 1.0 / alg.k_norm().sqrt();

    // Boundary point: already a pure reduced state.
    let boundary = qubit_at_radius(1.0);
    let res = reduced_mixedness(&boundary, &alg, MixednessMeasure::Renyi, &opts).unwrap();
    assert!(res.value < 1e-6, "boundary sigma {}", res.value);
    assert!(res.residual < 1e-4);

    // Interior point at radius r: optimal chord gives (1 - r^2)/2, matched
    // against the direction-scan oracle.
    for r in [0.3, 0.6, 0.9] {
        let rho = qubit_at_radius(r);
        let mu = alg.expectations_density(&rho).unwrap();
        let res = reduced_mixedness(&rho, &alg, MixednessMeasure::Renyi, &opts).unwrap();
        let oracle = chord_oracle(&[mu[0], mu[1], mu[2]], r_max, MixednessMeasure::Renyi);
        let closed = (1.0 - r * r) / 2.0;
        assert!((oracle - closed).abs() < 1e-9, "oracle {oracle} vs {closed}");
        assert!((res.value - closed).abs() < 5e-3, "r={r}: {} vs {closed}", res.value);
        assert!(res.residual < 1e-3);
    }

    // Center of the ball: maximal sigma_1 = 1/2, entropy ln 2.
    let center = qubit_at_radius(0.0);
    let res = reduced_mixedness(&center, &alg, MixednessMeasure::Renyi, &opts).unwrap();
    assert!((res.value - 0.5).abs() < 5e-3, "center {}", res.value);
    let res = reduced_mixedness(&center, &alg, MixednessMeasure::Entropy, &opts).unwrap();
    assert!((res.value - 2.0f64.ln()).abs() < 5e-3);

    // Algebras without the ball geometry are refused.
    let lq2 = local_qubit_algebra(2).unwrap();
    assert!(matches!(
        reduced_mixedness(
            &DensityMatrix::maximally_mixed(4),
            &lq2,
            MixednessMeasure::Renyi,
            &opts
        ),
        Err(CoreError::UnsupportedAlgebra { .. })
    ));
}

#[test]
fn sigma_roof_on_qubit_states() {
    let alg = spin_algebra(0.5, 1).unwrap();
    let opts = quick_opts();
    // Pure qubit state: reduction sits on the sphere, sigma = 0.
    let psi = haar_random(2, 5).unwrap();
    let rho = DensityMatrix::from_pure(&psi);
    let res = sigma_roof(&rho, &alg, MixednessMeasure::Renyi, &opts).unwrap();
    assert!(res.value < 1e-9, "pure sigma roof {}", res.value);

    // Any qubit mixed state decomposes into two pure (boundary) states,
    // so the roof vanishes there as well.
    let mixed = qubit_at_radius(0.4);
    let res = sigma_roof(&mixed, &alg, MixednessMeasure::Renyi, &opts).unwrap();
    assert!(res.value < 1e-6, "mixed sigma roof {}", res.value);

    let lq2 = local_qubit_algebra(2).unwrap();
    assert!(sigma_roof(
        &DensityMatrix::maximally_mixed(4),
        &lq2,
        MixednessMeasure::Renyi,
        &opts
    )
    .is_err());
}

#[test]
fn rank_two_random_states_match_concurrence() {
    // Smaller copy of the acceptance sweep.
    let alg = local_qubit_algebra(2).unwrap();
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(31);
    let opts = quick_opts();
    for trial in 0..6 {
        let a = haar_random_with(4, &mut rng).unwrap();
        let b = haar_random_with(4, &mut rng).unwrap();
        use rand::Rng;
        let w: f64 = 0.2 + 0.6 * rng.random::<f64>();
        let rho = DensityMatrix::mixture(&[(w, a), (1.0 - w, b)]).unwrap();
        let c = wootters_concurrence(&rho).unwrap();
        let res = roof_purity_deficit(&rho, &alg, &opts).unwrap();
        assert!(
            (res.value - c * c).abs() < 2e-2,
            "trial {trial}: roof {} vs C^2 {}",
            res.value,
            c * c
        );
    }
}
