//! Reduced expectation vectors, h-purity, and the classification of
//! generalized unentangled states.
//!
//! A pure state's reduced state relative to an algebra is the real vector
//! of its expectations over the orthonormal basis; h-purity is K times its
//! squared norm. For irreducibly represented algebras the states of maximal
//! purity coincide with the unique ground states of algebra elements and
//! with lowest-weight vectors, which `ground_state_check` and
//! `lowest_weight_check` test directly.

use ndarray::Array2;
use num_complex::Complex64;

use crate::algebra::ObservableAlgebra;
use crate::error::{CoreError, CoreResult};
use crate::linalg::{hermitian_eig, partial_trace, Operator};
use crate::states::{DensityMatrix, PureState, State};
use crate::tol;

/// Expectations of the distinguished observables: all the algebra retains
/// of a state.
#[derive(Debug, Clone)]
pub struct ReducedState<'a> {
    pub algebra: &'a ObservableAlgebra,
    pub expectations: Vec<f64>,
}

impl ReducedState<'_> {
    /// K * ||expectations||^2, the purity of the underlying state when it
    /// was pure.
    pub fn squared_radius(&self) -> f64 {
        self.algebra.k_norm() * self.expectations.iter().map(|e| e * e).sum::<f64>()
    }
}

/// Reduce a pure or mixed state to its expectation vector.
pub fn reduce<'a>(state: &State, alg: &'a ObservableAlgebra) -> CoreResult<ReducedState<'a>> {
    let expectations = match state {
        State::Pure(psi) => alg.expectations_pure(psi)?,
        State::Mixed(rho) => alg.expectations_density(rho)?,
    };
    Ok(ReducedState {
        algebra: alg,
        expectations,
    })
}

pub fn reduce_pure<'a>(psi: &PureState, alg: &'a ObservableAlgebra) -> CoreResult<ReducedState<'a>> {
    Ok(ReducedState {
        algebra: alg,
        expectations: alg.expectations_pure(psi)?,
    })
}

/// Purity of |psi> relative to the algebra: K * sum_i <x_i>^2, in [0, 1].
pub fn h_purity(psi: &PureState, alg: &ObservableAlgebra) -> CoreResult<f64> {
    let e = alg.expectations_pure(psi)?;
    let p = alg.k_norm() * e.iter().map(|x| x * x).sum::<f64>();
    if !(0.0..=1.0 + tol::PURITY_TOL).contains(&p) {
        return Err(CoreError::InvalidParameter(format!(
            "purity {p} outside [0, 1]; algebra normalization violated"
        )));
    }
    Ok(p)
}

/// Global multipartite entanglement Q = (2/N) sum_i (1 - tr rho_i^2),
/// computed independently through single-qubit partial traces so it can
/// serve as a cross-oracle for 1 - h_purity on the local qubit algebra.
pub fn meyer_wallach(psi: &PureState) -> CoreResult<f64> {
    let dim = psi.dim();
    let n = dim.trailing_zeros() as usize;
    if dim == 0 || dim != (1usize << n) {
        return Err(CoreError::InvalidParameter(format!(
            "meyer_wallach needs a 2^N dimensional state, got {dim}"
        )));
    }
    let rho = DensityMatrix::from_pure(psi);
    let dims = vec![2usize; n];
    let mut acc = 0.0;
    for site in 0..n {
        let r = partial_trace(rho.matrix(), &dims, &[site])?;
        let mut tr2 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                tr2 += (r[[i, j]] * r[[j, i]]).re;
            }
        }
        acc += 1.0 - tr2;
    }
    Ok(2.0 / n as f64 * acc)
}

/// True when the state attains maximal purity within tolerance.
pub fn is_unentangled(psi: &PureState, alg: &ObservableAlgebra, tol: f64) -> CoreResult<bool> {
    Ok(h_purity(psi, alg)? >= 1.0 - tol)
}

/// Outcome of the unique-ground-state characterization.
#[derive(Debug, Clone)]
pub struct GroundCheck {
    /// Ground level of H = -sum <x_i> x_i is nondegenerate.
    pub nondegenerate: bool,
    /// |<psi | ground>|^2 against the computed ground vector.
    pub overlap: f64,
    /// Gap between the two lowest eigenvalues of H.
    pub gap: f64,
    /// Spectral width, the scale the gap is judged against.
    pub width: f64,
}

impl GroundCheck {
    /// The state is the unique ground state of an algebra element.
    pub fn is_unique_ground(&self) -> bool {
        self.nondegenerate && self.overlap > 1.0 - tol::PURITY_TOL
    }
}

/// Build H = -sum_i <x_i> x_i from the state's own reduced vector and test
/// whether the state spans a nondegenerate ground level of it.
///
/// A zero reduced vector gives H = 0, reported as not unique.
pub fn ground_state_check(psi: &PureState, alg: &ObservableAlgebra) -> CoreResult<GroundCheck> {
    let e = alg.expectations_pure(psi)?;
    let norm2: f64 = e.iter().map(|x| x * x).sum();
    if norm2 < 1e-20 {
        return Ok(GroundCheck {
            nondegenerate: false,
            overlap: 0.0,
            gap: 0.0,
            width: 0.0,
        });
    }
    let basis = alg.materialize()?;
    let mut h = Operator::zeros(alg.dim());
    for (coef, op) in e.iter().zip(basis.iter()) {
        h = h.add(&op.scale(Complex64::new(-coef, 0.0)))?;
    }
    let spec = hermitian_eig(&h)?;
    let width = spec.spectral_width();
    let gap = spec.eigenvalues[1] - spec.eigenvalues[0];
    let nondegenerate = gap > tol::GAP_REL_TOL * width && width > 0.0;
    let ground = spec.eigenvector(0);
    let overlap = psi
        .amplitudes()
        .iter()
        .zip(ground.iter())
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        .norm_sqr();
    Ok(GroundCheck {
        nondegenerate,
        overlap,
        gap,
        width,
    })
}

/// True when every provided lowering operator annihilates the state.
pub fn lowest_weight_check(psi: &PureState, alg: &ObservableAlgebra) -> CoreResult<bool> {
    let lowering = alg.lowering_ops().ok_or_else(|| CoreError::UnsupportedAlgebra {
        algebra: alg.name().to_string(),
        reason: "no lowering operators attached".into(),
    })?;
    for op in lowering {
        if op.dim() != psi.dim() {
            return Err(CoreError::DimensionMismatch {
                context: "lowest_weight_check",
                expected: psi.dim(),
                got: op.dim(),
            });
        }
        let image = op.apply(psi.amplitudes());
        let norm = image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm >= tol::PURITY_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bundle of per-state results for the equivalence suite.
#[derive(Debug, Clone)]
pub struct TheoremCase {
    pub label: String,
    pub purity: f64,
    pub unique_ground: bool,
    pub gap: f64,
}

/// Numerical consistency suite for the maximal-purity / unique-ground-state
/// equivalence on an irreducibly represented algebra: orbit states of the
/// reference must pass both sides, generic random states must fail both.
pub fn theorem_equivalence_suite(
    alg: &ObservableAlgebra,
    orbit_states: usize,
    random_states: usize,
    seed: u64,
) -> CoreResult<TheoremReport> {
    use rand::SeedableRng;
    if !alg.is_irreducible() {
        return Err(CoreError::UnsupportedAlgebra {
            algebra: alg.name().to_string(),
            reason: "equivalence assertions are restricted to irreducible representations".into(),
        });
    }
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    let mut counterexamples = 0usize;

    for k in 0..orbit_states {
        let psi = alg.random_orbit_state(&mut rng, 0.8)?;
        let p = h_purity(&psi, alg)?;
        let check = ground_state_check(&psi, alg)?;
        let ok = (p - 1.0).abs() <= tol::PURITY_TOL && check.is_unique_ground();
        if !ok {
            counterexamples += 1;
        }
        cases.push(TheoremCase {
            label: format!("orbit-{k}"),
            purity: p,
            unique_ground: check.is_unique_ground(),
            gap: check.gap,
        });
    }

    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < random_states && attempts < random_states * 40 {
        attempts += 1;
        let psi = crate::states::haar_random_with(alg.dim(), &mut rng)?;
        let p = h_purity(&psi, alg)?;
        if p >= 1.0 - 1e-3 {
            // Too close to the coherent manifold to be a clean negative case.
            continue;
        }
        accepted += 1;
        let check = ground_state_check(&psi, alg)?;
        if check.is_unique_ground() {
            counterexamples += 1;
        }
        cases.push(TheoremCase {
            label: format!("random-{accepted}"),
            purity: p,
            unique_ground: check.is_unique_ground(),
            gap: check.gap,
        });
    }

    Ok(TheoremReport {
        algebra: alg.name().to_string(),
        cases,
        counterexamples,
    })
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub algebra: String,
    pub cases: Vec<TheoremCase>,
    pub counterexamples: usize,
}

/// tr(rho_a^2) of the first factor of a bipartite pure state; used by
/// callers relating bipartite purity to the conventional mixedness of the
/// subsystem state.
pub fn first_factor_trace_square(psi: &PureState, m: usize, n: usize) -> CoreResult<f64> {
    if m * n != psi.dim() {
        return Err(CoreError::DimensionMismatch {
            context: "first_factor_trace_square",
            expected: psi.dim(),
            got: m * n,
        });
    }
    let rho = DensityMatrix::from_pure(psi);
    let ra: Array2<Complex64> = partial_trace(rho.matrix(), &[m, n], &[0])?;
    let mut tr2 = 0.0;
    for i in 0..m {
        for j in 0..m {
            tr2 += (ra[[i, j]] * ra[[j, i]]).re;
        }
    }
    Ok(tr2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        bipartite_algebra, fermion_u_algebra, local_qubit_algebra, spin_algebra,
    };
    use crate::states::{all_up, ghz, haar_random, haar_random_with, w_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn spin_one_zero_state_reduces_to_origin() {
        let alg = spin_algebra(1.0, 1).unwrap();
        let zero = PureState::basis_state(3, 1).unwrap();
        let red = reduce_pure(&zero, &alg).unwrap();
        for e in &red.expectations {
            assert!(e.abs() < 1e-14);
        }
    }

    #[test]
    fn qubit_reductions_fill_the_bloch_ball() {
        // sqrt(K) * ||expectations|| <= 1 with equality only for pure
        // reduced states.
        let alg = spin_algebra(0.5, 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..200 {
            let psi = haar_random_with(2, &mut rng).unwrap();
            let red = reduce_pure(&psi, &alg).unwrap();
            let r2 = red.squared_radius();
            assert!(r2 <= 1.0 + 1e-10);
            assert!(r2 >= 1.0 - 1e-10, "qubit pure states sit on the sphere");
        }
    }

    #[test]
    fn maximally_mixed_reduces_to_zero() {
        let alg = local_qubit_algebra(2).unwrap();
        let rho = DensityMatrix::maximally_mixed(4);
        let red = reduce(&State::Mixed(rho), &alg).unwrap();
        for e in &red.expectations {
            assert!(e.abs() < 1e-14);
        }
    }

    #[test]
    fn closed_form_purities() {
        for n in 2..=6usize {
            let alg = local_qubit_algebra(n).unwrap();
            let g = ghz(n).unwrap();
            assert!(h_purity(&g, &alg).unwrap().abs() < 1e-12);
            let w = w_state(n).unwrap();
            let expect = ((n as f64 - 2.0) / n as f64).powi(2);
            assert!((h_purity(&w, &alg).unwrap() - expect).abs() < 1e-12);
            let up = all_up(n).unwrap();
            assert!((h_purity(&up, &alg).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bipartite_purity_affine_in_subsystem_trace_square() {
        // Regression over random two-qubit states: P = a * tr(rho_a^2) + b.
        let alg = bipartite_algebra(2, 2).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for _ in 0..60 {
            let psi = haar_random_with(4, &mut rng).unwrap();
            xs.push(first_factor_trace_square(&psi, 2, 2).unwrap());
            ys.push(h_purity(&psi, &alg).unwrap());
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        // Derived closed form for m=n=2: P = 2 tr(rho_a^2) - 1.
        assert!((slope - 2.0).abs() < 1e-9, "slope {slope}");
        assert!((intercept + 1.0).abs() < 1e-9, "intercept {intercept}");
        for (x, y) in xs.iter().zip(&ys) {
            assert!((y - (2.0 * x - 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn meyer_wallach_cases() {
        let up = all_up(4).unwrap();
        assert!(meyer_wallach(&up).unwrap().abs() < 1e-13);
        for n in 2..=5usize {
            let g = ghz(n).unwrap();
            assert!((meyer_wallach(&g).unwrap() - 1.0).abs() < 1e-12);
        }
        // Coincidence with 1 - P on random states.
        let mut rng = ChaCha20Rng::seed_from_u64(51);
        for n in 2..=5usize {
            let alg = local_qubit_algebra(n).unwrap();
            for _ in 0..20 {
                let psi = haar_random_with(1 << n, &mut rng).unwrap();
                let q = meyer_wallach(&psi).unwrap();
                let p = h_purity(&psi, &alg).unwrap();
                assert!((q - (1.0 - p)).abs() < 1e-10);
            }
        }
        assert!(meyer_wallach(&PureState::basis_state(3, 0).unwrap()).is_err());
    }

    #[test]
    fn unentangled_classification() {
        let alg = spin_algebra(1.0, 1).unwrap();
        let plus = PureState::basis_state(3, 0).unwrap();
        assert!(is_unentangled(&plus, &alg, tol::PURITY_TOL).unwrap());
        let zero = PureState::basis_state(3, 1).unwrap();
        assert!(!is_unentangled(&zero, &alg, tol::PURITY_TOL).unwrap());

        let lq3 = local_qubit_algebra(3).unwrap();
        assert!(!is_unentangled(&w_state(3).unwrap(), &lq3, tol::PURITY_TOL).unwrap());
    }

    #[test]
    fn ground_check_examples() {
        let alg = local_qubit_algebra(3).unwrap();
        let up = all_up(3).unwrap();
        let check = ground_state_check(&up, &alg).unwrap();
        assert!(check.is_unique_ground());
        assert!(check.gap > 0.0);

        // GHZ has a vanishing reduced vector: H = 0, reported not unique.
        let g = ghz(3).unwrap();
        let check = ground_state_check(&g, &alg).unwrap();
        assert!(!check.is_unique_ground());
        assert_eq!(check.gap, 0.0);

        // A random orbit point passes.
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let orbit = alg.random_orbit_state(&mut rng, 0.7).unwrap();
        assert!(ground_state_check(&orbit, &alg).unwrap().is_unique_ground());
    }

    #[test]
    fn lowest_weight_examples() {
        let alg = local_qubit_algebra(3).unwrap();
        let down = PureState::basis_state(8, 7).unwrap();
        assert!(lowest_weight_check(&down, &alg).unwrap());
        assert!(!lowest_weight_check(&w_state(3).unwrap(), &alg).unwrap());

        let spin = spin_algebra(1.0, 1).unwrap();
        let lowest = PureState::basis_state(3, 2).unwrap();
        assert!(lowest_weight_check(&lowest, &spin).unwrap());

        let fer = fermion_u_algebra(7).unwrap();
        assert!(matches!(
            lowest_weight_check(&PureState::basis_state(128, 0).unwrap(), &fer),
            Err(CoreError::UnsupportedAlgebra { .. })
        ));
    }

    #[test]
    fn equivalence_suite_small() {
        for alg in [
            local_qubit_algebra(2).unwrap(),
            spin_algebra(1.0, 1).unwrap(),
            bipartite_algebra(2, 3).unwrap(),
        ] {
            let report = theorem_equivalence_suite(&alg, 25, 25, 17).unwrap();
            assert_eq!(report.counterexamples, 0, "algebra {}", report.algebra);
        }
        // Reducible representations are refused.
        let coll = spin_algebra(1.0, 2).unwrap();
        assert!(theorem_equivalence_suite(&coll, 5, 5, 1).is_err());
    }

    #[test]
    fn purity_group_invariance() {
        let alg = local_qubit_algebra(3).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let psi = haar_random(8, 3).unwrap();
        let p = h_purity(&psi, &alg).unwrap();
        for _ in 0..5 {
            let u = alg.random_group_unitary(&mut rng, 0.5).unwrap();
            let moved = psi.apply(&u).unwrap();
            assert!((h_purity(&moved, &alg).unwrap() - p).abs() < 1e-9);
        }
    }
}
