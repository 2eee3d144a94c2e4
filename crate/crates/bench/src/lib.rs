//! Shared fixtures for the benchmark targets.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use hpurity::Operator;

/// Dense random Hermitian matrix with entries in [-1/2, 1/2].
pub fn random_hermitian(n: usize, seed: u64) -> Operator {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut m = Array2::<Complex64>::zeros((n, n));
    for i in 0..n {
        m[[i, i]] = Complex64::new(rng.random::<f64>() - 0.5, 0.0);
        for j in (i + 1)..n {
            let z = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            m[[i, j]] = z;
            m[[j, i]] = z.conj();
        }
    }
    Operator::hermitian(m).expect("random hermitian")
}
