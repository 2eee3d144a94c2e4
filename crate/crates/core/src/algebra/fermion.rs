//! Jordan-Wigner representation of fermionic modes on the qubit register.
//!
//! Mode i lives on qubit i, and an occupied mode corresponds to spin-up,
//! i.e. bit value 0 under the crate-wide index convention. The Fock vacuum
//! is therefore the all-down basis state with index 2^n - 1. Annihilation
//! operators carry the string
//!     c_i = [prod_{k<i} (1 - 2 n_k)] a_i,
//! where a_i is the hard-core lowering operator at site i, so the sign of
//! an application is (-1)^(number of occupied modes before i).

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{CoreError, CoreResult};
use crate::linalg::Operator;

/// Bit mask of mode `i` in an `n`-mode register (qubit 0 most significant).
#[inline]
pub(crate) fn mode_mask(n: usize, i: usize) -> usize {
    1usize << (n - 1 - i)
}

/// Jordan-Wigner string sign: parity of the occupied modes preceding `i`.
#[inline]
fn string_sign(n: usize, idx: usize, i: usize) -> f64 {
    // Modes 0..i occupy the top i bits; zeros there are occupied modes.
    let top = idx >> (n - i);
    let occupied_before = i - (top.count_ones() as usize);
    if occupied_before.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// out = c_i |in>, allocated fresh.
pub(crate) fn apply_annihilation(n: usize, i: usize, input: &[Complex64]) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mask = mode_mask(n, i);
    let mut out = vec![Complex64::default(); dim];
    for idx in 0..dim {
        if idx & mask == 0 {
            let amp = input[idx];
            if amp != Complex64::default() {
                out[idx | mask] = amp * string_sign(n, idx, i);
            }
        }
    }
    out
}

/// out = c_i^dag |in>, allocated fresh.
pub fn apply_creation(n: usize, i: usize, input: &[Complex64]) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mask = mode_mask(n, i);
    let mut out = vec![Complex64::default(); dim];
    for idx in 0..dim {
        if idx & mask != 0 {
            let amp = input[idx];
            if amp != Complex64::default() {
                out[idx & !mask] = amp * string_sign(n, idx, i);
            }
        }
    }
    out
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// The bilinear generators of the fermionic algebras, unnormalized:
/// each family member has squared trace norm 2^n / 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FermionGenerator {
    /// n_i - 1/2
    Number(usize),
    /// (c^dag_i c_j + c^dag_j c_i) / sqrt(2), i < j
    HopRe(usize, usize),
    /// (c^dag_i c_j - c^dag_j c_i) / (i sqrt(2)), i < j
    HopIm(usize, usize),
    /// (c^dag_i c^dag_j + c_j c_i) / sqrt(2), i < j
    PairRe(usize, usize),
    /// (c^dag_i c^dag_j - c_j c_i) / (i sqrt(2)), i < j
    PairIm(usize, usize),
}

/// Generator list for u(n): numbers then hoppings, n^2 elements.
pub(crate) fn u_generators(n: usize) -> Vec<FermionGenerator> {
    let mut gens = Vec::with_capacity(n * n);
    for i in 0..n {
        gens.push(FermionGenerator::Number(i));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            gens.push(FermionGenerator::HopRe(i, j));
            gens.push(FermionGenerator::HopIm(i, j));
        }
    }
    gens
}

/// Generator list for so(2n): the u(n) set plus pairings, n(2n-1) elements.
pub(crate) fn so_generators(n: usize) -> Vec<FermionGenerator> {
    let mut gens = u_generators(n);
    for i in 0..n {
        for j in (i + 1)..n {
            gens.push(FermionGenerator::PairRe(i, j));
            gens.push(FermionGenerator::PairIm(i, j));
        }
    }
    gens
}

/// <psi| g |psi> for a generator, 4 * O(2^n) work.
pub(crate) fn generator_expectation(n: usize, gen: FermionGenerator, psi: &[Complex64]) -> f64 {
    let sqrt2 = std::f64::consts::SQRT_2;
    match gen {
        FermionGenerator::Number(i) => {
            let mask = mode_mask(n, i);
            let mut occ = 0.0;
            for (idx, amp) in psi.iter().enumerate() {
                if idx & mask == 0 {
                    occ += amp.norm_sqr();
                }
            }
            occ - 0.5
        }
        FermionGenerator::HopRe(i, j) => {
            let z = dot(psi, &apply_creation(n, i, &apply_annihilation(n, j, psi)));
            sqrt2 * z.re
        }
        FermionGenerator::HopIm(i, j) => {
            let z = dot(psi, &apply_creation(n, i, &apply_annihilation(n, j, psi)));
            sqrt2 * z.im
        }
        FermionGenerator::PairRe(i, j) => {
            let y = dot(psi, &apply_creation(n, i, &apply_creation(n, j, psi)));
            sqrt2 * y.re
        }
        FermionGenerator::PairIm(i, j) => {
            let y = dot(psi, &apply_creation(n, i, &apply_creation(n, j, psi)));
            sqrt2 * y.im
        }
    }
}

/// g |psi> for a generator.
pub(crate) fn apply_generator(n: usize, gen: FermionGenerator, psi: &[Complex64]) -> Vec<Complex64> {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    match gen {
        FermionGenerator::Number(i) => {
            let mask = mode_mask(n, i);
            psi.iter()
                .enumerate()
                .map(|(idx, amp)| {
                    if idx & mask == 0 {
                        amp * 0.5
                    } else {
                        amp * -0.5
                    }
                })
                .collect()
        }
        FermionGenerator::HopRe(i, j) => {
            let a = apply_creation(n, i, &apply_annihilation(n, j, psi));
            let b = apply_creation(n, j, &apply_annihilation(n, i, psi));
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| (x + y) * inv_sqrt2)
                .collect()
        }
        FermionGenerator::HopIm(i, j) => {
            let a = apply_creation(n, i, &apply_annihilation(n, j, psi));
            let b = apply_creation(n, j, &apply_annihilation(n, i, psi));
            let m_i = Complex64::new(0.0, -1.0) * inv_sqrt2;
            a.iter().zip(b.iter()).map(|(x, y)| (x - y) * m_i).collect()
        }
        FermionGenerator::PairRe(i, j) => {
            let a = apply_creation(n, i, &apply_creation(n, j, psi));
            let b = apply_annihilation(n, j, &apply_annihilation(n, i, psi));
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| (x + y) * inv_sqrt2)
                .collect()
        }
        FermionGenerator::PairIm(i, j) => {
            let a = apply_creation(n, i, &apply_creation(n, j, psi));
            let b = apply_annihilation(n, j, &apply_annihilation(n, i, psi));
            let m_i = Complex64::new(0.0, -1.0) * inv_sqrt2;
            a.iter().zip(b.iter()).map(|(x, y)| (x - y) * m_i).collect()
        }
    }
}

/// Dense matrix of a generator (test and desk-scale use).
pub(crate) fn generator_dense(n: usize, gen: FermionGenerator) -> Operator {
    let dim = 1usize << n;
    let mut m = Array2::<Complex64>::zeros((dim, dim));
    let mut basis = vec![Complex64::default(); dim];
    for col in 0..dim {
        basis[col] = Complex64::new(1.0, 0.0);
        let image = apply_generator(n, gen, &basis);
        for (row, z) in image.iter().enumerate() {
            m[[row, col]] = *z;
        }
        basis[col] = Complex64::default();
    }
    Operator::hermitian(m).expect("fermion generators are Hermitian")
}

/// Full Jordan-Wigner representation: dense annihilation matrices and the
/// parity operator prod_k (1 - 2 n_k).
#[derive(Debug, Clone)]
pub struct FermionRep {
    pub n: usize,
    pub c: Vec<Operator>,
    pub parity: Operator,
}

pub fn jordan_wigner_rep(n: usize) -> CoreResult<FermionRep> {
    if !(1..=8).contains(&n) {
        return Err(CoreError::InvalidParameter(format!(
            "dense Jordan-Wigner representation supports 1..=8 modes, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut c = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = Array2::<Complex64>::zeros((dim, dim));
        let mut basis = vec![Complex64::default(); dim];
        for col in 0..dim {
            basis[col] = Complex64::new(1.0, 0.0);
            let image = apply_annihilation(n, i, &basis);
            for (row, z) in image.iter().enumerate() {
                m[[row, col]] = *z;
            }
            basis[col] = Complex64::default();
        }
        c.push(Operator::from_matrix(m)?);
    }
    let mut parity = Array2::<Complex64>::zeros((dim, dim));
    for idx in 0..dim {
        let occupied_total = n - ((idx & (dim - 1)).count_ones() as usize);
        let sign = if occupied_total.is_multiple_of(2) { 1.0 } else { -1.0 };
        parity[[idx, idx]] = Complex64::new(sign, 0.0);
    }
    Ok(FermionRep {
        n,
        c,
        parity: Operator::hermitian(parity)?,
    })
}

/// Index of the Fock vacuum (all modes empty = all spins down).
pub(crate) fn vacuum_index(n: usize) -> usize {
    (1usize << n) - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anticommutator(a: &Operator, b: &Operator) -> Operator {
        let ab = a.matmul(b).unwrap();
        let ba = b.matmul(a).unwrap();
        ab.add(&ba).unwrap()
    }

    #[test]
    fn canonical_anticommutation_relations() {
        for n in 1..=6usize {
            let rep = jordan_wigner_rep(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let ci = &rep.c[i];
                    let cj = &rep.c[j];
                    // {c_i, c_j} = 0
                    let acc = anticommutator(ci, cj);
                    assert!(acc.max_abs_entry() < crate::tol::CAR_TOL, "n={n} i={i} j={j}");
                    // {c_i, c_j^dag} = delta_ij
                    let acd = anticommutator(ci, &cj.adjoint());
                    let expect = if i == j {
                        Operator::identity(1 << n)
                    } else {
                        Operator::zeros(1 << n)
                    };
                    assert!(
                        acd.sub(&expect).unwrap().max_abs_entry() < crate::tol::CAR_TOL,
                        "n={n} i={i} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn vacuum_is_annihilated() {
        let n = 4;
        let dim = 1usize << n;
        let mut vac = vec![Complex64::default(); dim];
        vac[vacuum_index(n)] = Complex64::new(1.0, 0.0);
        for i in 0..n {
            let out = apply_annihilation(n, i, &vac);
            assert!(out.iter().all(|z| z.norm() == 0.0));
        }
        // Number expectation on the vacuum is 0, so generators read -1/2.
        for i in 0..n {
            let e = generator_expectation(n, FermionGenerator::Number(i), &vac);
            assert!((e + 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn parity_squares_to_identity_and_grades_states() {
        let rep = jordan_wigner_rep(3).unwrap();
        let sq = rep.parity.matmul(&rep.parity).unwrap();
        assert!(sq.sub(&Operator::identity(8)).unwrap().max_abs_entry() < 1e-15);
        // Vacuum has even parity.
        assert!((rep.parity.matrix()[[7, 7]].re - 1.0).abs() < 1e-15);
        // One occupied mode flips it.
        assert!((rep.parity.matrix()[[3, 3]].re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn dense_generator_matches_matrix_free_expectation() {
        use rand::Rng;
        use rand::SeedableRng;
        let n = 4;
        let dim = 1usize << n;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(5);
        let mut psi: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in psi.iter_mut() {
            *z /= norm;
        }
        for gen in so_generators(n) {
            let dense = generator_dense(n, gen);
            let v = ndarray::Array1::from_vec(psi.clone());
            let direct = dense.expectation(&v).re;
            let fast = generator_expectation(n, gen, &psi);
            assert!((direct - fast).abs() < 1e-12, "{gen:?}");
        }
    }

    #[test]
    fn generator_trace_norms_are_uniform() {
        let n = 3;
        let dim = 1usize << n;
        for gen in so_generators(n) {
            let dense = generator_dense(n, gen);
            let tr2 = dense.inner(&dense).re;
            assert!(
                (tr2 - dim as f64 / 4.0).abs() < 1e-12,
                "{gen:?} has tr(g^2) = {tr2}"
            );
        }
    }
}
