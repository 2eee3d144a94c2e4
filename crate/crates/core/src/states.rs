//! State constructors and validated state types.
//!
//! Basis convention used across the crate: qubit i is the i-th tensor
//! factor, index bit significance descends from factor 0 (qubit 0 is the
//! most significant bit), and spin-up maps to bit value 0. So for three
//! qubits |up,up,up> is index 0 and |down,down,down> is index 7.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use std::io::BufRead;

use crate::error::{CoreError, CoreResult};
use crate::linalg::{hermitian_eig, partial_trace, spin_matrices, unitary_from_generator, Operator};
use crate::tol;

/// Normalized pure state vector.
#[derive(Debug, Clone)]
pub struct PureState {
    dim: usize,
    amplitudes: Array1<Complex64>,
}

impl PureState {
    /// Wrap an amplitude vector, requiring unit norm.
    pub fn new(amplitudes: Array1<Complex64>) -> CoreResult<Self> {
        let dim = amplitudes.len();
        if dim == 0 {
            return Err(CoreError::EmptyInput);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::NORM_TOL {
            return Err(CoreError::InvalidParameter(format!(
                "pure state norm {norm} deviates from 1 beyond {}",
                tol::NORM_TOL
            )));
        }
        Ok(Self { dim, amplitudes })
    }

    /// Wrap an amplitude vector, rescaling it to unit norm.
    pub fn normalized(amplitudes: Array1<Complex64>) -> CoreResult<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(CoreError::InvalidParameter("zero state vector".into()));
        }
        Ok(Self {
            dim: amplitudes.len(),
            amplitudes: amplitudes.mapv(|z| z / norm),
        })
    }

    /// Computational basis state |index>.
    pub fn basis_state(dim: usize, index: usize) -> CoreResult<Self> {
        if index >= dim {
            return Err(CoreError::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut v = Array1::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.amplitudes.as_slice().expect("contiguous")
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |<self|other>|^2.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn apply(&self, op: &Operator) -> CoreResult<PureState> {
        if op.dim() != self.dim {
            return Err(CoreError::DimensionMismatch {
                context: "apply operator to state",
                expected: self.dim,
                got: op.dim(),
            });
        }
        PureState::normalized(op.apply(&self.amplitudes))
    }

    /// Load amplitudes from CSV lines `index,re,im`. Lines starting with '#'
    /// are comments, missing indices default to zero, and the vector is
    /// normalized on load (a zero vector is rejected).
    pub fn from_csv<R: BufRead>(reader: R, dim: usize) -> CoreResult<Self> {
        let mut v = Array1::<Complex64>::zeros(dim);
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = t.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(CoreError::Parse(format!(
                    "state csv line {}: expected `index,re,im`",
                    lineno + 1
                )));
            }
            let idx: usize = parts[0]
                .parse()
                .map_err(|e| CoreError::Parse(format!("line {}: {e}", lineno + 1)))?;
            let re: f64 = parts[1]
                .parse()
                .map_err(|e| CoreError::Parse(format!("line {}: {e}", lineno + 1)))?;
            let im: f64 = parts[2]
                .parse()
                .map_err(|e| CoreError::Parse(format!("line {}: {e}", lineno + 1)))?;
            if idx >= dim {
                return Err(CoreError::Parse(format!(
                    "line {}: index {idx} out of range for dimension {dim}",
                    lineno + 1
                )));
            }
            v[idx] = Complex64::new(re, im);
        }
        Self::normalized(v)
    }
}

/// Positive semidefinite unit-trace density matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    matrix: Array2<Complex64>,
}

impl DensityMatrix {
    pub fn new(matrix: Array2<Complex64>) -> CoreResult<Self> {
        let op = Operator::hermitian(matrix)?;
        let tr = op.trace().re;
        if (tr - 1.0).abs() > 100.0 * tol::NORM_TOL {
            return Err(CoreError::InvalidParameter(format!(
                "density matrix trace {tr} deviates from 1"
            )));
        }
        let spec = hermitian_eig(&op)?;
        if spec.eigenvalues[0] < -tol::PSD_TOL {
            return Err(CoreError::InvalidParameter(format!(
                "density matrix has negative eigenvalue {:.3e}",
                spec.eigenvalues[0]
            )));
        }
        Ok(Self {
            dim: op.dim(),
            matrix: op.into_matrix(),
        })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let n = psi.dim();
        let mut m = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                m[[i, j]] = psi.amplitudes[i] * psi.amplitudes[j].conj();
            }
        }
        Self { dim: n, matrix: m }
    }

    /// Convex mixture sum_i p_i |psi_i><psi_i|.
    pub fn mixture(terms: &[(f64, PureState)]) -> CoreResult<Self> {
        if terms.is_empty() {
            return Err(CoreError::EmptyInput);
        }
        let dim = terms[0].1.dim();
        let mut m = Array2::<Complex64>::zeros((dim, dim));
        let mut total = 0.0;
        for (p, psi) in terms {
            if *p < 0.0 {
                return Err(CoreError::InvalidParameter("negative mixture weight".into()));
            }
            if psi.dim() != dim {
                return Err(CoreError::DimensionMismatch {
                    context: "mixture",
                    expected: dim,
                    got: psi.dim(),
                });
            }
            total += p;
            for i in 0..dim {
                for j in 0..dim {
                    m[[i, j]] += psi.amplitudes[i] * psi.amplitudes[j].conj() * *p;
                }
            }
        }
        if (total - 1.0).abs() > 1e-10 {
            return Err(CoreError::InvalidParameter(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Self::new(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut m = Array2::zeros((dim, dim));
        let p = Complex64::new(1.0 / dim as f64, 0.0);
        for i in 0..dim {
            m[[i, i]] = p;
        }
        Self { dim, matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.matrix[[i, i]].re).sum()
    }

    /// tr(rho^2).
    pub fn purity_trace(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += (self.matrix[[i, j]] * self.matrix[[j, i]]).re;
            }
        }
        acc
    }

    /// Reduced density matrix over the kept tensor factors.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> CoreResult<DensityMatrix> {
        let m = partial_trace(&self.matrix, dims, keep)?;
        Ok(DensityMatrix {
            dim: m.nrows(),
            matrix: m,
        })
    }
}

/// A pure or mixed quantum state.
#[derive(Debug, Clone)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Pure(p) => p.dim(),
            State::Mixed(m) => m.dim(),
        }
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityMatrix> for State {
    fn from(m: DensityMatrix) -> Self {
        State::Mixed(m)
    }
}

fn check_qubit_count(n: usize) -> CoreResult<usize> {
    if !(2..=12).contains(&n) {
        return Err(CoreError::InvalidParameter(format!(
            "qubit count {n} outside supported range 2..=12"
        )));
    }
    Ok(1usize << n)
}

/// |GHZ_N> = (|up...up> + |down...down>) / sqrt(2).
pub fn ghz(n: usize) -> CoreResult<PureState> {
    let dim = check_qubit_count(n)?;
    let mut v = Array1::zeros(dim);
    let s = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    v[0] = s;
    v[dim - 1] = s;
    PureState::new(v)
}

/// |W_N> = N^{-1/2} sum_i |up ... down_i ... up>.
pub fn w_state(n: usize) -> CoreResult<PureState> {
    let dim = check_qubit_count(n)?;
    let mut v = Array1::zeros(dim);
    let s = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    for i in 0..n {
        v[1usize << (n - 1 - i)] = s;
    }
    PureState::new(v)
}

/// All-up product state |up>^N.
pub fn all_up(n: usize) -> CoreResult<PureState> {
    if n == 0 || n > 12 {
        return Err(CoreError::InvalidParameter(format!(
            "qubit count {n} outside supported range 1..=12"
        )));
    }
    PureState::basis_state(1usize << n, 0)
}

/// Qubit product state from unit Bloch vectors, one per site.
pub fn product_state(bloch: &[[f64; 3]]) -> CoreResult<PureState> {
    if bloch.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for (site, b) in bloch.iter().enumerate() {
        let len = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
        if (len - 1.0).abs() > 1e-9 {
            return Err(CoreError::InvalidParameter(format!(
                "bloch vector at site {site} has length {len}, expected 1"
            )));
        }
        let theta = b[2].clamp(-1.0, 1.0).acos();
        let phi = b[1].atan2(b[0]);
        let up = Complex64::new((theta / 2.0).cos(), 0.0);
        let down = Complex64::from_polar((theta / 2.0).sin(), phi);
        let mut next = Vec::with_capacity(amps.len() * 2);
        for a in &amps {
            next.push(a * up);
            next.push(a * down);
        }
        amps = next;
    }
    PureState::new(Array1::from_vec(amps))
}

/// Spin coherent state e^{-i phi Jz} e^{-i theta Jy} |j, m=+j>.
///
/// `j` must be a nonnegative half-integer; theta = phi = 0 returns the
/// highest-projection state.
pub fn spin_coherent(j: f64, theta: f64, phi: f64) -> CoreResult<PureState> {
    let two_j = two_j_from(j)?;
    let dim = (two_j + 1) as usize;
    let (_, jy, jz) = spin_matrices(two_j);
    let top = PureState::basis_state(dim, 0)?;
    let ry = unitary_from_generator(&jy, -theta)?;
    let rz = unitary_from_generator(&jz, -phi)?;
    top.apply(&ry)?.apply(&rz)
}

pub(crate) fn two_j_from(j: f64) -> CoreResult<u32> {
    let two_j = (2.0 * j).round();
    if two_j < 1.0 || (two_j - 2.0 * j).abs() > 1e-9 || two_j > 24.0 {
        return Err(CoreError::InvalidParameter(format!(
            "j = {j} is not a half-integer in the supported range"
        )));
    }
    Ok(two_j as u32)
}

/// Two-qubit Werner-type state p |Phi+><Phi+| + (1-p) I/4.
pub fn werner(p: f64) -> CoreResult<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CoreError::InvalidParameter(format!(
            "werner weight {p} outside [0, 1]"
        )));
    }
    let bell = ghz(2)?;
    let mut m = DensityMatrix::from_pure(&bell).matrix.mapv(|z| z * p);
    let iso = Complex64::new((1.0 - p) / 4.0, 0.0);
    for i in 0..4 {
        m[[i, i]] += iso;
    }
    DensityMatrix::new(m)
}

/// Haar-random pure state from a seeded generator (normalized complex
/// Gaussian vector). Bit-reproducible for a fixed seed.
pub fn haar_random(dim: usize, seed: u64) -> CoreResult<PureState> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    haar_random_with(dim, &mut rng)
}

/// Haar-random pure state drawing from the caller's generator.
pub fn haar_random_with(dim: usize, rng: &mut ChaCha20Rng) -> CoreResult<PureState> {
    if dim == 0 {
        return Err(CoreError::EmptyInput);
    }
    let v: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    PureState::normalized(Array1::from_vec(v))
}
