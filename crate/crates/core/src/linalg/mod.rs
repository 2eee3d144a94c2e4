//! Dense complex linear algebra substrate.
//!
//! Everything here is deterministic: the Jacobi eigensolver uses a fixed
//! cyclic pivot order, eigenvalues are returned ascending, and eigenvector
//! phases follow a fixed convention (first significant component made
//! positive real), so downstream ground-space and ordering tests are
//! reproducible bit-for-bit.

mod jacobi;
mod lanczos;

pub use jacobi::{hermitian_eig, sym_tridiag_eig};
pub use lanczos::{lanczos_lowest, LanczosOptions, LanczosResult};

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{CoreError, CoreResult};
use crate::tol;

/// Dense complex square matrix with a validated Hermitian flag.
#[derive(Debug, Clone)]
pub struct Operator {
    dim: usize,
    data: Array2<Complex64>,
    hermitian: bool,
}

impl Operator {
    /// Wrap a square matrix. The Hermitian flag is detected from the entries.
    pub fn from_matrix(data: Array2<Complex64>) -> CoreResult<Self> {
        let (r, c) = data.dim();
        if r != c || r == 0 {
            return Err(CoreError::DimensionMismatch {
                context: "operator must be square and nonempty",
                expected: r,
                got: c,
            });
        }
        let dev = hermitian_deviation(&data);
        Ok(Self {
            dim: r,
            data,
            hermitian: dev < tol::HERMITIAN_TOL,
        })
    }

    /// Wrap a matrix that must be Hermitian.
    pub fn hermitian(data: Array2<Complex64>) -> CoreResult<Self> {
        let op = Self::from_matrix(data)?;
        if !op.hermitian {
            return Err(CoreError::NonHermitian {
                deviation: hermitian_deviation(&op.data),
            });
        }
        Ok(op)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            data: Array2::eye(dim),
            hermitian: true,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: Array2::zeros((dim, dim)),
            hermitian: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.data
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn adjoint(&self) -> Operator {
        let mut out = Array2::zeros((self.dim, self.dim));
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[[i, j]] = self.data[[j, i]].conj();
            }
        }
        Operator {
            dim: self.dim,
            data: out,
            hermitian: self.hermitian,
        }
    }

    pub fn matmul(&self, other: &Operator) -> CoreResult<Operator> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch {
                context: "matmul",
                expected: self.dim,
                got: other.dim,
            });
        }
        Operator::from_matrix(self.data.dot(&other.data))
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator {
            dim: self.dim,
            data: self.data.mapv(|z| z * factor),
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    pub fn add(&self, other: &Operator) -> CoreResult<Operator> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch {
                context: "add",
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(Operator {
            dim: self.dim,
            data: &self.data + &other.data,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn sub(&self, other: &Operator) -> CoreResult<Operator> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[[i, i]]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius inner product tr(A^dag B).
    pub fn inner(&self, other: &Operator) -> Complex64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply(&self, vec: &Array1<Complex64>) -> Array1<Complex64> {
        self.data.dot(vec)
    }

    /// <psi| M |psi>.
    pub fn expectation(&self, psi: &Array1<Complex64>) -> Complex64 {
        let mpsi = self.apply(psi);
        psi.iter().zip(mpsi.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// [A, B] / i, Hermitian whenever A and B are.
    pub fn commutator_over_i(&self, other: &Operator) -> CoreResult<Operator> {
        let ab = self.data.dot(&other.data);
        let ba = other.data.dot(&self.data);
        let comm = (&ab - &ba).mapv(|z| z * Complex64::new(0.0, -1.0));
        Operator::from_matrix(comm)
    }

    pub fn kron(&self, other: &Operator) -> Operator {
        let n = self.dim * other.dim;
        let mut out = Array2::zeros((n, n));
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.data[[i, j]];
                if a == Complex64::default() {
                    continue;
                }
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        out[[i * other.dim + k, j * other.dim + l]] = a * other.data[[k, l]];
                    }
                }
            }
        }
        Operator {
            dim: n,
            data: out,
            hermitian: self.hermitian && other.hermitian,
        }
    }
}

fn hermitian_deviation(m: &Array2<Complex64>) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (m[[i, j]] - m[[j, i]].conj()).norm();
            if d > dev {
                dev = d;
            }
        }
    }
    dev
}

/// Tensor product, factor `a` most significant.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    a.kron(b)
}

/// Full eigendecomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, column j pairs with eigenvalue j.
    pub eigenvectors: Array2<Complex64>,
}

impl Spectrum {
    pub fn eigenvector(&self, j: usize) -> Array1<Complex64> {
        self.eigenvectors.column(j).to_owned()
    }

    pub fn lowest(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn spectral_width(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1] - self.eigenvalues[0]
    }
}

/// Trace-orthonormalize a list of Hermitian operators (modified Gram-Schmidt
/// with the trace inner product, double pass). Linearly dependent inputs are
/// dropped once their residual norm falls below the threshold; the output
/// spans the same real linear span.
pub fn trace_orthonormalize(ops: &[Operator]) -> CoreResult<Vec<Operator>> {
    if ops.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    let dim = ops[0].dim;
    for op in ops {
        if op.dim != dim {
            return Err(CoreError::DimensionMismatch {
                context: "trace_orthonormalize: mixed dimensions",
                expected: dim,
                got: op.dim,
            });
        }
        if !op.hermitian {
            return Err(CoreError::NonHermitian {
                deviation: hermitian_deviation(&op.data),
            });
        }
    }

    let mut basis: Vec<Operator> = Vec::with_capacity(ops.len());
    for op in ops {
        let norm = op.frobenius_norm();
        if norm < tol::DEPENDENT_DROP_TOL {
            continue;
        }
        let mut cand = op.scale(Complex64::new(1.0 / norm, 0.0));
        // Two MGS passes keep the Gram matrix at identity to ~1e-15.
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.inner(&cand);
                cand = cand.sub(&b.scale(overlap))?;
            }
        }
        let rnorm = cand.frobenius_norm();
        if rnorm < tol::DEPENDENT_DROP_TOL {
            continue;
        }
        let mut out = cand.scale(Complex64::new(1.0 / rnorm, 0.0));
        out.hermitian = true;
        basis.push(out);
    }
    if basis.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    Ok(basis)
}

/// exp(i t H) for Hermitian H, computed through the eigendecomposition.
pub fn unitary_from_generator(h: &Operator, t: f64) -> CoreResult<Operator> {
    if !h.hermitian {
        return Err(CoreError::NonHermitian {
            deviation: hermitian_deviation(&h.data),
        });
    }
    let spec = hermitian_eig(h)?;
    let n = h.dim;
    let mut out = Array2::<Complex64>::zeros((n, n));
    for (j, lam) in spec.eigenvalues.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, t * lam);
        let v = spec.eigenvectors.column(j);
        for r in 0..n {
            let vr = v[r] * phase;
            for c in 0..n {
                out[[r, c]] += vr * v[c].conj();
            }
        }
    }
    Operator::from_matrix(out)
}

/// Principal square root of a positive semidefinite Hermitian operator.
/// Eigenvalues inside the PSD slack are clamped to zero.
pub fn sqrtm_psd(m: &Operator) -> CoreResult<Operator> {
    let spec = hermitian_eig(m)?;
    let n = m.dim;
    let mut out = Array2::<Complex64>::zeros((n, n));
    for (j, lam) in spec.eigenvalues.iter().enumerate() {
        if *lam < -tol::PSD_TOL {
            return Err(CoreError::InvalidParameter(format!(
                "sqrtm_psd: negative eigenvalue {lam:.3e}"
            )));
        }
        let s = lam.max(0.0).sqrt();
        if s == 0.0 {
            continue;
        }
        let v = spec.eigenvectors.column(j);
        for r in 0..n {
            let vr = v[r] * s;
            for c in 0..n {
                out[[r, c]] += vr * v[c].conj();
            }
        }
    }
    Operator::hermitian(out)
}

/// Partial trace over the factors not listed in `keep`.
///
/// `dims` are the tensor factor dimensions with factor 0 most significant;
/// `keep` lists the factor indices to retain, ascending.
pub fn partial_trace(
    rho: &Array2<Complex64>,
    dims: &[usize],
    keep: &[usize],
) -> CoreResult<Array2<Complex64>> {
    let total: usize = dims.iter().product();
    if rho.nrows() != total || rho.ncols() != total {
        return Err(CoreError::DimensionMismatch {
            context: "partial_trace: dims product mismatch",
            expected: total,
            got: rho.nrows(),
        });
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(CoreError::InvalidParameter(
            "partial_trace: keep indices must be ascending and in range".into(),
        ));
    }

    let mut stride = vec![1usize; dims.len()];
    for f in (0..dims.len().saturating_sub(1)).rev() {
        stride[f] = stride[f + 1] * dims[f + 1];
    }
    let env: Vec<usize> = (0..dims.len()).filter(|f| !keep.contains(f)).collect();

    let offsets = |factors: &[usize]| -> Vec<usize> {
        let count: usize = factors.iter().map(|&f| dims[f]).product();
        let mut out = vec![0usize; count];
        for (idx, slot) in out.iter_mut().enumerate() {
            let mut rem = idx;
            let mut off = 0;
            for &f in factors.iter().rev() {
                off += (rem % dims[f]) * stride[f];
                rem /= dims[f];
            }
            *slot = off;
        }
        out
    };
    let keep_off = offsets(keep);
    let env_off = offsets(&env);

    let kd = keep_off.len();
    let mut out = Array2::<Complex64>::zeros((kd, kd));
    for (ri, &ro) in keep_off.iter().enumerate() {
        for (ci, &co) in keep_off.iter().enumerate() {
            let mut acc = Complex64::default();
            for &eo in &env_off {
                acc += rho[[ro + eo, co + eo]];
            }
            out[[ri, ci]] = acc;
        }
    }
    Ok(out)
}

/// The three Pauli matrices.
pub fn pauli_x() -> Operator {
    let mut m = Array2::zeros((2, 2));
    m[[0, 1]] = Complex64::new(1.0, 0.0);
    m[[1, 0]] = Complex64::new(1.0, 0.0);
    Operator::hermitian(m).expect("pauli_x")
}

pub fn pauli_y() -> Operator {
    let mut m = Array2::zeros((2, 2));
    m[[0, 1]] = Complex64::new(0.0, -1.0);
    m[[1, 0]] = Complex64::new(0.0, 1.0);
    Operator::hermitian(m).expect("pauli_y")
}

pub fn pauli_z() -> Operator {
    let mut m = Array2::zeros((2, 2));
    m[[0, 0]] = Complex64::new(1.0, 0.0);
    m[[1, 1]] = Complex64::new(-1.0, 0.0);
    Operator::hermitian(m).expect("pauli_z")
}

/// Spin matrices (Jx, Jy, Jz) for spin j = two_j/2, basis ordered
/// m = +j ... -j so index 0 is the highest projection.
pub fn spin_matrices(two_j: u32) -> (Operator, Operator, Operator) {
    let d = (two_j + 1) as usize;
    let j = two_j as f64 / 2.0;
    let mut jp = Array2::<Complex64>::zeros((d, d));
    // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>; row index m+1 sits above m.
    for k in 1..d {
        let m = j - k as f64;
        let amp = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        jp[[k - 1, k]] = Complex64::new(amp, 0.0);
    }
    let jm = {
        let mut m = Array2::<Complex64>::zeros((d, d));
        for k in 1..d {
            m[[k, k - 1]] = jp[[k - 1, k]].conj();
        }
        m
    };
    let jx = (&jp + &jm).mapv(|z| z * Complex64::new(0.5, 0.0));
    let jy = (&jp - &jm).mapv(|z| z * Complex64::new(0.0, -0.5));
    let mut jz = Array2::<Complex64>::zeros((d, d));
    for k in 0..d {
        jz[[k, k]] = Complex64::new(j - k as f64, 0.0);
    }
    (
        Operator::hermitian(jx).expect("jx"),
        Operator::hermitian(jy).expect("jy"),
        Operator::hermitian(jz).expect("jz"),
    )
}

/// Identity embedding of `op` at tensor slot `slot` of a space with the
/// given factor dimensions (factor 0 most significant).
pub fn embed_at(op: &Operator, dims: &[usize], slot: usize) -> CoreResult<Operator> {
    if slot >= dims.len() || dims[slot] != op.dim() {
        return Err(CoreError::InvalidParameter(format!(
            "embed_at: slot {slot} incompatible with operator dimension {}",
            op.dim()
        )));
    }
    let before: usize = dims[..slot].iter().product();
    let after: usize = dims[slot + 1..].iter().product();
    let mut out = Operator::identity(before).kron(op);
    out = out.kron(&Operator::identity(after));
    Ok(out)
}
