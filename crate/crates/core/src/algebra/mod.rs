//! Distinguished observable algebras with trace-orthonormal bases and the
//! purity normalization fixed by a reference extremal state.
//!
//! Every built-in carries a basis {x_i} with tr(x_i x_j) = delta_ij and a
//! constant K such that K * sum_i <ref|x_i|ref>^2 = 1 for the designated
//! reference state, which the construction certifies as extremal. Large
//! registers (local qubits, fermionic algebras) evaluate expectations
//! through structured bit-level paths instead of dense matrices; dense
//! materialization stays available at desk scale for the closure and
//! orthonormality checks.

mod fermion;

pub use fermion::{apply_creation, jordan_wigner_rep, FermionRep};

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{CoreError, CoreResult};
use crate::linalg::{
    embed_at, pauli_x, pauli_y, pauli_z, spin_matrices, trace_orthonormalize,
    unitary_from_generator, Operator,
};
use crate::states::{all_up, two_j_from, DensityMatrix, PureState};
#[cfg(test)]
use crate::tol;

use fermion::{
    apply_generator, generator_dense, generator_expectation, mode_mask, so_generators,
    u_generators, vacuum_index, FermionGenerator,
};

/// Dense materialization cap, in matrix entries summed over the basis.
const MATERIALIZE_ENTRY_CAP: usize = 1 << 24;

/// Trace-orthonormal basis storage. Structured variants avoid dense
/// 2^n x 2^n matrices for the register-sized algebras.
#[derive(Debug, Clone)]
enum BasisSet {
    Dense(Vec<Operator>),
    /// sigma_alpha^(site) / 2^(n/2), ordered site-major with axes x, y, z.
    LocalPauli { n: usize },
    /// Fermionic bilinears scaled by 2 / 2^(n/2).
    Fermion {
        n: usize,
        gens: Vec<FermionGenerator>,
    },
}

impl BasisSet {
    fn len(&self) -> usize {
        match self {
            BasisSet::Dense(ops) => ops.len(),
            BasisSet::LocalPauli { n } => 3 * n,
            BasisSet::Fermion { gens, .. } => gens.len(),
        }
    }
}

/// A distinguished observable algebra: orthonormal Hermitian basis,
/// purity normalization, reference extremal state, optional lowering set.
#[derive(Debug, Clone)]
pub struct ObservableAlgebra {
    name: String,
    dim: usize,
    basis: BasisSet,
    k_norm: f64,
    reference: PureState,
    lowering: Option<Vec<Operator>>,
    irreducible: bool,
}

impl ObservableAlgebra {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Representation (Hilbert space) dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis elements.
    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    /// Purity normalization constant K.
    pub fn k_norm(&self) -> f64 {
        self.k_norm
    }

    pub fn reference_state(&self) -> &PureState {
        &self.reference
    }

    pub fn lowering_ops(&self) -> Option<&[Operator]> {
        self.lowering.as_deref()
    }

    /// Whether the representation is irreducible, which is the regime the
    /// ground-state / lowest-weight / maximal-purity equivalences assert.
    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    fn check_dim(&self, got: usize, context: &'static str) -> CoreResult<()> {
        if got != self.dim {
            return Err(CoreError::DimensionMismatch {
                context,
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }

    /// <psi| x_i |psi> for every orthonormal basis element.
    pub fn expectations_pure(&self, psi: &PureState) -> CoreResult<Vec<f64>> {
        self.check_dim(psi.dim(), "algebra expectations")?;
        let amps = psi.as_slice();
        Ok(match &self.basis {
            BasisSet::Dense(ops) => ops
                .iter()
                .map(|op| op.expectation(psi.amplitudes()).re)
                .collect(),
            BasisSet::LocalPauli { n } => local_pauli_expectations(*n, amps),
            BasisSet::Fermion { n, gens } => {
                let scale = fermion_scale(*n);
                gens.iter()
                    .map(|g| scale * generator_expectation(*n, *g, amps))
                    .collect()
            }
        })
    }

    /// tr(rho x_i) for every orthonormal basis element.
    pub fn expectations_density(&self, rho: &DensityMatrix) -> CoreResult<Vec<f64>> {
        self.check_dim(rho.dim(), "algebra expectations")?;
        Ok(match &self.basis {
            BasisSet::Dense(ops) => ops
                .iter()
                .map(|op| {
                    op.matrix()
                        .iter()
                        .zip(rho.matrix().t().iter())
                        .map(|(x, r)| x * r)
                        .sum::<Complex64>()
                        .re
                })
                .collect(),
            BasisSet::LocalPauli { .. } | BasisSet::Fermion { .. } => {
                // tr(X rho) column by column through the structured apply.
                let dim = self.dim;
                let mut out = vec![0.0; self.basis.len()];
                let mut col = vec![Complex64::default(); dim];
                for c in 0..dim {
                    for (r, slot) in col.iter_mut().enumerate() {
                        *slot = rho.matrix()[[r, c]];
                    }
                    for (i, val) in out.iter_mut().enumerate() {
                        let image = self.apply_basis_raw(i, &col);
                        *val += image[c].re;
                    }
                }
                out
            }
        })
    }

    /// x_i |psi> on raw amplitudes.
    fn apply_basis_raw(&self, i: usize, amps: &[Complex64]) -> Vec<Complex64> {
        match &self.basis {
            BasisSet::Dense(ops) => {
                let v = Array1::from_vec(amps.to_vec());
                ops[i].apply(&v).to_vec()
            }
            BasisSet::LocalPauli { n } => apply_local_pauli(*n, i, amps),
            BasisSet::Fermion { n, gens } => {
                let scale = fermion_scale(*n);
                let mut out = apply_generator(*n, gens[i], amps);
                for z in out.iter_mut() {
                    *z *= scale;
                }
                out
            }
        }
    }

    /// x_i |psi> as an owned vector.
    pub fn apply_basis_elem(&self, i: usize, psi: &Array1<Complex64>) -> CoreResult<Array1<Complex64>> {
        self.check_dim(psi.len(), "apply basis element")?;
        if i >= self.basis.len() {
            return Err(CoreError::InvalidParameter(format!(
                "basis index {i} out of range ({})",
                self.basis.len()
            )));
        }
        Ok(Array1::from_vec(
            self.apply_basis_raw(i, psi.as_slice().expect("contiguous")),
        ))
    }

    /// Dense orthonormal basis. Errors when the materialization would be
    /// unreasonably large; the structured paths cover those regimes.
    pub fn materialize(&self) -> CoreResult<Vec<Operator>> {
        let entries = self.basis.len() * self.dim * self.dim;
        if entries > MATERIALIZE_ENTRY_CAP {
            return Err(CoreError::TooLarge {
                elements: self.basis.len(),
                dim: self.dim,
            });
        }
        Ok(match &self.basis {
            BasisSet::Dense(ops) => ops.clone(),
            BasisSet::LocalPauli { n } => {
                let scale = Complex64::new((1.0 / (1usize << *n) as f64).sqrt(), 0.0);
                let dims = vec![2usize; *n];
                let paulis = [pauli_x(), pauli_y(), pauli_z()];
                let mut out = Vec::with_capacity(3 * n);
                for site in 0..*n {
                    for p in &paulis {
                        out.push(embed_at(p, &dims, site)?.scale(scale));
                    }
                }
                out
            }
            BasisSet::Fermion { n, gens } => {
                let scale = Complex64::new(fermion_scale(*n), 0.0);
                gens.iter()
                    .map(|g| generator_dense(*n, *g).scale(scale))
                    .collect()
            }
        })
    }

    /// Random Hermitian element h = sum_i c_i x_i with Gaussian weights.
    pub fn random_element(&self, rng: &mut ChaCha20Rng, scale: f64) -> CoreResult<Operator> {
        let ops = self.materialize()?;
        let mut acc = Operator::zeros(self.dim);
        for op in &ops {
            let c: f64 = StandardNormal.sample(rng);
            acc = acc.add(&op.scale(Complex64::new(c * scale, 0.0)))?;
        }
        Ok(acc)
    }

    /// Random group unitary exp(i h), h in the algebra.
    pub fn random_group_unitary(&self, rng: &mut ChaCha20Rng, scale: f64) -> CoreResult<Operator> {
        let h = self.random_element(rng, scale)?;
        unitary_from_generator(&h, 1.0)
    }

    /// A random point on the generalized-coherent-state orbit of the
    /// reference state.
    pub fn random_orbit_state(&self, rng: &mut ChaCha20Rng, scale: f64) -> CoreResult<PureState> {
        let u = self.random_group_unitary(rng, scale)?;
        self.reference.apply(&u)
    }
}

fn fermion_scale(n: usize) -> f64 {
    // Each generator has tr(g^2) = 2^n / 4; the orthonormal element is 2g/2^(n/2).
    2.0 / ((1usize << n) as f64).sqrt()
}

/// Orthonormalize a Hermitian generating set and fix the purity scale from
/// a reference extremal state: K = 1 / sum_i <ref|x_i|ref>^2.
pub fn normalize(ops: &[Operator], reference: &PureState) -> CoreResult<(Vec<Operator>, f64)> {
    let basis = trace_orthonormalize(ops)?;
    if basis[0].dim() != reference.dim() {
        return Err(CoreError::DimensionMismatch {
            context: "normalize: reference state dimension",
            expected: basis[0].dim(),
            got: reference.dim(),
        });
    }
    let raw: f64 = basis
        .iter()
        .map(|op| op.expectation(reference.amplitudes()).re.powi(2))
        .sum();
    if raw < 1e-12 {
        return Err(CoreError::InvalidReference);
    }
    Ok((basis, 1.0 / raw))
}

/// Local qubit algebra: one su(2) per site, 3N Pauli generators.
pub fn local_qubit_algebra(n: usize) -> CoreResult<ObservableAlgebra> {
    if !(1..=12).contains(&n) {
        return Err(CoreError::InvalidParameter(format!(
            "local qubit algebra supports 1..=12 qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let reference = all_up(n)?;
    // Raw purity of |up...up>: N z-expectations of 2^(-n/2) each.
    let k_norm = dim as f64 / n as f64;
    let lowering = if n <= 8 {
        let dims = vec![2usize; n];
        let minus = pauli_x()
            .add(&pauli_y().scale(Complex64::new(0.0, -1.0)))?
            .scale(Complex64::new(0.5, 0.0));
        let mut ops = Vec::with_capacity(n);
        for site in 0..n {
            ops.push(embed_at(&minus, &dims, site)?);
        }
        Some(ops)
    } else {
        None
    };
    Ok(ObservableAlgebra {
        name: "local-qubits".into(),
        dim,
        basis: BasisSet::LocalPauli { n },
        k_norm,
        reference,
        lowering,
        irreducible: true,
    })
}

/// Bipartite algebra su(m) + su(n) acting on C^m (x) C^n: all traceless
/// local observables of the two factors.
pub fn bipartite_algebra(m: usize, n: usize) -> CoreResult<ObservableAlgebra> {
    if m < 2 || n < 2 {
        return Err(CoreError::InvalidParameter(format!(
            "bipartite algebra needs factor dimensions >= 2, got {m} x {n}"
        )));
    }
    let dim = m
        .checked_mul(n)
        .filter(|&d| d <= 4096)
        .ok_or_else(|| CoreError::InvalidParameter(format!(
            "bipartite dimension {m} x {n} exceeds 4096"
        )))?;
    let elements = (m * m - 1) + (n * n - 1);
    if elements * dim * dim > MATERIALIZE_ENTRY_CAP {
        return Err(CoreError::TooLarge { elements, dim });
    }

    let dims = [m, n];
    let mut gens = Vec::with_capacity(elements);
    for (slot, d) in dims.iter().enumerate() {
        for g in gell_mann(*d) {
            gens.push(embed_at(&g, &dims, slot)?);
        }
    }
    let reference = PureState::basis_state(dim, 0)?;
    let (basis, k_norm) = normalize(&gens, &reference)?;

    // Lowering set E_ij with i > j per factor; annihilates |m-1> (x) |n-1>.
    let mut lowering = Vec::new();
    for (slot, d) in dims.iter().enumerate() {
        for j in 0..*d {
            for i in (j + 1)..*d {
                let mut e = Array2::<Complex64>::zeros((*d, *d));
                e[[i, j]] = Complex64::new(1.0, 0.0);
                lowering.push(embed_at(&Operator::from_matrix(e)?, &dims, slot)?);
            }
        }
    }

    Ok(ObservableAlgebra {
        name: "bipartite".into(),
        dim,
        basis: BasisSet::Dense(basis),
        k_norm,
        reference,
        lowering: Some(lowering),
        irreducible: true,
    })
}

/// Collective spin algebra su(2) in the (possibly reducible) tensor power
/// of a spin-j irrep: J_alpha summed over copies.
pub fn spin_algebra(j: f64, copies: usize) -> CoreResult<ObservableAlgebra> {
    let two_j = two_j_from(j)?;
    if copies == 0 {
        return Err(CoreError::InvalidParameter("copies must be >= 1".into()));
    }
    let d = (two_j + 1) as usize;
    let dim = d
        .checked_pow(copies as u32)
        .filter(|&x| x <= 4096)
        .ok_or_else(|| {
            CoreError::InvalidParameter(format!(
                "spin algebra dimension {d}^{copies} exceeds 4096"
            ))
        })?;
    let (jx, jy, jz) = spin_matrices(two_j);
    let dims = vec![d; copies];
    let mut coll = Vec::new();
    for gen in [&jx, &jy, &jz] {
        let mut acc = Operator::zeros(dim);
        for c in 0..copies {
            acc = acc.add(&embed_at(gen, &dims, c)?)?;
        }
        coll.push(acc);
    }
    // Highest-projection product state |j,j>^(x)copies is index 0.
    let reference = PureState::basis_state(dim, 0)?;
    let (basis, k_norm) = normalize(&coll, &reference)?;
    let j_minus = coll[0].add(&coll[1].scale(Complex64::new(0.0, -1.0)))?;
    Ok(ObservableAlgebra {
        name: if copies == 1 { "spin" } else { "collective-spin" }.into(),
        dim,
        basis: BasisSet::Dense(basis),
        k_norm,
        reference,
        lowering: Some(vec![j_minus]),
        irreducible: copies == 1,
    })
}

fn fermion_algebra_common(
    n: usize,
    name: &str,
    gens: Vec<FermionGenerator>,
    with_pair_lowering: bool,
) -> CoreResult<ObservableAlgebra> {
    if !(2..=12).contains(&n) {
        return Err(CoreError::InvalidParameter(format!(
            "fermionic algebras support 2..=12 modes, got {n}"
        )));
    }
    let dim = 1usize << n;
    let reference = PureState::basis_state(dim, vacuum_index(n))?;
    // Vacuum expectations: <n_i - 1/2> = -1/2 for each mode, zero elsewhere,
    // so K = 2^n / n under the orthonormal scaling.
    let k_norm = dim as f64 / n as f64;
    let lowering = if n <= 6 {
        let rep = jordan_wigner_rep(n)?;
        let mut ops = Vec::new();
        for i in 0..n {
            for jm in 0..n {
                if i != jm {
                    ops.push(rep.c[i].adjoint().matmul(&rep.c[jm])?);
                }
            }
        }
        if with_pair_lowering {
            for i in 0..n {
                for jm in (i + 1)..n {
                    ops.push(rep.c[i].matmul(&rep.c[jm])?);
                }
            }
        }
        Some(ops)
    } else {
        None
    };
    Ok(ObservableAlgebra {
        name: name.into(),
        dim,
        basis: BasisSet::Fermion { n, gens },
        k_norm,
        reference,
        lowering,
        irreducible: false,
    })
}

/// Number-conserving fermionic algebra u(N) in the 2^N Fock representation.
pub fn fermion_u_algebra(n: usize) -> CoreResult<ObservableAlgebra> {
    fermion_algebra_common(n, "fermion-u", u_generators(n), false)
}

/// Full quadratic algebra so(2N), adding the pairing generators.
pub fn fermion_so_algebra(n: usize) -> CoreResult<ObservableAlgebra> {
    fermion_algebra_common(n, "fermion-so", so_generators(n), true)
}

/// Traceless Hermitian Gell-Mann style generators of su(d), unnormalized.
fn gell_mann(d: usize) -> Vec<Operator> {
    let mut out = Vec::with_capacity(d * d - 1);
    for i in 0..d {
        for j in (i + 1)..d {
            let mut sym = Array2::<Complex64>::zeros((d, d));
            sym[[i, j]] = Complex64::new(1.0, 0.0);
            sym[[j, i]] = Complex64::new(1.0, 0.0);
            out.push(Operator::hermitian(sym).expect("symmetric gm"));
            let mut asym = Array2::<Complex64>::zeros((d, d));
            asym[[i, j]] = Complex64::new(0.0, -1.0);
            asym[[j, i]] = Complex64::new(0.0, 1.0);
            out.push(Operator::hermitian(asym).expect("antisymmetric gm"));
        }
    }
    for l in 1..d {
        let mut diag = Array2::<Complex64>::zeros((d, d));
        for k in 0..l {
            diag[[k, k]] = Complex64::new(1.0, 0.0);
        }
        diag[[l, l]] = Complex64::new(-(l as f64), 0.0);
        out.push(Operator::hermitian(diag).expect("diagonal gm"));
    }
    out
}

fn local_pauli_expectations(n: usize, amps: &[Complex64]) -> Vec<f64> {
    let scale = (1.0 / (1usize << n) as f64).sqrt();
    let mut out = Vec::with_capacity(3 * n);
    for site in 0..n {
        let mask = mode_mask(n, site);
        let mut ex = 0.0;
        let mut ey = 0.0;
        let mut ez = 0.0;
        for (idx, amp) in amps.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let flipped = amps[idx ^ mask];
            let up = idx & mask == 0;
            // <sigma_x>: sum conj(psi[idx^m]) psi[idx]
            let cross = flipped.conj() * amp;
            ex += cross.re;
            // sigma_y matrix element from |idx> into |idx^m| is +i for up.
            ey += if up { -cross.im } else { cross.im };
            ez += if up { amp.norm_sqr() } else { -amp.norm_sqr() };
        }
        out.push(ex * scale);
        out.push(ey * scale);
        out.push(ez * scale);
    }
    out
}

fn apply_local_pauli(n: usize, elem: usize, amps: &[Complex64]) -> Vec<Complex64> {
    let site = elem / 3;
    let axis = elem % 3;
    let mask = mode_mask(n, site);
    let scale = (1.0 / (1usize << n) as f64).sqrt();
    let mut out = vec![Complex64::default(); amps.len()];
    match axis {
        0 => {
            for (idx, slot) in out.iter_mut().enumerate() {
                *slot = amps[idx ^ mask] * scale;
            }
        }
        1 => {
            for (idx, slot) in out.iter_mut().enumerate() {
                let src = idx ^ mask;
                let src_up = src & mask == 0;
                let amp = if src_up {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(0.0, -1.0)
                };
                *slot = amps[src] * amp * scale;
            }
        }
        _ => {
            for (idx, slot) in out.iter_mut().enumerate() {
                let sign = if idx & mask == 0 { 1.0 } else { -1.0 };
                *slot = amps[idx] * sign * scale;
            }
        }
    }
    out
}
