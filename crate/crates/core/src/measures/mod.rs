//! Mixed-state generalized-entanglement measures.
//!
//! The central object is the convex-roof purity deficit
//! min over ensembles of (1 - sum_i p_i P(pi_i)), estimated by optimizing
//! over the isometry freedom of purifications: every rank-r ensemble of rho
//! arises as phi_j = sum_a V_ja sqrt(lambda_a) |e_a> for a column-isometry
//! V, so coordinate descent over Givens rotations of V's rows searches the
//! full decomposition space. Estimates are upper bounds on the true roof;
//! a restart at the eigen-decomposition ensemble guarantees the result is
//! never worse than that baseline.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::algebra::ObservableAlgebra;
use crate::error::{CoreError, CoreResult};
use crate::linalg::{hermitian_eig, kron, pauli_y, sqrtm_psd, Operator};
use crate::states::{DensityMatrix, PureState};
use crate::tol;

/// Mixedness measures on probability vectors: concave, permutation
/// invariant, zero exactly on deterministic distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixednessMeasure {
    /// sigma_ln(p) = -sum p_i ln p_i
    Entropy,
    /// sigma_1(p) = 1 - sum p_i^2
    Renyi,
}

impl MixednessMeasure {
    pub fn eval(&self, p: &[f64]) -> f64 {
        match self {
            MixednessMeasure::Entropy => p
                .iter()
                .filter(|&&x| x > 0.0)
                .map(|&x| -x * x.ln())
                .sum(),
            MixednessMeasure::Renyi => 1.0 - p.iter().map(|&x| x * x).sum::<f64>(),
        }
    }

    /// Value on the optimal two-point decomposition of a ball point at
    /// relative radius r: weights (1 +- r)/2.
    fn chord_value(&self, r: f64) -> f64 {
        let r = r.clamp(0.0, 1.0);
        let p = 0.5 * (1.0 + r);
        self.eval(&[p, 1.0 - p])
    }
}

/// Evaluate a mixedness measure on a validated probability vector.
pub fn mixedness(p: &[f64], measure: MixednessMeasure) -> CoreResult<f64> {
    if p.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    if p.iter().any(|&x| x < 0.0) {
        return Err(CoreError::InvalidParameter(
            "mixedness: negative weight".into(),
        ));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(CoreError::InvalidParameter(format!(
            "mixedness: weights sum to {total}"
        )));
    }
    Ok(measure.eval(p))
}

/// A pure-state ensemble realizing a density matrix.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub weights: Vec<f64>,
    pub states: Vec<PureState>,
}

impl Ensemble {
    /// Max-entry deviation of sum_i p_i |psi_i><psi_i| from the target.
    pub fn reconstruction_error(&self, target: &DensityMatrix) -> f64 {
        let dim = target.dim();
        let mut acc = Array2::<Complex64>::zeros((dim, dim));
        for (p, psi) in self.weights.iter().zip(self.states.iter()) {
            for i in 0..dim {
                for j in 0..dim {
                    acc[[i, j]] +=
                        psi.amplitudes()[i] * psi.amplitudes()[j].conj() * *p;
                }
            }
        }
        let mut worst = 0.0f64;
        for (a, b) in acc.iter().zip(target.matrix().iter()) {
            worst = worst.max((a - b).norm());
        }
        worst
    }
}

/// Options for the roof optimizers.
#[derive(Debug, Clone)]
pub struct RoofOptions {
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Value tolerance the descent targets; audits treat excesses beyond
    /// twice this as violations.
    pub value_tol: f64,
    pub seed: u64,
    /// Ensemble size; defaults to rank^2 (clamped to at least the rank).
    pub ensemble_cap: Option<usize>,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            restarts: tol::ROOF_RESTARTS,
            max_sweeps: 160,
            value_tol: tol::ROOF_VALUE_TOL,
            seed: 0x700f,
            ensemble_cap: None,
        }
    }
}

/// Result of a roof optimization.
#[derive(Debug, Clone)]
pub struct RoofResult {
    /// Best found value (an upper bound on the true roof).
    pub value: f64,
    /// Value of the eigen-decomposition ensemble before any descent.
    pub baseline: f64,
    /// Certificate ensemble attaining `value`.
    pub ensemble: Ensemble,
}

struct RoofProblem {
    rank: usize,
    msize: usize,
    lambda: Vec<f64>,
    /// W = columns sqrt(lambda_a) e_a, kept for ensemble reconstruction.
    w_cols: Vec<Array1<Complex64>>,
    /// M_i = W^dag x_i W, row-major rank x rank.
    mats: Vec<Vec<Complex64>>,
    k_norm: f64,
}

impl RoofProblem {
    fn build(
        rho: &DensityMatrix,
        alg: &ObservableAlgebra,
        cap: Option<usize>,
    ) -> CoreResult<Self> {
        if rho.dim() != alg.dim() {
            return Err(CoreError::DimensionMismatch {
                context: "roof: state vs algebra",
                expected: alg.dim(),
                got: rho.dim(),
            });
        }
        let spec = hermitian_eig(&Operator::hermitian(rho.matrix().clone())?)?;
        let mut pairs: Vec<(f64, usize)> = spec
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let kept: Vec<(f64, usize)> = pairs
            .into_iter()
            .filter(|(v, _)| *v > tol::RANK_EPS)
            .collect();
        let rank = kept.len().max(1);
        let mut lambda = Vec::with_capacity(rank);
        let mut w_cols = Vec::with_capacity(rank);
        for (v, idx) in kept.iter().take(rank) {
            lambda.push(*v);
            w_cols.push(spec.eigenvector(*idx).mapv(|z| z * v.sqrt()));
        }
        let b = alg.basis_len();
        let mut mats = Vec::with_capacity(b);
        for i in 0..b {
            let images: Vec<Array1<Complex64>> = w_cols
                .iter()
                .map(|col| alg.apply_basis_elem(i, col))
                .collect::<CoreResult<_>>()?;
            let mut m = vec![Complex64::default(); rank * rank];
            for a in 0..rank {
                for bb in 0..rank {
                    m[a * rank + bb] = w_cols[a]
                        .iter()
                        .zip(images[bb].iter())
                        .map(|(x, y)| x.conj() * y)
                        .sum();
                }
            }
            mats.push(m);
        }
        let msize = cap.unwrap_or(rank * rank).max(rank).min(64);
        Ok(Self {
            rank,
            msize,
            lambda,
            w_cols,
            mats,
            k_norm: alg.k_norm(),
        })
    }

    /// (w, s) for one ensemble row: weight and K * sum_i <x_i>^2 * w^2.
    fn row_stats(&self, v: &[Complex64]) -> (f64, f64) {
        let r = self.rank;
        let w: f64 = v
            .iter()
            .zip(self.lambda.iter())
            .map(|(z, l)| z.norm_sqr() * l)
            .sum();
        let mut s = 0.0;
        for m in &self.mats {
            let mut acc = Complex64::default();
            for a in 0..r {
                let va = v[a].conj();
                for bb in 0..r {
                    acc += va * m[a * r + bb] * v[bb];
                }
            }
            s += acc.re * acc.re;
        }
        (w, self.k_norm * s)
    }

    fn ensemble_from(&self, v_rows: &[Complex64]) -> Ensemble {
        let dim = self.w_cols[0].len();
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for j in 0..self.msize {
            let row = &v_rows[j * self.rank..(j + 1) * self.rank];
            let mut phi = Array1::<Complex64>::zeros(dim);
            for (a, col) in self.w_cols.iter().enumerate() {
                let c = row[a];
                if c != Complex64::default() {
                    for (slot, x) in phi.iter_mut().zip(col.iter()) {
                        *slot += x * c;
                    }
                }
            }
            let w: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
            if w > 1e-12 {
                weights.push(w);
                states.push(
                    PureState::normalized(phi).expect("nonzero ensemble member"),
                );
            }
        }
        Ensemble { weights, states }
    }
}

/// Score of one member given (weight, K sum <x>^2 w^2); the total objective
/// is the sum over members and is minimized.
type MemberScore = dyn Fn(f64, f64) -> f64 + Sync;

fn descend(
    problem: &RoofProblem,
    score: &MemberScore,
    v: &mut [Complex64],
    max_sweeps: usize,
) -> f64 {
    let r = problem.rank;
    let m = problem.msize;
    let mut scores: Vec<f64> = (0..m)
        .map(|j| {
            let (w, s) = problem.row_stats(&v[j * r..(j + 1) * r]);
            score(w, s)
        })
        .collect();

    let mut step = 0.6f64;
    let mut sweeps = 0usize;
    let phases = [0.0, std::f64::consts::FRAC_PI_2];
    let mut vp = vec![Complex64::default(); r];
    let mut vq = vec![Complex64::default(); r];
    while step >= 2e-3 && sweeps < max_sweeps {
        let mut improved = false;
        for p in 0..m {
            for q in (p + 1)..m {
                for &phi in &phases {
                    for &theta in &[step, -step] {
                        let (c, s) = (theta.cos(), theta.sin());
                        let e_m = Complex64::from_polar(s, -phi);
                        let e_p = Complex64::from_polar(s, phi);
                        for a in 0..r {
                            let xp = v[p * r + a];
                            let xq = v[q * r + a];
                            vp[a] = xp * c - xq * e_m;
                            vq[a] = xp * e_p + xq * c;
                        }
                        let sp = problem.row_stats(&vp);
                        let sq = problem.row_stats(&vq);
                        let new_score = score(sp.0, sp.1) + score(sq.0, sq.1);
                        let old_score = scores[p] + scores[q];
                        if new_score < old_score - 1e-14 {
                            v[p * r..p * r + r].copy_from_slice(&vp);
                            v[q * r..q * r + r].copy_from_slice(&vq);
                            scores[p] = score(sp.0, sp.1);
                            scores[q] = score(sq.0, sq.1);
                            improved = true;
                        }
                    }
                }
            }
        }
        sweeps += 1;
        if !improved {
            step *= 0.5;
        }
    }
    scores.iter().sum()
}

fn optimize_roof(
    problem: &RoofProblem,
    score: &MemberScore,
    opts: &RoofOptions,
) -> (f64, f64, Vec<Complex64>) {
    let r = problem.rank;
    let m = problem.msize;
    let identity_embed = || {
        let mut v = vec![Complex64::default(); m * r];
        for a in 0..r {
            v[a * r + a] = Complex64::new(1.0, 0.0);
        }
        v
    };
    // Baseline: eigen-decomposition ensemble, no descent.
    let base_v = identity_embed();
    let baseline: f64 = (0..m)
        .map(|j| {
            let (w, s) = problem.row_stats(&base_v[j * r..(j + 1) * r]);
            score(w, s)
        })
        .sum();

    let runs: Vec<(f64, Vec<Complex64>)> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|restart| {
            let mut v = identity_embed();
            if restart > 0 {
                let mut rng =
                    ChaCha20Rng::seed_from_u64(opts.seed.wrapping_add(1000 * restart as u64));
                for _ in 0..2 * m {
                    let p = rng.random_range(0..m);
                    let mut q = rng.random_range(0..m);
                    if p == q {
                        q = (q + 1) % m;
                    }
                    let theta: f64 = rng.random::<f64>() * std::f64::consts::PI - 1.5;
                    let phi: f64 = rng.random::<f64>() * std::f64::consts::PI;
                    let (c, s) = (theta.cos(), theta.sin());
                    let e_m = Complex64::from_polar(s, -phi);
                    let e_p = Complex64::from_polar(s, phi);
                    for a in 0..r {
                        let xp = v[p * r + a];
                        let xq = v[q * r + a];
                        v[p * r + a] = xp * c - xq * e_m;
                        v[q * r + a] = xp * e_p + xq * c;
                    }
                }
            }
            let value = descend(problem, score, &mut v, opts.max_sweeps);
            (value, v)
        })
        .collect();

    let mut best = 0usize;
    for (i, run) in runs.iter().enumerate() {
        if run.0 < runs[best].0 {
            best = i;
        }
    }
    let (value, v) = runs.into_iter().nth(best).expect("at least one restart");
    (value.min(baseline), baseline, v)
}

/// Convex-roof purity deficit min sum_i p_i (1 - P(pi_i)).
///
/// Pure inputs short-circuit to 1 - P(psi) with a single-member ensemble.
/// The returned value never exceeds the eigen-decomposition baseline.
pub fn roof_purity_deficit(
    rho: &DensityMatrix,
    alg: &ObservableAlgebra,
    opts: &RoofOptions,
) -> CoreResult<RoofResult> {
    let problem = RoofProblem::build(rho, alg, opts.ensemble_cap)?;
    if problem.rank == 1 {
        let psi = PureState::normalized(
            problem.w_cols[0].mapv(|z| z / problem.lambda[0].sqrt()),
        )?;
        let p = crate::purity::h_purity(&psi, alg)?;
        return Ok(RoofResult {
            value: 1.0 - p,
            baseline: 1.0 - p,
            ensemble: Ensemble {
                weights: vec![1.0],
                states: vec![psi],
            },
        });
    }
    // Member score w - s/w sums to 1 - sum_j p_j P_j.
    let score = |w: f64, s: f64| if w < 1e-14 { 0.0 } else { w - s / w };
    let (value, baseline, v) = optimize_roof(&problem, &score, opts);
    Ok(RoofResult {
        value: value.max(0.0),
        baseline,
        ensemble: problem.ensemble_from(&v),
    })
}

/// Best-found roof of the reduced-state mixedness sigma over ensembles,
/// for algebras whose pure reduced states form a ball surface (three
/// basis elements). Upper bound by construction.
pub fn sigma_roof(
    rho: &DensityMatrix,
    alg: &ObservableAlgebra,
    measure: MixednessMeasure,
    opts: &RoofOptions,
) -> CoreResult<RoofResult> {
    if alg.basis_len() != 3 {
        return Err(CoreError::UnsupportedAlgebra {
            algebra: alg.name().to_string(),
            reason: "sigma roof needs the su(2) ball geometry (3 basis elements)".into(),
        });
    }
    let problem = RoofProblem::build(rho, alg, opts.ensemble_cap)?;
    let score = move |w: f64, s: f64| {
        if w < 1e-14 {
            return 0.0;
        }
        let r = (s.max(0.0)).sqrt() / w;
        w * measure.chord_value(r)
    };
    let (value, baseline, v) = optimize_roof(&problem, &score, opts);
    Ok(RoofResult {
        value: value.max(0.0),
        baseline,
        ensemble: problem.ensemble_from(&v),
    })
}

/// Wootters concurrence of a two-qubit density matrix, from the spin-flip
/// spectrum: C = max(0, l1 - l2 - l3 - l4) with l_i the decreasing square
/// roots of the eigenvalues of sqrt(rho) rho~ sqrt(rho).
pub fn wootters_concurrence(rho: &DensityMatrix) -> CoreResult<f64> {
    if rho.dim() != 4 {
        return Err(CoreError::DimensionMismatch {
            context: "wootters_concurrence needs two qubits",
            expected: 4,
            got: rho.dim(),
        });
    }
    let yy = kron(&pauli_y(), &pauli_y());
    let conj = Operator::from_matrix(rho.matrix().mapv(|z| z.conj()))?;
    let tilde = yy.matmul(&conj)?.matmul(&yy)?;
    let sqrt_rho = sqrtm_psd(&Operator::hermitian(rho.matrix().clone())?)?;
    let inner = sqrt_rho.matmul(&tilde)?.matmul(&sqrt_rho)?;
    let spec = hermitian_eig(&Operator::hermitian(inner.into_matrix())?)?;
    // Rounding noise of order 1e-15 in the spectrum would inflate to 3e-8
    // through the square root; clamp it relative to the leading value.
    let top = spec.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let floor = 1e-12 * top;
    let mut roots: Vec<f64> = spec
        .eigenvalues
        .iter()
        .map(|v| if *v <= floor { 0.0 } else { v.sqrt() })
        .collect();
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Options for the reduced-state decomposition search.
#[derive(Debug, Clone)]
pub struct ChordOptions {
    pub restarts: usize,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for ChordOptions {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_sweeps: 300,
            seed: 0xc0de,
        }
    }
}

/// Result of the reduced-state mixedness minimization.
#[derive(Debug, Clone, Copy)]
pub struct ReducedMixedness {
    /// Best found sigma over decompositions into pure reduced states.
    pub value: f64,
    /// Moment-constraint residual of the best decomposition, in units of
    /// the ball radius.
    pub residual: f64,
}

/// Minimize sigma(p) over ways of writing the reduced state of `rho` as a
/// convex combination of pure reduced states (ball-surface points), for
/// algebras with the su(2) ball geometry. Ensemble size is capped at
/// basis-size + 1.
pub fn reduced_mixedness(
    rho: &DensityMatrix,
    alg: &ObservableAlgebra,
    measure: MixednessMeasure,
    opts: &ChordOptions,
) -> CoreResult<ReducedMixedness> {
    if alg.basis_len() != 3 {
        return Err(CoreError::UnsupportedAlgebra {
            algebra: alg.name().to_string(),
            reason: "reduced_mixedness needs the su(2) ball geometry".into(),
        });
    }
    let mu = alg.expectations_density(rho)?;
    let r_max = 1.0 / alg.k_norm().sqrt();
    let radius = (mu.iter().map(|x| x * x).sum::<f64>()).sqrt() / r_max;
    let members = 4usize; // basis size + 1

    // Parameters per member: theta, phi, weight logit.
    let eval = |params: &[f64]| -> (f64, f64) {
        let mut weights = [0.0f64; 8];
        let mut maxlog = f64::NEG_INFINITY;
        for j in 0..members {
            maxlog = maxlog.max(params[3 * j + 2]);
        }
        let mut total = 0.0;
        for j in 0..members {
            let w = (params[3 * j + 2] - maxlog).exp();
            weights[j] = w;
            total += w;
        }
        let mut moment = [0.0f64; 3];
        let mut probs = Vec::with_capacity(members);
        for j in 0..members {
            let p = weights[j] / total;
            probs.push(p);
            let (th, ph) = (params[3 * j], params[3 * j + 1]);
            moment[0] += p * r_max * th.sin() * ph.cos();
            moment[1] += p * r_max * th.sin() * ph.sin();
            moment[2] += p * r_max * th.cos();
        }
        let mut dev2 = 0.0;
        for a in 0..3 {
            let d = moment[a] - mu[a];
            dev2 += d * d;
        }
        let residual = dev2.sqrt() / r_max;
        (measure.eval(&probs) + 1e4 * dev2 / (r_max * r_max), residual)
    };

    // Deterministic start: the radial chord through mu.
    let dir = if radius > 1e-12 {
        [mu[0], mu[1], mu[2]].map(|x| x / (radius * r_max))
    } else {
        [0.0, 0.0, 1.0]
    };
    let (th0, ph0) = (dir[2].clamp(-1.0, 1.0).acos(), dir[1].atan2(dir[0]));
    let p_plus = 0.5 * (1.0 + radius.min(1.0));
    let chord_start: Vec<f64> = {
        let mut v = vec![0.0; 3 * members];
        v[0] = th0;
        v[1] = ph0;
        v[2] = (p_plus.max(1e-12)).ln();
        v[3] = std::f64::consts::PI - th0;
        v[4] = ph0 + std::f64::consts::PI;
        v[5] = ((1.0 - p_plus).max(1e-12)).ln();
        // Remaining members start with negligible weight at the poles.
        for j in 2..members {
            v[3 * j] = 0.5;
            v[3 * j + 1] = 1.0;
            v[3 * j + 2] = -30.0;
        }
        v
    };

    let mut best: Option<(f64, f64)> = None;
    for restart in 0..opts.restarts.max(1) {
        let mut params = if restart == 0 {
            chord_start.clone()
        } else {
            let mut rng = ChaCha20Rng::seed_from_u64(opts.seed + restart as u64);
            (0..3 * members)
                .map(|i| match i % 3 {
                    0 => rng.random::<f64>() * std::f64::consts::PI,
                    1 => rng.random::<f64>() * 2.0 * std::f64::consts::PI,
                    _ => rng.random::<f64>() - 0.5,
                })
                .collect()
        };
        let mut current = eval(&params).0;
        let mut step = 0.5;
        let mut sweeps = 0;
        while step > 1e-5 && sweeps < opts.max_sweeps {
            let mut improved = false;
            for i in 0..params.len() {
                for &delta in &[step, -step] {
                    let old = params[i];
                    params[i] = old + delta;
                    let cand = eval(&params).0;
                    if cand < current - 1e-15 {
                        current = cand;
                        improved = true;
                    } else {
                        params[i] = old;
                    }
                }
            }
            sweeps += 1;
            if !improved {
                step *= 0.5;
            }
        }
        let (obj, residual) = eval(&params);
        let sigma = obj - 1e4 * (residual * residual);
        if best.is_none() || sigma < best.unwrap().0 {
            best = Some((sigma, residual));
        }
    }
    let (value, residual) = best.expect("at least one restart");
    Ok(ReducedMixedness {
        value: value.max(0.0),
        residual,
    })
}

#[cfg(test)]
mod tests;
