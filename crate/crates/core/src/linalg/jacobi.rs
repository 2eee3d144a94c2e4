//! Cyclic Jacobi eigensolver for complex Hermitian matrices, plus the
//! symmetric tridiagonal QL solver used by the Lanczos driver.

use ndarray::Array2;
use num_complex::Complex64;

use super::{Operator, Spectrum};
use crate::error::{CoreError, CoreResult};
use crate::tol;

/// Full spectrum of a Hermitian operator via cyclic Jacobi rotations.
///
/// Eigenvalues come back ascending (stable order on ties); each eigenvector
/// is phase-fixed so that its first significant component is positive real.
pub fn hermitian_eig(m: &Operator) -> CoreResult<Spectrum> {
    if !m.is_hermitian() {
        let dev = {
            let d = m.matrix();
            let n = m.dim();
            let mut worst = 0.0f64;
            for i in 0..n {
                for j in i..n {
                    worst = worst.max((d[[i, j]] - d[[j, i]].conj()).norm());
                }
            }
            worst
        };
        return Err(CoreError::NonHermitian { deviation: dev });
    }

    let n = m.dim();
    let mut a: Vec<Complex64> = m.matrix().iter().copied().collect();
    let mut v: Vec<Complex64> = vec![Complex64::default(); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    // Force the working copy exactly Hermitian; the flag allows 1e-12 slack.
    for p in 0..n {
        a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
        for q in (p + 1)..n {
            let avg = (a[p * n + q] + a[q * n + p].conj()) * 0.5;
            a[p * n + q] = avg;
            a[q * n + p] = avg.conj();
        }
    }

    let fro = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if fro == 0.0 {
        return Ok(sorted_spectrum(n, vec![0.0; n], v));
    }
    let off_target = tol::JACOBI_OFF_TOL * fro;
    let skip = 1e-18 * fro;

    let mut converged = false;
    let mut last_off = f64::INFINITY;
    for _sweep in 0..tol::JACOBI_MAX_SWEEPS {
        let off = offdiag_norm(&a, n);
        last_off = off;
        if off <= off_target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= skip {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let phase = apq / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A <- J^dag A J with J acting on the (p,q) plane:
                // J[p][p] = c, J[p][q] = s*phase, J[q][p] = -s*conj(phase), J[q][q] = c.
                let s_ph = phase * s;
                let s_phc = phase.conj() * s;
                // Column update A <- A J.
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * s_phc;
                    a[k * n + q] = akp * s_ph + akq * c;
                }
                // Row update A <- J^dag A.
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * s_ph;
                    a[q * n + k] = apk * s_phc + aqk * c;
                }
                // Clean the rotated entries to keep the matrix exactly Hermitian.
                a[p * n + q] = Complex64::default();
                a[q * n + p] = Complex64::default();
                a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);

                // Accumulate V <- V J.
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - vkq * s_phc;
                    v[k * n + q] = vkp * s_ph + vkq * c;
                }
            }
        }
    }
    if !converged {
        let off = offdiag_norm(&a, n);
        if off > off_target {
            return Err(CoreError::NonConvergence {
                sweeps: tol::JACOBI_MAX_SWEEPS,
                residual: off.min(last_off),
            });
        }
    }

    let eigenvalues: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    Ok(sorted_spectrum(n, eigenvalues, v))
}

fn offdiag_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            acc += 2.0 * a[p * n + q].norm_sqr();
        }
    }
    acc.sqrt()
}

fn sorted_spectrum(n: usize, eigenvalues: Vec<f64>, v: Vec<Complex64>) -> Spectrum {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[i].partial_cmp(&eigenvalues[j]).unwrap());

    let mut vals = Vec::with_capacity(n);
    let mut vecs = Array2::<Complex64>::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        vals.push(eigenvalues[src]);
        let mut max_abs = 0.0f64;
        for k in 0..n {
            max_abs = max_abs.max(v[k * n + src].norm());
        }
        let thresh = 1e-8 * max_abs;
        let mut fix = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let z = v[k * n + src];
            if z.norm() > thresh {
                fix = z.conj() / z.norm();
                break;
            }
        }
        for k in 0..n {
            vecs[[k, col]] = v[k * n + src] * fix;
        }
    }
    Spectrum {
        eigenvalues: vals,
        eigenvectors: vecs,
    }
}

/// Eigendecomposition of a real symmetric tridiagonal matrix by the
/// implicit-shift QL iteration. Returns eigenvalues ascending together with
/// the (real, row-major) eigenvector matrix; column j pairs with value j.
///
/// `offdiag[i]` couples rows i and i+1, so it must have one fewer entry
/// than `diag`.
pub fn sym_tridiag_eig(diag: &[f64], offdiag: &[f64]) -> CoreResult<(Vec<f64>, Vec<f64>)> {
    let m = diag.len();
    if m == 0 {
        return Err(CoreError::EmptyInput);
    }
    if offdiag.len() + 1 != m {
        return Err(CoreError::DimensionMismatch {
            context: "sym_tridiag_eig: offdiag length",
            expected: m - 1,
            got: offdiag.len(),
        });
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0f64; m];
    e[..m - 1].copy_from_slice(offdiag);
    let mut z = vec![0.0f64; m * m];
    for i in 0..m {
        z[i * m + i] = 1.0;
    }

    let eps = f64::EPSILON;
    for l in 0..m {
        let mut iter = 0;
        loop {
            let mut seg = l;
            while seg + 1 < m {
                let dd = d[seg].abs() + d[seg + 1].abs();
                if e[seg].abs() <= eps * dd {
                    break;
                }
                seg += 1;
            }
            if seg == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(CoreError::NonConvergence {
                    sweeps: 64,
                    residual: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[seg] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..seg).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[seg] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..m {
                    f = z[k * m + i + 1];
                    z[k * m + i + 1] = s * z[k * m + i] + c * f;
                    z[k * m + i] = c * z[k * m + i] - s * f;
                }
            }
            if r == 0.0 && seg > l + 1 {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[seg] = 0.0;
        }
    }

    // Sort ascending, reordering columns.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vecs = vec![0.0f64; m * m];
    for (col, &src) in order.iter().enumerate() {
        for k in 0..m {
            vecs[k * m + col] = z[k * m + src];
        }
    }
    Ok((vals, vecs))
}
