//! Symmetric eigen-decomposition (cyclic Jacobi), spectral norms, Cholesky
//! factorization and PSD tests.

use super::{DenseMatrix, LinalgError};

const MAX_SWEEPS: usize = 100;

/// Full eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: DenseMatrix,
}

impl SymmetricEigen {
    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.vectors.rows()).map(|r| self.vectors[(r, k)]).collect()
    }
}

/// Cyclic Jacobi rotation sweeps until the off-diagonal mass is negligible.
/// The input is symmetrized first, so slightly asymmetric input is accepted.
pub fn symmetric_eigen(m: &DenseMatrix) -> Result<SymmetricEigen, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Shape(format!("eigen-decomposition of a {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut a = m.symmetrized();
    let mut v = DenseMatrix::identity(n);
    let scale = a.max_abs();
    if n == 0 || scale == 0.0 {
        return Ok(SymmetricEigen { values: a.diag(), vectors: v });
    }

    let off = |a: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += a[(p, q)] * a[(p, q)];
            }
        }
        s.sqrt()
    };
    let frob = a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = 1e-15 * frob;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off(&a) > 1e-10 * frob {
        return Err(LinalgError::NoConvergence { residual: off(&a) });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, k)] = v[(r, i)];
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Spectral norm together with a unit principal eigenvector.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `|Av − λv|` for the returned pair.
    pub residual: f64,
}

fn residual(m: &DenseMatrix, value: f64, v: &[f64]) -> f64 {
    m.mul_vec(v).iter().zip(v).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Spectral norm `λ(A)` of a symmetric non-negative matrix with a non-negative
/// unit principal eigenvector. `tol` is scaled by `1 + max|A|`.
pub fn spectral_norm(m: &DenseMatrix, tol: f64) -> Result<SpectralResult, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Shape(format!("spectral norm of a {}x{} matrix", m.rows(), m.cols())));
    }
    if !m.is_symmetric() {
        return Err(LinalgError::NotSymmetric { asymmetry: m.asymmetry() });
    }
    if !m.is_nonnegative() {
        return Err(LinalgError::Negative { min: m.min_entry() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(SpectralResult { value: 0.0, vector: Vec::new(), residual: 0.0 });
    }
    if m.is_zero() {
        let u = 1.0 / (n as f64).sqrt();
        return Ok(SpectralResult { value: 0.0, vector: vec![u; n], residual: 0.0 });
    }

    let eig = symmetric_eigen(m)?;
    let value = eig.max_value().max(0.0);
    // For A ≥ 0 the entrywise modulus of a top eigenvector is again a top
    // eigenvector (its Rayleigh quotient cannot decrease).
    let mut vector: Vec<f64> = eig.vector(n - 1).iter().map(|x| x.abs()).collect();
    normalize(&mut vector);
    let bound = tol * (1.0 + m.max_abs());
    let mut res = residual(m, value, &vector);
    if res > bound {
        // Shifted power steps on A + λI, spectrum in [0, 2λ].
        for _ in 0..10_000 {
            let mut next = m.mul_vec(&vector);
            next.iter_mut().zip(&vector).for_each(|(a, b)| *a += value * b);
            normalize(&mut next);
            vector = next;
            res = residual(m, value, &vector);
            if res <= bound {
                break;
            }
        }
    }
    if res > bound {
        return Err(LinalgError::NoConvergence { residual: res });
    }
    Ok(SpectralResult { value, vector, residual: res })
}

/// Largest eigenvalue magnitude of an arbitrary symmetric matrix.
pub fn symmetric_spectral_radius(m: &DenseMatrix) -> Result<f64, LinalgError> {
    let eig = symmetric_eigen(m)?;
    Ok(eig.max_value().abs().max(eig.min_value().abs()))
}

/// Result of [`psd_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
}

/// `is_psd` iff the smallest eigenvalue is at least `−tol·(1 + max|A|)`.
pub fn psd_check(m: &DenseMatrix, tol: f64) -> Result<PsdCheck, LinalgError> {
    let eig = symmetric_eigen(m)?;
    let min_eigenvalue = if m.rows() == 0 { 0.0 } else { eig.min_value() };
    Ok(PsdCheck { is_psd: min_eigenvalue >= -tol * (1.0 + m.max_abs()), min_eigenvalue })
}

fn cholesky_with_shift(m: &DenseMatrix, shift: f64, floor: f64) -> Result<DenseMatrix, f64> {
    let n = m.rows();
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)] + shift;
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d < -floor {
            return Err(d);
        }
        if d <= floor {
            // Semidefinite direction: the column stays zero.
            continue;
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Lower-triangular `X` with `m = X Xᵀ` up to `10·tol·(1 + max|m|)`.
///
/// Positive definite input is factored exactly; on a non-positive pivot the
/// factorization is retried on `m + tol·(1 + max|m|)·I`, which absorbs
/// eigenvalues in `[−tol, 0)`.
pub fn cholesky(m: &DenseMatrix, tol: f64) -> Result<DenseMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Shape(format!("cholesky of a {}x{} matrix", m.rows(), m.cols())));
    }
    let scale = 1.0 + m.max_abs();
    let asym = m.asymmetry();
    if asym > tol * scale {
        return Err(LinalgError::NotSymmetric { asymmetry: asym });
    }
    let bound = 10.0 * tol * scale;
    let attempt = match cholesky_with_shift(m, 0.0, 0.0) {
        Ok(l) => Ok(l),
        Err(_) => cholesky_with_shift(m, tol * scale, tol * scale * 1e-3),
    };
    let l = attempt.map_err(|pivot| LinalgError::Indefinite { pivot })?;
    let err = l.matmul(&l.transpose()).sub(m).max_abs();
    if err > bound {
        let pivot = psd_check(m, tol).map(|c| c.min_eigenvalue).unwrap_or(f64::NAN);
        return Err(LinalgError::Indefinite { pivot });
    }
    Ok(l)
}

/// Inverse of a symmetric positive definite matrix via Cholesky.
pub(crate) fn spd_inverse(m: &DenseMatrix) -> Option<DenseMatrix> {
    let n = m.rows();
    let l = cholesky_with_shift(m, 0.0, 0.0).ok()?;
    if (0..n).any(|i| l[(i, i)] <= 0.0) {
        return None;
    }
    // Inverse of L by forward substitution, then L⁻ᵀ L⁻¹.
    let mut linv = DenseMatrix::zeros(n, n);
    for c in 0..n {
        for r in c..n {
            let mut s = if r == c { 1.0 } else { 0.0 };
            for k in c..r {
                s -= l[(r, k)] * linv[(k, c)];
            }
            linv[(r, c)] = s / l[(r, r)];
        }
    }
    Some(linv.transpose().matmul(&linv))
}

/// Solves `M x = b` for symmetric positive (semi)definite `M`, adding a tiny
/// ridge when the plain factorization breaks down.
pub(crate) fn spd_solve(m: &DenseMatrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = m.rows();
    let mut ridge = 0.0;
    let diag_max = m.diag().into_iter().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for _ in 0..8 {
        if let Ok(l) = cholesky_with_shift(m, ridge, 0.0) {
            if (0..n).all(|i| l[(i, i)] > 0.0) {
                let mut y = b.to_vec();
                for i in 0..n {
                    let mut s = y[i];
                    for k in 0..i {
                        s -= l[(i, k)] * y[k];
                    }
                    y[i] = s / l[(i, i)];
                }
                for i in (0..n).rev() {
                    let mut s = y[i];
                    for k in (i + 1)..n {
                        s -= l[(k, i)] * y[k];
                    }
                    y[i] = s / l[(i, i)];
                }
                return Some(y);
            }
        }
        ridge = if ridge == 0.0 { 1e-14 * diag_max } else { ridge * 100.0 };
    }
    None
}
