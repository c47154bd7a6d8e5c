//! Dense real matrix kernels used throughout the crate.
//!
//! Besides the usual decompositions this module hosts the two upper bounds on
//! the spectral norm of a Hadamard product that the witness conversions rely
//! on: the optimal factorization `S = M ∘ Mᵀ` with `r(M) = √λ(S)`
//! ([`mathias_decomposition`]) and the support-restricted row/column bound
//! ([`conditional_norm_bound`]).

mod eigen;
mod matrix;

pub use eigen::{
    cholesky, psd_check, spectral_norm, symmetric_eigen, symmetric_spectral_radius, PsdCheck,
    SpectralResult, SymmetricEigen,
};
pub(crate) use eigen::{spd_inverse, spd_solve};
pub use matrix::DenseMatrix;

use thiserror::Error;

/// Default linear-algebra tolerance; scaled by `1 + max|entry|` where used.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix has a negative entry ({min:e})")]
    Negative { min: f64 },
    #[error("matrix is indefinite beyond tolerance (pivot {pivot:e})")]
    Indefinite { pivot: f64 },
    #[error("iteration did not converge (achieved residual {residual:e})")]
    NoConvergence { residual: f64 },
    #[error("principal eigenvector vanishes at index {index} of a non-empty row")]
    ZeroEigenvectorEntry { index: usize },
}

/// Connected components of the support graph of a symmetric matrix, restricted
/// to vertices with at least one nonzero entry in their row. Each component is
/// sorted ascending; components are ordered by their smallest vertex.
fn support_components(s: &DenseMatrix) -> Vec<Vec<usize>> {
    let n = s.rows();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] || s.row(start).iter().all(|&v| v == 0.0) {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < comp.len() {
            let x = comp[head];
            head += 1;
            for y in 0..n {
                if !seen[y] && s[(x, y)] != 0.0 {
                    seen[y] = true;
                    comp.push(y);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Perron vector of an irreducible non-negative symmetric block, polished by
/// shifted power steps. Products of non-negative matrices and vectors have no
/// cancellation, so the polish makes small coordinates accurate in the
/// relative sense, which the ratio `d[y]/d[x]` needs.
fn perron_vector(block: &DenseMatrix) -> Result<(f64, Vec<f64>), LinalgError> {
    let spec = spectral_norm(block, DEFAULT_TOL)?;
    let lambda = spec.value;
    let mut d = spec.vector;
    for _ in 0..500 {
        let mut next = block.mul_vec(&d);
        next.iter_mut().zip(&d).for_each(|(a, b)| *a += lambda * b);
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        next.iter_mut().for_each(|x| *x /= norm);
        let change = next
            .iter()
            .zip(&d)
            .map(|(a, b)| if *b > 0.0 { (a / b - 1.0).abs() } else if *a > 0.0 { 1.0 } else { 0.0 })
            .fold(0.0, f64::max);
        d = next;
        if change < 1e-15 {
            break;
        }
    }
    Ok((lambda, d))
}

/// Factorization `S = M ∘ Mᵀ` with `M[x,y] = √(S[x,y]·d[y]/d[x])`, `d` the
/// principal eigenvector, giving `r(M) = c(Mᵀ) = √λ(S)`.
///
/// Reducible `S` is handled per connected component of its support graph.
/// All-zero rows and columns of `S` map to zero.
pub fn mathias_decomposition(s: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    if !s.is_square() {
        return Err(LinalgError::Shape(format!("decomposition of a {}x{} matrix", s.rows(), s.cols())));
    }
    if !s.is_symmetric() {
        return Err(LinalgError::NotSymmetric { asymmetry: s.asymmetry() });
    }
    if !s.is_nonnegative() {
        return Err(LinalgError::Negative { min: s.min_entry() });
    }
    let mut m = DenseMatrix::zeros(s.rows(), s.cols());
    for comp in support_components(s) {
        let block = s.submatrix(&comp);
        let (_, d) = perron_vector(&block)?;
        if let Some(k) = d.iter().position(|&v| v <= 0.0) {
            return Err(LinalgError::ZeroEigenvectorEntry { index: comp[k] });
        }
        for (a, &x) in comp.iter().enumerate() {
            for (b, &y) in comp.iter().enumerate() {
                let v = block[(a, b)];
                if v > 0.0 {
                    m[(x, y)] = (v * d[b] / d[a]).sqrt();
                }
            }
        }
    }
    Ok(m)
}

/// `max_{x,y: S[x,y] > 0} r_x(M)·c_y(N)` for `S = M ∘ N`, an upper bound on
/// `λ(S)`. Returns 0 when `S = 0`.
pub fn conditional_norm_bound(m: &DenseMatrix, nmat: &DenseMatrix) -> Result<f64, LinalgError> {
    if m.shape() != nmat.shape() {
        return Err(LinalgError::Shape(format!("{:?} vs {:?}", m.shape(), nmat.shape())));
    }
    if !m.is_nonnegative() {
        return Err(LinalgError::Negative { min: m.min_entry() });
    }
    if !nmat.is_nonnegative() {
        return Err(LinalgError::Negative { min: nmat.min_entry() });
    }
    let s = m.hadamard(nmat);
    let asym = s.asymmetry();
    if asym > DEFAULT_TOL * (1.0 + s.max_abs()) {
        return Err(LinalgError::NotSymmetric { asymmetry: asym });
    }
    let rows: Vec<f64> = (0..m.rows()).map(|x| m.row_norm(x)).collect();
    let cols: Vec<f64> = (0..nmat.cols()).map(|y| nmat.col_norm(y)).collect();
    let mut bound: f64 = 0.0;
    for x in 0..s.rows() {
        for y in 0..s.cols() {
            if s[(x, y)] > 0.0 {
                bound = bound.max(rows[x] * cols[y]);
            }
        }
    }
    Ok(bound)
}

/// Unconditional form `r(M)·c(N)`, valid whenever `S ≤ M ∘ N` entrywise.
pub fn product_norm_bound(m: &DenseMatrix, nmat: &DenseMatrix) -> f64 {
    m.max_row_norm() * nmat.max_col_norm()
}
