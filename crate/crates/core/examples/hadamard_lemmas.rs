//! The optimal Hadamard factorization S = M ∘ Mᵀ and the support-restricted
//! row/column bound on random non-negative matrices.

use advbound::linalg::{conditional_norm_bound, mathias_decomposition, spectral_norm, DenseMatrix};

fn main() {
    // Deterministic pseudo-random entries keep the example dependency-free.
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for size in [3, 5, 8] {
        let mut s = DenseMatrix::zeros(size, size);
        for a in 0..size {
            for b in a..size {
                let v = next();
                s[(a, b)] = v;
                s[(b, a)] = v;
            }
        }
        let lambda = spectral_norm(&s, 1e-12).unwrap().value;
        let m = mathias_decomposition(&s).unwrap();
        let err = m.hadamard(&m.transpose()).sub(&s).max_abs();
        println!("size {size}: λ(S) = {lambda:.9}, r(M)² = {:.9}, |M∘Mᵀ − S| = {err:.1e}", m.max_row_norm().powi(2));

        let mut left = DenseMatrix::zeros(size, size);
        let mut right = DenseMatrix::zeros(size, size);
        for a in 0..size {
            for b in 0..size {
                let t = 0.2 + 2.0 * next();
                left[(a, b)] = t;
                right[(a, b)] = s[(a, b)] / t;
            }
        }
        println!("          arbitrary split bound {:.9} ≥ λ(S)", conditional_norm_bound(&left, &right).unwrap());
    }
}
