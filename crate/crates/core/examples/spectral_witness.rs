//! Evaluates hand-built spectral matrices for or(2). The two-edge matrix is
//! optimal; adding the third edge of the star makes it worse.

use advbound::{build_difference_matrices, builtin, eval_spectral, DenseMatrix, SpectralWitness};

fn edges(size: usize, list: &[(usize, usize)]) -> DenseMatrix {
    let mut g = DenseMatrix::zeros(size, size);
    for &(x, y) in list {
        g[(x, y)] = 1.0;
        g[(y, x)] = 1.0;
    }
    g
}

fn main() {
    let or2 = builtin("or", &[2]).unwrap();
    let dm = build_difference_matrices(&or2);
    let zero = or2.index_of("00").unwrap();
    let (a, b, c) = (or2.index_of("01").unwrap(), or2.index_of("10").unwrap(), or2.index_of("11").unwrap());

    let two_edge = SpectralWitness::new(edges(4, &[(zero, a), (zero, b)]));
    let star = SpectralWitness::new(edges(4, &[(zero, a), (zero, b), (zero, c)]));
    println!("two-edge Γ: {:.6}", eval_spectral(&two_edge, &dm).unwrap());
    println!("star Γ:     {:.6}", eval_spectral(&star, &dm).unwrap());

    let corrupt = SpectralWitness::new(edges(4, &[(zero, a), (a, b)]));
    println!("bad Γ:      {}", eval_spectral(&corrupt, &dm).unwrap_err());
}
