//! Walks the conversion chain on parity(3): the solved minimization point
//! becomes a spectral matrix, then a weight scheme, then a spectral matrix
//! again, and finally a minimization point. Each step can only gain.

use advbound::adversary::{
    eval_spectral, eval_strong_weighted, eval_weighted, gsa_to_spectral, smm_to_probability, spectral_to_gsa,
    spectral_to_weighted, weighted_to_spectral,
};
use advbound::{build_difference_matrices, builtin, eval_minimax, solve_pair, SdpOptions};

fn main() {
    let spec = builtin("parity", &[3]).unwrap();
    let dm = build_difference_matrices(&spec);
    let out = solve_pair(&dm, &SdpOptions::default()).unwrap();
    println!("1 / tr Δ              {:.9}", 1.0 / out.gsa.mu);

    let gamma = gsa_to_spectral(&out.gsa, &dm).unwrap();
    println!("spectral              {:.9}", eval_spectral(&gamma, &dm).unwrap());

    let ws = spectral_to_weighted(&gamma, &dm).unwrap();
    println!("weighted              {:.9}", eval_weighted(&ws, &dm).unwrap());
    println!("strong weighted       {:.9}", eval_strong_weighted(&ws, &dm).unwrap());

    let back = weighted_to_spectral(&ws, &dm).unwrap();
    println!("spectral again        {:.9}", eval_spectral(&back, &dm).unwrap());

    let gsa = spectral_to_gsa(&back, &dm).unwrap();
    println!("1 / tr Δ again        {:.9}", 1.0 / gsa.mu);

    let p = smm_to_probability(&out.smm, &dm, 1e-7).unwrap();
    println!("minimax upper bound   {:.9}", eval_minimax(&p, &dm).unwrap());
}
