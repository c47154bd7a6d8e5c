//! Solves the maximization and minimization programs for a function and
//! checks both points from scratch.

use advbound::sdp::{solve_pair, verify_gsa, verify_smm, SdpOptions};
use advbound::{build_difference_matrices, builtin};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "two_level_and_or".into());
    let params: Vec<usize> = args.map(|a| a.parse().expect("integer parameter")).collect();
    let params = if params.is_empty() && name == "two_level_and_or" { vec![2, 2] } else { params };
    let spec = builtin(&name, &params).expect("builtin");
    let dm = build_difference_matrices(&spec);

    let out = solve_pair(&dm, &SdpOptions::default()).expect("solve");
    let smm = verify_smm(&dm, &out.smm, 1e-7).unwrap();
    let gsa = verify_gsa(&dm, &out.gsa, 1e-7).unwrap();
    println!("{} after {} iterations", spec.name().unwrap(), out.iterations);
    println!("  max mu   = {:.9}  accepted {}  {:?}", out.smm.mu, smm.accepted, smm.residuals);
    println!("  min tr   = {:.9}  accepted {}  {:?}", out.gsa.mu, gsa.accepted, gsa.residuals);
    println!("  gap      = {:.2e}", out.gap);
    println!("  adversary value in [{:.9}, {:.9}]", 1.0 / out.gsa.mu, 1.0 / out.smm.mu);
}
