//! Quantum adversary lower bounds for finite partial functions.
//!
//! A function is given as an explicit table ([`function_model`]). From it the
//! crate solves the two dual semidefinite programs ([`sdp`]), recovers optimal
//! witnesses for the spectral, weighted, strong weighted and minimax
//! formulations, and checks them against the certificate-complexity ceilings
//! ([`adversary`]).
//!
//! ```
//! use advbound::{builtin, compute_report};
//!
//! let or2 = builtin("or", &[2]).unwrap();
//! let report = compute_report(&or2, 0.0, 1e-7).unwrap();
//! assert!((report.values.sa - 2f64.sqrt()).abs() < 1e-6);
//! assert!(report.sandwich_residual < 1e-5);
//! ```

pub mod adversary;
pub mod cli;
pub mod function_model;
pub mod linalg;
pub mod sdp;

pub use adversary::{
    compute_report, eval_minimax, eval_spectral, eval_strong_weighted, eval_weighted, gsa_to_spectral,
    limitation_bounds, limitation_scheme, query_lower_bound, smm_to_probability, spectral_to_gsa,
    spectral_to_weighted, weighted_to_spectral, AdversaryError, BoundReport, LimitationMode,
    ProbabilityScheme, SpectralWitness, WeightScheme,
};
pub use function_model::{
    build_difference_matrices, builtin, certificate_profile, load_function, CertificateProfile,
    DifferenceMatrices, FunctionError, FunctionSpec,
};
pub use linalg::DenseMatrix;
pub use sdp::{solve_gsa, solve_pair, solve_smm, verify_gsa, verify_smm, GsaSolution, SdpOptions, SmmSolution};
