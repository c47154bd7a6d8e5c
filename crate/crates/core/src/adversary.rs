//! Adversary bounds: witness evaluation, conversions between formulations,
//! certificate-complexity limitations and the combined report.
//!
//! Witness families and what their evaluation certifies about the common
//! adversary value `ADV(f)`:
//!
//! | witness              | evaluator                                  | certifies |
//! |----------------------|--------------------------------------------|-----------|
//! | [`SpectralWitness`]  | [`eval_spectral`]                          | `≤ ADV`   |
//! | [`WeightScheme`]     | [`eval_weighted`], [`eval_strong_weighted`]| `≤ ADV`   |
//! | [`ProbabilityScheme`]| [`eval_minimax`]                           | `≥ ADV`   |
//! | [`GsaSolution`]      | `1 / tr Δ`                                 | `≤ ADV`   |
//! | [`SmmSolution`]      | `1 / μ`                                    | `≥ ADV`   |
//!
//! Optimal witnesses are never searched for directly: the solved GSA point is
//! converted to a spectral matrix, then to a weight scheme, and the solved SMM
//! point is rounded to a probability scheme.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::function_model::{
    build_difference_matrices, certificate_profile, CertificateProfile, DifferenceMatrices, FunctionError,
    FunctionSpec,
};
use crate::linalg::{cholesky, mathias_decomposition, spectral_norm, DenseMatrix, LinalgError};
use crate::sdp::{
    self, GsaSolution, GsaWitness, SdpError, SdpOptions, SmmSolution,
};

/// Relative tolerance for structural witness invariants in the evaluators.
pub const WITNESS_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone)]
pub enum AdversaryError {
    #[error("constant function has no adversary bound")]
    ConstantFunction,
    #[error("witness is zero")]
    ZeroWitness,
    #[error("witness corruption: {0}")]
    Corrupt(String),
    #[error("invalid witness: {0}")]
    Invalid(String),
    #[error("eps = {0} must lie in [0, 1/2)")]
    EpsOutOfRange(f64),
    #[error("mode requires a total function (S = G^n)")]
    NotTotal,
    #[error("mode requires a Boolean output alphabet")]
    NotBoolean,
    #[error("input {index} has an empty certificate")]
    EmptyCertificate { index: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Sdp(#[from] SdpError),
    #[error(transparent)]
    Function(#[from] FunctionError),
}

type Result<T> = std::result::Result<T, AdversaryError>;

fn invalid(msg: impl Into<String>) -> AdversaryError {
    AdversaryError::Invalid(msg.into())
}

/// Spectral adversary matrix `Γ`: symmetric, non-negative, `Γ ∘ F = Γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralWitness {
    pub gamma: DenseMatrix,
}

/// Weight scheme `(w, w′)`; `wp[i]` holds `w′(·,·,i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightScheme {
    pub w: DenseMatrix,
    pub wp: Vec<DenseMatrix>,
}

/// Row `x` of `p` is the query distribution `p_x` over positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityScheme {
    pub p: DenseMatrix,
}

fn square_of(dm: &DifferenceMatrices, m: &DenseMatrix, what: &str) -> Result<()> {
    let size = dm.size();
    if m.shape() != (size, size) {
        return Err(invalid(format!("{what} is {}x{}, expected {size}x{size}", m.rows(), m.cols())));
    }
    Ok(())
}

impl SpectralWitness {
    pub fn new(gamma: DenseMatrix) -> Self {
        Self { gamma }
    }

    /// Checks the invariants; `tol` is scaled by `1 + max|Γ|`.
    pub fn validate(&self, dm: &DifferenceMatrices, tol: f64) -> Result<()> {
        let g = &self.gamma;
        square_of(dm, g, "gamma")?;
        let eps = tol * (1.0 + g.max_abs());
        if g.asymmetry() > eps {
            return Err(invalid("gamma is not symmetric"));
        }
        if g.min_entry() < -eps {
            return Err(invalid("gamma ≥ 0"));
        }
        for x in 0..dm.size() {
            for y in 0..dm.size() {
                if !dm.outputs_differ(x, y) && g[(x, y)].abs() > eps {
                    return Err(invalid("gamma ∘ F ≠ gamma"));
                }
            }
        }
        Ok(())
    }

    /// Exactly symmetric, non-negative and supported on `F`.
    fn cleaned(&self, dm: &DifferenceMatrices) -> DenseMatrix {
        self.gamma.symmetrized().hadamard(&dm.f_mat).map(|v| v.max(0.0))
    }
}

impl WeightScheme {
    /// `wt(x) = Σ_y w(x,y)`.
    pub fn wt(&self) -> Vec<f64> {
        (0..self.w.rows()).map(|x| self.w.row(x).iter().sum()).collect()
    }

    /// `v(x,i) = Σ_y w′(x,y,i)`, indexed `[x][i]`.
    pub fn v(&self) -> Vec<Vec<f64>> {
        (0..self.w.rows()).map(|x| self.wp.iter().map(|m| m.row(x).iter().sum()).collect()).collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { w: self.w.scale(c), wp: self.wp.iter().map(|m| m.scale(c)).collect() }
    }

    pub fn validate(&self, dm: &DifferenceMatrices, tol: f64) -> Result<()> {
        square_of(dm, &self.w, "w")?;
        if self.wp.len() != dm.arity() {
            return Err(invalid(format!("expected {} matrices w′, got {}", dm.arity(), self.wp.len())));
        }
        for (i, m) in self.wp.iter().enumerate() {
            square_of(dm, m, &format!("w′ for position {}", i + 1))?;
        }
        let scale = 1.0 + self.w.max_abs();
        let eps = tol * scale;
        if self.w.asymmetry() > eps {
            return Err(invalid("w(x,y) = w(y,x)"));
        }
        if self.w.min_entry() < -eps {
            return Err(invalid("w ≥ 0"));
        }
        let size = dm.size();
        for x in 0..size {
            for y in 0..size {
                if !dm.outputs_differ(x, y) && self.w[(x, y)].abs() > eps {
                    return Err(invalid("w(x,y) = 0 whenever f(x) = f(y)"));
                }
            }
        }
        for (i, m) in self.wp.iter().enumerate() {
            let eps_i = tol * (1.0 + m.max_abs());
            if m.min_entry() < -eps_i {
                return Err(invalid(format!("w′(·,·,{}) ≥ 0", i + 1)));
            }
            for x in 0..size {
                for y in 0..size {
                    let active = dm.outputs_differ(x, y) && dm.differs_at(i, x, y);
                    if !active && m[(x, y)].abs() > eps_i {
                        return Err(invalid("w′(x,y,i) = 0 whenever x_i = y_i or f(x) = f(y)"));
                    }
                    if active {
                        let w2 = self.w[(x, y)].powi(2);
                        let prod = m[(x, y)] * m[(y, x)];
                        if prod < w2 - tol * (w2 + scale * scale * tol) {
                            return Err(invalid("w′(x,y,i)·w′(y,x,i) ≥ w(x,y)²"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl ProbabilityScheme {
    pub fn validate(&self, dm: &DifferenceMatrices, tol: f64) -> Result<()> {
        let (rows, cols) = self.p.shape();
        if rows != dm.size() || cols != dm.arity() {
            return Err(invalid(format!("p is {rows}x{cols}, expected {}x{}", dm.size(), dm.arity())));
        }
        if self.p.min_entry() < -tol {
            return Err(invalid("p_x(i) ≥ 0"));
        }
        if let Some(x) = (0..rows).find(|&x| (self.p.row(x).iter().sum::<f64>() - 1.0).abs() > tol) {
            return Err(invalid(format!("Σ_i p_x(i) = 1 fails for input {x}")));
        }
        Ok(())
    }

    /// Rescales every row to sum to exactly 1.
    fn normalized(mut p: DenseMatrix) -> Self {
        for x in 0..p.rows() {
            let s: f64 = p.row(x).iter().sum();
            if s > 0.0 {
                for i in 0..p.cols() {
                    p[(x, i)] /= s;
                }
            }
        }
        Self { p }
    }
}

/// `λ(Γ) / max_i λ(Γ ∘ D_i)` at a fixed `Γ`.
pub fn eval_spectral(wit: &SpectralWitness, dm: &DifferenceMatrices) -> Result<f64> {
    eval_spectral_with_tol(wit, dm, WITNESS_TOL)
}

/// [`eval_spectral`] with the invariants checked at relative tolerance `tol`.
pub fn eval_spectral_with_tol(wit: &SpectralWitness, dm: &DifferenceMatrices, tol: f64) -> Result<f64> {
    wit.validate(dm, tol)?;
    let g = wit.cleaned(dm);
    if g.is_zero() {
        return Err(AdversaryError::ZeroWitness);
    }
    let top = spectral_norm(&g, crate::linalg::DEFAULT_TOL)?.value;
    let mut worst: f64 = 0.0;
    for d in &dm.d {
        worst = worst.max(spectral_norm(&g.hadamard(d), crate::linalg::DEFAULT_TOL)?.value);
    }
    if worst == 0.0 {
        return Err(AdversaryError::Corrupt("every Γ ∘ D_i vanishes".into()));
    }
    Ok(top / worst)
}

/// Weighted adversary value; `i` and `j` range independently.
pub fn eval_weighted(ws: &WeightScheme, dm: &DifferenceMatrices) -> Result<f64> {
    eval_weighted_with_tol(ws, dm, WITNESS_TOL)
}

pub fn eval_weighted_with_tol(ws: &WeightScheme, dm: &DifferenceMatrices, tol: f64) -> Result<f64> {
    ws.validate(dm, tol)?;
    if ws.w.is_zero() {
        return Err(AdversaryError::ZeroWitness);
    }
    let wt = ws.wt();
    // For fixed x the smallest term uses the largest v(x,i).
    let vmax: Vec<f64> = ws.v().into_iter().map(|row| row.into_iter().fold(0.0, f64::max)).collect();
    let mut best = f64::INFINITY;
    for (x, y) in dm.split_pairs() {
        if vmax[x] > 0.0 && vmax[y] > 0.0 {
            best = best.min((wt[x] * wt[y] / (vmax[x] * vmax[y])).sqrt());
        }
    }
    if best.is_infinite() {
        return Err(AdversaryError::Corrupt("no admissible (x, y, i, j) term".into()));
    }
    Ok(best)
}

/// Strong weighted adversary value: terms with `w(x,y) > 0` and `x_i ≠ y_i`.
pub fn eval_strong_weighted(ws: &WeightScheme, dm: &DifferenceMatrices) -> Result<f64> {
    eval_strong_weighted_with_tol(ws, dm, WITNESS_TOL)
}

pub fn eval_strong_weighted_with_tol(ws: &WeightScheme, dm: &DifferenceMatrices, tol: f64) -> Result<f64> {
    ws.validate(dm, tol)?;
    if ws.w.is_zero() {
        return Err(AdversaryError::ZeroWitness);
    }
    let wt = ws.wt();
    let v = ws.v();
    let mut best = f64::INFINITY;
    for (x, y) in dm.split_pairs() {
        if ws.w[(x, y)] <= 0.0 {
            continue;
        }
        for i in (0..dm.arity()).filter(|&i| dm.differs_at(i, x, y)) {
            let denom = v[x][i] * v[y][i];
            if denom > 0.0 {
                best = best.min((wt[x] * wt[y] / denom).sqrt());
            }
        }
    }
    if best.is_infinite() {
        return Err(AdversaryError::Corrupt("no admissible (x, y, i) term".into()));
    }
    Ok(best)
}

/// `max_{f(x)≠f(y)} 1 / Σ_{i: x_i≠y_i} √(p_x(i) p_y(i))`; `+∞` when some
/// split pair has zero overlap.
pub fn eval_minimax(ps: &ProbabilityScheme, dm: &DifferenceMatrices) -> Result<f64> {
    eval_minimax_with_tol(ps, dm, WITNESS_TOL)
}

/// [`eval_minimax`] accepting rows that sum to 1 within `tol`.
pub fn eval_minimax_with_tol(ps: &ProbabilityScheme, dm: &DifferenceMatrices, tol: f64) -> Result<f64> {
    if dm.is_constant() {
        return Err(AdversaryError::ConstantFunction);
    }
    ps.validate(dm, tol)?;
    let p = &ps.p;
    let mut worst: f64 = 0.0;
    for (x, y) in dm.split_pairs() {
        let overlap: f64 = (0..dm.arity())
            .filter(|&i| dm.differs_at(i, x, y))
            .map(|i| (p[(x, i)].max(0.0) * p[(y, i)].max(0.0)).sqrt())
            .sum();
        if overlap <= 0.0 {
            return Ok(f64::INFINITY);
        }
        worst = worst.max(1.0 / overlap);
    }
    Ok(worst)
}

/// Unit-norm Γ (λ = 1) with its principal eigenvector.
fn normalized_gamma(wit: &SpectralWitness, dm: &DifferenceMatrices) -> Result<(DenseMatrix, Vec<f64>)> {
    wit.validate(dm, WITNESS_TOL)?;
    let g = wit.cleaned(dm);
    if g.is_zero() {
        return Err(AdversaryError::ZeroWitness);
    }
    let spec = spectral_norm(&g, crate::linalg::DEFAULT_TOL)?;
    let g = g.scale(1.0 / spec.value);
    let delta = spectral_norm(&g, crate::linalg::DEFAULT_TOL)?.vector;
    Ok((g, delta))
}

/// `w(x,y) = Γ[x,y]·δ[x]δ[y]` and `w′(x,y,i) = M_i[x,y]²·δ[x]²` where
/// `Γ ∘ D_i = M_i ∘ M_iᵀ` is the optimal Hadamard factorization.
pub fn spectral_to_weighted(wit: &SpectralWitness, dm: &DifferenceMatrices) -> Result<WeightScheme> {
    let (g, delta) = normalized_gamma(wit, dm)?;
    let size = dm.size();
    let mut w = DenseMatrix::zeros(size, size);
    for x in 0..size {
        for y in 0..size {
            w[(x, y)] = g[(x, y)] * delta[x] * delta[y];
        }
    }
    let w = w.symmetrized();
    let mut wp = Vec::with_capacity(dm.arity());
    for d in &dm.d {
        let m = mathias_decomposition(&g.hadamard(d))?;
        let mut wpi = DenseMatrix::zeros(size, size);
        for x in 0..size {
            for y in 0..size {
                wpi[(x, y)] = (m[(x, y)] * delta[x]).powi(2);
            }
        }
        wp.push(wpi);
    }
    Ok(WeightScheme { w, wp })
}

/// `Γ[x,y] = w(x,y) / √(wt(x) wt(y))`, zero on rows with `wt(x) = 0`.
pub fn weighted_to_spectral(ws: &WeightScheme, dm: &DifferenceMatrices) -> Result<SpectralWitness> {
    ws.validate(dm, WITNESS_TOL)?;
    if ws.w.is_zero() {
        return Err(AdversaryError::ZeroWitness);
    }
    let wt = ws.wt();
    let size = dm.size();
    let mut g = DenseMatrix::zeros(size, size);
    for x in 0..size {
        for y in 0..size {
            let denom = wt[x] * wt[y];
            if denom > 0.0 && dm.outputs_differ(x, y) {
                g[(x, y)] = ws.w[(x, y)].max(0.0) / denom.sqrt();
            }
        }
    }
    Ok(SpectralWitness { gamma: g.symmetrized() })
}

/// Rank-1 rounding of an SMM point: `R_i = X_i X_iᵀ`, `q_i[x] = r_x(X_i)`,
/// `p_x(i) = q_i[x]²`.
pub fn smm_to_probability(sol: &SmmSolution, dm: &DifferenceMatrices, tol: f64) -> Result<ProbabilityScheme> {
    let check = sdp::verify_smm(dm, sol, tol)?;
    if !check.accepted {
        return Err(invalid(format!(
            "SMM solution is infeasible: {}",
            check.violation.unwrap_or_default()
        )));
    }
    let size = dm.size();
    let mut p = DenseMatrix::zeros(size, dm.arity());
    for (i, r) in sol.r.iter().enumerate() {
        let x_factor = cholesky(&r.symmetrized(), tol)?;
        for x in 0..size {
            p[(x, i)] = x_factor.row_norm(x).powi(2);
        }
    }
    if let Some(x) = (0..size).find(|&x| (p.row(x).iter().sum::<f64>() - 1.0).abs() > 10.0 * tol * (1.0 + dm.arity() as f64)) {
        return Err(AdversaryError::Corrupt(format!("rounded distribution for input {x} does not sum to 1")));
    }
    Ok(ProbabilityScheme::normalized(p))
}

/// `Γ = Z ∘ F ∘ aaᵀ` with `a = diag(Δ^{-1/2})`, after deleting empty rows of `Z`.
pub fn gsa_to_spectral(sol: &GsaSolution, dm: &DifferenceMatrices) -> Result<SpectralWitness> {
    let size = dm.size();
    if sol.z.shape() != (size, size) || sol.delta.len() != size {
        return Err(invalid("GSA solution shape does not match the function"));
    }
    let z = sol.z.symmetrized().hadamard(&dm.f_mat).map(|v| v.max(0.0));
    if z.is_zero() {
        return Err(AdversaryError::ZeroWitness);
    }
    let mut a = vec![0.0; size];
    for x in 0..size {
        if z.row(x).iter().all(|&v| v == 0.0) {
            continue;
        }
        if sol.delta[x] <= 0.0 {
            return Err(AdversaryError::Corrupt(format!("Δ[{x}] vanishes on a non-empty row of Z")));
        }
        a[x] = 1.0 / sol.delta[x].sqrt();
    }
    let mut g = DenseMatrix::zeros(size, size);
    for x in 0..size {
        for y in 0..size {
            g[(x, y)] = z[(x, y)] * a[x] * a[y];
        }
    }
    Ok(SpectralWitness { gamma: g })
}

/// `A = δδᵀ`, `Z = Γ ∘ A`, `Δ = μ·I ∘ A` with `λ(Γ) = 1` and `μ = max_i λ(Γ ∘ D_i)`.
pub fn spectral_to_gsa(wit: &SpectralWitness, dm: &DifferenceMatrices) -> Result<GsaSolution> {
    let (g, delta) = normalized_gamma(wit, dm)?;
    let mut mu: f64 = 0.0;
    for d in &dm.d {
        mu = mu.max(spectral_norm(&g.hadamard(d), crate::linalg::DEFAULT_TOL)?.value);
    }
    let size = dm.size();
    let mut z = DenseMatrix::zeros(size, size);
    for x in 0..size {
        for y in 0..size {
            z[(x, y)] = g[(x, y)] * delta[x] * delta[y];
        }
    }
    let z = z.symmetrized();
    let diag: Vec<f64> = delta.iter().map(|d| mu * d * d).collect();
    let trace = diag.iter().sum();
    Ok(GsaSolution::from_witness(dm, GsaWitness { mu: trace, z, delta: diag })?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitationMode {
    /// Half uniform over `Cert(x)`, half uniform over all positions.
    Partial,
    /// Uniform over `Cert(x)` on the letter with the smaller complexity, uniform elsewhere.
    BooleanPartial,
    /// Uniform over `Cert(x)`.
    Total,
}

/// Probability scheme certifying the certificate-complexity limitation.
pub fn limitation_scheme(spec: &FunctionSpec, profile: &CertificateProfile, mode: LimitationMode) -> Result<ProbabilityScheme> {
    let n = spec.arity();
    let size = spec.size();
    if profile.certificates.len() != size {
        return Err(invalid("certificate profile does not match the function"));
    }
    let uniform = 1.0 / n as f64;
    let mut p = DenseMatrix::zeros(size, n);
    match mode {
        LimitationMode::Partial => {
            for (x, cert) in profile.certificates.iter().enumerate() {
                if cert.is_empty() {
                    (0..n).for_each(|i| p[(x, i)] = uniform);
                    continue;
                }
                let extra = 0.5 / cert.len() as f64;
                for i in 0..n {
                    p[(x, i)] = 0.5 * uniform;
                }
                for &i in cert {
                    p[(x, i)] += extra;
                }
            }
        }
        LimitationMode::BooleanPartial => {
            if !spec.is_boolean_output() {
                return Err(AdversaryError::NotBoolean);
            }
            let certified = profile.order.get(1).copied().unwrap_or(1);
            for (x, cert) in profile.certificates.iter().enumerate() {
                if spec.output(x) == certified {
                    if cert.is_empty() {
                        return Err(AdversaryError::EmptyCertificate { index: x });
                    }
                    for &i in cert {
                        p[(x, i)] = 1.0 / cert.len() as f64;
                    }
                } else {
                    (0..n).for_each(|i| p[(x, i)] = uniform);
                }
            }
        }
        LimitationMode::Total => {
            if !spec.is_total() {
                return Err(AdversaryError::NotTotal);
            }
            for (x, cert) in profile.certificates.iter().enumerate() {
                if cert.is_empty() {
                    return Err(AdversaryError::EmptyCertificate { index: x });
                }
                for &i in cert {
                    p[(x, i)] = 1.0 / cert.len() as f64;
                }
            }
        }
    }
    Ok(ProbabilityScheme::normalized(p))
}

/// A named limitation value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Limit {
    pub label: &'static str,
    pub value: f64,
}

/// `2√(C₁n)` always, `√(C₁n)` for Boolean output, `√(C₀C₁)` for total functions.
pub fn limitation_bounds(profile: &CertificateProfile, n: usize, total: bool, boolean: bool) -> Vec<Limit> {
    let c0 = profile.c0() as f64;
    let c1 = profile.c1() as f64;
    let n = n as f64;
    let mut out = vec![Limit { label: "two_sqrt_c1_n", value: 2.0 * (c1 * n).sqrt() }];
    if boolean {
        out.push(Limit { label: "sqrt_c1_n", value: (c1 * n).sqrt() });
    }
    if total {
        out.push(Limit { label: "sqrt_c0_c1", value: (c0 * c1).sqrt() });
    }
    out
}

/// `adv · (1 − 2√(ε(1−ε)))`.
pub fn query_lower_bound(adv: f64, eps: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&eps) {
        return Err(AdversaryError::EpsOutOfRange(eps));
    }
    Ok(adv * (1.0 - 2.0 * (eps * (1.0 - eps)).sqrt()))
}

/// The six formulations of the adversary value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValues {
    pub sa: f64,
    pub gsa: f64,
    pub smm: f64,
    pub mm: f64,
    pub wa: f64,
    pub swa: f64,
}

impl BoundValues {
    pub fn as_array(&self) -> [(&'static str, f64); 6] {
        [("sa", self.sa), ("gsa", self.gsa), ("smm", self.smm), ("mm", self.mm), ("wa", self.wa), ("swa", self.swa)]
    }

    /// Largest pairwise difference.
    pub fn spread(&self) -> f64 {
        let vals = self.as_array().map(|(_, v)| v);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

/// Witnesses behind every reported value.
#[derive(Debug, Clone)]
pub struct ReportWitnesses {
    pub gamma: SpectralWitness,
    pub weights: WeightScheme,
    pub probs: ProbabilityScheme,
    pub smm: SmmSolution,
    pub gsa: GsaSolution,
    pub limitation: Vec<(LimitationMode, ProbabilityScheme, f64)>,
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub function: String,
    pub values: BoundValues,
    pub limits: Vec<Limit>,
    pub profile: CertificateProfile,
    pub eps: f64,
    pub query_lower_bound: f64,
    /// `min(upper certificates) − max(lower certificates)`.
    pub sandwich_residual: f64,
    pub duality_gap: f64,
    pub iterations: usize,
    pub converged: bool,
    /// All six values within `10·tol·(1 + value)` of each other.
    pub consistent: bool,
    pub witnesses: ReportWitnesses,
}

impl BoundReport {
    /// Best certified lower bound on the adversary value.
    pub fn lower(&self) -> f64 {
        let v = &self.values;
        v.sa.max(v.gsa).max(v.wa).max(v.swa)
    }

    /// Best certified upper bound on the adversary value.
    pub fn upper(&self) -> f64 {
        let v = &self.values;
        let lim = self.limits.iter().map(|l| l.value).fold(f64::INFINITY, f64::min);
        let schemes = self.witnesses.limitation.iter().map(|(_, _, v)| *v).fold(f64::INFINITY, f64::min);
        v.smm.min(v.mm).min(lim).min(schemes)
    }
}

/// Solves both programs and derives every formulation from the solutions.
pub fn compute_report(spec: &FunctionSpec, eps: f64, tol: f64) -> Result<BoundReport> {
    compute_report_with(spec, eps, &SdpOptions::with_tol(tol))
}

pub fn compute_report_with(spec: &FunctionSpec, eps: f64, opts: &SdpOptions) -> Result<BoundReport> {
    query_lower_bound(0.0, eps)?;
    if spec.is_constant() {
        return Err(AdversaryError::ConstantFunction);
    }
    let dm = build_difference_matrices(spec);
    let profile = certificate_profile(spec)?;
    let outcome = sdp::solve_pair(&dm, opts)?;

    let probs = smm_to_probability(&outcome.smm, &dm, opts.tol)?;
    let mm = eval_minimax(&probs, &dm)?;
    let gamma = gsa_to_spectral(&outcome.gsa, &dm)?;
    let sa = eval_spectral(&gamma, &dm)?;
    let weights = spectral_to_weighted(&gamma, &dm)?;
    let wa = eval_weighted(&weights, &dm)?;
    let swa = eval_strong_weighted(&weights, &dm)?;
    let values = BoundValues { sa, gsa: 1.0 / outcome.gsa.mu, smm: 1.0 / outcome.smm.mu, mm, wa, swa };

    let limits = limitation_bounds(&profile, spec.arity(), spec.is_total(), spec.is_boolean_output());
    let mut modes = vec![LimitationMode::Partial];
    if spec.is_boolean_output() {
        modes.push(LimitationMode::BooleanPartial);
    }
    if spec.is_total() {
        modes.push(LimitationMode::Total);
    }
    let mut limitation = Vec::new();
    for mode in modes {
        let scheme = limitation_scheme(spec, &profile, mode)?;
        let value = eval_minimax(&scheme, &dm)?;
        limitation.push((mode, scheme, value));
    }

    let consistent = values
        .as_array()
        .iter()
        .all(|&(_, a)| values.as_array().iter().all(|&(_, b)| (a - b).abs() <= 10.0 * opts.tol * (1.0 + a.max(b))));
    let mut report = BoundReport {
        function: spec.name().unwrap_or("unnamed").to_string(),
        values,
        limits,
        profile,
        eps,
        query_lower_bound: 0.0,
        sandwich_residual: 0.0,
        duality_gap: outcome.gap,
        iterations: outcome.iterations,
        converged: outcome.converged,
        consistent,
        witnesses: ReportWitnesses { gamma, weights, probs, smm: outcome.smm, gsa: outcome.gsa, limitation },
    };
    report.sandwich_residual = report.upper() - report.lower();
    report.query_lower_bound = query_lower_bound(report.lower(), eps)?;
    Ok(report)
}
