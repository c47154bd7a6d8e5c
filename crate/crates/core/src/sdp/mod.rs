//! The two semidefinite programs of the adversary method.
//!
//! SMM (primal):
//! ```text
//! maximize μ  s.t.  R_i ⪰ 0 for all i,  Σ_i R_i ∘ I = I,  Σ_i R_i ∘ D_i ≥ μF
//! ```
//! GSA (dual):
//! ```text
//! minimize tr Δ  s.t.  Δ diagonal,  Z ≥ 0,  Z · F = 1,  Δ − Z ∘ D_i ⪰ 0 for all i
//! ```
//! Both are solved by one primal-dual interior-point run. The raw iterates are
//! then mapped back to exactly feasible points ([`restore_smm`],
//! [`restore_gsa`]), so every returned solution passes [`verify_smm`] /
//! [`verify_gsa`] and the duality gap is measured between feasible points.

mod ipm;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::function_model::DifferenceMatrices;
use crate::linalg::{psd_check, symmetric_eigen, DenseMatrix, LinalgError};
use ipm::{Constraint, IpmSettings, Problem, Triplet};

/// Default residual tolerance for SDP solutions.
pub const DEFAULT_TOL: f64 = 1e-7;

/// Default cap on `|S|` for solving.
pub const DEFAULT_MAX_SIZE: usize = 64;

#[derive(Debug, Error, Clone)]
pub enum SdpError {
    #[error("constant function has no adversary bound")]
    ConstantFunction,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("|S| = {size} exceeds the solver limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("solver did not reach the gap contract (achieved gap {gap:e})")]
    NotConverged { gap: f64, best: Box<SdpOutcome> },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy)]
pub struct SdpOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub max_size: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_iter: 200, max_size: DEFAULT_MAX_SIZE }
    }
}

impl SdpOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmmResiduals {
    /// `max_i max(0, −λ_min(R_i))`.
    pub psd_violation: f64,
    /// `max_x |Σ_i R_i[x,x] − 1|`.
    pub diagonal: f64,
    /// `min_{F[x,y]=1} Σ_{i: x_i≠y_i} R_i[x,y] − μ`.
    pub coverage_slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmmSolution {
    pub mu: f64,
    pub r: Vec<DenseMatrix>,
    pub residuals: SmmResiduals,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GsaResiduals {
    /// `min_i λ_min(Δ − Z ∘ D_i)`.
    pub min_eigenvalue: f64,
    /// `|Z · F − 1|`.
    pub normalization: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GsaSolution {
    pub mu: f64,
    pub z: DenseMatrix,
    pub delta: Vec<f64>,
    pub residuals: GsaResiduals,
}

/// JSON form `{"mu": real, "R": [matrix…]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmmWitness {
    pub mu: f64,
    #[serde(rename = "R")]
    pub r: Vec<DenseMatrix>,
}

/// JSON form `{"mu": real, "Z": matrix, "delta": [real…]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GsaWitness {
    pub mu: f64,
    #[serde(rename = "Z")]
    pub z: DenseMatrix,
    pub delta: Vec<f64>,
}

impl SmmSolution {
    pub fn witness(&self) -> SmmWitness {
        SmmWitness { mu: self.mu, r: self.r.clone() }
    }

    /// Wraps externally supplied matrices; residuals are recomputed.
    pub fn from_witness(dm: &DifferenceMatrices, w: SmmWitness) -> Result<Self, SdpError> {
        check_smm_shapes(dm, &w.r)?;
        let residuals = smm_residuals(dm, w.mu, &w.r)?;
        Ok(Self { mu: w.mu, r: w.r, residuals })
    }
}

impl GsaSolution {
    pub fn witness(&self) -> GsaWitness {
        GsaWitness { mu: self.mu, z: self.z.clone(), delta: self.delta.clone() }
    }

    pub fn from_witness(dm: &DifferenceMatrices, w: GsaWitness) -> Result<Self, SdpError> {
        check_gsa_shapes(dm, &w.z, &w.delta)?;
        let residuals = gsa_residuals(dm, &w.z, &w.delta)?;
        Ok(Self { mu: w.mu, z: w.z, delta: w.delta, residuals })
    }
}

/// Both programs solved together.
#[derive(Debug, Clone)]
pub struct SdpOutcome {
    pub smm: SmmSolution,
    pub gsa: GsaSolution,
    /// `gsa.mu − smm.mu` between the restored feasible points.
    pub gap: f64,
    pub iterations: usize,
    /// The interior-point iteration met its own stopping rule.
    pub interior_converged: bool,
    /// Gap within `10·tol·(1 + μ)`.
    pub converged: bool,
}

fn check_smm_shapes(dm: &DifferenceMatrices, r: &[DenseMatrix]) -> Result<(), SdpError> {
    let size = dm.size();
    if r.len() != dm.arity() {
        return Err(SdpError::Shape(format!("expected {} matrices R_i, got {}", dm.arity(), r.len())));
    }
    if let Some((i, m)) = r.iter().enumerate().find(|(_, m)| m.shape() != (size, size)) {
        return Err(SdpError::Shape(format!("R_{} is {:?}, expected {size}x{size}", i + 1, m.shape())));
    }
    Ok(())
}

fn check_gsa_shapes(dm: &DifferenceMatrices, z: &DenseMatrix, delta: &[f64]) -> Result<(), SdpError> {
    let size = dm.size();
    if z.shape() != (size, size) {
        return Err(SdpError::Shape(format!("Z is {:?}, expected {size}x{size}", z.shape())));
    }
    if delta.len() != size {
        return Err(SdpError::Shape(format!("delta has {} entries, expected {size}", delta.len())));
    }
    Ok(())
}

fn coverage(dm: &DifferenceMatrices, r: &[DenseMatrix], x: usize, y: usize) -> f64 {
    (0..dm.arity()).filter(|&i| dm.differs_at(i, x, y)).map(|i| 0.5 * (r[i][(x, y)] + r[i][(y, x)])).sum()
}

fn smm_residuals(dm: &DifferenceMatrices, mu: f64, r: &[DenseMatrix]) -> Result<SmmResiduals, SdpError> {
    let mut psd_violation: f64 = 0.0;
    for m in r {
        psd_violation = psd_violation.max(-symmetric_eigen(m)?.min_value());
    }
    let diagonal = (0..dm.size())
        .map(|x| (r.iter().map(|m| m[(x, x)]).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let coverage_slack = dm
        .split_pairs()
        .into_iter()
        .map(|(x, y)| coverage(dm, r, x, y) - mu)
        .fold(f64::INFINITY, f64::min);
    Ok(SmmResiduals { psd_violation: psd_violation.max(0.0), diagonal, coverage_slack })
}

/// `Z ∘ D_i` subtracted from `diag(Δ)`.
fn gsa_slack_matrix(dm: &DifferenceMatrices, z: &DenseMatrix, delta: &[f64], i: usize) -> DenseMatrix {
    let mut m = z.hadamard(&dm.d[i]).scale(-1.0);
    for (x, &d) in delta.iter().enumerate() {
        m[(x, x)] += d;
    }
    m
}

fn gsa_residuals(dm: &DifferenceMatrices, z: &DenseMatrix, delta: &[f64]) -> Result<GsaResiduals, SdpError> {
    let mut min_eigenvalue = f64::INFINITY;
    for i in 0..dm.arity() {
        min_eigenvalue = min_eigenvalue.min(symmetric_eigen(&gsa_slack_matrix(dm, z, delta, i))?.min_value());
    }
    if dm.arity() == 0 {
        min_eigenvalue = 0.0;
    }
    Ok(GsaResiduals { min_eigenvalue, normalization: (z.dot(&dm.f_mat) - 1.0).abs() })
}

/// Maps arbitrary matrices `R_i` to a feasible SMM point: symmetrize, clip
/// negative eigenvalues, rescale by the congruence `D^{-1/2} R_i D^{-1/2}`
/// with `D = diag(Σ_i R_i)` so the diagonal constraint holds, and set μ to the
/// smallest coverage.
pub fn restore_smm(dm: &DifferenceMatrices, r: &[DenseMatrix]) -> Result<SmmSolution, SdpError> {
    check_smm_shapes(dm, r)?;
    let n = dm.arity();
    let size = dm.size();
    let mut out = Vec::with_capacity(n);
    for m in r {
        let m = m.symmetrized();
        let eig = symmetric_eigen(&m)?;
        if eig.min_value() < 0.0 {
            let mut clipped = DenseMatrix::zeros(size, size);
            for (k, &lam) in eig.values.iter().enumerate() {
                if lam <= 0.0 {
                    continue;
                }
                let v = eig.vector(k);
                for a in 0..size {
                    for b in 0..size {
                        clipped[(a, b)] += lam * v[a] * v[b];
                    }
                }
            }
            out.push(clipped.symmetrized());
        } else {
            out.push(m);
        }
    }
    let diag: Vec<f64> = (0..size).map(|x| out.iter().map(|m| m[(x, x)]).sum()).collect();
    let scale: Vec<f64> = diag.iter().map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 }).collect();
    for m in &mut out {
        for a in 0..size {
            for b in 0..size {
                m[(a, b)] *= scale[a] * scale[b];
            }
        }
    }
    for (x, &d) in diag.iter().enumerate() {
        if d <= 0.0 {
            for m in &mut out {
                m[(x, x)] = 1.0 / n as f64;
            }
        }
    }
    let mu = dm
        .split_pairs()
        .into_iter()
        .map(|(x, y)| coverage(dm, &out, x, y))
        .fold(f64::INFINITY, f64::min);
    let mu = if mu.is_finite() { mu } else { 0.0 };
    let residuals = smm_residuals(dm, mu, &out)?;
    Ok(SmmSolution { mu, r: out, residuals })
}

/// Maps `(Z, Δ)` to a feasible GSA point: clip `Z` to the non-negative part of
/// `F`'s support and symmetrize, scale `(Z, Δ)` jointly so `Z · F = 1`, then
/// raise `Δ` uniformly by the most negative eigenvalue of the `Δ − Z ∘ D_i`.
/// Returns `None` when `Z` has no mass on `F`.
pub fn restore_gsa(dm: &DifferenceMatrices, z: &DenseMatrix, delta: &[f64]) -> Result<Option<GsaSolution>, SdpError> {
    check_gsa_shapes(dm, z, delta)?;
    let size = dm.size();
    let mut zc = DenseMatrix::zeros(size, size);
    for x in 0..size {
        for y in 0..size {
            if dm.outputs_differ(x, y) {
                zc[(x, y)] = (0.5 * (z[(x, y)] + z[(y, x)])).max(0.0);
            }
        }
    }
    let mass = zc.dot(&dm.f_mat);
    if mass <= 0.0 {
        return Ok(None);
    }
    let zc = zc.scale(1.0 / mass);
    let mut dc: Vec<f64> = delta.iter().map(|&d| d.max(0.0) / mass).collect();
    let mut shift: f64 = 0.0;
    for i in 0..dm.arity() {
        shift = shift.max(-symmetric_eigen(&gsa_slack_matrix(dm, &zc, &dc, i))?.min_value());
    }
    if shift > 0.0 {
        dc.iter_mut().for_each(|d| *d += shift);
    }
    let residuals = gsa_residuals(dm, &zc, &dc)?;
    let mu = dc.iter().sum();
    Ok(Some(GsaSolution { mu, z: zc, delta: dc, residuals }))
}

fn build_problem(dm: &DifferenceMatrices) -> (Problem, Vec<(usize, usize)>) {
    let size = dm.size();
    let n = dm.arity();
    let pairs = dm.split_pairs();
    let mut constraints = Vec::with_capacity(size + pairs.len());
    for x in 0..size {
        constraints.push(Constraint {
            psd: (0..n).map(|j| Triplet { block: j, row: x, col: x, val: 1.0 }).collect(),
            lp: Vec::new(),
            rhs: 1.0,
        });
    }
    let mu_index = pairs.len();
    for (p, &(x, y)) in pairs.iter().enumerate() {
        let mut psd = Vec::new();
        for j in (0..n).filter(|&j| dm.differs_at(j, x, y)) {
            psd.push(Triplet { block: j, row: x, col: y, val: 0.5 });
            psd.push(Triplet { block: j, row: y, col: x, val: 0.5 });
        }
        constraints.push(Constraint { psd, lp: vec![(p, -1.0), (mu_index, -1.0)], rhs: 0.0 });
    }
    let mut c_lp = vec![0.0; pairs.len() + 1];
    c_lp[mu_index] = -1.0;
    let prob = Problem {
        block_sizes: vec![size; n],
        c_psd: vec![DenseMatrix::zeros(size, size); n],
        c_lp,
        constraints,
    };
    (prob, pairs)
}

/// Solves SMM and GSA together and restores both to feasibility.
pub fn solve_pair(dm: &DifferenceMatrices, opts: &SdpOptions) -> Result<SdpOutcome, SdpError> {
    if dm.is_constant() {
        return Err(SdpError::ConstantFunction);
    }
    if dm.size() > opts.max_size {
        return Err(SdpError::TooLarge { size: dm.size(), limit: opts.max_size });
    }
    let size = dm.size();
    let (prob, pairs) = build_problem(dm);
    let settings = IpmSettings { max_iter: opts.max_iter, gap_tol: 1e-12, feas_tol: 1e-12 };
    let out = ipm::solve(&prob, settings);
    let it = out.iterate;

    let smm = restore_smm(dm, &it.x)?;
    let mut z = DenseMatrix::zeros(size, size);
    for (p, &(x, y)) in pairs.iter().enumerate() {
        let v = 0.5 * it.y[size + p];
        z[(x, y)] = v;
        z[(y, x)] = v;
    }
    let delta: Vec<f64> = it.y[..size].iter().map(|v| -v).collect();
    let gsa = match restore_gsa(dm, &z, &delta)? {
        Some(g) => g,
        None => uniform_gsa(dm)?,
    };
    let gap = gsa.mu - smm.mu;
    let converged = gap <= 10.0 * opts.tol * (1.0 + gsa.mu);
    Ok(SdpOutcome { smm, gsa, gap, iterations: out.iterations, interior_converged: out.converged, converged })
}

/// Strictly feasible GSA point: uniform `Z` on `F`'s support and
/// `Δ = (max_i λ(Z ∘ D_i) + 1)·I`.
pub fn uniform_gsa(dm: &DifferenceMatrices) -> Result<GsaSolution, SdpError> {
    if dm.is_constant() {
        return Err(SdpError::ConstantFunction);
    }
    let mass: f64 = dm.f_mat.as_slice().iter().sum();
    let z = dm.f_mat.scale(1.0 / mass);
    let mut top: f64 = 0.0;
    for d in &dm.d {
        top = top.max(crate::linalg::symmetric_spectral_radius(&z.hadamard(d))?);
    }
    let delta = vec![top + 1.0; dm.size()];
    let residuals = gsa_residuals(dm, &z, &delta)?;
    Ok(GsaSolution { mu: delta.iter().sum(), z, delta, residuals })
}

fn require_converged<T>(outcome: SdpOutcome, pick: impl FnOnce(&SdpOutcome) -> T) -> Result<T, SdpError> {
    if outcome.converged {
        Ok(pick(&outcome))
    } else {
        Err(SdpError::NotConverged { gap: outcome.gap, best: Box::new(outcome) })
    }
}

/// Optimal SMM point. Fails with [`SdpError::NotConverged`] (carrying the best
/// feasible pair) if the paired gap exceeds `10·tol·(1 + μ)`.
pub fn solve_smm(dm: &DifferenceMatrices, tol: f64) -> Result<SmmSolution, SdpError> {
    require_converged(solve_pair(dm, &SdpOptions::with_tol(tol))?, |o| o.smm.clone())
}

/// Optimal GSA point; see [`solve_smm`].
pub fn solve_gsa(dm: &DifferenceMatrices, tol: f64) -> Result<GsaSolution, SdpError> {
    require_converged(solve_pair(dm, &SdpOptions::with_tol(tol))?, |o| o.gsa.clone())
}

/// Recomputed residuals of a candidate solution and the verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmmCheck {
    pub accepted: bool,
    pub violation: Option<String>,
    pub residuals: SmmResiduals,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GsaCheck {
    pub accepted: bool,
    pub violation: Option<String>,
    pub residuals: GsaResiduals,
    pub trace: f64,
}

/// Checks the SMM constraints from scratch. Stored residuals are ignored.
pub fn verify_smm(dm: &DifferenceMatrices, sol: &SmmSolution, tol: f64) -> Result<SmmCheck, SdpError> {
    check_smm_shapes(dm, &sol.r)?;
    let residuals = smm_residuals(dm, sol.mu, &sol.r)?;
    let mut violation = None;
    if let Some(i) = sol.r.iter().position(|m| m.asymmetry() > tol * (1.0 + m.max_abs())) {
        violation = Some(format!("R_{} is not symmetric", i + 1));
    } else if residuals.diagonal > tol {
        violation = Some("Σ_i R_i ∘ I = I".to_string());
    } else if !sol.mu.is_finite() {
        violation = Some("μ is not finite".to_string());
    } else if residuals.coverage_slack < -tol {
        violation = Some("Σ_i R_i ∘ D_i ≥ μF".to_string());
    } else {
        for (i, m) in sol.r.iter().enumerate() {
            if !psd_check(&m.symmetrized(), tol)?.is_psd {
                violation = Some(format!("R_{} ⪰ 0", i + 1));
                break;
            }
        }
    }
    Ok(SmmCheck { accepted: violation.is_none(), violation, residuals })
}

/// Checks the GSA constraints from scratch, including `μ = tr Δ`.
pub fn verify_gsa(dm: &DifferenceMatrices, sol: &GsaSolution, tol: f64) -> Result<GsaCheck, SdpError> {
    check_gsa_shapes(dm, &sol.z, &sol.delta)?;
    let z = &sol.z;
    let scale = 1.0 + z.max_abs();
    let residuals = gsa_residuals(dm, z, &sol.delta)?;
    let trace: f64 = sol.delta.iter().sum();
    let size = dm.size();
    let mut violation = None;
    if z.min_entry() < -tol * scale {
        violation = Some("Z ≥ 0".to_string());
    } else if z.asymmetry() > tol * scale {
        violation = Some("Z is not symmetric".to_string());
    } else if (0..size).any(|x| (0..size).any(|y| !dm.outputs_differ(x, y) && z[(x, y)].abs() > tol * scale)) {
        violation = Some("Z is supported on F".to_string());
    } else if sol.delta.iter().any(|&d| d < -tol) {
        violation = Some("Δ ≥ 0".to_string());
    } else if residuals.normalization > tol {
        violation = Some("Z · F = 1".to_string());
    } else {
        for i in 0..dm.arity() {
            let m = gsa_slack_matrix(dm, &z.symmetrized(), &sol.delta, i);
            if !psd_check(&m, tol)?.is_psd {
                violation = Some(format!("Δ − Z ∘ D_{} ⪰ 0", i + 1));
                break;
            }
        }
    }
    if violation.is_none() && (sol.mu - trace).abs() > tol * (1.0 + trace.abs()) {
        violation = Some("μ = tr Δ".to_string());
    }
    Ok(GsaCheck { accepted: violation.is_none(), violation, residuals, trace })
}
