//! Dense primal-dual interior-point kernel for block SDPs.
//!
//! Primal: `min Σ C_j·X_j + c·x  s.t.  A_k(X, x) = b_k,  X_j ⪰ 0,  x ≥ 0`.
//! Dual:   `max b·y  s.t.  S_j = C_j − Σ y_k A_kj ⪰ 0,  s = c − Σ y_k a_k ≥ 0`.
//!
//! HKM search direction with Mehrotra predictor-corrector steps. Constraint
//! matrices are stored as sparse triplets in full symmetric form, which keeps
//! the Schur complement assembly linear in the number of nonzeros per pair.

use crate::linalg::{spd_inverse, spd_solve, symmetric_eigen, DenseMatrix};

/// One entry `A_kj[row, col] = val`; off-diagonal entries appear twice.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Triplet {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub val: f64,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Constraint {
    pub psd: Vec<Triplet>,
    pub lp: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Problem {
    pub block_sizes: Vec<usize>,
    pub c_psd: Vec<DenseMatrix>,
    pub c_lp: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone)]
pub(crate) struct Iterate {
    pub x: Vec<DenseMatrix>,
    pub x_lp: Vec<f64>,
    pub y: Vec<f64>,
    pub s: Vec<DenseMatrix>,
    pub s_lp: Vec<f64>,
}

#[derive(Debug, Clone)]
pub(crate) struct IpmOutput {
    pub iterate: Iterate,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct IpmSettings {
    pub max_iter: usize,
    pub gap_tol: f64,
    pub feas_tol: f64,
}

struct Direction {
    dx: Vec<DenseMatrix>,
    dx_lp: Vec<f64>,
    dy: Vec<f64>,
    ds: Vec<DenseMatrix>,
    ds_lp: Vec<f64>,
}

impl Problem {
    fn apply(&self, x: &[DenseMatrix], x_lp: &[f64]) -> Vec<f64> {
        self.constraints
            .iter()
            .map(|c| {
                c.psd.iter().map(|t| t.val * x[t.block][(t.row, t.col)]).sum::<f64>()
                    + c.lp.iter().map(|&(i, a)| a * x_lp[i]).sum::<f64>()
            })
            .collect()
    }

    fn adjoint(&self, y: &[f64]) -> (Vec<DenseMatrix>, Vec<f64>) {
        let mut blocks: Vec<DenseMatrix> = self.block_sizes.iter().map(|&n| DenseMatrix::zeros(n, n)).collect();
        let mut lp = vec![0.0; self.c_lp.len()];
        for (c, &yk) in self.constraints.iter().zip(y) {
            for t in &c.psd {
                blocks[t.block][(t.row, t.col)] += yk * t.val;
            }
            for &(i, a) in &c.lp {
                lp[i] += yk * a;
            }
        }
        (blocks, lp)
    }

    fn dim(&self) -> f64 {
        (self.block_sizes.iter().sum::<usize>() + self.c_lp.len()) as f64
    }

    /// Per block: the constraints touching it with their triplets.
    fn block_index(&self) -> Vec<Vec<(usize, Vec<Triplet>)>> {
        let mut idx: Vec<Vec<(usize, Vec<Triplet>)>> = vec![Vec::new(); self.block_sizes.len()];
        for (k, c) in self.constraints.iter().enumerate() {
            for (j, slot) in idx.iter_mut().enumerate() {
                let ts: Vec<Triplet> = c.psd.iter().copied().filter(|t| t.block == j).collect();
                if !ts.is_empty() {
                    slot.push((k, ts));
                }
            }
        }
        idx
    }

    fn lp_index(&self) -> Vec<Vec<(usize, f64)>> {
        let mut idx = vec![Vec::new(); self.c_lp.len()];
        for (k, c) in self.constraints.iter().enumerate() {
            for &(i, a) in &c.lp {
                idx[i].push((k, a));
            }
        }
        idx
    }
}

fn inner(a: &[DenseMatrix], b: &[DenseMatrix]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn frob(ms: &[DenseMatrix]) -> f64 {
    ms.iter().map(|m| m.dot(m)).sum::<f64>().sqrt()
}

/// Largest `α ≤ cap` keeping `x + α·dx ⪰ 0`, for `x ≻ 0`.
fn psd_step(x: &DenseMatrix, dx: &DenseMatrix) -> f64 {
    let n = x.rows();
    if n == 0 {
        return f64::INFINITY;
    }
    // Symmetric scaling through the inverse square root via eigen-decomposition.
    let Ok(eig) = symmetric_eigen(x) else { return 0.0 };
    if eig.min_value() <= 0.0 {
        return 0.0;
    }
    let mut scale = DenseMatrix::zeros(n, n);
    for k in 0..n {
        let f = 1.0 / eig.values[k].sqrt();
        for r in 0..n {
            scale[(r, k)] = eig.vectors[(r, k)] * f;
        }
    }
    let t = scale.transpose().matmul(dx).matmul(&scale);
    match symmetric_eigen(&t) {
        Ok(e) if e.min_value() < 0.0 => -1.0 / e.min_value(),
        Ok(_) => f64::INFINITY,
        Err(_) => 0.0,
    }
}

fn lp_step(x: &[f64], dx: &[f64]) -> f64 {
    x.iter()
        .zip(dx)
        .filter(|(_, &d)| d < 0.0)
        .map(|(&v, &d)| -v / d)
        .fold(f64::INFINITY, f64::min)
}

struct Workspace {
    block_index: Vec<Vec<(usize, Vec<Triplet>)>>,
    lp_index: Vec<Vec<(usize, f64)>>,
}

impl Workspace {
    fn schur(&self, m: usize, it: &Iterate, w: &[DenseMatrix]) -> DenseMatrix {
        let mut schur = DenseMatrix::zeros(m, m);
        for (j, list) in self.block_index.iter().enumerate() {
            let x = &it.x[j];
            let wj = &w[j];
            for (p, (k, tk)) in list.iter().enumerate() {
                for (l, tl) in &list[p..] {
                    let mut v = 0.0;
                    for a in tk {
                        for b in tl {
                            // tr(A_k X A_l W) term: A_k[a.r,a.c] X[a.c,b.r] A_l[b.r,b.c] W[b.c,a.r]
                            v += a.val * b.val * x[(a.col, b.row)] * wj[(b.col, a.row)];
                        }
                    }
                    schur[(*k, *l)] += v;
                    if k != l {
                        schur[(*l, *k)] += v;
                    }
                }
            }
        }
        for (i, list) in self.lp_index.iter().enumerate() {
            let ratio = it.x_lp[i] / it.s_lp[i];
            for &(k, a) in list {
                for &(l, b) in list {
                    schur[(k, l)] += a * b * ratio;
                }
            }
        }
        schur
    }
}

#[allow(clippy::too_many_arguments)]
fn direction(
    prob: &Problem,
    it: &Iterate,
    w: &[DenseMatrix],
    schur: &DenseMatrix,
    rp: &[f64],
    rd: &[DenseMatrix],
    rd_lp: &[f64],
    g: &[DenseMatrix],
    g_lp: &[f64],
) -> Option<Direction> {
    let h: Vec<DenseMatrix> = (0..g.len())
        .map(|j| g[j].sub(&it.x[j].matmul(&rd[j]).matmul(&w[j])))
        .collect();
    let h_lp: Vec<f64> = (0..g_lp.len()).map(|i| g_lp[i] - it.x_lp[i] * rd_lp[i] / it.s_lp[i]).collect();
    let ah = prob.apply(&h, &h_lp);
    let rhs: Vec<f64> = rp.iter().zip(&ah).map(|(r, a)| r - a).collect();
    let dy = spd_solve(schur, &rhs)?;
    let (aty, aty_lp) = prob.adjoint(&dy);
    let ds: Vec<DenseMatrix> = rd.iter().zip(&aty).map(|(r, a)| r.sub(a)).collect();
    let ds_lp: Vec<f64> = rd_lp.iter().zip(&aty_lp).map(|(r, a)| r - a).collect();
    let dx: Vec<DenseMatrix> = (0..g.len())
        .map(|j| g[j].sub(&it.x[j].matmul(&ds[j]).matmul(&w[j])).symmetrized())
        .collect();
    let dx_lp: Vec<f64> = (0..g_lp.len()).map(|i| g_lp[i] - it.x_lp[i] * ds_lp[i] / it.s_lp[i]).collect();
    Some(Direction { dx, dx_lp, dy, ds, ds_lp })
}

fn step_lengths(it: &Iterate, d: &Direction) -> (f64, f64) {
    let mut ap = lp_step(&it.x_lp, &d.dx_lp);
    let mut ad = lp_step(&it.s_lp, &d.ds_lp);
    for j in 0..it.x.len() {
        ap = ap.min(psd_step(&it.x[j], &d.dx[j]));
        ad = ad.min(psd_step(&it.s[j], &d.ds[j]));
    }
    (ap, ad)
}

pub(crate) fn solve(prob: &Problem, settings: IpmSettings) -> IpmOutput {
    let m = prob.constraints.len();
    let ws = Workspace { block_index: prob.block_index(), lp_index: prob.lp_index() };
    let mut it = Iterate {
        x: prob.block_sizes.iter().map(|&n| DenseMatrix::identity(n)).collect(),
        x_lp: vec![1.0; prob.c_lp.len()],
        y: vec![0.0; m],
        s: prob.block_sizes.iter().map(|&n| DenseMatrix::identity(n)).collect(),
        s_lp: vec![1.0; prob.c_lp.len()],
    };
    let b: Vec<f64> = prob.constraints.iter().map(|c| c.rhs).collect();
    let b_norm = norm2(&b);
    let c_norm = (frob(&prob.c_psd).powi(2) + norm2(&prob.c_lp).powi(2)).sqrt();
    let ndim = prob.dim();

    let mut converged = false;
    let mut iterations = 0;
    // Late iterations can lose accuracy once the target is below what the
    // arithmetic allows, so the least-residual iterate is what gets returned.
    let mut best: Option<(f64, Iterate)> = None;
    while iterations < settings.max_iter {
        let ax = prob.apply(&it.x, &it.x_lp);
        let rp: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let (aty, aty_lp) = prob.adjoint(&it.y);
        let rd: Vec<DenseMatrix> = (0..it.x.len()).map(|j| prob.c_psd[j].sub(&it.s[j]).sub(&aty[j])).collect();
        let rd_lp: Vec<f64> = (0..it.x_lp.len()).map(|i| prob.c_lp[i] - it.s_lp[i] - aty_lp[i]).collect();

        let pobj = inner(&prob.c_psd, &it.x) + prob.c_lp.iter().zip(&it.x_lp).map(|(c, x)| c * x).sum::<f64>();
        let dobj: f64 = b.iter().zip(&it.y).map(|(b, y)| b * y).sum();
        let complementarity = inner(&it.x, &it.s) + it.x_lp.iter().zip(&it.s_lp).map(|(x, s)| x * s).sum::<f64>();
        let mu = complementarity / ndim;
        let pinf = norm2(&rp) / (1.0 + b_norm);
        let dinf = (frob(&rd).powi(2) + norm2(&rd_lp).powi(2)).sqrt() / (1.0 + c_norm);
        let gap = (pobj - dobj).abs().max(complementarity) / (1.0 + pobj.abs() + dobj.abs());
        let merit = pinf.max(dinf).max(gap);
        if best.as_ref().is_none_or(|(m, _)| merit < *m) {
            best = Some((merit, it.clone()));
        }
        if pinf <= settings.feas_tol && dinf <= settings.feas_tol && gap <= settings.gap_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let Some(w) = it.s.iter().map(spd_inverse).collect::<Option<Vec<_>>>() else { break };
        let schur = ws.schur(m, &it, &w);

        // Predictor: pure Newton step towards complementarity.
        let g_aff: Vec<DenseMatrix> = it.x.iter().map(|x| x.scale(-1.0)).collect();
        let g_aff_lp: Vec<f64> = it.x_lp.iter().map(|x| -x).collect();
        let Some(aff) = direction(prob, &it, &w, &schur, &rp, &rd, &rd_lp, &g_aff, &g_aff_lp) else { break };
        let (ap, ad) = step_lengths(&it, &aff);
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let x_aff: Vec<DenseMatrix> = it.x.iter().zip(&aff.dx).map(|(x, d)| {
            let mut v = x.clone();
            v.axpy(ap, d);
            v
        }).collect();
        let s_aff: Vec<DenseMatrix> = it.s.iter().zip(&aff.ds).map(|(s, d)| {
            let mut v = s.clone();
            v.axpy(ad, d);
            v
        }).collect();
        let lp_aff: f64 = (0..it.x_lp.len())
            .map(|i| (it.x_lp[i] + ap * aff.dx_lp[i]) * (it.s_lp[i] + ad * aff.ds_lp[i]))
            .sum();
        let mu_aff = (inner(&x_aff, &s_aff) + lp_aff) / ndim;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // Corrector with the second-order term ΔX_aff ΔS_aff S⁻¹.
        let g: Vec<DenseMatrix> = (0..it.x.len())
            .map(|j| w[j].scale(sigma * mu).sub(&it.x[j]).sub(&aff.dx[j].matmul(&aff.ds[j]).matmul(&w[j])))
            .collect();
        let g_lp: Vec<f64> = (0..it.x_lp.len())
            .map(|i| sigma * mu / it.s_lp[i] - it.x_lp[i] - aff.dx_lp[i] * aff.ds_lp[i] / it.s_lp[i])
            .collect();
        let Some(dir) = direction(prob, &it, &w, &schur, &rp, &rd, &rd_lp, &g, &g_lp) else { break };
        let (ap, ad) = step_lengths(&it, &dir);
        let gamma = 0.98;
        let ap = (gamma * ap).min(1.0);
        let ad = (gamma * ad).min(1.0);
        if ap < 1e-12 && ad < 1e-12 {
            break;
        }
        for j in 0..it.x.len() {
            it.x[j].axpy(ap, &dir.dx[j]);
            it.x[j] = it.x[j].symmetrized();
            it.s[j].axpy(ad, &dir.ds[j]);
            it.s[j] = it.s[j].symmetrized();
        }
        for i in 0..it.x_lp.len() {
            it.x_lp[i] += ap * dir.dx_lp[i];
            it.s_lp[i] += ad * dir.ds_lp[i];
        }
        for (y, dy) in it.y.iter_mut().zip(&dir.dy) {
            *y += ad * dy;
        }
    }
    let iterate = best.map_or(it, |(_, b)| b);
    IpmOutput { iterate, iterations, converged }
}
