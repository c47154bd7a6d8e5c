//! Independent oracles and closed-form witnesses shared by the integration
//! tests. Nothing here calls the evaluators under test.

#![allow(dead_code)]

use advbound::{DenseMatrix, FunctionSpec};
use nalgebra::DMatrix;
use rand::Rng;

pub fn to_nalgebra(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// Eigenvalues, ascending, from nalgebra's symmetric solver.
pub fn oracle_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = to_nalgebra(m).symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

pub fn oracle_norm(m: &DenseMatrix) -> f64 {
    oracle_eigenvalues(m).iter().fold(0.0, |a: f64, &b| a.max(b.abs()))
}

fn differs(spec: &FunctionSpec, x: usize, y: usize, i: usize) -> bool {
    spec.input(x)[i] != spec.input(y)[i]
}

/// `λ(Γ)/max_i λ(Γ ∘ D_i)` with `D_i` rebuilt from the inputs.
pub fn oracle_sa(spec: &FunctionSpec, gamma: &DenseMatrix) -> f64 {
    let size = spec.size();
    let top = oracle_norm(gamma);
    let mut worst: f64 = 0.0;
    for i in 0..spec.arity() {
        let mut gi = gamma.clone();
        for x in 0..size {
            for y in 0..size {
                if !differs(spec, x, y, i) {
                    gi[(x, y)] = 0.0;
                }
            }
        }
        worst = worst.max(oracle_norm(&gi));
    }
    top / worst
}

/// Minimax value of `p` evaluated straight from the table.
pub fn oracle_mm(spec: &FunctionSpec, p: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for x in 0..spec.size() {
        for y in 0..spec.size() {
            if spec.output(x) == spec.output(y) {
                continue;
            }
            let s: f64 = (0..spec.arity()).filter(|&i| differs(spec, x, y, i)).map(|i| (p[x][i] * p[y][i]).sqrt()).sum();
            if s == 0.0 {
                return f64::INFINITY;
            }
            worst = worst.max(1.0 / s);
        }
    }
    worst
}

/// Smallest certificate of every input by brute force over bitmasks sorted
/// by (size, ascending index list).
pub fn oracle_certificates(spec: &FunctionSpec) -> Vec<Vec<usize>> {
    let n = spec.arity();
    let mut masks: Vec<Vec<usize>> = (0u32..(1 << n)).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect();
    masks.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    (0..spec.size())
        .map(|x| {
            masks
                .iter()
                .find(|set| {
                    (0..spec.size()).all(|y| {
                        set.iter().any(|&i| spec.input(x)[i] != spec.input(y)[i]) || spec.output(x) == spec.output(y)
                    })
                })
                .cloned()
                .expect("the full index set certifies")
        })
        .collect()
}

fn weight(spec: &FunctionSpec, x: usize) -> usize {
    spec.input(x).iter().filter(|&&b| b == 1).count()
}

/// Γ linking the all-zero input to every input of weight one.
pub fn or_gamma(spec: &FunctionSpec) -> DenseMatrix {
    let size = spec.size();
    let zero = (0..size).find(|&x| weight(spec, x) == 0).unwrap();
    let mut g = DenseMatrix::zeros(size, size);
    for y in (0..size).filter(|&y| weight(spec, y) == 1) {
        g[(zero, y)] = 1.0;
        g[(y, zero)] = 1.0;
    }
    g
}

/// Hypercube adjacency: inputs at Hamming distance one.
pub fn hypercube_gamma(spec: &FunctionSpec) -> DenseMatrix {
    let size = spec.size();
    let mut g = DenseMatrix::zeros(size, size);
    for x in 0..size {
        for y in 0..size {
            if (0..spec.arity()).filter(|&i| differs(spec, x, y, i)).count() == 1 && spec.output(x) != spec.output(y) {
                g[(x, y)] = 1.0;
            }
        }
    }
    g
}

/// And of `a` Ors of `b` bits: 1-inputs with a single 1 per block joined to
/// the 0-inputs obtained by clearing one of those bits. The graph is
/// (a, b)-biregular and each `Γ ∘ D_i` is a matching, so the value is √(ab).
pub fn and_or_gamma(spec: &FunctionSpec, b: usize) -> DenseMatrix {
    let size = spec.size();
    let ones_per_block = |x: usize| -> Vec<usize> {
        spec.input(x).chunks(b).map(|c| c.iter().filter(|&&v| v == 1).count()).collect()
    };
    let is_min_one = |x: usize| ones_per_block(x).iter().all(|&c| c == 1);
    let mut g = DenseMatrix::zeros(size, size);
    for y in (0..size).filter(|&y| is_min_one(y)) {
        for x in 0..size {
            let d: Vec<usize> = (0..spec.arity()).filter(|&i| differs(spec, x, y, i)).collect();
            if d.len() == 1 && spec.input(y)[d[0]] == 1 {
                g[(x, y)] = 1.0;
                g[(y, x)] = 1.0;
            }
        }
    }
    g
}

/// The uniform distribution for the all-zero input and the first set bit
/// for the others: an upper certificate of √n for or(n).
pub fn or_scheme(spec: &FunctionSpec) -> Vec<Vec<f64>> {
    let n = spec.arity();
    (0..spec.size())
        .map(|x| match spec.input(x).iter().position(|&b| b == 1) {
            None => vec![1.0 / n as f64; n],
            Some(k) => (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect(),
        })
        .collect()
}

pub fn uniform_scheme(spec: &FunctionSpec) -> Vec<Vec<f64>> {
    let n = spec.arity();
    vec![vec![1.0 / n as f64; n]; spec.size()]
}

/// Random symmetric non-negative matrix with density `fill`.
pub fn random_symmetric(rng: &mut impl Rng, size: usize, fill: f64) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(size, size);
    for a in 0..size {
        for b in a..size {
            if rng.gen::<f64>() < fill {
                let v = rng.gen_range(0.01..1.0);
                m[(a, b)] = v;
                m[(b, a)] = v;
            }
        }
    }
    m
}

/// Random total function over `{0,1}ⁿ` with output alphabet `h`.
pub fn random_total(rng: &mut impl Rng, n: usize, h: u32) -> FunctionSpec {
    loop {
        let entries = (0..1usize << n)
            .map(|k| advbound::function_model::Entry {
                input: (0..n).map(|i| ((k >> (n - 1 - i)) & 1) as u32).collect(),
                output: rng.gen_range(0..h),
            })
            .collect();
        let spec = FunctionSpec::new(None, n, 2, h, entries).unwrap();
        if !spec.is_constant() {
            return spec;
        }
    }
}

/// Random partial function: a random subset of `{0,..,g-1}ⁿ`.
pub fn random_partial(rng: &mut impl Rng, n: usize, g: u32, h: u32, keep: f64) -> FunctionSpec {
    loop {
        let total = (g as usize).pow(n as u32);
        let mut entries = Vec::new();
        for k in 0..total {
            if rng.gen::<f64>() >= keep {
                continue;
            }
            let mut input = vec![0u32; n];
            let mut r = k;
            for i in (0..n).rev() {
                input[i] = (r % g as usize) as u32;
                r /= g as usize;
            }
            entries.push(advbound::function_model::Entry { input, output: rng.gen_range(0..h) });
        }
        if entries.len() < 2 {
            continue;
        }
        let spec = FunctionSpec::new(None, n, g, h, entries).unwrap();
        if !spec.is_constant() {
            return spec;
        }
    }
}

pub fn scheme_matrix(p: &[Vec<f64>]) -> DenseMatrix {
    DenseMatrix::from_rows(p).unwrap()
}
