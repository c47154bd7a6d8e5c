//! Finite partial functions `f: S → H` with `S ⊆ Gⁿ`, given as explicit
//! tables, together with their difference matrices and certificates.
//!
//! Letters are integers `0..g` (inputs) and `0..h` (outputs). The order of the
//! entries fixes the index of every input in all matrices built from a spec.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::DenseMatrix;

/// Default cap on the number of table rows.
pub const DEFAULT_MAX_ROWS: usize = 1 << 16;

/// Largest arity accepted by the exhaustive certificate search.
pub const MAX_CERTIFICATE_ARITY: usize = 20;

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionError {
    #[error("malformed function document: {0}")]
    Malformed(String),
    #[error("entry {index}: input has length {found}, expected n = {expected}")]
    LengthMismatch { index: usize, expected: usize, found: usize },
    #[error("entry {index}: input letter {letter:?} is out of range for g = {g}")]
    InputLetterOutOfRange { index: usize, letter: String, g: u32 },
    #[error("entry {index}: output {output} is out of range for h = {h}")]
    OutputOutOfRange { index: usize, output: u64, h: u32 },
    #[error("entry {index}: duplicate input (first seen at entry {first})")]
    DuplicateInput { index: usize, first: usize },
    #[error("invalid alphabet sizes: {0}")]
    Alphabet(String),
    #[error("table has {rows} rows, above the limit of {limit}")]
    TooLarge { rows: usize, limit: usize },
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),
    #[error("bad parameters for builtin {name}: {reason}")]
    BadParams { name: String, reason: String },
    #[error("arity {n} exceeds the certificate search cap of {MAX_CERTIFICATE_ARITY}")]
    ArityTooLarge { n: usize },
}

/// One row of a function table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Entry {
    pub input: Vec<u32>,
    pub output: u32,
}

/// A partial function given by its table. Immutable once validated.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    name: Option<String>,
    n: usize,
    g: u32,
    h: u32,
    entries: Vec<Entry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryDoc {
    x: String,
    f: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct FunctionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    n: usize,
    g: u32,
    h: u32,
    entries: Vec<EntryDoc>,
}

impl FunctionSpec {
    /// Validates and builds a spec with the default row cap.
    pub fn new(name: Option<String>, n: usize, g: u32, h: u32, entries: Vec<Entry>) -> Result<Self, FunctionError> {
        Self::with_limit(name, n, g, h, entries, DEFAULT_MAX_ROWS)
    }

    pub fn with_limit(
        name: Option<String>,
        n: usize,
        g: u32,
        h: u32,
        entries: Vec<Entry>,
        max_rows: usize,
    ) -> Result<Self, FunctionError> {
        if g == 0 || h == 0 {
            return Err(FunctionError::Alphabet(format!("g = {g}, h = {h}; both must be positive")));
        }
        if entries.len() > max_rows {
            return Err(FunctionError::TooLarge { rows: entries.len(), limit: max_rows });
        }
        let mut seen: HashMap<&[u32], usize> = HashMap::with_capacity(entries.len());
        for (index, e) in entries.iter().enumerate() {
            if e.input.len() != n {
                return Err(FunctionError::LengthMismatch { index, expected: n, found: e.input.len() });
            }
            if let Some(&bad) = e.input.iter().find(|&&l| l >= g) {
                return Err(FunctionError::InputLetterOutOfRange { index, letter: bad.to_string(), g });
            }
            if e.output >= h {
                return Err(FunctionError::OutputOutOfRange { index, output: e.output.into(), h });
            }
            if let Some(&first) = seen.get(e.input.as_slice()) {
                return Err(FunctionError::DuplicateInput { index, first });
            }
            seen.insert(&e.input, index);
        }
        Ok(Self { name, n, g, h, entries })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn input_alphabet(&self) -> u32 {
        self.g
    }

    pub fn output_alphabet(&self) -> u32 {
        self.h
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// `|S|`.
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn input(&self, x: usize) -> &[u32] {
        &self.entries[x].input
    }

    pub fn output(&self, x: usize) -> u32 {
        self.entries[x].output
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().map(|e| e.output).all_equal()
    }

    /// `S = Gⁿ`.
    pub fn is_total(&self) -> bool {
        u32::try_from(self.n)
            .ok()
            .and_then(|n| (self.g as usize).checked_pow(n))
            .is_some_and(|full| full == self.entries.len())
    }

    pub fn is_boolean_output(&self) -> bool {
        self.h == 2
    }

    /// Positions where inputs `x` and `y` differ.
    pub fn differing_positions(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        let (a, b) = (self.input(x), self.input(y));
        (0..self.n).filter(move |&i| a[i] != b[i])
    }

    /// Input word rendered with base-36 digits.
    pub fn word(&self, x: usize) -> String {
        self.input(x).iter().map(|&l| letter_char(l)).collect()
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        let letters = parse_word(word)?;
        self.entries.iter().position(|e| e.input == letters)
    }

    /// JSON document in the function schema. Requires `g ≤ 36`.
    pub fn to_json(&self) -> Result<String, FunctionError> {
        if self.g > 36 {
            return Err(FunctionError::Alphabet(format!("g = {} cannot be written with base-36 digits", self.g)));
        }
        let doc = FunctionDoc {
            name: self.name.clone(),
            n: self.n,
            g: self.g,
            h: self.h,
            entries: (0..self.size()).map(|x| EntryDoc { x: self.word(x), f: self.output(x).into() }).collect(),
        };
        serde_json::to_string_pretty(&doc).map_err(|e| FunctionError::Malformed(e.to_string()))
    }
}

fn letter_char(l: u32) -> char {
    DIGITS[l as usize] as char
}

fn parse_word(word: &str) -> Option<Vec<u32>> {
    word.chars()
        .map(|c| c.to_digit(36))
        .collect::<Option<Vec<_>>>()
}

/// Parses a function document with the default row cap.
pub fn load_function(bytes: &[u8]) -> Result<FunctionSpec, FunctionError> {
    load_function_with_limit(bytes, DEFAULT_MAX_ROWS)
}

pub fn load_function_with_limit(bytes: &[u8], max_rows: usize) -> Result<FunctionSpec, FunctionError> {
    let doc: FunctionDoc = serde_json::from_slice(bytes).map_err(|e| FunctionError::Malformed(e.to_string()))?;
    if doc.g == 0 || doc.g > 36 {
        return Err(FunctionError::Alphabet(format!("g = {} must lie in 1..=36", doc.g)));
    }
    if doc.h == 0 {
        return Err(FunctionError::Alphabet("h must be positive".into()));
    }
    if doc.entries.len() > max_rows {
        return Err(FunctionError::TooLarge { rows: doc.entries.len(), limit: max_rows });
    }
    let mut entries = Vec::with_capacity(doc.entries.len());
    for (index, e) in doc.entries.into_iter().enumerate() {
        let found = e.x.chars().count();
        if found != doc.n {
            return Err(FunctionError::LengthMismatch { index, expected: doc.n, found });
        }
        let mut input = Vec::with_capacity(found);
        for c in e.x.chars() {
            match c.to_digit(36) {
                Some(l) if l < doc.g && !c.is_ascii_uppercase() => input.push(l),
                _ => return Err(FunctionError::InputLetterOutOfRange { index, letter: c.to_string(), g: doc.g }),
            }
        }
        let output = match u32::try_from(e.f) {
            Ok(o) if o < doc.h => o,
            _ => return Err(FunctionError::OutputOutOfRange { index, output: e.f, h: doc.h }),
        };
        entries.push(Entry { input, output });
    }
    FunctionSpec::with_limit(doc.name, doc.n, doc.g, doc.h, entries, max_rows)
}

/// Table of a Boolean function on all of `{0,1}ⁿ`, inputs in lexicographic order.
fn total_binary(name: String, n: usize, h: u32, max_rows: usize, f: impl Fn(&[u32]) -> u32) -> Result<FunctionSpec, FunctionError> {
    let rows = u32::try_from(n).ok().and_then(|n| 1usize.checked_shl(n)).unwrap_or(usize::MAX);
    if rows > max_rows {
        return Err(FunctionError::TooLarge { rows, limit: max_rows });
    }
    let entries = (0..rows)
        .map(|k| {
            let input: Vec<u32> = (0..n).map(|i| ((k >> (n - 1 - i)) & 1) as u32).collect();
            let output = f(&input);
            Entry { input, output }
        })
        .collect();
    FunctionSpec::with_limit(Some(name), n, 2, h, entries, max_rows)
}

fn total_boolean(name: String, n: usize, max_rows: usize, f: impl Fn(&[u32]) -> u32) -> Result<FunctionSpec, FunctionError> {
    total_binary(name, n, 2, max_rows, f)
}

/// Builtin functions with the default row cap; see [`builtin_with_limit`].
pub fn builtin(name: &str, params: &[usize]) -> Result<FunctionSpec, FunctionError> {
    builtin_with_limit(name, params, DEFAULT_MAX_ROWS)
}

/// Builtins: `or(n)`, `and(n)`, `parity(n)`, `two_level_and_or(a, b)` (an And
/// of `a` Ors of `b` bits each) and `identity(n)` (the map `x ↦ x` with output
/// letter the binary value of `x`, `h = 2ⁿ`).
pub fn builtin_with_limit(name: &str, params: &[usize], max_rows: usize) -> Result<FunctionSpec, FunctionError> {
    let bad = |reason: &str| FunctionError::BadParams { name: name.to_string(), reason: reason.to_string() };
    let single = || match params {
        [n] if *n >= 1 => Ok(*n),
        _ => Err(bad("expected one size parameter n ≥ 1")),
    };
    match name {
        "or" => {
            let n = single()?;
            total_boolean(format!("or({n})"), n, max_rows, |x| u32::from(x.contains(&1)))
        }
        "and" => {
            let n = single()?;
            total_boolean(format!("and({n})"), n, max_rows, |x| u32::from(x.iter().all(|&b| b == 1)))
        }
        "parity" => {
            let n = single()?;
            total_boolean(format!("parity({n})"), n, max_rows, |x| x.iter().sum::<u32>() % 2)
        }
        "two_level_and_or" => {
            let (a, b) = match params {
                [a, b] if *a >= 1 && *b >= 1 => (*a, *b),
                _ => return Err(bad("expected two parameters a, b ≥ 1")),
            };
            let n = a.checked_mul(b).ok_or_else(|| bad("a·b overflows"))?;
            total_boolean(format!("two_level_and_or({a},{b})"), n, max_rows, |x| {
                u32::from(x.chunks(b).all(|block| block.contains(&1)))
            })
        }
        "identity" => {
            let n = single()?;
            if n > 31 {
                return Err(bad("identity needs n ≤ 31"));
            }
            total_binary(format!("identity({n})"), n, 1 << n, max_rows, |x| x.iter().fold(0, |acc, &b| (acc << 1) | b))
        }
        other => Err(FunctionError::UnknownBuiltin(other.to_string())),
    }
}

/// `D_i[x,y] = 1` iff `x_i ≠ y_i`; `F[x,y] = 1` iff `f(x) ≠ f(y)`.
#[derive(Debug, Clone)]
pub struct DifferenceMatrices {
    pub d: Vec<DenseMatrix>,
    pub f_mat: DenseMatrix,
}

impl DifferenceMatrices {
    /// `|S|`.
    pub fn size(&self) -> usize {
        self.f_mat.rows()
    }

    /// `n`.
    pub fn arity(&self) -> usize {
        self.d.len()
    }

    pub fn is_constant(&self) -> bool {
        self.f_mat.is_zero()
    }

    pub fn outputs_differ(&self, x: usize, y: usize) -> bool {
        self.f_mat[(x, y)] != 0.0
    }

    pub fn differs_at(&self, i: usize, x: usize, y: usize) -> bool {
        self.d[i][(x, y)] != 0.0
    }

    /// Pairs `x < y` with `F[x,y] = 1`.
    pub fn split_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        (0..n)
            .flat_map(|x| ((x + 1)..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.outputs_differ(x, y))
            .collect()
    }
}

pub fn build_difference_matrices(spec: &FunctionSpec) -> DifferenceMatrices {
    let size = spec.size();
    let mut d = vec![DenseMatrix::zeros(size, size); spec.arity()];
    let mut f_mat = DenseMatrix::zeros(size, size);
    for x in 0..size {
        for y in 0..size {
            if spec.output(x) != spec.output(y) {
                f_mat[(x, y)] = 1.0;
            }
            for i in spec.differing_positions(x, y) {
                d[i][(x, y)] = 1.0;
            }
        }
    }
    DifferenceMatrices { d, f_mat }
}

/// Minimal certificates and per-letter certificate complexities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateProfile {
    /// `Cert(x)` for every input, as ascending 0-based positions.
    pub certificates: Vec<Vec<usize>>,
    /// `C_h(f)` per output letter; 0 for letters without inputs.
    pub complexity: Vec<usize>,
    /// Output letters sorted by non-increasing complexity, ties by letter.
    pub order: Vec<u32>,
}

impl CertificateProfile {
    /// Largest certificate complexity (the `C₀` of the sorted order).
    pub fn c0(&self) -> usize {
        self.order.first().map_or(0, |&h| self.complexity[h as usize])
    }

    /// Second largest certificate complexity (the `C₁` of the sorted order).
    pub fn c1(&self) -> usize {
        self.order.get(1).map_or(0, |&h| self.complexity[h as usize])
    }
}

/// `Cert(x)` for every `x`: the lexicographically smallest certificate of
/// minimum size. Subsets are scanned in (size, lexicographic) order; for each
/// subset `I` the inputs are grouped by `x|_I`, and `I` certifies every input
/// whose group is constant on `f`.
pub fn certificate_profile(spec: &FunctionSpec) -> Result<CertificateProfile, FunctionError> {
    let n = spec.arity();
    if n > MAX_CERTIFICATE_ARITY {
        return Err(FunctionError::ArityTooLarge { n });
    }
    let size = spec.size();
    let mut certificates: Vec<Option<Vec<usize>>> = vec![None; size];
    let mut remaining = size;
    'search: for k in 0..=n {
        for subset in (0..n).combinations(k) {
            // group key -> (output, pure)
            let mut groups: HashMap<Vec<u32>, (u32, bool)> = HashMap::new();
            for x in 0..size {
                let key: Vec<u32> = subset.iter().map(|&i| spec.input(x)[i]).collect();
                let out = spec.output(x);
                groups
                    .entry(key)
                    .and_modify(|(o, pure)| *pure &= *o == out)
                    .or_insert((out, true));
            }
            for (x, cert) in certificates.iter_mut().enumerate() {
                if cert.is_some() {
                    continue;
                }
                let key: Vec<u32> = subset.iter().map(|&i| spec.input(x)[i]).collect();
                if groups[&key].1 {
                    *cert = Some(subset.clone());
                    remaining -= 1;
                }
            }
            if remaining == 0 {
                break 'search;
            }
        }
    }
    let certificates: Vec<Vec<usize>> = certificates
        .into_iter()
        .map(|c| c.expect("the full index set is always a certificate"))
        .collect();
    let mut complexity = vec![0usize; spec.output_alphabet() as usize];
    for (x, cert) in certificates.iter().enumerate() {
        let h = spec.output(x) as usize;
        complexity[h] = complexity[h].max(cert.len());
    }
    let mut order: Vec<u32> = (0..spec.output_alphabet()).collect();
    order.sort_by(|&a, &b| complexity[b as usize].cmp(&complexity[a as usize]).then(a.cmp(&b)));
    Ok(CertificateProfile { certificates, complexity, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(entries: &str) -> String {
        format!(r#"{{"n":2,"g":2,"h":2,"entries":[{entries}]}}"#)
    }

    #[test]
    fn loads_identity_on_one_bit() {
        let spec = load_function(br#"{"n":1,"g":2,"h":2,"entries":[{"x":"0","f":0},{"x":"1","f":1}]}"#).unwrap();
        assert_eq!(spec.size(), 2);
        assert_eq!(spec.output(1), 1);
        assert!(spec.is_total());
    }

    #[test]
    fn loads_or2() {
        let spec = load_function(
            doc(r#"{"x":"00","f":0},{"x":"01","f":1},{"x":"10","f":1},{"x":"11","f":1}"#).as_bytes(),
        )
        .unwrap();
        assert_eq!(spec.size(), 4);
        assert_eq!(spec, builtin("or", &[2]).unwrap().with_name_opt(None));
    }

    impl FunctionSpec {
        fn with_name_opt(mut self, name: Option<String>) -> Self {
            self.name = name;
            self
        }
    }

    #[test]
    fn load_errors_name_the_entry() {
        let dup = load_function(doc(r#"{"x":"00","f":0},{"x":"00","f":1}"#).as_bytes());
        assert_eq!(dup, Err(FunctionError::DuplicateInput { index: 1, first: 0 }));
        let len = load_function(doc(r#"{"x":"00","f":0},{"x":"0","f":1}"#).as_bytes());
        assert_eq!(len, Err(FunctionError::LengthMismatch { index: 1, expected: 2, found: 1 }));
        let letter = load_function(doc(r#"{"x":"02","f":0}"#).as_bytes());
        assert!(matches!(letter, Err(FunctionError::InputLetterOutOfRange { index: 0, .. })));
        let out = load_function(doc(r#"{"x":"01","f":0},{"x":"11","f":2}"#).as_bytes());
        assert!(matches!(out, Err(FunctionError::OutputOutOfRange { index: 1, output: 2, h: 2 })));
        assert!(matches!(load_function(b"{\"n\":1"), Err(FunctionError::Malformed(_))));
    }

    #[test]
    fn load_respects_row_limit() {
        let spec = builtin("or", &[3]).unwrap();
        let json = spec.to_json().unwrap();
        assert!(matches!(load_function_with_limit(json.as_bytes(), 4), Err(FunctionError::TooLarge { rows: 8, limit: 4 })));
    }

    #[test]
    fn builtin_tables() {
        let or2 = builtin("or", &[2]).unwrap();
        let outs: Vec<u32> = (0..4).map(|x| or2.output(x)).collect();
        assert_eq!(outs, vec![0, 1, 1, 1]);
        let p3 = builtin("parity", &[3]).unwrap();
        for x in 0..8 {
            let w = p3.input(x);
            assert_eq!(p3.output(x), w[0] ^ w[1] ^ w[2]);
        }
        let t = builtin("two_level_and_or", &[2, 2]).unwrap();
        assert_eq!(t.arity(), 4);
        for x in 0..16 {
            let w = t.input(x);
            assert_eq!(t.output(x), u32::from((w[0] | w[1]) & (w[2] | w[3]) == 1));
        }
        let id = builtin("identity", &[2]).unwrap();
        assert_eq!(id.output_alphabet(), 4);
        assert_eq!(id.output(2), 2);
        assert!(matches!(builtin("nope", &[1]), Err(FunctionError::UnknownBuiltin(_))));
        assert!(matches!(builtin("or", &[17]), Err(FunctionError::TooLarge { .. })));
        assert!(matches!(builtin("or", &[]), Err(FunctionError::BadParams { .. })));
    }

    #[test]
    fn difference_matrices_identity() {
        let spec = builtin("identity", &[1]).unwrap();
        let dm = build_difference_matrices(&spec);
        let swap = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(dm.d[0], swap);
        assert_eq!(dm.f_mat, swap);
    }

    #[test]
    fn difference_matrices_or2() {
        let spec = builtin("or", &[2]).unwrap();
        let dm = build_difference_matrices(&spec);
        assert_eq!(dm.f_mat.row(0), &[0.0, 1.0, 1.0, 1.0]);
        for x in 1..4 {
            for y in 1..4 {
                assert_eq!(dm.f_mat[(x, y)], 0.0);
            }
        }
        let (s00, s01, s10) = (spec.index_of("00").unwrap(), spec.index_of("01").unwrap(), spec.index_of("10").unwrap());
        assert_eq!(dm.d[0][(s00, s10)], 1.0);
        assert_eq!(dm.d[0][(s00, s01)], 0.0);
        assert_eq!(dm.split_pairs(), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn certificates_or2() {
        let spec = builtin("or", &[2]).unwrap();
        let p = certificate_profile(&spec).unwrap();
        assert_eq!(p.certificates, vec![vec![0, 1], vec![1], vec![0], vec![0]]);
        assert_eq!(p.complexity, vec![2, 1]);
        assert_eq!((p.c0(), p.c1()), (2, 1));
        assert_eq!(p.order, vec![0, 1]);
    }

    #[test]
    fn certificates_parity_and_constant() {
        let p = certificate_profile(&builtin("parity", &[3]).unwrap()).unwrap();
        assert_eq!((p.c0(), p.c1()), (3, 3));
        let constant = FunctionSpec::new(
            None,
            2,
            2,
            2,
            (0..4).map(|k| Entry { input: vec![k >> 1, k & 1], output: 0 }).collect(),
        )
        .unwrap();
        let p = certificate_profile(&constant).unwrap();
        assert!(p.certificates.iter().all(Vec::is_empty));
        assert_eq!(p.c0(), 0);
        assert!(constant.is_constant());
        assert!(build_difference_matrices(&constant).is_constant());
    }

    #[test]
    fn order_sorts_by_complexity() {
        // and(2): C_0 = 1, C_1 = 2, so letter 1 comes first.
        let p = certificate_profile(&builtin("and", &[2]).unwrap()).unwrap();
        assert_eq!(p.order, vec![1, 0]);
        assert_eq!((p.c0(), p.c1()), (2, 1));
    }
}
