//! Loads a partial function over a ternary alphabet from a JSON document and
//! reports its adversary value. Pass a path to load your own document.

use advbound::{compute_report, load_function};

const DOC: &str = r#"{
  "name": "ternary-majority-fragment",
  "n": 3, "g": 3, "h": 2,
  "entries": [
    {"x": "000", "f": 0}, {"x": "001", "f": 0}, {"x": "010", "f": 0}, {"x": "100", "f": 0},
    {"x": "111", "f": 1}, {"x": "112", "f": 1}, {"x": "121", "f": 1}, {"x": "211", "f": 1},
    {"x": "222", "f": 1}
  ]
}"#;

fn main() {
    let bytes = match std::env::args().nth(1) {
        Some(path) => std::fs::read(path).expect("readable file"),
        None => DOC.as_bytes().to_vec(),
    };
    let spec = load_function(&bytes).expect("valid function document");
    let report = compute_report(&spec, 0.1, 1e-7).expect("report");
    println!("{}: |S| = {}, n = {}", spec.name().unwrap_or("unnamed"), spec.size(), spec.arity());
    for (name, v) in report.values.as_array() {
        println!("  {name:<4} {v:.9}");
    }
    println!("  certified in [{:.9}, {:.9}]", report.lower(), report.upper());
    println!("  bounded-error queries at eps = 0.1: at least {:.6}", report.query_lower_bound);
}
