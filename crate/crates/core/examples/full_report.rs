//! Solves every built-in family at a few sizes and prints the six
//! formulations side by side with the limitation ceilings.
//!
//! ```text
//! cargo run --release --example full_report
//! ```

use std::time::Instant;

use advbound::{builtin, compute_report};

fn main() {
    let cases: &[(&str, &[usize])] = &[
        ("identity", &[1]),
        ("or", &[2]),
        ("or", &[3]),
        ("or", &[4]),
        ("and", &[2]),
        ("parity", &[2]),
        ("parity", &[3]),
        ("two_level_and_or", &[2, 2]),
    ];
    println!(
        "{:<22} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>9} {:>7}",
        "function", "sa", "gsa", "smm", "mm", "wa", "swa", "sqrt(C0C1)", "gap", "secs"
    );
    for (name, params) in cases {
        let spec = builtin(name, params).expect("builtin");
        let start = Instant::now();
        let report = compute_report(&spec, 0.0, 1e-7).expect("report");
        let v = report.values;
        let ceiling = report.limits.iter().find(|l| l.label == "sqrt_c0_c1").map_or(f64::NAN, |l| l.value);
        println!(
            "{:<22} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>9.1e} {:>7.2}",
            spec.name().unwrap_or(name),
            v.sa,
            v.gsa,
            v.smm,
            v.mm,
            v.wa,
            v.swa,
            ceiling,
            report.duality_gap,
            start.elapsed().as_secs_f64()
        );
        if !report.consistent {
            println!("  spread {:.3e} exceeds the agreement tolerance", v.spread());
        }
    }
}
