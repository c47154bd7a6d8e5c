//! Certificate complexities and the three limitation ceilings, with the
//! value each explicit probability scheme achieves.

use advbound::adversary::{limitation_bounds, limitation_scheme, LimitationMode};
use advbound::{build_difference_matrices, builtin, certificate_profile, eval_minimax};

fn main() {
    for (name, params) in [("or", &[4][..]), ("and", &[3]), ("parity", &[3]), ("two_level_and_or", &[2, 3])] {
        let spec = builtin(name, params).unwrap();
        let dm = build_difference_matrices(&spec);
        let profile = certificate_profile(&spec).unwrap();
        println!("{}: C per letter {:?}, C0 = {}, C1 = {}", spec.name().unwrap(), profile.complexity, profile.c0(), profile.c1());
        for limit in limitation_bounds(&profile, spec.arity(), spec.is_total(), spec.is_boolean_output()) {
            println!("  {:<14} {:.6}", limit.label, limit.value);
        }
        for mode in [LimitationMode::Partial, LimitationMode::BooleanPartial, LimitationMode::Total] {
            let scheme = limitation_scheme(&spec, &profile, mode).unwrap();
            println!("  scheme {:<16} {:.6}", format!("{mode:?}"), eval_minimax(&scheme, &dm).unwrap());
        }
    }
}
