//! JSON shapes: words as arrays of letter strings, coefficients as exact
//! rational strings.

use serde_json::{json, Value};

use jtrace::letters::Letter;
use jtrace::trbar::{ObstructionValue, ReduceMode};
use jtrace::{BClass, CyclicClass};

fn word(w: &[Letter]) -> Value {
    Value::Array(w.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn cyclic(c: &CyclicClass) -> Value {
    Value::Array(
        c.terms()
            .iter()
            .map(|(w, x)| json!({"word": word(w), "coeff": x.to_string()}))
            .collect(),
    )
}

/// Mirror classes print the torsion keys, plus the free part only when present.
fn bclass(degree: usize, b: &BClass) -> Value {
    let mut out = json!({
        "degree": degree,
        "torsion": Value::Array(b.torsion.iter().map(|w| word(w)).collect()),
        "zero": b.is_zero(),
    });
    if !b.free.is_empty() {
        out["free"] = Value::Array(
            b.free.iter().map(|(w, x)| json!({"word": word(w), "coeff": x.to_string()})).collect(),
        );
    }
    out
}

pub fn obstruction(v: &ObstructionValue) -> Value {
    match (&v.mode, &v.mir) {
        (ReduceMode::Mir, Some(b)) => bclass(v.degree, b),
        _ => json!({
            "degree": v.degree,
            "mode": v.mode,
            "representative": cyclic(&v.representative),
            "zero": v.zero,
        }),
    }
}
