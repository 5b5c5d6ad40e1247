//! Text and JSON renderings shared by the subcommands.

use moral_core::rational::{self, Rational};
use moral_core::scm::{Endo, Signature, World};
use num_traits::One;
use serde_json::{json, Map, Value};

/// Significant digits in decimal renderings.
pub const DIGITS: usize = 20;

/// `4/5 (0.8)`, or just `3` for integers.
pub fn rat(r: &Rational) -> String {
    if r.denom().is_one() {
        rational::exact(r)
    } else {
        format!("{} ({})", rational::exact(r), rational::decimal(r, DIGITS))
    }
}

pub fn rat_json(r: &Rational) -> Value {
    json!({
        "exact": rational::exact(r),
        "decimal": rational::decimal(r, DIGITS),
    })
}

pub fn world_json(w: &World) -> Value {
    let mut m = Map::new();
    for (k, v) in w.assignments() {
        m.insert(k.to_string(), Value::String(v.to_string()));
    }
    Value::Object(m)
}

pub fn pairs_json(sig: &Signature, pairs: &[(Endo, usize)]) -> Value {
    let mut m = Map::new();
    for &(v, x) in pairs {
        m.insert(sig.name(v).to_string(), Value::String(sig.value_name(v, x).to_string()));
    }
    Value::Object(m)
}

/// `A <- 1, B <- 0`.
pub fn pairs_text(sig: &Signature, pairs: &[(Endo, usize)]) -> String {
    pairs
        .iter()
        .map(|&(v, x)| format!("{} <- {}", sig.name(v), sig.value_name(v, x)))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn var_names(sig: &Signature, vars: &[Endo]) -> Vec<String> {
    vars.iter().map(|&v| sig.name(v).to_string()).collect()
}

/// `{A, B}`.
pub fn var_set(sig: &Signature, vars: &[Endo]) -> String {
    format!("{{{}}}", var_names(sig, vars).join(", "))
}

/// Left-aligned columns separated by two spaces.
pub fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{:w$}", s, w = widths[c]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
