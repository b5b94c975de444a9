//! Number formatting for everything the CLI prints: 15 significant digits,
//! written in the shortest form that reads back to the same value.

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

pub fn round15(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        // also turns -0 into 0
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

pub fn num(x: f64) -> String {
    let r = round15(x);
    if r.is_finite() {
        serde_json::to_string(&r).unwrap_or_else(|_| r.to_string())
    } else {
        r.to_string()
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round15(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded, newline terminated.
pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::Failure(format!("cannot encode output: {e}")))?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Failure(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
