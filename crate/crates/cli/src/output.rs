use dstrength::linalg::CMatrix;
use serde_json::Value;

const SIGNIFICANT: usize = 12;

pub fn round(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT - 1, x).parse().expect("float formatting round-trips")
}

/// Rounds every number in `v` to 12 significant digits.
pub fn rounded(v: &Value) -> Value {
    match v {
        Value::Number(n) => match (n.is_f64(), n.as_f64()) {
            (true, Some(x)) => serde_json::Number::from_f64(round(x)).map_or(Value::Null, Value::Number),
            _ => v.clone(),
        },
        Value::Array(a) => Value::Array(a.iter().map(rounded).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, x)| (k.clone(), rounded(x))).collect()),
        _ => v.clone(),
    }
}

pub fn fmt(x: f64) -> String {
    round(x).to_string()
}

/// Row-major `[re, im]` pairs.
pub fn matrix(m: &CMatrix) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    serde_json::to_value(rows).expect("finite entries")
}

pub fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(&rounded(v)).expect("json values serialize"));
}
