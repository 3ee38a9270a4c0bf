//! JSON encoding of exact values and a plain-text table renderer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use evenlat::{Matrix, QMatrix};

/// Integers that fit in `i64` become numbers, larger ones strings.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn rat(x: &BigRational) -> Value {
    if x.is_integer() {
        int(&x.to_integer())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn rats(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| ints(r)).collect())
}

pub fn qmatrix(m: &QMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| rats(&m.row(i))).collect())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(true) => "yes".into(),
        Value::Bool(false) => "no".into(),
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn is_matrix(a: &[Value]) -> bool {
    !a.is_empty() && a.iter().all(|r| r.as_array().is_some_and(|r| r.iter().all(is_scalar)))
}

fn aligned(rows: &[Vec<String>], indent: usize, out: &mut String) {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    for r in rows {
        let cells: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:>w$}", w = widths[c])).collect();
        out.push_str(&" ".repeat(indent));
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
}

fn object(map: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for (k, v) in map {
        match v {
            Value::Object(inner) => {
                out.push_str(&format!("{pad}{k}:\n"));
                object(inner, indent + 2, out);
            }
            Value::Array(a) if is_matrix(a) => {
                out.push_str(&format!("{pad}{k}:\n"));
                let rows: Vec<Vec<String>> =
                    a.iter().map(|r| r.as_array().expect("matrix row").iter().map(scalar).collect()).collect();
                aligned(&rows, indent + 2, out);
            }
            Value::Array(a) if !a.is_empty() && a.iter().all(Value::is_object) => {
                out.push_str(&format!("{pad}{k}:\n"));
                let mut keys: Vec<&String> = Vec::new();
                for item in a {
                    for key in item.as_object().expect("object").keys() {
                        if !keys.contains(&key) {
                            keys.push(key);
                        }
                    }
                }
                let mut rows = vec![keys.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
                for item in a {
                    rows.push(keys.iter().map(|key| scalar(item.get(key.as_str()).unwrap_or(&Value::Null))).collect());
                }
                aligned(&rows, indent + 2, out);
            }
            other => out.push_str(&format!("{pad}{k}: {}\n", scalar(other))),
        }
    }
}

/// Renders a report object as indented text; matrices and lists of
/// records are laid out as aligned columns.
pub fn table(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(map) => object(map, 0, &mut out),
        other => {
            out.push_str(&scalar(other));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn big_integers_become_strings() {
        let big = BigInt::from(i64::MAX) + 1;
        assert_eq!(int(&big), Value::String("9223372036854775808".into()));
        assert_eq!(int(&BigInt::from(-3)), json!(-3));
        assert_eq!(rat(&BigRational::new(6.into(), 4.into())), json!("3/2"));
        assert_eq!(rat(&BigRational::new(6.into(), 3.into())), json!(2));
    }

    #[test]
    fn tables_align_columns() {
        let v = json!({ "m": [[1, -10], [100, 2]], "rows": [{ "a": 1, "b": true }, { "a": 22, "b": false }] });
        assert_eq!(table(&v), "m:\n    1  -10\n  100    2\nrows:\n   a    b\n   1  yes\n  22   no\n");
    }
}
