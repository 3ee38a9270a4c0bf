//! Reading lattices, scaled matrices and rational matrices from JSON.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use evenlat::roots::{build, RootLatticeSpec};
use evenlat::{EvenLattice, Matrix, QMatrix};

use crate::CliError;

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: malformed JSON: {e}", path.display())))
}

fn integer(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integral number")),
        Value::String(s) => s.trim().parse().map_err(|_| CliError::Input(format!("not an integer: {s:?}"))),
        other => Err(CliError::Input(format!("not an integer: {other}"))),
    }
}

fn rational(v: &Value) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            let parsed = match s.split_once('/') {
                Some((p, q)) => p.trim().parse::<BigInt>().ok().zip(q.trim().parse::<BigInt>().ok()),
                None => s.parse::<BigInt>().ok().map(|p| (p, BigInt::from(1))),
            };
            match parsed {
                Some((_, q)) if q == BigInt::from(0) => Err(CliError::Input(format!("zero denominator in {s:?}"))),
                Some((p, q)) => Ok(BigRational::new(p, q)),
                None => Err(CliError::Input(format!("not a rational: {s:?}"))),
            }
        }
        other => integer(other).map(BigRational::from_integer),
    }
}

fn rows<T>(v: &Value, what: &str, entry: impl Fn(&Value) -> Result<T, CliError>) -> Result<(usize, usize, Vec<T>), CliError> {
    let outer = v.as_array().ok_or_else(|| CliError::Input(format!("{what} must be an array of rows")))?;
    let mut data = Vec::new();
    let mut width = None;
    for row in outer {
        let row = row.as_array().ok_or_else(|| CliError::Input(format!("{what}: each row must be an array")))?;
        if *width.get_or_insert(row.len()) != row.len() {
            return Err(CliError::Input(format!("{what}: rows have different lengths")));
        }
        for x in row {
            data.push(entry(x)?);
        }
    }
    Ok((outer.len(), width.unwrap_or(0), data))
}

pub fn integer_matrix(v: &Value, what: &str) -> Result<Matrix, CliError> {
    let (r, c, data) = rows(v, what, integer)?;
    Matrix::from_vec(r, c, data).map_err(CliError::from)
}

pub fn rational_matrix(v: &Value, what: &str) -> Result<QMatrix, CliError> {
    let (r, c, data) = rows(v, what, rational)?;
    QMatrix::from_vec(r, c, data).map_err(CliError::from)
}

/// A root lattice name such as `A2` or `5A1`, or a path to `{"gram": [[...]]}`.
pub fn lattice(arg: &str) -> Result<EvenLattice, CliError> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Ok(spec) = arg.parse::<RootLatticeSpec>() {
            return build(&spec).map_err(CliError::from);
        }
    }
    let v = read_json(path)?;
    let gram = v.get("gram").ok_or_else(|| CliError::Input(format!("{arg}: missing \"gram\"")))?;
    let l = EvenLattice::new(integer_matrix(gram, "gram")?)?;
    Ok(match v.get("name").and_then(Value::as_str) {
        Some(name) => l.with_name(name),
        None => l,
    })
}

/// `{"r": int, "R": [[...]]}`.
pub fn scaled(path: &Path) -> Result<(Matrix, BigInt), CliError> {
    let v = read_json(path)?;
    let r = integer(v.get("r").ok_or_else(|| CliError::Input("missing \"r\"".into()))?)?;
    let m = integer_matrix(v.get("R").ok_or_else(|| CliError::Input("missing \"R\"".into()))?, "R")?;
    Ok((m, r))
}

/// `{"matrix": [[int or "p/q", ...]]}`.
pub fn matrix(path: &Path) -> Result<QMatrix, CliError> {
    let v = read_json(path)?;
    rational_matrix(v.get("matrix").ok_or_else(|| CliError::Input("missing \"matrix\"".into()))?, "matrix")
}

pub fn int_list(s: &str) -> Result<Vec<BigInt>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| CliError::Input(format!("not an integer: {t:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parses_rational_entries() {
        let m = rational_matrix(&json!([[1, "-2/4"], ["7", 0]]), "m").unwrap();
        assert_eq!(m.row(0)[1], BigRational::new((-1).into(), 2.into()));
        assert!(rational_matrix(&json!([[1, "1/0"]]), "m").is_err());
        assert!(rational_matrix(&json!([[1, 2], [3]]), "m").is_err());
        assert!(integer_matrix(&json!([[1.5]]), "m").is_err());
    }

    #[test]
    fn names_and_lists() {
        assert_eq!(lattice("D8+").unwrap().discriminant(), &BigInt::from(1));
        assert_eq!(int_list("4, -1,0").unwrap(), vec![BigInt::from(4), BigInt::from(-1), BigInt::from(0)]);
        assert!(int_list("1,x").is_err());
    }
}
