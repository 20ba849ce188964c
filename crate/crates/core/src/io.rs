//! JSON file formats.
//!
//! * Matrix: `{"rows": r, "cols": c, "data": [[re, im], ...]}`, row-major.
//! * Bipartite operator: a matrix plus `"dims": [dA, dB, dA', dB']`.
//! * Grid function: `{"N": n, "values": [[re, im], ...]}`, row-major in `α`.
//! * Line function: `{"N": n, "values": [...]}`.
//! * Decomposition: `{"coefficients": [...], "left": [matrix...], "right": [matrix...]}`.
//!
//! Parse errors carry the line and column of the offending token.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

/// Parses JSON text into `T`, validating through `T`'s own invariants.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    from_json(&text).map_err(|e| match e {
        Error::Parse(p) => Error::Io { path: path.display().to_string(), message: format!("parse error: {p}") },
        other => other,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json(value)? + "\n").map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biunimodular::{gaussian, LineFunction};
    use crate::schmidt::{schmidt_decompose, swap, BipartiteOperator, SchmidtDecomposition};
    use crate::weyl::GridFunction;

    #[test]
    fn operator_round_trip() {
        let op = swap(2).unwrap();
        let text = to_json(&op).unwrap();
        assert_eq!(from_json::<BipartiteOperator>(&text).unwrap(), op);
    }

    #[test]
    fn parse_error_has_line_context() {
        let text = "{\n  \"rows\": 1,\n  \"cols\": 1,\n  \"data\": [[1, 0],]\n}";
        let err = from_json::<crate::ComplexMatrix>(text).unwrap_err().to_string();
        assert!(err.contains("line 4"), "{err}");
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let text = r#"{"dims": [2, 2, 2, 2], "rows": 1, "cols": 1, "data": [[1, 0]]}"#;
        let err = from_json::<BipartiteOperator>(text).unwrap_err().to_string();
        assert!(err.contains("dims"), "{err}");
    }

    #[test]
    fn function_formats() {
        let g: GridFunction = from_json(r#"{"N": 1, "values": [[0, 1]]}"#).unwrap();
        assert_eq!(g.n(), 1);
        let f = gaussian(5, 1, 0).unwrap();
        assert_eq!(from_json::<LineFunction>(&to_json(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn decomposition_format() {
        let d: SchmidtDecomposition = schmidt_decompose(&swap(2).unwrap(), 1e-9).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&d).unwrap()).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["coefficients", "left", "right"]);
    }

    #[test]
    fn file_round_trip_and_missing_file() {
        let dir = std::env::temp_dir().join(format!("opschmidt-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("op.json");
        write_json(&path, &swap(3).unwrap()).unwrap();
        assert_eq!(read_json::<BipartiteOperator>(&path).unwrap(), swap(3).unwrap());
        fs::write(&path, "{ nope").unwrap();
        let err = read_json::<BipartiteOperator>(&path).unwrap_err().to_string();
        assert!(err.contains("op.json") && err.contains("line 1"), "{err}");
        assert!(matches!(read_json::<BipartiteOperator>(dir.join("missing.json")), Err(Error::Io { .. })));
        fs::remove_dir_all(&dir).unwrap();
    }
}
